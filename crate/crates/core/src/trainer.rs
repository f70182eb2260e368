//! A minimal greedy Gini tree trainer. It exists to generate desk-scale
//! ensembles for the pruner; the pruner itself accepts any ensemble of
//! decision trees as input.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::{CostVector, Dataset};
use crate::error::{Error, Result};
use crate::forest::{Ensemble, Tree, TreeNode};

#[derive(Debug, Clone)]
pub struct TrainParams {
    pub max_depth: usize,
    pub min_leaf: usize,
    pub subsample_fraction: f64,
    pub rng_seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams { max_depth: 4, min_leaf: 1, subsample_fraction: 1.0, rng_seed: 0 }
    }
}

fn gini(counts: &[u32], total: u32) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = f64::from(total);
    1.0 - counts.iter().map(|&c| (f64::from(c) / t).powi(2)).sum::<f64>()
}

struct Builder<'a> {
    data: &'a Dataset,
    params: &'a TrainParams,
    nodes: Vec<TreeNode>,
}

impl<'a> Builder<'a> {
    /// Grows the subtree for `indices` in preorder and returns nothing; nodes
    /// are appended to `self.nodes` as they are created.
    fn grow(&mut self, indices: &[usize], depth: usize) {
        let m = self.data.n_classes();
        let mut counts = vec![0u32; m];
        for &i in indices {
            counts[self.data.label(i)] += 1;
        }
        let total = indices.len() as u32;
        let n_nonzero = counts.iter().filter(|&&c| c > 0).count();

        let mut best: Option<(usize, f64, Vec<usize>, Vec<usize>)> = None;
        if depth < self.params.max_depth && n_nonzero > 1 && indices.len() >= 2 * self.params.min_leaf {
            let parent_impurity = gini(&counts, total);
            let mut best_gain = 0.0;
            for k in 0..self.data.n_features() {
                let mut order: Vec<usize> = indices.to_vec();
                // Sort by feature value with the example index as tie-break
                // so the scan order is deterministic.
                order.sort_unstable_by(|&a, &b| {
                    self.data.row(a)[k]
                        .partial_cmp(&self.data.row(b)[k])
                        .unwrap()
                        .then(a.cmp(&b))
                });
                let mut left = vec![0u32; m];
                for p in 1..order.len() {
                    left[self.data.label(order[p - 1])] += 1;
                    let lv = self.data.row(order[p - 1])[k];
                    let rv = self.data.row(order[p])[k];
                    if lv == rv {
                        continue;
                    }
                    if p < self.params.min_leaf || order.len() - p < self.params.min_leaf {
                        continue;
                    }
                    let right: Vec<u32> = counts.iter().zip(&left).map(|(&c, &l)| c - l).collect();
                    let pl = p as f64 / indices.len() as f64;
                    let gain = parent_impurity
                        - pl * gini(&left, p as u32)
                        - (1.0 - pl) * gini(&right, (order.len() - p) as u32);
                    if gain > best_gain {
                        best_gain = gain;
                        best = Some((k, (lv + rv) / 2.0, order[..p].to_vec(), order[p..].to_vec()));
                    }
                }
            }
        }

        match best {
            None => {
                self.nodes.push(TreeNode {
                    feature: None,
                    threshold: None,
                    children: vec![],
                    class_counts: vec![0; m],
                    pred: 0,
                    err: 0,
                });
            }
            Some((k, tau, left, right)) => {
                let my_idx = self.nodes.len();
                self.nodes.push(TreeNode {
                    feature: Some(k),
                    threshold: Some(tau),
                    children: vec![0, 0], // patched below
                    class_counts: vec![0; m],
                    pred: 0,
                    err: 0,
                });
                let left_id = self.nodes.len();
                self.grow(&left, depth + 1);
                let right_id = self.nodes.len();
                self.grow(&right, depth + 1);
                self.nodes[my_idx].children = vec![left_id, right_id];
            }
        }
    }
}

/// Trains a single tree with greedy Gini splits on a seeded subsample and
/// fills node statistics from the full dataset. Deterministic given the seed.
pub fn train_greedy_tree(data: &Dataset, params: &TrainParams) -> Result<Tree> {
    if params.min_leaf == 0 || params.min_leaf > data.n_examples() {
        return Err(Error::InvalidArgument(format!(
            "min_leaf must be in 1..={}, got {}",
            data.n_examples(),
            params.min_leaf
        )));
    }
    if !(params.subsample_fraction > 0.0 && params.subsample_fraction <= 1.0) {
        return Err(Error::InvalidArgument(
            "subsample_fraction must lie in (0, 1]".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let n = data.n_examples();
    let take = ((params.subsample_fraction * n as f64).ceil() as usize).clamp(1, n);
    let mut indices: Vec<usize> = (0..n).collect();
    indices.shuffle(&mut rng);
    indices.truncate(take);
    indices.sort_unstable();

    let mut builder = Builder { data, params, nodes: Vec::new() };
    builder.grow(&indices, 0);
    let tree = Tree::new(builder.nodes)?;
    tree.with_stats(data)
}

/// Trains `n_trees` trees with per-tree derived seeds and recomputes node
/// statistics on the full dataset.
pub fn train_ensemble(
    data: &Dataset,
    n_trees: usize,
    costs: CostVector,
    params: &TrainParams,
) -> Result<Ensemble> {
    if n_trees == 0 {
        return Err(Error::InvalidArgument("n_trees must be positive".into()));
    }
    if costs.c.len() != data.n_features() {
        return Err(Error::Mismatch(format!(
            "cost vector has {} entries, dataset has {} features",
            costs.c.len(),
            data.n_features()
        )));
    }
    let trees = (0..n_trees)
        .map(|t| {
            let params = TrainParams { rng_seed: params.rng_seed.wrapping_add(t as u64), ..params.clone() };
            train_greedy_tree(data, &params)
        })
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(trees, costs.c, data.n_classes())
}
