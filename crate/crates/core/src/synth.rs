//! Synthetic instances and fixtures shared by tests and benchmarks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::{CostVector, Dataset};
use crate::forest::{Ensemble, Tree, TreeNode};
use crate::trainer::{train_ensemble, TrainParams};

#[derive(Debug, Clone)]
pub struct SynthParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub n_examples: usize,
    pub n_features: usize,
    pub n_classes: usize,
    pub label_noise: f64,
    pub subsample: f64,
    pub unit_costs: bool,
}

impl SynthParams {
    pub fn small() -> Self {
        SynthParams {
            n_trees: 2,
            max_depth: 3,
            n_examples: 20,
            n_features: 4,
            n_classes: 2,
            label_noise: 0.15,
            subsample: 0.8,
            unit_costs: true,
        }
    }
}

/// A random dataset whose labels follow a noisy linear score over the
/// features, so greedy training finds non-trivial structure.
pub fn random_dataset(seed: u64, n: usize, k: usize, m: usize, noise: f64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut x = Vec::with_capacity(n * k);
    let mut scores = Vec::with_capacity(n);
    for _ in 0..n {
        let row: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1.0)).collect();
        scores.push(row.iter().zip(&weights).map(|(a, b)| a * b).sum::<f64>());
        x.extend(row);
    }
    // Class = quantile bucket of the score, with label noise on top.
    let mut sorted = scores.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let y: Vec<usize> = scores
        .iter()
        .map(|s| {
            let rank = sorted.partition_point(|v| v < s);
            let mut label = (rank * m / n).min(m - 1);
            if rng.gen_bool(noise) {
                label = rng.gen_range(0..m);
            }
            label
        })
        .collect();
    Dataset::from_parts(x, k, y, m).expect("generated dataset is well-formed")
}

/// A random (ensemble, dataset) pair: greedy-trained trees with statistics
/// computed on the full dataset. Deterministic given the seed.
pub fn random_instance(seed: u64, params: &SynthParams) -> (Ensemble, Dataset) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = random_dataset(
        rng.gen(),
        params.n_examples,
        params.n_features,
        params.n_classes,
        params.label_noise,
    );
    let costs = if params.unit_costs {
        CostVector::uniform(params.n_features)
    } else {
        CostVector { c: (0..params.n_features).map(|_| rng.gen_range(0.0..4.0)).collect() }
    };
    let train = TrainParams {
        max_depth: params.max_depth,
        min_leaf: 1,
        subsample_fraction: params.subsample,
        rng_seed: rng.gen(),
    };
    let ens = train_ensemble(&data, params.n_trees, costs, &train)
        .expect("training on a synthetic dataset succeeds");
    (ens, data)
}

fn leaf() -> TreeNode {
    TreeNode { feature: None, threshold: None, children: vec![], class_counts: vec![0, 0], pred: 0, err: 0 }
}

fn split(feature: usize, threshold: f64, children: Vec<usize>) -> TreeNode {
    TreeNode {
        feature: Some(feature),
        threshold: Some(threshold),
        children,
        class_counts: vec![0, 0],
        pred: 0,
        err: 0,
    }
}

/// The worked two-tree demo ensemble used across the test suite.
///
/// Tree 1 splits feature 0 at the root and feature 1 at its right child;
/// tree 2 splits feature 1 at the root, feature 0 on the left and feature 2
/// on the right. Three features, two classes, unit costs.
pub fn demo_ensemble() -> Ensemble {
    let tree1 = Tree::new(vec![
        split(0, 0.5, vec![1, 2]),
        leaf(),
        split(1, 0.9, vec![3, 4]),
        leaf(),
        leaf(),
    ])
    .unwrap();
    let tree2 = Tree::new(vec![
        split(1, 0.5, vec![1, 4]),
        split(0, 0.5, vec![2, 3]),
        leaf(),
        leaf(),
        split(2, 0.5, vec![5, 6]),
        leaf(),
        leaf(),
    ])
    .unwrap();
    Ensemble::new(vec![tree1, tree2], vec![1.0, 1.0, 1.0], 2).unwrap()
}

/// An example routed to node 3 of demo tree 1 and node 5 of demo tree 2.
pub fn demo_example() -> [f64; 3] {
    [0.9, 0.8, 0.1]
}

/// One-example dataset wrapping `demo_example`.
pub fn demo_dataset() -> Dataset {
    Dataset::from_parts(demo_example().to_vec(), 3, vec![0], 2).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::RoutingProfile;

    #[test]
    fn demo_routing_matches_construction() {
        let ens = demo_ensemble();
        let data = demo_dataset();
        let prof = RoutingProfile::compute(&ens, &data).unwrap();
        assert_eq!(prof.tree(0).paths[0], vec![0, 2, 3]);
        assert_eq!(prof.tree(1).paths[0], vec![0, 4, 5]);
    }

    #[test]
    fn random_instance_is_deterministic() {
        let p = SynthParams::small();
        let (a, _) = random_instance(3, &p);
        let (b, _) = random_instance(3, &p);
        assert_eq!(a, b);
    }
}
