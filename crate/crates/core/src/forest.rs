//! Decision tree and ensemble data model: preorder-indexed trees, example
//! routing, per-node statistics and the root-to-leaf feature-use profiles the
//! pruning formulation is built from.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Node index inside a tree. Indices are a preorder numbering: every node's
/// id is smaller than all ids in its subtree and children subtree ranges are
/// contiguous and ordered. The row operations that turn the pruning
/// constraints into a network matrix rely on this.
pub type NodeId = usize;

/// A single tree node. `feature`/`threshold` are present iff the node is
/// internal (has children). Statistics (`class_counts`, `pred`, `err`) refer
/// to the training examples routed to or through the node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    /// Split feature, internal nodes only.
    pub feature: Option<usize>,
    /// Split threshold; an example goes to the first child iff x[feature] <= threshold.
    pub threshold: Option<f64>,
    /// Child node ids, empty iff leaf.
    pub children: Vec<NodeId>,
    /// Per-class example counts of the node's sample.
    pub class_counts: Vec<u32>,
    /// Majority-class prediction (lowest class index on ties; inherited from
    /// the parent when no example reaches the node).
    pub pred: usize,
    /// Number of misclassified examples at this node under `pred`.
    pub err: u32,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Total number of examples routed to or through this node.
    pub fn n_samples(&self) -> u32 {
        self.class_counts.iter().sum()
    }
}

/// A decision tree stored as a preorder array of nodes with the root at
/// index 0. Construction validates the preorder invariants once; all other
/// operations may rely on them.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<TreeNode>,
    parent: Vec<Option<NodeId>>,
}

impl Tree {
    /// Builds a tree from a preorder node array, rejecting structures that
    /// violate the invariants (non-contiguous children ranges, leaves with a
    /// feature, internal nodes without one, ...).
    pub fn new(nodes: Vec<TreeNode>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Schema("tree has no nodes".into()));
        }
        let n = nodes.len();
        let mut parent = vec![None; n];

        // Walk the preorder array recursively; `check(h)` returns the
        // exclusive end of h's subtree range.
        fn check(nodes: &[TreeNode], parent: &mut [Option<NodeId>], h: NodeId) -> Result<usize> {
            let node = &nodes[h];
            if node.is_leaf() {
                if node.feature.is_some() {
                    return Err(Error::Schema(format!("node {h}: leaf with a split feature")));
                }
                if node.threshold.is_some() {
                    return Err(Error::Schema(format!("node {h}: leaf with a threshold")));
                }
                return Ok(h + 1);
            }
            if node.feature.is_none() {
                return Err(Error::Schema(format!("node {h}: internal node without a split feature")));
            }
            if node.children.len() == 1 {
                return Err(Error::Schema(format!("node {h}: internal node with a single child")));
            }
            if node.children.len() == 2 && node.threshold.is_none() {
                return Err(Error::Schema(format!("node {h}: binary split without a threshold")));
            }
            let mut cursor = h + 1;
            for &c in &node.children {
                if c != cursor {
                    return Err(Error::Schema(format!(
                        "node {h}: child id {c} breaks the preorder numbering (expected {cursor})"
                    )));
                }
                if c >= nodes.len() {
                    return Err(Error::Schema(format!("node {h}: child id {c} out of range")));
                }
                parent[c] = Some(h);
                cursor = check(nodes, parent, c)?;
            }
            Ok(cursor)
        }

        let end = check(&nodes, &mut parent, 0)?;
        if end != n {
            return Err(Error::Schema(format!(
                "nodes {end}..{n} are unreachable from the root"
            )));
        }
        Ok(Tree { nodes, parent })
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, h: NodeId) -> &TreeNode {
        &self.nodes[h]
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn parent(&self, h: NodeId) -> Option<NodeId> {
        self.parent[h]
    }

    pub fn is_leaf(&self, h: NodeId) -> bool {
        self.nodes[h].is_leaf()
    }

    /// Predecessors of `h`: the nodes strictly between the root and `h`,
    /// reported root-first.
    pub fn predecessors(&self, h: NodeId) -> Vec<NodeId> {
        let mut path = Vec::new();
        let mut cur = h;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Sibling nodes of `h` (nodes sharing its immediate parent).
    pub fn siblings(&self, h: NodeId) -> Vec<NodeId> {
        match self.parent[h] {
            None => Vec::new(),
            Some(p) => self.nodes[p].children.iter().copied().filter(|&c| c != h).collect(),
        }
    }

    /// Leaf ids in preorder.
    pub fn leaves(&self) -> Vec<NodeId> {
        (0..self.n_nodes()).filter(|&h| self.is_leaf(h)).collect()
    }

    /// Routes an example to a leaf, returning the visited node ids starting
    /// at the root.
    pub fn route(&self, x: &[f64]) -> Result<Vec<NodeId>> {
        let mut path = vec![0];
        let mut h = 0;
        while !self.is_leaf(h) {
            let node = &self.nodes[h];
            let k = node.feature.expect("internal node has a feature");
            if k >= x.len() {
                return Err(Error::Mismatch(format!(
                    "node {h} splits on feature {k} but the example has only {} features",
                    x.len()
                )));
            }
            if node.children.len() != 2 {
                return Err(Error::Mismatch(format!(
                    "node {h} has {} children; routing is defined for binary splits only",
                    node.children.len()
                )));
            }
            let tau = node.threshold.expect("binary split has a threshold");
            // Equal-valued comparisons route left.
            h = if x[k] <= tau { node.children[0] } else { node.children[1] };
            path.push(h);
        }
        Ok(path)
    }

    /// Recomputes per-node statistics from a dataset: class counts along each
    /// example's path, majority predictions (lowest class index on ties) and
    /// misclassification counts. Nodes no example reaches get zero counts and
    /// inherit the parent's prediction, which keeps such subtrees prunable
    /// for free.
    pub fn with_stats(&self, data: &Dataset) -> Result<Tree> {
        if data.n_examples() == 0 {
            return Err(Error::Data("cannot compute node statistics on an empty dataset".into()));
        }
        let m = data.n_classes();
        let mut counts = vec![vec![0u32; m]; self.n_nodes()];
        for i in 0..data.n_examples() {
            let y = data.label(i);
            if y >= m {
                return Err(Error::Mismatch(format!("label {y} out of range (M={m})")));
            }
            for &h in &self.route(data.row(i))? {
                counts[h][y] += 1;
            }
        }
        let mut nodes = self.nodes.clone();
        for h in 0..nodes.len() {
            let total: u32 = counts[h].iter().sum();
            if total == 0 {
                let p = self.parent[h].expect("root always has examples");
                nodes[h].pred = nodes[p].pred;
                nodes[h].err = 0;
            } else {
                let best = counts[h].iter().enumerate().max_by(|a, b| {
                    a.1.cmp(b.1).then(b.0.cmp(&a.0)) // prefer the lowest class index
                });
                let (pred, &max) = best.expect("m >= 1");
                nodes[h].pred = pred;
                nodes[h].err = total - max;
            }
            nodes[h].class_counts = counts[h].clone();
        }
        Ok(Tree { nodes, parent: self.parent.clone() })
    }

    pub(crate) fn set_stats(&mut self, h: NodeId, pred: usize, err: u32) {
        self.nodes[h].pred = pred;
        self.nodes[h].err = err;
    }

    /// Checks whether `leaf_set` is the leaf set of a valid pruning: the
    /// pruned tree contains the root and every retained non-root node's
    /// siblings. Equivalently, every root-to-leaf path of the original tree
    /// meets `leaf_set` exactly once.
    pub fn is_valid_pruning(&self, leaf_set: &[NodeId]) -> bool {
        let mut in_set = vec![false; self.n_nodes()];
        for &h in leaf_set {
            if h >= self.n_nodes() || in_set[h] {
                return false;
            }
            in_set[h] = true;
        }
        for leaf in self.leaves() {
            let mut hits = in_set[leaf] as usize;
            for p in self.predecessors(leaf) {
                hits += in_set[p] as usize;
            }
            if hits != 1 {
                return false;
            }
        }
        true
    }

    /// Maximum root-to-leaf edge count.
    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.n_nodes()];
        let mut max = 0;
        for h in 1..self.n_nodes() {
            depth[h] = depth[self.parent[h].expect("non-root has a parent")] + 1;
            max = max.max(depth[h]);
        }
        max
    }
}

/// An ensemble of trees plus the per-feature acquisition costs.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub trees: Vec<Tree>,
    pub feature_costs: Vec<f64>,
    pub n_classes: usize,
}

impl Ensemble {
    pub fn new(trees: Vec<Tree>, feature_costs: Vec<f64>, n_classes: usize) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::Schema("ensemble has no trees".into()));
        }
        if feature_costs.iter().any(|&c| !c.is_finite() || c < 0.0) {
            return Err(Error::Schema("feature costs must be finite and nonnegative".into()));
        }
        if n_classes == 0 {
            return Err(Error::Schema("ensemble needs at least one class".into()));
        }
        let k = feature_costs.len();
        for (t, tree) in trees.iter().enumerate() {
            for (h, node) in tree.nodes().iter().enumerate() {
                if let Some(f) = node.feature {
                    if f >= k {
                        return Err(Error::Schema(format!(
                            "tree {t} node {h}: feature {f} out of range (K={k})"
                        )));
                    }
                }
                if node.class_counts.len() != n_classes {
                    return Err(Error::Schema(format!(
                        "tree {t} node {h}: class_counts has {} entries, expected {n_classes}",
                        node.class_counts.len()
                    )));
                }
                if node.pred >= n_classes {
                    return Err(Error::Schema(format!(
                        "tree {t} node {h}: prediction {} out of range (M={n_classes})",
                        node.pred
                    )));
                }
            }
        }
        Ok(Ensemble { trees, feature_costs, n_classes })
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_costs.len()
    }

    /// Recomputes node statistics for every tree on `data`.
    pub fn with_stats(&self, data: &Dataset) -> Result<Ensemble> {
        if data.n_features() != self.n_features() {
            return Err(Error::Mismatch(format!(
                "dataset has {} features, ensemble expects {}",
                data.n_features(),
                self.n_features()
            )));
        }
        if data.n_classes() > self.n_classes {
            return Err(Error::Mismatch(format!(
                "dataset has {} classes, ensemble supports {}",
                data.n_classes(),
                self.n_classes
            )));
        }
        let trees = self
            .trees
            .iter()
            .map(|t| {
                t.with_stats(data).map(|mut tr| {
                    // Stats were computed in the dataset's class space; pad
                    // counts up to the ensemble's class count if needed.
                    if data.n_classes() < self.n_classes {
                        for node in &mut tr.nodes {
                            node.class_counts.resize(self.n_classes, 0);
                        }
                    }
                    tr
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(trees, self.feature_costs.clone(), self.n_classes)
    }
}

/// Per-(tree, example) routing information: the leaf path, the set of
/// features used on it and, for each used feature, the first node on the
/// path that splits on it. Repeated uses of a feature deeper on the same
/// path produce no additional entries.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingProfile {
    trees: Vec<TreeProfile>,
    n_examples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeProfile {
    /// Leaf path per example (node ids from root to leaf).
    pub paths: Vec<Vec<NodeId>>,
    /// Per example: (feature, first-use node) pairs sorted by feature.
    pub first_use: Vec<Vec<(usize, NodeId)>>,
}

impl RoutingProfile {
    /// Routes every example through every tree.
    pub fn compute(ens: &Ensemble, data: &Dataset) -> Result<RoutingProfile> {
        let trees = ens
            .trees
            .iter()
            .map(|tree| {
                let per_example: Vec<_> = (0..data.n_examples())
                    .into_par_iter()
                    .map(|i| {
                        let path = tree.route(data.row(i))?;
                        let mut first_use: Vec<(usize, NodeId)> = Vec::new();
                        for &h in &path {
                            if let Some(k) = tree.node(h).feature {
                                if !first_use.iter().any(|&(k2, _)| k2 == k) {
                                    first_use.push((k, h));
                                }
                            }
                        }
                        first_use.sort_unstable_by_key(|&(k, _)| k);
                        Ok((path, first_use))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let (paths, first_use) = per_example.into_iter().unzip();
                Ok(TreeProfile { paths, first_use })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RoutingProfile { trees, n_examples: data.n_examples() })
    }

    pub fn n_examples(&self) -> usize {
        self.n_examples
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn tree(&self, t: usize) -> &TreeProfile {
        &self.trees[t]
    }

    /// Features example `i` uses in tree `t`, ascending.
    pub fn used_features(&self, t: usize, i: usize) -> Vec<usize> {
        self.trees[t].first_use[i].iter().map(|&(k, _)| k).collect()
    }

    /// First node splitting on `k` along example `i`'s path in tree `t`.
    pub fn first_use_node(&self, t: usize, i: usize, k: usize) -> Option<NodeId> {
        self.trees[t].first_use[i]
            .iter()
            .find(|&&(k2, _)| k2 == k)
            .map(|&(_, u)| u)
    }

    /// The profile of a single tree, viewed as a one-tree ensemble profile.
    pub fn restrict_to_tree(&self, t: usize) -> RoutingProfile {
        RoutingProfile { trees: vec![self.trees[t].clone()], n_examples: self.n_examples }
    }
}
