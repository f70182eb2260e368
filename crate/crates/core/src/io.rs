//! Ensemble (de)serialization.
//!
//! The on-disk format is a single JSON document:
//!
//! ```json
//! {
//!   "feature_costs": [1.0, 1.0],
//!   "trees": [
//!     {"nodes": [
//!       {"id": 0, "feature": 0, "threshold": 0.5, "children": [1, 2], "class_counts": [3, 4]},
//!       {"id": 1, "feature": null, "threshold": null, "children": [], "class_counts": [3, 1]},
//!       {"id": 2, "feature": null, "threshold": null, "children": [], "class_counts": [0, 3]}
//!     ]}
//!   ]
//! }
//! ```
//!
//! Nodes are listed in preorder with ids contiguous from 0 within each tree.
//! Predictions and error counts are derived from the class counts on load
//! (lowest class index wins ties; zero-count nodes inherit the parent's
//! prediction).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::{Ensemble, Tree, TreeNode};

#[derive(Serialize, Deserialize)]
struct EnsembleDoc {
    feature_costs: Vec<f64>,
    trees: Vec<TreeDoc>,
}

#[derive(Serialize, Deserialize)]
struct TreeDoc {
    nodes: Vec<NodeDoc>,
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    id: usize,
    feature: Option<usize>,
    threshold: Option<f64>,
    children: Vec<usize>,
    class_counts: Vec<u32>,
}

fn to_doc(ens: &Ensemble) -> EnsembleDoc {
    EnsembleDoc {
        feature_costs: ens.feature_costs.clone(),
        trees: ens
            .trees
            .iter()
            .map(|tree| TreeDoc {
                nodes: tree
                    .nodes()
                    .iter()
                    .enumerate()
                    .map(|(id, n)| NodeDoc {
                        id,
                        feature: n.feature,
                        threshold: n.threshold,
                        children: n.children.clone(),
                        class_counts: n.class_counts.clone(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

fn from_doc(doc: EnsembleDoc) -> Result<Ensemble> {
    if doc.trees.is_empty() {
        return Err(Error::Schema("ensemble document has no trees".into()));
    }
    // The number of classes is carried implicitly by the class_counts arrays.
    let n_classes = doc
        .trees
        .first()
        .and_then(|t| t.nodes.first())
        .map(|n| n.class_counts.len())
        .unwrap_or(0);
    if n_classes == 0 {
        return Err(Error::Schema("class_counts must be non-empty".into()));
    }

    let mut trees = Vec::with_capacity(doc.trees.len());
    for (t, tree_doc) in doc.trees.iter().enumerate() {
        let mut nodes = Vec::with_capacity(tree_doc.nodes.len());
        for (pos, node) in tree_doc.nodes.iter().enumerate() {
            if node.id != pos {
                return Err(Error::Schema(format!(
                    "tree {t}: node at position {pos} has id {}; ids must be contiguous from 0 in preorder",
                    node.id
                )));
            }
            for &c in &node.children {
                if c <= pos {
                    return Err(Error::Schema(format!(
                        "tree {t} node {pos}: child id {c} <= parent id violates the preorder numbering"
                    )));
                }
                if c >= tree_doc.nodes.len() {
                    return Err(Error::Schema(format!(
                        "tree {t} node {pos}: child id {c} out of range ({} nodes)",
                        tree_doc.nodes.len()
                    )));
                }
            }
            if node.class_counts.len() != n_classes {
                return Err(Error::Schema(format!(
                    "tree {t} node {pos}: class_counts has {} entries, expected {n_classes}",
                    node.class_counts.len()
                )));
            }
            nodes.push(TreeNode {
                feature: node.feature,
                threshold: node.threshold,
                children: node.children.clone(),
                class_counts: node.class_counts.clone(),
                pred: 0,
                err: 0,
            });
        }
        let mut tree = Tree::new(nodes).map_err(|e| Error::Schema(format!("tree {t}: {e}")))?;
        derive_stats(&mut tree);
        trees.push(tree);
    }

    Ensemble::new(trees, doc.feature_costs, n_classes)
}

/// Fills `pred`/`err` from the stored class counts. Processing in preorder
/// guarantees a parent's prediction is final before its children inherit it.
fn derive_stats(tree: &mut Tree) {
    for h in 0..tree.n_nodes() {
        let counts = tree.node(h).class_counts.clone();
        let total: u32 = counts.iter().sum();
        let (pred, err) = if total == 0 {
            let parent_pred = tree.parent(h).map(|p| tree.node(p).pred).unwrap_or(0);
            (parent_pred, 0)
        } else {
            let (pred, &max) = counts
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                .expect("non-empty counts");
            (pred, total - max)
        };
        tree.set_stats(h, pred, err);
    }
}

pub fn to_json_string(ens: &Ensemble) -> Result<String> {
    Ok(serde_json::to_string_pretty(&to_doc(ens))?)
}

pub fn from_json_str(s: &str) -> Result<Ensemble> {
    from_doc(serde_json::from_str(s)?)
}

pub fn save_ensemble(ens: &Ensemble, path: impl AsRef<Path>) -> Result<()> {
    let mut text = to_json_string(ens)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_ensemble(path: impl AsRef<Path>) -> Result<Ensemble> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    from_json_str(&text).map_err(|e| match e {
        Error::Schema(msg) => Error::Schema(format!("{}: {msg}", path.display())),
        other => other,
    })
}
