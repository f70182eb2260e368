//! Brute-force ground truth for tests and cross-checks: exhaustive
//! enumeration of valid prunings per tree and exact minimization of the
//! pruning objective over every combination, with feature costs shared
//! across trees. Guards are hard errors; an oracle must never be
//! approximate.

use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::forest::{Ensemble, NodeId, RoutingProfile, Tree};

/// Every valid pruning of one tree, listed as sorted leaf sets.
#[derive(Debug, Clone)]
pub struct PruningEnumeration {
    pub leaf_sets: Vec<Vec<NodeId>>,
    pub count: u64,
}

const MAX_NODES: usize = 63;
const MAX_COMBINATIONS: u64 = 1_000_000;
const MAX_MASK_FEATURES: usize = 64;

/// Enumerates every valid pruning of `tree`. The count obeys the recursion
/// `P(leaf) = 1`, `P(internal) = 1 + prod_children P(child)` (collapse here,
/// or any combination of pruned child subtrees).
pub fn enumerate_prunings(tree: &Tree) -> Result<PruningEnumeration> {
    if tree.n_nodes() > MAX_NODES {
        return Err(Error::OracleGuard(format!(
            "tree has {} nodes; enumeration is guarded at {MAX_NODES}",
            tree.n_nodes()
        )));
    }

    fn expected_count(tree: &Tree, h: NodeId) -> Result<u64> {
        if tree.is_leaf(h) {
            return Ok(1);
        }
        let mut prod: u64 = 1;
        for &c in &tree.node(h).children {
            prod = prod
                .checked_mul(expected_count(tree, c)?)
                .ok_or_else(|| Error::OracleGuard("pruning count overflow".into()))?;
        }
        prod.checked_add(1).ok_or_else(|| Error::OracleGuard("pruning count overflow".into()))
    }

    fn enumerate(tree: &Tree, h: NodeId) -> Vec<Vec<NodeId>> {
        let mut out = vec![vec![h]];
        if tree.is_leaf(h) {
            return out;
        }
        let per_child: Vec<Vec<Vec<NodeId>>> =
            tree.node(h).children.iter().map(|&c| enumerate(tree, c)).collect();
        // Cartesian product, last child cycling fastest.
        let mut picks = vec![0usize; per_child.len()];
        loop {
            let mut set = Vec::new();
            for (c, &p) in picks.iter().enumerate() {
                set.extend_from_slice(&per_child[c][p]);
            }
            out.push(set);
            let mut i = per_child.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                picks[i] += 1;
                if picks[i] < per_child[i].len() {
                    break;
                }
                picks[i] = 0;
            }
        }
    }

    let expected = expected_count(tree, 0)?;
    let leaf_sets = enumerate(tree, 0);
    debug_assert_eq!(leaf_sets.len() as u64, expected);
    Ok(PruningEnumeration { leaf_sets, count: expected })
}

/// Exact objective decomposition of a pruning tuple under the shared-cost
/// model: (error term, raw cost term). The error term averages the retained
/// leaf errors over examples and trees; the raw cost term charges each
/// feature once per example across the whole ensemble. The full objective is
/// `error + lambda * cost`.
pub fn tuple_objective(
    ens: &Ensemble,
    profile: &RoutingProfile,
    leaf_sets: &[Vec<NodeId>],
    _lambda: f64,
) -> (f64, f64) {
    let n = profile.n_examples();
    let t_count = ens.n_trees();
    let nt = (n * t_count) as f64;
    let mut err = 0.0;
    for (t, set) in leaf_sets.iter().enumerate() {
        for &h in set {
            err += f64::from(ens.trees[t].node(h).err) / nt;
        }
    }
    let mut cost = 0.0;
    let mut used = vec![false; ens.n_features()];
    for i in 0..n {
        used.iter_mut().for_each(|u| *u = false);
        for (t, set) in leaf_sets.iter().enumerate() {
            for &h in &profile.tree(t).paths[i] {
                if set.contains(&h) {
                    break;
                }
                if let Some(k) = ens.trees[t].node(h).feature {
                    used[k] = true;
                }
            }
        }
        for (k, &u) in used.iter().enumerate() {
            if u {
                cost += ens.feature_costs[k];
            }
        }
    }
    (err, cost / n as f64)
}

/// The exact optimum found by brute force.
#[derive(Debug, Clone)]
pub struct OracleOptimum {
    pub objective: f64,
    pub error_term: f64,
    pub cost_term: f64,
    pub leaf_sets: Vec<Vec<NodeId>>,
    pub combinations: u64,
}

/// Scans every combination of valid prunings across the ensemble and returns
/// the exact minimizer of `error + lambda * shared cost`. Deterministic: ties
/// resolve to the lexicographically first combination regardless of thread
/// count.
pub fn brute_force_optimum(ens: &Ensemble, data: &Dataset, lambda: f64) -> Result<OracleOptimum> {
    let ens = ens.with_stats(data)?;
    let profile = RoutingProfile::compute(&ens, data)?;
    brute_force_on(&ens, &profile, lambda)
}

/// Same as [`brute_force_optimum`] for a pre-computed profile and an ensemble
/// whose statistics already match it.
pub fn brute_force_on(
    ens: &Ensemble,
    profile: &RoutingProfile,
    lambda: f64,
) -> Result<OracleOptimum> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    let k = ens.n_features();
    if k > MAX_MASK_FEATURES {
        return Err(Error::OracleGuard(format!(
            "{k} features exceed the {MAX_MASK_FEATURES}-feature mask guard"
        )));
    }
    let n = profile.n_examples();
    let t_count = ens.n_trees();
    let nt = (n * t_count) as f64;

    let enums: Vec<PruningEnumeration> =
        ens.trees.iter().map(enumerate_prunings).collect::<Result<Vec<_>>>()?;
    let mut total: u64 = 1;
    for e in &enums {
        total = total
            .checked_mul(e.count)
            .filter(|&v| v <= MAX_COMBINATIONS)
            .ok_or_else(|| {
                Error::OracleGuard(format!(
                    "combination count exceeds the {MAX_COMBINATIONS} guard"
                ))
            })?;
    }

    // Per (tree, pruning): retained-leaf error sum and per-example masks of
    // the features paid before reaching a pruned leaf.
    let mut err_of: Vec<Vec<f64>> = Vec::with_capacity(t_count);
    let mut masks: Vec<Vec<Vec<u64>>> = Vec::with_capacity(t_count);
    for (t, e) in enums.iter().enumerate() {
        let tree = &ens.trees[t];
        let mut errs = Vec::with_capacity(e.leaf_sets.len());
        let mut tree_masks = Vec::with_capacity(e.leaf_sets.len());
        for set in &e.leaf_sets {
            let err: f64 = set.iter().map(|&h| f64::from(tree.node(h).err)).sum::<f64>() / nt;
            errs.push(err);
            let mut in_set = vec![false; tree.n_nodes()];
            for &h in set {
                in_set[h] = true;
            }
            let per_example: Vec<u64> = (0..n)
                .map(|i| {
                    let mut mask = 0u64;
                    for &h in &profile.tree(t).paths[i] {
                        if in_set[h] {
                            break;
                        }
                        if let Some(kf) = tree.node(h).feature {
                            mask |= 1u64 << kf;
                        }
                    }
                    mask
                })
                .collect();
            tree_masks.push(per_example);
        }
        err_of.push(errs);
        masks.push(tree_masks);
    }

    // Cost of a feature mask, tabulated when small enough.
    let cost_table: Option<Vec<f64>> = if k <= 16 {
        let mut table = vec![0.0; 1 << k];
        for mask in 1usize..(1 << k) {
            let low = mask.trailing_zeros() as usize;
            table[mask] = table[mask & (mask - 1)] + ens.feature_costs[low];
        }
        Some(table)
    } else {
        None
    };
    let mask_cost = |mask: u64| -> f64 {
        match &cost_table {
            Some(t) => t[mask as usize],
            None => {
                let mut m = mask;
                let mut c = 0.0;
                while m != 0 {
                    let kf = m.trailing_zeros() as usize;
                    c += ens.feature_costs[kf];
                    m &= m - 1;
                }
                c
            }
        }
    };

    let radices: Vec<u64> = enums.iter().map(|e| e.count).collect();
    let evaluate = |flat: u64| -> (f64, Vec<usize>) {
        let mut picks = vec![0usize; t_count];
        let mut rest = flat;
        for t in (0..t_count).rev() {
            picks[t] = (rest % radices[t]) as usize;
            rest /= radices[t];
        }
        let mut err = 0.0;
        for (t, &p) in picks.iter().enumerate() {
            err += err_of[t][p];
        }
        let mut cost = 0.0;
        for i in 0..n {
            let mut mask = 0u64;
            for (t, &p) in picks.iter().enumerate() {
                mask |= masks[t][p][i];
            }
            cost += mask_cost(mask);
        }
        (err + lambda * cost / n as f64, picks)
    };

    const CHUNK: u64 = 4096;
    let n_chunks = total.div_ceil(CHUNK);
    let best = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut best: Option<(f64, u64)> = None;
            for flat in start..end {
                let (v, _) = evaluate(flat);
                if best.map_or(true, |(bv, _)| v < bv) {
                    best = Some((v, flat));
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        // Sequential reduce in chunk order keeps ties deterministic.
        .fold(None::<(f64, u64)>, |acc, cand| match acc {
            None => Some(cand),
            Some(best) => {
                if cand.0 < best.0 {
                    Some(cand)
                } else {
                    Some(best)
                }
            }
        })
        .expect("at least one combination");

    let (objective, picks) = evaluate(best.1);
    let leaf_sets: Vec<Vec<NodeId>> =
        picks.iter().enumerate().map(|(t, &p)| enums[t].leaf_sets[p].clone()).collect();
    let (error_term, cost_term) = tuple_objective(ens, profile, &leaf_sets, lambda);
    debug_assert!((error_term + lambda * cost_term - objective).abs() < 1e-9);
    Ok(OracleOptimum { objective, error_term, cost_term, leaf_sets, combinations: total })
}

/// Counts how many pruning tuples attain the optimum within `tol`; a count
/// of 1 certifies a unique optimizer. Same guards as the optimum scan.
pub fn count_optimal_tuples(
    ens: &Ensemble,
    profile: &RoutingProfile,
    lambda: f64,
    tol: f64,
) -> Result<u64> {
    let best = brute_force_on(ens, profile, lambda)?;
    let enums: Vec<PruningEnumeration> =
        ens.trees.iter().map(enumerate_prunings).collect::<Result<Vec<_>>>()?;
    let mut picks = vec![0usize; ens.n_trees()];
    let mut count = 0u64;
    loop {
        let sets: Vec<Vec<NodeId>> =
            picks.iter().enumerate().map(|(t, &p)| enums[t].leaf_sets[p].clone()).collect();
        let (err, cost) = tuple_objective(ens, profile, &sets, lambda);
        if (err + lambda * cost - best.objective).abs() <= tol {
            count += 1;
        }
        let mut i = ens.n_trees();
        loop {
            if i == 0 {
                return Ok(count);
            }
            i -= 1;
            picks[i] += 1;
            if picks[i] < enums[i].leaf_sets.len() {
                break;
            }
            picks[i] = 0;
        }
    }
}
