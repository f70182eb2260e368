//! Column-generation solver: a restricted master over extreme points of each
//! per-tree pruning polytope, priced by an exact per-tree dynamic program.
//!
//! Master rows: one linking row per (tree, example, feature) first use,
//! `sum_j alpha_j w_hat - w + s = 0`, plus one convexity row per tree.
//! Master columns: one per generated pruning (the alpha weights), the shared
//! w columns and the slack columns. Duals: `q` on the linking rows (<= 0 at
//! optimality, because the slacks price to `-q`), `r_t` on the convexity
//! rows. A tree column enters while its subproblem value drops below `r_t`.
//!
//! Sign convention, fixed here once: linking rows are stored as
//! `wt - w + s = 0` with `s >= 0`, so the pricing subproblem charges `-q`
//! for every first use the pruning keeps internal.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result, SolveError};
use crate::forest::NodeId;
use crate::problem::{Attachment, PruningProblem};
use crate::simplex::{solve_reusing, BasisState, LPSolution, SolveStatus, StandardLP, Tolerances};

/// One tree's polytope: everything the pricing subproblem needs.
#[derive(Debug, Clone)]
pub struct TreePolytopeSpec<'a> {
    pub tree: usize,
    pub children: &'a [Vec<NodeId>],
    /// Objective coefficient of collapsing at each node: err / (N * T).
    pub leaf_value: &'a [f64],
    pub attachments: &'a [Attachment],
    /// Attachment indices grouped by their first-use node.
    attach_at: Vec<Vec<usize>>,
}

/// Builds the per-tree subproblem specs of a problem.
pub fn tree_specs(problem: &PruningProblem) -> Vec<TreePolytopeSpec<'_>> {
    (0..problem.n_trees)
        .map(|t| {
            let mut attach_at: Vec<Vec<usize>> = vec![Vec::new(); problem.children[t].len()];
            for (a, att) in problem.attachments[t].iter().enumerate() {
                attach_at[att.node].push(a);
            }
            TreePolytopeSpec {
                tree: t,
                children: &problem.children[t],
                leaf_value: &problem.err_cost[t],
                attachments: &problem.attachments[t],
                attach_at,
            }
        })
        .collect()
}

/// An extreme point of a tree polytope: a valid pruning with its induced
/// per-tree w values and its master objective coefficient.
#[derive(Debug, Clone)]
pub struct Column {
    pub tree: usize,
    pub leaf_set: Vec<NodeId>,
    /// Aligned with the tree's attachment list.
    pub w: Vec<bool>,
    pub cost: f64,
}

/// Exact pricing: minimizes `sum of kept leaf errors + sum of -q charges on
/// internal first uses` over all valid prunings by a bottom-up pass. For
/// each node the choice is collapse (pay the node's error) or stay internal
/// (pay the children optima plus the node's attachment charges); ties
/// collapse, so generated columns are deterministic. Runs linear in nodes
/// plus attachments.
pub fn subproblem_solve(spec: &TreePolytopeSpec<'_>, q: &[f64]) -> (Column, f64) {
    let n = spec.children.len();
    debug_assert_eq!(q.len(), spec.attachments.len());
    let mut value = vec![0.0; n];
    let mut collapse = vec![true; n];
    for h in (0..n).rev() {
        let leaf_val = spec.leaf_value[h];
        if spec.children[h].is_empty() {
            value[h] = leaf_val;
            continue;
        }
        let mut internal: f64 = spec.children[h].iter().map(|&c| value[c]).sum();
        for &a in &spec.attach_at[h] {
            internal += -q[a];
        }
        if leaf_val <= internal {
            value[h] = leaf_val;
        } else {
            value[h] = internal;
            collapse[h] = false;
        }
    }

    let mut leaf_set = Vec::new();
    let mut internal_nodes = vec![false; n];
    let mut stack = vec![0usize];
    while let Some(h) = stack.pop() {
        if collapse[h] || spec.children[h].is_empty() {
            leaf_set.push(h);
        } else {
            internal_nodes[h] = true;
            stack.extend(spec.children[h].iter().rev());
        }
    }
    leaf_set.sort_unstable();

    let w: Vec<bool> = spec.attachments.iter().map(|att| internal_nodes[att.node]).collect();
    let cost: f64 = leaf_set.iter().map(|&h| spec.leaf_value[h]).sum();

    // Independent re-derivation of the w indicators from the leaf set: a
    // first use is paid iff nothing on the root..u path is a pruned leaf.
    debug_assert!({
        let in_set: HashSet<usize> = leaf_set.iter().copied().collect();
        let mut parent = vec![None; n];
        for (h, ch) in spec.children.iter().enumerate() {
            for &c in ch {
                parent[c] = Some(h);
            }
        }
        spec.attachments.iter().zip(&w).all(|(att, &wv)| {
            let mut cur = att.node;
            let mut open = true;
            loop {
                if in_set.contains(&cur) {
                    open = false;
                    break;
                }
                match parent[cur] {
                    Some(p) => cur = p,
                    None => break,
                }
            }
            open == wv
        })
    });

    (Column { tree: spec.tree, leaf_set, w, cost }, value[0])
}

/// The restricted master's mutable state. Reusable across solves of the same
/// problem shape (for example along a lambda sweep): generated columns stay
/// valid because only the objective depends on lambda.
#[derive(Debug, Clone)]
pub struct MasterState {
    pub columns: Vec<Column>,
    signatures: HashSet<(usize, Vec<NodeId>)>,
    cache: Option<BasisState>,
}

/// Starts the master from one root-only column per tree: every shared w and
/// every slack sits at zero, which satisfies all linking rows, and each
/// convexity row is covered by its column. Feasible by construction.
pub fn initialize_master(problem: &PruningProblem) -> MasterState {
    let mut columns = Vec::with_capacity(problem.n_trees);
    let mut signatures = HashSet::new();
    for t in 0..problem.n_trees {
        let col = Column {
            tree: t,
            leaf_set: vec![0],
            w: vec![false; problem.attachments[t].len()],
            cost: problem.err_cost[t][0],
        };
        signatures.insert((t, col.leaf_set.clone()));
        columns.push(col);
    }
    MasterState { columns, signatures, cache: None }
}

impl MasterState {
    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    /// Admits non-duplicate columns; returns how many entered.
    pub fn admit(&mut self, cols: Vec<Column>) -> usize {
        let mut added = 0;
        for col in cols {
            if self.signatures.insert((col.tree, col.leaf_set.clone())) {
                self.columns.push(col);
                added += 1;
            }
        }
        added
    }
}

/// Master LP layout: link rows then convexity rows. Columns: the T initial
/// alphas, the shared w block, the slack block, then generated alphas in
/// admission order. New columns append at the end so basis indices stay
/// stable between rounds.
fn master_lp(problem: &PruningProblem, columns: &[Column]) -> StandardLP {
    let n_links = problem.links.len();
    let n_rows = n_links + problem.n_trees;
    let n_pairs = problem.pairs.len();
    let n_cols = columns.len() + n_pairs + n_links;

    let mut cols: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n_cols);
    let mut cost = Vec::with_capacity(n_cols);
    // Alpha columns, initial T first then generated ones in admission order;
    // the w/s blocks sit between the initial and generated alphas so their
    // indices never move when columns are appended.
    let (head, tail) = columns.split_at(problem.n_trees.min(columns.len()));
    for col in head {
        cols.push(alpha_entries(problem, col, n_links));
        cost.push(col.cost);
    }
    for p in 0..n_pairs {
        let entries: Vec<(usize, f64)> =
            problem.pair_links[p].iter().map(|&l| (l, -1.0)).collect();
        cols.push(entries);
        cost.push(problem.lambda * problem.pair_cost_raw[p]);
    }
    for l in 0..n_links {
        cols.push(vec![(l, 1.0)]);
        cost.push(0.0);
    }
    for col in tail {
        cols.push(alpha_entries(problem, col, n_links));
        cost.push(col.cost);
    }

    let mut b = vec![0.0; n_rows];
    for r in n_links..n_rows {
        b[r] = 1.0;
    }
    StandardLP::new(n_rows, cols, b, cost).expect("master LP is well-formed")
}

fn alpha_entries(problem: &PruningProblem, col: &Column, n_links: usize) -> Vec<(usize, f64)> {
    let mut entries: Vec<(usize, f64)> = col
        .w
        .iter()
        .enumerate()
        .filter(|&(_, &used)| used)
        .map(|(a, _)| (problem.attach_link[col.tree][a], 1.0))
        .collect();
    entries.push((n_links + col.tree, 1.0));
    entries
}

/// Master column index of a state column by its position.
fn alpha_index(problem: &PruningProblem, pos: usize) -> usize {
    let head = problem.n_trees;
    if pos < head {
        pos
    } else {
        head + problem.pairs.len() + problem.links.len() + (pos - head)
    }
}

/// Prices every tree against the master duals and returns the violating
/// columns together with each subproblem optimum. Subproblems run in
/// parallel; results merge in tree order.
pub fn price_and_generate(
    problem: &PruningProblem,
    specs: &[TreePolytopeSpec<'_>],
    duals: &[f64],
    tol: Tolerances,
) -> (Vec<Column>, Vec<f64>) {
    let n_links = problem.links.len();
    let priced: Vec<(Column, f64)> = specs
        .par_iter()
        .map(|spec| {
            let q: Vec<f64> =
                (0..spec.attachments.len()).map(|a| duals[problem.attach_link[spec.tree][a]]).collect();
            subproblem_solve(spec, &q)
        })
        .collect();
    let mut entering = Vec::new();
    let mut opts = Vec::with_capacity(priced.len());
    for (col, opt) in priced {
        let r_t = duals[n_links + col.tree];
        if opt < r_t - tol.opt_tol {
            entering.push(col);
        }
        opts.push(opt);
    }
    (entering, opts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DwTraceRow {
    pub round: usize,
    pub master_objective: f64,
    pub n_columns: usize,
    pub max_violation: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct DwOptions {
    pub tol: Tolerances,
    pub max_rounds: usize,
    pub collect_trace: bool,
}

impl Default for DwOptions {
    fn default() -> Self {
        DwOptions { tol: Tolerances::default(), max_rounds: 10_000, collect_trace: false }
    }
}

#[derive(Debug, Clone)]
pub struct DwSolution {
    /// Full-space point in the problem's column layout (z, wt, w, s).
    pub x: Vec<f64>,
    pub objective: f64,
    /// False when the round cap was hit before pricing proved optimality.
    pub optimal: bool,
    /// Valid lower bound on the LP optimum from the last pricing round.
    pub lower_bound: f64,
    pub rounds: usize,
    pub n_columns: usize,
    /// True when the final weights were degenerate or a tie purification
    /// found an equal-value pruning tuple; false leaves a fractional
    /// combination in `x`.
    pub integral_recovery: bool,
    pub trace: Vec<DwTraceRow>,
}

/// One-shot decomposition solve.
pub fn solve_dw(problem: &PruningProblem, opts: &DwOptions) -> Result<DwSolution> {
    let mut state = initialize_master(problem);
    solve_dw_with_state(problem, opts, &mut state)
}

/// Decomposition solve reusing a caller-held column pool (the pool must come
/// from the same problem shape; only lambda may differ).
pub fn solve_dw_with_state(
    problem: &PruningProblem,
    opts: &DwOptions,
    state: &mut MasterState,
) -> Result<DwSolution> {
    let specs = tree_specs(problem);
    let n_links = problem.links.len();
    let n_trees = problem.n_trees;
    let mut trace = Vec::new();

    let natural_basis = || -> Vec<usize> {
        // Slack per linking row, initial alpha per convexity row.
        let mut basis = Vec::with_capacity(n_links + n_trees);
        for l in 0..n_links {
            basis.push(n_trees + problem.pairs.len() + l);
        }
        for t in 0..n_trees {
            basis.push(t);
        }
        basis
    };

    let mut prev_objective = f64::INFINITY;
    let mut rounds = 0;
    loop {
        rounds += 1;
        let lp = master_lp(problem, &state.columns);
        let hint = natural_basis();
        let sol = solve_reusing(&lp, &mut state.cache, Some(&hint), opts.tol)?;
        if sol.status != SolveStatus::Optimal {
            return Err(Error::Solver(SolveError::Numerical(format!(
                "restricted master reported {:?}; it is feasible and bounded by construction",
                sol.status
            ))));
        }
        let scale = 1.0 + sol.objective.abs();
        if sol.objective > prev_objective + 1e-9 * scale {
            return Err(Error::Audit(format!(
                "master objective increased across rounds: {prev_objective} -> {}",
                sol.objective
            )));
        }
        prev_objective = sol.objective;

        let (entering, opts_t) = price_and_generate(problem, &specs, &sol.duals, opts.tol);
        let max_violation = opts_t
            .iter()
            .enumerate()
            .map(|(t, &o)| sol.duals[n_links + t] - o)
            .fold(0.0f64, f64::max);
        if opts.collect_trace {
            trace.push(DwTraceRow {
                round: rounds,
                master_objective: sol.objective,
                n_columns: state.columns.len(),
                max_violation,
            });
        }

        let finished = entering.is_empty() || rounds >= opts.max_rounds;
        if finished {
            let optimal = entering.is_empty();
            // Lower bound: master objective plus the total pricing slack.
            let lower_bound = sol.objective
                + opts_t
                    .iter()
                    .enumerate()
                    .map(|(t, &o)| (o - sol.duals[n_links + t]).min(0.0))
                    .sum::<f64>();
            let last_priced: Vec<Column> = {
                // Keep the final pricing columns as purification candidates:
                // at optimality each achieves its tree's convexity dual.
                let duals = &sol.duals;
                specs
                    .iter()
                    .map(|spec| {
                        let q: Vec<f64> = (0..spec.attachments.len())
                            .map(|a| duals[problem.attach_link[spec.tree][a]])
                            .collect();
                        subproblem_solve(spec, &q).0
                    })
                    .collect()
            };
            let (x, integral) = recover(problem, state, &sol, &last_priced);
            let objective = problem.objective_of(&x);
            return Ok(DwSolution {
                x,
                objective,
                optimal,
                lower_bound,
                rounds,
                n_columns: state.columns.len(),
                integral_recovery: integral,
                trace,
            });
        }

        let added = state.admit(entering);
        if added == 0 {
            // Every violating column is already present: the master and the
            // pricing tolerance disagree at noise level; accept the master.
            log::warn!("pricing re-proposed only existing columns; stopping");
            let (x, integral) = recover(problem, state, &sol, &[]);
            let objective = problem.objective_of(&x);
            return Ok(DwSolution {
                x,
                objective,
                optimal: true,
                lower_bound: sol.objective,
                rounds,
                n_columns: state.columns.len(),
                integral_recovery: integral,
                trace,
            });
        }
    }
}

/// Rebuilds a full-space point from the master solution. With degenerate
/// weights this is exact. With fractional weights (possible under objective
/// ties) the support per tree is tiny, so the best pruning tuple over the
/// support product is evaluated exactly under the shared-cost objective and
/// returned when it matches the master value; otherwise the fractional
/// combination is returned and flagged.
fn recover(
    problem: &PruningProblem,
    state: &MasterState,
    sol: &LPSolution,
    extra_candidates: &[Column],
) -> (Vec<f64>, bool) {
    let weight_of =
        |pos: usize| -> f64 { sol.x.get(alpha_index(problem, pos)).copied().unwrap_or(0.0) };

    let mut supports: Vec<Vec<&Column>> = vec![Vec::new(); problem.n_trees];
    let mut fractional = false;
    for (pos, col) in state.columns.iter().enumerate() {
        let a = weight_of(pos);
        if a > 1e-9 {
            supports[col.tree].push(col);
            if (a - 1.0).abs() > 1e-9 {
                fractional = true;
            }
        }
    }
    for col in extra_candidates {
        if !supports[col.tree].iter().any(|c| c.leaf_set == col.leaf_set) {
            supports[col.tree].push(col);
        }
    }

    if !fractional && supports.iter().all(|s| !s.is_empty()) {
        let singletons: Vec<&Column> = supports
            .iter()
            .map(|s| {
                *s.iter()
                    .min_by(|a, b| a.leaf_set.cmp(&b.leaf_set))
                    .expect("non-empty support")
            })
            .collect();
        // Weight-1 column per tree: rebuild directly.
        let mut chosen: Vec<Option<&Column>> = vec![None; problem.n_trees];
        for (pos, col) in state.columns.iter().enumerate() {
            if weight_of(pos) > 0.5 {
                chosen[col.tree] = Some(col);
            }
        }
        if chosen.iter().all(Option::is_some) {
            let sets: Vec<Vec<NodeId>> =
                chosen.iter().map(|c| c.expect("checked").leaf_set.clone()).collect();
            return (problem.point_for_leaf_sets(&sets), true);
        }
        let sets: Vec<Vec<NodeId>> = singletons.iter().map(|c| c.leaf_set.clone()).collect();
        return (problem.point_for_leaf_sets(&sets), true);
    }

    // Tie purification over the support product.
    let combos: usize = supports.iter().map(Vec::len).product();
    if combos > 0 && combos <= 100_000 && supports.iter().all(|s| !s.is_empty()) {
        let mut best: Option<(f64, Vec<Vec<NodeId>>)> = None;
        let mut picks = vec![0usize; problem.n_trees];
        loop {
            let sets: Vec<Vec<NodeId>> =
                picks.iter().enumerate().map(|(t, &p)| supports[t][p].leaf_set.clone()).collect();
            let x = problem.point_for_leaf_sets(&sets);
            let obj = problem.objective_of(&x);
            if best.as_ref().map_or(true, |(b, _)| obj < *b) {
                best = Some((obj, sets));
            }
            let mut i = problem.n_trees;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                picks[i] += 1;
                if picks[i] < supports[i].len() {
                    break;
                }
                picks[i] = 0;
            }
            if picks.iter().all(|&p| p == 0) {
                break;
            }
        }
        if let Some((obj, sets)) = best {
            if obj <= sol.objective + 1e-7 * (1.0 + sol.objective.abs()) {
                return (problem.point_for_leaf_sets(&sets), true);
            }
        }
    }

    // Honest fractional recovery.
    log::warn!("column generation ended on a fractional weight combination");
    let mut x = vec![0.0; problem.n_cols()];
    for (pos, col) in state.columns.iter().enumerate() {
        let a = weight_of(pos);
        if a > 0.0 {
            for &h in &col.leaf_set {
                x[problem.z_col(col.tree, h)] += a;
            }
            for (idx, &used) in col.w.iter().enumerate() {
                if used {
                    x[problem.wt_col(col.tree, idx)] += a;
                }
            }
        }
    }
    for p in 0..problem.pairs.len() {
        x[problem.w_col(p)] = sol.x[problem.n_trees + p];
    }
    for l in 0..problem.links.len() {
        x[problem.s_col(l)] = sol.x[problem.n_trees + problem.pairs.len() + l];
    }
    (x, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::RoutingProfile;
    use crate::oracle;
    use crate::problem::build_ip3;
    use crate::simplex::solve;
    use crate::synth::{demo_dataset, demo_ensemble, random_instance, SynthParams};

    fn demo_problem(lambda: f64) -> PruningProblem {
        let ens = demo_ensemble().with_stats(&demo_dataset()).unwrap();
        let prof = RoutingProfile::compute(&ens, &demo_dataset()).unwrap();
        build_ip3(&ens, &prof, lambda).unwrap()
    }

    #[test]
    fn zero_duals_keep_full_tree_value() {
        // With no charges the leaf refinement inequality makes the full tree
        // a minimizer, so the subproblem value equals the summed leaf errors.
        let p = demo_problem(0.0);
        let specs = tree_specs(&p);
        for spec in &specs {
            let q = vec![0.0; spec.attachments.len()];
            let (col, opt) = subproblem_solve(spec, &q);
            let full: f64 = (0..spec.children.len())
                .filter(|&h| spec.children[h].is_empty())
                .map(|h| spec.leaf_value[h])
                .sum();
            assert!((opt - full).abs() < 1e-12);
            assert!((col.cost - opt).abs() < 1e-12);
        }
    }

    #[test]
    fn strongly_negative_duals_force_root_collapse() {
        let p = demo_problem(0.0);
        let specs = tree_specs(&p);
        for spec in &specs {
            let q = vec![-100.0; spec.attachments.len()];
            let (col, opt) = subproblem_solve(spec, &q);
            assert_eq!(col.leaf_set, vec![0]);
            assert!((opt - spec.leaf_value[0]).abs() < 1e-12);
            assert!(col.w.iter().all(|&b| !b));
        }
    }

    #[test]
    fn dp_matches_enumeration_with_charges() {
        // Synthetic errors on the demo tree 1 shape (e = 4,1,2,0,1 with
        // N = 10, T = 1); charge two attachments and compare against the
        // exhaustive list of the 3 prunings.
        let nt = 10.0;
        let leaf_value: Vec<f64> = vec![4.0 / nt, 1.0 / nt, 2.0 / nt, 0.0 / nt, 1.0 / nt];
        let children: Vec<Vec<usize>> = vec![vec![1, 2], vec![], vec![3, 4], vec![], vec![]];
        let attachments = vec![
            Attachment { example: 0, feature: 0, node: 0 },
            Attachment { example: 0, feature: 1, node: 2 },
        ];
        let mut attach_at = vec![Vec::new(); 5];
        attach_at[0].push(0);
        attach_at[2].push(1);
        let spec = TreePolytopeSpec {
            tree: 0,
            children: &children,
            leaf_value: &leaf_value,
            attachments: &attachments,
            attach_at,
        };
        let q = vec![-0.05, -0.05];
        let (col, opt) = subproblem_solve(&spec, &q);

        // Enumerate the three prunings by hand.
        let candidates: Vec<(Vec<usize>, f64)> = vec![
            (vec![0], 4.0 / nt),
            (vec![1, 2], 1.0 / nt + 2.0 / nt + 0.05),
            (vec![1, 3, 4], 1.0 / nt + 0.0 + 1.0 / nt + 0.05 + 0.05),
        ];
        let best = candidates
            .iter()
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        assert!((opt - best.1).abs() < 1e-12);
        assert_eq!(col.leaf_set, best.0);
    }

    #[test]
    fn initialization_is_feasible_and_root_valued() {
        let p = demo_problem(0.1);
        let state = initialize_master(&p);
        assert_eq!(state.columns.len(), 2);
        let lp = master_lp(&p, &state.columns);
        // Natural basis solves immediately and its objective is the summed
        // root errors over N*T.
        let sol = solve(&lp, Tolerances::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        let expected: f64 = p.err_cost[0][0] + p.err_cost[1][0];
        assert!((sol.objective - expected).abs() < 1e-12);
    }

    #[test]
    fn root_only_ensemble_prices_out_immediately() {
        use crate::dataset::Dataset;
        use crate::forest::{Ensemble, Tree, TreeNode};
        let tree = Tree::new(vec![TreeNode {
            feature: None,
            threshold: None,
            children: vec![],
            class_counts: vec![0, 0],
            pred: 0,
            err: 0,
        }])
        .unwrap();
        let ens = Ensemble::new(vec![tree.clone(), tree], vec![1.0], 2).unwrap();
        let data = Dataset::from_parts(vec![0.2, 0.8], 1, vec![0, 1], 2).unwrap();
        let ens = ens.with_stats(&data).unwrap();
        let prof = RoutingProfile::compute(&ens, &data).unwrap();
        let p = build_ip3(&ens, &prof, 0.5).unwrap();
        let sol = solve_dw(&p, &DwOptions::default()).unwrap();
        assert!(sol.optimal);
        assert_eq!(sol.rounds, 1);
    }

    #[test]
    fn dw_agrees_with_direct_solve_on_random_instances() {
        for seed in 0..20u64 {
            let params = SynthParams {
                n_trees: 1 + (seed as usize % 3),
                max_depth: 1 + (seed as usize % 3),
                n_examples: 5 + (seed as usize % 12),
                ..SynthParams::small()
            };
            let (ens, data) = random_instance(seed, &params);
            let prof = RoutingProfile::compute(&ens, &data).unwrap();
            for &lambda in &[0.0, 0.05, 0.7] {
                let p = build_ip3(&ens, &prof, lambda).unwrap();
                let direct = solve(&p.standard_lp(), Tolerances::default()).unwrap();
                assert_eq!(direct.status, SolveStatus::Optimal);
                let dw = solve_dw(&p, &DwOptions::default()).unwrap();
                assert!(dw.optimal);
                assert!(
                    (dw.objective - direct.objective).abs() <= 1e-7 * (1.0 + direct.objective.abs()),
                    "seed {seed} lambda {lambda}: dw {} direct {}",
                    dw.objective,
                    direct.objective
                );
            }
        }
    }

    #[test]
    fn single_tree_dw_matches_direct_and_oracle() {
        let params = SynthParams { n_trees: 1, ..SynthParams::small() };
        let (ens, data) = random_instance(5, &params);
        let prof = RoutingProfile::compute(&ens, &data).unwrap();
        let p = build_ip3(&ens, &prof, 0.1).unwrap();
        let direct = solve(&p.standard_lp(), Tolerances::default()).unwrap();
        let dw = solve_dw(&p, &DwOptions::default()).unwrap();
        let oracle = oracle::brute_force_on(&ens, &prof, 0.1).unwrap();
        assert!((dw.objective - direct.objective).abs() < 1e-7);
        assert!((dw.objective - oracle.objective).abs() < 1e-7);
    }

    #[test]
    fn generated_columns_are_valid_prunings() {
        let (ens, data) = random_instance(11, &SynthParams::small());
        let prof = RoutingProfile::compute(&ens, &data).unwrap();
        let p = build_ip3(&ens, &prof, 0.02).unwrap();
        let mut state = initialize_master(&p);
        let sol = solve_dw_with_state(&p, &DwOptions::default(), &mut state).unwrap();
        assert!(sol.optimal);
        for col in &state.columns {
            assert!(ens.trees[col.tree].is_valid_pruning(&col.leaf_set));
            // w entries re-derived from the leaf set must match.
            for (a, att) in p.attachments[col.tree].iter().enumerate() {
                let open = p.node_internal_in_pruning(col.tree, att.node, &col.leaf_set);
                assert_eq!(open, col.w[a]);
            }
        }
    }

    #[test]
    fn trace_rows_are_monotone_in_objective() {
        let (ens, data) = random_instance(13, &SynthParams::small());
        let prof = RoutingProfile::compute(&ens, &data).unwrap();
        let p = build_ip3(&ens, &prof, 0.05).unwrap();
        let opts = DwOptions { collect_trace: true, ..DwOptions::default() };
        let sol = solve_dw(&p, &opts).unwrap();
        assert!(!sol.trace.is_empty());
        for pair in sol.trace.windows(2) {
            assert!(pair[1].master_objective <= pair[0].master_objective + 1e-9);
        }
        // At convergence the last violation is at noise level.
        assert!(sol.trace.last().unwrap().max_violation <= 1e-8);
    }
}
