//! User-facing pruning orchestration: trade-off solves over lambda, budget
//! targeting by bisection, the per-tree baseline that ignores feature
//! sharing, pruned-ensemble extraction, evaluation and trade-off sweeps.

use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::dw::{self, DwOptions, MasterState};
use crate::error::{Error, Result, SolveError};
use crate::forest::{Ensemble, NodeId, RoutingProfile, Tree, TreeNode};
use crate::problem::{build_ip3, PruningProblem};
use crate::simplex::{solve_reusing, warm_start_solve, BasisState, SolveStatus, Tolerances};

/// Solutions are audited coordinate-wise against this threshold; the LP
/// relaxation must land on a 0/1 vertex, anything further away is a solver
/// bug.
pub const INTEGRALITY_TOL: f64 = 1e-6;

const BUDGET_BISECTION_STEPS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverChoice {
    Direct,
    Dw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VoteRule {
    /// Argmax of the averaged leaf class distributions (default).
    SoftAverage,
    /// Majority over per-tree predictions.
    HardMajority,
}

/// Which cost accounting produced `cost_term`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostModel {
    /// Features are paid once per example across the ensemble.
    Shared,
    /// Each tree pays its own features (the per-tree baseline).
    PerTree,
}

/// A pruning of every tree in an ensemble, with the realized objective
/// decomposition and the materialized pruned trees.
#[derive(Debug, Clone)]
pub struct PrunedEnsemble {
    pub lambda: f64,
    /// Per tree: the nodes that became leaves, in source ids.
    pub leaf_sets: Vec<Vec<NodeId>>,
    /// Average per-tree training error of the pruning.
    pub error_term: f64,
    /// Realized expected per-example feature cost (see `cost_model`).
    pub cost_term: f64,
    /// `error_term + lambda * cost_term`.
    pub objective: f64,
    pub cost_model: CostModel,
    /// The pruned trees, re-indexed in preorder, with the source costs.
    pub ensemble: Ensemble,
    /// Per tree: (source id, pruned id) for every retained node.
    pub id_maps: Vec<Vec<(NodeId, NodeId)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffPoint {
    pub lambda: f64,
    /// Realized expected train cost of the solution.
    pub train_cost: f64,
    pub train_error_term: f64,
    pub objective: f64,
    pub test_cost: Option<f64>,
    pub test_error: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct TradeoffCurve {
    pub points: Vec<TradeoffPoint>,
}

impl TradeoffCurve {
    /// Fixed CSV schema: lambda, train_cost, train_error_term, objective,
    /// test_cost, test_error. Missing test metrics render as empty fields.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,train_cost,train_error_term,objective,test_cost,test_error\n");
        for p in &self.points {
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                p.lambda,
                p.train_cost,
                p.train_error_term,
                p.objective,
                opt(p.test_cost),
                opt(p.test_error)
            ));
        }
        out
    }

    /// The point whose test error is nearest `target`; cost and then lambda
    /// break ties. Points without test metrics are skipped.
    pub fn nearest_by_error(&self, target: f64) -> Option<&TradeoffPoint> {
        self.points
            .iter()
            .filter(|p| p.test_error.is_some())
            .min_by(|a, b| {
                let da = (a.test_error.expect("filtered") - target).abs();
                let db = (b.test_error.expect("filtered") - target).abs();
                da.partial_cmp(&db)
                    .expect("finite errors")
                    .then(a.test_cost.partial_cmp(&b.test_cost).expect("finite costs"))
                    .then(a.lambda.partial_cmp(&b.lambda).expect("finite lambda"))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalMetrics {
    pub avg_cost: f64,
    pub error: f64,
}

#[derive(Debug, Clone)]
pub enum SweepGrid {
    Lambda(Vec<f64>),
    Budget(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub curve: TradeoffCurve,
    pub pruned: Vec<PrunedEnsemble>,
}

/// Result of a budget-targeted solve. The returned pruning is the
/// largest-cost solution not exceeding the budget among the bisection
/// iterates; when the realized cost jumps across the budget, `bracket`
/// reports the infeasible side of the breakpoint instead of interpolating.
#[derive(Debug, Clone)]
pub struct BudgetOutcome {
    pub pruned: PrunedEnsemble,
    pub point: TradeoffPoint,
    pub lambda_star: f64,
    pub bracket: Option<BudgetBracket>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetBracket {
    pub lambda_infeasible: f64,
    pub cost_infeasible: f64,
    pub error_infeasible: f64,
}

/// Reusable pruning context: statistics and routing computed once, solver
/// state (basis, generated columns) carried across solves.
pub struct PruneSession {
    ens: Ensemble,
    profile: RoutingProfile,
    problem: PruningProblem,
    tol: Tolerances,
    direct_cache: Option<BasisState>,
    dw_state: Option<MasterState>,
}

impl PruneSession {
    pub fn new(ens: &Ensemble, data: &Dataset) -> Result<Self> {
        Self::with_tolerances(ens, data, Tolerances::default())
    }

    pub fn with_tolerances(ens: &Ensemble, data: &Dataset, tol: Tolerances) -> Result<Self> {
        let ens = ens.with_stats(data)?;
        let profile = RoutingProfile::compute(&ens, data)?;
        let problem = build_ip3(&ens, &profile, 0.0)?;
        Ok(PruneSession { ens, profile, problem, tol, direct_cache: None, dw_state: None })
    }

    /// The ensemble with statistics recomputed on the session dataset.
    pub fn ensemble(&self) -> &Ensemble {
        &self.ens
    }

    pub fn profile(&self) -> &RoutingProfile {
        &self.profile
    }

    pub fn problem(&self) -> &PruningProblem {
        &self.problem
    }

    /// Solves the relaxation at `lambda` and returns the raw full-space
    /// point and its objective. Exposed for cross-checking the two solver
    /// paths against each other.
    pub fn lp_solution(&mut self, lambda: f64, solver: SolverChoice) -> Result<(Vec<f64>, f64)> {
        self.problem.set_lambda(lambda)?;
        match solver {
            SolverChoice::Direct => {
                let lp = self.problem.standard_lp();
                let hint = self.problem.initial_basis();
                let sol = solve_reusing(&lp, &mut self.direct_cache, Some(&hint), self.tol)?;
                if sol.status != SolveStatus::Optimal {
                    return Err(Error::Solver(SolveError::Numerical(format!(
                        "pruning LP reported {:?}; it is feasible and bounded by construction",
                        sol.status
                    ))));
                }
                Ok((sol.x, sol.objective))
            }
            SolverChoice::Dw => {
                let opts = DwOptions { tol: self.tol, ..DwOptions::default() };
                let state = self.dw_state.get_or_insert_with(|| dw::initialize_master(&self.problem));
                let sol = dw::solve_dw_with_state(&self.problem, &opts, state)?;
                if !sol.optimal {
                    return Err(Error::Solver(SolveError::Numerical(format!(
                        "column generation hit its round cap; bound gap {}",
                        sol.objective - sol.lower_bound
                    ))));
                }
                Ok((sol.x, sol.objective))
            }
        }
    }

    pub fn prune_with_lambda(
        &mut self,
        lambda: f64,
        solver: SolverChoice,
    ) -> Result<(PrunedEnsemble, TradeoffPoint)> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        let (x, objective) = self.lp_solution(lambda, solver)?;
        audit_integrality(&x)?;

        if lambda == 0.0 {
            // With zero cost weight, refining any optimal pruning keeps it
            // optimal, so the full trees are a canonical optimum; the solve
            // above still certifies the objective.
            let full: Vec<Vec<NodeId>> = self.problem.leaves.clone();
            let canonical = self.problem.point_for_leaf_sets(&full);
            let (err, _) = self.problem.decompose(&canonical);
            if (err - objective).abs() > 1e-9 * (1.0 + objective.abs()) {
                return Err(Error::Audit(format!(
                    "full trees should be optimal at lambda 0: error {err} vs solver {objective}"
                )));
            }
            return self.finish(full, lambda, objective, None);
        }

        let leaf_sets = self.leaf_sets_from(&x);
        self.finish(leaf_sets, lambda, objective, Some(&x))
    }

    pub fn prune_with_budget(&mut self, budget: f64, solver: SolverChoice) -> Result<BudgetOutcome> {
        if !(budget >= 0.0 && budget.is_finite()) {
            return Err(Error::InvalidArgument(format!("budget must be finite and >= 0, got {budget}")));
        }
        let at_zero = self.prune_with_lambda(0.0, solver)?;
        if at_zero.1.train_cost <= budget {
            return Ok(BudgetOutcome {
                lambda_star: 0.0,
                point: at_zero.1.clone(),
                pruned: at_zero.0,
                bracket: None,
            });
        }

        let lambda_max = self.lambda_max();
        let mut hi = self.prune_with_lambda(lambda_max, solver)?;
        debug_assert!(hi.1.train_cost <= budget + 1e-12, "cost at lambda_max must vanish");
        let mut hi_lambda = lambda_max;
        let mut lo = at_zero;
        let mut lo_lambda = 0.0;
        for _ in 0..BUDGET_BISECTION_STEPS {
            let mid = 0.5 * (lo_lambda + hi_lambda);
            if mid <= lo_lambda || mid >= hi_lambda {
                break;
            }
            let cand = self.prune_with_lambda(mid, solver)?;
            if cand.1.train_cost <= budget {
                hi = cand;
                hi_lambda = mid;
            } else {
                lo = cand;
                lo_lambda = mid;
            }
        }
        Ok(BudgetOutcome {
            lambda_star: hi_lambda,
            bracket: Some(BudgetBracket {
                lambda_infeasible: lo_lambda,
                cost_infeasible: lo.1.train_cost,
                error_infeasible: lo.1.train_error_term,
            }),
            point: hi.1.clone(),
            pruned: hi.0,
        })
    }

    /// A lambda beyond which the optimum pays no feature cost: any positive
    /// payment costs at least `min positive c / N`, while all-roots never
    /// loses more than `sum of root errors / N` of error term.
    fn lambda_max(&self) -> f64 {
        let root_err: f64 = self.ens.trees.iter().map(|t| f64::from(t.node(0).err)).sum();
        let min_pos = self
            .ens
            .feature_costs
            .iter()
            .copied()
            .filter(|&c| c > 0.0)
            .fold(f64::INFINITY, f64::min);
        if min_pos.is_finite() {
            (1.0 + root_err) / min_pos
        } else {
            1.0
        }
    }

    /// Prunes every tree separately, ignoring cross-tree feature sharing:
    /// each tree pays its own features at `lambda * c_k / N`. Solved twice
    /// per tree, by LP and by the pricing dynamic program, and cross-checked.
    pub fn prune_individual(&mut self, lambda: f64) -> Result<PrunedEnsemble> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        let t_count = self.ens.n_trees();
        // A single-tree problem scales errors by 1/N instead of 1/(N*T);
        // multiplying lambda by T makes it the per-tree slice of the
        // ensemble objective, up to an overall factor T.
        let lambda_scaled = lambda * t_count as f64;

        let mut leaf_sets = Vec::with_capacity(t_count);
        let mut error_term = 0.0;
        let mut cost_term = 0.0;
        for t in 0..t_count {
            let single = Ensemble::new(
                vec![self.ens.trees[t].clone()],
                self.ens.feature_costs.clone(),
                self.ens.n_classes,
            )?;
            let sub_profile = self.profile.restrict_to_tree(t);
            let problem = build_ip3(&single, &sub_profile, lambda_scaled)?;
            let lp = problem.standard_lp();
            let sol = warm_start_solve(&lp, &problem.initial_basis(), self.tol)?;
            if sol.status != SolveStatus::Optimal {
                return Err(Error::Solver(SolveError::Numerical(format!(
                    "per-tree LP reported {:?}",
                    sol.status
                ))));
            }
            audit_integrality(&sol.x)?;

            let specs = dw::tree_specs(&problem);
            let q: Vec<f64> = (0..problem.attachments[0].len())
                .map(|a| -(lambda_scaled * problem.pair_cost_raw[problem.attach_pair[0][a]]))
                .collect();
            let (col, dp_opt) = dw::subproblem_solve(&specs[0], &q);
            if (dp_opt - sol.objective).abs() > 1e-8 * (1.0 + sol.objective.abs()) {
                return Err(Error::Audit(format!(
                    "tree {t}: dynamic program value {dp_opt} disagrees with the LP optimum {}",
                    sol.objective
                )));
            }

            let set = if lambda == 0.0 { problem.leaves[0].clone() } else { col.leaf_set };
            let point = problem.point_for_leaf_sets(&[set.clone()]);
            let (err, cost) = problem.decompose(&point);
            if lambda == 0.0 {
                let full_obj = err + lambda_scaled * cost;
                if (full_obj - sol.objective).abs() > 1e-9 * (1.0 + sol.objective.abs()) {
                    return Err(Error::Audit(format!(
                        "tree {t}: full tree should be optimal at lambda 0 ({full_obj} vs {})",
                        sol.objective
                    )));
                }
            }
            error_term += err / t_count as f64;
            cost_term += cost;
            leaf_sets.push(set);
        }

        let (ensemble, id_maps) = materialize(&self.ens, &leaf_sets)?;
        Ok(PrunedEnsemble {
            lambda,
            leaf_sets,
            error_term,
            cost_term,
            objective: error_term + lambda * cost_term,
            cost_model: CostModel::PerTree,
            ensemble,
            id_maps,
        })
    }

    /// The ensemble-shared objective decomposition of an arbitrary pruning
    /// tuple (error term, shared cost term); used to compare per-tree
    /// prunings against ensemble prunings under the same accounting.
    pub fn shared_decomposition(&self, leaf_sets: &[Vec<NodeId>]) -> (f64, f64) {
        let x = self.problem.point_for_leaf_sets(leaf_sets);
        self.problem.decompose(&x)
    }

    pub fn sweep(
        &mut self,
        test: Option<&Dataset>,
        grid: &SweepGrid,
        solver: SolverChoice,
    ) -> Result<SweepResult> {
        let mut curve = TradeoffCurve::default();
        let mut pruned = Vec::new();
        match grid {
            SweepGrid::Lambda(lambdas) => {
                validate_grid(lambdas, "lambda")?;
                for &lambda in lambdas {
                    let (pe, mut point) = self.prune_with_lambda(lambda, solver).map_err(|e| {
                        Error::Audit(format!("sweep failed at lambda {lambda}: {e}"))
                    })?;
                    if let Some(test) = test {
                        let m = evaluate(&pe, test)?;
                        point.test_cost = Some(m.avg_cost);
                        point.test_error = Some(m.error);
                    }
                    curve.points.push(point);
                    pruned.push(pe);
                }
                enforce_monotone(&curve, false)?;
            }
            SweepGrid::Budget(budgets) => {
                validate_grid(budgets, "budget")?;
                for &budget in budgets {
                    let outcome = self.prune_with_budget(budget, solver).map_err(|e| {
                        Error::Audit(format!("sweep failed at budget {budget}: {e}"))
                    })?;
                    let mut point = outcome.point;
                    if let Some(test) = test {
                        let m = evaluate(&outcome.pruned, test)?;
                        point.test_cost = Some(m.avg_cost);
                        point.test_error = Some(m.error);
                    }
                    curve.points.push(point);
                    pruned.push(outcome.pruned);
                }
                enforce_monotone(&curve, true)?;
            }
        }
        Ok(SweepResult { curve, pruned })
    }

    fn leaf_sets_from(&self, x: &[f64]) -> Vec<Vec<NodeId>> {
        (0..self.problem.n_trees)
            .map(|t| {
                (0..self.problem.children[t].len())
                    .filter(|&h| x[self.problem.z_col(t, h)] > 0.5)
                    .collect()
            })
            .collect()
    }

    fn finish(
        &self,
        leaf_sets: Vec<Vec<NodeId>>,
        lambda: f64,
        solver_objective: f64,
        solver_x: Option<&[f64]>,
    ) -> Result<(PrunedEnsemble, TradeoffPoint)> {
        for (t, set) in leaf_sets.iter().enumerate() {
            if !self.ens.trees[t].is_valid_pruning(set) {
                return Err(Error::Audit(format!(
                    "tree {t}: extracted leaf set {set:?} is not a valid pruning"
                )));
            }
        }
        let induced = self.problem.point_for_leaf_sets(&leaf_sets);
        if let Some(x) = solver_x {
            // Every w must equal the indicator recomputed from the leaf
            // sets; after rounding the agreement must be exact.
            for (j, (&a, &b)) in x.iter().zip(&induced).enumerate() {
                if (a.round() - b).abs() > 0.0 {
                    return Err(Error::Audit(format!(
                        "column {j}: solver value {a} disagrees with the value {b} induced by the pruning"
                    )));
                }
            }
        }
        let (error_term, cost_term) = self.problem.decompose(&induced);
        let objective = error_term + lambda * cost_term;
        if (objective - solver_objective).abs() > 1e-7 * (1.0 + solver_objective.abs()) {
            return Err(Error::Audit(format!(
                "extracted objective {objective} disagrees with the solver objective {solver_objective}"
            )));
        }
        let (ensemble, id_maps) = materialize(&self.ens, &leaf_sets)?;
        let pruned = PrunedEnsemble {
            lambda,
            leaf_sets,
            error_term,
            cost_term,
            objective,
            cost_model: CostModel::Shared,
            ensemble,
            id_maps,
        };
        let point = TradeoffPoint {
            lambda,
            train_cost: cost_term,
            train_error_term: error_term,
            objective,
            test_cost: None,
            test_error: None,
        };
        Ok((pruned, point))
    }
}

fn validate_grid(grid: &[f64], what: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument(format!("{what} grid is empty")));
    }
    if grid.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidArgument(format!("{what} grid entries must be finite and >= 0")));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!("{what} grid must be strictly increasing")));
    }
    Ok(())
}

fn enforce_monotone(curve: &TradeoffCurve, budget_mode: bool) -> Result<()> {
    for w in curve.points.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (cost_ok, err_ok) = if budget_mode {
            // Budgets ascend: realized cost may grow, error may drop.
            (b.train_cost >= a.train_cost - 1e-9, b.train_error_term <= a.train_error_term + 1e-9)
        } else {
            (b.train_cost <= a.train_cost + 1e-9, b.train_error_term >= a.train_error_term - 1e-9)
        };
        if !cost_ok || !err_ok {
            return Err(Error::CurveInvariant(format!(
                "between lambda {} and {}: cost {} -> {}, error {} -> {}",
                a.lambda, b.lambda, a.train_cost, b.train_cost, a.train_error_term, b.train_error_term
            )));
        }
    }
    Ok(())
}

fn audit_integrality(x: &[f64]) -> Result<()> {
    let mut max_dev = 0.0;
    let mut at = 0;
    for (j, &v) in x.iter().enumerate() {
        let dev = (v - v.round()).abs();
        if dev > max_dev {
            max_dev = dev;
            at = j;
        }
    }
    if max_dev > INTEGRALITY_TOL {
        return Err(Error::NonIntegral { max_dev, col: at });
    }
    Ok(())
}

/// Collapses each tree at its pruning's leaf set, re-indexes nodes in
/// preorder and reports the id maps.
fn materialize(
    src: &Ensemble,
    leaf_sets: &[Vec<NodeId>],
) -> Result<(Ensemble, Vec<Vec<(NodeId, NodeId)>>)> {
    let mut trees = Vec::with_capacity(src.n_trees());
    let mut id_maps = Vec::with_capacity(src.n_trees());
    for (t, tree) in src.trees.iter().enumerate() {
        let set = &leaf_sets[t];
        let in_set = {
            let mut v = vec![false; tree.n_nodes()];
            for &h in set {
                v[h] = true;
            }
            v
        };
        // A node survives when no proper ancestor is a pruned leaf.
        let mut retained = vec![false; tree.n_nodes()];
        let mut new_id = vec![usize::MAX; tree.n_nodes()];
        let mut nodes: Vec<TreeNode> = Vec::new();
        let mut map = Vec::new();
        for h in 0..tree.n_nodes() {
            let keep = match tree.parent(h) {
                None => true,
                Some(p) => retained[p] && !in_set[p],
            };
            retained[h] = keep;
            if keep {
                new_id[h] = nodes.len();
                map.push((h, nodes.len()));
                let node = tree.node(h);
                if in_set[h] {
                    nodes.push(TreeNode {
                        feature: None,
                        threshold: None,
                        children: vec![],
                        class_counts: node.class_counts.clone(),
                        pred: node.pred,
                        err: node.err,
                    });
                } else {
                    nodes.push(node.clone());
                }
            }
        }
        // Remap children of retained internal nodes.
        for node in &mut nodes {
            for c in &mut node.children {
                let mapped = new_id[*c];
                debug_assert!(mapped != usize::MAX);
                *c = mapped;
            }
        }
        let pruned =
            Tree::new(nodes).map_err(|e| Error::Audit(format!("tree {t}: pruning produced {e}")))?;
        trees.push(pruned);
        id_maps.push(map);
    }
    let ensemble = Ensemble::new(trees, src.feature_costs.clone(), src.n_classes)?;
    Ok((ensemble, id_maps))
}

/// Test-time metrics of a pruned ensemble on a dataset: the average cost of
/// the unique features met across all trees, and the error of the averaged
/// leaf-distribution prediction.
pub fn evaluate(pruned: &PrunedEnsemble, data: &Dataset) -> Result<EvalMetrics> {
    evaluate_ensemble(&pruned.ensemble, data, VoteRule::SoftAverage)
}

pub fn evaluate_ensemble(ens: &Ensemble, data: &Dataset, vote: VoteRule) -> Result<EvalMetrics> {
    if data.n_features() != ens.n_features() {
        return Err(Error::Mismatch(format!(
            "dataset has {} features, ensemble expects {}",
            data.n_features(),
            ens.n_features()
        )));
    }
    let m = ens.n_classes;
    let per_example: Vec<(f64, bool)> = (0..data.n_examples())
        .into_par_iter()
        .map(|i| -> Result<(f64, bool)> {
            let row = data.row(i);
            let mut used = vec![false; ens.n_features()];
            let mut dist = vec![0.0f64; m];
            let mut votes = vec![0u32; m];
            for tree in &ens.trees {
                let path = tree.route(row)?;
                for &h in &path[..path.len() - 1] {
                    used[tree.node(h).feature.expect("internal node")] = true;
                }
                let leaf = tree.node(*path.last().expect("non-empty path"));
                let total: u32 = leaf.class_counts.iter().sum();
                if total > 0 {
                    for (d, &c) in dist.iter_mut().zip(&leaf.class_counts) {
                        *d += f64::from(c) / f64::from(total);
                    }
                } else {
                    // Empty leaf: fall back to its inherited prediction
                    // rather than an uninformative uniform vote.
                    dist[leaf.pred] += 1.0;
                }
                votes[leaf.pred] += 1;
            }
            let pred = match vote {
                VoteRule::SoftAverage => argmax_lowest(&dist),
                VoteRule::HardMajority => argmax_lowest_u32(&votes),
            };
            let cost: f64 = used
                .iter()
                .zip(&ens.feature_costs)
                .filter(|&(&u, _)| u)
                .map(|(_, &c)| c)
                .sum();
            Ok((cost, pred != data.label(i)))
        })
        .collect::<Result<Vec<_>>>()?;

    let n = data.n_examples() as f64;
    let avg_cost = per_example.iter().map(|&(c, _)| c).sum::<f64>() / n;
    let error = per_example.iter().filter(|&&(_, e)| e).count() as f64 / n;
    Ok(EvalMetrics { avg_cost, error })
}

fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn argmax_lowest_u32(values: &[u32]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// One-shot wrappers over [`PruneSession`].
pub fn prune_with_lambda(
    ens: &Ensemble,
    data: &Dataset,
    lambda: f64,
    solver: SolverChoice,
) -> Result<(PrunedEnsemble, TradeoffPoint)> {
    PruneSession::new(ens, data)?.prune_with_lambda(lambda, solver)
}

pub fn prune_with_budget(
    ens: &Ensemble,
    data: &Dataset,
    budget: f64,
    solver: SolverChoice,
) -> Result<BudgetOutcome> {
    PruneSession::new(ens, data)?.prune_with_budget(budget, solver)
}

pub fn prune_individual(ens: &Ensemble, data: &Dataset, lambda: f64) -> Result<PrunedEnsemble> {
    PruneSession::new(ens, data)?.prune_individual(lambda)
}

pub fn sweep(
    ens: &Ensemble,
    train: &Dataset,
    test: Option<&Dataset>,
    grid: &SweepGrid,
    solver: SolverChoice,
) -> Result<SweepResult> {
    PruneSession::new(ens, train)?.sweep(test, grid, solver)
}
