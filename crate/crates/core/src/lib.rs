//! Feature-cost-aware optimal pruning of decision tree ensembles.
//!
//! Given any ensemble of decision trees and per-feature acquisition costs,
//! this crate prunes the ensemble to trade average training error against
//! the expected test-time feature cost, with feature values cached across
//! trees so each one is paid at most once per example. The trade-off is a
//! 0/1 integer program whose LP relaxation is integral (its constraints form
//! a network matrix per tree), so a vertex LP solver recovers the exact
//! optimum. Two solver paths are provided and cross-checked: a direct
//! revised-simplex solve of the relaxation, and a Dantzig-Wolfe column
//! generation whose per-tree pricing subproblems are exact dynamic programs.

pub mod dataset;
pub mod dw;
pub mod error;
pub mod forest;
pub mod io;
pub mod oracle;
pub mod problem;
pub mod prune;
pub mod simplex;
pub mod synth;
pub mod trainer;

pub use dataset::{CostVector, CsvSchema, Dataset, LabelColumn};
pub use error::{Error, Result, SolveError};
pub use forest::{Ensemble, NodeId, RoutingProfile, Tree, TreeNode};
pub use problem::{build_ip3, to_network_form, NetworkForm, PruningProblem, SizeReport};
pub use prune::{
    evaluate, evaluate_ensemble, prune_individual, prune_with_budget, prune_with_lambda, sweep,
    BudgetOutcome, EvalMetrics, PruneSession, PrunedEnsemble, SolverChoice, SweepGrid, SweepResult,
    TradeoffCurve, TradeoffPoint, VoteRule,
};
pub use simplex::{LPSolution, SolveStatus, StandardLP, Tolerances};
pub use trainer::{train_ensemble, train_greedy_tree, TrainParams};
