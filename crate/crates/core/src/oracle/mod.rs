//! Hindsight comparators: perturbation statistics, the `b_T` selection rule,
//! offline solvers and the regret / violation evaluators.

mod eval;
mod hindsight;
mod stats;

pub use eval::{
    checkpoint_schedule, comparator_set, evaluate_checkpoints, offline_objective, regret, regret_with_objective,
    verify_selection, violation, violation_from_scratch, Checkpoint, Comparator,
};
pub use hindsight::{hindsight_cost, hindsight_cost_detailed, knapsack_cover, FeasibleSetSpec, HindsightPath};
pub use stats::{
    comparator_condition, perturbation_stats, perturbation_stats_from_series, select_b_t, select_b_t_from_series,
    PerturbationStats,
};
