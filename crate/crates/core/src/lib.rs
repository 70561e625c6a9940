//! Online convex optimization with perturbed long-term constraints.
//!
//! The learner picks `x_t` in a convex set `C`, then observes a convex cost
//! `f_t` and a perturbation `b_t`; the constraint `g(x) + b_t <= 0` only has
//! to hold on average. The adaptive primal-dual method in [`algo`] keeps both
//! the regret against the best fixed decision in hindsight and the cumulative
//! violation sublinear. [`oracle`] computes the hindsight comparators,
//! [`metrics`] the theoretical bounds and monitors, and [`scenarios`] the
//! seeded problem generators.

// `!(x > 0.0)` is used on purpose so NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algo;
pub mod bregman;
pub mod cost;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod metrics;
pub mod oracle;
pub mod problem;
pub mod prox;
pub mod scenarios;
pub mod sets;
pub mod verify;

pub use algo::{
    run, run_fixed_rate, run_ogd, run_ogd_with_schedule, run_static_averaged, run_with_schedule, step_rate,
    RateSchedule, RoundFeedback, RoundRecord, RunTrace,
};
pub use bregman::{bregman_divergence, three_point_residual, BregmanGenerator};
pub use cost::{CostFunction, LinearCost, SquaredDistanceCost, SumCost};
pub use error::{OcoError, Result};
pub use linalg::{Matrix, RealVector};
pub use problem::{AssumptionConstants, ConstraintMap, ProblemSpec};
pub use prox::{dual_step, primal_step, ProxConfig};
pub use scenarios::ScenarioStream;
pub use sets::ActionSet;
