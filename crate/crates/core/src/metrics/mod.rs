//! Theorem constants, bounds, monitors and numerical verifiers.

mod constants;
mod lemma5;
mod monitors;
mod rates;

pub use constants::{
    compute_chi, compute_e, is_extrapolated, regret_bound, regret_bound_for_schedule, violation_bound,
    violation_bound_for_schedule, TheoremConstants,
};
pub use lemma5::{lemma5_check, lemma5_grid, lemma5_sweep, window_length, WindowSums};
pub use monitors::{
    dual_bound_monitor, proposition1_monitor, violation_gradient_monitor, Breach, MonitorReport, BOUND_TOL,
};
pub use rates::{
    corollary2_report, fit_decay, loglog_slope, nonincreasing_after, static_gap, Corollary2Report, DecayFit,
    StaticGap, GAP_FLOOR,
};
