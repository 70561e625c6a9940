//! Runtime checks of the dual-radius and violation inequalities over a trace.
//! Monitors never fail a run; they report what held and what did not.

use serde::{Deserialize, Serialize};

use crate::algo::{RateSchedule, RunTrace};
use crate::bregman::BregmanGenerator;
use crate::linalg::norm;
use crate::metrics::constants::{is_extrapolated, TheoremConstants};

/// Absolute slack allowed on top of every bound.
pub const BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Breach {
    pub t: usize,
    pub observed: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitorReport {
    pub name: String,
    pub pass: bool,
    /// Rounds inspected.
    pub checked: usize,
    /// `max_t (observed - bound)`; negative when every round holds with room.
    pub max_slack: f64,
    /// Round attaining `max_slack`.
    pub worst_t: usize,
    /// Largest observed value and its round.
    pub max_observed: f64,
    pub argmax_t: usize,
    /// The bound was applied to a schedule it was not derived for.
    pub baseline_extrapolated: bool,
    pub breaches: Vec<Breach>,
}

impl MonitorReport {
    pub(crate) fn new(name: &str, schedule: &RateSchedule) -> Self {
        MonitorReport {
            name: name.to_string(),
            pass: true,
            checked: 0,
            max_slack: f64::NEG_INFINITY,
            worst_t: 0,
            max_observed: f64::NEG_INFINITY,
            argmax_t: 0,
            baseline_extrapolated: is_extrapolated(schedule),
            breaches: Vec::new(),
        }
    }

    pub(crate) fn observe(&mut self, t: usize, observed: f64, bound: f64) {
        self.checked += 1;
        if observed > self.max_observed {
            self.max_observed = observed;
            self.argmax_t = t;
        }
        let slack = observed - bound;
        if slack > self.max_slack {
            self.max_slack = slack;
            self.worst_t = t;
        }
        if !(observed <= bound + BOUND_TOL) {
            self.pass = false;
            self.breaches.push(Breach { t, observed, bound });
        }
    }
}

/// `V(T) <= G + L_phi ||y_T|| / (2 rho_T)` at every prefix `T`.
pub fn proposition1_monitor(trace: &RunTrace, tc: &TheoremConstants) -> MonitorReport {
    let mut report = MonitorReport::new("violation_vs_dual_norm", &trace.schedule);
    for r in &trace.records {
        let v = r.cum_slack.positive_part().norm();
        let bound = tc.consts.g + tc.l_phi * norm(&r.y) / (2.0 * r.rho);
        report.observe(r.t, v, bound);
    }
    report
}

/// `V(T) <= ||[g(x_1) + b_1]^+|| + ||grad phi(y_T)|| / rho_{T-1}` at every prefix.
///
/// Follows from the dual optimality condition
/// `grad phi(y_{t+1}) >= grad phi(y_t) + rho_t (g(x_{t+1}) + b_{t+1})`
/// telescoped with `1/rho_t` nondecreasing and `grad phi(y) >= 0` on the orthant.
pub fn violation_gradient_monitor(trace: &RunTrace, phi: &BregmanGenerator) -> MonitorReport {
    let mut report = MonitorReport::new("violation_vs_dual_gradient", &trace.schedule);
    let Some(first) = trace.records.first() else { return report };
    let head = first.slack().positive_part().norm();
    let mut prev_rho = first.rho;
    for (i, r) in trace.records.iter().enumerate() {
        let v = r.cum_slack.positive_part().norm();
        let bound = if i == 0 { head } else { head + norm(&phi.gradient(&r.y)) / prev_rho };
        report.observe(r.t, v, bound);
        prev_rho = r.rho;
    }
    report
}

/// `||y_t|| <= E` for every round.
pub fn dual_bound_monitor(trace: &RunTrace, tc: &TheoremConstants) -> MonitorReport {
    let mut report = MonitorReport::new("dual_radius", &trace.schedule);
    for r in &trace.records {
        report.observe(r.t, norm(&r.y), tc.e);
    }
    report
}
