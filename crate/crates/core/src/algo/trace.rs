use serde::{Deserialize, Serialize};

use crate::algo::state::{RateSchedule, RoundFeedback};
use crate::error::{OcoError, Result};
use crate::linalg::{norm, RealVector};

/// Which engine produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineKind {
    PrimalDual,
    Ogd,
}

/// Everything known about round `t` once it has been played.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub t: usize,
    pub x: RealVector,
    pub y: RealVector,
    pub rho: f64,
    pub f_value: f64,
    pub f_grad: RealVector,
    pub b: RealVector,
    /// `g(x_t)`
    pub g_x: RealVector,
    /// `sum_{s<=t} f_s(x_s)`
    pub cum_cost: f64,
    /// `sum_{s<=t} g(x_s) + b_s`
    pub cum_slack: RealVector,
}

impl RoundRecord {
    /// `g(x_t) + b_t`
    pub fn slack(&self) -> RealVector {
        self.g_x.add(&self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssumptionKind {
    /// `g(x_hat) + b_t + eta * 1 <= 0` failed.
    Slater,
    /// `||f'_t|| <= F_star` failed.
    CostGradient,
    /// `||g(x_t) + b_t|| <= G` failed.
    ConstraintNorm,
}

/// A round where the scenario's declared constants did not hold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionBreach {
    pub t: usize,
    pub kind: AssumptionKind,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub engine: EngineKind,
    pub schedule: RateSchedule,
    /// The stream promised linear costs, so `f_grad` are the cost vectors.
    pub linear_costs: bool,
    pub records: Vec<RoundRecord>,
    pub breaches: Vec<AssumptionBreach>,
}

impl RunTrace {
    pub fn new(engine: EngineKind, schedule: RateSchedule, linear_costs: bool) -> Self {
        RunTrace { engine, schedule, linear_costs, records: Vec::new(), breaches: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub(crate) fn push(&mut self, x: RealVector, y: RealVector, rho: f64, feedback: RoundFeedback, g_x: RealVector) {
        let slack = g_x.add(&feedback.b);
        let (cum_cost, cum_slack) = match self.records.last() {
            Some(prev) => (prev.cum_cost + feedback.f_value, prev.cum_slack.add(&slack)),
            None => (feedback.f_value, slack),
        };
        let t = self.records.len() + 1;
        self.records.push(RoundRecord {
            t,
            x,
            y,
            rho,
            f_value: feedback.f_value,
            f_grad: feedback.f_grad,
            b: feedback.b,
            g_x,
            cum_cost,
            cum_slack,
        });
    }

    /// Record of round `t` (1-based).
    pub fn round(&self, t: usize) -> Result<&RoundRecord> {
        if t == 0 || t > self.records.len() {
            return Err(OcoError::InvalidInput(format!(
                "round {t} outside trace of length {}",
                self.records.len()
            )));
        }
        Ok(&self.records[t - 1])
    }

    pub fn last(&self) -> Option<&RoundRecord> {
        self.records.last()
    }

    pub fn dual_norms(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| norm(&r.y))
    }

    /// `(1/T) sum_{t<=T} x_t`
    pub fn prefix_average(&self, horizon: usize) -> Result<RealVector> {
        let last = self.round(horizon)?;
        let mut acc = RealVector::zeros(last.x.dim());
        for r in &self.records[..horizon] {
            acc = acc.add(&r.x);
        }
        Ok(acc.scale(1.0 / horizon as f64))
    }
}
