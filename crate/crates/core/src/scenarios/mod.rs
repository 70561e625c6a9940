//! Seeded problem generators that reveal data one round at a time.

mod all_feasible;
mod datacenter;
mod prng;
mod static_lp;

use std::sync::Arc;

pub use all_feasible::{all_feasible_scenario, AllFeasibleScenario};
pub use datacenter::{datacenter_scenario, DatacenterScenario};
pub use prng::Prng;
pub use static_lp::{static_lp_scenario, StaticLp};

use crate::algo::RoundFeedback;
use crate::cost::CostFunction;
use crate::error::{check_dim, OcoError, Result};
use crate::linalg::RealVector;
use crate::problem::ProblemSpec;

/// A source of per-round data.
///
/// Rounds are revealed strictly in order `1, 2, ...`, each one only after the
/// learner has committed to the action for that round. By convention round 1
/// carries no cost (`f_1 = 0`): the learner has nothing to learn from before
/// its first decision.
pub trait ScenarioStream {
    fn spec(&self) -> &ProblemSpec;

    /// Cost subgradient/value at `played` and the perturbation `b_t`.
    fn reveal(&mut self, t: usize, played: &[f64]) -> Result<RoundFeedback>;

    /// True when every `f_t` is linear, so `f_grad` is the cost vector itself.
    fn costs_are_linear(&self) -> bool {
        false
    }
}

pub(crate) fn expect_round(next: usize, t: usize) -> Result<()> {
    if t == next {
        Ok(())
    } else {
        Err(OcoError::InvalidInput(format!("round {t} requested, expected round {next}")))
    }
}

/// `f_t = f` and `b_t = b` for every round after the first.
#[derive(Debug)]
pub struct StaticStream {
    spec: ProblemSpec,
    cost: Arc<dyn CostFunction>,
    b: RealVector,
    next: usize,
}

impl StaticStream {
    pub fn new(spec: ProblemSpec, cost: Arc<dyn CostFunction>, b: RealVector) -> Result<Self> {
        check_dim(spec.m(), b.dim())?;
        b.ensure_finite()?;
        Ok(StaticStream { spec, cost, b, next: 1 })
    }
}

impl ScenarioStream for StaticStream {
    fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    fn reveal(&mut self, t: usize, played: &[f64]) -> Result<RoundFeedback> {
        expect_round(self.next, t)?;
        check_dim(self.spec.n(), played.len())?;
        self.next += 1;
        let (f_value, f_grad) = if t == 1 {
            (0.0, RealVector::zeros(played.len()))
        } else {
            (self.cost.value(played), self.cost.subgradient(played))
        };
        Ok(RoundFeedback { f_value, f_grad, b: self.b.clone() })
    }

    fn costs_are_linear(&self) -> bool {
        self.cost.linear_coefficients().is_some()
    }
}

/// Replays a fixed, finite list of linear costs and perturbations.
#[derive(Debug, Clone)]
pub struct ReplayStream {
    spec: ProblemSpec,
    /// `(cost vector l_t, b_t)` for `t = 1, 2, ...`
    rounds: Vec<(RealVector, RealVector)>,
    next: usize,
}

impl ReplayStream {
    pub fn new(spec: ProblemSpec, rounds: Vec<(RealVector, RealVector)>) -> Result<Self> {
        for (l, b) in &rounds {
            check_dim(spec.n(), l.dim())?;
            check_dim(spec.m(), b.dim())?;
        }
        Ok(ReplayStream { spec, rounds, next: 1 })
    }
}

impl ScenarioStream for ReplayStream {
    fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    fn reveal(&mut self, t: usize, played: &[f64]) -> Result<RoundFeedback> {
        expect_round(self.next, t)?;
        check_dim(self.spec.n(), played.len())?;
        let (l, b) = self.rounds.get(t - 1).ok_or(OcoError::StreamExhausted { round: t })?;
        self.next += 1;
        Ok(RoundFeedback { f_value: l.dot(played), f_grad: l.clone(), b: b.clone() })
    }

    fn costs_are_linear(&self) -> bool {
        true
    }
}
