use serde::{Deserialize, Serialize};

use crate::error::{check_dim, OcoError, Result};
use crate::linalg::RealVector;
use crate::problem::ProblemSpec;
use crate::prox::{dual_step, primal_step, ProxConfig};

/// `rho_t = t^-epsilon`.
pub fn step_rate(t: usize, epsilon: f64) -> Result<f64> {
    if t == 0 {
        return Err(OcoError::InvalidInput("rounds are numbered from 1".into()));
    }
    check_epsilon(epsilon)?;
    Ok(polynomial_rate(t, 1.0, epsilon))
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if (0.0..1.0).contains(&epsilon) {
        Ok(())
    } else {
        Err(OcoError::InvalidInput(format!("epsilon must lie in [0, 1), got {epsilon}")))
    }
}

#[inline]
fn polynomial_rate(t: usize, alpha: f64, epsilon: f64) -> f64 {
    if epsilon == 0.0 {
        alpha
    } else {
        alpha * (t as f64).powf(-epsilon)
    }
}

/// How the step size evolves with the round index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateSchedule {
    /// `alpha * t^-epsilon`; `alpha = 1` is the adaptive algorithm.
    Polynomial { alpha: f64, epsilon: f64 },
    /// The same step every round (horizon-dependent baselines).
    Constant { rho: f64 },
}

impl RateSchedule {
    pub fn adaptive(epsilon: f64) -> Result<Self> {
        Self::scaled(1.0, epsilon)
    }

    pub fn scaled(alpha: f64, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(OcoError::InvalidInput(format!("alpha must be > 0, got {alpha}")));
        }
        Ok(RateSchedule::Polynomial { alpha, epsilon })
    }

    /// `1 / sqrt(T)` for a run of known length `T`.
    pub fn horizon_tuned(horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(OcoError::InvalidInput("horizon must be >= 1".into()));
        }
        Ok(RateSchedule::Constant { rho: 1.0 / (horizon as f64).sqrt() })
    }

    pub fn rate(&self, t: usize) -> f64 {
        match *self {
            RateSchedule::Polynomial { alpha, epsilon } => polynomial_rate(t, alpha, epsilon),
            RateSchedule::Constant { rho } => rho,
        }
    }

    /// `sum_{t=1}^T rho_t`, summed literally.
    pub fn cumulative(&self, horizon: usize) -> f64 {
        match *self {
            RateSchedule::Constant { rho } => rho * horizon as f64,
            RateSchedule::Polynomial { .. } => (1..=horizon).map(|t| self.rate(t)).sum(),
        }
    }
}

/// Data revealed after an action has been played.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundFeedback {
    /// `f_t(x_t)`
    pub f_value: f64,
    /// A subgradient of `f_t` at `x_t`.
    pub f_grad: RealVector,
    /// Perturbation `b_t`.
    pub b: RealVector,
}

impl RoundFeedback {
    pub(crate) fn validate(&self, n: usize, m: usize) -> Result<()> {
        check_dim(n, self.f_grad.dim())?;
        check_dim(m, self.b.dim())?;
        self.f_grad.ensure_finite()?;
        self.b.ensure_finite()?;
        if !self.f_value.is_finite() {
            return Err(OcoError::InvalidInput("cost value is not finite".into()));
        }
        Ok(())
    }
}

/// State of the primal-dual method between rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgoState {
    pub t: usize,
    pub x: RealVector,
    pub y: RealVector,
    pub rho: f64,
    /// `f'_t(x_t)`; zero at `t = 1`.
    pub last_f_grad: RealVector,
    pub schedule: RateSchedule,
}

impl AlgoState {
    pub fn initial(spec: &ProblemSpec, x1: RealVector, schedule: RateSchedule) -> Result<Self> {
        check_dim(spec.n(), x1.dim())?;
        if !spec.action_set.contains(&x1, 1e-12) {
            return Err(OcoError::InvalidInput("x_1 must lie in the action set".into()));
        }
        Ok(AlgoState {
            t: 1,
            rho: schedule.rate(1),
            last_f_grad: RealVector::zeros(spec.n()),
            y: RealVector::zeros(spec.m()),
            x: x1,
            schedule,
        })
    }
}

/// One iteration of the primal-dual method.
///
/// `play` receives `x_{t+1}` and must return the round-`t+1` feedback
/// (cost subgradient at `x_{t+1}` and `b_{t+1}`). The primal decision is
/// taken before `play` is called, so it cannot depend on that feedback.
pub fn advance<F>(spec: &ProblemSpec, state: &AlgoState, play: F, cfg: &ProxConfig) -> Result<(AlgoState, RoundFeedback)>
where
    F: FnOnce(&RealVector) -> Result<RoundFeedback>,
{
    let rho = state.schedule.rate(state.t);
    let x_next = primal_step(spec, &state.x, &state.y, &state.last_f_grad, rho, cfg)?;
    let feedback = play(&x_next)?;
    feedback.validate(spec.n(), spec.m())?;
    let slack = spec.constraints.eval(&x_next).add(&feedback.b);
    let y_next = dual_step(spec, &state.y, &slack, rho, cfg)?;
    let next = AlgoState {
        t: state.t + 1,
        x: x_next,
        y: y_next,
        rho: state.schedule.rate(state.t + 1),
        last_f_grad: feedback.f_grad.clone(),
        schedule: state.schedule,
    };
    Ok((next, feedback))
}

/// One projected online-gradient step; the dual variable is left at zero.
pub fn advance_ogd<F>(spec: &ProblemSpec, state: &AlgoState, play: F) -> Result<(AlgoState, RoundFeedback)>
where
    F: FnOnce(&RealVector) -> Result<RoundFeedback>,
{
    let alpha = state.schedule.rate(state.t);
    let x_next = spec.action_set.project(&state.x.axpy(-alpha, &state.last_f_grad))?;
    let feedback = play(&x_next)?;
    feedback.validate(spec.n(), spec.m())?;
    let next = AlgoState {
        t: state.t + 1,
        x: x_next,
        y: state.y.clone(),
        rho: state.schedule.rate(state.t + 1),
        last_f_grad: feedback.f_grad.clone(),
        schedule: state.schedule,
    };
    Ok((next, feedback))
}
