//! Round-by-round drivers: the adaptive primal-dual method, its
//! constant-rate baseline, projected OGD and the static averaged mode.

use std::sync::Arc;

use crate::algo::state::{advance, advance_ogd, AlgoState, RateSchedule, RoundFeedback};
use crate::algo::trace::{AssumptionBreach, AssumptionKind, EngineKind, RunTrace};
use crate::cost::CostFunction;
use crate::error::{OcoError, Result};
use crate::linalg::{norm, RealVector};
use crate::problem::ProblemSpec;
use crate::prox::ProxConfig;
use crate::scenarios::{ScenarioStream, StaticStream};

// Relative slack on declared-constant checks so rounding on the boundary
// does not register as a breach.
const ASSUMPTION_TOL: f64 = 1e-12;

/// Runs the adaptive primal-dual method with `rho_t = t^-epsilon` for `horizon` rounds.
pub fn run(stream: &mut dyn ScenarioStream, epsilon: f64, horizon: usize, cfg: &ProxConfig) -> Result<RunTrace> {
    let schedule = RateSchedule::adaptive(epsilon)?;
    drive(stream, horizon, EngineKind::PrimalDual, schedule, cfg)
}

/// Same loop with the step fixed at `1/sqrt(T)`; needs the horizon up front.
pub fn run_fixed_rate(stream: &mut dyn ScenarioStream, horizon: usize, cfg: &ProxConfig) -> Result<RunTrace> {
    let schedule = RateSchedule::horizon_tuned(horizon)?;
    drive(stream, horizon, EngineKind::PrimalDual, schedule, cfg)
}

/// Primal-dual method under an arbitrary schedule.
pub fn run_with_schedule(
    stream: &mut dyn ScenarioStream,
    schedule: RateSchedule,
    horizon: usize,
    cfg: &ProxConfig,
) -> Result<RunTrace> {
    drive(stream, horizon, EngineKind::PrimalDual, schedule, cfg)
}

/// Projected online gradient descent with `alpha_t = 1/sqrt(t)`.
pub fn run_ogd(stream: &mut dyn ScenarioStream, horizon: usize) -> Result<RunTrace> {
    run_ogd_with_schedule(stream, RateSchedule::adaptive(0.5)?, horizon)
}

pub fn run_ogd_with_schedule(stream: &mut dyn ScenarioStream, schedule: RateSchedule, horizon: usize) -> Result<RunTrace> {
    drive(stream, horizon, EngineKind::Ogd, schedule, &ProxConfig::default())
}

/// Constant objective and perturbation with `rho_t = alpha t^-epsilon`.
/// Returns the averaged iterate `(1/T) sum x_t` and the full trace.
pub fn run_static_averaged(
    spec: &ProblemSpec,
    cost: Arc<dyn CostFunction>,
    b: RealVector,
    alpha: f64,
    epsilon: f64,
    horizon: usize,
    cfg: &ProxConfig,
) -> Result<(RealVector, RunTrace)> {
    let schedule = RateSchedule::scaled(alpha, epsilon)?;
    let mut stream = StaticStream::new(spec.clone(), cost, b)?;
    let trace = drive(&mut stream, horizon, EngineKind::PrimalDual, schedule, cfg)?;
    let x_bar = trace.prefix_average(horizon)?;
    Ok((x_bar, trace))
}

fn drive(
    stream: &mut dyn ScenarioStream,
    horizon: usize,
    engine: EngineKind,
    schedule: RateSchedule,
    cfg: &ProxConfig,
) -> Result<RunTrace> {
    if horizon == 0 {
        return Err(OcoError::InvalidInput("horizon must be >= 1".into()));
    }
    cfg.validate()?;
    let spec = stream.spec().clone();
    let mut trace = RunTrace::new(engine, schedule, stream.costs_are_linear());
    trace.records.reserve(horizon);

    let x1 = spec.initial_point();
    let mut state = AlgoState::initial(&spec, x1, schedule)?;
    let first = stream.reveal(1, &state.x)?;
    first.validate(spec.n(), spec.m())?;
    record(&spec, &mut trace, &state, first);

    for t in 1..horizon {
        let play = |x: &RealVector| stream.reveal(t + 1, x);
        let (next, feedback) = match engine {
            EngineKind::PrimalDual => advance(&spec, &state, play, cfg)?,
            EngineKind::Ogd => advance_ogd(&spec, &state, play)?,
        };
        state = next;
        record(&spec, &mut trace, &state, feedback);
    }
    Ok(trace)
}

fn record(spec: &ProblemSpec, trace: &mut RunTrace, state: &AlgoState, feedback: RoundFeedback) {
    let g_x = spec.constraints.eval(&state.x);
    check_assumptions(spec, trace, state.t, &g_x, &feedback);
    trace.push(state.x.clone(), state.y.clone(), state.rho, feedback, g_x);
}

fn check_assumptions(spec: &ProblemSpec, trace: &mut RunTrace, t: usize, g_x: &RealVector, fb: &RoundFeedback) {
    let c = &spec.consts;
    let margin = spec.slater_margin(&fb.b);
    if margin < c.eta * (1.0 - ASSUMPTION_TOL) {
        trace.breaches.push(AssumptionBreach { t, kind: AssumptionKind::Slater, value: margin, bound: c.eta });
    }
    let grad_norm = norm(&fb.f_grad);
    if grad_norm > c.f_star * (1.0 + ASSUMPTION_TOL) {
        trace.breaches.push(AssumptionBreach { t, kind: AssumptionKind::CostGradient, value: grad_norm, bound: c.f_star });
    }
    let slack_norm = norm(&g_x.add(&fb.b));
    if slack_norm > c.g * (1.0 + ASSUMPTION_TOL) {
        trace.breaches.push(AssumptionBreach { t, kind: AssumptionKind::ConstraintNorm, value: slack_norm, bound: c.g });
    }
}
