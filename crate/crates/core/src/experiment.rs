//! End-to-end runs: build a scenario, drive an engine, evaluate comparators,
//! bounds and monitors. Shared by the command-line front end and the tests.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algo::{run_ogd_with_schedule, run_with_schedule, EngineKind, RateSchedule, RunTrace};
use crate::error::{OcoError, Result};
use crate::linalg::RealVector;
use crate::metrics::{
    dual_bound_monitor, proposition1_monitor, regret_bound_for_schedule, static_gap, violation_bound_for_schedule,
    violation_gradient_monitor, MonitorReport, StaticGap, TheoremConstants,
};
use crate::oracle::{checkpoint_schedule, evaluate_checkpoints, verify_selection, Checkpoint};
use crate::problem::ProblemSpec;
use crate::prox::ProxConfig;
use crate::scenarios::{
    all_feasible_scenario, datacenter_scenario, static_lp_scenario, ScenarioStream,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Datacenter,
    StaticLp,
    AllFeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Primal-dual with `rho_t = t^-epsilon`.
    Adaptive,
    /// Projected OGD with `alpha_t = t^-epsilon`.
    Ogd,
    /// Primal-dual with `rho = 1/sqrt(T)`.
    FixedRate,
    /// Static problem, `rho_t = alpha t^-epsilon`, averaged iterate.
    StaticAveraged,
}

macro_rules! name_table {
    ($ty:ty, $what:literal, $($variant:path => $name:literal),+ $(,)?) => {
        impl $ty {
            pub fn as_str(&self) -> &'static str {
                match self { $($variant => $name),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = OcoError;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($variant),)+
                    other => Err(OcoError::InvalidInput(format!(concat!("unknown ", $what, " '{}'"), other))),
                }
            }
        }
    };
}

name_table!(ScenarioKind, "scenario",
    ScenarioKind::Datacenter => "datacenter",
    ScenarioKind::StaticLp => "static_lp",
    ScenarioKind::AllFeasible => "all_feasible",
);

name_table!(Algorithm, "algorithm",
    Algorithm::Adaptive => "adaptive",
    Algorithm::Ogd => "ogd",
    Algorithm::FixedRate => "fixed_rate",
    Algorithm::StaticAveraged => "static_averaged",
);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scenario: ScenarioKind,
    pub n: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub epsilon: f64,
    pub alpha: f64,
    pub horizon: usize,
    pub checkpoint_every: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scenario: ScenarioKind::Datacenter,
            n: 10,
            seed: 42,
            algorithm: Algorithm::Adaptive,
            epsilon: 0.5,
            alpha: 1.0,
            horizon: 25_000,
            checkpoint_every: 100,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(OcoError::InvalidInput("n must be >= 1".into()));
        }
        if self.horizon == 0 {
            return Err(OcoError::InvalidInput("T must be >= 1".into()));
        }
        if self.checkpoint_every == 0 {
            return Err(OcoError::InvalidInput("checkpoint_every must be >= 1".into()));
        }
        crate::algo::check_epsilon(self.epsilon)?;
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(OcoError::InvalidInput("alpha must be finite and > 0".into()));
        }
        if self.algorithm == Algorithm::StaticAveraged && self.scenario != ScenarioKind::StaticLp {
            return Err(OcoError::InvalidInput("static_averaged needs the static_lp scenario".into()));
        }
        Ok(())
    }

    pub fn schedule(&self) -> Result<RateSchedule> {
        match self.algorithm {
            Algorithm::Adaptive | Algorithm::Ogd => RateSchedule::adaptive(self.epsilon),
            Algorithm::FixedRate => RateSchedule::horizon_tuned(self.horizon),
            Algorithm::StaticAveraged => RateSchedule::scaled(self.alpha, self.epsilon),
        }
    }
}

/// A fresh stream for the configured scenario.
pub fn build_stream(cfg: &ExperimentConfig) -> Result<Box<dyn ScenarioStream>> {
    Ok(match cfg.scenario {
        ScenarioKind::Datacenter => Box::new(datacenter_scenario(cfg.n, cfg.seed)?),
        ScenarioKind::StaticLp => Box::new(static_lp_scenario(cfg.n, cfg.seed)?.0),
        ScenarioKind::AllFeasible => Box::new(all_feasible_scenario(cfg.n, cfg.seed)?),
    })
}

/// Bound constants for the configured scenario; the all-feasible scenario
/// uses the reduced constants with a dual radius of zero.
pub fn theorem_constants(cfg: &ExperimentConfig, spec: &ProblemSpec) -> Result<TheoremConstants> {
    match cfg.scenario {
        ScenarioKind::AllFeasible => TheoremConstants::all_feasible(&spec.consts, &spec.psi, &spec.phi),
        _ => TheoremConstants::for_spec(spec),
    }
}

/// Checkpoint values with the bounds at that horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointRow {
    #[serde(flatten)]
    pub checkpoint: Checkpoint,
    pub regret_bound: f64,
    pub violation_bound: f64,
}

/// Hindsight costs over the comparator sets at the final horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HindsightCosts {
    pub x_min: f64,
    pub x_t: f64,
    pub x_max: f64,
    /// The fixed-rate baseline's own `X_T` cost on the identical stream.
    pub fixed_rate_comparator: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub engine: EngineKind,
    pub constants: TheoremConstants,
    pub final_regret: f64,
    pub final_violation: f64,
    pub max_dual_norm: f64,
    pub regret_bound: f64,
    pub violation_bound: f64,
    pub selected_b_t: RealVector,
    /// Final-horizon condition `sum <y_t, b_{t+1} - w>`, re-evaluated from scratch.
    pub selection_condition: f64,
    pub hindsight: HindsightCosts,
    /// `cost(X^min) >= cost(X_T) >= cost(X^max)` at every checkpoint.
    pub hindsight_ordering_ok: bool,
    pub monitors: Vec<MonitorReport>,
    pub assumption_breaches: usize,
    /// Averaged-iterate gaps (static mode only).
    pub static_gap: Option<StaticGap>,
    pub checkpoints: Vec<CheckpointRow>,
    #[serde(skip)]
    pub trace: RunTrace,
}

impl RunReport {
    pub fn monitors_pass(&self) -> bool {
        self.monitors.iter().all(|m| m.pass)
    }

    pub fn monitor(&self, name: &str) -> Option<&MonitorReport> {
        self.monitors.iter().find(|m| m.name == name)
    }
}

/// Tolerance on the comparator ordering; the three values come from the same
/// greedy and differ only through the shift.
const ORDERING_TOL: f64 = 1e-9;

pub fn run_experiment(cfg: &ExperimentConfig, prox: &ProxConfig) -> Result<RunReport> {
    cfg.validate()?;
    let schedule = cfg.schedule()?;
    let mut stream = build_stream(cfg)?;
    let spec = stream.spec().clone();
    let tc = theorem_constants(cfg, &spec)?;

    let trace = match cfg.algorithm {
        Algorithm::Ogd => run_ogd_with_schedule(stream.as_mut(), schedule, cfg.horizon)?,
        _ => run_with_schedule(stream.as_mut(), schedule, cfg.horizon, prox)?,
    };

    let cps = checkpoint_schedule(cfg.horizon, cfg.checkpoint_every);
    let evaluated = evaluate_checkpoints(&spec, &trace, &cps, prox)?;
    let mut checkpoints = Vec::with_capacity(evaluated.len());
    let mut regret_check = MonitorReport::new("regret_bound", &trace.schedule);
    let mut violation_check = MonitorReport::new("violation_bound", &trace.schedule);
    let mut ordering_ok = true;
    for cp in evaluated {
        let rb = regret_bound_for_schedule(cp.t, &schedule, &tc)?;
        let vb = violation_bound_for_schedule(cp.t, &schedule, &tc)?;
        regret_check.observe(cp.t, cp.regret, rb);
        violation_check.observe(cp.t, cp.violation, vb);
        ordering_ok &= cp.cost_min + ORDERING_TOL >= cp.cost_selected && cp.cost_selected + ORDERING_TOL >= cp.cost_max;
        checkpoints.push(CheckpointRow { checkpoint: cp, regret_bound: rb, violation_bound: vb });
    }
    let last = checkpoints.last().expect("horizon >= 1 gives a final checkpoint").clone();

    let mut monitors = Vec::new();
    if trace.engine == EngineKind::PrimalDual {
        monitors.push(regret_check);
        monitors.push(violation_check);
        monitors.push(dual_bound_monitor(&trace, &tc));
        monitors.push(proposition1_monitor(&trace, &tc));
        monitors.push(violation_gradient_monitor(&trace, &spec.phi));
    }

    let fixed_rate_comparator = if cfg.algorithm == Algorithm::Adaptive {
        let mut baseline_stream = build_stream(cfg)?;
        let baseline = run_with_schedule(
            baseline_stream.as_mut(),
            RateSchedule::horizon_tuned(cfg.horizon)?,
            cfg.horizon,
            prox,
        )?;
        let cp = evaluate_checkpoints(&spec, &baseline, &[cfg.horizon], prox)?;
        Some(cp[0].cost_selected)
    } else {
        None
    };

    let static_gap = if cfg.algorithm == Algorithm::StaticAveraged {
        let (lp, f_star) = static_lp_scenario(cfg.n, cfg.seed)?;
        let x_bar = trace.prefix_average(cfg.horizon)?;
        let slack = spec.constraints.eval(&x_bar).add(&lp.b());
        Some(static_gap(x_bar, lp.cost().as_ref(), f_star, &slack, cfg.horizon))
    } else {
        None
    };

    Ok(RunReport {
        config: cfg.clone(),
        engine: trace.engine,
        constants: tc,
        final_regret: last.checkpoint.regret,
        final_violation: last.checkpoint.violation,
        max_dual_norm: trace.dual_norms().fold(0.0, f64::max),
        regret_bound: last.regret_bound,
        violation_bound: last.violation_bound,
        selection_condition: verify_selection(&trace, &last.checkpoint.w),
        selected_b_t: last.checkpoint.w.clone(),
        hindsight: HindsightCosts {
            x_min: last.checkpoint.cost_min,
            x_t: last.checkpoint.cost_selected,
            x_max: last.checkpoint.cost_max,
            fixed_rate_comparator,
        },
        hindsight_ordering_ok: ordering_ok,
        monitors,
        assumption_breaches: trace.breaches.len(),
        static_gap,
        checkpoints,
        trace,
    })
}
