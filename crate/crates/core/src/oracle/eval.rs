//! Perturbed regret and cumulative violation, final and at checkpoints.

use serde::{Deserialize, Serialize};

use crate::algo::RunTrace;
use crate::cost::{CostFunction, LinearCost};
use crate::error::{OcoError, Result};
use crate::linalg::{norm, RealVector};
use crate::oracle::hindsight::{hindsight_cost, FeasibleSetSpec};
use crate::oracle::stats::{comparator_condition, perturbation_stats, select_b_t, PerturbationStats};
use crate::problem::ProblemSpec;
use crate::prox::ProxConfig;

/// `||[sum_t g(x_t) + b_t]^+||` from the running sum kept in the trace.
pub fn violation(trace: &RunTrace) -> f64 {
    trace.last().map_or(0.0, |r| r.cum_slack.positive_part().norm())
}

/// Same quantity summed from scratch.
pub fn violation_from_scratch(trace: &RunTrace) -> f64 {
    let Some(first) = trace.records.first() else { return 0.0 };
    let mut acc = vec![0.0; first.b.dim()];
    for r in &trace.records {
        for (j, a) in acc.iter_mut().enumerate() {
            *a += r.g_x[j] + r.b[j];
        }
    }
    RealVector::new(acc).positive_part().norm()
}

/// `sum_t f_t` as a single linear cost; only defined for linear streams.
pub fn offline_objective(trace: &RunTrace) -> Result<LinearCost> {
    if !trace.linear_costs {
        return Err(OcoError::InvalidInput("offline objective needs linear per-round costs".into()));
    }
    let first = trace.records.first().ok_or_else(|| OcoError::InvalidInput("empty trace".into()))?;
    let mut acc = RealVector::zeros(first.f_grad.dim());
    for r in &trace.records {
        acc = acc.add(&r.f_grad);
    }
    Ok(LinearCost::new(acc))
}

/// `sum_t f_t(x_t) - min_{x in fs} sum_t f_t(x)` for a linear-cost trace.
pub fn regret(trace: &RunTrace, fs: &FeasibleSetSpec) -> Result<f64> {
    let objective = offline_objective(trace)?;
    regret_with_objective(trace, &objective, fs, &ProxConfig::default())
}

/// Regret against an explicitly supplied offline objective.
pub fn regret_with_objective(
    trace: &RunTrace,
    objective: &dyn CostFunction,
    fs: &FeasibleSetSpec,
    cfg: &ProxConfig,
) -> Result<f64> {
    let last = trace.last().ok_or_else(|| OcoError::InvalidInput("empty trace".into()))?;
    let (best, _) = hindsight_cost(objective, fs, cfg)?;
    Ok(last.cum_cost - best)
}

/// The three comparator sets of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparator {
    /// Shift by `bar_b`: the smallest set.
    Min,
    /// Shift by the selected `b_T`.
    Selected,
    /// Shift by `underline_b`: the largest set.
    Max,
}

/// Builds the comparator set of `kind` for a finished run.
pub fn comparator_set(spec: &ProblemSpec, trace: &RunTrace, kind: Comparator) -> Result<FeasibleSetSpec> {
    let w = match kind {
        Comparator::Min => perturbation_stats(trace)?.bar_b,
        Comparator::Max => perturbation_stats(trace)?.underline_b,
        Comparator::Selected => select_b_t(trace)?,
    };
    FeasibleSetSpec::new(spec.action_set.clone(), spec.constraints.clone(), w)
}

/// Every-`every` rounds plus the final one.
pub fn checkpoint_schedule(horizon: usize, every: usize) -> Vec<usize> {
    let every = every.max(1);
    let mut out: Vec<usize> = (1..=horizon / every).map(|k| k * every).collect();
    if out.last() != Some(&horizon) && horizon > 0 {
        out.push(horizon);
    }
    out
}

/// Prefix quantities at one checkpoint `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub t: usize,
    pub cum_cost: f64,
    pub violation: f64,
    pub dual_norm: f64,
    pub stats: PerturbationStats,
    /// Selected comparator shift for the prefix.
    pub w: RealVector,
    /// `sum_{t<T} <y_t, b_{t+1} - w>`; must be `<= 0`.
    pub condition: f64,
    pub cost_min: f64,
    pub cost_selected: f64,
    pub cost_max: f64,
    /// Regret against the selected set.
    pub regret: f64,
}

impl Checkpoint {
    pub fn regret_min(&self) -> f64 {
        self.cum_cost - self.cost_min
    }

    pub fn regret_max(&self) -> f64 {
        self.cum_cost - self.cost_max
    }
}

/// Evaluates prefixes `1..=T` for every `T` in `checkpoints` (ascending) in a
/// single pass, keeping cumulative cost coefficients and dual-weighted sums.
pub fn evaluate_checkpoints(
    spec: &ProblemSpec,
    trace: &RunTrace,
    checkpoints: &[usize],
    cfg: &ProxConfig,
) -> Result<Vec<Checkpoint>> {
    if !trace.linear_costs {
        return Err(OcoError::InvalidInput("checkpoint evaluation needs linear per-round costs".into()));
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(OcoError::InvalidInput("checkpoints must be strictly increasing".into()));
    }
    if let Some(&last) = checkpoints.last() {
        trace.round(last)?;
    }
    let (n, m) = (spec.n(), spec.m());
    let mut coeffs = vec![0.0; n];
    let mut b_sum = vec![0.0; m];
    let mut b_max = vec![f64::NEG_INFINITY; m];
    let mut dual_weight = vec![0.0; m];
    let mut dual_weighted_b = vec![0.0; m];
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next_cp = checkpoints.iter().peekable();

    for (idx, r) in trace.records.iter().enumerate() {
        let t = idx + 1;
        for (c, g) in coeffs.iter_mut().zip(r.f_grad.iter()) {
            *c += g;
        }
        for j in 0..m {
            b_sum[j] += r.b[j];
            b_max[j] = b_max[j].max(r.b[j]);
        }
        if idx > 0 {
            let prev_y = &trace.records[idx - 1].y;
            for j in 0..m {
                dual_weight[j] += prev_y[j];
                dual_weighted_b[j] += prev_y[j] * r.b[j];
            }
        }
        if next_cp.peek() != Some(&&t) {
            continue;
        }
        next_cp.next();

        let underline: RealVector = (0..m).map(|j| (b_sum[j] / t as f64).min(b_max[j])).collect();
        let bar = RealVector::new(b_max.clone());
        let w: RealVector = (0..m)
            .map(|j| {
                if dual_weight[j] > 0.0 {
                    (dual_weighted_b[j] / dual_weight[j]).clamp(underline[j], bar[j])
                } else {
                    underline[j]
                }
            })
            .collect();
        let condition: f64 = (0..m).map(|j| dual_weighted_b[j] - w[j] * dual_weight[j]).sum();
        let objective = LinearCost::new(RealVector::new(coeffs.clone()));
        let cost_of = |shift: &RealVector| -> Result<f64> {
            let fs = FeasibleSetSpec::new(spec.action_set.clone(), spec.constraints.clone(), shift.clone())?;
            hindsight_cost(&objective, &fs, cfg).map(|(v, _)| v)
        };
        let cost_min = cost_of(&bar)?;
        let cost_selected = cost_of(&w)?;
        let cost_max = cost_of(&underline)?;
        out.push(Checkpoint {
            t,
            cum_cost: r.cum_cost,
            violation: r.cum_slack.positive_part().norm(),
            dual_norm: norm(&r.y),
            stats: PerturbationStats { underline_b: underline, bar_b: bar },
            w,
            condition,
            cost_min,
            cost_selected,
            cost_max,
            regret: r.cum_cost - cost_selected,
        });
    }
    Ok(out)
}

/// Re-evaluates the comparator condition for a whole run from scratch.
pub fn verify_selection(trace: &RunTrace, w: &[f64]) -> f64 {
    let ys: Vec<&[f64]> = trace.records.iter().map(|r| r.y.as_slice()).collect();
    let bs: Vec<&[f64]> = trace.records.iter().map(|r| r.b.as_slice()).collect();
    comparator_condition(&ys, &bs, w)
}
