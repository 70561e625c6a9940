//! Decay-rate estimates: log-log regression and the static averaged-iterate report.

use serde::{Deserialize, Serialize};

use crate::cost::CostFunction;
use crate::error::{OcoError, Result};
use crate::linalg::RealVector;

/// Least-squares slope of `ln y` against `ln x`. `None` with fewer than two
/// points or no spread in `x`; every `y` must be positive.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 || ys.iter().any(|y| !(*y > 0.0)) || xs.iter().any(|x| !(*x > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

/// Fitted exponent of a nonnegative series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayFit {
    /// Every value is exactly zero; no rate to fit.
    IdenticallyZero,
    /// Slope of `ln max(y, floor)` against `ln t`.
    Exponent { slope: f64 },
}

impl DecayFit {
    /// True when the series is zero or decays at least as fast as `t^max_slope`.
    pub fn at_most(&self, max_slope: f64) -> bool {
        match self {
            DecayFit::IdenticallyZero => true,
            DecayFit::Exponent { slope } => *slope <= max_slope,
        }
    }
}

/// Fits `y ~ t^slope` after flooring values at `floor` so exact zeros stay finite.
pub fn fit_decay(ts: &[usize], ys: &[f64], floor: f64) -> Result<DecayFit> {
    if ts.len() != ys.len() || ts.len() < 2 {
        return Err(OcoError::InvalidInput("need at least two matched points to fit a rate".into()));
    }
    if ys.iter().any(|y| !(*y >= 0.0)) {
        return Err(OcoError::InvalidInput("decay series must be nonnegative".into()));
    }
    if ys.iter().all(|y| *y == 0.0) {
        return Ok(DecayFit::IdenticallyZero);
    }
    let xs: Vec<f64> = ts.iter().map(|&t| t as f64).collect();
    let floored: Vec<f64> = ys.iter().map(|y| y.max(floor)).collect();
    let slope = loglog_slope(&xs, &floored)
        .ok_or_else(|| OcoError::InvalidInput("degenerate horizon grid".into()))?;
    Ok(DecayFit::Exponent { slope })
}

/// Floor used for gaps that can reach exact zero.
pub const GAP_FLOOR: f64 = 1e-12;

/// Gaps of the averaged iterate at one horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticGap {
    pub t: usize,
    pub x_bar: RealVector,
    /// `f(x_bar) - f_star`; negative when `x_bar` is infeasible.
    pub optimality_gap: f64,
    /// `||[g(x_bar) + b]^+||`
    pub infeasibility: f64,
}

pub fn static_gap(x_bar: RealVector, f: &dyn CostFunction, f_star: f64, g_plus_b: &RealVector, horizon: usize) -> StaticGap {
    StaticGap {
        t: horizon,
        optimality_gap: f.value(&x_bar) - f_star,
        infeasibility: g_plus_b.positive_part().norm(),
        x_bar,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corollary2Report {
    pub alpha: f64,
    pub epsilon: f64,
    pub points: Vec<StaticGap>,
    /// Fit of `|f(x_bar) - f_star|`.
    pub gap_fit: DecayFit,
    pub infeasibility_fit: DecayFit,
}

/// Fits both gap series over a horizon grid.
pub fn corollary2_report(points: Vec<StaticGap>, alpha: f64, epsilon: f64) -> Result<Corollary2Report> {
    let ts: Vec<usize> = points.iter().map(|p| p.t).collect();
    let gaps: Vec<f64> = points.iter().map(|p| p.optimality_gap.abs()).collect();
    let infeas: Vec<f64> = points.iter().map(|p| p.infeasibility).collect();
    let gap_fit = fit_decay(&ts, &gaps, GAP_FLOOR)?;
    let infeasibility_fit = fit_decay(&ts, &infeas, GAP_FLOOR)?;
    Ok(Corollary2Report { alpha, epsilon, points, gap_fit, infeasibility_fit })
}

/// True when no value after `burn_in` exceeds the running minimum by more than
/// the relative `wiggle` (plus `abs_tol` for series that touch zero).
pub fn nonincreasing_after(ts: &[usize], ys: &[f64], burn_in: usize, wiggle: f64, abs_tol: f64) -> bool {
    let mut best = f64::INFINITY;
    for (t, y) in ts.iter().zip(ys) {
        if *t < burn_in {
            continue;
        }
        if *y > best * (1.0 + wiggle) + abs_tol {
            return false;
        }
        best = best.min(*y);
    }
    true
}
