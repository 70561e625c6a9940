//! Statistics of the perturbation sequence and the choice of the comparator shift `b_T`.

use serde::{Deserialize, Serialize};

use crate::algo::RunTrace;
use crate::error::{check_dim, OcoError, Result};
use crate::linalg::{dot, RealVector};

/// Componentwise mean and maximum of `b_1..b_T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationStats {
    /// `(1/T) sum_t b_t`
    pub underline_b: RealVector,
    /// `max_t b_t`
    pub bar_b: RealVector,
}

pub fn perturbation_stats(trace: &RunTrace) -> Result<PerturbationStats> {
    let bs: Vec<&[f64]> = trace.records.iter().map(|r| r.b.as_slice()).collect();
    perturbation_stats_from_series(&bs)
}

pub fn perturbation_stats_from_series<B: AsRef<[f64]>>(bs: &[B]) -> Result<PerturbationStats> {
    let first = bs.first().ok_or_else(|| OcoError::InvalidInput("no perturbations recorded".into()))?;
    let m = first.as_ref().len();
    let mut sum = vec![0.0; m];
    let mut max = vec![f64::NEG_INFINITY; m];
    for b in bs {
        let b = b.as_ref();
        check_dim(m, b.len())?;
        for j in 0..m {
            sum[j] += b[j];
            max[j] = max[j].max(b[j]);
        }
    }
    let count = bs.len() as f64;
    let mut underline: Vec<f64> = sum.into_iter().map(|s| s / count).collect();
    // the mean of a finite set never exceeds its max; rounding can nudge it over
    for j in 0..m {
        underline[j] = underline[j].min(max[j]);
    }
    Ok(PerturbationStats { underline_b: RealVector::new(underline), bar_b: RealVector::new(max) })
}

/// `sum_{t=1}^{T-1} <y_t, b_{t+1} - w>` over the recorded series (the term
/// for `t = T` needs `b_{T+1}`, which a finished run has not observed).
pub fn comparator_condition<Y: AsRef<[f64]>, B: AsRef<[f64]>>(ys: &[Y], bs: &[B], w: &[f64]) -> f64 {
    let horizon = ys.len().min(bs.len());
    let mut total = 0.0;
    for t in 0..horizon.saturating_sub(1) {
        let b_next = bs[t + 1].as_ref();
        let diff: Vec<f64> = b_next.iter().zip(w).map(|(b, w)| b - w).collect();
        total += dot(ys[t].as_ref(), &diff);
    }
    total
}

/// Comparator shift `w` in `[underline_b, bar_b]` with `sum <y_t, b_{t+1} - w> <= 0`.
pub fn select_b_t(trace: &RunTrace) -> Result<RealVector> {
    let ys: Vec<&[f64]> = trace.records.iter().map(|r| r.y.as_slice()).collect();
    let bs: Vec<&[f64]> = trace.records.iter().map(|r| r.b.as_slice()).collect();
    select_b_t_from_series(&ys, &bs)
}

/// Per component, the dual-weighted mean of `b_{t+1}` clamped into
/// `[underline_b, bar_b]`; components that were never dual-active fall back to
/// `underline_b`. Each component's term of the condition is then `<= 0` on its own.
pub fn select_b_t_from_series<Y: AsRef<[f64]>, B: AsRef<[f64]>>(ys: &[Y], bs: &[B]) -> Result<RealVector> {
    let stats = perturbation_stats_from_series(bs)?;
    let m = stats.bar_b.dim();
    let horizon = ys.len().min(bs.len());
    let mut weight = vec![0.0; m];
    let mut weighted = vec![0.0; m];
    for t in 0..horizon.saturating_sub(1) {
        let y = ys[t].as_ref();
        check_dim(m, y.len())?;
        let b_next = bs[t + 1].as_ref();
        for j in 0..m {
            weight[j] += y[j];
            weighted[j] += y[j] * b_next[j];
        }
    }
    let w = (0..m)
        .map(|j| {
            let lo = stats.underline_b[j];
            let hi = stats.bar_b[j];
            if weight[j] > 0.0 {
                (weighted[j] / weight[j]).clamp(lo, hi)
            } else {
                lo
            }
        })
        .collect();
    Ok(RealVector::new(w))
}
