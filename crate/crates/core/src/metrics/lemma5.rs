//! Window sums of the step sizes over `S = {t, ..., t + ceil(t^epsilon)}`.

use serde::{Deserialize, Serialize};

use crate::algo::check_epsilon;
use crate::error::{OcoError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSums {
    pub t: usize,
    pub epsilon: f64,
    /// `|S| - 1`
    pub length: usize,
    pub sum_rho: f64,
    pub sum_rho_sq: f64,
    /// `log 2 <= sum_rho <= 3` and `sum_rho_sq <= 3`
    pub pass: bool,
}

/// `ceil(t^epsilon)`, exact when `t^epsilon` is an integer up to rounding.
pub fn window_length(t: usize, epsilon: f64) -> usize {
    let p = (t as f64).powf(epsilon);
    let r = p.round();
    if (p - r).abs() <= 1e-9 * r.max(1.0) {
        r as usize
    } else {
        p.ceil() as usize
    }
}

pub fn lemma5_check(t: usize, epsilon: f64) -> Result<WindowSums> {
    if t == 0 {
        return Err(OcoError::InvalidInput("window start must be >= 1".into()));
    }
    check_epsilon(epsilon)?;
    let length = window_length(t, epsilon);
    let mut sum_rho = 0.0;
    let mut sum_rho_sq = 0.0;
    for i in t..=t + length {
        let rho = (i as f64).powf(-epsilon);
        sum_rho += rho;
        sum_rho_sq += rho * rho;
    }
    let pass = (std::f64::consts::LN_2..=3.0).contains(&sum_rho) && sum_rho_sq <= 3.0;
    Ok(WindowSums { t, epsilon, length, sum_rho, sum_rho_sq, pass })
}

/// `1..=dense` followed by `count` log-spaced points from `dense` up to `top`.
pub fn lemma5_grid(dense: usize, count: usize, top: usize) -> Vec<usize> {
    let mut ts: Vec<usize> = (1..=dense).collect();
    let (lo, hi) = ((dense as f64).ln(), (top as f64).ln());
    for k in 1..=count {
        let t = (lo + (hi - lo) * k as f64 / count as f64).exp().round() as usize;
        if t > *ts.last().unwrap_or(&0) {
            ts.push(t);
        }
    }
    ts
}

/// Every `(t, epsilon)` that fails; empty means the sweep passed.
pub fn lemma5_sweep(ts: &[usize], epsilons: &[f64]) -> Result<Vec<WindowSums>> {
    let mut failures = Vec::new();
    for &eps in epsilons {
        for &t in ts {
            let w = lemma5_check(t, eps)?;
            if !w.pass {
                failures.push(w);
            }
        }
    }
    Ok(failures)
}
