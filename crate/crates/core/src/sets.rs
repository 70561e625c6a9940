//! Compact convex action sets and Euclidean projections onto them.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, OcoError, Result};
use crate::linalg::{dist, norm, positive, RealVector};

/// The set `C` of implementable actions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionSet {
    /// `{x : lo <= x <= hi}`
    Box { lo: RealVector, hi: RealVector },
    EuclideanBall { center: RealVector, radius: f64 },
    /// `{x >= 0 : sum(x) = scale}` in `dim` coordinates.
    Simplex { dim: usize, scale: f64 },
}

impl ActionSet {
    pub fn new_box(lo: RealVector, hi: RealVector) -> Result<Self> {
        check_dim(lo.dim(), hi.dim())?;
        lo.ensure_finite()?;
        hi.ensure_finite()?;
        if lo.dim() == 0 {
            return Err(OcoError::InvalidInput("box must have dimension >= 1".into()));
        }
        if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
            return Err(OcoError::InvalidInput("box requires lo <= hi".into()));
        }
        Ok(ActionSet::Box { lo, hi })
    }

    /// `[0, 1]^n`
    pub fn unit_box(n: usize) -> Result<Self> {
        Self::new_box(RealVector::zeros(n), RealVector::filled(n, 1.0))
    }

    pub fn new_ball(center: RealVector, radius: f64) -> Result<Self> {
        center.ensure_finite()?;
        if center.dim() == 0 {
            return Err(OcoError::InvalidInput("ball must have dimension >= 1".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(OcoError::InvalidInput(format!("ball radius must be > 0, got {radius}")));
        }
        Ok(ActionSet::EuclideanBall { center, radius })
    }

    pub fn new_simplex(dim: usize, scale: f64) -> Result<Self> {
        if dim == 0 {
            return Err(OcoError::InvalidInput("simplex must have dimension >= 1".into()));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(OcoError::InvalidInput(format!("simplex scale must be > 0, got {scale}")));
        }
        Ok(ActionSet::Simplex { dim, scale })
    }

    pub fn dim(&self) -> usize {
        match self {
            ActionSet::Box { lo, .. } => lo.dim(),
            ActionSet::EuclideanBall { center, .. } => center.dim(),
            ActionSet::Simplex { dim, .. } => *dim,
        }
    }

    /// Closed-form diameter `D = sup ||u - v||` over the set.
    pub fn diameter(&self) -> f64 {
        match self {
            ActionSet::Box { lo, hi } => dist(lo, hi),
            ActionSet::EuclideanBall { radius, .. } => 2.0 * radius,
            ActionSet::Simplex { dim, scale } => {
                if *dim > 1 {
                    scale * std::f64::consts::SQRT_2
                } else {
                    0.0
                }
            }
        }
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        if p.len() != self.dim() {
            return false;
        }
        match self {
            ActionSet::Box { lo, hi } => p
                .iter()
                .zip(lo.iter().zip(hi.iter()))
                .all(|(v, (l, h))| *v >= l - tol && *v <= h + tol),
            ActionSet::EuclideanBall { center, radius } => dist(p, center) <= radius + tol,
            ActionSet::Simplex { scale, .. } => {
                p.iter().all(|v| *v >= -tol) && (p.iter().sum::<f64>() - scale).abs() <= tol
            }
        }
    }

    /// Euclidean projection `argmin_{u in C} ||u - p||`.
    pub fn project(&self, p: &[f64]) -> Result<RealVector> {
        check_dim(self.dim(), p.len())?;
        if let Some(v) = p.iter().find(|v| !v.is_finite()) {
            return Err(OcoError::InvalidInput(format!("cannot project non-finite point ({v})")));
        }
        Ok(match self {
            ActionSet::Box { lo, hi } => p
                .iter()
                .zip(lo.iter().zip(hi.iter()))
                .map(|(v, (l, h))| v.clamp(*l, *h))
                .collect(),
            ActionSet::EuclideanBall { center, radius } => {
                let d = dist(p, center);
                if d <= *radius {
                    RealVector::from(p)
                } else {
                    let s = radius / d;
                    p.iter().zip(center.iter()).map(|(v, c)| c + s * (v - c)).collect()
                }
            }
            ActionSet::Simplex { scale, .. } => project_simplex(p, *scale),
        })
    }

    /// Some point of the set, used as a deterministic starting action.
    pub fn anchor(&self) -> RealVector {
        let n = self.dim();
        self.project(&vec![0.0; n]).expect("dimension matches by construction")
    }
}

/// Sort-and-threshold projection onto `{x >= 0, sum x = scale}`.
fn project_simplex(p: &[f64], scale: f64) -> RealVector {
    let mut sorted = p.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, v) in sorted.iter().enumerate() {
        cum += v;
        let candidate = (cum - scale) / (k as f64 + 1.0);
        if v - candidate > 0.0 {
            theta = candidate;
        }
    }
    p.iter().map(|v| positive(v - theta)).collect()
}

/// Componentwise projection onto the nonnegative orthant.
pub fn project_nonneg(p: &[f64]) -> RealVector {
    p.iter().map(|&v| positive(v)).collect()
}

/// Largest pairwise distance among `points`; used by tests against [`ActionSet::diameter`].
pub fn empirical_spread(points: &[RealVector]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(norm(&a.sub(b)));
        }
    }
    best
}
