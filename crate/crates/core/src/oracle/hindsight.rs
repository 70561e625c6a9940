//! Offline best fixed decision over `{x in C : g(x) + w <= 0}`.

use serde::{Deserialize, Serialize};

use crate::cost::CostFunction;
use crate::error::{check_dim, OcoError, Result};
use crate::linalg::{norm, RealVector};
use crate::problem::ConstraintMap;
use crate::prox::ProxConfig;
use crate::sets::ActionSet;

/// Violation above which the generic solver declares the set empty.
const INFEASIBLE_TOL: f64 = 1e-6;
/// Violation the generic solver must reach to report success.
const FEASIBLE_TOL: f64 = 1e-8;
const PENALTY_STAGES: usize = 20;

/// The set `{x in base : g(x) + w <= 0}`.
#[derive(Debug, Clone)]
pub struct FeasibleSetSpec {
    pub base: ActionSet,
    pub constraints: ConstraintMap,
    pub w: RealVector,
}

impl FeasibleSetSpec {
    pub fn new(base: ActionSet, constraints: ConstraintMap, w: RealVector) -> Result<Self> {
        check_dim(base.dim(), constraints.n())?;
        check_dim(constraints.m(), w.dim())?;
        w.ensure_finite()?;
        Ok(FeasibleSetSpec { base, constraints, w })
    }

    /// `g(x) + w`
    pub fn slack(&self, x: &[f64]) -> RealVector {
        self.constraints.eval(x).add(&self.w)
    }

    /// `||[g(x) + w]^+||`
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.slack(x).positive_part().norm()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.base.contains(x, tol) && self.slack(x).iter().all(|s| *s <= tol)
    }

    /// True when `x_hat` certifies the set is nonempty.
    pub fn has_interior_witness(&self, x_hat: &[f64]) -> bool {
        self.contains(x_hat, 0.0)
    }

    /// Box bounds and the covering form `<cover, x> >= required` when the set
    /// is a box cut by a single affine constraint.
    fn as_cover(&self) -> Option<(&[f64], &[f64], RealVector, f64)> {
        let (lo, hi) = match &self.base {
            ActionSet::Box { lo, hi } => (lo.as_slice(), hi.as_slice()),
            _ => return None,
        };
        let (a, c) = self.constraints.as_affine()?;
        if a.rows() != 1 {
            return None;
        }
        // <a, x> + c + w <= 0  <=>  <-a, x> >= c + w
        let cover = RealVector::from(a.row(0)).scale(-1.0);
        Some((lo, hi, cover, c[0] + self.w[0]))
    }
}

/// Which solver produced a hindsight value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HindsightPath {
    Knapsack,
    Penalty,
}

/// `min <cost, x>` over `lo <= x <= hi` subject to `<cover, x> >= required`.
///
/// Starts from the cheapest vertex and buys missing coverage in order of
/// marginal cost per unit of coverage; the last coordinate bought is fractional.
pub fn knapsack_cover(cost: &[f64], cover: &[f64], required: f64, lo: &[f64], hi: &[f64]) -> Result<(f64, RealVector)> {
    let n = cost.len();
    check_dim(n, cover.len())?;
    check_dim(n, lo.len())?;
    check_dim(n, hi.len())?;
    let mut x: Vec<f64> = (0..n)
        .map(|i| {
            // Zero-cost coordinates sit wherever they cover most, for free.
            if cost[i] < 0.0 || (cost[i] == 0.0 && cover[i] >= 0.0) {
                hi[i]
            } else {
                lo[i]
            }
        })
        .collect();
    let mut covered: f64 = (0..n).map(|i| cover[i] * x[i]).sum();
    let best: f64 = (0..n).map(|i| cover[i] * if cover[i] >= 0.0 { hi[i] } else { lo[i] }).sum();
    if best < required {
        return Err(OcoError::Infeasible(format!("max coverage {best} is below the requirement {required}")));
    }

    // coordinates that can still gain coverage, with their price per unit
    let mut moves: Vec<(f64, usize)> = (0..n)
        .filter_map(|i| {
            let target = if cover[i] > 0.0 { hi[i] } else { lo[i] };
            (cover[i] != 0.0 && x[i] != target).then(|| (cost[i].abs() / cover[i].abs(), i))
        })
        .collect();
    moves.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));

    for (_, i) in moves {
        let missing = required - covered;
        if missing <= 0.0 {
            break;
        }
        let target = if cover[i] > 0.0 { hi[i] } else { lo[i] };
        let full_gain = cover[i] * (target - x[i]);
        if full_gain <= missing {
            x[i] = target;
            covered += full_gain;
        } else {
            x[i] += missing / cover[i];
            covered = required;
        }
    }
    let value = (0..n).map(|i| cost[i] * x[i]).sum();
    Ok((value, RealVector::new(x)))
}

/// Minimum of `objective` over `fs` and a minimizer.
///
/// Linear objectives over a box with one affine constraint are solved exactly;
/// anything else goes through augmented-Lagrangian penalty continuation.
pub fn hindsight_cost(objective: &dyn CostFunction, fs: &FeasibleSetSpec, cfg: &ProxConfig) -> Result<(f64, RealVector)> {
    hindsight_cost_detailed(objective, fs, cfg).map(|(v, x, _)| (v, x))
}

pub fn hindsight_cost_detailed(
    objective: &dyn CostFunction,
    fs: &FeasibleSetSpec,
    cfg: &ProxConfig,
) -> Result<(f64, RealVector, HindsightPath)> {
    if !cfg.force_generic {
        if let (Some(c), Some((lo, hi, cover, required))) = (objective.linear_coefficients(), fs.as_cover()) {
            check_dim(lo.len(), c.len())?;
            let (value, x) = knapsack_cover(c, &cover, required, lo, hi)?;
            return Ok((value, x, HindsightPath::Knapsack));
        }
    }
    let (value, x) = penalty_continuation(objective, fs, cfg)?;
    Ok((value, x, HindsightPath::Penalty))
}

/// Augmented Lagrangian with the penalty doubled at every stage:
/// `F(x)/s + (1/2mu) sum([lambda + mu h(x)]^+^2 - lambda^2)`, `h = g + w`,
/// inner problem by accelerated projected gradient with backtracking.
fn penalty_continuation(objective: &dyn CostFunction, fs: &FeasibleSetSpec, cfg: &ProxConfig) -> Result<(f64, RealVector)> {
    cfg.validate()?;
    let n = fs.base.dim();
    let m = fs.w.dim();
    let mut x = fs.base.anchor();
    check_dim(n, objective.subgradient(&x).dim())?;
    // normalise the objective so the penalty scale is meaningful
    let scale = norm(&objective.subgradient(&x)).max(1.0);
    let mut lambda = RealVector::zeros(m);
    let mut mu = 1.0;
    let mut lipschitz = 1.0;

    for _ in 0..PENALTY_STAGES {
        let multipliers = |u: &[f64], lam: &RealVector| -> RealVector {
            let h = fs.slack(u);
            lam.iter().zip(h.iter()).map(|(l, h)| (l + mu * h).max(0.0)).collect()
        };
        let value = |u: &[f64]| -> f64 {
            let h = fs.slack(u);
            let pen: f64 = lambda
                .iter()
                .zip(h.iter())
                .map(|(l, h)| (l + mu * h).max(0.0).powi(2) - l * l)
                .sum();
            objective.value(u) / scale + pen / (2.0 * mu)
        };
        let gradient = |u: &[f64]| -> RealVector {
            let mult = multipliers(u, &lambda);
            objective.subgradient(u).scale(1.0 / scale).add(&fs.constraints.weighted_gradient(u, &mult))
        };
        let (next, l_used) = fista(x, &value, &gradient, &fs.base, lipschitz, cfg)?;
        x = next;
        lipschitz = l_used;
        let updated = multipliers(&x, &lambda);
        let shift = norm(&updated.sub(&lambda));
        lambda = updated;
        if fs.violation(&x) <= FEASIBLE_TOL * 1e-2 && shift <= cfg.inner_tol.max(1e-12) * (1.0 + norm(&lambda)) {
            break;
        }
        mu *= 2.0;
    }

    let violation = fs.violation(&x);
    if violation > INFEASIBLE_TOL {
        return Err(OcoError::Infeasible(format!("penalty solver ended with violation {violation:e}")));
    }
    if violation > FEASIBLE_TOL {
        return Err(OcoError::Convergence { iterations: PENALTY_STAGES, residual: violation });
    }
    Ok((objective.value(&x), x))
}

/// Accelerated projected gradient with backtracking and gradient-based restart.
/// Returns the final iterate and the last accepted smoothness estimate.
fn fista<V, G>(start: RealVector, value: &V, gradient: &G, set: &ActionSet, l0: f64, cfg: &ProxConfig) -> Result<(RealVector, f64)>
where
    V: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> RealVector,
{
    let mut lipschitz = l0;
    let mut x = set.project(&start)?;
    let mut z = x.clone();
    let mut momentum = 1.0_f64;
    for _ in 0..cfg.inner_max_iters {
        let gz = gradient(&z);
        let fz = value(&z);
        let mut next;
        loop {
            next = set.project(&z.axpy(-1.0 / lipschitz, &gz))?;
            let d = next.sub(&z);
            let model = fz + gz.dot(&d) + 0.5 * lipschitz * d.dot(&d);
            if value(&next) <= model + 1e-14 * fz.abs().max(1.0) || lipschitz > 1e16 {
                break;
            }
            lipschitz *= 2.0;
        }
        // gradient mapping at the extrapolated point
        let residual = lipschitz * norm(&next.sub(&z));
        let step = next.sub(&x);
        let restart = gz.dot(&step) > 0.0;
        let prev_momentum = momentum;
        momentum = if restart { 1.0 } else { 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt()) };
        z = if restart { next.clone() } else { next.axpy((prev_momentum - 1.0) / momentum, &step) };
        x = next;
        if residual <= cfg.inner_tol {
            break;
        }
        lipschitz = (lipschitz * 0.9).max(l0 * 1e-3);
    }
    Ok((x, lipschitz))
}
