//! Problem data shared by every engine: the action set, the long-term
//! constraint map, the two Bregman generators and the declared constants.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bregman::BregmanGenerator;
use crate::error::{check_dim, OcoError, Result};
use crate::linalg::{Matrix, RealVector};
use crate::sets::ActionSet;

type VectorFn = dyn Fn(&[f64]) -> RealVector + Send + Sync;
type JacobianFn = dyn Fn(&[f64]) -> Vec<RealVector> + Send + Sync;

/// The convex constraint map `g : R^n -> R^m`.
#[derive(Clone)]
pub enum ConstraintMap {
    /// `g(x) = A x + c`
    Affine { a: Matrix, c: RealVector },
    /// Arbitrary convex components with a (sub)gradient oracle.
    General {
        n: usize,
        m: usize,
        value: Arc<VectorFn>,
        /// One gradient row per constraint.
        jacobian: Arc<JacobianFn>,
        /// Lipschitz constant of each component's gradient on `C`.
        grad_lipschitz: f64,
    },
}

impl ConstraintMap {
    pub fn affine(a: Matrix, c: RealVector) -> Result<Self> {
        check_dim(a.rows(), c.dim())?;
        c.ensure_finite()?;
        Ok(ConstraintMap::Affine { a, c })
    }

    pub fn general<V, J>(n: usize, m: usize, grad_lipschitz: f64, value: V, jacobian: J) -> Result<Self>
    where
        V: Fn(&[f64]) -> RealVector + Send + Sync + 'static,
        J: Fn(&[f64]) -> Vec<RealVector> + Send + Sync + 'static,
    {
        if n == 0 || m == 0 {
            return Err(OcoError::InvalidInput("constraint map needs n, m >= 1".into()));
        }
        if !(grad_lipschitz >= 0.0 && grad_lipschitz.is_finite()) {
            return Err(OcoError::InvalidInput("gradient Lipschitz constant must be finite and >= 0".into()));
        }
        Ok(ConstraintMap::General {
            n,
            m,
            value: Arc::new(value),
            jacobian: Arc::new(jacobian),
            grad_lipschitz,
        })
    }

    /// Number of constraints `m`.
    pub fn m(&self) -> usize {
        match self {
            ConstraintMap::Affine { a, .. } => a.rows(),
            ConstraintMap::General { m, .. } => *m,
        }
    }

    /// Input dimension `n`.
    pub fn n(&self) -> usize {
        match self {
            ConstraintMap::Affine { a, .. } => a.cols(),
            ConstraintMap::General { n, .. } => *n,
        }
    }

    pub fn eval(&self, x: &[f64]) -> RealVector {
        match self {
            ConstraintMap::Affine { a, c } => a.mul_vec(x).add(c),
            ConstraintMap::General { value, .. } => value(x),
        }
    }

    /// `grad_x <y, g(x)>`
    pub fn weighted_gradient(&self, x: &[f64], y: &[f64]) -> RealVector {
        match self {
            ConstraintMap::Affine { a, .. } => a.tr_mul_vec(y),
            ConstraintMap::General { jacobian, n, .. } => {
                let rows = jacobian(x);
                let mut out = RealVector::zeros(*n);
                for (row, &yi) in rows.iter().zip(y) {
                    if yi != 0.0 {
                        out = out.axpy(yi, row);
                    }
                }
                out
            }
        }
    }

    /// Lipschitz constant of `x -> grad <y, g(x)>`; zero for affine maps.
    pub fn weighted_gradient_lipschitz(&self, y: &[f64]) -> f64 {
        match self {
            ConstraintMap::Affine { .. } => 0.0,
            ConstraintMap::General { grad_lipschitz, .. } => {
                grad_lipschitz * y.iter().map(|v| v.abs()).sum::<f64>()
            }
        }
    }

    pub fn as_affine(&self) -> Option<(&Matrix, &RealVector)> {
        match self {
            ConstraintMap::Affine { a, c } => Some((a, c)),
            ConstraintMap::General { .. } => None,
        }
    }
}

impl fmt::Debug for ConstraintMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintMap::Affine { a, c } => f.debug_struct("Affine").field("a", a).field("c", c).finish(),
            ConstraintMap::General { n, m, grad_lipschitz, .. } => f
                .debug_struct("General")
                .field("n", n)
                .field("m", m)
                .field("grad_lipschitz", grad_lipschitz)
                .finish_non_exhaustive(),
        }
    }
}

/// Constants a scenario declares analytically (sup over `C` and all rounds).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionConstants {
    /// Diameter of `C`.
    pub d: f64,
    /// Bound on `||f'_t(x)||_*`.
    pub f_star: f64,
    /// Bound on `||g(x) + b_t||_*`.
    pub g_star: f64,
    /// Bound on `||g(x) + b_t||`.
    pub g: f64,
    /// Slater margin.
    pub eta: f64,
    pub slater_point: RealVector,
}

impl AssumptionConstants {
    pub fn validate(&self) -> Result<()> {
        let named = [("D", self.d), ("F_star", self.f_star), ("G", self.g), ("eta", self.eta)];
        for (name, v) in named {
            if !(v > 0.0 && v.is_finite()) {
                return Err(OcoError::InvalidInput(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        // G_star = 0 is the all-feasible reduction.
        if !(self.g_star >= 0.0 && self.g_star.is_finite()) {
            return Err(OcoError::InvalidInput(format!("G_star must be finite and >= 0, got {}", self.g_star)));
        }
        self.slater_point.ensure_finite()
    }
}

/// Everything an engine needs to know about the problem before round 1.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub action_set: ActionSet,
    pub constraints: ConstraintMap,
    /// Primal generator.
    pub psi: BregmanGenerator,
    /// Dual generator.
    pub phi: BregmanGenerator,
    pub consts: AssumptionConstants,
    initial_point: Option<RealVector>,
}

impl ProblemSpec {
    pub fn new(
        action_set: ActionSet,
        constraints: ConstraintMap,
        psi: BregmanGenerator,
        phi: BregmanGenerator,
        consts: AssumptionConstants,
    ) -> Result<Self> {
        let n = action_set.dim();
        check_dim(n, constraints.n())?;
        psi.check_dim(n)?;
        phi.check_dim(constraints.m())?;
        consts.validate()?;
        check_dim(n, consts.slater_point.dim())?;
        if !action_set.contains(&consts.slater_point, 1e-12) {
            return Err(OcoError::InvalidInput("Slater point is not in the action set".into()));
        }
        Ok(ProblemSpec { action_set, constraints, psi, phi, consts, initial_point: None })
    }

    /// Overrides the default starting action `x_1 = P_C(0)`.
    pub fn with_initial_point(mut self, x1: RealVector) -> Result<Self> {
        check_dim(self.n(), x1.dim())?;
        if !self.action_set.contains(&x1, 1e-12) {
            return Err(OcoError::InvalidInput("initial point is not in the action set".into()));
        }
        self.initial_point = Some(x1);
        Ok(self)
    }

    pub fn initial_point(&self) -> RealVector {
        self.initial_point.clone().unwrap_or_else(|| self.action_set.anchor())
    }

    pub fn n(&self) -> usize {
        self.action_set.dim()
    }

    pub fn m(&self) -> usize {
        self.constraints.m()
    }

    /// Slater margin actually achieved for perturbation `b`:
    /// `min_j -(g_j(x_hat) + b_j)`. The declared `eta` must not exceed it.
    pub fn slater_margin(&self, b: &[f64]) -> f64 {
        self.constraints
            .eval(&self.consts.slater_point)
            .iter()
            .zip(b)
            .map(|(g, bj)| -(g + bj))
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts(n: usize) -> AssumptionConstants {
        AssumptionConstants {
            d: 1.0,
            f_star: 1.0,
            g_star: 1.0,
            g: 1.0,
            eta: 0.5,
            slater_point: RealVector::filled(n, 1.0),
        }
    }

    #[test]
    fn affine_map_is_exact() {
        let a = Matrix::from_rows(vec![vec![1.0, -2.0]]).unwrap();
        let g = ConstraintMap::affine(a, RealVector::from([0.5])).unwrap();
        assert_eq!(g.eval(&[2.0, 1.0]).as_slice(), &[0.5]);
        assert_eq!(g.weighted_gradient(&[0.0, 0.0], &[3.0]).as_slice(), &[3.0, -6.0]);
    }

    #[test]
    fn spec_checks_dimensions() {
        let c = ActionSet::unit_box(2).unwrap();
        let g = ConstraintMap::affine(Matrix::from_rows(vec![vec![-1.0, -1.0]]).unwrap(), RealVector::zeros(1)).unwrap();
        let h = BregmanGenerator::half_sq_euclidean();
        assert!(ProblemSpec::new(c.clone(), g.clone(), h.clone(), h.clone(), consts(2)).is_ok());
        assert!(ProblemSpec::new(c.clone(), g.clone(), h.clone(), h.clone(), consts(3)).is_err());
        let mut bad = consts(2);
        bad.slater_point = RealVector::from([2.0, 0.0]);
        assert!(ProblemSpec::new(c.clone(), g.clone(), h.clone(), h.clone(), bad).is_err());
        let mut zero_eta = consts(2);
        zero_eta.eta = 0.0;
        assert!(ProblemSpec::new(c, g, h.clone(), h, zero_eta).is_err());
    }

    #[test]
    fn g_star_zero_allowed() {
        let mut c = consts(1);
        c.g_star = 0.0;
        assert!(c.validate().is_ok());
    }
}
