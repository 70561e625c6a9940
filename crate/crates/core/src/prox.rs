//! Primal and dual proximal subproblems of the online primal-dual method.
//!
//! Primal: `argmin_{u in C} <f', u> + <y, g(u)> + B_psi(u, x) / rho`.
//! Dual:   `argmax_{v >= 0} <v, s> - B_phi(v, y) / rho`.
//!
//! With affine `g` and `psi = phi = 0.5 ||.||^2` both have closed forms; every
//! other combination goes through projected gradient on the strongly convex
//! subproblem.

use serde::{Deserialize, Serialize};

use crate::bregman::BregmanGenerator;
use crate::error::{check_dim, OcoError, Result};
use crate::linalg::{norm, positive, RealVector};
use crate::problem::ProblemSpec;
use crate::sets::project_nonneg;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProxConfig {
    /// Stop when the gradient-mapping norm drops below this.
    pub inner_tol: f64,
    pub inner_max_iters: usize,
    /// Skip the closed forms even when they apply. Used for cross-validation.
    #[serde(default)]
    pub force_generic: bool,
}

impl Default for ProxConfig {
    fn default() -> Self {
        ProxConfig { inner_tol: 1e-10, inner_max_iters: 10_000, force_generic: false }
    }
}

impl ProxConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.inner_tol > 0.0) {
            return Err(OcoError::InvalidInput("inner_tol must be > 0".into()));
        }
        if self.inner_max_iters == 0 {
            return Err(OcoError::InvalidInput("inner_max_iters must be >= 1".into()));
        }
        Ok(())
    }

    pub fn generic(mut self) -> Self {
        self.force_generic = true;
        self
    }
}

/// A subproblem solution and how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxSolution {
    pub point: RealVector,
    /// Gradient-mapping norm at `point`; zero on the closed-form path.
    pub residual: f64,
    pub iterations: usize,
    pub closed_form: bool,
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(OcoError::InvalidInput(format!("step size must be finite and > 0, got {rho}")))
    }
}

fn check_nonneg(y: &[f64]) -> Result<()> {
    if y.iter().all(|v| *v >= 0.0) {
        Ok(())
    } else {
        Err(OcoError::InvalidInput("dual variable must be elementwise >= 0".into()))
    }
}

pub fn primal_step(
    spec: &ProblemSpec,
    x: &[f64],
    y: &[f64],
    f_grad: &[f64],
    rho: f64,
    cfg: &ProxConfig,
) -> Result<RealVector> {
    primal_step_detailed(spec, x, y, f_grad, rho, cfg).map(|s| s.point)
}

pub fn primal_step_detailed(
    spec: &ProblemSpec,
    x: &[f64],
    y: &[f64],
    f_grad: &[f64],
    rho: f64,
    cfg: &ProxConfig,
) -> Result<ProxSolution> {
    check_rho(rho)?;
    check_dim(spec.n(), x.len())?;
    check_dim(spec.n(), f_grad.len())?;
    check_dim(spec.m(), y.len())?;
    check_nonneg(y)?;

    let g = &spec.constraints;
    if !cfg.force_generic && spec.psi.is_half_sq_euclidean() {
        if let Some((a, _)) = g.as_affine() {
            // P_C(x - rho (f' + A^T y))
            let direction = a.tr_mul_vec(y).add(f_grad);
            let target = RealVector::from(x).axpy(-rho, &direction);
            return Ok(ProxSolution {
                point: spec.action_set.project(&target)?,
                residual: 0.0,
                iterations: 0,
                closed_form: true,
            });
        }
    }

    let psi = &spec.psi;
    let grad_psi_x = psi.gradient(x);
    let smoothness = psi.lipschitz() / rho + g.weighted_gradient_lipschitz(y);
    let gradient = |u: &[f64]| -> RealVector {
        let mut d = g.weighted_gradient(u, y).add(f_grad);
        let bregman = psi.gradient(u).sub(&grad_psi_x);
        d = d.axpy(1.0 / rho, &bregman);
        d
    };
    let start = spec.action_set.project(x)?;
    projected_gradient(start, gradient, |p| spec.action_set.project(p), smoothness, cfg)
}

pub fn dual_step(
    spec: &ProblemSpec,
    y: &[f64],
    slack: &[f64],
    rho: f64,
    cfg: &ProxConfig,
) -> Result<RealVector> {
    dual_step_detailed(&spec.phi, y, slack, rho, cfg).map(|s| s.point)
}

pub fn dual_step_detailed(
    phi: &BregmanGenerator,
    y: &[f64],
    slack: &[f64],
    rho: f64,
    cfg: &ProxConfig,
) -> Result<ProxSolution> {
    check_rho(rho)?;
    check_dim(y.len(), slack.len())?;
    phi.check_dim(y.len())?;
    check_nonneg(y)?;

    if !cfg.force_generic && phi.is_half_sq_euclidean() {
        // [y + rho s]^+
        let point = y.iter().zip(slack).map(|(yi, si)| positive(yi + rho * si)).collect();
        return Ok(ProxSolution { point, residual: 0.0, iterations: 0, closed_form: true });
    }

    // minimize -<v, s> + B_phi(v, y) / rho over the orthant
    let grad_phi_y = phi.gradient(y);
    let gradient = |v: &[f64]| -> RealVector {
        let bregman = phi.gradient(v).sub(&grad_phi_y);
        RealVector::from(slack).scale(-1.0).axpy(1.0 / rho, &bregman)
    };
    projected_gradient(
        RealVector::from(y),
        gradient,
        |p| Ok(project_nonneg(p)),
        phi.lipschitz() / rho,
        cfg,
    )
}

/// Fixed-step projected gradient for a smooth strongly convex objective.
fn projected_gradient<G, P>(
    start: RealVector,
    gradient: G,
    project: P,
    smoothness: f64,
    cfg: &ProxConfig,
) -> Result<ProxSolution>
where
    G: Fn(&[f64]) -> RealVector,
    P: Fn(&[f64]) -> Result<RealVector>,
{
    cfg.validate()?;
    let step = 1.0 / smoothness;
    let mut u = start;
    let mut residual = f64::INFINITY;
    for iter in 0..cfg.inner_max_iters {
        let next = project(&u.axpy(-step, &gradient(&u)))?;
        residual = norm(&u.sub(&next)) / step;
        if residual <= cfg.inner_tol {
            return Ok(ProxSolution { point: u, residual, iterations: iter, closed_form: false });
        }
        u = next;
    }
    Err(OcoError::Convergence { iterations: cfg.inner_max_iters, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::problem::{AssumptionConstants, ConstraintMap};
    use crate::sets::ActionSet;

    fn scalar_spec() -> ProblemSpec {
        // C = [0, 1], g(x) = -x
        let g = ConstraintMap::affine(Matrix::from_rows(vec![vec![-1.0]]).unwrap(), RealVector::zeros(1)).unwrap();
        let consts = AssumptionConstants {
            d: 1.0,
            f_star: 2.0,
            g_star: 1.0,
            g: 1.0,
            eta: 0.5,
            slater_point: RealVector::from([1.0]),
        };
        ProblemSpec::new(
            ActionSet::unit_box(1).unwrap(),
            g,
            BregmanGenerator::half_sq_euclidean(),
            BregmanGenerator::half_sq_euclidean(),
            consts,
        )
        .unwrap()
    }

    #[test]
    fn primal_closed_form_example() {
        let spec = scalar_spec();
        let cfg = ProxConfig::default();
        // clip(0.95 - 0.1 * (2 - 3)) = 1.0
        let x = primal_step(&spec, &[0.95], &[3.0], &[2.0], 0.1, &cfg).unwrap();
        assert_eq!(x.as_slice(), &[1.0]);
        let generic = primal_step(&spec, &[0.95], &[3.0], &[2.0], 0.1, &cfg.generic()).unwrap();
        assert!((generic[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn primal_zero_gradient_is_identity() {
        let spec = scalar_spec();
        for rho in [0.01, 1.0, 7.5] {
            let x = primal_step(&spec, &[0.37], &[0.0], &[0.0], rho, &ProxConfig::default()).unwrap();
            assert_eq!(x.as_slice(), &[0.37]);
            let g = primal_step(&spec, &[0.37], &[0.0], &[0.0], rho, &ProxConfig::default().generic()).unwrap();
            assert_eq!(g.as_slice(), &[0.37]);
        }
    }

    #[test]
    fn dual_closed_form_examples() {
        let h = BregmanGenerator::half_sq_euclidean();
        let cfg = ProxConfig::default();
        let v = dual_step_detailed(&h, &[0.0, 0.0], &[1.0, -2.0], 1.0, &cfg).unwrap().point;
        assert_eq!(v.as_slice(), &[1.0, 0.0]);
        let v = dual_step_detailed(&h, &[0.4, 2.0], &[0.0, 0.0], 0.3, &cfg).unwrap().point;
        assert_eq!(v.as_slice(), &[0.4, 2.0]);
        let v = dual_step_detailed(&h, &[2.0], &[-1.0], 0.5, &cfg).unwrap().point;
        assert_eq!(v.as_slice(), &[1.5]);
    }

    #[test]
    fn weighted_dual_matches_separable_formula() {
        let w = RealVector::from([2.0, 0.5]);
        let phi = BregmanGenerator::weighted_quadratic(w.clone()).unwrap();
        let (y, s, rho) = ([0.3, 1.0], [0.8, -4.0], 0.7);
        let v = dual_step_detailed(&phi, &y, &s, rho, &ProxConfig::default()).unwrap();
        assert!(!v.closed_form);
        for i in 0..2 {
            let expected = (y[i] + rho * s[i] / w[i]).max(0.0);
            assert!((v.point[i] - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let spec = scalar_spec();
        let cfg = ProxConfig::default();
        assert!(primal_step(&spec, &[0.5], &[0.0], &[1.0], 0.0, &cfg).is_err());
        assert!(primal_step(&spec, &[0.5], &[-1.0], &[1.0], 1.0, &cfg).is_err());
        assert!(primal_step(&spec, &[0.5, 0.1], &[0.0], &[1.0], 1.0, &cfg).is_err());
        assert!(dual_step(&spec, &[0.0], &[1.0], -1.0, &cfg).is_err());
    }

    #[test]
    fn generic_path_reports_non_convergence() {
        let spec = scalar_spec();
        let cfg = ProxConfig { inner_tol: 1e-12, inner_max_iters: 1, force_generic: true };
        let err = primal_step(&spec, &[0.5], &[0.2], &[0.3], 1.0, &cfg).unwrap_err();
        assert!(matches!(err, OcoError::Convergence { iterations: 1, .. }));
    }
}
