//! The constants `chi` and `E` and the two horizon bounds built from them.

use serde::{Deserialize, Serialize};

use crate::algo::{check_epsilon, step_rate, RateSchedule};
use crate::bregman::BregmanGenerator;
use crate::error::{OcoError, Result};
use crate::problem::{AssumptionConstants, ProblemSpec};

/// Everything the regret and violation bounds depend on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremConstants {
    pub chi: f64,
    /// Radius of the ball containing every dual iterate.
    pub e: f64,
    pub consts: AssumptionConstants,
    pub sigma_psi: f64,
    pub l_psi: f64,
    pub sigma_phi: f64,
    pub l_phi: f64,
}

/// `chi = 6 G_*^2 / sigma_phi + 3 F_* D + L_psi D^2 / 2`
pub fn compute_chi(c: &AssumptionConstants, psi: &BregmanGenerator, phi: &BregmanGenerator) -> f64 {
    6.0 * c.g_star * c.g_star / phi.sigma() + 3.0 * c.f_star * c.d + 0.5 * psi.lipschitz() * c.d * c.d
}

/// `E = sqrt((L_phi / sigma_phi) (2 chi / eta)^2 + 2 chi / sigma_phi)`
pub fn compute_e(chi: f64, c: &AssumptionConstants, phi: &BregmanGenerator) -> f64 {
    let ratio = 2.0 * chi / c.eta;
    (phi.lipschitz() / phi.sigma() * ratio * ratio + 2.0 * chi / phi.sigma()).sqrt()
}

impl TheoremConstants {
    pub fn new(consts: &AssumptionConstants, psi: &BregmanGenerator, phi: &BregmanGenerator) -> Result<Self> {
        consts.validate()?;
        let chi = compute_chi(consts, psi, phi);
        let e = compute_e(chi, consts, phi);
        Ok(TheoremConstants {
            chi,
            e,
            consts: consts.clone(),
            sigma_psi: psi.sigma(),
            l_psi: psi.lipschitz(),
            sigma_phi: phi.sigma(),
            l_phi: phi.lipschitz(),
        })
    }

    pub fn for_spec(spec: &ProblemSpec) -> Result<Self> {
        Self::new(&spec.consts, &spec.psi, &spec.phi)
    }

    /// Constants when every round is feasible on all of `C`: the dual never
    /// moves, so `E = 0` and `G_* = 0`.
    pub fn all_feasible(consts: &AssumptionConstants, psi: &BregmanGenerator, phi: &BregmanGenerator) -> Result<Self> {
        let mut c = consts.clone();
        c.g_star = 0.0;
        c.validate()?;
        Ok(TheoremConstants {
            chi: compute_chi(&c, psi, phi),
            e: 0.0,
            consts: c,
            sigma_psi: psi.sigma(),
            l_psi: psi.lipschitz(),
            sigma_phi: phi.sigma(),
            l_phi: phi.lipschitz(),
        })
    }

    /// `L_psi D^2 / 2 + L_phi E^2 / 2`, the coefficient of `1/rho_T`.
    pub fn radius_term(&self) -> f64 {
        0.5 * self.l_psi * self.consts.d.powi(2) + 0.5 * self.l_phi * self.e * self.e
    }

    /// `2 F_*^2 / sigma_psi + 2 G_*^2 / sigma_phi`, the coefficient of `sum rho_t`.
    pub fn gradient_term(&self) -> f64 {
        2.0 * self.consts.f_star.powi(2) / self.sigma_psi + 2.0 * self.consts.g_star.powi(2) / self.sigma_phi
    }
}

fn check_horizon(horizon: usize) -> Result<()> {
    if horizon == 0 {
        return Err(OcoError::InvalidInput("horizon must be >= 1".into()));
    }
    Ok(())
}

/// `(1/rho_T) (L_psi D^2/2 + L_phi E^2/2) + (2F_*^2/sigma_psi + 2G_*^2/sigma_phi) sum_{t<=T} rho_t`
/// with `rho_t = t^-epsilon` and the sum taken term by term.
pub fn regret_bound(horizon: usize, epsilon: f64, tc: &TheoremConstants) -> Result<f64> {
    check_epsilon(epsilon)?;
    regret_bound_for_schedule(horizon, &RateSchedule::adaptive(epsilon)?, tc)
}

/// Regret bound for any schedule. For schedules other than `t^-epsilon`
/// this extrapolates the theorem (see [`is_extrapolated`]).
pub fn regret_bound_for_schedule(horizon: usize, schedule: &RateSchedule, tc: &TheoremConstants) -> Result<f64> {
    check_horizon(horizon)?;
    Ok(tc.radius_term() / schedule.rate(horizon) + tc.gradient_term() * schedule.cumulative(horizon))
}

/// `G + L_phi E / (2 rho_T)`
pub fn violation_bound(horizon: usize, epsilon: f64, tc: &TheoremConstants) -> Result<f64> {
    check_horizon(horizon)?;
    let rho = step_rate(horizon, epsilon)?;
    Ok(tc.consts.g + tc.l_phi * tc.e / (2.0 * rho))
}

pub fn violation_bound_for_schedule(horizon: usize, schedule: &RateSchedule, tc: &TheoremConstants) -> Result<f64> {
    check_horizon(horizon)?;
    Ok(tc.consts.g + tc.l_phi * tc.e / (2.0 * schedule.rate(horizon)))
}

/// True when the bounds are applied outside the `rho_t = t^-epsilon` family.
pub fn is_extrapolated(schedule: &RateSchedule) -> bool {
    match schedule {
        RateSchedule::Polynomial { alpha, .. } => *alpha != 1.0,
        RateSchedule::Constant { .. } => true,
    }
}
