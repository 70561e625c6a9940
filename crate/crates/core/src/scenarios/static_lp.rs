//! Constant covering LP: `min <L, x>` over `[0,1]^n` subject to `<a, x> >= b`.

use std::sync::Arc;

use crate::algo::RoundFeedback;
use crate::bregman::BregmanGenerator;
use crate::cost::{CostFunction, LinearCost};
use crate::error::{OcoError, Result};
use crate::linalg::{Matrix, RealVector};
use crate::oracle::knapsack_cover;
use crate::problem::{AssumptionConstants, ConstraintMap, ProblemSpec};
use crate::scenarios::{Prng, ScenarioStream, StaticStream};
use crate::sets::ActionSet;

const MAX_DRAWS: usize = 64;

/// A static LP instance together with its exact optimum.
#[derive(Debug)]
pub struct StaticLp {
    stream: StaticStream,
    cost: Arc<LinearCost>,
    a: RealVector,
    b: f64,
    f_star: f64,
    minimizer: RealVector,
}

/// Seeded instance and its optimal value. Draws `a ~ U[0.5,1.5]^n`,
/// `L ~ U[0,1]^n` and `b = 0.5 <1,a> (0.2 + 0.8 u)`, redrawing while `b >= <1,a>`.
pub fn static_lp_scenario(n: usize, seed: u64) -> Result<(StaticLp, f64)> {
    if n == 0 {
        return Err(OcoError::InvalidInput("static LP needs n >= 1".into()));
    }
    let mut rng = Prng::new(seed);
    for _ in 0..MAX_DRAWS {
        let a: RealVector = (0..n).map(|_| rng.uniform(0.5, 1.5)).collect();
        let l: RealVector = (0..n).map(|_| rng.u01()).collect();
        let total: f64 = a.iter().sum();
        let b = 0.5 * total * (0.2 + 0.8 * rng.u01());
        if b < total {
            let lp = StaticLp::from_parts(l, a, b)?;
            let f_star = lp.f_star;
            return Ok((lp, f_star));
        }
    }
    Err(OcoError::Infeasible(format!("no strictly feasible draw in {MAX_DRAWS} attempts")))
}

impl StaticLp {
    /// Requires `a > 0` and `0 <= b < <1, a>` so that `x = 1` is a Slater point.
    pub fn from_parts(l: RealVector, a: RealVector, b: f64) -> Result<Self> {
        let n = a.dim();
        crate::error::check_dim(n, l.dim())?;
        l.ensure_finite()?;
        a.ensure_finite()?;
        if a.iter().any(|v| *v <= 0.0) {
            return Err(OcoError::InvalidInput("coverage weights must be > 0".into()));
        }
        let total: f64 = a.iter().sum();
        if !(b.is_finite() && b >= 0.0 && b < total) {
            return Err(OcoError::InvalidInput(format!("demand must lie in [0, {total}), got {b}")));
        }
        let (f_star, minimizer) = knapsack_cover(&l, &a, b, &vec![0.0; n], &vec![1.0; n])?;
        let consts = AssumptionConstants {
            d: (n as f64).sqrt(),
            f_star: l.norm().max(f64::MIN_POSITIVE),
            g_star: total,
            g: total,
            eta: total - b,
            slater_point: RealVector::filled(n, 1.0),
        };
        let g = ConstraintMap::affine(Matrix::from_rows(vec![a.scale(-1.0).into_inner()])?, RealVector::zeros(1))?;
        let spec = ProblemSpec::new(
            ActionSet::unit_box(n)?,
            g,
            BregmanGenerator::half_sq_euclidean(),
            BregmanGenerator::half_sq_euclidean(),
            consts,
        )?;
        let cost = Arc::new(LinearCost::new(l));
        let stream = StaticStream::new(spec, cost.clone(), RealVector::from([b]))?;
        Ok(StaticLp { stream, cost, a, b, f_star, minimizer })
    }

    pub fn cost(&self) -> Arc<dyn CostFunction> {
        self.cost.clone()
    }

    pub fn l(&self) -> &RealVector {
        &self.cost.coeffs
    }

    pub fn a(&self) -> &RealVector {
        &self.a
    }

    pub fn b(&self) -> RealVector {
        RealVector::from([self.b])
    }

    pub fn f_star(&self) -> f64 {
        self.f_star
    }

    pub fn minimizer(&self) -> &RealVector {
        &self.minimizer
    }

    /// `||[b - <a, x>]^+||`
    pub fn infeasibility(&self, x: &[f64]) -> f64 {
        (self.b - self.a.dot(x)).max(0.0)
    }
}

impl ScenarioStream for StaticLp {
    fn spec(&self) -> &ProblemSpec {
        self.stream.spec()
    }

    fn reveal(&mut self, t: usize, played: &[f64]) -> Result<RoundFeedback> {
        self.stream.reveal(t, played)
    }

    fn costs_are_linear(&self) -> bool {
        true
    }
}
