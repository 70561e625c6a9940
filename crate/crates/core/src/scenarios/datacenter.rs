//! Geo-distributed datacenter: `n` clusters, linear electricity costs, and a
//! job-arrival perturbation that depends on the previous round's cost.
//!
//! * `C = [0,1]^n`, `f_t(x) = <l_t, x>` with `l_t ~ U[0,1]^n` (and `l_1 = 0`)
//! * `g(x) = -<a, x>` with efficiencies `a ~ U[0.5, 1.5]^n` drawn once
//! * `b_t = 0.5 <1, a> exp(-<l_{t-1}, x_{t-1}>)` with `l_0 = x_0 = 0`

use crate::algo::RoundFeedback;
use crate::bregman::BregmanGenerator;
use crate::error::{check_dim, OcoError, Result};
use crate::linalg::{Matrix, RealVector};
use crate::problem::{AssumptionConstants, ConstraintMap, ProblemSpec};
use crate::scenarios::{expect_round, Prng, ScenarioStream};
use crate::sets::ActionSet;

const SLATER_GUARD: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct DatacenterScenario {
    spec: ProblemSpec,
    a: RealVector,
    rng: Prng,
    prev_cost: RealVector,
    prev_action: RealVector,
    next: usize,
}

pub fn datacenter_scenario(n: usize, seed: u64) -> Result<DatacenterScenario> {
    DatacenterScenario::new(n, seed)
}

impl DatacenterScenario {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(OcoError::InvalidInput("datacenter needs n >= 1 clusters".into()));
        }
        let mut rng = Prng::new(seed);
        let a: RealVector = (0..n).map(|_| rng.uniform(0.5, 1.5)).collect();
        let total: f64 = a.iter().sum();
        let root_n = (n as f64).sqrt();
        // |b_t - <a, x>| <= <1, a> on [0,1]^n since 0 < b_t <= <1, a> / 2
        let consts = AssumptionConstants {
            d: root_n,
            f_star: root_n,
            g_star: total,
            g: total,
            eta: 0.5 * total - SLATER_GUARD,
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
        Ok(DatacenterScenario {
            spec,
            a,
            rng,
            prev_cost: RealVector::zeros(n),
            prev_action: RealVector::zeros(n),
            next: 1,
        })
    }

    /// Cluster efficiencies.
    pub fn a(&self) -> &RealVector {
        &self.a
    }

    /// Largest possible arrival, `0.5 <1, a>`.
    pub fn peak_arrival(&self) -> f64 {
        0.5 * self.a.iter().sum::<f64>()
    }
}

impl ScenarioStream for DatacenterScenario {
    fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    fn reveal(&mut self, t: usize, played: &[f64]) -> Result<RoundFeedback> {
        expect_round(self.next, t)?;
        check_dim(self.a.dim(), played.len())?;
        self.next += 1;
        let b = self.peak_arrival() * (-self.prev_cost.dot(&self.prev_action)).exp();
        let cost: RealVector = if t == 1 {
            RealVector::zeros(played.len())
        } else {
            (0..played.len()).map(|_| self.rng.u01()).collect()
        };
        self.prev_action = RealVector::from(played);
        self.prev_cost = cost.clone();
        Ok(RoundFeedback { f_value: cost.dot(played), f_grad: cost, b: RealVector::from([b]) })
    }

    fn costs_are_linear(&self) -> bool {
        true
    }
}
