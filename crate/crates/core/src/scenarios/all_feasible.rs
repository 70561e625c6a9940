//! Datacenter costs with a perturbation so negative that every point of the
//! box satisfies the constraint: `b_t = -<1,a> - 0.1 + 0.05 u_t`.

use crate::algo::RoundFeedback;
use crate::bregman::BregmanGenerator;
use crate::error::{check_dim, OcoError, Result};
use crate::linalg::{Matrix, RealVector};
use crate::problem::{AssumptionConstants, ConstraintMap, ProblemSpec};
use crate::scenarios::{expect_round, Prng, ScenarioStream};
use crate::sets::ActionSet;

#[derive(Debug, Clone)]
pub struct AllFeasibleScenario {
    spec: ProblemSpec,
    a: RealVector,
    rng: Prng,
    next: usize,
}

pub fn all_feasible_scenario(n: usize, seed: u64) -> Result<AllFeasibleScenario> {
    AllFeasibleScenario::new(n, seed)
}

impl AllFeasibleScenario {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(OcoError::InvalidInput("all-feasible scenario needs n >= 1".into()));
        }
        let mut rng = Prng::new(seed);
        let a: RealVector = (0..n).map(|_| rng.uniform(0.5, 1.5)).collect();
        let total: f64 = a.iter().sum();
        let root_n = (n as f64).sqrt();
        // g(x) + b_t in [-2<1,a> - 0.1, -0.05]
        let consts = AssumptionConstants {
            d: root_n,
            f_star: root_n,
            g_star: 2.0 * total + 0.1,
            g: 2.0 * total + 0.1,
            eta: 2.0 * total + 0.05,
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
        Ok(AllFeasibleScenario { spec, a, rng, next: 1 })
    }

    pub fn a(&self) -> &RealVector {
        &self.a
    }
}

impl ScenarioStream for AllFeasibleScenario {
    fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    fn reveal(&mut self, t: usize, played: &[f64]) -> Result<RoundFeedback> {
        expect_round(self.next, t)?;
        check_dim(self.a.dim(), played.len())?;
        self.next += 1;
        let cost: RealVector = if t == 1 {
            RealVector::zeros(played.len())
        } else {
            (0..played.len()).map(|_| self.rng.u01()).collect()
        };
        let total: f64 = self.a.iter().sum();
        let b = -total - 0.1 + 0.05 * self.rng.u01();
        Ok(RoundFeedback { f_value: cost.dot(played), f_grad: cost, b: RealVector::from([b]) })
    }

    fn costs_are_linear(&self) -> bool {
        true
    }
}
