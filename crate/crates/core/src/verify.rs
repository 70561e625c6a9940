//! Self-checks over seeded instances: step-size window sums, Bregman
//! identities, closed-form vs generic prox, exact vs brute-force and generic
//! hindsight solvers, and the dual-radius formula. Output is deterministic.

use serde::{Deserialize, Serialize};

use crate::bregman::{bregman_divergence, three_point_residual, BregmanGenerator};
use crate::cost::LinearCost;
use crate::error::Result;
use crate::linalg::{Matrix, RealVector};
use crate::metrics::{compute_chi, compute_e, lemma5_check, lemma5_grid, TheoremConstants};
use crate::oracle::{hindsight_cost, knapsack_cover, FeasibleSetSpec};
use crate::problem::{AssumptionConstants, ConstraintMap, ProblemSpec};
use crate::prox::{dual_step_detailed, primal_step_detailed, ProxConfig};
use crate::scenarios::{datacenter_scenario, Prng, ScenarioStream};
use crate::sets::ActionSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub cases: usize,
    /// Worst observed error (or failure count for sweeps).
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn new(name: &str, cases: usize, worst: f64, tolerance: f64) -> Self {
        CheckResult { name: name.to_string(), pass: worst <= tolerance, cases, worst, tolerance }
    }
}

pub const LEMMA5_EPSILONS: [f64; 10] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Window sums for `t in 1..=10^4` plus 30 log-spaced points up to `10^6`, every epsilon.
pub fn lemma5_suite() -> Result<CheckResult> {
    let ts = lemma5_grid(10_000, 30, 1_000_000);
    let mut failures = 0usize;
    let mut cases = 0usize;
    for &eps in &LEMMA5_EPSILONS {
        for &t in &ts {
            cases += 1;
            if !lemma5_check(t, eps)?.pass {
                failures += 1;
            }
        }
    }
    Ok(CheckResult::new("lemma5_window_sums", cases, failures as f64, 0.0))
}

fn generators(n: usize, rng: &mut Prng) -> Result<Vec<BregmanGenerator>> {
    let weights: RealVector = (0..n).map(|_| rng.uniform(0.5, 2.0)).collect();
    Ok(vec![BregmanGenerator::half_sq_euclidean(), BregmanGenerator::weighted_quadratic(weights)?])
}

fn point(n: usize, scale: f64, rng: &mut Prng) -> RealVector {
    (0..n).map(|_| rng.uniform(-scale, scale)).collect()
}

/// Three-point identity residual and the `sigma/2 ||a-b||^2 <= B <= L/2 ||a-b||^2`
/// sandwich on `triples` random triples per generator.
pub fn bregman_suite(triples: usize) -> Result<Vec<CheckResult>> {
    let mut rng = Prng::new(0xB5E6);
    let mut worst_identity = [0.0f64; 2];
    let mut worst_sandwich = [0.0f64; 2];
    for _ in 0..triples {
        let n = 1 + (rng.next_u64() % 6) as usize;
        let gens = generators(n, &mut rng)?;
        let (a, b, c) = (point(n, 2.0, &mut rng), point(n, 2.0, &mut rng), point(n, 2.0, &mut rng));
        for (k, gen) in gens.iter().enumerate() {
            worst_identity[k] = worst_identity[k].max(three_point_residual(gen, &a, &b, &c)?.abs());
            let d = bregman_divergence(gen, &a, &b)?;
            let sq = a.sub(&b).norm().powi(2);
            let below = 0.5 * gen.sigma() * sq - d;
            let above = d - 0.5 * gen.lipschitz() * sq;
            worst_sandwich[k] = worst_sandwich[k].max(below).max(above);
        }
    }
    let names = ["half_sq_euclidean", "weighted_quadratic"];
    let mut out = Vec::new();
    for k in 0..2 {
        out.push(CheckResult::new(&format!("three_point_identity/{}", names[k]), triples, worst_identity[k], 1e-10));
        out.push(CheckResult::new(&format!("bregman_sandwich/{}", names[k]), triples, worst_sandwich[k].max(0.0), 1e-12));
    }
    Ok(out)
}

/// A random box, affine constraint map and Slater point for prox tests.
pub fn random_affine_spec(rng: &mut Prng, n: usize, m: usize) -> Result<ProblemSpec> {
    let lo: RealVector = (0..n).map(|_| rng.uniform(-1.0, 0.0)).collect();
    let hi: RealVector = lo.iter().map(|l| l + rng.uniform(0.5, 2.0)).collect();
    let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect()).collect();
    let c: RealVector = (0..m).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let slater: RealVector = lo.iter().zip(hi.iter()).map(|(l, h)| 0.5 * (l + h)).collect();
    let consts = AssumptionConstants { d: 1.0, f_star: 1.0, g_star: 1.0, g: 1.0, eta: 1.0, slater_point: slater };
    ProblemSpec::new(
        ActionSet::new_box(lo, hi)?,
        ConstraintMap::affine(Matrix::from_rows(rows)?, c)?,
        BregmanGenerator::half_sq_euclidean(),
        BregmanGenerator::half_sq_euclidean(),
        consts,
    )
}

/// Closed-form primal and dual steps against the generic projected-gradient
/// solver on `instances` random subproblems.
pub fn prox_suite(instances: usize) -> Result<CheckResult> {
    let mut rng = Prng::new(0x9A0C);
    let cfg = ProxConfig::default();
    let generic = cfg.generic();
    let mut worst = 0.0f64;
    for _ in 0..instances {
        let n = 1 + (rng.next_u64() % 5) as usize;
        let m = 1 + (rng.next_u64() % 3) as usize;
        let spec = random_affine_spec(&mut rng, n, m)?;
        let x = spec.action_set.project(&point(n, 2.0, &mut rng))?;
        let y: RealVector = (0..m).map(|_| rng.uniform(0.0, 3.0)).collect();
        let f_grad = point(n, 1.0, &mut rng);
        let rho = rng.uniform(0.01, 2.0);
        let closed = primal_step_detailed(&spec, &x, &y, &f_grad, rho, &cfg)?;
        let iterative = primal_step_detailed(&spec, &x, &y, &f_grad, rho, &generic)?;
        worst = worst.max(closed.point.max_abs_diff(&iterative.point));

        let slack = point(m, 2.0, &mut rng);
        let closed = dual_step_detailed(&spec.phi, &y, &slack, rho, &cfg)?;
        let iterative = dual_step_detailed(&spec.phi, &y, &slack, rho, &generic)?;
        worst = worst.max(closed.point.max_abs_diff(&iterative.point));
    }
    Ok(CheckResult::new("prox_closed_vs_generic", instances, worst, 1e-8))
}

/// A covering LP `min <l,x>` on `[0,1]^n` s.t. `<a,x> >= demand`.
#[derive(Debug, Clone)]
pub struct CoverInstance {
    pub l: RealVector,
    pub a: RealVector,
    pub demand: f64,
}

impl CoverInstance {
    pub fn random(rng: &mut Prng, n: usize) -> Self {
        let a: RealVector = (0..n).map(|_| rng.uniform(0.5, 1.5)).collect();
        let l: RealVector = (0..n).map(|_| rng.u01()).collect();
        let total: f64 = a.iter().sum();
        let demand = total * rng.uniform(0.1, 0.9);
        CoverInstance { l, a, demand }
    }

    pub fn feasible_set(&self) -> Result<FeasibleSetSpec> {
        let n = self.a.dim();
        let g = ConstraintMap::affine(Matrix::from_rows(vec![self.a.scale(-1.0).into_inner()])?, RealVector::zeros(1))?;
        FeasibleSetSpec::new(ActionSet::unit_box(n)?, g, RealVector::from([self.demand]))
    }

    pub fn exact(&self) -> Result<(f64, RealVector)> {
        let n = self.a.dim();
        knapsack_cover(&self.l, &self.a, self.demand, &vec![0.0; n], &vec![1.0; n])
    }

    /// Minimum over the grid `{0, h, 2h, ..., 1}^n`. The last coordinate is
    /// resolved in closed form: for fixed leading coordinates the feasible grid
    /// values of `x_n` form an upper interval, so its cheapest member is an endpoint.
    pub fn grid_minimum(&self, steps: usize) -> f64 {
        let n = self.a.dim();
        let h = 1.0 / steps as f64;
        let mut idx = vec![0usize; n - 1];
        let mut best = f64::INFINITY;
        loop {
            let mut covered = 0.0;
            let mut cost = 0.0;
            for (i, k) in idx.iter().enumerate() {
                covered += self.a[i] * (*k as f64 * h);
                cost += self.l[i] * (*k as f64 * h);
            }
            let missing = self.demand - covered;
            let (al, ll) = (self.a[n - 1], self.l[n - 1]);
            // smallest grid index k with al * k h >= missing
            let mut k = if missing <= 0.0 { 0 } else { (missing / (al * h)).ceil() as usize };
            while k > 0 && al * ((k - 1) as f64 * h) >= missing {
                k -= 1;
            }
            while k <= steps && al * (k as f64 * h) < missing {
                k += 1;
            }
            if k <= steps {
                let candidate = if ll >= 0.0 { k } else { steps };
                best = best.min(cost + ll * (candidate as f64 * h));
            }
            // odometer over the leading coordinates
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return best;
                }
                idx[pos] += 1;
                if idx[pos] <= steps {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// Exact hindsight path against a `1e-3` grid on `instances` LPs with `n <= 3`.
pub fn knapsack_grid_suite(instances: usize) -> Result<CheckResult> {
    let mut rng = Prng::new(0x6A1D);
    let mut worst = 0.0f64;
    for i in 0..instances {
        let n = 1 + i % 3;
        let inst = CoverInstance::random(&mut rng, n);
        let (exact, _) = inst.exact()?;
        let grid = inst.grid_minimum(1000);
        // the grid is a subset of the feasible set, so it can only be worse
        let err = if grid < exact - 1e-12 { f64::INFINITY } else { grid - exact };
        worst = worst.max(err);
    }
    Ok(CheckResult::new("knapsack_vs_grid", instances, worst, 2e-3))
}

/// Exact hindsight path against the generic penalty solver on LPs with `n <= 10`.
pub fn knapsack_generic_suite(instances: usize) -> Result<CheckResult> {
    let mut rng = Prng::new(0x6E4E);
    let cfg = ProxConfig::default();
    let mut worst = 0.0f64;
    for i in 0..instances {
        let n = 1 + i % 10;
        let inst = CoverInstance::random(&mut rng, n);
        let fs = inst.feasible_set()?;
        let objective = LinearCost::new(inst.l.clone());
        let (exact, _) = hindsight_cost(&objective, &fs, &cfg)?;
        let (generic, _) = hindsight_cost(&objective, &fs, &cfg.generic())?;
        worst = worst.max((exact - generic).abs());
    }
    Ok(CheckResult::new("knapsack_vs_penalty", instances, worst, 1e-6))
}

/// `chi` and `E` for the datacenter constants against a term-by-term recomputation.
pub fn dual_radius_formula_check() -> Result<CheckResult> {
    let mut worst = 0.0f64;
    for (n, seed) in [(2usize, 42u64), (10, 42), (10, 7), (25, 3)] {
        let s = datacenter_scenario(n, seed)?;
        let spec = s.spec();
        let c = &spec.consts;
        let tc = TheoremConstants::for_spec(spec)?;
        // half squared norm: sigma = L = 1
        let chi = 6.0 * c.g_star * c.g_star + 3.0 * c.f_star * c.d + 0.5 * c.d * c.d;
        let first = (2.0 * chi / c.eta) * (2.0 * chi / c.eta);
        let e = (first + 2.0 * chi).sqrt();
        worst = worst
            .max((tc.chi - chi).abs() / chi)
            .max((tc.e - e).abs() / e)
            .max((compute_e(compute_chi(c, &spec.psi, &spec.phi), c, &spec.phi) - e).abs() / e);
    }
    Ok(CheckResult::new("dual_radius_formula", 4, worst, 1e-14))
}

/// Every suite at the sizes used by the command-line `verify`.
pub fn verify_all() -> Result<Vec<CheckResult>> {
    let mut out = vec![lemma5_suite()?];
    out.extend(bregman_suite(1000)?);
    out.push(prox_suite(200)?);
    out.push(knapsack_grid_suite(100)?);
    out.push(knapsack_generic_suite(100)?);
    out.push(dual_radius_formula_check()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_minimum_on_hand_instance() {
        let inst = CoverInstance { l: RealVector::from([1.0, 2.0]), a: RealVector::from([1.0, 1.0]), demand: 1.5 };
        assert!((inst.grid_minimum(1000) - 2.0).abs() < 1e-12);
        assert_eq!(inst.exact().unwrap().0, 2.0);
    }

    #[test]
    fn small_suites_pass() {
        for r in bregman_suite(50).unwrap() {
            assert!(r.pass, "{r:?}");
        }
        assert!(prox_suite(20).unwrap().pass);
        assert!(knapsack_generic_suite(10).unwrap().pass);
        assert!(dual_radius_formula_check().unwrap().pass);
    }
}
