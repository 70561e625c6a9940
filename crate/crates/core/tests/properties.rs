use ocolt_core::algo::{run, run_ogd_with_schedule, RateSchedule, RunTrace};
use ocolt_core::bregman::{bregman_divergence, three_point_residual, BregmanGenerator};
use ocolt_core::cost::LinearCost;
use ocolt_core::linalg::{Matrix, RealVector};
use ocolt_core::oracle::{
    comparator_condition, evaluate_checkpoints, hindsight_cost, perturbation_stats, regret, select_b_t,
    select_b_t_from_series, violation, violation_from_scratch, FeasibleSetSpec,
};
use ocolt_core::problem::{AssumptionConstants, ConstraintMap, ProblemSpec};
use ocolt_core::prox::{dual_step, primal_step, primal_step_detailed, ProxConfig};
use ocolt_core::scenarios::{
    all_feasible_scenario, datacenter_scenario, static_lp_scenario, Prng, ReplayStream, ScenarioStream,
};
use ocolt_core::sets::ActionSet;
use ocolt_core::verify::{random_affine_spec, CoverInstance};
use proptest::prelude::*;

fn vec_in(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = RealVector> {
    prop::collection::vec(lo..hi, n).prop_map(RealVector::new)
}

fn generator(n: usize) -> impl Strategy<Value = BregmanGenerator> {
    prop_oneof![
        Just(BregmanGenerator::half_sq_euclidean()),
        vec_in(n, 0.2, 3.0).prop_map(|w| BregmanGenerator::weighted_quadratic(w).unwrap()),
    ]
}

fn triple() -> impl Strategy<Value = (BregmanGenerator, RealVector, RealVector, RealVector)> {
    (1usize..7).prop_flat_map(|n| (generator(n), vec_in(n, -5.0, 5.0), vec_in(n, -5.0, 5.0), vec_in(n, -5.0, 5.0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bregman_sandwich_and_three_point((gen, a, b, c) in triple()) {
        let d = bregman_divergence(&gen, &a, &b).unwrap();
        let sq = a.sub(&b).norm().powi(2);
        prop_assert!(d >= 0.5 * gen.sigma() * sq - 1e-10);
        prop_assert!(d <= 0.5 * gen.lipschitz() * sq + 1e-10);
        prop_assert!(three_point_residual(&gen, &a, &b, &c).unwrap().abs() <= 1e-10);
    }
}

fn action_set() -> impl Strategy<Value = ActionSet> {
    (1usize..6).prop_flat_map(|n| {
        prop_oneof![
            (vec_in(n, -2.0, 0.0), vec_in(n, 0.0, 2.0)).prop_map(|(lo, hi)| ActionSet::new_box(lo, hi).unwrap()),
            (vec_in(n, -1.0, 1.0), 0.1f64..3.0).prop_map(|(c, r)| ActionSet::new_ball(c, r).unwrap()),
            (0.1f64..4.0).prop_map(move |s| ActionSet::new_simplex(n, s).unwrap()),
        ]
    })
}

proptest! {
    #[test]
    fn projection_is_idempotent_and_inside(set in action_set(), seed in any::<u64>()) {
        let mut rng = Prng::new(seed);
        let p: Vec<f64> = (0..set.dim()).map(|_| rng.uniform(-6.0, 6.0)).collect();
        let q = set.project(&p).unwrap();
        prop_assert!(set.contains(&q, 1e-9));
        let r = set.project(&q).unwrap();
        prop_assert!(q.max_abs_diff(&r) <= 1e-12);
    }

    #[test]
    fn projection_beats_any_member(set in action_set(), seed in any::<u64>()) {
        // the projection is the closest point of the set
        let mut rng = Prng::new(seed);
        let n = set.dim();
        let p: Vec<f64> = (0..n).map(|_| rng.uniform(-6.0, 6.0)).collect();
        let q = set.project(&p).unwrap();
        for _ in 0..20 {
            let other = set.project(&(0..n).map(|_| rng.uniform(-6.0, 6.0)).collect::<Vec<_>>()).unwrap();
            prop_assert!(q.sub(&p).norm() <= other.sub(&p).norm() + 1e-9);
        }
    }

    #[test]
    fn box_diameter_bounds_pairwise_distance(lo in vec_in(4, -3.0, 0.0), hi in vec_in(4, 0.0, 3.0), seed in any::<u64>()) {
        let set = ActionSet::new_box(lo.clone(), hi.clone()).unwrap();
        prop_assert!((set.diameter() - hi.sub(&lo).norm()).abs() <= 1e-12);
        let mut rng = Prng::new(seed);
        let u = set.project(&(0..4).map(|_| rng.uniform(-4.0, 4.0)).collect::<Vec<_>>()).unwrap();
        let v = set.project(&(0..4).map(|_| rng.uniform(-4.0, 4.0)).collect::<Vec<_>>()).unwrap();
        prop_assert!(u.sub(&v).norm() <= set.diameter() + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prox_closed_form_matches_generic(seed in any::<u64>(), n in 1usize..6, m in 1usize..4) {
        let mut rng = Prng::new(seed);
        let spec = random_affine_spec(&mut rng, n, m).unwrap();
        let x = spec.action_set.project(&(0..n).map(|_| rng.uniform(-2.0, 2.0)).collect::<Vec<_>>()).unwrap();
        let y: Vec<f64> = (0..m).map(|_| rng.uniform(0.0, 3.0)).collect();
        let f: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let rho = rng.uniform(0.01, 2.0);
        let cfg = ProxConfig::default();
        let a = primal_step(&spec, &x, &y, &f, rho, &cfg).unwrap();
        let b = primal_step(&spec, &x, &y, &f, rho, &cfg.generic()).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-8);
        let s: Vec<f64> = (0..m).map(|_| rng.uniform(-2.0, 2.0)).collect();
        let a = dual_step(&spec, &y, &s, rho, &cfg).unwrap();
        let b = dual_step(&spec, &y, &s, rho, &cfg.generic()).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-8);
    }

    /// `f(x) - f(z) + theta(x+) - theta(z) <= (B(z,x) - B(z,x+))/rho + (2 rho/sigma) ||f'(x)||^2`
    /// for the primal step with linear `f` and `theta = <y, g(.)>`.
    #[test]
    fn one_step_inequality(seed in any::<u64>(), n in 1usize..6, m in 1usize..4) {
        let mut rng = Prng::new(seed);
        let spec = random_affine_spec(&mut rng, n, m).unwrap();
        let pick = |rng: &mut Prng| spec.action_set.project(&(0..n).map(|_| rng.uniform(-2.0, 2.0)).collect::<Vec<_>>()).unwrap();
        let x = pick(&mut rng);
        let z = pick(&mut rng);
        let y: Vec<f64> = (0..m).map(|_| rng.uniform(0.0, 3.0)).collect();
        let l: RealVector = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let rho = rng.uniform(0.01, 2.0);
        let x_next = primal_step_detailed(&spec, &x, &y, &l, rho, &ProxConfig::default()).unwrap().point;
        let theta = |u: &[f64]| spec.constraints.eval(u).dot(&y);
        let lhs = l.dot(&x) - l.dot(&z) + theta(&x_next) - theta(&z);
        let psi = &spec.psi;
        let rhs = (bregman_divergence(psi, &z, &x).unwrap() - bregman_divergence(psi, &z, &x_next).unwrap()) / rho
            + 2.0 * rho / psi.sigma() * l.norm().powi(2);
        prop_assert!(lhs <= rhs + 1e-9, "lhs {} rhs {}", lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn all_feasible_runs_reduce_to_ogd(seed in any::<u64>(), n in 1usize..8, eps_idx in 0usize..4) {
        let eps = [0.0, 0.25, 0.5, 0.75][eps_idx];
        let cfg = ProxConfig::default();
        let pd = run(&mut all_feasible_scenario(n, seed).unwrap(), eps, 300, &cfg).unwrap();
        let ogd = run_ogd_with_schedule(
            &mut all_feasible_scenario(n, seed).unwrap(),
            RateSchedule::adaptive(eps).unwrap(),
            300,
        ).unwrap();
        for (p, o) in pd.records.iter().zip(&ogd.records) {
            prop_assert!(p.y.iter().all(|v| *v == 0.0));
            prop_assert!(p.x.max_abs_diff(&o.x) <= 1e-12);
        }
        prop_assert_eq!(violation(&pd), 0.0);
    }

    #[test]
    fn runs_are_deterministic(seed in any::<u64>(), n in 1usize..6) {
        let cfg = ProxConfig::default();
        let a = run(&mut datacenter_scenario(n, seed).unwrap(), 0.5, 200, &cfg).unwrap();
        let b = run(&mut datacenter_scenario(n, seed).unwrap(), 0.5, 200, &cfg).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn declared_constants_hold_on_datacenter_runs(seed in any::<u64>(), n in 1usize..12, eps_idx in 0usize..4) {
        let eps = [0.0, 0.25, 0.5, 0.75][eps_idx];
        let trace = run(&mut datacenter_scenario(n, seed).unwrap(), eps, 400, &ProxConfig::default()).unwrap();
        prop_assert!(trace.breaches.is_empty(), "{:?}", trace.breaches.first());
    }

    #[test]
    fn hindsight_cost_is_monotone_in_the_shift(seed in any::<u64>(), n in 1usize..10) {
        let mut rng = Prng::new(seed);
        let inst = CoverInstance::random(&mut rng, n);
        let base = inst.feasible_set().unwrap();
        let objective = LinearCost::new(inst.l.clone());
        let lower = FeasibleSetSpec::new(base.base.clone(), base.constraints.clone(), base.w.scale(0.5)).unwrap();
        let (small_shift, x_small) = hindsight_cost(&objective, &lower, &ProxConfig::default()).unwrap();
        let (large_shift, x_large) = hindsight_cost(&objective, &base, &ProxConfig::default()).unwrap();
        // a smaller shift gives a larger set, hence a lower cost
        prop_assert!(small_shift <= large_shift + 1e-12);
        prop_assert!(lower.contains(&x_small, 1e-8));
        prop_assert!(base.contains(&x_large, 1e-8));
    }

    #[test]
    fn selected_shift_is_admissible(seed in any::<u64>(), m in 1usize..4, len in 2usize..60) {
        let mut rng = Prng::new(seed);
        let ys: Vec<Vec<f64>> = (0..len)
            .map(|_| (0..m).map(|_| if rng.u01() < 0.3 { 0.0 } else { rng.uniform(0.0, 5.0) }).collect())
            .collect();
        let bs: Vec<Vec<f64>> = (0..len).map(|_| (0..m).map(|_| rng.uniform(-3.0, 3.0)).collect()).collect();
        let w = select_b_t_from_series(&ys, &bs).unwrap();
        let stats = ocolt_core::oracle::perturbation_stats_from_series(&bs).unwrap();
        for j in 0..m {
            prop_assert!(stats.underline_b[j] <= w[j] && w[j] <= stats.bar_b[j]);
        }
        prop_assert!(comparator_condition(&ys, &bs, &w) <= 1e-9);
        // the maximum is always admissible
        prop_assert!(comparator_condition(&ys, &bs, &stats.bar_b) <= 1e-9);
    }
}

fn datacenter_trace(eps: f64, horizon: usize) -> (ProblemSpec, RunTrace) {
    let mut s = datacenter_scenario(10, 42).unwrap();
    let spec = s.spec().clone();
    (spec, run(&mut s, eps, horizon, &ProxConfig::default()).unwrap())
}

#[test]
fn streaming_violation_matches_recomputation() {
    for eps in [0.0, 0.75] {
        let (_, trace) = datacenter_trace(eps, 3000);
        for cut in [1, 2, 17, 500, 3000] {
            let mut prefix = trace.clone();
            prefix.records.truncate(cut);
            assert!((violation(&prefix) - violation_from_scratch(&prefix)).abs() <= 1e-12);
        }
    }
}

#[test]
fn perturbation_stats_match_second_pass() {
    let (_, trace) = datacenter_trace(0.5, 2000);
    let stats = perturbation_stats(&trace).unwrap();
    let mut sum = 0.0;
    let mut max = f64::NEG_INFINITY;
    for r in trace.records.iter().rev() {
        sum += r.b[0];
        max = f64::max(max, r.b[0]);
    }
    assert!((stats.underline_b[0] - sum / 2000.0).abs() <= 1e-12);
    assert_eq!(stats.bar_b[0], max);
}

#[test]
fn checkpoint_prefixes_match_truncated_runs() {
    let (spec, trace) = datacenter_trace(0.25, 1000);
    let cfg = ProxConfig::default();
    let all = evaluate_checkpoints(&spec, &trace, &[100, 350, 1000], &cfg).unwrap();
    for cp in &all {
        let mut prefix = trace.clone();
        prefix.records.truncate(cp.t);
        let w = select_b_t(&prefix).unwrap();
        assert_eq!(w, cp.w);
        let fs = FeasibleSetSpec::new(spec.action_set.clone(), spec.constraints.clone(), w).unwrap();
        assert!((regret(&prefix, &fs).unwrap() - cp.regret).abs() <= 1e-9 * cp.cum_cost.abs().max(1.0));
        assert!(cp.condition <= 1e-9);
        assert!(cp.cost_min >= cp.cost_selected - 1e-9 && cp.cost_selected >= cp.cost_max - 1e-9);
    }
}

#[test]
fn datacenter_golden_prefix() {
    // independent splitmix64 reference for seed 42, n = 2, plays (0,0), (0.5,1), (1,0.25)
    let mut s = datacenter_scenario(2, 42).unwrap();
    assert_eq!(s.a().as_slice(), &[1.2415648787718232, 0.6599103928769201]);
    let plays = [[0.0, 0.0], [0.5, 1.0], [1.0, 0.25]];
    let golden = [
        ([0.0, 0.0], 0.9507376358243717),
        ([0.27860113025513866, 0.34419071652363753], 0.9507376358243717),
        ([0.03803016854024621, 0.8682280765465323], 0.5862503169603871),
    ];
    for (t, (x, (l, b))) in plays.iter().zip(golden).enumerate() {
        let fb = s.reveal(t + 1, x).unwrap();
        assert_eq!(fb.f_grad.as_slice(), &l);
        assert!((fb.b[0] - b).abs() <= 1e-15 * b);
    }
}

#[test]
fn three_rounds_match_hand_unrolled_updates() {
    let mut s = datacenter_scenario(2, 42).unwrap();
    let a = s.a().clone();
    let trace = run(&mut s, 0.5, 3, &ProxConfig::default()).unwrap();

    let clip = |v: f64| v.clamp(0.0, 1.0);
    let peak = 0.5 * (a[0] + a[1]);
    let l2 = [0.27860113025513866, 0.34419071652363753];
    let l3 = [0.03803016854024621, 0.8682280765465323];
    // round 1: x = P(0) = 0, y = 0, b_1 = peak
    let x1 = [0.0, 0.0];
    let y1 = 0.0;
    // round 2: zero gradient, rho_1 = 1
    let x2 = [clip(x1[0] - (0.0 - a[0] * y1)), clip(x1[1] - (0.0 - a[1] * y1))];
    let b2 = peak;
    let y2 = f64::max(0.0, y1 + (b2 - (a[0] * x2[0] + a[1] * x2[1])));
    // round 3: rho_2 = 2^-0.5, gradient l_2
    let r2 = 2f64.powf(-0.5);
    let x3 = [clip(x2[0] - r2 * (l2[0] - a[0] * y2)), clip(x2[1] - r2 * (l2[1] - a[1] * y2))];
    let b3 = peak * (-(l2[0] * x2[0] + l2[1] * x2[1])).exp();
    let y3 = f64::max(0.0, y2 + r2 * (b3 - (a[0] * x3[0] + a[1] * x3[1])));

    let r = &trace.records;
    assert_eq!(r[0].x.as_slice(), &x1);
    assert_eq!(r[1].x.as_slice(), &x2);
    assert_eq!(r[2].x.as_slice(), &x3);
    assert_eq!((r[0].y[0], r[1].y[0], r[2].y[0]), (y1, y2, y3));
    assert_eq!(r[2].f_grad.as_slice(), &l3);
    assert_eq!(r[2].f_value, l3[0] * x3[0] + l3[1] * x3[1]);
}

#[test]
fn regret_is_zero_when_the_first_action_is_optimal() {
    let g = ConstraintMap::affine(Matrix::from_rows(vec![vec![-1.0, -1.0]]).unwrap(), RealVector::zeros(1)).unwrap();
    let consts = AssumptionConstants {
        d: 2f64.sqrt(),
        f_star: 3.0,
        g_star: 3.0,
        g: 3.0,
        eta: 0.5,
        slater_point: RealVector::from([1.0, 1.0]),
    };
    let spec = ProblemSpec::new(
        ActionSet::unit_box(2).unwrap(),
        g,
        BregmanGenerator::half_sq_euclidean(),
        BregmanGenerator::half_sq_euclidean(),
        consts,
    )
    .unwrap();
    let mut stream =
        ReplayStream::new(spec.clone(), vec![(RealVector::from([1.0, 2.0]), RealVector::from([-1.0]))]).unwrap();
    let trace = run(&mut stream, 0.5, 1, &ProxConfig::default()).unwrap();
    let fs = FeasibleSetSpec::new(spec.action_set.clone(), spec.constraints.clone(), RealVector::from([-1.0])).unwrap();
    assert_eq!(regret(&trace, &fs).unwrap(), 0.0);
    assert!(stream.reveal(2, &[0.0, 0.0]).is_err());
}

#[test]
fn static_lp_optimum_matches_grid() {
    for seed in [1u64, 42, 99] {
        let (lp, f_star) = static_lp_scenario(2, seed).unwrap();
        let inst = CoverInstance { l: lp.l().clone(), a: lp.a().clone(), demand: lp.b()[0] };
        let grid = inst.grid_minimum(1000);
        assert!(grid >= f_star - 1e-12 && grid - f_star <= 1e-3);
    }
}
