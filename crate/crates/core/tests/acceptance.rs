//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ocolt_core::algo::{run, run_ogd_with_schedule, RateSchedule};
use ocolt_core::experiment::{run_experiment, ExperimentConfig, RunReport};
use ocolt_core::metrics::{corollary2_report, fit_decay, loglog_slope, static_gap, violation_bound, BOUND_TOL};
use ocolt_core::oracle::perturbation_stats;
use ocolt_core::prox::ProxConfig;
use ocolt_core::run_static_averaged;
use ocolt_core::scenarios::{all_feasible_scenario, static_lp_scenario, ScenarioStream};
use ocolt_core::verify::{bregman_suite, knapsack_generic_suite, knapsack_grid_suite, lemma5_suite, prox_suite};

const SWEEP_EPSILONS: [f64; 4] = [0.0, 0.25, 0.5, 0.75];
const HORIZON: usize = 25_000;

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn report(outcomes: &mut Vec<Outcome>, id: u32, name: &'static str, pass: bool, detail: String) {
    println!("{} [{id:>2}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    outcomes.push(Outcome { id, name, pass, detail });
}

fn sweep() -> (Vec<RunReport>, Duration) {
    let start = Instant::now();
    let reports = SWEEP_EPSILONS
        .iter()
        .map(|&epsilon| {
            let cfg = ExperimentConfig { epsilon, horizon: HORIZON, ..ExperimentConfig::default() };
            run_experiment(&cfg, &ProxConfig::default()).expect("sweep run")
        })
        .collect();
    (reports, start.elapsed())
}

fn monitor_summary(reports: &[RunReport], name: &str) -> (bool, String) {
    let mut pass = true;
    let mut parts = Vec::new();
    for r in reports {
        let m = r.monitor(name).expect("monitor present");
        pass &= m.pass;
        parts.push(format!("eps={} max_slack={:.3e} ({} rounds)", r.config.epsilon, m.max_slack, m.checked));
    }
    (pass, parts.join("; "))
}

fn main() -> ExitCode {
    let mut outcomes = Vec::new();
    let cfg = ProxConfig::default();

    let (reports, sweep_time) = sweep();

    // 1
    let (regret_ok, regret_detail) = monitor_summary(&reports, "regret_bound");
    let (viol_ok, viol_detail) = monitor_summary(&reports, "violation_bound");
    let in_time = sweep_time < Duration::from_secs(120);
    report(
        &mut outcomes,
        1,
        "regret and violation bounds at every checkpoint",
        regret_ok && viol_ok && in_time,
        format!("regret [{regret_detail}] violation [{viol_detail}] sweep {:.1}s", sweep_time.as_secs_f64()),
    );

    // 2
    let (dual_ok, _) = monitor_summary(&reports, "dual_radius");
    let detail = reports
        .iter()
        .map(|r| format!("eps={} max|y|={:.4} E={:.4}", r.config.epsilon, r.max_dual_norm, r.constants.e))
        .collect::<Vec<_>>()
        .join("; ");
    report(&mut outcomes, 2, "dual iterates stay within E", dual_ok, detail);

    // 3
    let (prop_ok, prop_detail) = monitor_summary(&reports, "violation_vs_dual_norm");
    report(&mut outcomes, 3, "violation bounded by the dual norm at every prefix", prop_ok, prop_detail);

    // 4
    {
        let r = &reports[0];
        let bound = violation_bound(1, 0.0, &r.constants).unwrap();
        let vs: Vec<f64> = r.trace.records.iter().map(|rec| rec.cum_slack.positive_part().norm()).collect();
        let max_v = vs.iter().cloned().fold(0.0, f64::max);
        let drift = vs[HORIZON - 1] - vs[5000 - 1];
        let pass = max_v <= bound + BOUND_TOL && drift <= 0.05 * bound;
        report(
            &mut outcomes,
            4,
            "constant-rate violation stays bounded and flat",
            pass,
            format!("max V={max_v:.4e} bound={bound:.4e} V(25000)-V(5000)={drift:.4e} (limit {:.4e})", 0.05 * bound),
        );
    }

    // 5
    {
        let r = &reports[2];
        let window: Vec<_> = r.checkpoints.iter().filter(|c| c.checkpoint.t >= 2500).collect();
        let ts: Vec<usize> = window.iter().map(|c| c.checkpoint.t).collect();
        let vs: Vec<f64> = window.iter().map(|c| c.checkpoint.violation).collect();
        let v_fit = fit_decay(&ts, &vs, 1.0).unwrap();
        let xs: Vec<f64> = ts.iter().map(|&t| t as f64).collect();
        let rs: Vec<f64> = window.iter().map(|c| c.checkpoint.regret.max(1.0)).collect();
        let r_slope = loglog_slope(&xs, &rs).unwrap();
        let pass = v_fit.at_most(0.6) && r_slope <= 0.7;
        report(
            &mut outcomes,
            5,
            "sublinear growth at eps=0.5",
            pass,
            format!("violation fit {v_fit:?} (<= 0.6); regret slope {r_slope:.4} (<= 0.7); {} checkpoints", ts.len()),
        );
    }

    // 6
    {
        let start = Instant::now();
        let r = lemma5_suite().unwrap();
        let elapsed = start.elapsed();
        report(
            &mut outcomes,
            6,
            "step-size window sums",
            r.pass && elapsed < Duration::from_secs(10),
            format!("{} (t, eps) pairs, {} failures, {:.2}s", r.cases, r.worst, elapsed.as_secs_f64()),
        );
    }

    // 7
    {
        let mut pass = true;
        let mut worst = 0.0f64;
        let mut nonzero_dual = 0usize;
        for &eps in &SWEEP_EPSILONS {
            let pd = run(&mut all_feasible_scenario(10, 42).unwrap(), eps, HORIZON, &cfg).unwrap();
            let ogd = run_ogd_with_schedule(
                &mut all_feasible_scenario(10, 42).unwrap(),
                RateSchedule::adaptive(eps).unwrap(),
                HORIZON,
            )
            .unwrap();
            for (p, o) in pd.records.iter().zip(&ogd.records) {
                nonzero_dual += p.y.iter().filter(|v| **v != 0.0).count();
                worst = worst.max(p.x.max_abs_diff(&o.x));
            }
            pass &= pd.len() == ogd.len();
        }
        pass &= nonzero_dual == 0 && worst <= 1e-12;
        report(
            &mut outcomes,
            7,
            "all-feasible runs reduce to OGD",
            pass,
            format!("nonzero dual entries {nonzero_dual}; max coordinate gap {worst:.3e}"),
        );
    }

    // 8
    {
        let start = Instant::now();
        let (lp, f_star) = static_lp_scenario(2, 42).unwrap();
        let grid = [100usize, 1_000, 10_000, 100_000];
        let (_, trace) =
            run_static_averaged(lp.spec(), lp.cost(), lp.b(), 1.0, 0.0, *grid.last().unwrap(), &cfg).unwrap();
        let points = grid
            .iter()
            .map(|&t| {
                let x_bar = trace.prefix_average(t).unwrap();
                let slack = lp.spec().constraints.eval(&x_bar).add(&lp.b());
                static_gap(x_bar, lp.cost().as_ref(), f_star, &slack, t)
            })
            .collect::<Vec<_>>();
        let rep = corollary2_report(points, 1.0, 0.0).unwrap();
        let elapsed = start.elapsed();
        let pass = rep.gap_fit.at_most(-0.8) && rep.infeasibility_fit.at_most(-0.8) && elapsed < Duration::from_secs(60);
        let gaps: Vec<String> =
            rep.points.iter().map(|p| format!("{:.2e}/{:.2e}", p.optimality_gap.abs(), p.infeasibility)).collect();
        report(
            &mut outcomes,
            8,
            "averaged iterate on a static LP",
            pass,
            format!(
                "f*={f_star:.6} gaps [{}] fits {:?} / {:?} {:.2}s",
                gaps.join(", "),
                rep.gap_fit,
                rep.infeasibility_fit,
                elapsed.as_secs_f64()
            ),
        );
    }

    // 9
    {
        let grid = knapsack_grid_suite(100).unwrap();
        let generic = knapsack_generic_suite(100).unwrap();
        report(
            &mut outcomes,
            9,
            "exact hindsight solver vs grid and penalty solvers",
            grid.pass && generic.pass,
            format!("grid worst {:.3e} (<= 2e-3); penalty worst {:.3e} (<= 1e-6)", grid.worst, generic.worst),
        );
    }

    // 10
    {
        let mut pass = true;
        let mut parts = Vec::new();
        for r in &reports {
            let stats = perturbation_stats(&r.trace).unwrap();
            let inside = r
                .selected_b_t
                .iter()
                .enumerate()
                .all(|(j, w)| stats.underline_b[j] <= *w && *w <= stats.bar_b[j]);
            let ok = r.hindsight_ordering_ok && inside && r.selection_condition <= 1e-9;
            pass &= ok;
            parts.push(format!(
                "eps={} costs {:.2} >= {:.2} >= {:.2} condition {:.3e}",
                r.config.epsilon, r.hindsight.x_min, r.hindsight.x_t, r.hindsight.x_max, r.selection_condition
            ));
        }
        report(&mut outcomes, 10, "comparator set ordering and shift selection", pass, parts.join("; "));
    }

    // 11
    {
        let prox = prox_suite(200).unwrap();
        let identities: Vec<_> =
            bregman_suite(1000).unwrap().into_iter().filter(|c| c.name.starts_with("three_point")).collect();
        let pass = prox.pass && identities.iter().all(|c| c.pass);
        let worst_identity = identities.iter().map(|c| c.worst).fold(0.0, f64::max);
        report(
            &mut outcomes,
            11,
            "prox closed forms and three-point identity",
            pass,
            format!("prox worst {:.3e} over {} instances; identity worst {worst_identity:.3e}", prox.worst, prox.cases),
        );
    }

    let failed: Vec<_> = outcomes.iter().filter(|o| !o.pass).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    for o in &failed {
        println!("  failed [{}] {}: {}", o.id, o.name, o.detail);
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
