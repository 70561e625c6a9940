//! `run`, `sweep` and `verify`.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use anyhow::{Context, Result};
use ocolt_core::experiment::{run_experiment, RunReport};
use ocolt_core::prox::ProxConfig;
use ocolt_core::verify::verify_all;

use crate::config::RunConfig;
use crate::output::{fmt_g17, write_run, write_sweep_csv};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Error = 1,
    MonitorBreach = 2,
}

fn status_of<'a>(reports: impl IntoIterator<Item = &'a RunReport>) -> Status {
    if reports.into_iter().all(RunReport::monitors_pass) {
        Status::Ok
    } else {
        Status::MonitorBreach
    }
}

fn print_run_line(r: &RunReport) {
    println!(
        "eps={} T={} regret={} (bound {}) violation={} (bound {}) max|y|={} E={} monitors={}",
        r.config.epsilon,
        r.config.horizon,
        fmt_g17(r.final_regret),
        fmt_g17(r.regret_bound),
        fmt_g17(r.final_violation),
        fmt_g17(r.violation_bound),
        fmt_g17(r.max_dual_norm),
        fmt_g17(r.constants.e),
        if r.monitors_pass() { "pass" } else { "FAIL" },
    );
}

pub fn cmd_run(cfg: &RunConfig) -> Result<Status> {
    let report = run_experiment(&cfg.experiment(), &ProxConfig::default())?;
    write_run(&cfg.output_dir, cfg, &report)?;
    print_run_line(&report);
    println!("wrote {}", cfg.output_dir.display());
    Ok(status_of([&report]))
}

/// Subdirectory name for one sweep member, e.g. `eps_0.25`.
pub fn epsilon_dir(epsilon: f64) -> String {
    format!("eps_{epsilon}")
}

/// Sweep parallelism: `OCO_THREADS` if set, else the available cores.
pub fn worker_count(jobs: usize) -> Result<usize> {
    let cap = match std::env::var("OCO_THREADS") {
        Ok(v) => v.trim().parse::<usize>().ok().filter(|n| *n > 0).with_context(|| format!("OCO_THREADS='{v}' is not a positive integer"))?,
        Err(_) => thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    Ok(cap.min(jobs).max(1))
}

pub fn cmd_sweep(base: &RunConfig, epsilons: &[f64]) -> Result<Status> {
    let configs: Vec<RunConfig> = epsilons
        .iter()
        .map(|&eps| {
            let mut cfg = base.with_epsilon(eps);
            cfg.output_dir = base.output_dir.join(epsilon_dir(eps));
            cfg.experiment().validate().map(|_| cfg)
        })
        .collect::<std::result::Result<_, _>>()?;

    let workers = worker_count(configs.len())?;
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, ocolt_core::Result<RunReport>)>();
    let mut slots: Vec<Option<RunReport>> = (0..configs.len()).map(|_| None).collect();

    thread::scope(|scope| -> Result<()> {
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, configs) = (&next, &configs);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cfg) = configs.get(i) else { break };
                let result = run_experiment(&cfg.experiment(), &ProxConfig::default());
                if tx.send((i, result)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        // single collector: the only writer of output files
        for (i, result) in rx {
            let report = result.with_context(|| format!("run with epsilon {}", configs[i].epsilon))?;
            write_run(&configs[i].output_dir, &configs[i], &report)?;
            slots[i] = Some(report);
        }
        Ok(())
    })?;

    let reports: Vec<RunReport> = slots.into_iter().map(|r| r.expect("every run reported")).collect();
    for r in &reports {
        print_run_line(r);
    }
    let sweep_path: PathBuf = base.output_dir.join("sweep.csv");
    write_sweep_csv(&sweep_path, &reports)?;
    println!("wrote {}", sweep_path.display());
    Ok(status_of(&reports))
}

pub fn cmd_verify() -> Result<Status> {
    let checks = verify_all()?;
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    println!("{:<width$}  {:>6}  {:>7}  {:>12}  {:>10}", "check", "status", "cases", "worst", "tolerance");
    for c in &checks {
        println!(
            "{:<width$}  {:>6}  {:>7}  {:>12.3e}  {:>10.1e}",
            c.name,
            if c.pass { "pass" } else { "FAIL" },
            c.cases,
            c.worst,
            c.tolerance
        );
    }
    let all = checks.iter().all(|c| c.pass);
    println!("{}", if all { "all checks passed" } else { "some checks FAILED" });
    Ok(if all { Status::Ok } else { Status::Error })
}
