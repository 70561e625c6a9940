//! Artifact writers: `trace.csv`, `summary.json`, `plot.dat` and the sweep matrix.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use ocolt_core::experiment::{HindsightCosts, RunReport};
use ocolt_core::linalg::RealVector;
use ocolt_core::metrics::{MonitorReport, StaticGap};
use serde::Serialize;

use crate::config::RunConfig;

/// `printf("%.17g", v)`: 17 significant digits, trailing zeros trimmed,
/// scientific notation outside `1e-4 <= |v| < 1e17`.
pub fn fmt_g17(v: f64) -> String {
    const PRECISION: i32 = 17;
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..PRECISION).contains(&exp) {
        let decimals = (PRECISION - 1 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub const TRACE_HEADER: [&str; 7] = ["t", "rho", "f_value", "cum_cost", "viol_norm", "dual_norm", "checkpoint_regret"];

pub fn write_trace_csv(path: &Path, report: &RunReport) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(BufWriter::new(file));
    w.write_record(TRACE_HEADER)?;
    let at_checkpoint: BTreeMap<usize, f64> =
        report.checkpoints.iter().map(|c| (c.checkpoint.t, c.checkpoint.regret)).collect();
    for r in &report.trace.records {
        w.write_record([
            r.t.to_string(),
            fmt_g17(r.rho),
            fmt_g17(r.f_value),
            fmt_g17(r.cum_cost),
            fmt_g17(r.cum_slack.positive_part().norm()),
            fmt_g17(r.y.norm()),
            at_checkpoint.get(&r.t).map(|v| fmt_g17(*v)).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Whitespace-separated checkpoint series with a `#` header line.
pub fn write_plot_data(path: &Path, report: &RunReport) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    writeln!(
        w,
        "# t regret regret_bound violation violation_bound dual_norm cost_x_min cost_x_t cost_x_max"
    )?;
    for c in &report.checkpoints {
        let cp = &c.checkpoint;
        let cols = [
            cp.regret,
            c.regret_bound,
            cp.violation,
            c.violation_bound,
            cp.dual_norm,
            cp.cost_min,
            cp.cost_selected,
            cp.cost_max,
        ];
        let cols: Vec<String> = cols.iter().map(|v| fmt_g17(*v)).collect();
        writeln!(w, "{} {}", cp.t, cols.join(" "))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct MonitorStatus<'a> {
    status: &'static str,
    #[serde(flatten)]
    report: &'a MonitorReport,
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    config: &'a RunConfig,
    engine: String,
    final_regret: f64,
    final_violation: f64,
    regret_bound: f64,
    violation_bound: f64,
    max_dual_norm: f64,
    chi: f64,
    dual_radius: f64,
    selected_b_t: &'a RealVector,
    selection_condition: f64,
    hindsight_costs: &'a HindsightCosts,
    hindsight_ordering: &'static str,
    assumption_breaches: usize,
    monitors_pass: bool,
    monitors: BTreeMap<&'a str, MonitorStatus<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    static_gap: Option<&'a StaticGap>,
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

pub fn write_summary(path: &Path, cfg: &RunConfig, report: &RunReport) -> Result<()> {
    let summary = Summary {
        config: cfg,
        engine: serde_json::to_value(report.engine)?.as_str().unwrap_or_default().to_string(),
        final_regret: report.final_regret,
        final_violation: report.final_violation,
        regret_bound: report.regret_bound,
        violation_bound: report.violation_bound,
        max_dual_norm: report.max_dual_norm,
        chi: report.constants.chi,
        dual_radius: report.constants.e,
        selected_b_t: &report.selected_b_t,
        selection_condition: report.selection_condition,
        hindsight_costs: &report.hindsight,
        hindsight_ordering: pass_fail(report.hindsight_ordering_ok),
        assumption_breaches: report.assumption_breaches,
        monitors_pass: report.monitors_pass(),
        monitors: report
            .monitors
            .iter()
            .map(|m| (m.name.as_str(), MonitorStatus { status: pass_fail(m.pass), report: m }))
            .collect(),
        static_gap: report.static_gap.as_ref(),
    };
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// All per-run artifacts into `dir`.
pub fn write_run(dir: &Path, cfg: &RunConfig, report: &RunReport) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    write_trace_csv(&dir.join("trace.csv"), report)?;
    write_summary(&dir.join("summary.json"), cfg, report)?;
    write_plot_data(&dir.join("plot.dat"), report)
}

pub const SWEEP_HEADER: [&str; 9] = [
    "epsilon",
    "final_regret",
    "final_violation",
    "max_dual_norm",
    "regret_bound",
    "violation_bound",
    "dual_radius",
    "hindsight_x_t",
    "monitors_pass",
];

pub fn write_sweep_csv(path: &Path, reports: &[RunReport]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(BufWriter::new(file));
    w.write_record(SWEEP_HEADER)?;
    for r in reports {
        w.write_record([
            fmt_g17(r.config.epsilon),
            fmt_g17(r.final_regret),
            fmt_g17(r.final_violation),
            fmt_g17(r.max_dual_norm),
            fmt_g17(r.regret_bound),
            fmt_g17(r.violation_bound),
            fmt_g17(r.constants.e),
            fmt_g17(r.hindsight.x_t),
            r.monitors_pass().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
