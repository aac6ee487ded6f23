//! `carleman` — weight-sequence analysis and constructive Borel extensions.
//!
//! Exit codes compose in shell pipelines:
//! 0 = holds, 1 = fails, 2 = usage/parse error, 3 = undetermined.

mod manifest;
mod output;

use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use carleman::accept::{format_table, run_acceptance};
use carleman::conditions::{
    check_beta1, check_gamma_r, check_sv_r, is_quasianalytic, lower_order, nq_sum,
};
use carleman::jets::{classify, Classification, JetSpec};
use carleman::synth::{build_bump, ExtensionOperator};
use carleman::util::log_spaced;
use carleman::{assoc, make_sequence_with, ConditionReport, Verdict, WeightSequence};

use manifest::Manifest;
use output::{sink, write_function_csv};

#[derive(Parser)]
#[command(name = "carleman", version, about = "Weight-sequence conditions, ramified interpolation, and constructive Borel extensions", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scan horizon for condition checks.
    #[arg(long, global = true, default_value_t = 100_000)]
    horizon: usize,
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the primary output to this path (CSV outputs get a .json
    /// diagnostics sidecar next to them).
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full regularity/quasianalyticity report for one sequence.
    Analyze {
        /// Sequence spec, e.g. gevrey:s=2, qgevrey:q=2, shift(gevrey:s=1),
        /// pow(...,0.5), lcmin(...), interp(...,r=2), table:file.csv.
        spec: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check one condition; the exit code carries the verdict.
    Check {
        /// One of: lc, mg, dc, nq, beta1, gamma_r, sv_r, integral,
        /// quasianalytic.
        condition: String,
        /// Sequence M.
        #[arg(long = "m")]
        m_spec: String,
        /// Sequence N for the mixed conditions (defaults to M).
        #[arg(long = "n")]
        n_spec: Option<String>,
        /// Ramification parameter.
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Cap for the s-search in SV_r.
        #[arg(long, default_value_t = 32)]
        s_max: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Emit the r-interpolating sequence and verify its identities.
    Interpolate {
        #[arg(long = "m")]
        m_spec: String,
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate the associated weight function: CSV t,omega,sigma,err.
    Assoc {
        #[arg(long = "m")]
        m_spec: String,
        #[arg(long, default_value_t = 1.5)]
        t_min: f64,
        #[arg(long, default_value_t = 1e4)]
        t_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Build a plateau bump from a sequence's quotients: CSV x,re_f,im_f.
    Bump {
        #[arg(long = "m")]
        m_spec: String,
        /// Build over the r-interpolating sequence's quotients.
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Number of box factors.
        #[arg(long, default_value_t = 50)]
        k: usize,
        /// log2 of the grid size.
        #[arg(long, default_value_t = 18)]
        grid: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Extend a finite jet: CSV x,re_f,im_f plus a diagnostics sidecar.
    Extend {
        #[arg(long = "m")]
        m_spec: String,
        #[arg(long = "n")]
        n_spec: Option<String>,
        /// Jet JSON file: {"r":..,"coeffs":[[re,im],..],"envelope":..,"flavor":..}.
        #[arg(long)]
        jet: std::path::PathBuf,
        /// Ramification (defaults to the jet's declared r).
        #[arg(long)]
        r: Option<u32>,
        /// Roumieu index c of the source space Lambda_{M,c}.
        #[arg(long, default_value_t = 1)]
        c: u32,
        /// log2 of the grid size.
        #[arg(long, default_value_t = 20)]
        grid: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Jet-space operations.
    Jets {
        #[command(subcommand)]
        action: JetsAction,
    },
    /// Run the acceptance suite; exit 0 iff every criterion passes.
    Accept {
        /// Reduced horizons and no synthesis criteria (< 30 s).
        #[arg(long)]
        quick: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum JetsAction {
    /// Classify a jet against a reference sequence over an h-grid.
    Classify {
        #[arg(long)]
        jet: std::path::PathBuf,
        #[arg(long = "m")]
        m_spec: String,
        /// Comma-separated h values.
        #[arg(long, default_value = "0.5,1,2,4")]
        h_grid: String,
        #[command(flatten)]
        common: Common,
    },
}

fn verdict_code(v: Verdict) -> ExitCode {
    match v {
        Verdict::Holds => ExitCode::from(0),
        Verdict::Fails => ExitCode::from(1),
        Verdict::Undetermined => ExitCode::from(3),
    }
}

fn parse_seq(spec: &str, horizon: usize) -> anyhow::Result<WeightSequence> {
    make_sequence_with(spec, horizon).with_context(|| format!("parsing sequence spec `{spec}`"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Analyze { spec, common } => analyze(&spec, &common),
        Command::Check { condition, m_spec, n_spec, r, s_max, common } => {
            check(&condition, &m_spec, n_spec.as_deref(), r, s_max, &common)
        }
        Command::Interpolate { m_spec, r, common } => interpolate(&m_spec, r, &common),
        Command::Assoc { m_spec, t_min, t_max, points, common } => {
            assoc_cmd(&m_spec, t_min, t_max, points, &common)
        }
        Command::Bump { m_spec, r, k, grid, common } => bump_cmd(&m_spec, r, k, grid, &common),
        Command::Extend { m_spec, n_spec, jet, r, c, grid, common } => {
            extend_cmd(&m_spec, n_spec.as_deref(), &jet, r, c, grid, &common)
        }
        Command::Jets { action } => match action {
            JetsAction::Classify { jet, m_spec, h_grid, common } => {
                classify_cmd(&jet, &m_spec, &h_grid, &common)
            }
        },
        Command::Accept { quick, common } => accept_cmd(quick, &common),
    }
}

fn report_lines(rep: &ConditionReport) -> String {
    let mut s = format!("{rep}");
    for note in &rep.notes {
        s.push_str(&format!("\n  note: {note}"));
    }
    s
}

fn analyze(spec: &str, common: &Common) -> anyhow::Result<ExitCode> {
    let manifest = Manifest::new(common.horizon, None);
    let m = parse_seq(spec, common.horizon)?;
    let h = common.horizon;

    let mut reports: Vec<ConditionReport> = Vec::new();
    reports.push(m.is_log_convex(h)?);
    reports.push(m.check_mg(h)?);
    reports.push(m.check_dc(h)?);
    for r in [1.0, 2.0, 3.0] {
        reports.push(check_gamma_r(&m, &m, r, h)?);
    }
    reports.push(check_beta1(&m, 8, h)?);

    let mut nq_reports = Vec::new();
    for r in [1.0, 2.0, 3.0] {
        let nq = nq_sum(&m, r, h)?;
        nq_reports.push(json!({
            "r": r,
            "partial_sum": nq.partial_sum,
            "tail_bound": nq.tail_bound,
            "converges": nq.converges.name(),
        }));
    }
    let lo = lower_order(&m, h)?;

    if common.json {
        let doc = json!({
            "manifest": manifest.finish(&["analyze", spec]),
            "sequence": {"label": m.label(), "normalized": m.is_normalized()},
            "reports": reports.iter().map(|r| r.schema_json()).collect::<Vec<_>>(),
            "nq": nq_reports,
            "lower_order": {
                "omega": if lo.omega.is_finite() { json!(lo.omega) } else { json!("inf") },
                "lambda": lo.lambda,
                "window": [lo.window.0, lo.window.1],
            },
        });
        sink(common.out.as_deref(), &serde_json::to_string_pretty(&doc)?)?;
    } else {
        let mut text = format!("sequence {} (horizon {h})\n", m.label());
        for rep in &reports {
            text.push_str(&report_lines(rep));
            text.push('\n');
        }
        for nq in &nq_reports {
            text.push_str(&format!(
                "nq_r r={}: partial {}, tail {}, converges: {}\n",
                nq["r"], nq["partial_sum"], nq["tail_bound"], nq["converges"]
            ));
        }
        text.push_str(&format!(
            "lower order: omega = {:.4}, lambda = {:.4} (window {:?})\n",
            lo.omega, lo.lambda, lo.window
        ));
        sink(common.out.as_deref(), &text)?;
    }
    Ok(ExitCode::from(0))
}

fn check(
    condition: &str,
    m_spec: &str,
    n_spec: Option<&str>,
    r: f64,
    s_max: u32,
    common: &Common,
) -> anyhow::Result<ExitCode> {
    let manifest = Manifest::new(common.horizon, None);
    let m = parse_seq(m_spec, common.horizon)?;
    let n = match n_spec {
        Some(spec) => parse_seq(spec, common.horizon)?,
        None => m.clone(),
    };
    let h = common.horizon;

    let rep = match condition {
        "lc" => m.is_log_convex(h)?,
        "mg" => m.check_mg(h)?,
        "dc" => m.check_dc(h)?,
        "nq" => {
            let nq = nq_sum(&m, r, h)?;
            let mut rep = ConditionReport::new(carleman::Condition::NqR, nq.converges, h);
            rep.params = carleman::CondParams::r(r);
            rep.sup_value = nq.total_upper();
            rep.tail_bound = nq.tail_bound;
            for note in &nq.notes {
                rep.note(note.clone());
            }
            rep
        }
        "beta1" => check_beta1(&m, 8, h)?,
        "gamma_r" => check_gamma_r(&m, &n, r, h)?,
        "sv_r" => check_sv_r(&m, &n, r, s_max, h)?,
        "integral" => {
            let grid = log_spaced(10.0, 1e6, 25);
            assoc::check_integral_condition(&m, &n, r, &grid, 1e6, 2_000_000)?.report
        }
        "quasianalytic" => {
            if r < 1.0 || r.fract() != 0.0 {
                anyhow::bail!("quasianalytic requires integer r >= 1");
            }
            is_quasianalytic(&m, r as u32, h)?
        }
        other => anyhow::bail!(
            "unknown condition `{other}` (expected lc|mg|dc|nq|beta1|gamma_r|sv_r|integral|quasianalytic)"
        ),
    };

    if common.json {
        let doc = json!({
            "manifest": manifest.finish(&["check", condition, m_spec]),
            "report": rep.schema_json(),
        });
        sink(common.out.as_deref(), &serde_json::to_string_pretty(&doc)?)?;
    } else {
        sink(common.out.as_deref(), &(report_lines(&rep) + "\n"))?;
    }
    Ok(verdict_code(rep.verdict))
}

fn interpolate(m_spec: &str, r: u32, common: &Common) -> anyhow::Result<ExitCode> {
    let manifest = Manifest::new(common.horizon, None);
    let m = parse_seq(m_spec, common.horizon)?;
    let p = m.interpolate(r)?;
    let h = p.clamp_horizon(common.horizon.min(10_000));

    let mut csv = String::from("l,logP\n");
    for l in 0..=h {
        csv.push_str(&format!("{l},{:.17e}\n", p.log_value(l)?));
    }

    // Identity diagnostics: quotient identity and the partial-sum identity.
    let qp = p.log_quotients(h)?;
    let qm = m.log_quotients(h / r as usize + 2)?;
    let logs = p.logs(h)?;
    let mut worst = 0.0f64;
    for l in 1..=h {
        let k = (l - 1) / r as usize;
        let j = l - r as usize * k;
        if j == 0 {
            continue;
        }
        worst = worst.max((qp[l] - qm[k + 1] / r as f64).abs() / logs[l].abs().max(1.0));
    }
    let k_max = (h / r as usize).clamp(1, 500);
    let (lhs, rhs) = carleman::ramify::nq_partial_sum_identity(&m, r, k_max)?;
    let sidecar = json!({
        "manifest": manifest.finish(&["interpolate", m_spec]),
        "r": r,
        "quotient_identity_rel_err": worst,
        "partial_sum_identity": {"lhs": lhs, "rhs": rhs, "K": k_max},
    });
    output::write_with_sidecar(common.out.as_deref(), "interpolate.csv", &csv, &sidecar)?;
    Ok(ExitCode::from(0))
}

fn assoc_cmd(
    m_spec: &str,
    t_min: f64,
    t_max: f64,
    points: usize,
    common: &Common,
) -> anyhow::Result<ExitCode> {
    let manifest = Manifest::new(common.horizon, None);
    let m = parse_seq(m_spec, common.horizon)?;
    let horizon = 2_000_000usize;
    let mut csv = String::from("t,omega,sigma,integral_check_err\n");
    for t in log_spaced(t_min, t_max, points.max(2)) {
        let eval = assoc::omega(&m, t, horizon)?;
        let (_, _, err) = assoc::integral_identity_check(&m, t, horizon)?;
        csv.push_str(&format!("{t:.9e},{:.17e},{},{err:.3e}\n", eval.omega, eval.sigma));
    }
    let sidecar = json!({
        "manifest": manifest.finish(&["assoc", m_spec]),
        "t_min": t_min, "t_max": t_max, "points": points,
    });
    output::write_with_sidecar(common.out.as_deref(), "assoc.csv", &csv, &sidecar)?;
    Ok(ExitCode::from(0))
}

fn bump_cmd(m_spec: &str, r: u32, k: usize, grid: u32, common: &Common) -> anyhow::Result<ExitCode> {
    let manifest = Manifest::new(common.horizon, Some(grid));
    let m = parse_seq(m_spec, common.horizon)?;
    let seq = m.interpolate(r)?;
    let q = seq.log_quotients(k)?;
    let bump = build_bump(&q[1..=k], grid)?;

    // Derivative ledger against 2^j * T_j.
    let logs = seq.logs(8.min(k))?;
    let mut ledger = Vec::new();
    #[allow(clippy::needless_range_loop)]
    for j in 1..=8.min(k.saturating_sub(2)) {
        let sup = carleman::synth::sup_derivative(&bump.rep, j)?;
        let bound = 2f64.powi(j as i32) * logs[j].exp();
        ledger.push(json!({
            "order": j,
            "measured_sup": sup.value,
            "bound": bound,
            "within": sup.value <= 1.05 * bound,
            "aliased": sup.aliased,
        }));
    }
    let zero = bump.rep.grid.zero_index();
    let sidecar = json!({
        "manifest": manifest.finish(&["bump", m_spec]),
        "widths": bump.plan.widths,
        "truncation": bump.plan.truncation,
        "support_radius": bump.plan.support_radius,
        "value_at_zero": bump.rep.samples()[zero].re,
        "round_trip_error": bump.rep.round_trip_error(),
        "bound_ledger": ledger,
    });
    let csv = write_function_csv(&bump.rep);
    output::write_with_sidecar(common.out.as_deref(), "bump.csv", &csv, &sidecar)?;
    Ok(ExitCode::from(0))
}

fn extend_cmd(
    m_spec: &str,
    n_spec: Option<&str>,
    jet_path: &std::path::Path,
    r: Option<u32>,
    c: u32,
    grid: u32,
    common: &Common,
) -> anyhow::Result<ExitCode> {
    let manifest = Manifest::new(common.horizon, Some(grid));
    let m = parse_seq(m_spec, common.horizon)?;
    let n = match n_spec {
        Some(spec) => parse_seq(spec, common.horizon)?,
        None => m.clone(),
    };
    let text = std::fs::read_to_string(jet_path)
        .with_context(|| format!("reading jet file {}", jet_path.display()))?;
    let jet_json: serde_json::Value = serde_json::from_str(&text)?;
    let jet = JetSpec::from_json(&jet_json)?;
    let r = r.unwrap_or(jet.r);

    let op = ExtensionOperator::build(&m, &n, r, c, jet.order(), grid)?;
    let out = op.apply(&jet)?;

    let sidecar = json!({
        "manifest": manifest.finish(&["extend", m_spec]),
        "parameters": {
            "A": out.params.a_const, "s": out.params.s, "l": out.params.l,
            "d": out.params.d, "c": out.params.c, "h": out.params.h,
            "B": out.params.b_sum, "rescale": out.params.rescale,
        },
        "seminorm_a": out.seminorm_a,
        "jet_errors": out.jet_errors,
        "intermediate_orders": out.intermediate,
        "worst_cross_method_discrepancy": out.worst_discrepancy,
        "bound_ledger": out.bound_ledger.iter().map(|e| json!({
            "j": e.j, "order": e.order, "measured_sup": e.measured_sup,
            "bound": e.bound, "within": e.within, "aliased": e.aliased,
        })).collect::<Vec<_>>(),
        "truncation_report": {
            "tail_exactly_zero": out.truncation.tail_exactly_zero,
            "termwise_factor": out.truncation.termwise_factor,
        },
        "max_outside_support": out.max_outside_support,
    });
    let csv = write_function_csv(&out.f);
    output::write_with_sidecar(common.out.as_deref(), "extend.csv", &csv, &sidecar)?;
    Ok(ExitCode::from(0))
}

fn classify_cmd(
    jet_path: &std::path::Path,
    m_spec: &str,
    h_grid: &str,
    common: &Common,
) -> anyhow::Result<ExitCode> {
    let manifest = Manifest::new(common.horizon, None);
    let m = parse_seq(m_spec, common.horizon)?;
    let text = std::fs::read_to_string(jet_path)?;
    let jet = JetSpec::from_json(&serde_json::from_str(&text)?)?;
    let grid: Vec<f64> = h_grid
        .split(',')
        .map(|s| s.trim().parse::<f64>().context("bad h value"))
        .collect::<anyhow::Result<_>>()?;
    let result = classify(&jet, &m, &grid)?;
    let label = match result {
        Classification::BeurlingConsistent => "beurling_consistent".to_string(),
        Classification::Roumieu { h_star } => format!("roumieu(h*={h_star})"),
        Classification::OutsideAtHorizon => "outside_at_horizon".to_string(),
    };
    if common.json {
        let doc = json!({
            "manifest": manifest.finish(&["jets", "classify", m_spec]),
            "classification": label,
        });
        sink(common.out.as_deref(), &serde_json::to_string_pretty(&doc)?)?;
    } else {
        sink(common.out.as_deref(), &format!("{label}\n"))?;
    }
    Ok(ExitCode::from(0))
}

fn accept_cmd(quick: bool, common: &Common) -> anyhow::Result<ExitCode> {
    let manifest = Manifest::new(common.horizon, None);
    let results = run_acceptance(quick)?;
    let all_pass = results.iter().all(|r| r.passed);
    if common.json {
        let doc = json!({
            "manifest": manifest.finish(&["accept"]),
            "quick": quick,
            "criteria": results.iter().map(|r| json!({
                "id": r.id, "name": r.name, "passed": r.passed,
                "millis": r.millis,
                "details": r.details,
            })).collect::<Vec<_>>(),
            "all_pass": all_pass,
        });
        sink(common.out.as_deref(), &serde_json::to_string_pretty(&doc)?)?;
    } else {
        sink(common.out.as_deref(), &format_table(&results))?;
    }
    Ok(ExitCode::from(if all_pass { 0 } else { 1 }))
}
