use std::error::Error;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use coopcap::gauss_capacity::{gap_report, GapReport};
use coopcap::gauss_model::GaussParams;
use coopcap::ld_achieve::ld_achievable_sum_rate;
use coopcap::ld_capacity::{classify, classify_regime, ld_sum_capacity, ld_u_terms, ld_upperbound_appendix_forms};
use coopcap::ld_schemes::{causality_audit, run_with_messages, Example};
use coopcap::sampling::{db_from_gain, gain_from_db, par_map, sample_channels, sample_channels_where};
use coopcap::special_cases::{
    feedback_bound, feedback_gap, fig2_curve, fig2_limit, primed_mins_agree, reversibility_check, symmetric_report,
};
use coopcap::{LdParams, Levels, Prime, RegimeTag};
use serde_json::{json, Value};

use crate::Common;

type CmdResult = Result<bool, Box<dyn Error>>;

const GAP_LIMIT: f64 = 20.0;
const BRANCH_GAP_LIMIT: f64 = 13.0;
const FEEDBACK_GAP_LIMIT: f64 = 19.0;
const REVERSIBILITY_LIMIT: f64 = 7.0;

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Prints the summary to stdout, or to stderr when stdout carries the data.
fn summary(c: &Common, data_on_stdout: bool, text: String, value: Value) {
    let s = if c.json { serde_json::to_string_pretty(&value).expect("plain JSON") } else { text };
    if data_on_stdout {
        eprintln!("{s}");
    } else {
        println!("{s}");
    }
}

fn max(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn ld_grid(max: u32) -> Vec<LdParams> {
    let mut out = Vec::new();
    for a in 0..=max {
        for b in 0..=max {
            for c in 0..=max {
                for d in 0..=max {
                    for e in 0..=max {
                        out.push(LdParams::new(a, b, c, d, e));
                    }
                }
            }
        }
    }
    out
}

// ------------------------------------------------------------------- LD

#[derive(Args)]
pub struct LdCapacityArgs {
    /// Levels in the order n13 n14 n23 n24 nC.
    #[arg(num_args = 5, value_names = ["N13", "N14", "N23", "N24", "NC"], required = true)]
    levels: Vec<u32>,
    #[arg(long, default_value_t = 3)]
    prime: u32,
}

pub fn ld_capacity(c: &Common, a: &LdCapacityArgs) -> CmdResult {
    let l = &a.levels;
    let p = LdParams::new(l[0], l[1], l[2], l[3], l[4]).with_prime(Prime::new(a.prime)?);
    let bounds = ld_u_terms(&p);
    let capacity = ld_sum_capacity(&p);
    let achievable = ld_achievable_sum_rate(&p)?;
    let regime = classify_regime(&p);
    let (a1, a2, a3) = ld_upperbound_appendix_forms(&p);
    let text = format!(
        "params {p}\nbounds u1..u5 = {} {} {} {} {}\ncapacity {capacity}\nachievable {achievable}\nregime {regime}",
        bounds.u1, bounds.u2, bounds.u3, bounds.u4, bounds.u5
    );
    let value = json!({
        "params": p,
        "bounds": bounds,
        "appendix_forms": [a1, a2, a3],
        "capacity": capacity,
        "achievable": achievable,
        "regime": regime.to_string(),
    });
    summary(c, false, text, value);
    Ok(achievable == capacity)
}

#[derive(Args)]
pub struct LdVerifyArgs {
    /// Largest level on every axis of the grid.
    #[arg(long, default_value_t = 5)]
    max: u32,
}

pub fn ld_verify(c: &Common, a: &LdVerifyArgs) -> CmdResult {
    let cases = ld_grid(a.max);
    let rows = par_map(&cases, |p| {
        let cap = ld_sum_capacity(p);
        let ach = ld_achievable_sum_rate(p).ok();
        let b = ld_u_terms(p);
        let forms_ok = ld_upperbound_appendix_forms(p) == (b.u1, b.u2, b.u3);
        (cap, ach, forms_ok, classify_regime(p))
    });
    if c.out.is_some() {
        let mut w = csv::Writer::from_writer(sink(&c.out)?);
        w.write_record(["n13", "n14", "n23", "n24", "nc", "regime", "capacity", "achievable", "forms_ok"])?;
        for (p, (cap, ach, forms_ok, regime)) in cases.iter().zip(&rows) {
            let mut rec: Vec<String> = p.as_array().iter().map(u32::to_string).collect();
            rec.push(regime.to_string());
            rec.push(cap.to_string());
            rec.push(ach.map_or_else(|| "error".into(), |v| v.to_string()));
            rec.push(forms_ok.to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
    }
    let mismatches = rows.iter().filter(|(cap, ach, _, _)| *ach != Some(*cap)).count();
    let form_mismatches = rows.iter().filter(|r| !r.2).count();
    let text = format!(
        "{} tuples on {{0..{}}}^5: {mismatches} achievable/capacity mismatches, {form_mismatches} bound-form mismatches",
        cases.len(),
        a.max
    );
    let value = json!({ "cases": cases.len(), "mismatches": mismatches, "form_mismatches": form_mismatches });
    summary(c, false, text, value);
    Ok(mismatches == 0 && form_mismatches == 0)
}

#[derive(Args)]
pub struct LdSimArgs {
    /// Example number (1, 2 or 3).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    example: u8,
    /// Number of channel uses T.
    #[arg(long, default_value_t = 64)]
    horizon: usize,
    #[arg(long, default_value_t = 3)]
    prime: u32,
    /// Number of consecutive seeds to run, starting at --seed.
    #[arg(long, default_value_t = 1)]
    runs: u64,
}

pub fn ld_sim(c: &Common, a: &LdSimArgs) -> CmdResult {
    let ex = Example::from_index(a.example)?;
    let p = Prime::new(a.prime)?;
    let cap = ld_sum_capacity(&ex.params(p));
    let seeds: Vec<u64> = (0..a.runs).map(|k| c.seed.wrapping_add(k)).collect();
    let traces = par_map(&seeds, |&s| {
        let m = ex.random_messages(a.horizon, s, p);
        run_with_messages(ex, &m).map(|tr| {
            let causal = causality_audit(&tr, &m).is_ok();
            (tr, causal)
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    if c.out.is_some() {
        let mut w = sink(&c.out)?;
        serde_json::to_writer_pretty(&mut w, &traces.first().map(|t| &t.0))?;
        writeln!(w)?;
        w.flush()?;
    }
    let errors: usize = traces.iter().map(|t| t.0.error_count).sum();
    let min_rate = traces.iter().map(|t| t.0.sum_rate()).fold(f64::INFINITY, f64::min);
    let causal = traces.iter().all(|t| t.1);
    let text = format!(
        "example {} p={} T={} runs={}: {errors} symbol errors, min sum rate {min_rate:.4} (capacity {cap}), causal {causal}",
        a.example, a.prime, a.horizon, a.runs
    );
    let value = json!({
        "example": a.example, "prime": a.prime, "horizon": a.horizon, "runs": a.runs,
        "errors": errors, "min_sum_rate": min_rate, "capacity": cap, "causal": causal,
    });
    summary(c, false, text, value);
    Ok(errors == 0 && causal)
}

// ------------------------------------------------------------- Gaussian

#[derive(Args)]
pub struct GaussReportArgs {
    #[arg(long, default_value_t = 0.0)]
    h13: f64,
    #[arg(long, default_value_t = 0.0)]
    h14: f64,
    #[arg(long, default_value_t = 0.0)]
    h23: f64,
    #[arg(long, default_value_t = 0.0)]
    h24: f64,
    #[arg(long, default_value_t = 0.0)]
    hc: f64,
    /// Phase θ in radians.
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Symmetric channel with direct gain HD, cross gain sqrt(HD) and
    /// cooperation gain HC; overrides the individual gains.
    #[arg(long, num_args = 2, value_names = ["HD", "HC"])]
    symmetric: Option<Vec<f64>>,
}

pub fn gauss_report(c: &Common, a: &GaussReportArgs) -> CmdResult {
    let (params, sym) = match &a.symmetric {
        Some(v) => {
            let (hd, hc) = (v[0], v[1]);
            (GaussParams::new(hd, hd.sqrt(), hd.sqrt(), hd, hc, 0.0)?, Some(symmetric_report(hd, hc)?))
        }
        None => (GaussParams::new(a.h13, a.h14, a.h23, a.h24, a.hc, a.theta)?, None),
    };
    let report = gap_report(&params)?;
    let value = json!({ "report": report, "symmetric": sym });
    let mut w = sink(&c.out)?;
    serde_json::to_writer_pretty(&mut w, &value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(report.gap <= GAP_LIMIT)
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    I,
    Ii,
    Iii,
    Iv,
}

impl RegimeArg {
    fn tag(self) -> RegimeTag {
        match self {
            RegimeArg::I => RegimeTag::I,
            RegimeArg::Ii => RegimeTag::II,
            RegimeArg::Iii => RegimeTag::III,
            RegimeArg::Iv => RegimeTag::IV,
        }
    }
}

#[derive(Args)]
pub struct GaussGapArgs {
    /// Number of channels.
    #[arg(long, default_value_t = 10_000)]
    sweep: usize,
    /// Smallest per-link power |h|^2 in dB.
    #[arg(long, default_value_t = -20.0, allow_negative_numbers = true)]
    db_min: f64,
    /// Largest per-link power |h|^2 in dB.
    #[arg(long, default_value_t = 80.0, allow_negative_numbers = true)]
    db_max: f64,
    /// Keep only channels in this regime.
    #[arg(long, value_enum)]
    regime: Option<RegimeArg>,
}

fn gap_record(r: &GapReport) -> Vec<String> {
    let p = &r.params;
    let b = &r.bounds;
    let mut rec: Vec<String> =
        [p.h13, p.h14, p.h23, p.h24, p.hc].iter().map(|&h| db_from_gain(h).to_string()).collect();
    rec.push(p.theta.to_string());
    rec.extend(b.as_array().iter().map(f64::to_string));
    rec.push(r.upper.to_string());
    rec.push(r.achievable.to_string());
    rec.push(r.regime.to_string());
    rec.push(r.gap.to_string());
    rec.push(r.branch_gap.map_or_else(String::new, |g| g.to_string()));
    rec
}

pub fn gauss_gap(c: &Common, a: &GaussGapArgs) -> CmdResult {
    let channels = match a.regime {
        Some(r) => {
            let tag = r.tag();
            sample_channels_where(a.sweep, c.seed, a.db_min, a.db_max, |p| classify(&p.levels()).tag == tag)?
        }
        None => sample_channels(a.sweep, c.seed, a.db_min, a.db_max)?,
    };
    let reports = par_map(&channels, gap_report).into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut w = csv::Writer::from_writer(sink(&c.out)?);
    w.write_record([
        "h13_db",
        "h14_db",
        "h23_db",
        "h24_db",
        "hc_db",
        "theta",
        "u1",
        "u2",
        "u3",
        "u4",
        "u5",
        "upper",
        "achievable",
        "regime",
        "gap",
        "branch_gap",
    ])?;
    for r in &reports {
        w.write_record(gap_record(r))?;
    }
    w.flush()?;
    drop(w);
    let max_gap = max(reports.iter().map(|r| r.gap));
    let branch: Vec<f64> = reports.iter().filter_map(|r| r.branch_gap).collect();
    let max_branch = max(branch.iter().copied());
    let pass = max_gap <= GAP_LIMIT && branch.iter().all(|&g| g <= BRANCH_GAP_LIMIT);
    let text = format!(
        "{} channels: max gap {max_gap:.4} (limit {GAP_LIMIT}); cooperative-branch gap {} over {} channels (limit {BRANCH_GAP_LIMIT})",
        reports.len(),
        if branch.is_empty() { "n/a".to_string() } else { format!("{max_branch:.4}") },
        branch.len()
    );
    let value = json!({
        "channels": reports.len(), "max_gap": max_gap,
        "branch_channels": branch.len(), "max_branch_gap": if branch.is_empty() { None } else { Some(max_branch) },
        "pass": pass,
    });
    summary(c, c.out.is_none(), text, value);
    Ok(pass)
}

// -------------------------------------------------------- special cases

#[derive(Args)]
pub struct FeedbackArgs {
    /// Grid steps per axis.
    #[arg(long, default_value_t = 30)]
    sweep: usize,
    /// Largest direct power hD^2 in dB.
    #[arg(long, default_value_t = 60.0)]
    hd_db_max: f64,
    /// Largest exponent beta in hI = hD^beta.
    #[arg(long, default_value_t = 1.5)]
    beta_max: f64,
}

pub fn feedback(c: &Common, a: &FeedbackArgs) -> CmdResult {
    if a.sweep == 0 {
        return Err("--sweep must be positive".into());
    }
    let n = a.sweep;
    let mut points = Vec::new();
    for i in 0..=n {
        let db = a.hd_db_max * i as f64 / n as f64;
        for j in 0..=n {
            points.push((db, a.beta_max * j as f64 / n as f64));
        }
    }
    let rows = par_map(&points, |&(db, beta)| {
        let hd = gain_from_db(db);
        let hi = hd.powf(beta);
        feedback_gap(hd, hi).map(|g| (hd, hi, feedback_bound(hd, hi), g))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let mut w = csv::Writer::from_writer(sink(&c.out)?);
    w.write_record(["hd_db", "beta", "hd", "hi", "bound", "achievable", "gap"])?;
    for (&(db, beta), &(hd, hi, bound, gap)) in points.iter().zip(&rows) {
        w.write_record([db, beta, hd, hi, bound, bound - gap, gap].map(|v| v.to_string()))?;
    }
    w.flush()?;
    drop(w);
    let max_gap = max(rows.iter().map(|r| r.3));
    let pass = max_gap <= FEEDBACK_GAP_LIMIT;
    let text = format!("{} points: max gap {max_gap:.4} (limit {FEEDBACK_GAP_LIMIT})", rows.len());
    summary(c, c.out.is_none(), text, json!({ "points": rows.len(), "max_gap": max_gap, "pass": pass }));
    Ok(pass)
}

#[derive(Args)]
pub struct Fig2Args {
    /// Direct power hD^2 in dB.
    #[arg(long = "hD-db", default_value_t = 120.0)]
    hd_db: f64,
    #[arg(long, default_value_t = 0.01)]
    alpha_step: f64,
    #[arg(long, default_value_t = 2.0)]
    alpha_max: f64,
}

pub fn fig2(c: &Common, a: &Fig2Args) -> CmdResult {
    if a.alpha_step.is_nan() || a.alpha_step <= 0.0 || a.alpha_max.is_nan() || a.alpha_max < 0.0 {
        return Err("--alpha-step must be positive and --alpha-max non-negative".into());
    }
    let hd = gain_from_db(a.hd_db);
    let steps = (a.alpha_max / a.alpha_step + 1e-9).floor() as usize;
    let mut w = csv::Writer::from_writer(sink(&c.out)?);
    w.write_record(["alpha", "normalized_C", "analytic_limit"])?;
    let mut worst = 0.0f64;
    for k in 0..=steps {
        let alpha = k as f64 * a.alpha_step;
        let v = fig2_curve(alpha, hd)?;
        let lim = fig2_limit(alpha);
        worst = worst.max((v - lim).abs());
        w.write_record([alpha, v, lim].map(|x| x.to_string()))?;
    }
    w.flush()?;
    drop(w);
    let text = format!("hD = {hd:e}: {} points, max |curve - limit| {worst:.4}", steps + 1);
    summary(c, c.out.is_none(), text, json!({ "hd": hd, "points": steps + 1, "max_deviation": worst }));
    Ok(true)
}

#[derive(Args)]
pub struct ReversibilityArgs {
    /// Largest level on every axis of the exhaustive grid.
    #[arg(long, default_value_t = 6)]
    grid: i64,
    /// Number of random Gaussian channels.
    #[arg(long, default_value_t = 10_000)]
    random: usize,
}

pub fn reversibility(c: &Common, a: &ReversibilityArgs) -> CmdResult {
    if a.grid < 0 {
        return Err("--grid must be non-negative".into());
    }
    let r = 0..=a.grid;
    let mut grid_cells = 0usize;
    let mut grid_bad = 0usize;
    for n13 in r.clone() {
        for n14 in r.clone() {
            for n23 in r.clone() {
                for n24 in r.clone() {
                    for nc in r.clone() {
                        grid_cells += 1;
                        grid_bad += usize::from(!primed_mins_agree(&Levels { n13, n14, n23, n24, nc }));
                    }
                }
            }
        }
    }
    let channels = sample_channels(a.random, c.seed, -20.0, 80.0)?;
    let checks = par_map(&channels, reversibility_check);
    let mut w = csv::Writer::from_writer(sink(&c.out)?);
    w.write_record([
        "h13_db",
        "h14_db",
        "h23_db",
        "h24_db",
        "hc_db",
        "theta",
        "min_u",
        "min_v",
        "min_diff",
        "primed_equal",
    ])?;
    for (p, r) in channels.iter().zip(&checks) {
        let mut rec: Vec<String> =
            [p.h13, p.h14, p.h23, p.h24, p.hc].iter().map(|&h| db_from_gain(h).to_string()).collect();
        rec.push(p.theta.to_string());
        rec.extend([r.min_u, r.min_v, r.min_diff].map(|v| v.to_string()));
        rec.push(r.primed_equal.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    drop(w);
    let max_diff = max(checks.iter().map(|r| r.min_diff)).max(0.0);
    let primed_bad = checks.iter().filter(|r| !r.primed_equal).count();
    let pass = grid_bad == 0 && primed_bad == 0 && max_diff <= REVERSIBILITY_LIMIT;
    let text = format!(
        "{grid_cells} grid cells: {grid_bad} primed mismatches; {} channels: {primed_bad} primed mismatches, max |min u - min v| {max_diff:.4} (limit {REVERSIBILITY_LIMIT})",
        checks.len()
    );
    let value = json!({
        "grid_cells": grid_cells, "grid_mismatches": grid_bad, "channels": checks.len(),
        "channel_mismatches": primed_bad, "max_diff": max_diff, "pass": pass,
    });
    summary(c, c.out.is_none(), text, value);
    Ok(pass)
}
