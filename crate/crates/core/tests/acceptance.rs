//! Acceptance suite: one line per criterion.
//!
//! Failing criteria are reported but only change the exit status when
//! `COOPCAP_STRICT=1` is set.

mod common;

use std::time::{Duration, Instant};

use common::{random_model, random_point, random_split, random_system};
use coopcap::gauss_capacity::{gap_report, gauss_u2, GapReport};
use coopcap::gauss_model::gaussian_cmi;
use coopcap::ld_achieve::{instantiate_ld_constraints, ld_achievable_sum_rate};
use coopcap::ld_capacity::{ld_sum_capacity, ld_u_terms, ld_upperbound_appendix_forms, Levels};
use coopcap::ld_schemes::{causality_audit, run_with_messages, Example};
use coopcap::rate_region::{fourier_motzkin_eliminate, max_sum_rate, max_sum_rate_fme, projection_contains_bruteforce};
use coopcap::sampling::{par_map, sample_channels};
use coopcap::special_cases::{
    feedback_bound, feedback_gap, feedback_to_coop, fig2_curve, fig2_limit, primed_mins_agree, reversibility_check,
    symmetric_report,
};
use coopcap::{LdParams, Prime};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SWEEP: usize = 10_000;
const SWEEP_SEED: u64 = 1;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn grid(max: u32) -> Vec<LdParams> {
    let r = 0..=max;
    let mut out = Vec::new();
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    for e in r.clone() {
                        out.push(LdParams::new(a, b, c, d, e));
                    }
                }
            }
        }
    }
    out
}

fn ld_capacity_equivalence() -> Outcome {
    let cases = grid(5);
    let start = Instant::now();
    let bad: Vec<&LdParams> = cases
        .iter()
        .zip(par_map(&cases, |p| ld_achievable_sum_rate(p).ok() == Some(ld_sum_capacity(p))))
        .filter(|(_, ok)| !ok)
        .map(|(p, _)| p)
        .collect();
    let t = start.elapsed();
    outcome(
        bad.is_empty() && t < Duration::from_secs(60),
        format!("{} tuples, {} mismatches, exact; {:.1?} (limit 60s)", cases.len(), bad.len(), t),
    )
}

fn example_regression() -> Outcome {
    let p = Prime::default();
    let got = [
        ld_sum_capacity(&Example::One.params(p)),
        ld_sum_capacity(&Example::Two.params(p)),
        ld_sum_capacity(&Example::Three.params(p)),
        ld_sum_capacity(&Example::Three.params(p).with_nc(0)),
    ];
    outcome(got == [6, 7, 6, 5], format!("got {got:?}, want [6, 7, 6, 5], exact"))
}

fn scheme_simulation() -> Outcome {
    const T: usize = 64;
    let start = Instant::now();
    let mut runs = 0;
    let mut errors = 0;
    let mut worst = f64::INFINITY;
    let mut causal = true;
    for (ex, primes) in [(Example::One, [2, 3, 5]), (Example::Two, [2, 3, 5]), (Example::Three, [3, 5, 7])] {
        for q in primes {
            let p = Prime::new(q).expect("prime");
            let cap = ld_sum_capacity(&ex.params(p)) as f64;
            let seeds: Vec<u64> = (0..100).collect();
            let res = par_map(&seeds, |&s| {
                let m = ex.random_messages(T, s, p);
                let tr = run_with_messages(ex, &m).expect("valid example");
                (tr.error_count, tr.sum_rate() / cap, causality_audit(&tr, &m).is_ok())
            });
            for (e, ratio, ok) in res {
                runs += 1;
                errors += e;
                worst = worst.min(ratio);
                causal &= ok;
            }
        }
    }
    let floor = 1.0 - 4.0 / T as f64;
    let t = start.elapsed();
    outcome(
        errors == 0 && worst >= floor && causal && t < Duration::from_secs(10),
        format!("{runs} runs, {errors} symbol errors, min rate/capacity {worst:.4} (need >= {floor:.4}); {t:.1?} (limit 10s)"),
    )
}

fn gaussian_gap(reports: &[GapReport], elapsed: Duration) -> Outcome {
    let max_gap = reports.iter().map(|r| r.gap).fold(f64::NEG_INFINITY, f64::max);
    let branch: Vec<f64> = reports.iter().filter_map(|r| r.branch_gap).collect();
    let max_branch = branch.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    outcome(
        max_gap <= 20.0 && max_branch <= 13.0 && elapsed < Duration::from_secs(120),
        format!(
            "{} channels, max gap {max_gap:.3} (limit 20), cooperative-branch gap {max_branch:.3} over {} channels (limit 13); {elapsed:.1?} (limit 120s)",
            reports.len(),
            branch.len()
        ),
    )
}

fn primed_sandwich(reports: &[GapReport]) -> Outcome {
    const TOL: f64 = 1e-9;
    let mut worst_low = f64::INFINITY;
    let mut worst_high = f64::NEG_INFINITY;
    let mut worst5 = 0.0f64;
    for r in reports {
        let b = &r.bounds;
        for (u, up) in b.as_array().iter().zip(b.primed()).take(4) {
            worst_low = worst_low.min(up - (u - 7.0));
            worst_high = worst_high.max(up - u);
        }
        worst5 = worst5.max((b.u5 - b.u5p).abs());
    }
    outcome(
        worst_low >= -TOL && worst_high <= TOL && worst5 <= 2.0 + TOL,
        format!(
            "min u'k-(uk-7) {worst_low:.3}, max u'k-uk {worst_high:.2e}, max |u5-u'5| {worst5:.3} (limit 2); tol {TOL:e}"
        ),
    )
}

fn symmetric_example() -> Outcome {
    let mut worst_upper = f64::NEG_INFINITY;
    let mut worst_ach = f64::NEG_INFINITY;
    for hd in [1e3f64, 1e4, 1e5, 1e6] {
        for i in 0..=8 {
            let alpha = 0.25 * i as f64;
            let r = symmetric_report(hd, hd.powf(alpha)).expect("valid symmetric channel");
            worst_upper = worst_upper.max(r.upper - r.c);
            worst_ach = worst_ach.max(r.c - r.achievable);
        }
    }
    let mut off = Vec::new();
    let mut worst_fig = 0.0f64;
    for i in 0..=8 {
        let alpha = 0.25 * i as f64;
        let d = (fig2_curve(alpha, 1e6).expect("hD > 1") - fig2_limit(alpha)).abs();
        worst_fig = worst_fig.max(d);
        if d > 0.05 {
            off.push(format!("{alpha}:{d:.4}"));
        }
    }
    outcome(
        worst_upper <= 0.5 && worst_ach <= 6.5 && off.is_empty(),
        format!(
            "max upper-C {worst_upper:.3} (limit 0.5), max C-achievable {worst_ach:.3} (limit 6.5), max |curve-limit| at hD=1e6 {worst_fig:.4} (limit 0.05){}",
            if off.is_empty() { String::new() } else { format!(", outside at alpha {}", off.join(" ")) }
        ),
    )
}

fn feedback() -> Outcome {
    // hD^2 from 0 to 60 dB, hI = hD^beta.
    let mut points = Vec::new();
    for i in 0..=60 {
        let hd = 10f64.powf(0.05 * i as f64);
        for j in 0..=30 {
            points.push((hd, hd.powf(0.05 * j as f64)));
        }
    }
    let gaps = par_map(&points, |&(hd, hi)| feedback_gap(hd, hi).expect("valid gains"));
    let max_gap = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_dev = points
        .iter()
        .map(|&(hd, hi)| (feedback_bound(hd, hi) - gauss_u2(&feedback_to_coop(hd, hi).expect("valid"))).abs())
        .fold(0.0, f64::max);
    outcome(
        max_gap <= 19.0 && max_dev <= 1e-9,
        format!("{} points, max gap {max_gap:.3} (limit 19), max |bound-u2| {max_dev:.1e} (tol 1e-9)", points.len()),
    )
}

fn reversibility(channels: &[coopcap::gauss_model::GaussParams]) -> Outcome {
    let cells: Vec<Levels<i64>> = grid(6)
        .iter()
        .map(|p| {
            let [n13, n14, n23, n24, nc] = p.as_array().map(i64::from);
            Levels { n13, n14, n23, n24, nc }
        })
        .collect();
    let grid_bad = cells.iter().filter(|l| !primed_mins_agree(l)).count();
    let checks = par_map(channels, reversibility_check);
    let max_diff = checks.iter().map(|r| r.min_diff).fold(0.0, f64::max);
    outcome(
        grid_bad == 0 && max_diff <= 7.0,
        format!(
            "{} grid cells, {grid_bad} primed mismatches (exact); {} channels, max |min u - min v| {max_diff:.3} (limit 7)",
            cells.len(),
            checks.len()
        ),
    )
}

fn engine_properties() -> Outcome {
    let mut proj_bad = 0;
    for seed in 0..200u64 {
        let sys = random_system(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in sys.vars().to_vec() {
            let proj = fourier_motzkin_eliminate(&sys, v.as_str()).expect("known variable");
            for _ in 0..20 {
                let x = random_point(&mut rng, sys.num_vars() - 1);
                if proj.is_feasible(&x) != projection_contains_bruteforce(&sys, v.as_str(), &x).expect("sizes match") {
                    proj_bad += 1;
                }
            }
        }
    }

    let cases = grid(5);
    let lp_bad: usize = par_map(&cases, |p| {
        let inst = instantiate_ld_constraints(p).expect("valid parameters");
        std::iter::once(&inst.system)
            .chain(inst.fallback.as_ref())
            .filter(|s| max_sum_rate(s).into_optimum().ok() != max_sum_rate_fme(s).ok())
            .count()
    })
    .into_iter()
    .sum();

    const TOL: f64 = 1e-9;
    let mut cmi_bad = 0;
    let mut triples = 0;
    for seed in 0..1000u64 {
        let (m, names) = random_model(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c] =
            std::iter::repeat_with(|| random_split(&mut rng, &names)).flatten().next().expect("two or more names");
        triples += 1;
        let ab = gaussian_cmi(&m, &a, &b, &c).expect("known names");
        let ba = gaussian_cmi(&m, &b, &a, &c).expect("known names");
        let bc: Vec<String> = b.iter().chain(&c).cloned().collect();
        let whole = gaussian_cmi(&m, &a, &bc, &[] as &[&str]).expect("known names");
        let first = if c.is_empty() { 0.0 } else { gaussian_cmi(&m, &a, &c, &[] as &[&str]).expect("known names") };
        if ab < -TOL || (ab - ba).abs() > TOL || (whole - first - ab).abs() > TOL * whole.abs().max(1.0) {
            cmi_bad += 1;
        }
    }
    outcome(
        proj_bad == 0 && lp_bad == 0 && cmi_bad == 0,
        format!(
            "200 systems: {proj_bad} projection mismatches; {} LD instantiations: {lp_bad} LP/FME mismatches (exact); {triples} models: {cmi_bad} CMI violations (tol {TOL:e})",
            cases.len()
        ),
    )
}

fn upperbound_forms() -> Outcome {
    let cases = grid(5);
    let bad = cases
        .iter()
        .filter(|p| {
            let b = ld_u_terms(p);
            ld_upperbound_appendix_forms(p) != (b.u1, b.u2, b.u3)
        })
        .count();
    outcome(bad == 0, format!("{} tuples, {bad} mismatches, exact", cases.len()))
}

fn main() {
    let channels = sample_channels(SWEEP, SWEEP_SEED, -20.0, 80.0).expect("valid range");
    let start = Instant::now();
    let reports = par_map(&channels, |p| gap_report(p).expect("valid channel"));
    let sweep_time = start.elapsed();

    let criteria: Vec<Criterion> = vec![
        ("LD capacity equivalence", Box::new(ld_capacity_equivalence)),
        ("example capacities", Box::new(example_regression)),
        ("scheme simulation", Box::new(scheme_simulation)),
        ("Gaussian constant gap", Box::new(|| gaussian_gap(&reports, sweep_time))),
        ("primed-bound sandwich", Box::new(|| primed_sandwich(&reports))),
        ("symmetric example", Box::new(symmetric_example)),
        ("feedback", Box::new(feedback)),
        ("reversibility", Box::new(|| reversibility(&channels))),
        ("engine properties", Box::new(engine_properties)),
        ("upper-bound forms", Box::new(upperbound_forms)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.pass);
        println!("[{}] {:>2}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 && std::env::var("COOPCAP_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
