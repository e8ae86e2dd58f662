//! Achievable sum rates for the Gaussian channel.
//!
//! Each scheme is a set of independent Gaussian latents, two transmit
//! signals built from them, and a list of rate inequalities whose right
//! sides are conditional mutual informations. The rates are evaluated two
//! ways: exactly through [`gaussian_cmi`], and through closed-form lower
//! bounds where those exist. Power is normalized by scaling all latent
//! variances so the stronger transmitter meets the unit constraint.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauss_model::{gaussian_cmi, GaussParams, LinearGaussianModel, NLevels};
use crate::ld_capacity::{self, classify, n_prime_c_oriented, NPrimeC, Regime, RegimeTag};
use crate::rate_region::{max_sum_rate, ConstraintSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SchemeKind {
    /// Cooperative-public and public messages with decode-and-forward of
    /// the partner's cooperative-public part.
    Cooperative,
    /// Public and private messages only.
    NoCooperation,
    /// One-sided cooperative-private precoding (regime III).
    OneSidedPrecoding,
    /// Two-sided cooperative-private precoding (regime IV).
    Precoding,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchemeEval {
    pub kind: SchemeKind,
    pub label: String,
    /// Cooperation gain the allocation was designed for.
    pub hc_design: f64,
    /// Power normalization applied to the unit-scale variances.
    pub k: f64,
    pub mi_rate: f64,
    pub closed_rate: Option<f64>,
    #[serde(serialize_with = "ser_system")]
    pub system: ConstraintSystem<f64>,
}

impl SchemeEval {
    pub fn rate(&self) -> f64 {
        self.closed_rate.map_or(self.mi_rate, |c| c.max(self.mi_rate))
    }
}

fn ser_system<S: serde::Serializer>(sys: &ConstraintSystem<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    sys.to_json().serialize(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussAchievable {
    pub regime: Regime,
    pub rate: f64,
    pub best: usize,
    pub n_prime_c: Option<NPrimeC>,
    pub schemes: Vec<SchemeEval>,
}

impl GaussAchievable {
    pub fn best_scheme(&self) -> &SchemeEval {
        &self.schemes[self.best]
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn sq(x: f64) -> f64 {
    x * x
}

fn mx1(x: f64) -> f64 {
    x.max(1.0)
}

/// Swaps user indices in a name: 1↔2 and 3↔4.
fn mirror(name: &str) -> String {
    name.chars()
        .map(|ch| match ch {
            '1' => '2',
            '2' => '1',
            '3' => '4',
            '4' => '3',
            o => o,
        })
        .collect()
}

/// Latents with unit-scale variances and the two transmit signals.
#[derive(Debug, Clone, Default)]
pub(crate) struct Allocation {
    latents: Vec<(String, f64)>,
    x1: Vec<(String, Complex64)>,
    x2: Vec<(String, Complex64)>,
    aux: BTreeMap<String, Vec<String>>,
}

impl Allocation {
    pub(crate) fn latent(&mut self, name: &str, var: f64) -> &mut Self {
        self.latents.push((name.to_string(), var));
        self
    }

    pub(crate) fn x1(&mut self, name: &str, coef: Complex64) -> &mut Self {
        self.x1.push((name.to_string(), coef));
        self
    }

    pub(crate) fn x2(&mut self, name: &str, coef: Complex64) -> &mut Self {
        self.x2.push((name.to_string(), coef));
        self
    }

    pub(crate) fn aux(&mut self, name: &str, latents: &[&str]) -> &mut Self {
        self.aux.insert(name.to_string(), latents.iter().map(|s| s.to_string()).collect());
        self
    }

    fn power(&self, x: &[(String, Complex64)]) -> f64 {
        x.iter().map(|(n, c)| c.norm_sqr() * self.latents.iter().find(|(m, _)| m == n).map_or(0.0, |(_, v)| *v)).sum()
    }

    /// Scales variances to unit peak power and adds the four outputs.
    fn build(&self, p: &GaussParams) -> Result<(LinearGaussianModel, f64)> {
        let k = self.power(&self.x1).max(self.power(&self.x2));
        let k = if k > 0.0 { k } else { 1.0 };
        let mut m = LinearGaussianModel::new();
        for (n, v) in &self.latents {
            m.add_latent(n, v / k)?;
        }
        let scaled = |x: &[(String, Complex64)], g: Complex64| -> Vec<(String, Complex64)> {
            x.iter().map(|(n, c)| (n.clone(), *c * g)).collect()
        };
        let add = |m: &mut LinearGaussianModel, name: &str, terms: Vec<(String, Complex64)>| -> Result<()> {
            let t: Vec<(&str, Complex64)> = terms.iter().map(|(n, c)| (n.as_str(), *c)).collect();
            m.add_observed(name, &t, 1.0)
        };
        add(&mut m, "Y1", scaled(&self.x2, p.gc()))?;
        add(&mut m, "Y2", scaled(&self.x1, p.gc()))?;
        add(&mut m, "Y3", [scaled(&self.x1, p.g13()), scaled(&self.x2, p.g23())].concat())?;
        add(&mut m, "Y4", [scaled(&self.x2, p.g24()), scaled(&self.x1, p.g14())].concat())?;
        Ok((m, k))
    }

    fn resolve(&self, names: &[String]) -> Vec<String> {
        let mut out = Vec::new();
        for n in names {
            if n == "X1" || n == "X2" {
                let x = if n == "X1" { &self.x1 } else { &self.x2 };
                out.extend(x.iter().map(|(l, _)| l.clone()));
            } else if let Some(v) = self.aux.get(n) {
                out.extend(v.iter().cloned());
            } else {
                out.push(n.clone());
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// `Σ rates <= I(a; out | given)`.
#[derive(Debug, Clone)]
struct MiRow {
    rates: Vec<String>,
    a: Vec<String>,
    given: Vec<String>,
    out: String,
}

fn row(rates: &[&str], a: &[&str], given: &[&str], out: &str) -> MiRow {
    let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
    MiRow { rates: own(rates), a: own(a), given: own(given), out: out.to_string() }
}

impl MiRow {
    fn mirrored(&self) -> MiRow {
        let m = |v: &[String]| v.iter().map(|s| mirror(s)).collect();
        MiRow { rates: m(&self.rates), a: m(&self.a), given: m(&self.given), out: mirror(&self.out) }
    }
}

fn with_mirror(rows: Vec<MiRow>) -> Vec<MiRow> {
    let mirrored: Vec<MiRow> = rows.iter().map(MiRow::mirrored).collect();
    rows.into_iter().chain(mirrored).collect()
}

struct Evaluated {
    mi_rate: f64,
    closed_rate: Option<f64>,
    system: ConstraintSystem<f64>,
    k: f64,
}

fn solve_rows(vars: &[&str], rows: &[MiRow], rhs: &[f64]) -> Result<(f64, ConstraintSystem<f64>)> {
    let mut sys = ConstraintSystem::new(vars)?;
    for (r, &b) in rows.iter().zip(rhs) {
        let names: Vec<&str> = r.rates.iter().map(String::as_str).collect();
        sys.add_bound(&names, b)?;
    }
    let (r1, r2): (Vec<&str>, Vec<&str>) = vars.iter().partition(|v| v.ends_with('1'));
    sys.set_groups(&r1, &r2)?;
    let opt = max_sum_rate(&sys).into_optimum()?;
    Ok((opt, sys))
}

fn evaluate(
    p: &GaussParams,
    alloc: &Allocation,
    vars: &[&str],
    rows: &[MiRow],
    closed: Option<&dyn Fn(f64) -> Vec<f64>>,
) -> Result<Evaluated> {
    let (model, k) = alloc.build(p)?;
    let rhs = rows
        .iter()
        .map(|r| gaussian_cmi(&model, &alloc.resolve(&r.a), &[r.out.as_str()], &alloc.resolve(&r.given)))
        .collect::<Result<Vec<f64>>>()?;
    let (mi_rate, system) = solve_rows(vars, rows, &rhs)?;
    let closed_rate = match closed {
        Some(f) => {
            let rhs = f(k);
            debug_assert_eq!(rhs.len(), rows.len());
            Some(solve_rows(vars, rows, &rhs)?.0)
        }
        None => None,
    };
    Ok(Evaluated { mi_rate, closed_rate, system, k })
}

const COOP_VARS: [&str; 6] = ["rV1", "rV2", "rU1", "rU2", "rZ1", "rZ2"];
const ONE_SIDED_VARS: [&str; 6] = ["rV1", "rV2", "rU2", "rZ1", "rZ2", "rS1"];
const PRECODED_VARS: [&str; 6] = ["rV1", "rV2", "rS1", "rS2", "rZ1", "rZ2"];

fn cooperative_rows() -> Vec<MiRow> {
    with_mirror(vec![
        row(&["rV1"], &["V1"], &[], "Y2"),
        row(&["rZ1"], &["X1"], &["V1", "V2", "U1", "U2"], "Y3"),
        row(&["rU1", "rZ1"], &["U1", "X1"], &["V1", "V2", "U2"], "Y3"),
        row(&["rU2", "rZ1"], &["U2", "X1"], &["V1", "V2", "U1"], "Y3"),
        row(&["rU1", "rU2", "rZ1"], &["U1", "U2", "X1"], &["V1", "V2"], "Y3"),
        row(&["rV1", "rV2", "rU1", "rU2", "rZ1"], &["V1", "V2", "U1", "U2", "X1"], &[], "Y3"),
    ])
}

/// Superposition allocation `X_k = V_k + U_k + Z_k` with the given
/// unit-scale variances `(v, u, z1, z2)`.
pub(crate) fn superposition(v: f64, u: f64, z1: f64, z2: f64) -> Allocation {
    let mut a = Allocation::default();
    a.latent("V1", v).latent("V2", v).latent("U1", u).latent("U2", u).latent("Z1", z1).latent("Z2", z2);
    a.x1("V1", c(1.0)).x1("U1", c(1.0)).x1("Z1", c(1.0));
    a.x2("V2", c(1.0)).x2("U2", c(1.0)).x2("Z2", c(1.0));
    a
}

/// Printed closed forms of the cooperative scheme for user 1; user 2 is the
/// same expression on the relabeled channel.
fn cooperative_closed_user1(p: &GaussParams, k: f64) -> Vec<f64> {
    let (h13, h14, h23, hc) = (p.h13, p.h14, p.h23, p.hc);
    let z = sq(h13) / (mx1(sq(h14)) * k);
    let u1 = sq(h13) / (mx1(sq(hc)) * k);
    let u2 = sq(h23) / (mx1(sq(hc)) * k);
    let d = 1.0 / k + 1.0;
    vec![
        (1.0 + (sq(hc) / k) / (2.0 / k + 1.0)).log2(),
        (1.0 + z / d).log2(),
        (1.0 + (u1 + z) / d).log2(),
        (1.0 + (z + u2) / d).log2(),
        (1.0 + (u1 + z + u2) / d).log2(),
        (1.0 + (sq(h13) / k + u1 + z + sq(h23) / k + u2) / d).log2(),
    ]
}

fn cooperative_closed(p: &GaussParams, k: f64) -> Vec<f64> {
    [cooperative_closed_user1(p, k), cooperative_closed_user1(&p.swapped(), k)].concat()
}

/// Cooperative scheme designed for (and run on) a cooperation gain
/// `hc_eff <= hc`; a source can always degrade what it hears.
pub fn cooperative_scheme(p: &GaussParams, hc_eff: f64) -> Result<SchemeEval> {
    let q = p.with_hc(hc_eff.min(p.hc));
    let alloc = superposition(1.0, 1.0 / mx1(sq(q.hc)), 1.0 / mx1(sq(q.h14)), 1.0 / mx1(sq(q.h23)));
    let rows = cooperative_rows();
    let closed = |k: f64| cooperative_closed(&q, k);
    let e = evaluate(&q, &alloc, &COOP_VARS, &rows, Some(&closed))?;
    Ok(SchemeEval {
        kind: SchemeKind::Cooperative,
        label: format!("cooperative hC'={:.6e}", q.hc),
        hc_design: q.hc,
        k: e.k,
        mi_rate: e.mi_rate,
        closed_rate: e.closed_rate,
        system: e.system,
    })
}

/// Public/private splitting without cooperation: the cooperative-public
/// layer is constant.
pub fn no_cooperation_scheme(p: &GaussParams) -> Result<SchemeEval> {
    let alloc = superposition(0.0, 1.0, 1.0 / mx1(sq(p.h14)), 1.0 / mx1(sq(p.h23)));
    let e = evaluate(p, &alloc, &COOP_VARS, &cooperative_rows(), None)?;
    Ok(SchemeEval {
        kind: SchemeKind::NoCooperation,
        label: "no cooperation".into(),
        hc_design: 0.0,
        k: e.k,
        mi_rate: e.mi_rate,
        closed_rate: None,
        system: e.system,
    })
}

/// Evaluates an arbitrary superposition allocation with the cooperative
/// rate inequalities.
pub(crate) fn superposition_scheme(p: &GaussParams, alloc: &Allocation, label: &str) -> Result<SchemeEval> {
    let e = evaluate(p, alloc, &COOP_VARS, &cooperative_rows(), None)?;
    Ok(SchemeEval {
        kind: SchemeKind::Cooperative,
        label: label.into(),
        hc_design: p.hc,
        k: e.k,
        mi_rate: e.mi_rate,
        closed_rate: None,
        system: e.system,
    })
}

/// Cross-link cancellation coefficient of the regime III/IV precoding:
/// `X2` carries `-(h14 e^{jθ/2}/h24) S̃13` when `h24 >= h14`, else `X1`
/// carries `-(h24/(h14 e^{jθ/2})) S̃23`.
fn precode_user1(p: &GaussParams, a: &mut Allocation) -> &'static str {
    if p.h24 >= p.h14 {
        let r = if p.h24 > 0.0 { p.g14() / p.h24 } else { c(0.0) };
        a.latent("St13", 1.0);
        a.x1("St13", c(1.0)).x2("St13", -r);
        "St13"
    } else {
        let r = p.h24 / p.g14();
        a.latent("St23", 1.0);
        a.x1("St23", -r).x2("St23", c(1.0));
        "St23"
    }
}

/// Squared gain of the precoded common latent at destination 3.
fn precoded_gain13(p: &GaussParams) -> f64 {
    if p.h24 >= p.h14 {
        let r = if p.h24 > 0.0 { p.g14() / p.h24 } else { c(0.0) };
        (p.g13() - r * p.g23()).norm_sqr()
    } else {
        (p.g23() - p.g13() * (p.h24 / p.g14())).norm_sqr()
    }
}

/// One-sided precoding on channels oriented so that `n13 <= nC <= n24`.
pub fn one_sided_scheme(p: &GaussParams, hc_prime: f64) -> Result<SchemeEval> {
    let mut a = Allocation::default();
    a.latent("V1", 1.0).latent("V2", 1.0).latent("U1", 0.0);
    a.latent("U2", 1.0 / mx1(sq(hc_prime)));
    a.latent("Z1", 1.0 / mx1(sq(p.h14))).latent("Z2", 1.0 / mx1(sq(p.h23)));
    a.latent("Sp1", 1.0 / mx1(sq(p.h13)).max(sq(p.h14)));
    a.latent("Sperp23", 1.0 / mx1(sq(p.h24)));
    let st = precode_user1(p, &mut a);
    a.x1("V1", c(1.0)).x1("Z1", c(1.0)).x1("Sp1", c(1.0));
    a.x2("V2", c(1.0)).x2("U2", c(1.0)).x2("Z2", c(1.0)).x2("Sperp23", c(1.0));
    a.aux("S1", &[st, "Sperp23"]);

    let rows = vec![
        row(&["rS1"], &["X1"], &["S1", "Z1", "V1"], "Y2"),
        row(&["rZ1", "rS1"], &["Z1", "X1"], &["S1", "V1"], "Y2"),
        row(&["rV1", "rZ1", "rS1"], &["V1", "Z1", "X1"], &["S1"], "Y2"),
        row(&["rV2"], &["V2"], &["S1"], "Y1"),
        row(&["rZ1"], &["Z1"], &["V1", "V2", "U2", "S1"], "Y3"),
        row(&["rU2", "rZ1"], &["U2", "Z1"], &["V1", "V2", "S1"], "Y3"),
        row(&["rS1", "rZ1"], &["S1", "Z1"], &["V1", "V2", "U2"], "Y3"),
        row(&["rU2", "rS1", "rZ1"], &["U2", "S1", "Z1"], &["V1", "V2"], "Y3"),
        row(&["rV1", "rV2", "rU2", "rS1", "rZ1"], &["V1", "V2", "U2", "S1", "Z1"], &[], "Y3"),
        row(&["rZ2"], &["Z2"], &["V1", "V2", "U2"], "Y4"),
        row(&["rU2", "rZ2"], &["U2", "Z2"], &["V1", "V2"], "Y4"),
        row(&["rV1", "rV2", "rU2", "rZ2"], &["V1", "V2", "U2", "Z2"], &[], "Y4"),
    ];
    let closed = |k: f64| {
        let (h13, h14, h23, h24, hc) = (p.h13, p.h14, p.h23, p.h24, p.hc);
        let m1 = mx1(sq(h13)).max(sq(h14));
        let s = sq(hc) / (m1 * k);
        let z_c = sq(hc) / (mx1(sq(h14)) * k);
        let z = sq(h13) / (mx1(sq(h14)) * k);
        let u = sq(h23) / (mx1(sq(hc_prime)) * k);
        let st = precoded_gain13(p) / k;
        let perp = sq(h23) / (mx1(sq(h24)) * k);
        let d3 = 2.0 / k + 1.0;
        let z2 = sq(h24) / (mx1(sq(h23)) * k);
        let u24 = sq(h24) / (mx1(sq(hc_prime)) * k);
        let d4 = 3.0 / k + 1.0;
        let lg = |x: f64| (1.0 + x).log2();
        vec![
            lg(s),
            lg(s + z_c),
            lg(sq(hc) / k + s + z_c),
            lg((sq(hc) / k) / (sq(hc) / (mx1(sq(hc_prime)) * k) + sq(hc) / (mx1(sq(h23)) * k) + 1.0)),
            lg(z / d3),
            lg((z + u) / d3),
            lg((z + st + perp) / d3),
            lg((z + st + perp + u) / d3),
            lg((sq(h13) / k + z + st + sq(h23) / k + perp + u) / d3),
            lg(z2 / d4),
            lg((u24 + z2) / d4),
            lg((sq(h24) / k + u24 + z2 + sq(h14) / k) / d4),
        ]
    };
    let e = evaluate(p, &a, &ONE_SIDED_VARS, &rows, Some(&closed))?;
    Ok(SchemeEval {
        kind: SchemeKind::OneSidedPrecoding,
        label: format!("one-sided precoding hC'={hc_prime:.6e}"),
        hc_design: hc_prime,
        k: e.k,
        mi_rate: e.mi_rate,
        closed_rate: e.closed_rate,
        system: e.system,
    })
}

fn precoding_rows() -> Vec<MiRow> {
    with_mirror(vec![
        row(&["rS1"], &["X1"], &["S1", "S2", "Z1", "V1"], "Y2"),
        row(&["rZ1", "rS1"], &["Z1", "X1"], &["S1", "S2", "V1"], "Y2"),
        row(&["rV1", "rZ1", "rS1"], &["V1", "Z1", "X1"], &["S1", "S2"], "Y2"),
        row(&["rZ1"], &["Z1"], &["V1", "V2", "S1"], "Y3"),
        row(&["rS1", "rZ1"], &["S1", "Z1"], &["V1", "V2"], "Y3"),
        row(&["rV1", "rV2", "rS1", "rZ1"], &["V1", "V2", "S1", "Z1"], &[], "Y3"),
    ])
}

fn precoded_closed_user1(p: &GaussParams, k: f64) -> Vec<f64> {
    let (h13, h14, h23, h24, hc) = (p.h13, p.h14, p.h23, p.h24, p.hc);
    let m1 = mx1(sq(h13)).max(sq(h14));
    let s = sq(hc) / (m1 * k);
    let z_c = sq(hc) / (mx1(sq(h14)) * k);
    let z = sq(h13) / (mx1(sq(h14)) * k);
    let st = precoded_gain13(p) / k;
    let perp = sq(h23) / (mx1(sq(h24)) * k);
    let d = 4.0 / k + 1.0;
    let lg = |x: f64| (1.0 + x).log2();
    vec![
        lg(s),
        lg(s + z_c),
        lg(sq(hc) / k + s + z_c),
        lg(z / d),
        lg((z + st + perp) / d),
        lg((sq(h13) / k + z + sq(h23) / k + st + perp) / d),
    ]
}

/// Two-sided precoding for `nC > max(n13, n24)`.
pub fn precoded_scheme(p: &GaussParams) -> Result<SchemeEval> {
    let mut a = Allocation::default();
    a.latent("V1", 1.0).latent("V2", 1.0);
    a.latent("Z1", 1.0 / mx1(sq(p.h14))).latent("Z2", 1.0 / mx1(sq(p.h23)));
    a.latent("Sp1", 1.0 / mx1(sq(p.h13)).max(sq(p.h14)));
    a.latent("Sp2", 1.0 / mx1(sq(p.h24)).max(sq(p.h23)));
    a.latent("Sperp23", 1.0 / mx1(sq(p.h24))).latent("Sperp14", 1.0 / mx1(sq(p.h13)));
    let st1 = precode_user1(p, &mut a);
    // User 2's precoding is user 1's on the relabeled channel.
    let q = p.swapped();
    let st2 = if q.h24 >= q.h14 {
        let r = if q.h24 > 0.0 { q.g14() / q.h24 } else { c(0.0) };
        a.latent("St24", 1.0);
        a.x2("St24", c(1.0)).x1("St24", -r);
        "St24"
    } else {
        let r = q.h24 / q.g14();
        a.latent("St14", 1.0);
        a.x2("St14", -r).x1("St14", c(1.0));
        "St14"
    };
    a.x1("V1", c(1.0)).x1("Z1", c(1.0)).x1("Sp1", c(1.0)).x1("Sperp14", c(1.0));
    a.x2("V2", c(1.0)).x2("Z2", c(1.0)).x2("Sp2", c(1.0)).x2("Sperp23", c(1.0));
    a.aux("S1", &[st1, "Sperp23"]).aux("S2", &[st2, "Sperp14"]);

    let rows = precoding_rows();
    let closed = |k: f64| [precoded_closed_user1(p, k), precoded_closed_user1(&q, k)].concat();
    let e = evaluate(p, &a, &PRECODED_VARS, &rows, Some(&closed))?;
    Ok(SchemeEval {
        kind: SchemeKind::Precoding,
        label: "two-sided precoding".into(),
        hc_design: p.hc,
        k: e.k,
        mi_rate: e.mi_rate,
        closed_rate: e.closed_rate,
        system: e.system,
    })
}

/// Evaluates a cooperative-private allocation with the two-sided precoding
/// inequalities. `X1`, `X2` and the aux sets `S1`, `S2` come from `alloc`.
pub(crate) fn precoding_scheme_with(p: &GaussParams, alloc: &Allocation, label: &str) -> Result<SchemeEval> {
    let rows = precoding_rows();
    let e = evaluate(p, alloc, &PRECODED_VARS, &rows, None)?;
    Ok(SchemeEval {
        kind: SchemeKind::Precoding,
        label: label.into(),
        hc_design: p.hc,
        k: e.k,
        mi_rate: e.mi_rate,
        closed_rate: None,
        system: e.system,
    })
}

/// Solves `f(n) = target` for non-decreasing continuous `f` on `[0, hi]`;
/// returns the largest `n` with `f(n) <= target`.
fn bisect_level(f: impl Fn(f64) -> f64, target: f64, hi: f64) -> f64 {
    if f(hi) <= target {
        return hi;
    }
    if f(0.0) > target {
        return 0.0;
    }
    let (mut lo, mut up) = (0.0, hi);
    for _ in 0..80 {
        let mid = 0.5 * (lo + up);
        if f(mid) <= target {
            lo = mid;
        } else {
            up = mid;
        }
    }
    lo
}

fn gain_of_level(n: f64) -> f64 {
    2f64.powf(n / 2.0)
}

/// Cooperation level at which the cooperative bound meets the others, on
/// real levels: the regime-I target uses `u''5` in place of `u5`.
fn regime1_level(l: &NLevels) -> f64 {
    let u5pp = (l.n13 + l.n24).max(l.n14 + l.n23);
    let target = ld_capacity::u2(l).min(ld_capacity::u3(l)).min(ld_capacity::u4(l)).min(u5pp);
    bisect_level(|n| ld_capacity::u1_at(l, n), target, l.nc)
}

fn push_unique(v: &mut Vec<f64>, x: f64) {
    if !v.iter().any(|y| (y - x).abs() <= 1e-12 * x.abs().max(1.0)) {
        v.push(x);
    }
}

/// Best achievable sum rate over the schemes of the channel's regime.
pub fn gauss_achievable_sum_rate(p: &GaussParams) -> Result<GaussAchievable> {
    let l = p.levels();
    let regime = classify(&l);
    let mut schemes = Vec::new();
    let mut n_prime_c = None;
    match regime.tag {
        RegimeTag::I | RegimeTag::II => {
            let mut designs = Vec::new();
            let cap = if regime.tag == RegimeTag::I { l.nc } else { l.nmin() };
            push_unique(&mut designs, gain_of_level(cap).min(p.hc));
            push_unique(&mut designs, gain_of_level(regime1_level(&l.with_nc(cap))).min(p.hc));
            for hc in designs {
                schemes.push(cooperative_scheme(p, hc)?);
            }
            schemes.push(no_cooperation_scheme(p)?);
        }
        RegimeTag::III => {
            let q = if regime.swap_applied { p.swapped() } else { *p };
            let npc = n_prime_c_oriented(&q.integer_levels());
            n_prime_c = Some(npc);
            let ql = q.levels();
            let mut designs = Vec::new();
            push_unique(&mut designs, gain_of_level(npc.value as f64));
            let target = ld_capacity::non_cooperative_min(&ql);
            if ld_capacity::u1_at(&ql, 0.0) < target {
                let hi = ql.nc.min(ql.n23);
                push_unique(&mut designs, gain_of_level(bisect_level(|n| ld_capacity::u1_at(&ql, n), target, hi)));
            }
            for hcp in designs {
                schemes.push(one_sided_scheme(&q, hcp)?);
            }
        }
        RegimeTag::IV => schemes.push(precoded_scheme(p)?),
    }
    let (best, rate) = schemes.iter().enumerate().map(|(i, s)| (i, s.rate())).fold((0, f64::NEG_INFINITY), |acc, x| {
        if x.1 > acc.1 {
            x
        } else {
            acc
        }
    });
    if !rate.is_finite() {
        return Err(Error::Infeasible);
    }
    Ok(GaussAchievable { regime, rate: rate.max(0.0), best, n_prime_c, schemes })
}
