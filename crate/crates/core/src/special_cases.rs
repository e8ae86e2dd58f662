//! Special channels: noiseless feedback, the symmetric channel with cross
//! gain `sqrt(hD)`, and the destination-cooperation bounds used for the
//! reversibility comparison.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauss_achieve::{
    gauss_achievable_sum_rate, precoding_scheme_with, superposition, superposition_scheme, Allocation, SchemeEval,
};
use crate::gauss_capacity::{gauss_u1, gauss_u2, gauss_u5, gauss_u_terms};
use crate::gauss_model::GaussParams;
use crate::ld_capacity::{self, Level, Levels};

fn sq(x: f64) -> f64 {
    x * x
}

fn mx1(x: f64) -> f64 {
    x.max(1.0)
}

/// Symmetric channel: `|h13| = |h24| = hd`, `|h14| = |h23| = hi`, `θ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricParams {
    pub hd: f64,
    pub hi: f64,
    pub hc: f64,
}

impl SymmetricParams {
    pub fn new(hd: f64, hi: f64, hc: f64) -> Result<Self> {
        GaussParams::new(hd, hi, hi, hd, hc, 0.0)?;
        Ok(SymmetricParams { hd, hi, hc })
    }

    pub fn params(&self) -> GaussParams {
        GaussParams::new(self.hd, self.hi, self.hi, self.hd, self.hc, 0.0).expect("validated on construction")
    }
}

// ---------------------------------------------------------------- feedback

/// The symmetric feedback channel as a cooperation channel whose
/// cooperation gain is the cross gain.
pub fn feedback_to_coop(hd: f64, hi: f64) -> Result<GaussParams> {
    GaussParams::new(hd, hi, hi, hd, hi, 0.0)
}

/// `log2(2(1 + (hD + hI)^2)(1 + max(hD^2, hI^2)/max(1, hI^2)))`.
pub fn feedback_bound(hd: f64, hi: f64) -> f64 {
    (2.0 * (1.0 + sq(hd + hi)) * (1.0 + sq(hd).max(sq(hi)) / mx1(sq(hi)))).log2()
}

/// Feedback bound minus the cooperative achievable sum rate on the mapped
/// channel.
pub fn feedback_gap(hd: f64, hi: f64) -> Result<f64> {
    let p = feedback_to_coop(hd, hi)?;
    Ok(feedback_bound(hd, hi) - gauss_achievable_sum_rate(&p)?.rate)
}

// ------------------------------------------------------- symmetric example

fn check_hd(hd: f64) -> Result<()> {
    if hd.is_finite() && hd > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidGain(format!("hD must be positive, got {hd}")))
    }
}

/// Sum-capacity approximation of the symmetric channel with
/// `hI = sqrt(hD)`.
#[allow(non_snake_case)]
pub fn symmetric_C(hd: f64, hc: f64) -> Result<f64> {
    check_hd(hd)?;
    let a = 2.0 * (2.0 * hd * (1.0 + sq(hc))).log2();
    let b = (2.0 * sq(hd) * (1.0 + sq(hd).max(sq(hc)) / hd)).log2();
    let c = (4.0 * sq(sq(hd))).log2();
    Ok(a.min(b).min(c))
}

/// `symmetric_C(hD, hD^α)` normalized by the direct-link capacity.
pub fn fig2_curve(alpha: f64, hd: f64) -> Result<f64> {
    if hd.is_nan() || hd <= 1.0 {
        return Err(Error::InvalidGain(format!("hD must exceed 1, got {hd}")));
    }
    Ok(symmetric_C(hd, hd.powf(alpha))? / sq(hd).log2())
}

/// Large-`hD` limit of [`fig2_curve`].
pub fn fig2_limit(alpha: f64) -> f64 {
    (1.0 + 2.0 * alpha).min(0.5 + alpha.max(1.0)).min(2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricBounds {
    /// `2 log2((1 + 2hD)(1 + hC^2))`, the symmetric specialization of the
    /// cooperative cut.
    pub u1_sym: f64,
    pub u1: f64,
    pub u2: f64,
    pub u5: f64,
}

impl SymmetricBounds {
    pub fn min_value(&self) -> f64 {
        self.u1_sym.min(self.u1).min(self.u2).min(self.u5)
    }
}

pub fn symmetric_bounds(hd: f64, hc: f64) -> Result<SymmetricBounds> {
    check_hd(hd)?;
    let p = GaussParams::new(hd, hd.sqrt(), hd.sqrt(), hd, hc, 0.0)?;
    Ok(SymmetricBounds {
        u1_sym: 2.0 * ((1.0 + 2.0 * hd) * (1.0 + sq(hc))).log2(),
        u1: gauss_u1(&p),
        u2: gauss_u2(&p),
        u5: gauss_u5(&p),
    })
}

/// Superposition scheme with direct-gain-matched variances, run at
/// cooperation gain `min(hC, sqrt(hD))`.
pub fn symmetric_superposition_scheme(hd: f64, hc: f64) -> Result<Option<SchemeEval>> {
    check_hd(hd)?;
    if hd <= 1.0 {
        return Ok(None);
    }
    let hc_eff = hc.min(hd.sqrt());
    let p = GaussParams::new(hd, hd.sqrt(), hd.sqrt(), hd, hc_eff, 0.0)?;
    let z = 1.0 / hd;
    let u = (1.0 - z).min(if hc_eff > 0.0 { 1.0 / sq(hc_eff) } else { f64::INFINITY });
    let v = (1.0 - z - u).max(0.0);
    let alloc = superposition(v, u, z, z);
    superposition_scheme(&p, &alloc, &format!("symmetric superposition hC'={hc_eff:.6e}")).map(Some)
}

/// Two-sided precoding for `hC > hD` with the cross term of the partner's
/// cooperative-private signal pre-cancelled.
pub fn symmetric_precoding_scheme(hd: f64, hc: f64) -> Result<Option<SchemeEval>> {
    check_hd(hd)?;
    if hd <= 1.0 || hc <= hd {
        return Ok(None);
    }
    let hx = hd.sqrt();
    let p = GaussParams::new(hd, hx, hx, hd, hc, 0.0)?;
    let rest = 1.0 - 1.0 / sq(hd) - 0.5 / hd;
    let mut a = Allocation::default();
    for k in ["1", "2"] {
        a.latent(&format!("V{k}"), rest / 2.0);
        a.latent(&format!("Sa{k}"), rest / (2.0 * (1.0 + 1.0 / hd)));
        a.latent(&format!("Z{k}"), 0.5 / hd);
        a.latent(&format!("Spr{k}"), 1.0 / sq(hd));
    }
    let one = Complex64::new(1.0, 0.0);
    let cross = Complex64::new(-hx / hd, 0.0);
    a.x1("V1", one).x1("Sa1", one).x1("Sa2", cross).x1("Z1", one).x1("Spr1", one);
    a.x2("V2", one).x2("Sa2", one).x2("Sa1", cross).x2("Z2", one).x2("Spr2", one);
    a.aux("S1", &["Sa1"]).aux("S2", &["Sa2"]);
    precoding_scheme_with(&p, &a, "symmetric precoding").map(Some)
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetricReport {
    pub hd: f64,
    pub hc: f64,
    pub c: f64,
    pub bounds: SymmetricBounds,
    pub upper: f64,
    /// Best rate of the regime-generic schemes.
    pub general: f64,
    /// Best rate of the symmetric-specific schemes, if any applies.
    pub tailored: Option<f64>,
    pub achievable: f64,
}

/// Bounds and achievable rates for `hI = sqrt(hD)`.
pub fn symmetric_report(hd: f64, hc: f64) -> Result<SymmetricReport> {
    let c = symmetric_C(hd, hc)?;
    let bounds = symmetric_bounds(hd, hc)?;
    let p = GaussParams::new(hd, hd.sqrt(), hd.sqrt(), hd, hc, 0.0)?;
    let general = gauss_achievable_sum_rate(&p)?.rate;
    let tailored = [symmetric_superposition_scheme(hd, hc)?, symmetric_precoding_scheme(hd, hc)?]
        .into_iter()
        .flatten()
        .map(|s| s.rate())
        .reduce(f64::max);
    Ok(SymmetricReport {
        hd,
        hc,
        c,
        bounds,
        upper: bounds.min_value(),
        general,
        tailored,
        achievable: tailored.map_or(general, |t| t.max(general)),
    })
}

// ---------------------------------------------------- destination cooperation

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DestCoopBounds {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub v4: f64,
    pub v5: f64,
    pub v1p: f64,
    pub v2p: f64,
    pub v3p: f64,
}

impl DestCoopBounds {
    pub fn as_array(&self) -> [f64; 5] {
        [self.v1, self.v2, self.v3, self.v4, self.v5]
    }

    pub fn min_value(&self) -> f64 {
        self.as_array().into_iter().fold(f64::INFINITY, f64::min)
    }
}

/// One destination's half of the cooperative cut: `(own, cross, other)` are
/// `(h13, h14, h23)` for destination 3.
fn v1_half(own: f64, cross: f64, other: f64, hc: f64) -> f64 {
    if other > mx1(hc) {
        (1.0 + sq(cross + hc + own * hc / other) + sq(own / other)).log2()
    } else {
        (1.0 + sq(cross + hc + own)).log2()
    }
}

/// Level approximations `v'1, v'2, v'3`.
pub fn dest_coop_primed<L: Level>(l: &Levels<L>) -> [L; 3] {
    let v1 = (l.n13 - l.n23 + l.nc).max2(l.n14).max2(l.nc) + (l.n24 - l.n14 + l.nc).max2(l.n23).max2(l.nc);
    let v2 = l.n24.max2(l.n14) + (l.n13.max2(l.n14).max2(l.nc) - l.n14);
    let v3 = l.n13.max2(l.n23) + (l.n24.max2(l.n23).max2(l.nc) - l.n23);
    [v1, v2, v3]
}

pub fn dest_coop_bounds(p: &GaussParams) -> DestCoopBounds {
    let (h13, h14, h23, h24, hc) = (p.h13, p.h14, p.h23, p.h24, p.hc);
    let [v1p, v2p, v3p] = dest_coop_primed(&p.levels());
    DestCoopBounds {
        v1: v1_half(h13, h14, h23, hc) + v1_half(h24, h23, h14, hc),
        v2: (1.0 + sq(h13 + h14 + hc)).log2() + (1.0 + sq(h24) / mx1(sq(h14))).log2(),
        v3: (1.0 + sq(h24 + h23 + hc)).log2() + (1.0 + sq(h13) / mx1(sq(h23))).log2(),
        v4: (1.0 + sq(h13 + hc)).log2() + (1.0 + sq(h24 + hc)).log2(),
        v5: gauss_u5(p),
        v1p,
        v2p,
        v3p,
    }
}

/// Whether `min(u'1, u'2, u'3) == min(v'1, v'2, v'3)` on integer levels.
pub fn primed_mins_agree(l: &Levels<i64>) -> bool {
    let u = ld_capacity::u1(l).min(ld_capacity::u2(l)).min(ld_capacity::u3(l));
    let v = dest_coop_primed(l).into_iter().min().expect("three terms");
    u == v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reversibility {
    pub primed_equal: bool,
    pub min_u: f64,
    pub min_v: f64,
    pub min_diff: f64,
}

pub fn reversibility_check(p: &GaussParams) -> Reversibility {
    let min_u = gauss_u_terms(p).min_value();
    let min_v = dest_coop_bounds(p).min_value();
    Reversibility {
        primed_equal: primed_mins_agree(&p.integer_levels()),
        min_u,
        min_v,
        min_diff: (min_u - min_v).abs(),
    }
}
