//! Upper bounds for the Gaussian channel, their level approximations, and
//! the gap between the bound and the best achievable scheme.

use serde::Serialize;

use crate::error::Result;
use crate::gauss_achieve::{gauss_achievable_sum_rate, GaussAchievable, SchemeKind};
use crate::gauss_model::GaussParams;
use crate::ld_capacity::{self, classify, condition14, Regime, RegimeTag};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussBounds {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub u4: f64,
    pub u5: f64,
    pub u1p: f64,
    pub u2p: f64,
    pub u3p: f64,
    pub u4p: f64,
    pub u5p: f64,
    /// `max(n13 + n24, n14 + n23)` on real levels.
    pub u5pp: f64,
}

impl GaussBounds {
    pub fn as_array(&self) -> [f64; 5] {
        [self.u1, self.u2, self.u3, self.u4, self.u5]
    }

    pub fn primed(&self) -> [f64; 5] {
        [self.u1p, self.u2p, self.u3p, self.u4p, self.u5p]
    }

    pub fn min_value(&self) -> f64 {
        self.as_array().into_iter().fold(f64::INFINITY, f64::min)
    }
}

fn sq(x: f64) -> f64 {
    x * x
}

fn mx1(x: f64) -> f64 {
    x.max(1.0)
}

pub fn gauss_u1(p: &GaussParams) -> f64 {
    let c = 1.0 + sq(p.hc);
    ((1.0 + sq(p.h13 / mx1(p.h14) + p.h23 / mx1(p.hc))) * c).log2()
        + ((1.0 + sq(p.h24 / mx1(p.h23) + p.h14 / mx1(p.hc))) * c).log2()
}

pub fn gauss_u2(p: &GaussParams) -> f64 {
    let m = sq(p.h24).max(sq(p.h23)).max(sq(p.hc));
    (2.0 * (1.0 + sq(p.h13 + p.h23)) * (1.0 + m / mx1(sq(p.h23)))).log2()
}

pub fn gauss_u3(p: &GaussParams) -> f64 {
    gauss_u2(&p.swapped())
}

pub fn gauss_u4(p: &GaussParams) -> f64 {
    (1.0 + sq(p.h13) + sq(p.hc)).log2() + (1.0 + sq(p.h24) + sq(p.hc)).log2()
}

/// `log2(1 + a·S + b·(|h13 h24|^2 + |h14 h23|^2 - 2|h13 h24 h14 h23| cos θ))`
/// where `S` is the total squared gain.
fn u5_form(p: &GaussParams, a: f64, b: f64) -> f64 {
    let s = sq(p.h13) + sq(p.h24) + sq(p.h14) + sq(p.h23);
    let d = sq(p.h13 * p.h24) + sq(p.h14 * p.h23) - 2.0 * p.h13 * p.h24 * p.h14 * p.h23 * p.theta.cos();
    (1.0 + a * s + b * d.max(0.0)).log2()
}

pub fn gauss_u5(p: &GaussParams) -> f64 {
    u5_form(p, 2.0, 4.0)
}

pub fn gauss_u5_prime(p: &GaussParams) -> f64 {
    u5_form(p, 1.0, 1.0)
}

pub fn gauss_u_terms(p: &GaussParams) -> GaussBounds {
    let l = p.levels();
    GaussBounds {
        u1: gauss_u1(p),
        u2: gauss_u2(p),
        u3: gauss_u3(p),
        u4: gauss_u4(p),
        u5: gauss_u5(p),
        u1p: ld_capacity::u1(&l),
        u2p: ld_capacity::u2(&l),
        u3p: ld_capacity::u3(&l),
        u4p: ld_capacity::u4(&l),
        u5p: gauss_u5_prime(p),
        u5pp: (l.n13 + l.n24).max(l.n14 + l.n23),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub params: GaussParams,
    pub bounds: GaussBounds,
    pub upper: f64,
    pub achievable: f64,
    pub gap: f64,
    pub regime: Regime,
    /// Upper bound minus the best cooperative regime-I scheme, reported for
    /// regime-I channels where cooperation beats the non-cooperative
    /// optimum on integer levels.
    pub branch_gap: Option<f64>,
    pub scheme: GaussAchievable,
}

pub fn gap_report(p: &GaussParams) -> Result<GapReport> {
    let bounds = gauss_u_terms(p);
    let scheme = gauss_achievable_sum_rate(p)?;
    let upper = bounds.min_value();
    let regime = classify(&p.levels());
    let branch_gap = (regime.tag == RegimeTag::I && condition14(&p.integer_levels())).then(|| {
        let coop =
            scheme.schemes.iter().filter(|s| s.kind == SchemeKind::Cooperative).map(|s| s.rate()).fold(0.0, f64::max);
        upper - coop
    });
    Ok(GapReport {
        params: *p,
        bounds,
        upper,
        achievable: scheme.rate,
        gap: upper - scheme.rate,
        regime,
        branch_gap,
        scheme,
    })
}
