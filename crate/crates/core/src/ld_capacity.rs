//! Sum-capacity of the linear deterministic channel, regime classification
//! and the effective cooperation level used in regime III.
//!
//! The level formulas are generic over [`Level`] so the same code evaluates
//! integer exponents and the real-valued levels of a Gaussian channel.

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ld_model::LdParams;

pub trait Level: Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> + fmt::Debug {
    const ZERO: Self;

    fn max2(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min2(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn pos(self) -> Self {
        self.max2(Self::ZERO)
    }
}

impl Level for i64 {
    const ZERO: i64 = 0;
}

impl Level for f64 {
    const ZERO: f64 = 0.0;
}

/// Level exponents `(n13, n14, n23, n24, nc)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Levels<L> {
    pub n13: L,
    pub n14: L,
    pub n23: L,
    pub n24: L,
    pub nc: L,
}

impl<L: Level> Levels<L> {
    pub fn swapped(&self) -> Self {
        Levels { n13: self.n24, n14: self.n23, n23: self.n14, n24: self.n13, nc: self.nc }
    }

    pub fn with_nc(mut self, nc: L) -> Self {
        self.nc = nc;
        self
    }

    pub fn nmin(&self) -> L {
        self.n13.min2(self.n14).min2(self.n23).min2(self.n24)
    }
}

impl From<&LdParams> for Levels<i64> {
    fn from(p: &LdParams) -> Self {
        Levels { n13: p.n13 as i64, n14: p.n14 as i64, n23: p.n23 as i64, n24: p.n24 as i64, nc: p.nc as i64 }
    }
}

fn max3<L: Level>(a: L, b: L, c: L) -> L {
    a.max2(b).max2(c)
}

pub fn u1<L: Level>(l: &Levels<L>) -> L {
    max3(l.n13 - l.n14 + l.nc, l.n23, l.nc) + max3(l.n24 - l.n23 + l.nc, l.n14, l.nc)
}

pub fn u2<L: Level>(l: &Levels<L>) -> L {
    l.n13.max2(l.n23) + max3(l.n24, l.n23, l.nc) - l.n23
}

pub fn u3<L: Level>(l: &Levels<L>) -> L {
    l.n24.max2(l.n14) + max3(l.n13, l.n14, l.nc) - l.n14
}

pub fn u4<L: Level>(l: &Levels<L>) -> L {
    l.n13.max2(l.nc) + l.n24.max2(l.nc)
}

pub fn u5<L: Level>(l: &Levels<L>) -> L {
    if l.n13 - l.n23 != l.n14 - l.n24 {
        (l.n13 + l.n24).max2(l.n14 + l.n23)
    } else {
        l.n13.max2(l.n24).max2(l.n14).max2(l.n23)
    }
}

pub fn u_terms<L: Level>(l: &Levels<L>) -> [L; 5] {
    [u1(l), u2(l), u3(l), u4(l), u5(l)]
}

/// `u1` evaluated at cooperation level `nc`.
pub fn u1_at<L: Level>(l: &Levels<L>, nc: L) -> L {
    u1(&l.with_nc(nc))
}

/// `min(u2(nc), u3(nc), u4(nc), u5)`: the target the cooperative bound is
/// compared against.
pub fn non_cooperative_min<L: Level>(l: &Levels<L>) -> L {
    u2(l).min2(u3(l)).min2(u4(l)).min2(u5(l))
}

/// `u1(0) < min(u2(0), u3(0), u4(0), u5)`: cooperation can raise the sum
/// rate above the no-cooperation optimum.
pub fn condition14<L: Level>(l: &Levels<L>) -> bool {
    let l0 = l.with_nc(L::ZERO);
    u1(&l0) < non_cooperative_min(&l0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LdBounds {
    pub u1: i64,
    pub u2: i64,
    pub u3: i64,
    pub u4: i64,
    pub u5: i64,
    pub min_value: i64,
    /// 1-based indices of the active bounds.
    pub argmin: Vec<usize>,
}

impl LdBounds {
    pub fn as_array(&self) -> [i64; 5] {
        [self.u1, self.u2, self.u3, self.u4, self.u5]
    }
}

pub fn ld_u_terms(params: &LdParams) -> LdBounds {
    let u = u_terms(&Levels::from(params));
    let min_value = *u.iter().min().expect("five terms");
    let argmin = (0..5).filter(|&k| u[k] == min_value).map(|k| k + 1).collect();
    LdBounds { u1: u[0], u2: u[1], u3: u[2], u4: u[3], u5: u[4], min_value, argmin }
}

pub fn ld_sum_capacity(params: &LdParams) -> i64 {
    ld_u_terms(params).min_value
}

/// Direct evaluations of the first three upper bounds before simplification.
pub fn ld_upperbound_appendix_forms(params: &LdParams) -> (i64, i64, i64) {
    let l = Levels::from(params);
    let a1 = max3(l.n13 - l.n14, l.n23 - l.nc, 0) + l.nc + max3(l.n24 - l.n23, l.n14 - l.nc, 0) + l.nc;
    let a2 = max3(l.n24, l.n23, l.nc) + (l.n13 - l.n23).pos();
    let a3 = max3(l.n13, l.n14, l.nc) + (l.n24 - l.n14).pos();
    (a1, a2, a3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeTag {
    I,
    II,
    III,
    IV,
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeTag::I => "I",
            RegimeTag::II => "II",
            RegimeTag::III => "III",
            RegimeTag::IV => "IV",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Regime {
    pub tag: RegimeTag,
    /// Set in regime III when users were relabeled so that `n13 <= nc <= n24`.
    pub swap_applied: bool,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.swap_applied {
            write!(f, "{}*", self.tag)
        } else {
            write!(f, "{}", self.tag)
        }
    }
}

pub fn classify<L: Level>(l: &Levels<L>) -> Regime {
    let lo = l.n13.min2(l.n24);
    let hi = l.n13.max2(l.n24);
    let (tag, swap_applied) = if l.nc <= l.nmin() {
        (RegimeTag::I, false)
    } else if l.nc <= lo {
        (RegimeTag::II, false)
    } else if l.nc <= hi {
        (RegimeTag::III, l.n24 < l.n13)
    } else {
        (RegimeTag::IV, false)
    };
    Regime { tag, swap_applied }
}

pub fn classify_regime(params: &LdParams) -> Regime {
    classify(&Levels::from(params))
}

/// Levels in the orientation used by the regime III construction.
pub fn oriented<L: Level>(l: &Levels<L>, regime: Regime) -> Levels<L> {
    if regime.swap_applied {
        l.swapped()
    } else {
        *l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NPrimeC {
    pub value: i64,
    /// Whether `u1(value)` equals the target exactly.
    pub exact: bool,
}

/// Effective cooperation level for regime III on already oriented levels
/// (`n13 <= nc <= n24`).
pub fn n_prime_c_oriented(l: &Levels<i64>) -> NPrimeC {
    let target = non_cooperative_min(l);
    if u1_at(l, 0) >= target {
        return NPrimeC { value: 0, exact: false };
    }
    let cap = l.nc.min(l.n23);
    let value = (0..=cap).rev().find(|&n| u1_at(l, n) <= target).unwrap_or(0);
    NPrimeC { value, exact: u1_at(l, value) == target }
}

pub fn select_n_prime_c(params: &LdParams) -> Result<NPrimeC> {
    let regime = classify_regime(params);
    if regime.tag != RegimeTag::III {
        return Err(Error::WrongRegime { expected: "III", got: regime.tag.to_string() });
    }
    Ok(n_prime_c_oriented(&oriented(&Levels::from(params), regime)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(a: [u32; 5]) -> LdParams {
        LdParams::from_array(a)
    }

    #[test]
    fn example_terms() {
        let b = ld_u_terms(&lp([4, 2, 2, 4, 1]));
        assert_eq!(b.as_array(), [6, 6, 6, 8, 8]);
        assert_eq!(b.min_value, 6);
        assert_eq!(b.argmin, vec![1, 2, 3]);
        assert_eq!(ld_sum_capacity(&lp([6, 3, 3, 4, 1])), 7);
        assert_eq!(ld_sum_capacity(&lp([4, 3, 3, 4, 5])), 6);
        assert_eq!(ld_sum_capacity(&lp([4, 3, 3, 4, 0])), 5);
        assert_eq!(ld_u_terms(&lp([0; 5])).as_array(), [0; 5]);
    }

    #[test]
    fn appendix_forms() {
        assert_eq!(ld_upperbound_appendix_forms(&lp([4, 2, 2, 4, 1])).0, 6);
        assert_eq!(ld_upperbound_appendix_forms(&lp([0; 5])), (0, 0, 0));
    }

    #[test]
    fn regimes() {
        let tag = |a| classify_regime(&lp(a));
        assert_eq!(tag([4, 2, 2, 4, 1]).tag, RegimeTag::I);
        assert_eq!(tag([4, 2, 2, 4, 3]).tag, RegimeTag::II);
        assert_eq!(tag([3, 2, 2, 6, 4]), Regime { tag: RegimeTag::III, swap_applied: false });
        assert_eq!(tag([4, 3, 3, 4, 5]).tag, RegimeTag::IV);
        assert_eq!(tag([6, 2, 2, 3, 4]), Regime { tag: RegimeTag::III, swap_applied: true });
    }

    #[test]
    fn n_prime_selection() {
        assert_eq!(select_n_prime_c(&lp([3, 2, 2, 6, 4])).unwrap(), NPrimeC { value: 1, exact: true });
        assert_eq!(select_n_prime_c(&lp([2, 3, 3, 6, 4])).unwrap().value, 0);
        assert!(select_n_prime_c(&lp([4, 2, 2, 4, 1])).is_err());
    }

    #[test]
    fn real_levels_agree_with_integers() {
        let l = Levels { n13: 4.0, n14: 2.0, n23: 2.0, n24: 4.0, nc: 1.0 };
        assert_eq!(u_terms(&l), [6.0, 6.0, 6.0, 8.0, 8.0]);
        assert_eq!(classify(&l).tag, RegimeTag::I);
    }
}
