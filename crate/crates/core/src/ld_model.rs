//! Finite-field vectors and the shift-matrix channel of the linear
//! deterministic source-cooperation model.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl Default for Prime {
    fn default() -> Self {
        Prime(3)
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

/// An element of GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    p: u32,
}

impl FieldElement {
    pub fn new(value: u32, p: Prime) -> Self {
        FieldElement { value: value % p.0, p: p.0 }
    }

    pub fn zero(p: Prime) -> Self {
        FieldElement { value: 0, p: p.0 }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let (mut base, mut exp, mut acc) = (self.value as u64, self.p as u64 - 2, 1u64);
        let m = self.p as u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        Some(FieldElement { value: acc as u32, p: self.p })
    }

    fn check(self, other: Self) {
        debug_assert_eq!(self.p, other.p, "mixing GF({}) and GF({})", self.p, other.p);
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        FieldElement { value: ((self.value as u64 + rhs.value as u64) % self.p as u64) as u32, p: self.p }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        FieldElement { value: (self.p - self.value) % self.p, p: self.p }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        FieldElement { value: ((self.value as u64 * rhs.value as u64) % self.p as u64) as u32, p: self.p }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A column vector over GF(p); index 0 here is level 1, the top level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LdVector {
    p: Prime,
    levels: Vec<u32>,
}

impl LdVector {
    pub fn zeros(n: usize, p: Prime) -> Self {
        LdVector { p, levels: vec![0; n] }
    }

    pub fn from_values(values: &[u32], p: Prime) -> Result<Self> {
        if let Some(&v) = values.iter().find(|&&v| v >= p.0) {
            return Err(Error::ElementOutOfRange { value: v, p: p.0 });
        }
        Ok(LdVector { p, levels: values.to_vec() })
    }

    pub fn from_elements(elements: &[FieldElement], p: Prime) -> Result<Self> {
        let mut levels = Vec::with_capacity(elements.len());
        for e in elements {
            if e.p != p.0 {
                return Err(Error::FieldMismatch(e.p, p.0));
            }
            levels.push(e.value);
        }
        Ok(LdVector { p, levels })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Element at 1-based level `i`.
    pub fn level(&self, i: usize) -> FieldElement {
        FieldElement { value: self.levels[i - 1], p: self.p.0 }
    }

    pub fn set_level(&mut self, i: usize, e: FieldElement) {
        debug_assert_eq!(e.p, self.p.0);
        self.levels[i - 1] = e.value;
    }

    pub fn values(&self) -> &[u32] {
        &self.levels
    }

    pub fn entries(&self) -> Vec<FieldElement> {
        self.levels.iter().map(|&v| FieldElement { value: v, p: self.p.0 }).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &LdVector) -> Result<LdVector> {
        if self.p != other.p {
            return Err(Error::FieldMismatch(self.p.0, other.p.0));
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: other.len() });
        }
        let p = self.p.0;
        let levels = self.levels.iter().zip(&other.levels).map(|(a, b)| (a + b) % p).collect();
        Ok(LdVector { p: self.p, levels })
    }
}

/// Applies the down-shift `S^m`: level `i` of the output is level `i - m` of
/// the input, and the top `m` levels are zero.
pub fn shift_apply(x: &LdVector, m: usize) -> Result<LdVector> {
    let n = x.len();
    if m > n {
        return Err(Error::ShiftTooLarge { shift: m, len: n });
    }
    let mut levels = vec![0; n];
    levels[m..].copy_from_slice(&x.levels[..n - m]);
    Ok(LdVector { p: x.p, levels })
}

/// Level counts of the linear deterministic channel; `nc` is the common
/// exponent of both source-to-source links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LdParams {
    pub n13: u32,
    pub n14: u32,
    pub n23: u32,
    pub n24: u32,
    pub nc: u32,
    #[serde(default)]
    pub p: Prime,
}

impl LdParams {
    pub fn new(n13: u32, n14: u32, n23: u32, n24: u32, nc: u32) -> Self {
        LdParams { n13, n14, n23, n24, nc, p: Prime::default() }
    }

    pub fn try_from_signed(exps: [i64; 5], p: u32) -> Result<Self> {
        let mut out = [0u32; 5];
        for (o, &e) in out.iter_mut().zip(&exps) {
            *o = u32::try_from(e).map_err(|_| Error::NegativeExponent(e))?;
        }
        Ok(LdParams::from_array(out).with_prime(Prime::new(p)?))
    }

    pub fn from_array(a: [u32; 5]) -> Self {
        LdParams::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn as_array(&self) -> [u32; 5] {
        [self.n13, self.n14, self.n23, self.n24, self.nc]
    }

    pub fn with_prime(mut self, p: Prime) -> Self {
        self.p = p;
        self
    }

    pub fn with_nc(mut self, nc: u32) -> Self {
        self.nc = nc;
        self
    }

    /// Ambient vector length.
    pub fn n(&self) -> usize {
        self.as_array().into_iter().max().unwrap_or(0) as usize
    }

    /// Relabels users 1 and 2 together with destinations 3 and 4.
    pub fn swapped(&self) -> Self {
        LdParams { n13: self.n24, n14: self.n23, n23: self.n14, n24: self.n13, nc: self.nc, p: self.p }
    }
}

impl fmt::Display for LdParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.n13, self.n14, self.n23, self.n24, self.nc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelOutputs {
    pub y1: LdVector,
    pub y2: LdVector,
    pub y3: LdVector,
    pub y4: LdVector,
}

/// One channel use of the deterministic model.
pub fn ld_channel_step(x1: &LdVector, x2: &LdVector, params: &LdParams) -> Result<ChannelOutputs> {
    let n = params.n();
    for x in [x1, x2] {
        if x.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: x.len() });
        }
        if x.p != params.p {
            return Err(Error::FieldMismatch(x.p.0, params.p.0));
        }
    }
    let down = |x: &LdVector, k: u32| shift_apply(x, n - k as usize);
    Ok(ChannelOutputs {
        y1: down(x2, params.nc)?,
        y2: down(x1, params.nc)?,
        y3: down(x1, params.n13)?.add(&down(x2, params.n23)?)?,
        y4: down(x2, params.n24)?.add(&down(x1, params.n14)?)?,
    })
}
