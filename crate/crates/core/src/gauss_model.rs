//! Gaussian channel parameters and a conditional mutual information engine
//! for jointly Gaussian variables built from independent latents.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;
use std::sync::{Mutex, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ld_capacity::Levels;

/// Real-valued levels `[log2 |h|^2]_+` of a Gaussian channel.
pub type NLevels = Levels<f64>;

const RECIPROCITY_TOL: f64 = 1e-12;
const PSEUDO_DET_REL: f64 = 1e-12;

/// Normalized channel: magnitudes plus the aggregate phase.
///
/// The direct links and the cooperation link are real, the cross links
/// carry `e^{jθ/2}` each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussParams {
    pub h13: f64,
    pub h14: f64,
    pub h23: f64,
    pub h24: f64,
    pub hc: f64,
    pub theta: f64,
}

impl GaussParams {
    pub fn new(h13: f64, h14: f64, h23: f64, h24: f64, hc: f64, theta: f64) -> Result<Self> {
        for (name, v) in [("h13", h13), ("h14", h14), ("h23", h23), ("h24", h24), ("hC", hc)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidGain(format!("{name} = {v}")));
            }
        }
        if !theta.is_finite() {
            return Err(Error::InvalidGain(format!("theta = {theta}")));
        }
        Ok(GaussParams { h13, h14, h23, h24, hc, theta: wrap_phase(theta) })
    }

    pub fn zero() -> Self {
        GaussParams { h13: 0.0, h14: 0.0, h23: 0.0, h24: 0.0, hc: 0.0, theta: 0.0 }
    }

    /// Builds a channel whose squared magnitudes are `2^n` for the given
    /// level exponents.
    pub fn from_levels(l: &NLevels, theta: f64) -> Result<Self> {
        let h = |n: f64| 2f64.powf(n / 2.0);
        GaussParams::new(h(l.n13), h(l.n14), h(l.n23), h(l.n24), h(l.nc), theta)
    }

    /// Relabels users 1 and 2 (and destinations 3 and 4).
    pub fn swapped(&self) -> Self {
        GaussParams { h13: self.h24, h14: self.h23, h23: self.h14, h24: self.h13, hc: self.hc, theta: self.theta }
    }

    pub fn with_hc(mut self, hc: f64) -> Self {
        self.hc = hc;
        self
    }

    pub fn levels(&self) -> NLevels {
        let n = |h: f64| if h > 1.0 { (h * h).log2() } else { 0.0 };
        Levels { n13: n(self.h13), n14: n(self.h14), n23: n(self.h23), n24: n(self.h24), nc: n(self.hc) }
    }

    /// Levels rounded down to integers.
    pub fn integer_levels(&self) -> Levels<i64> {
        let l = self.levels();
        let f = |v: f64| v.floor() as i64;
        Levels { n13: f(l.n13), n14: f(l.n14), n23: f(l.n23), n24: f(l.n24), nc: f(l.nc) }
    }

    pub fn g13(&self) -> Complex64 {
        Complex64::new(self.h13, 0.0)
    }

    pub fn g24(&self) -> Complex64 {
        Complex64::new(self.h24, 0.0)
    }

    pub fn g14(&self) -> Complex64 {
        Complex64::from_polar(self.h14, self.theta / 2.0)
    }

    pub fn g23(&self) -> Complex64 {
        Complex64::from_polar(self.h23, self.theta / 2.0)
    }

    pub fn gc(&self) -> Complex64 {
        Complex64::new(self.hc, 0.0)
    }
}

/// Unnormalized complex coefficients of the six links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawChannel {
    pub h12: Complex64,
    pub h21: Complex64,
    pub h13: Complex64,
    pub h14: Complex64,
    pub h23: Complex64,
    pub h24: Complex64,
}

pub fn normalize_channel(raw: &RawChannel) -> Result<GaussParams> {
    let all = [raw.h12, raw.h21, raw.h13, raw.h14, raw.h23, raw.h24];
    if all.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidGain("non-finite coefficient".into()));
    }
    let (a, b) = (raw.h12.norm(), raw.h21.norm());
    if (a - b).abs() > RECIPROCITY_TOL * a.max(b).max(1.0) {
        return Err(Error::AsymmetricCooperation { h12: a, h21: b });
    }
    let theta = raw.h14.arg() + raw.h23.arg() - raw.h13.arg() - raw.h24.arg();
    GaussParams::new(raw.h13.norm(), raw.h14.norm(), raw.h23.norm(), raw.h24.norm(), a, theta)
}

/// An observed variable: a complex-linear combination of latents plus its
/// own independent noise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observed {
    pub name: String,
    pub coeffs: Vec<(usize, Complex64)>,
    pub noise_var: f64,
}

/// Independent zero-mean circularly-symmetric latents and linear
/// observations of them.
///
/// Latents with zero variance are constants: they are recorded by name so
/// they may appear in variable sets, but carry no randomness.
#[derive(Debug, Default, Serialize)]
pub struct LinearGaussianModel {
    latents: Vec<(String, f64)>,
    constants: Vec<String>,
    observed: Vec<Observed>,
    #[serde(skip)]
    cov: OnceLock<DMatrix<Complex64>>,
    #[serde(skip)]
    cache: Mutex<HashMap<u64, f64>>,
}

impl Clone for LinearGaussianModel {
    fn clone(&self) -> Self {
        LinearGaussianModel {
            latents: self.latents.clone(),
            constants: self.constants.clone(),
            observed: self.observed.clone(),
            cov: OnceLock::new(),
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl LinearGaussianModel {
    pub fn new() -> Self {
        Self::default()
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        if self.index(name).is_some() || self.constants.iter().any(|c| c == name) {
            return Err(Error::InvalidArgument(format!("model variable `{name}` declared twice")));
        }
        Ok(())
    }

    pub fn add_latent(&mut self, name: &str, variance: f64) -> Result<()> {
        self.check_fresh(name)?;
        if !self.observed.is_empty() {
            return Err(Error::InvalidArgument(format!("latent `{name}` declared after observations")));
        }
        if !variance.is_finite() || variance < 0.0 {
            return Err(Error::InvalidArgument(format!("variance of `{name}` is {variance}")));
        }
        if variance == 0.0 {
            self.constants.push(name.to_string());
        } else {
            if self.latents.len() + self.observed.len() >= 64 {
                return Err(Error::InvalidArgument("at most 64 model variables".into()));
            }
            self.latents.push((name.to_string(), variance));
        }
        self.cov = OnceLock::new();
        Ok(())
    }

    /// Adds `name = Σ c·latent + N` with `Var N = noise_var`. Observations
    /// must be added after all latents.
    pub fn add_observed(&mut self, name: &str, terms: &[(&str, Complex64)], noise_var: f64) -> Result<()> {
        self.check_fresh(name)?;
        if !noise_var.is_finite() || noise_var < 0.0 {
            return Err(Error::InvalidArgument(format!("noise variance of `{name}` is {noise_var}")));
        }
        if self.latents.len() + self.observed.len() >= 64 {
            return Err(Error::InvalidArgument("at most 64 model variables".into()));
        }
        let mut coeffs: BTreeMap<usize, Complex64> = BTreeMap::new();
        for (lat, c) in terms {
            if self.constants.iter().any(|k| k == lat) {
                continue;
            }
            let i = self
                .latents
                .iter()
                .position(|(n, _)| n == lat)
                .ok_or_else(|| Error::UnknownModelVariable(lat.to_string()))?;
            *coeffs.entry(i).or_default() += *c;
        }
        self.observed.push(Observed { name: name.to_string(), coeffs: coeffs.into_iter().collect(), noise_var });
        self.cov = OnceLock::new();
        Ok(())
    }

    /// Declared random variables: latents first, then observations.
    pub fn variables(&self) -> Vec<&str> {
        self.latents.iter().map(|(n, _)| n.as_str()).chain(self.observed.iter().map(|o| o.name.as_str())).collect()
    }

    pub fn latent_variance(&self, name: &str) -> Option<f64> {
        if self.constants.iter().any(|c| c == name) {
            return Some(0.0);
        }
        self.latents.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.latents
            .iter()
            .position(|(n, _)| n == name)
            .or_else(|| self.observed.iter().position(|o| o.name == name).map(|i| i + self.latents.len()))
    }

    /// Bitmask over declared variables; constants contribute nothing.
    fn mask<T: AsRef<str>>(&self, names: &[T]) -> Result<u64> {
        let mut m = 0u64;
        for n in names {
            let n = n.as_ref();
            match self.index(n) {
                Some(i) => m |= 1 << i,
                None if self.constants.iter().any(|c| c == n) => {}
                None => return Err(Error::UnknownModelVariable(n.to_string())),
            }
        }
        Ok(m)
    }

    /// `I(A; Y | C)` for one noisy observation `Y` and latent-only `A`, `C`,
    /// computed from residual powers. Avoids the cancellation that the
    /// determinant route suffers at high SNR.
    fn single_output_mi(&self, ma: u64, mb: u64, mc: u64) -> Option<f64> {
        let nl = self.latents.len();
        let latent_only = |m: u64| nl >= 64 || m >> nl == 0;
        if mb.count_ones() != 1 || !latent_only(ma) || !latent_only(mc) {
            return None;
        }
        let j = mb.trailing_zeros() as usize;
        let o = self.observed.get(j.checked_sub(nl)?)?;
        if o.noise_var <= 0.0 {
            return None;
        }
        let residual = |known: u64| {
            o.noise_var
                + o.coeffs
                    .iter()
                    .filter(|(i, _)| known & (1 << i) == 0)
                    .map(|&(i, c)| c.norm_sqr() * self.latents[i].1)
                    .sum::<f64>()
        };
        Some((residual(mc) / residual(ma | mc)).log2().max(0.0))
    }

    fn covariance(&self) -> &DMatrix<Complex64> {
        self.cov.get_or_init(|| covariance_of(self))
    }

    /// `log2 det` of the covariance restricted to `mask`, with the
    /// pseudo-determinant used for rank-deficient blocks.
    fn log_det(&self, mask: u64) -> Result<f64> {
        if mask == 0 {
            return Ok(0.0);
        }
        if let Some(v) = self.cache.lock().expect("cache lock").get(&mask) {
            return Ok(*v);
        }
        let idx: Vec<usize> = (0..64).filter(|i| mask & (1 << i) != 0).collect();
        let full = self.covariance();
        let sub = DMatrix::from_fn(idx.len(), idx.len(), |r, c| full[(idx[r], idx[c])]);
        let v = log2_det_psd(sub)?;
        self.cache.lock().expect("cache lock").insert(mask, v);
        Ok(v)
    }
}

fn log2_det_psd(m: DMatrix<Complex64>) -> Result<f64> {
    if let Some(ch) = m.clone().cholesky() {
        let l = ch.l_dirty();
        let diag_ok = (0..l.nrows()).all(|i| l[(i, i)].re > 0.0);
        if diag_ok {
            return Ok((0..l.nrows()).map(|i| 2.0 * l[(i, i)].re.log2()).sum());
        }
    }
    let eig = m.symmetric_eigen();
    let top = eig.eigenvalues.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let thresh = PSEUDO_DET_REL * top.max(f64::MIN_POSITIVE);
    let mut acc = 0.0;
    for &v in eig.eigenvalues.iter() {
        if v < -thresh.max(1e-9 * top) {
            return Err(Error::NotPsd(v));
        }
        if v > thresh {
            acc += v.log2();
        }
    }
    Ok(acc)
}

/// Covariance over all declared variables (latents first, then
/// observations).
pub fn covariance_of(model: &LinearGaussianModel) -> DMatrix<Complex64> {
    let nl = model.latents.len();
    let n = nl + model.observed.len();
    // Each variable as a row over the sources: latents, then one noise per
    // observation.
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    let mut var = vec![0.0; n];
    for (i, (_, v)) in model.latents.iter().enumerate() {
        a[(i, i)] = Complex64::new(1.0, 0.0);
        var[i] = *v;
    }
    for (j, o) in model.observed.iter().enumerate() {
        for &(i, c) in &o.coeffs {
            a[(nl + j, i)] = c;
        }
        a[(nl + j, nl + j)] = Complex64::new(1.0, 0.0);
        var[nl + j] = o.noise_var;
    }
    DMatrix::from_fn(n, n, |r, c| (0..n).map(|k| a[(r, k)] * a[(c, k)].conj() * var[k]).sum())
}

/// `I(A; B | C)` in bits for circularly-symmetric complex Gaussians.
pub fn gaussian_cmi<A: AsRef<str>, B: AsRef<str>, C: AsRef<str>>(
    model: &LinearGaussianModel,
    a: &[A],
    b: &[B],
    c: &[C],
) -> Result<f64> {
    let (ma, mb, mc) = (model.mask(a)?, model.mask(b)?, model.mask(c)?);
    if let Some(v) = model.single_output_mi(ma, mb, mc) {
        return Ok(v);
    }
    let v = model.log_det(ma | mc)? + model.log_det(mb | mc)? - model.log_det(ma | mb | mc)? - model.log_det(mc)?;
    // Round-off can leave tiny negative values for independent sets.
    Ok(if v < 0.0 && v > -1e-9 { 0.0 } else { v })
}

/// `arg` reduced to `[0, 2π)`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if (r - TAU).abs() < 1e-15 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn normalize_phases() {
        let one = c(1.0);
        let raw = RawChannel { h12: one, h21: one, h13: one, h14: one, h23: one, h24: one };
        assert_eq!(normalize_channel(&raw).unwrap().theta, 0.0);
        let p = normalize_channel(&RawChannel { h14: Complex64::new(0.0, 2.0), ..raw }).unwrap();
        assert!((p.theta - PI / 2.0).abs() < 1e-12);
        assert_eq!(p.h14, 2.0);
        let p = normalize_channel(&RawChannel {
            h13: Complex64::from_polar(1.0, PI / 3.0),
            h24: Complex64::from_polar(1.0, PI / 6.0),
            ..raw
        })
        .unwrap();
        assert!((p.theta - 3.0 * PI / 2.0).abs() < 1e-12);
        let bad = RawChannel { h12: c(1.0), h21: c(2.0), ..raw };
        assert!(matches!(normalize_channel(&bad), Err(Error::AsymmetricCooperation { .. })));
    }

    #[test]
    fn scalar_examples() {
        let mut m = LinearGaussianModel::new();
        m.add_latent("X", 1.0).unwrap();
        m.add_observed("Y", &[("X", c(1.0))], 1.0).unwrap();
        let s = covariance_of(&m);
        assert_eq!(s, DMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(1.0), c(2.0)]));
        assert!((gaussian_cmi(&m, &["X"], &["Y"], &[] as &[&str]).unwrap() - 1.0).abs() < 1e-12);
        assert!(gaussian_cmi(&m, &["X"], &["Y"], &["X"]).unwrap().abs() < 1e-12);

        let mut m = LinearGaussianModel::new();
        m.add_latent("X", 1.0).unwrap();
        m.add_observed("Y", &[("X", c(3.0))], 1.0).unwrap();
        assert!((gaussian_cmi(&m, &["X"], &["Y"], &[] as &[&str]).unwrap() - 10f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn constants_are_ignored() {
        let mut m = LinearGaussianModel::new();
        m.add_latent("U", 0.0).unwrap();
        m.add_latent("X", 1.0).unwrap();
        m.add_observed("Y", &[("X", c(1.0)), ("U", c(5.0))], 1.0).unwrap();
        assert_eq!(m.variables(), vec!["X", "Y"]);
        let v = gaussian_cmi(&m, &["X", "U"], &["Y"], &["U"]).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(gaussian_cmi(&m, &["Q"], &["Y"], &[] as &[&str]).is_err());
    }

    #[test]
    fn independent_blocks() {
        let mut m = LinearGaussianModel::new();
        m.add_latent("A", 2.0).unwrap();
        m.add_latent("B", 3.0).unwrap();
        let s = covariance_of(&m);
        assert_eq!(s[(0, 1)], c(0.0));
        assert_eq!(s[(1, 1)], c(3.0));
    }

    #[test]
    fn levels_and_swap() {
        let p = GaussParams::new(4.0, 2.0, 1.0, 0.5, 8.0, 0.3).unwrap();
        let l = p.levels();
        assert!((l.n13 - 4.0).abs() < 1e-12 && l.n24 == 0.0 && (l.nc - 6.0).abs() < 1e-12);
        assert_eq!(p.swapped().swapped(), p);
        assert!(GaussParams::new(-1.0, 0.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn residual_route_matches_determinants() {
        let mut m = LinearGaussianModel::new();
        m.add_latent("A", 1.5).unwrap();
        m.add_latent("B", 0.4).unwrap();
        m.add_latent("C", 2.0).unwrap();
        m.add_observed("Y", &[("A", Complex64::new(1.0, 2.0)), ("B", c(-3.0)), ("C", c(0.5))], 1.0).unwrap();
        let (ma, mb, mc) = (m.mask(&["A"]).unwrap(), m.mask(&["Y"]).unwrap(), m.mask(&["B"]).unwrap());
        let fast = m.single_output_mi(ma, mb, mc).unwrap();
        let slow = m.log_det(ma | mc).unwrap() + m.log_det(mb | mc).unwrap()
            - m.log_det(ma | mb | mc).unwrap()
            - m.log_det(mc).unwrap();
        assert!((fast - slow).abs() < 1e-12);
        assert!(m.single_output_mi(ma, mb | ma, mc).is_none());
    }
}
