#![allow(dead_code)]

use coopcap::gauss_model::LinearGaussianModel;
use coopcap::rate_region::{ConstraintSystem, Rational, Scalar};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const VAR_NAMES: [&str; 4] = ["a", "b", "c", "d"];

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// A system over 1..=4 variables with small integer data.
pub fn random_system(seed: u64) -> ConstraintSystem<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=4);
    let mut sys = ConstraintSystem::new(&VAR_NAMES[..n]).unwrap();
    for _ in 0..rng.random_range(1..=5) {
        let terms: Vec<(&str, Rational)> =
            VAR_NAMES[..n].iter().map(|v| (*v, Rational::from_i64(rng.random_range(-2..=3)))).collect();
        sys.add_row(&terms, Rational::from_i64(rng.random_range(0..=8))).unwrap();
    }
    // Keep every variable bounded so brute force terminates.
    let all: Vec<(&str, Rational)> = VAR_NAMES[..n].iter().map(|v| (*v, Rational::one())).collect();
    sys.add_row(&all, Rational::from_i64(rng.random_range(1..=10))).unwrap();
    sys
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| q(rng.random_range(0..=12), 2)).collect()
}

/// Latents `L0..`, observations `Y0..` with random complex gains.
pub fn random_model(seed: u64) -> (LinearGaussianModel, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nl = rng.random_range(1..=5);
    let no = rng.random_range(1..=3);
    let mut m = LinearGaussianModel::new();
    let mut names = Vec::new();
    for i in 0..nl {
        let name = format!("L{i}");
        m.add_latent(&name, rng.random_range(0.1..4.0)).unwrap();
        names.push(name);
    }
    for j in 0..no {
        let mut terms: Vec<(String, Complex64)> = Vec::new();
        for n in &names[..nl] {
            if rng.random_bool(0.7) {
                terms.push((n.clone(), Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))));
            }
        }
        let t: Vec<(&str, Complex64)> = terms.iter().map(|(n, c)| (n.as_str(), *c)).collect();
        let name = format!("Y{j}");
        m.add_observed(&name, &t, rng.random_range(0.5..2.0)).unwrap();
        names.push(name);
    }
    (m, names)
}

/// Three disjoint random subsets, the first two non-empty.
pub fn random_split(rng: &mut ChaCha8Rng, names: &[String]) -> Option<[Vec<String>; 3]> {
    let mut sets: [Vec<String>; 3] = Default::default();
    for n in names {
        match rng.random_range(0..4) {
            0 => sets[0].push(n.clone()),
            1 => sets[1].push(n.clone()),
            2 => sets[2].push(n.clone()),
            _ => {}
        }
    }
    (!sets[0].is_empty() && !sets[1].is_empty()).then_some(sets)
}
