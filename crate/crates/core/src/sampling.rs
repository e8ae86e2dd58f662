//! Seeded random channel generation for sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gauss_model::GaussParams;

pub const DEFAULT_DB_MIN: f64 = -20.0;
pub const DEFAULT_DB_MAX: f64 = 80.0;

/// Link gain for a power level in dB, `|h|^2 = 10^{db/10}`.
pub fn gain_from_db(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

/// Power level in dB of a link gain; `-inf` for a zero gain.
pub fn db_from_gain(h: f64) -> f64 {
    20.0 * h.log10()
}

/// One channel with each link's power drawn uniformly in dB and the phase
/// uniformly on `[0, 2π)`.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, db_min: f64, db_max: f64) -> GaussParams {
    let mut draw = || gain_from_db(rng.random_range(db_min..=db_max));
    let (h13, h14, h23, h24, hc) = (draw(), draw(), draw(), draw(), draw());
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    GaussParams::new(h13, h14, h23, h24, hc, theta).expect("sampled gains are finite and non-negative")
}

pub fn sample_channels(count: usize, seed: u64, db_min: f64, db_max: f64) -> Result<Vec<GaussParams>> {
    if !(db_min.is_finite() && db_max.is_finite() && db_min <= db_max) {
        return Err(Error::InvalidArgument(format!("bad dB range [{db_min}, {db_max}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| random_channel(&mut rng, db_min, db_max)).collect())
}

/// Draws channels from one seeded stream and keeps those accepted by
/// `keep`, giving up after `100 * count` draws.
pub fn sample_channels_where(
    count: usize,
    seed: u64,
    db_min: f64,
    db_max: f64,
    keep: impl Fn(&GaussParams) -> bool,
) -> Result<Vec<GaussParams>> {
    sample_channels(0, seed, db_min, db_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count.saturating_mul(100) {
        if out.len() == count {
            break;
        }
        let p = random_channel(&mut rng, db_min, db_max);
        if keep(&p) {
            out.push(p);
        }
    }
    if out.len() < count {
        return Err(Error::InvalidArgument(format!("only {} of {count} channels matched the filter", out.len())));
    }
    Ok(out)
}

/// Applies `f` to every item in parallel and returns results in input order.
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.par_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_samples_repeat() {
        let a = sample_channels(20, 7, -20.0, 80.0).unwrap();
        let b = sample_channels(20, 7, -20.0, 80.0).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.h13 >= 0.1 && p.h13 <= 1e4));
    }

    #[test]
    fn filtered_stream_extends_unfiltered() {
        let all = sample_channels(50, 3, -20.0, 80.0).unwrap();
        let some = sample_channels_where(5, 3, -20.0, 80.0, |p| p.hc > p.h13).unwrap();
        let want: Vec<_> = all.into_iter().filter(|p| p.hc > p.h13).take(5).collect();
        assert_eq!(some, want);
    }

    #[test]
    fn db_round_trip() {
        assert!((db_from_gain(gain_from_db(37.5)) - 37.5).abs() < 1e-12);
        assert_eq!(gain_from_db(20.0), 10.0);
    }
}
