//! Fixtures shared by the criterion benchmarks.

use coopcap::gauss_model::GaussParams;
use coopcap::ld_achieve::{instantiate_ld_constraints, LdSchemeInstance};
use coopcap::sampling::sample_channels;
use coopcap::LdParams;

/// One instantiation per regime, from the example channels and the
/// strong-cooperation corner.
pub fn ld_instances() -> Vec<(&'static str, LdSchemeInstance)> {
    [
        ("regime-I", LdParams::new(4, 2, 2, 4, 1)),
        ("regime-II", LdParams::new(5, 1, 3, 2, 2)),
        ("regime-III", LdParams::new(2, 3, 3, 5, 4)),
        ("regime-IV", LdParams::new(4, 3, 3, 4, 5)),
    ]
    .into_iter()
    .map(|(name, p)| (name, instantiate_ld_constraints(&p).expect("valid parameters")))
    .collect()
}

pub fn gauss_channels(count: usize) -> Vec<GaussParams> {
    sample_channels(count, 7, -20.0, 80.0).expect("valid range")
}
