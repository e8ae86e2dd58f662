//! Capacity analysis for the two-user interference channel with source
//! cooperation: closed-form sum-capacity bounds for the linear deterministic
//! and Gaussian models, achievable-rate constraint systems, exact polyhedral
//! solvers, and simulations of uncoded finite-field schemes.

pub mod error;
pub mod gauss_achieve;
pub mod gauss_capacity;
pub mod gauss_model;
pub mod ld_achieve;
pub mod ld_capacity;
pub mod ld_model;
pub mod ld_schemes;
pub mod rate_region;
pub mod sampling;
pub mod special_cases;

pub use error::{Error, Result};
pub use ld_capacity::{LdBounds, Levels, Regime, RegimeTag};
pub use ld_model::{FieldElement, LdParams, LdVector, Prime};
pub use rate_region::{ConstraintSystem, LpResult, LpStatus, RateVar, Rational};
