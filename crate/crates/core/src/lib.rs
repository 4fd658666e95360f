//! Riemann zeta zeros from transcendental equations on the critical line.
//!
//! The numerical core is generic over [`Real`]; `f64` and the MPFR-backed
//! [`MpFloat`] are the two supplied scalars.

pub mod audit;
pub mod batch;
pub mod bernoulli;
pub mod cmath;
pub mod counting;
pub mod error;
pub mod precision;
pub mod prime;
pub mod roots;
pub mod scalar;
pub mod solver;
pub mod special;
pub mod statistics;
pub mod store;
pub mod zeta;

pub use error::{Result, ZetaError};
pub use precision::PrecisionContext;
pub use scalar::{MpFloat, Real};

pub type Complex64 = num_complex::Complex<f64>;
pub type MpComplex = num_complex::Complex<MpFloat>;
