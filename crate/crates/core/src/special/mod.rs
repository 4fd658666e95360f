//! Special functions used by the zeta engine and the explicit formula.

mod arith;
mod expint;
mod gamma;
mod lambert;

pub use arith::{build_arithmetic_tables, build_arithmetic_tables_capped, ArithmeticFunctionTable, DEFAULT_SIEVE_CAP};
pub use expint::{exp_integral_ei, log_integral};
pub use gamma::{log_gamma, riemann_siegel_theta, theta_slope};
pub use lambert::lambert_w0;
