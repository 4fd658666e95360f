use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};
use crate::scalar::Real;

pub const DEFAULT_GUARD: u32 = 10;

/// Working precision: `digits` certified decimal digits computed with
/// `guard` extra digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub digits: u32,
    pub guard: u32,
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self> {
        if digits < 15 {
            return Err(ZetaError::Config(format!("digits must be >= 15, got {digits}")));
        }
        if guard < 5 {
            return Err(ZetaError::Config(format!("guard must be >= 5, got {guard}")));
        }
        Ok(PrecisionContext { digits, guard })
    }

    /// Context used by the hardware-double code paths.
    pub fn double() -> Self {
        PrecisionContext { digits: 15, guard: 5 }
    }

    /// Binary working precision covering `digits + guard` decimal digits.
    pub fn bits(&self) -> u32 {
        (((self.digits + self.guard) as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 2
    }

    /// `10^(guard - digits)`: the loose tolerance used by self-checks.
    pub fn eps(&self) -> f64 {
        10f64.powi(self.guard as i32 - self.digits as i32)
    }

    /// Same context with `extra` more certified digits.
    pub fn raised(&self, extra: u32) -> Self {
        PrecisionContext { digits: self.digits + extra, guard: self.guard }
    }

    /// Effective working bits for scalar type `T`.
    pub fn bits_for<T: Real>(&self) -> u32 {
        match T::MAX_BITS {
            Some(b) => b,
            None => self.bits(),
        }
    }

    /// Decimal digits `T` can actually carry in this context.
    pub fn working_digits<T: Real>(&self) -> f64 {
        self.bits_for::<T>() as f64 * std::f64::consts::LOG10_2
    }

    pub fn real<T: Real>(&self, x: f64) -> T {
        T::from_f64_prec(x, self.bits())
    }

    pub fn int<T: Real>(&self, x: i64) -> T {
        T::from_i64_prec(x, self.bits())
    }

    pub fn parse<T: Real>(&self, s: &str) -> Result<T> {
        T::parse_prec(s, self.bits())
    }

    pub fn pi<T: Real>(&self) -> T {
        T::pi(self.bits())
    }

    /// `p / q` at working precision.
    pub fn ratio<T: Real>(&self, p: i64, q: i64) -> T {
        T::from_i64_prec(p, self.bits()) / T::from_i64_prec(q, self.bits())
    }

    /// Working epsilon for `T` (`max(2^-bits, machine eps)`).
    pub fn work_eps<T: Real>(&self) -> T {
        let b = self.bits_for::<T>();
        T::from_f64_prec(2f64.powi(-(b as i32)), self.bits())
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext::double()
    }
}
