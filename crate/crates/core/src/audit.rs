//! Residuals of both equations at given ordinates.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};
use crate::precision::PrecisionContext;
use crate::scalar::{to_decimal_string, MpFloat, Real};
use crate::solver::{asymptotic_lhs, exact_lhs, ZeroRecord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub n: u64,
    pub y: String,
    /// `|asymptotic lhs|` in count units.
    pub asymptotic: f64,
    /// `|exact lhs|` in radians.
    pub exact: f64,
}

/// Round a positive decimal string to `decimals` places after the point.
pub fn round_to_decimals(y: &str, decimals: u32) -> Result<String> {
    let bits = (y.len() as f64 * 3.33) as u32 + 128;
    let v = MpFloat::parse_prec(y, bits)?;
    if v <= MpFloat::zero() {
        return Err(ZetaError::Domain(format!("ordinate must be positive, got {y}")));
    }
    let int_digits = (v.to_f64().log10().floor() as i64 + 1).max(1) as usize;
    let s = to_decimal_string(&v, int_digits + decimals as usize);
    // rounding can carry into a new leading digit
    let frac = s.split_once('.').map_or(0, |(_, f)| f.len());
    if frac == decimals as usize {
        Ok(s)
    } else {
        Ok(to_decimal_string(&v, int_digits + 1 + decimals as usize))
    }
}

/// Substitute each ordinate (optionally rounded to `decimals` places) into
/// both equations at shift `delta`, working at `digits` digits.
pub fn audit(zeros: &[ZeroRecord], delta: f64, decimals: Option<u32>, digits: u32) -> Result<Vec<AuditRow>> {
    if !(delta > 0.0 && delta < 1e-2) {
        return Err(ZetaError::Domain(format!("delta must lie in (0, 1e-2), got {delta}")));
    }
    let ctx = PrecisionContext::new(digits)?;
    let bits = ctx.bits();
    let d = MpFloat::parse_prec(&format!("{delta:e}"), bits)?;
    zeros
        .iter()
        .map(|r| {
            let y = match decimals {
                Some(k) => round_to_decimals(&r.y, k)?,
                None => r.y.clone(),
            };
            let v = MpFloat::parse_prec(&y, bits)?;
            let a = asymptotic_lhs(&v, r.n, &d, &ctx)?.to_f64().abs();
            let e = exact_lhs(&v, r.n, &d, &ctx)?.to_f64().abs();
            Ok(AuditRow { n: r.n, y, asymptotic: a, exact: e })
        })
        .collect()
}
