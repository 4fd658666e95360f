//! Gram points and zero-counting formulas.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};
use crate::precision::PrecisionContext;
use crate::scalar::Real;
use crate::special::{lambert_w0, riemann_siegel_theta, theta_slope};
use crate::zeta::arg_zeta_continuous;

/// `g_n` with `ϑ(g_n) = nπ`, `n ≥ 0`.
pub fn gram_point<T: Real>(n: u64, ctx: &PrecisionContext) -> Result<T> {
    let bits = ctx.bits();
    let pi = T::pi(bits);
    let two_pi = pi.clone() * ctx.int::<T>(2);
    let target = T::from_u64_prec(n, bits) * pi;
    // ϑ(t) ≈ (t/2) log(t/2πe) − π/8 inverted through W
    let m = T::from_u64_prec(n, bits) + ctx.ratio::<T>(1, 8);
    let e = T::from_u64_prec(1, bits).exp();
    let mut t = two_pi * m.clone() / lambert_w0(&(m / e), ctx)?;
    let eps = ctx.work_eps::<T>();
    for _ in 0..100 {
        let f = riemann_siegel_theta(&t, ctx)? - target.clone();
        let step = f / theta_slope(&t, ctx);
        t -= step.clone();
        if step.abs() <= eps.clone() * t.abs() * ctx.int::<T>(4) {
            let f = riemann_siegel_theta(&t, ctx)? - target.clone();
            t -= f / theta_slope(&t, ctx);
            return Ok(t);
        }
    }
    Err(ZetaError::Evaluation(format!("gram point {n} did not converge")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountVariant {
    RiemannAsymptotic,
    BacklundExact,
    CriticalLineAsymptotic,
    CriticalLineExact,
}

impl CountVariant {
    pub const ALL: [CountVariant; 4] = [
        CountVariant::RiemannAsymptotic,
        CountVariant::BacklundExact,
        CountVariant::CriticalLineAsymptotic,
        CountVariant::CriticalLineExact,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CountVariant::RiemannAsymptotic => "riemann_asymptotic",
            CountVariant::BacklundExact => "backlund_exact",
            CountVariant::CriticalLineAsymptotic => "critical_line_asymptotic",
            CountVariant::CriticalLineExact => "critical_line_exact",
        }
    }
}

impl std::str::FromStr for CountVariant {
    type Err = ZetaError;
    fn from_str(s: &str) -> Result<Self> {
        CountVariant::ALL
            .iter()
            .find(|v| v.as_str() == s)
            .copied()
            .ok_or_else(|| ZetaError::Parse(format!("unknown count variant `{s}`")))
    }
}

/// A counting value with a flag for ordinates too close to a zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Count<T> {
    pub value: T,
    pub near_zero: bool,
}

/// δ used for `S(T)` away from zeros.
pub fn count_delta<T: Real>() -> f64 {
    if T::MAX_BITS.is_some() {
        1e-10
    } else {
        1e-15
    }
}

fn s_of_t<T: Real>(t: &T, ctx: &PrecisionContext) -> Result<(T, bool)> {
    let bits = ctx.bits();
    let d = T::from_f64_prec(count_delta::<T>(), bits);
    let s = crate::cmath::real_part(ctx.ratio::<T>(1, 2) + d.clone());
    let z = crate::zeta::zeta(&num_complex::Complex::new(s.re, t.clone()), ctx)?;
    let near = crate::cmath::ComplexExt::abs_val(&z).to_f64() < 1e-6;
    Ok((arg_zeta_continuous(t, &d, ctx)? / T::pi(bits), near))
}

/// `(T/2π) log(T/2πe)`.
fn smooth_term<T: Real>(t: &T, ctx: &PrecisionContext) -> T {
    let tp = T::pi(ctx.bits()) * ctx.int::<T>(2);
    t.clone() / tp.clone() * ((t.clone() / tp).ln() - T::from_u64_prec(1, ctx.bits()))
}

pub fn count_zeros_smooth<T: Real>(t: &T, variant: CountVariant, ctx: &PrecisionContext) -> Result<Count<T>> {
    let two_pi = T::pi(ctx.bits()) * ctx.int::<T>(2);
    if *t <= two_pi {
        return Err(ZetaError::Domain(format!("counting needs T > 2π, got {t}")));
    }
    let seven_eighths = ctx.ratio::<T>(7, 8);
    let one = T::from_u64_prec(1, ctx.bits());
    Ok(match variant {
        CountVariant::RiemannAsymptotic => Count { value: smooth_term(t, ctx) + seven_eighths, near_zero: false },
        CountVariant::CriticalLineAsymptotic => {
            let (s, near) = s_of_t(t, ctx)?;
            Count { value: smooth_term(t, ctx) + seven_eighths + s, near_zero: near }
        }
        CountVariant::BacklundExact => {
            let (s, near) = s_of_t(t, ctx)?;
            let th = riemann_siegel_theta(t, ctx)?;
            Count { value: th / T::pi(ctx.bits()) + one + s, near_zero: near }
        }
        CountVariant::CriticalLineExact => {
            // Same expression as Backlund's, evaluated through the same terms.
            let th = riemann_siegel_theta(t, ctx)?;
            let (s, near) = s_of_t(t, ctx)?;
            Count { value: th / T::pi(ctx.bits()) + s + one, near_zero: near }
        }
    })
}

/// Index of the zero at `y`: the integer count `N` just above it, provided
/// the count just below is one less. `None` when the two counts do not
/// differ by one, e.g. for a pair closer than `eps`.
pub fn zero_index_at(y: f64, eps: f64) -> Result<Option<u64>> {
    let below = zero_count(y - eps)?;
    let above = zero_count(y + eps)?;
    Ok(if above - below == 1 && above >= 1 { Some(above as u64) } else { None })
}

/// Integer zero count `N(y)` in doubles.
pub fn zero_count(y: f64) -> Result<i64> {
    let ctx = PrecisionContext::double();
    Ok(count_zeros_smooth(&y, CountVariant::BacklundExact, &ctx)?.value.round() as i64)
}
