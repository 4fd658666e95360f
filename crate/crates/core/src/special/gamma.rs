use num_complex::Complex;

use crate::bernoulli::stirling_coefficients;
use crate::cmath::ComplexExt;
use crate::error::{Result, ZetaError};
use crate::precision::PrecisionContext;
use crate::scalar::Real;

/// Minimum `|w|` at which the Stirling series is summed, as a function of
/// the working precision in bits.
fn stirling_radius(bits: u32) -> f64 {
    (0.2 * bits as f64).max(10.0)
}

/// Principal-branch `log Γ(z)`.
///
/// For `Re z > 0` this is the analytic logarithm continued from the positive
/// real axis, so its imaginary part varies continuously. Elsewhere the result
/// is a logarithm of `Γ(z)` determined modulo `2πi`.
pub fn log_gamma<T: Real>(z: &Complex<T>, ctx: &PrecisionContext) -> Result<Complex<T>> {
    let bits = ctx.bits();
    let work = ctx.bits_for::<T>();
    if z.im.is_zero() && z.re <= T::zero() && z.re.floor() == z.re {
        return Err(ZetaError::Pole(format!("Gamma at {}", z.re)));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(ZetaError::Domain("non-finite argument to log_gamma".into()));
    }
    let radius = stirling_radius(work);
    let re = z.re.to_f64();
    let im = z.im.to_f64();
    let mut shift = 0u64;
    if re < 0.0 {
        shift = (-re).ceil() as u64;
    }
    let r = re + shift as f64;
    if (r * r + im * im).sqrt() < radius {
        let need = if im.abs() < radius { (radius * radius - im * im).sqrt() - r } else { 0.0 };
        shift += need.max(0.0).ceil() as u64;
    }
    let mut correction = Complex::new(T::zero(), T::zero());
    for k in 0..shift {
        let zk = Complex::new(z.re.clone() + T::from_u64_prec(k, bits), z.im.clone());
        correction = correction + zk.ln_val();
    }
    let w = Complex::new(z.re.clone() + T::from_u64_prec(shift, bits), z.im.clone());
    Ok(stirling(&w, ctx) - correction)
}

/// Stirling series for `log Γ(w)`, valid for large `|w|` with `Re w ≥ 0`.
fn stirling<T: Real>(w: &Complex<T>, ctx: &PrecisionContext) -> Complex<T> {
    let bits = ctx.bits();
    let eps = ctx.work_eps::<T>();
    let half = ctx.ratio::<T>(1, 2);
    let lnw = w.ln_val();
    let mut acc = (w.clone() - Complex::new(half.clone(), T::zero())) * lnw - w.clone()
        + Complex::new(T::ln_2pi(bits) * half, T::zero());
    let winv = Complex::new(T::one(), T::zero()) / w.clone();
    let winv2 = winv.clone() * winv.clone();
    let mut pw = winv;
    let mut chunk = 16usize;
    let mut k = 0usize;
    let scale = acc.abs_val().max_of(T::one());
    let mut prev = None::<T>;
    loop {
        let coeffs: Vec<T> = stirling_coefficients(chunk, bits);
        while k < chunk {
            let term = pw.scaled(&coeffs[k]);
            let mag = term.abs_val();
            acc = acc + term;
            if mag <= eps.clone() * scale.clone() {
                return acc;
            }
            if let Some(p) = &prev {
                // asymptotic series started diverging; stop at the smallest term
                if mag > *p && k > 4 {
                    return acc;
                }
            }
            prev = Some(mag);
            pw = pw * winv2.clone();
            k += 1;
        }
        chunk *= 2;
        if chunk > 4096 {
            return acc;
        }
    }
}

/// Riemann–Siegel theta `ϑ(t) = Im log Γ(1/4 + it/2) − (t/2) log π`,
/// continuous with `ϑ(0) = 0`; odd in `t`.
pub fn riemann_siegel_theta<T: Real>(t: &T, ctx: &PrecisionContext) -> Result<T> {
    if !t.is_finite() {
        return Err(ZetaError::Domain("non-finite argument to theta".into()));
    }
    if t.is_zero() {
        return Ok(T::zero());
    }
    let bits = ctx.bits();
    let half = ctx.ratio::<T>(1, 2);
    let z = Complex::new(ctx.ratio::<T>(1, 4), t.clone() * half.clone());
    let lg = log_gamma(&z, ctx)?;
    Ok(lg.im - t.clone() * half * T::pi(bits).ln())
}

/// `ϑ'(t) ≈ ½ log(t/2π)` plus the first correction; used for Newton steps.
pub fn theta_slope<T: Real>(t: &T, ctx: &PrecisionContext) -> T {
    let bits = ctx.bits();
    let two_pi = T::pi(bits) * ctx.int::<T>(2);
    let half = ctx.ratio::<T>(1, 2);
    (t.clone() / two_pi).ln() * half
        - (ctx.int::<T>(48) * t.clone() * t.clone()).recip()
}
