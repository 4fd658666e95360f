use num_complex::Complex;

use crate::cmath::ComplexExt;
use crate::error::{Result, ZetaError};
use crate::precision::PrecisionContext;
use crate::scalar::Real;

/// Exponential integral `Ei(z)`.
///
/// Principal branch with the cut on the negative real axis; for real
/// arguments the real-valued (Cauchy principal value) `Ei` is returned, so
/// `Ei(ln x) = li(x)`.
pub fn exp_integral_ei<T: Real>(z: &Complex<T>, ctx: &PrecisionContext) -> Result<Complex<T>> {
    if z.re.is_zero() && z.im.is_zero() {
        return Err(ZetaError::Pole("Ei is singular at 0".into()));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(ZetaError::Domain("non-finite argument to Ei".into()));
    }
    let bits = ctx.bits_for::<T>();
    let mag = z.abs_val().to_f64();
    let re = z.re.to_f64();
    let threshold = if T::MAX_BITS.is_some() { 2.0 } else { (0.1 * bits as f64).max(4.0) };
    let near_positive_axis = mag - re < 2.0;
    if mag >= threshold && !near_positive_axis {
        ei_continued_fraction(z, ctx)
    } else {
        Ok(ei_series(z, ctx))
    }
}

/// `γ + ln z + Σ zᵏ/(k·k!)`, summed with enough extra bits to absorb the
/// cancellation for arguments away from the positive real axis.
fn ei_series<T: Real>(z: &Complex<T>, ctx: &PrecisionContext) -> Complex<T> {
    let mag = z.abs_val().to_f64();
    let extra = ((mag - z.re.to_f64()) / std::f64::consts::LN_2).max(0.0) as u32 + 8;
    let bits = ctx.bits() + extra;
    let zw = Complex::new(z.re.with_bits(bits), z.im.with_bits(bits));
    let eps = T::from_f64_prec(2f64.powi(-(ctx.bits_for::<T>() as i32) - 4), bits);
    let mut term = zw.clone();
    let mut sum = zw.clone();
    let mut k: u64 = 1;
    loop {
        k += 1;
        let kk = T::from_u64_prec(k, bits);
        term = (term * zw.clone()).scaled(&(T::from_u64_prec(k - 1, bits) / (kk.clone() * kk.clone())));
        sum = sum + term.clone();
        if k as f64 > mag && term.abs_val() <= eps.clone() * sum.abs_val() {
            break;
        }
        if k > 1_000_000 {
            break;
        }
    }
    let log = if z.im.is_zero() {
        Complex::new(zw.re.abs().ln(), T::zero())
    } else {
        zw.ln_val()
    };
    let total = sum + log + Complex::new(T::euler_gamma(bits), T::zero());
    Complex::new(total.re.with_bits(ctx.bits()), total.im.with_bits(ctx.bits()))
}

/// `Ei(z) = −E₁(−z) ± iπ`, with `E₁` from its continued fraction (modified
/// Lentz).
fn ei_continued_fraction<T: Real>(z: &Complex<T>, ctx: &PrecisionContext) -> Result<Complex<T>> {
    let bits = ctx.bits();
    let eps = ctx.work_eps::<T>();
    let w = -z.clone();
    let one = Complex::new(T::from_u64_prec(1, bits), T::zero());
    let two = T::from_u64_prec(2, bits);
    let tiny = T::from_f64_prec(1e-300, bits);
    let mut b = w.clone() + one.clone();
    let mut c = Complex::new(tiny.recip(), T::zero());
    let mut d = one.clone() / b.clone();
    let mut h = d.clone();
    let mut converged = false;
    for i in 1..200_000u64 {
        let an = -T::from_u64_prec(i * i, bits);
        b = b + Complex::new(two.clone(), T::zero());
        d = one.clone() / (d.scaled(&an) + b.clone());
        c = b.clone() + (one.clone() / c).scaled(&an);
        let del = c.clone() * d.clone();
        h = h * del.clone();
        if (del - one.clone()).abs_val() <= eps.clone() * ctx.int::<T>(2) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(ZetaError::Evaluation(format!("E1 continued fraction stalled at {}", w.re)));
    }
    let e1 = h * z.exp_val();
    let pi = T::pi(bits);
    let branch = if z.im > T::zero() {
        pi
    } else if z.im < T::zero() {
        -pi
    } else {
        T::zero()
    };
    Ok(Complex::new(-e1.re, branch - e1.im))
}

/// `li(x) = Ei(ln x)` for real `x > 0`, `x ≠ 1`.
pub fn log_integral<T: Real>(x: &T, ctx: &PrecisionContext) -> Result<T> {
    if *x <= T::zero() {
        return Err(ZetaError::Domain(format!("li needs x > 0, got {x}")));
    }
    Ok(exp_integral_ei(&Complex::new(x.ln(), T::zero()), ctx)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::MpFloat;

    /// Principal-value `∫₀ˣ dt/ln t` for `x > 1`, via the regularised
    /// integrand `1/ln t − 1/(t−1)` (smooth on [0, x]) plus `ln(x−1)`.
    fn li_quadrature(x: f64) -> f64 {
        let f = |t: f64| {
            if t == 0.0 {
                1.0
            } else if (t - 1.0).abs() < 1e-6 {
                let u = t - 1.0;
                0.5 - u / 12.0 + u * u / 24.0
            } else {
                1.0 / t.ln() - 1.0 / (t - 1.0)
            }
        };
        // composite Simpson; the integrand has a log singularity only in its
        // derivative at 0, handled by grading the mesh as t = x·s²
        let n = 20_000;
        let h = 1.0 / n as f64;
        let g = |s: f64| f(x * s * s) * 2.0 * x * s;
        let mut acc = g(0.0) + g(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * g(i as f64 * h);
        }
        acc * h / 3.0 + (x - 1.0).ln()
    }

    #[test]
    fn li2_matches_quadrature() {
        let ctx = PrecisionContext::double();
        let li2 = log_integral(&2.0f64, &ctx).unwrap();
        let q = li_quadrature(2.0);
        assert!((li2 - q).abs() < 1e-10, "{li2} vs {q}");
        assert!((li2 - 1.04516).abs() < 1e-5);
        let li100 = log_integral(&100.0f64, &ctx).unwrap();
        assert!((li100 - li_quadrature(100.0)).abs() < 1e-8);
    }

    #[test]
    fn singular_at_zero() {
        let ctx = PrecisionContext::double();
        assert!(exp_integral_ei(&Complex::new(0.0, 0.0), &ctx).is_err());
    }

    #[test]
    fn conjugation_symmetry() {
        let ctx = PrecisionContext::double();
        for &(a, b) in &[(0.3, 1.0), (-2.0, 5.0), (3.0, -40.0), (0.35, 9.8)] {
            let z = Complex::new(a, b);
            let u = exp_integral_ei(&z, &ctx).unwrap();
            let v = exp_integral_ei(&z.conj(), &ctx).unwrap();
            assert!((u - v.conj()).norm() < 1e-13 * u.norm().max(1.0));
        }
    }

    #[test]
    fn conjugate_pair_sum_is_real() {
        let ctx = PrecisionContext::double();
        let l2 = 2f64.ln();
        let rho = Complex::new(0.5, 14.134725141734694);
        let s = exp_integral_ei(&(rho * l2), &ctx).unwrap() + exp_integral_ei(&(rho.conj() * l2), &ctx).unwrap();
        assert!(s.im.abs() < 1e-14 && s.re.is_finite());
    }

    #[test]
    fn series_and_fraction_agree() {
        let ctx = PrecisionContext::new(30).unwrap();
        let bits = ctx.bits();
        for &(a, b) in &[(2.0, 9.0), (-3.0, 6.0), (0.5, 30.0), (-25.0, 1.0)] {
            let z = Complex::new(MpFloat::from_f64_prec(a, bits), MpFloat::from_f64_prec(b, bits));
            let s = ei_series(&z, &ctx);
            let c = ei_continued_fraction(&z, &ctx).unwrap();
            let d = (s.clone() - c).abs_val() / s.abs_val();
            assert!(d.to_f64() < 1e-35, "{a}+{b}i: {}", d.to_f64());
        }
    }

    #[test]
    fn derivative_is_exp_over_z() {
        // d/dz Ei(z) = e^z / z, central difference
        let ctx = PrecisionContext::double();
        let z = Complex::new(-1.2, 7.5);
        let h = 1e-5;
        let up = exp_integral_ei(&(z + h), &ctx).unwrap();
        let dn = exp_integral_ei(&(z - h), &ctx).unwrap();
        let d = (up - dn) / (2.0 * h);
        assert!((d - z.exp() / z).norm() < 1e-8);
    }
}
