use crate::error::{Result, ZetaError};
use crate::precision::PrecisionContext;
use crate::scalar::Real;

const MAX_ITER: usize = 200;

/// Principal branch `W₀(x)`: the solution `w ≥ -1` of `w·eʷ = x`.
pub fn lambert_w0<T: Real>(x: &T, ctx: &PrecisionContext) -> Result<T> {
    if !x.is_finite() {
        return Err(ZetaError::Domain(format!("lambert_w0 of non-finite {x}")));
    }
    let bits = ctx.bits();
    let one = T::from_u64_prec(1, bits);
    let e = one.exp();
    // distance from the branch point, p² = 2(ex + 1)
    let q = e.clone() * x.clone() + one.clone();
    if q < T::zero() {
        return Err(ZetaError::Domain(format!("lambert_w0 needs x >= -1/e, got {x}")));
    }
    if x.is_zero() {
        return Ok(T::zero());
    }
    if q.is_zero() {
        return Ok(-one);
    }
    let eps = ctx.work_eps::<T>();
    let xf = x.to_f64();
    let big = xf > std::f64::consts::E || !xf.is_finite();
    let mut w = seed(x, &q, ctx);
    for _ in 0..MAX_ITER {
        let step = if big { halley_log_form(&w, x) } else { halley_product_form(&w, x) };
        w -= step.clone();
        let scale = w.abs().max_of(eps.clone());
        // near the branch point f'(w) = eʷ(1 + w) vanishes and steps stall at
        // rounding noise of size eps/|1 + w|
        let cond = (w.clone() + one.clone()).abs().max_of(eps.clone().sqrt()).min_of(one.clone());
        if step.abs() * cond <= eps.clone() * scale * ctx.int::<T>(4) {
            // one more step polishes the last few bits
            let step = if big { halley_log_form(&w, x) } else { halley_product_form(&w, x) };
            w -= step;
            return Ok(w);
        }
    }
    Err(ZetaError::Evaluation(format!("lambert_w0 did not converge at {x}")))
}

fn seed<T: Real>(x: &T, q: &T, ctx: &PrecisionContext) -> T {
    let bits = ctx.bits();
    let xf = x.to_f64();
    let qf = q.to_f64();
    if qf < 0.3 {
        // branch point series in p = sqrt(2(ex+1))
        let p = (q.clone() * ctx.int::<T>(2)).sqrt();
        let p2 = p.clone() * p.clone();
        let p3 = p2.clone() * p.clone();
        return -T::from_u64_prec(1, bits) + p - p2 / ctx.int::<T>(3) + p3 * ctx.ratio::<T>(11, 72);
    }
    if xf.is_finite() && xf.abs() < 1.0 {
        return T::from_f64_prec((xf).ln_1p() * (1.0 - 0.3 * xf.ln_1p().max(-0.9)), bits);
    }
    if xf.is_finite() && xf <= std::f64::consts::E {
        return T::from_f64_prec(0.6 * xf.ln_1p(), bits);
    }
    let l1 = x.ln();
    let l2 = l1.ln();
    l1.clone() - l2.clone() + l2 / l1
}

/// Halley step for `f(w) = w·eʷ − x`.
fn halley_product_form<T: Real>(w: &T, x: &T) -> T {
    let ew = w.exp();
    let f = w.clone() * ew.clone() - x.clone();
    let w1 = w.clone() + T::from_u64_prec(1, w.bits());
    let two = T::from_u64_prec(2, w.bits());
    let denom = ew * w1.clone() - (w.clone() + two.clone()) * f.clone() / (two * w1);
    f / denom
}

/// Halley step for `f(w) = w + ln w − ln x`, which never overflows.
fn halley_log_form<T: Real>(w: &T, x: &T) -> T {
    let f = w.clone() + w.ln() - x.ln();
    let winv = w.recip();
    let fp = T::from_u64_prec(1, w.bits()) + winv.clone();
    let fpp = -(winv.clone() * winv);
    let two = T::from_u64_prec(2, w.bits());
    f.clone() / (fp.clone() - f * fpp / (two * fp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::MpFloat;

    #[test]
    fn simple_values() {
        let ctx = PrecisionContext::double();
        assert_eq!(lambert_w0(&0.0, &ctx).unwrap(), 0.0);
        assert!((lambert_w0(&std::f64::consts::E, &ctx).unwrap() - 1.0).abs() < 1e-15);
        let w = lambert_w0(&(-1.0 / std::f64::consts::E), &ctx).unwrap();
        assert!((w + 1.0).abs() < 1e-7, "{w}");
        assert!(matches!(lambert_w0(&-0.4, &ctx), Err(ZetaError::Domain(_))));
    }

    #[test]
    fn omega_constant_mp() {
        // W(1) = Ω, the omega constant
        let ctx = PrecisionContext::new(60).unwrap();
        let one = MpFloat::from_u64_prec(1, ctx.bits());
        let w = lambert_w0(&one, &ctx).unwrap();
        let r = w.clone() * w.exp() - one;
        assert!(r.abs().to_f64() < 1e-65);
        assert!(crate::scalar::to_decimal_string(&w, 30).starts_with("0.567143290409783872999968662"));
    }

    #[test]
    fn residual_over_range() {
        let ctx = PrecisionContext::double();
        for &x in &[-0.36787, -0.36, -0.358690785322783, -0.3, -0.1, -1e-10, 1e-300, 1e-5, 0.5, 2.0, 3.0, 1e3, 1e100, 1e300] {
            let w: f64 = lambert_w0(&x, &ctx).unwrap();
            let back = w * w.exp();
            let rel = if x.abs() > 1e-300 { ((back - x) / x).abs() } else { (back - x).abs() };
            assert!(rel < 1e-13, "x={x} w={w} rel={rel}");
            assert!(w >= -1.0);
        }
    }

    #[test]
    fn large_mp_argument() {
        let ctx = PrecisionContext::new(40).unwrap();
        let x = MpFloat::parse_prec("1e5000", ctx.bits()).unwrap();
        let w = lambert_w0(&x, &ctx).unwrap();
        let lhs = w.clone() + w.ln();
        let rhs = x.ln();
        assert!(((lhs - rhs.clone()) / rhs).abs().to_f64() < 1e-45);
    }
}
