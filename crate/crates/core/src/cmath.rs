//! Elementary functions on `Complex<T>` for any [`Real`] scalar.

use num_complex::Complex;

use crate::scalar::Real;

pub trait ComplexExt<T: Real> {
    fn abs_val(&self) -> T;
    fn arg_val(&self) -> T;
    fn exp_val(&self) -> Complex<T>;
    /// Principal logarithm, imaginary part in (-π, π].
    fn ln_val(&self) -> Complex<T>;
    fn sin_val(&self) -> Complex<T>;
    fn scaled(&self, k: &T) -> Complex<T>;
    fn bits(&self) -> u32;
}

impl<T: Real> ComplexExt<T> for Complex<T> {
    fn abs_val(&self) -> T {
        let a = self.re.abs();
        let b = self.im.abs();
        let (big, small) = if a > b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return big;
        }
        let r = small / big.clone();
        big * (T::one() + r.clone() * r).sqrt()
    }

    fn arg_val(&self) -> T {
        self.im.atan2(&self.re)
    }

    fn exp_val(&self) -> Complex<T> {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Complex::new(m.clone() * c, m * s)
    }

    fn ln_val(&self) -> Complex<T> {
        Complex::new(self.abs_val().ln(), self.arg_val())
    }

    fn sin_val(&self) -> Complex<T> {
        // sin(x+iy) = sin x cosh y + i cos x sinh y
        let (s, c) = self.re.sin_cos();
        let ey = self.im.exp();
        let eny = ey.recip();
        let two = T::from_u64_prec(2, self.bits());
        let ch = (ey.clone() + eny.clone()) / two.clone();
        let sh = (ey - eny) / two;
        Complex::new(s * ch, c * sh)
    }

    fn scaled(&self, k: &T) -> Complex<T> {
        Complex::new(self.re.clone() * k.clone(), self.im.clone() * k.clone())
    }

    fn bits(&self) -> u32 {
        self.re.bits().max(self.im.bits())
    }
}

/// Complex number with both parts at `bits` precision.
pub fn cplx<T: Real>(re: f64, im: f64, bits: u32) -> Complex<T> {
    Complex::new(T::from_f64_prec(re, bits), T::from_f64_prec(im, bits))
}

pub fn real_part<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}
