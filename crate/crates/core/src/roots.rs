//! Bracketing root finder (Brent–Dekker) over any [`Real`].

use crate::error::{Result, ZetaError};
use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct BrentOutcome<T> {
    pub root: T,
    pub value: T,
    /// Final bracket `[lo, hi]`, with a sign change.
    pub lo: T,
    pub hi: T,
    pub evaluations: usize,
}

/// Find a sign change of `f` in `[a, b]` to absolute tolerance `tol`.
///
/// `fa` and `fb` must be `f(a)` and `f(b)` and differ in sign (or one is zero).
pub fn brent<T, F>(mut f: F, a: T, b: T, fa: T, fb: T, tol: &T, max_iter: usize) -> Result<BrentOutcome<T>>
where
    T: Real,
    F: FnMut(&T) -> Result<T>,
{
    if fa.signum_i() * fb.signum_i() > 0 {
        return Err(ZetaError::Evaluation(format!("brent: no sign change on [{a}, {b}]")));
    }
    let two = T::from_u64_prec(2, a.bits());
    let three = T::from_u64_prec(3, a.bits());
    let half = T::from_u64_prec(1, a.bits()) / two.clone();
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let mut c = a.clone();
    let mut fc = fa.clone();
    let mut d = b.clone() - a.clone();
    let mut e = d.clone();
    let eps = a.epsilon();
    let mut evaluations = 0;
    for _ in 0..max_iter {
        if fb.signum_i() * fc.signum_i() > 0 {
            c = a.clone();
            fc = fa.clone();
            d = b.clone() - a.clone();
            e = d.clone();
        }
        if fc.abs() < fb.abs() {
            a = b.clone();
            b = c.clone();
            c = a.clone();
            fa = fb.clone();
            fb = fc.clone();
            fc = fa.clone();
        }
        let tol1 = two.clone() * eps.clone() * b.abs() + half.clone() * tol.clone();
        let xm = half.clone() * (c.clone() - b.clone());
        if xm.abs() <= tol1 || fb.is_zero() {
            let (lo, hi) = if b < c { (b.clone(), c) } else { (c, b.clone()) };
            return Ok(BrentOutcome { root: b, value: fb, lo, hi, evaluations });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb.clone() / fa.clone();
            let (mut p, mut q);
            if a == c {
                p = two.clone() * xm.clone() * s.clone();
                q = T::from_u64_prec(1, a.bits()) - s;
            } else {
                let qq = fa.clone() / fc.clone();
                let r = fb.clone() / fc.clone();
                let one = T::from_u64_prec(1, a.bits());
                p = s.clone()
                    * (two.clone() * xm.clone() * qq.clone() * (qq.clone() - r.clone())
                        - (b.clone() - a.clone()) * (r.clone() - one.clone()));
                q = (qq - one.clone()) * (r - one.clone()) * (s - one);
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let lim1 = three.clone() * xm.clone() * q.clone() - (tol1.clone() * q.clone()).abs();
            let lim2 = (e.clone() * q.clone()).abs();
            if two.clone() * p.clone() < lim1.min_of(lim2) {
                e = d.clone();
                d = p / q;
            } else {
                d = xm.clone();
                e = d.clone();
            }
        } else {
            d = xm.clone();
            e = d.clone();
        }
        a = b.clone();
        fa = fb.clone();
        if d.abs() > tol1 {
            b = b + d.clone();
        } else if xm > T::zero() {
            b = b + tol1;
        } else {
            b = b - tol1;
        }
        fb = f(&b)?;
        evaluations += 1;
    }
    Err(ZetaError::RootFinder(max_iter))
}
