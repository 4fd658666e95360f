//! Exact Bernoulli numbers and the coefficient sequences derived from them.
//!
//! All tables are computed once in exact rational arithmetic and extended on
//! demand under a write lock; readers only ever see fully built prefixes.

use std::sync::{OnceLock, RwLock};

use rug::{Integer, Rational};

use crate::scalar::Real;

#[derive(Default)]
struct Tables {
    /// `B_{2k}`, k = 0, 1, …
    plain: Vec<Rational>,
    /// `B_{2k} / (2k (2k-1))`, k ≥ 1 (index 0 unused, set to 0).
    stirling: Vec<Rational>,
    /// `c_{k+1} / c_k` with `c_k = B_{2k}/(2k)!`, index k ≥ 1.
    em_ratio: Vec<Rational>,
    stirling_f64: Vec<f64>,
    em_ratio_f64: Vec<f64>,
}

fn tables() -> &'static RwLock<Tables> {
    static T: OnceLock<RwLock<Tables>> = OnceLock::new();
    T.get_or_init(|| RwLock::new(Tables::default()))
}

/// Even-index Bernoulli numbers `B_0, B_2, …, B_{2(count-1)}`, extending
/// `prefix` in place.
fn extend_even(out: &mut Vec<Rational>, count: usize) {
    // Σ_{k=0}^{n} C(2n+1, 2k) B_{2k} = (2n+1)/2
    if out.is_empty() {
        out.push(Rational::from(1));
    }
    for n in out.len()..count {
        let m = 2 * n as u64 + 1;
        let mut acc = Rational::from((m, 2u64));
        let mut binom = Integer::from(1);
        for (k, b) in out.iter().enumerate() {
            if k > 0 {
                let j = 2 * k as u64;
                binom *= (m - j + 2) * (m - j + 1);
                binom /= j * (j - 1);
            }
            acc -= Rational::from(&binom) * b;
        }
        out.push(acc / Rational::from(m));
    }
}

fn ensure(count: usize) {
    {
        let t = tables().read().expect("bernoulli cache poisoned");
        if t.plain.len() > count {
            return;
        }
    }
    let mut t = tables().write().expect("bernoulli cache poisoned");
    if t.plain.len() > count {
        return;
    }
    let target = (count + 1).max(2 * t.plain.len()).max(16);
    extend_even(&mut t.plain, target);
    let start = t.stirling.len();
    for k in start..target {
        if k == 0 {
            t.stirling.push(Rational::new());
            continue;
        }
        let d = (2 * k as u64) * (2 * k as u64 - 1);
        let v = &t.plain[k] / Rational::from(d);
        t.stirling.push(v);
    }
    let start = t.em_ratio.len();
    for k in start..target - 1 {
        if k == 0 {
            t.em_ratio.push(Rational::new());
            continue;
        }
        // c_{k+1}/c_k = B_{2k+2} / (B_{2k} (2k+1)(2k+2))
        let d = (2 * k as u64 + 1) * (2 * k as u64 + 2);
        let v = Rational::from(&t.plain[k + 1] / &t.plain[k]) / Rational::from(d);
        t.em_ratio.push(v);
    }
    let sf: Vec<f64> = t.stirling.iter().map(|r| r.to_f64()).collect();
    let ef: Vec<f64> = t.em_ratio.iter().map(|r| r.to_f64()).collect();
    t.stirling_f64 = sf;
    t.em_ratio_f64 = ef;
}

/// Plain `B_{2k}` for `k = 0..count`.
pub fn bernoulli_even(count: usize) -> Vec<Rational> {
    ensure(count);
    tables().read().expect("bernoulli cache poisoned").plain[..count].to_vec()
}

/// `B_{2k}/(2k(2k-1))` for `k = 1..=count` as `T` (index 0 of the result is k = 1).
pub fn stirling_coefficients<T: Real>(count: usize, bits: u32) -> Vec<T> {
    ensure(count + 1);
    let t = tables().read().expect("bernoulli cache poisoned");
    if T::MAX_BITS.is_some() {
        t.stirling_f64[1..=count].iter().map(|&x| T::from_f64_prec(x, bits)).collect()
    } else {
        t.stirling[1..=count].iter().map(|r| T::from_rational(r, bits)).collect()
    }
}

/// Ratios `c_{k+1}/c_k` of `c_k = B_{2k}/(2k)!` for `k = 1..=count`.
pub fn em_ratios<T: Real>(count: usize, bits: u32) -> Vec<T> {
    ensure(count + 2);
    let t = tables().read().expect("bernoulli cache poisoned");
    if T::MAX_BITS.is_some() {
        t.em_ratio_f64[1..=count].iter().map(|&x| T::from_f64_prec(x, bits)).collect()
    } else {
        t.em_ratio[1..=count].iter().map(|r| T::from_rational(r, bits)).collect()
    }
}
