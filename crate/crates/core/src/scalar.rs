//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! Algorithms are written once against [`Real`] and run either in hardware
//! doubles (`f64`) or in MPFR-backed [`MpFloat`] at any working precision.
//! Precision travels with the value: binary operations on `MpFloat` round to
//! the larger of the two operand precisions, so constants built at low
//! precision (`zero()`, `one()`) never truncate a high-precision operand.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};
use std::sync::{OnceLock, RwLock};

use num_complex::Complex;
use num_traits::{Num, One, Zero};
use rug::float::{Constant, Round};
use rug::{Assign, Float, Rational};

use crate::error::{Result, ZetaError};

/// Floating point scalar with a (possibly variable) binary precision.
pub trait Real:
    Num
    + Clone
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    /// Largest precision the type can honour, `None` when unbounded.
    const MAX_BITS: Option<u32>;

    fn from_f64_prec(x: f64, bits: u32) -> Self;
    fn from_i64_prec(x: i64, bits: u32) -> Self;
    fn from_u64_prec(x: u64, bits: u32) -> Self;
    fn from_rational(r: &Rational, bits: u32) -> Self;
    fn parse_prec(s: &str, bits: u32) -> Result<Self>;

    fn pi(bits: u32) -> Self;
    fn euler_gamma(bits: u32) -> Self;
    fn ln_2pi(bits: u32) -> Self {
        (Self::pi(bits) * Self::from_u64_prec(2, bits)).ln()
    }

    /// Precision of this value in bits.
    fn bits(&self) -> u32;
    /// Copy rounded to `bits` (no-op for fixed-precision types).
    fn with_bits(&self, bits: u32) -> Self;

    fn to_f64(&self) -> f64;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    fn atan2(&self, x: &Self) -> Self;
    fn abs(&self) -> Self;
    fn floor(&self) -> Self;
    fn round(&self) -> Self;
    fn is_finite(&self) -> bool;
    fn powi(&self, n: i32) -> Self;

    fn sin(&self) -> Self {
        self.sin_cos().0
    }
    fn cos(&self) -> Self {
        self.sin_cos().1
    }
    fn atan(&self) -> Self {
        self.atan2(&Self::from_u64_prec(1, self.bits()))
    }
    fn recip(&self) -> Self {
        Self::from_u64_prec(1, self.bits()) / self.clone()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn signum_i(&self) -> i32 {
        match self.partial_cmp(&Self::zero()) {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => 0,
        }
    }
    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Unit roundoff at this value's precision.
    fn epsilon(&self) -> Self {
        let b = self.bits();
        Self::from_f64_prec(2f64.powi(1 - b as i32), b)
    }

    /// Natural log of a positive integer; implementations may cache.
    fn ln_u64(n: u64, bits: u32) -> Self {
        Self::from_u64_prec(n, bits).ln()
    }

    /// `(mantissa digits, decimal exponent)` with the value equal to
    /// `0.d1d2d3... × 10^exp`, rounded to `sig` significant digits.
    fn to_sci_digits(&self, sig: usize) -> (bool, String, i64);

    /// `Σ_{k=1}^{n_terms-1} k^{-s}`, the head of the Dirichlet series.
    fn dirichlet_head(s: &Complex<Self>, n_terms: u64) -> Complex<Self> {
        let bits = s.re.bits().max(s.im.bits());
        let mut acc = Complex::new(Self::from_u64_prec(1, bits), Self::zero());
        let neg_sigma = -s.re.clone();
        let neg_t = -s.im.clone();
        for k in 2..n_terms {
            let l = Self::ln_u64(k, bits);
            let m = (neg_sigma.clone() * l.clone()).exp();
            let (sn, cs) = (neg_t.clone() * l).sin_cos();
            acc.re += m.clone() * cs;
            acc.im += m * sn;
        }
        acc
    }
}

/// Decimal rendering of a real in positional notation with `sig` significant
/// digits (rounded to nearest).
pub fn to_decimal_string<T: Real>(x: &T, sig: usize) -> String {
    let sig = sig.max(1);
    let (neg, digits, exp) = x.to_sci_digits(sig);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if digits.chars().all(|c| c == '0') {
        out.push('0');
        return out;
    }
    if exp <= 0 {
        out.push_str("0.");
        for _ in 0..(-exp) {
            out.push('0');
        }
        out.push_str(&digits);
    } else {
        let e = exp as usize;
        if e >= digits.len() {
            out.push_str(&digits);
            for _ in digits.len()..e {
                out.push('0');
            }
        } else {
            out.push_str(&digits[..e]);
            out.push('.');
            out.push_str(&digits[e..]);
        }
    }
    out
}

/// Number of significant decimal digits in a plain decimal string.
pub fn significant_digits(s: &str) -> usize {
    let body = s.trim().trim_start_matches(['-', '+']);
    let mut seen_nonzero = false;
    let mut count = 0usize;
    let mut trailing_int_zeros = 0usize;
    let has_point = body.contains('.');
    for c in body.chars() {
        if c == '.' {
            continue;
        }
        if !c.is_ascii_digit() {
            return 0;
        }
        if c != '0' {
            seen_nonzero = true;
        }
        if seen_nonzero {
            count += 1;
        }
    }
    if !has_point {
        // integer strings: trailing zeros are not counted as significant
        for c in body.chars().rev() {
            if c == '0' {
                trailing_int_zeros += 1;
            } else {
                break;
            }
        }
        count = count.saturating_sub(trailing_int_zeros);
    }
    count
}

// ---------------------------------------------------------------------------
// f64

const LN_TABLE_BITS: u32 = 128;

/// `ln k` for k < table limit as an unevaluated double-double pair.
fn ln_table() -> &'static RwLock<Vec<(f64, f64)>> {
    static TABLE: OnceLock<RwLock<Vec<(f64, f64)>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![(0.0, 0.0), (0.0, 0.0)]))
}

fn ensure_ln_table(limit: usize) {
    {
        let t = ln_table().read().expect("ln table poisoned");
        if t.len() >= limit {
            return;
        }
    }
    let mut t = ln_table().write().expect("ln table poisoned");
    let start = t.len();
    if start >= limit {
        return;
    }
    let target = limit.max(start * 2);
    t.reserve(target - start);
    let mut f = Float::new(LN_TABLE_BITS);
    for k in start..target {
        f.assign(k as u64);
        f.ln_mut();
        let hi = f.to_f64();
        let lo = Float::with_val(LN_TABLE_BITS, &f - hi).to_f64();
        t.push((hi, lo));
    }
}

const TWO_PI_HI: f64 = std::f64::consts::TAU;
const TWO_PI_LO: f64 = 2.4492935982947064e-16;

/// `t·(hi+lo)` reduced to `(-π, π]` with about one ulp absolute error.
#[inline]
fn reduced_phase(t: f64, hi: f64, lo: f64) -> f64 {
    let p = t * hi;
    let e = t.mul_add(hi, -p);
    let k = (p / TWO_PI_HI).round();
    let r = (-k).mul_add(TWO_PI_HI, p);
    r - k * TWO_PI_LO + (e + t * lo)
}

impl Real for f64 {
    const MAX_BITS: Option<u32> = Some(53);

    fn from_f64_prec(x: f64, _bits: u32) -> Self {
        x
    }
    fn from_i64_prec(x: i64, _bits: u32) -> Self {
        x as f64
    }
    fn from_u64_prec(x: u64, _bits: u32) -> Self {
        x as f64
    }
    fn from_rational(r: &Rational, _bits: u32) -> Self {
        r.to_f64()
    }
    fn parse_prec(s: &str, _bits: u32) -> Result<Self> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| ZetaError::Parse(format!("invalid number `{s}`")))
    }
    fn pi(_bits: u32) -> Self {
        std::f64::consts::PI
    }
    fn euler_gamma(_bits: u32) -> Self {
        0.577_215_664_901_532_9
    }
    fn ln_2pi(_bits: u32) -> Self {
        1.837_877_066_409_345_5
    }
    fn bits(&self) -> u32 {
        53
    }
    fn with_bits(&self, _bits: u32) -> Self {
        *self
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn sin_cos(&self) -> (Self, Self) {
        f64::sin_cos(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn round(&self) -> Self {
        f64::round(*self)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    fn epsilon(&self) -> Self {
        f64::EPSILON
    }
    fn ln_u64(n: u64, _bits: u32) -> Self {
        (n as f64).ln()
    }
    fn to_sci_digits(&self, sig: usize) -> (bool, String, i64) {
        MpFloat::from(Float::with_val(64, *self)).to_sci_digits(sig)
    }

    fn dirichlet_head(s: &Complex<Self>, n_terms: u64) -> Complex<Self> {
        ensure_ln_table(n_terms as usize + 1);
        let table = ln_table().read().expect("ln table poisoned");
        let sigma = s.re;
        let t = s.im;
        let mut re = 1.0f64;
        let mut im = 0.0f64;
        // compensated summation keeps the O(sqrt N) head accurate to a few ulp
        let mut cre = 0.0f64;
        let mut cim = 0.0f64;
        for k in 2..n_terms as usize {
            let (hi, lo) = table[k];
            let m = (-sigma * hi).exp();
            let phase = -reduced_phase(t, hi, lo);
            let (sn, cs) = phase.sin_cos();
            let yr = m * cs - cre;
            let tr = re + yr;
            cre = (tr - re) - yr;
            re = tr;
            let yi = m * sn - cim;
            let ti = im + yi;
            cim = (ti - im) - yi;
            im = ti;
        }
        Complex::new(re, im)
    }
}

// ---------------------------------------------------------------------------
// MpFloat

/// MPFR float whose arithmetic rounds to the wider operand precision.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct MpFloat(pub Float);

impl MpFloat {
    pub fn new(bits: u32) -> Self {
        MpFloat(Float::new(bits))
    }
    pub fn inner(&self) -> &Float {
        &self.0
    }
    pub fn into_inner(self) -> Float {
        self.0
    }
}

impl From<Float> for MpFloat {
    fn from(f: Float) -> Self {
        MpFloat(f)
    }
}

impl fmt::Debug for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MpFloat({})", self.0)
    }
}

impl fmt::Display for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.0.prec() as f64 * std::f64::consts::LOG10_2).floor() as usize;
        f.write_str(&to_decimal_string(self, digits.max(1)))
    }
}

macro_rules! mp_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for MpFloat {
            type Output = MpFloat;
            fn $m(mut self, rhs: MpFloat) -> MpFloat {
                if self.0.prec() >= rhs.0.prec() {
                    $atr::$am(&mut self.0, &rhs.0);
                    self
                } else {
                    let p = rhs.0.prec();
                    MpFloat(Float::with_val(p, $tr::$m(&self.0, &rhs.0)))
                }
            }
        }
        impl<'a> $tr<&'a MpFloat> for MpFloat {
            type Output = MpFloat;
            fn $m(mut self, rhs: &'a MpFloat) -> MpFloat {
                if self.0.prec() >= rhs.0.prec() {
                    $atr::$am(&mut self.0, &rhs.0);
                    self
                } else {
                    let p = rhs.0.prec();
                    MpFloat(Float::with_val(p, $tr::$m(&self.0, &rhs.0)))
                }
            }
        }
        impl $atr for MpFloat {
            fn $am(&mut self, rhs: MpFloat) {
                if self.0.prec() < rhs.0.prec() {
                    self.0.set_prec_round(rhs.0.prec(), Round::Nearest);
                }
                $atr::$am(&mut self.0, &rhs.0);
            }
        }
    };
}

mp_binop!(Add, add, AddAssign, add_assign);
mp_binop!(Sub, sub, SubAssign, sub_assign);
mp_binop!(Mul, mul, MulAssign, mul_assign);
mp_binop!(Div, div, DivAssign, div_assign);

impl Rem for MpFloat {
    type Output = MpFloat;
    fn rem(self, rhs: MpFloat) -> MpFloat {
        let p = self.0.prec().max(rhs.0.prec());
        MpFloat(Float::with_val(p, &self.0 % &rhs.0))
    }
}

impl Neg for MpFloat {
    type Output = MpFloat;
    fn neg(self) -> MpFloat {
        MpFloat(-self.0)
    }
}

impl Zero for MpFloat {
    fn zero() -> Self {
        MpFloat(Float::new(1))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for MpFloat {
    fn one() -> Self {
        MpFloat(Float::with_val(1, 1))
    }
}

impl Num for MpFloat {
    type FromStrRadixErr = ZetaError;
    fn from_str_radix(s: &str, radix: u32) -> std::result::Result<Self, ZetaError> {
        let parsed = Float::parse_radix(s, radix as i32)
            .map_err(|e| ZetaError::Parse(format!("invalid number `{s}`: {e}")))?;
        Ok(MpFloat(Float::with_val(DEFAULT_PARSE_BITS, parsed)))
    }
}

const DEFAULT_PARSE_BITS: u32 = 256;

type LnCache = RwLock<Vec<(u32, Vec<Float>)>>;

fn mp_ln_cache() -> &'static LnCache {
    static CACHE: OnceLock<LnCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Vec::new()))
}

const MP_LN_CACHE_LIMIT: u64 = 1 << 20;

impl MpFloat {
    fn cached_ln(n: u64, bits: u32) -> Option<Float> {
        if n >= MP_LN_CACHE_LIMIT {
            return None;
        }
        let cache = mp_ln_cache().read().ok()?;
        let (_, v) = cache.iter().find(|(b, _)| *b == bits)?;
        v.get(n as usize).cloned()
    }

    /// Fill the log cache for `bits` up to `n` (exclusive).
    fn warm_ln(n: u64, bits: u32) {
        let n = n.min(MP_LN_CACHE_LIMIT) as usize;
        if let Ok(cache) = mp_ln_cache().read() {
            if let Some((_, v)) = cache.iter().find(|(b, _)| *b == bits) {
                if v.len() >= n {
                    return;
                }
            }
        }
        let mut cache = mp_ln_cache().write().expect("ln cache poisoned");
        if !cache.iter().any(|(b, _)| *b == bits) {
            // keep only a handful of precisions alive
            if cache.len() >= 6 {
                cache.remove(0);
            }
            cache.push((bits, vec![Float::new(bits), Float::new(bits)]));
        }
        let (_, v) = cache.iter_mut().find(|(b, _)| *b == bits).expect("present");
        let start = v.len();
        for k in start..n {
            let mut f = Float::with_val(bits, k as u64);
            f.ln_mut();
            v.push(f);
        }
    }
}

impl Real for MpFloat {
    const MAX_BITS: Option<u32> = None;

    fn from_f64_prec(x: f64, bits: u32) -> Self {
        MpFloat(Float::with_val(bits, x))
    }
    fn from_i64_prec(x: i64, bits: u32) -> Self {
        MpFloat(Float::with_val(bits, x))
    }
    fn from_u64_prec(x: u64, bits: u32) -> Self {
        MpFloat(Float::with_val(bits, x))
    }
    fn from_rational(r: &Rational, bits: u32) -> Self {
        MpFloat(Float::with_val(bits, r))
    }
    fn parse_prec(s: &str, bits: u32) -> Result<Self> {
        let parsed = Float::parse(s.trim())
            .map_err(|e| ZetaError::Parse(format!("invalid number `{s}`: {e}")))?;
        Ok(MpFloat(Float::with_val(bits, parsed)))
    }
    fn pi(bits: u32) -> Self {
        MpFloat(Float::with_val(bits, Constant::Pi))
    }
    fn euler_gamma(bits: u32) -> Self {
        MpFloat(Float::with_val(bits, Constant::Euler))
    }
    fn bits(&self) -> u32 {
        self.0.prec()
    }
    fn with_bits(&self, bits: u32) -> Self {
        MpFloat(Float::with_val(bits, &self.0))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn exp(&self) -> Self {
        MpFloat(self.0.clone().exp())
    }
    fn ln(&self) -> Self {
        MpFloat(self.0.clone().ln())
    }
    fn sqrt(&self) -> Self {
        MpFloat(self.0.clone().sqrt())
    }
    fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.0.clone().sin_cos(Float::new(self.0.prec()));
        (MpFloat(s), MpFloat(c))
    }
    fn atan2(&self, x: &Self) -> Self {
        let p = self.0.prec().max(x.0.prec());
        MpFloat(Float::with_val(p, self.0.atan2_ref(&x.0)))
    }
    fn abs(&self) -> Self {
        MpFloat(self.0.clone().abs())
    }
    fn floor(&self) -> Self {
        MpFloat(self.0.clone().floor())
    }
    fn round(&self) -> Self {
        MpFloat(self.0.clone().round())
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn powi(&self, n: i32) -> Self {
        MpFloat(Float::with_val(self.0.prec(), rug::ops::Pow::pow(&self.0, n)))
    }
    fn ln_u64(n: u64, bits: u32) -> Self {
        match Self::cached_ln(n, bits) {
            Some(f) => MpFloat(f),
            None => MpFloat(Float::with_val(bits, n).ln()),
        }
    }
    fn to_sci_digits(&self, sig: usize) -> (bool, String, i64) {
        if self.0.is_zero() {
            return (self.0.is_sign_negative(), "0".repeat(sig), 0);
        }
        let (neg, digits, exp) = self.0.to_sign_string_exp_round(10, Some(sig), Round::Nearest);
        (neg, digits, exp.unwrap_or(0) as i64)
    }

    fn dirichlet_head(s: &Complex<Self>, n_terms: u64) -> Complex<Self> {
        let bits = s.re.bits().max(s.im.bits());
        Self::warm_ln(n_terms, bits);
        let cache = mp_ln_cache().read().expect("ln cache poisoned");
        let logs = cache
            .iter()
            .find(|(b, _)| *b == bits)
            .map(|(_, v)| v.as_slice())
            .unwrap_or(&[]);
        let neg_sigma = Float::with_val(bits, -&s.re.0);
        let neg_t = Float::with_val(bits, -&s.im.0);
        let mut re = Float::with_val(bits, 1);
        let mut im = Float::with_val(bits, 0);
        let mut m = Float::new(bits);
        let mut ph = Float::new(bits);
        let mut cs = Float::new(bits);
        for k in 2..n_terms {
            let owned;
            let l: &Float = match logs.get(k as usize) {
                Some(l) => l,
                None => {
                    owned = Float::with_val(bits, k).ln();
                    &owned
                }
            };
            m.assign(&neg_sigma * l);
            m.exp_mut();
            ph.assign(&neg_t * l);
            ph.sin_cos_mut(&mut cs);
            cs *= &m;
            ph *= &m;
            re += &cs;
            im += &ph;
        }
        Complex::new(MpFloat(re), MpFloat(im))
    }
}

/// Convert between scalar types through a decimal-exact path.
pub fn convert<A: Real, B: Real>(x: &A, bits: u32) -> B {
    let digits = ((x.bits() as f64) * std::f64::consts::LOG10_2).ceil() as usize + 3;
    let (neg, ds, exp) = x.to_sci_digits(digits);
    let s = format!("{}0.{}e{}", if neg { "-" } else { "" }, ds, exp);
    B::parse_prec(&s, bits).unwrap_or_else(|_| B::from_f64_prec(x.to_f64(), bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mp_ops_use_wider_precision() {
        let a = MpFloat::from_u64_prec(1, 300) / MpFloat::from_u64_prec(3, 300);
        let z = MpFloat::zero();
        let s = z + a.clone();
        assert_eq!(s.bits(), 300);
        let mut acc = MpFloat::zero();
        acc += a.clone();
        assert_eq!(acc.bits(), 300);
        assert_eq!(acc, a);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal_string(&14.134725141734694f64, 11), "14.134725142");
        assert_eq!(to_decimal_string(&0.00047f64, 2), "0.00047");
        assert_eq!(to_decimal_string(&1234.0f64, 2), "1200");
        let x = MpFloat::parse_prec("279.2292509277451892284", 200).unwrap();
        assert_eq!(to_decimal_string(&x, 10), "279.2292509");
        assert_eq!(significant_digits("279.2292509"), 10);
        assert_eq!(significant_digits("0.00047"), 2);
        assert_eq!(significant_digits("14.10"), 4);
    }

    #[test]
    fn f64_head_matches_mp_head() {
        let s = Complex::new(0.5, 74920.827498994);
        let h = f64::dirichlet_head(&s, 400);
        let sm = Complex::new(
            MpFloat::from_f64_prec(0.5, 200),
            MpFloat::from_f64_prec(74920.827498994, 200),
        );
        let hm = MpFloat::dirichlet_head(&sm, 400);
        assert!((h.re - hm.re.to_f64()).abs() < 1e-13, "{} {}", h.re, hm.re);
        assert!((h.im - hm.im.to_f64()).abs() < 1e-13);
    }

    #[test]
    fn convert_roundtrip() {
        let x = MpFloat::parse_prec("1419.4224809459956864659890380799168192321006", 200).unwrap();
        let y: f64 = convert(&x, 53);
        assert!((y - 1419.4224809459957).abs() < 1e-12);
        let z: MpFloat = convert(&1.5f64, 100);
        assert_eq!(z.to_f64(), 1.5);
    }
}
