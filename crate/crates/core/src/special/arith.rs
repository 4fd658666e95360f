use crate::error::{Result, ZetaError};

/// Default cap on sieve size.
pub const DEFAULT_SIEVE_CAP: u64 = 10_000_000;

/// Möbius and von Mangoldt values for `1 ≤ n ≤ limit`.
#[derive(Clone, Debug)]
pub struct ArithmeticFunctionTable {
    limit: u64,
    mobius: Vec<i8>,
    /// `p` when `n = p^m`, otherwise 0.
    prime_power_base: Vec<u32>,
}

impl ArithmeticFunctionTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn mobius(&self, n: u64) -> Option<i8> {
        if n == 0 || n > self.limit {
            return None;
        }
        Some(self.mobius[n as usize])
    }

    /// `Λ(n)`.
    pub fn von_mangoldt(&self, n: u64) -> Option<f64> {
        if n == 0 || n > self.limit {
            return None;
        }
        let p = self.prime_power_base[n as usize];
        Some(if p == 0 { 0.0 } else { (p as f64).ln() })
    }

    /// `Some((p, m))` when `n = p^m` with `m ≥ 1`.
    pub fn prime_power(&self, n: u64) -> Option<(u64, u32)> {
        if n == 0 || n > self.limit {
            return None;
        }
        let p = self.prime_power_base[n as usize] as u64;
        if p == 0 {
            return None;
        }
        let mut m = 0;
        let mut k = n;
        while k > 1 {
            k /= p;
            m += 1;
        }
        Some((p, m))
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.prime_power_base[n as usize] as u64 == n
    }
}

/// Sieve `μ` and `Λ` up to `limit` with the default memory cap.
pub fn build_arithmetic_tables(limit: u64) -> Result<ArithmeticFunctionTable> {
    build_arithmetic_tables_capped(limit, DEFAULT_SIEVE_CAP)
}

pub fn build_arithmetic_tables_capped(limit: u64, cap: u64) -> Result<ArithmeticFunctionTable> {
    if limit < 2 {
        return Err(ZetaError::Domain(format!("sieve limit must be >= 2, got {limit}")));
    }
    if limit > cap || limit >= u32::MAX as u64 {
        return Err(ZetaError::Resource(format!("sieve limit {limit} exceeds cap {cap}")));
    }
    let n = limit as usize;
    // smallest prime factor
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            if p > si || (p as usize) * i > n {
                break;
            }
            spf[p as usize * i] = p;
        }
    }
    let mut mobius = vec![0i8; n + 1];
    let mut base = vec![0u32; n + 1];
    mobius[1] = 1;
    for i in 2..=n {
        let p = spf[i] as usize;
        let q = i / p;
        mobius[i] = if q.is_multiple_of(p) { 0 } else { -mobius[q] };
        if q == 1 || base[q] as usize == p {
            base[i] = p as u32;
        }
    }
    Ok(ArithmeticFunctionTable { limit, mobius, prime_power_base: base })
}
