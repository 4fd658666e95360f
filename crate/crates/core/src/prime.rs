//! Prime counting from zeros through Riemann's explicit formula.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::cmath::ComplexExt;
use crate::error::{Result, ZetaError};
use crate::precision::PrecisionContext;
use crate::scalar::Real;
use crate::solver::ZeroRecord;
use crate::special::{exp_integral_ei, log_integral, ArithmeticFunctionTable};

/// Largest imaginary residue tolerated from a conjugate-pair sum.
pub const CONJUGATE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeReconstruction {
    pub xs: Vec<f64>,
    pub j_vals: Vec<f64>,
    pub pi_vals: Vec<f64>,
    pub psi_vals: Vec<f64>,
    pub zero_count: usize,
    pub pi_true: Vec<f64>,
    pub psi_true: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Series {
    Pi,
    Psi,
    J,
}

impl std::str::FromStr for Series {
    type Err = ZetaError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pi" => Ok(Series::Pi),
            "psi" => Ok(Series::Psi),
            "j" | "J" => Ok(Series::J),
            other => Err(ZetaError::Parse(format!("unknown series `{other}`"))),
        }
    }
}

fn ordinates<T: Real>(zeros: &[ZeroRecord], bits: u32) -> Result<Vec<T>> {
    let mut ys = zeros.iter().map(|r| r.value::<T>(bits)).collect::<Result<Vec<T>>>()?;
    ys.sort_by(|a, b| a.partial_cmp(b).expect("finite ordinates"));
    Ok(ys)
}

fn check_real<T: Real>(z: &Complex<T>, what: &str, x: f64) -> Result<T> {
    let scale = z.re.abs().to_f64().max(1.0);
    if z.im.abs().to_f64() > CONJUGATE_TOLERANCE * scale {
        return Err(ZetaError::Evaluation(format!(
            "{what} at x = {x}: conjugate pairs left an imaginary residue {}",
            z.im.to_f64()
        )));
    }
    Ok(z.re.clone())
}

/// `∫_x^∞ dt / (t(t²−1) log t)`, through `t = x eᵘ`.
pub fn j_tail(x: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(ZetaError::Domain(format!("tail integral needs x > 1, got {x}")));
    }
    let lx = x.ln();
    let f = |u: f64| {
        let l = lx + u;
        // t² − 1 = e^{2l} − 1
        1.0 / ((2.0 * l).exp_m1() * l)
    };
    // the integrand falls like e^{-2u}; past u = 30 it is below 1e-26
    Ok(quadrature::integrate(f, 0.0, 30.0, 1e-13).integral)
}

/// `Li(x) − Σ_ρ Ei(ρ log x) + ∫_x^∞ dt/(t(t²−1)log t) − log 2` over the
/// supplied zeros and their conjugates.
pub fn j_from_zeros<T: Real>(x: &T, zeros: &[ZeroRecord], ctx: &PrecisionContext) -> Result<T> {
    let xf = x.to_f64();
    if !(xf > 1.0) {
        return Err(ZetaError::Domain(format!("J needs x > 1, got {x}")));
    }
    let bits = ctx.bits();
    let lx = x.ln();
    let half = ctx.ratio::<T>(1, 2);
    let mut osc = Complex::new(T::zero(), T::zero());
    for y in ordinates::<T>(zeros, bits)? {
        let z = Complex::new(half.clone() * lx.clone(), y * lx.clone());
        let pair = exp_integral_ei(&z, ctx)? + exp_integral_ei(&z.conj(), ctx)?;
        osc = osc + pair;
    }
    let osc = check_real(&osc, "J", xf)?;
    let li = log_integral(x, ctx)?;
    let tail = T::from_f64_prec(j_tail(xf)?, bits);
    Ok(li - osc + tail - T::from_u64_prec(2, bits).ln())
}

/// `x − Σ_ρ x^ρ/ρ − log 2π − ½ log(1 − x⁻²)`.
pub fn psi_from_zeros<T: Real>(x: &T, zeros: &[ZeroRecord], ctx: &PrecisionContext) -> Result<T> {
    let xf = x.to_f64();
    if !(xf > 1.0) {
        return Err(ZetaError::Domain(format!("psi needs x > 1, got {x}")));
    }
    let bits = ctx.bits();
    let lx = x.ln();
    let half = ctx.ratio::<T>(1, 2);
    let mut osc = Complex::new(T::zero(), T::zero());
    for y in ordinates::<T>(zeros, bits)? {
        let rho = Complex::new(half.clone(), y);
        let xr = rho.scaled(&lx).exp_val();
        let rc = rho.conj();
        let xc = rc.scaled(&lx).exp_val();
        osc = osc + xr / rho + xc / rc;
    }
    let osc = check_real(&osc, "psi", xf)?;
    let one = T::from_u64_prec(1, bits);
    let inv2 = one.clone() / (x.clone() * x.clone());
    Ok(x.clone() - osc - T::ln_2pi(bits) - half * (one - inv2).ln())
}

/// `Σ_{n ≥ 1} μ(n)/n · J(x^{1/n})`, stopping at the first `x^{1/n} < 2`.
pub fn pi_from_j(x: f64, mut j: impl FnMut(f64) -> Result<f64>, tables: &ArithmeticFunctionTable) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(ZetaError::Domain(format!("pi needs x >= 2, got {x}")));
    }
    let mut sum = 0.0;
    let mut n = 1u64;
    loop {
        let r = x.powf(1.0 / n as f64);
        if r < 2.0 {
            break;
        }
        let mu = tables.mobius(n).ok_or(ZetaError::TableTooSmall { needed: n, limit: tables.limit() })?;
        if mu != 0 {
            sum += mu as f64 / n as f64 * j(r)?;
        }
        n += 1;
    }
    Ok(sum)
}

fn oracle_limit(x: f64, tables: &ArithmeticFunctionTable) -> Result<u64> {
    if !(x >= 0.0) {
        return Err(ZetaError::Domain(format!("oracle needs x >= 0, got {x}")));
    }
    let k = x.floor() as u64;
    if k > tables.limit() {
        return Err(ZetaError::TableTooSmall { needed: k, limit: tables.limit() });
    }
    Ok(k)
}

/// `π(x)` by counting sieve primes.
pub fn pi_oracle(x: f64, tables: &ArithmeticFunctionTable) -> Result<u64> {
    let k = oracle_limit(x, tables)?;
    Ok((2..=k).filter(|&n| tables.is_prime(n)).count() as u64)
}

/// `J(x) = Σ_{n ≤ x} Λ(n)/log n`, each prime power `p^m` contributing `1/m`.
pub fn j_oracle(x: f64, tables: &ArithmeticFunctionTable) -> Result<f64> {
    let k = oracle_limit(x, tables)?;
    Ok((2..=k).filter_map(|n| tables.prime_power(n)).map(|(_, m)| 1.0 / m as f64).sum())
}

/// `ψ(x) = Σ_{n ≤ x} Λ(n)`.
pub fn psi_oracle(x: f64, tables: &ArithmeticFunctionTable) -> Result<f64> {
    let k = oracle_limit(x, tables)?;
    Ok((2..=k).filter_map(|n| tables.von_mangoldt(n)).sum())
}

/// `k + ½` for integers `k` in `[lo, hi)`.
pub fn half_integer_grid(lo: u64, hi: u64) -> Vec<f64> {
    (lo..hi).map(|k| k as f64 + 0.5).collect()
}

/// `samples` evenly spaced abscissae over `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![lo],
        s => (0..s).map(|i| lo + (hi - lo) * i as f64 / (s - 1) as f64).collect(),
    }
}

/// Reconstruct `J`, `π` and `ψ` at `xs` from `zeros`, next to the sieve
/// values.
pub fn reconstruct(
    xs: &[f64],
    zeros: &[ZeroRecord],
    tables: &ArithmeticFunctionTable,
    ctx: &PrecisionContext,
) -> Result<PrimeReconstruction> {
    let mut out = PrimeReconstruction {
        xs: xs.to_vec(),
        j_vals: Vec::with_capacity(xs.len()),
        pi_vals: Vec::with_capacity(xs.len()),
        psi_vals: Vec::with_capacity(xs.len()),
        zero_count: zeros.len(),
        pi_true: Vec::with_capacity(xs.len()),
        psi_true: Vec::with_capacity(xs.len()),
    };
    for &x in xs {
        if !(x >= 2.0) {
            return Err(ZetaError::Domain(format!("reconstruction samples need x >= 2, got {x}")));
        }
        out.pi_true.push(pi_oracle(x, tables)? as f64);
        out.psi_true.push(psi_oracle(x, tables)?);
        out.j_vals.push(j_from_zeros::<f64>(&x, zeros, ctx)?);
        out.pi_vals.push(pi_from_j(x, |r| j_from_zeros::<f64>(&r, zeros, ctx), tables)?);
        out.psi_vals.push(psi_from_zeros::<f64>(&x, zeros, ctx)?);
    }
    Ok(out)
}

/// Both panels of the comparison: reconstructions from the first
/// `zero_count` Lambert seeds and from solved zeros.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureData {
    pub seed: PrimeReconstruction,
    pub solved: PrimeReconstruction,
}

pub fn reconstruct_figure(
    x_lo: f64,
    x_hi: f64,
    samples: usize,
    zero_count: usize,
    tables: &ArithmeticFunctionTable,
    ctx: &PrecisionContext,
) -> Result<FigureData> {
    if !(x_lo >= 2.0 && x_hi > x_lo) {
        return Err(ZetaError::Domain(format!("need 2 <= x_lo < x_hi, got [{x_lo}, {x_hi}]")));
    }
    if x_hi.floor() as u64 > tables.limit() {
        return Err(ZetaError::TableTooSmall { needed: x_hi.floor() as u64, limit: tables.limit() });
    }
    let xs = linear_grid(x_lo, x_hi, samples);
    let mut seeds = Vec::with_capacity(zero_count);
    let mut solved = Vec::with_capacity(zero_count);
    for n in 1..=zero_count as u64 {
        seeds.push(crate::batch::solve_one(n, crate::solver::Method::LambertSeed, 15, None)?);
        solved.push(crate::batch::solve_one(n, crate::solver::Method::AsymptoticEq, 15, None)?);
    }
    Ok(FigureData { seed: reconstruct(&xs, &seeds, tables, ctx)?, solved: reconstruct(&xs, &solved, tables, ctx)? })
}

impl PrimeReconstruction {
    /// `x,reconstructed,oracle` rows for one series.
    pub fn csv(&self, what: Series) -> String {
        let mut out = String::from("x,reconstructed,oracle\n");
        for i in 0..self.xs.len() {
            let (rec, truth) = match what {
                Series::Pi => (self.pi_vals[i], self.pi_true[i]),
                Series::Psi => (self.psi_vals[i], self.psi_true[i]),
                Series::J => (self.j_vals[i], f64::NAN),
            };
            out.push_str(&format!("{},{},{}\n", self.xs[i], rec, truth));
        }
        out
    }

    pub fn max_pi_deviation(&self) -> f64 {
        self.pi_vals.iter().zip(&self.pi_true).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}
