//! Normalized zero spacings and their pair correlation against GUE.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};
use crate::solver::ZeroRecord;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacingSeries {
    /// First index `M`.
    pub m: u64,
    /// Last index `N`.
    pub n: u64,
    /// `δ_k` for `k = M..=N`.
    pub deltas: Vec<f64>,
}

impl SpacingSeries {
    pub fn delta(&self, k: u64) -> f64 {
        self.deltas[(k - self.m) as usize]
    }

    pub fn mean(&self) -> f64 {
        self.deltas.iter().sum::<f64>() / self.deltas.len() as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationBin {
    pub alpha: f64,
    pub beta: f64,
    pub empirical: f64,
    pub gue: f64,
    pub x_mid: f64,
}

/// Ordinates `y_M ..= y_{N+1}` as doubles, checking coverage and order.
fn ordinates(zeros: &[ZeroRecord], m: u64, n: u64) -> Result<Vec<f64>> {
    if n <= m {
        return Err(ZetaError::EmptyRange(format!("need N > M, got M={m}, N={n}")));
    }
    let mut ys = vec![f64::NAN; (n - m + 2) as usize];
    for r in zeros {
        if r.n >= m && r.n <= n + 1 {
            ys[(r.n - m) as usize] = r.y_f64();
        }
    }
    if let Some(i) = ys.iter().position(|y| y.is_nan()) {
        let first = m + i as u64;
        let last = first + ys[i..].iter().take_while(|y| y.is_nan()).count() as u64 - 1;
        return Err(ZetaError::Gap { first, last });
    }
    for (i, w) in ys.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(ZetaError::NotIncreasing(m + i as u64 + 1));
        }
    }
    Ok(ys)
}

/// `δ_k = log(y_k/2π)(y_{k+1} − y_k)/2π` for `k = M..=N`.
pub fn normalized_spacings(zeros: &[ZeroRecord], m: u64, n: u64) -> Result<SpacingSeries> {
    let ys = ordinates(zeros, m, n)?;
    let deltas = ys.windows(2).map(|w| (w[0] / TWO_PI).ln() * (w[1] - w[0]) / TWO_PI).collect();
    Ok(SpacingSeries { m, n, deltas })
}

/// Montgomery's normalization: every spacing scaled by the single factor
/// `log(T/2π)/2π` instead of the local density.
pub fn global_spacings(zeros: &[ZeroRecord], m: u64, n: u64, t: f64) -> Result<SpacingSeries> {
    if !(t > TWO_PI) {
        return Err(ZetaError::Domain(format!("global normalization needs T > 2π, got {t}")));
    }
    let ys = ordinates(zeros, m, n)?;
    let k = (t / TWO_PI).ln() / TWO_PI;
    Ok(SpacingSeries { m, n, deltas: ys.windows(2).map(|w| k * (w[1] - w[0])).collect() })
}

/// GUE pair density `1 − (sin πu / πu)²`.
pub fn gue_density(u: f64) -> f64 {
    let x = std::f64::consts::PI * u;
    if x.abs() < 1e-4 {
        // 1 − sinc² = x²/3 − 2x⁴/45 + …
        let x2 = x * x;
        return x2 / 3.0 - 2.0 * x2 * x2 / 45.0;
    }
    let s = x.sin() / x;
    1.0 - s * s
}

/// Bin average `(1/(β−α)) ∫_α^β (1 − sin²(πu)/(πu)²) du`.
pub fn gue_rhs(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha >= 0.0 && beta > alpha) {
        return Err(ZetaError::Domain(format!("need 0 <= alpha < beta, got ({alpha}, {beta})")));
    }
    let out = quadrature::integrate(gue_density, alpha, beta, 1e-10 * (beta - alpha));
    Ok(out.integral / (beta - alpha))
}

/// Pair count over `(α, β]` normalized by `(N − M)(β − α)`.
pub fn pair_correlation(s: &SpacingSeries, alpha: f64, beta: f64) -> Result<CorrelationBin> {
    if s.n <= s.m {
        return Err(ZetaError::EmptyRange(format!("need N > M, got M={}, N={}", s.m, s.n)));
    }
    if !(alpha >= 0.0 && beta > alpha) {
        return Err(ZetaError::Domain(format!("need 0 <= alpha < beta, got ({alpha}, {beta})")));
    }
    let len = s.deltas.len();
    let mut count = 0u64;
    // pairs M ≤ m < n ≤ N at distance δ_{m+1} + … + δ_n
    for i in 0..len - 1 {
        let mut d = 0.0;
        for &dk in &s.deltas[i + 1..] {
            d += dk;
            if d > beta {
                break;
            }
            if d > alpha {
                count += 1;
            }
        }
    }
    Ok(CorrelationBin {
        alpha,
        beta,
        empirical: count as f64 / ((s.n - s.m) as f64 * (beta - alpha)),
        gue: gue_rhs(alpha, beta)?,
        x_mid: 0.5 * (alpha + beta),
    })
}

/// Bin edges `α_0, α_0 + step, …` for bins `(α, α + step]` with the last
/// left edge at `x_max` (the binning `α = 0, 0.05, …, 3`).
pub fn bin_edges(step: f64, x_max: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && x_max >= 0.0) {
        return Err(ZetaError::Domain(format!("bad binning step={step}, x_max={x_max}")));
    }
    let bins = (x_max / step + 1e-9).floor() as usize + 1;
    Ok((0..=bins).map(|i| i as f64 * step).collect())
}

/// All bins of consecutive `edges` in one pass over the pairs. Agrees
/// exactly with [`pair_correlation`] bin by bin.
pub fn correlation_bins(s: &SpacingSeries, edges: &[f64]) -> Result<Vec<CorrelationBin>> {
    if s.n <= s.m {
        return Err(ZetaError::EmptyRange(format!("need N > M, got M={}, N={}", s.m, s.n)));
    }
    if edges.len() < 2 || edges[0] < 0.0 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(ZetaError::Domain("bin edges must be nonnegative and increasing".into()));
    }
    let top = *edges.last().expect("nonempty");
    let mut counts = vec![0u64; edges.len() - 1];
    let len = s.deltas.len();
    for i in 0..len - 1 {
        let mut d = 0.0;
        for &dk in &s.deltas[i + 1..] {
            d += dk;
            if d > top {
                break;
            }
            // bin k holds edges[k] < d <= edges[k+1]
            let k = edges.partition_point(|&e| e < d);
            if k >= 1 {
                counts[k - 1] += 1;
            }
        }
    }
    let norm = (s.n - s.m) as f64;
    edges
        .windows(2)
        .zip(counts)
        .map(|(w, c)| {
            Ok(CorrelationBin {
                alpha: w[0],
                beta: w[1],
                empirical: c as f64 / (norm * (w[1] - w[0])),
                gue: gue_rhs(w[0], w[1])?,
                x_mid: 0.5 * (w[0] + w[1]),
            })
        })
        .collect()
}

/// Root mean square and maximum of `empirical − gue`.
pub fn deviation(bins: &[CorrelationBin]) -> (f64, f64) {
    let mut sq = 0.0;
    let mut max: f64 = 0.0;
    for b in bins {
        let d = b.empirical - b.gue;
        sq += d * d;
        max = max.max(d.abs());
    }
    ((sq / bins.len().max(1) as f64).sqrt(), max)
}
