//! Solving runs of consecutive zeros into the cache.

use rayon::prelude::*;

use crate::error::{Result, ZetaError};
use crate::precision::PrecisionContext;
use crate::scalar::MpFloat;
use crate::solver::{seed_record, solve_zero_asymptotic, solve_zero_exact, Method, SolverConfig, ZeroRecord};
use crate::store::{ZeroStore, ASYMPTOTIC_CACHE_DIGITS};

/// Indices above this are only served by the Lambert seed.
pub const DEFAULT_INDEX_CAP: u64 = 1_000_000;

/// Solve one zero with the scalar suited to `digits`: doubles for the
/// asymptotic equation at 15 digits, MPFR otherwise.
pub fn solve_one(n: u64, method: Method, digits: u32, delta_schedule: Option<&[f64]>) -> Result<ZeroRecord> {
    if n == 0 {
        return Err(ZetaError::Domain("zero index must be >= 1".into()));
    }
    if method != Method::LambertSeed && n > DEFAULT_INDEX_CAP {
        return Err(ZetaError::Domain(format!("index {n} above the solving cap {DEFAULT_INDEX_CAP}")));
    }
    let use_f64 = digits <= 15 && method != Method::ExactEq;
    let ctx = if use_f64 { PrecisionContext::double() } else { PrecisionContext::new(digits)? };
    let mut cfg =
        if use_f64 { SolverConfig::for_context::<f64>(&ctx) } else { SolverConfig::for_context::<MpFloat>(&ctx) };
    if let Some(s) = delta_schedule {
        cfg.delta_schedule = s.to_vec();
    }
    match (method, use_f64) {
        (Method::LambertSeed, true) => seed_record::<f64>(n, &ctx),
        (Method::LambertSeed, false) => seed_record::<MpFloat>(n, &ctx),
        (Method::AsymptoticEq, true) => solve_zero_asymptotic::<f64>(n, &cfg, &ctx),
        (Method::AsymptoticEq, false) => solve_zero_asymptotic::<MpFloat>(n, &cfg, &ctx),
        (Method::ExactEq, _) => solve_zero_exact::<MpFloat>(n, &cfg, &ctx),
        (Method::Imported, _) => Err(ZetaError::Config("imported ordinates cannot be solved".into())),
    }
}

/// Digits a cache file for `method` solved at `digits` carries.
pub fn cache_digits(method: Method, digits: u32) -> Result<u32> {
    match method {
        Method::AsymptoticEq => Ok(ASYMPTOTIC_CACHE_DIGITS),
        Method::ExactEq => Ok(digits),
        other => Err(ZetaError::Config(format!("{other} ordinates are not cached"))),
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BatchSummary {
    pub requested: usize,
    pub already_cached: usize,
    pub solved: usize,
    pub failed: Vec<(u64, String)>,
    pub min_residual: Option<f64>,
    pub max_residual: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct BatchOptions {
    pub method: Method,
    pub digits: u32,
    pub jobs: usize,
    /// Rows solved between atomic rewrites of the cache file.
    pub checkpoint: usize,
    pub delta_schedule: Option<Vec<f64>>,
}

/// Solve every index of `lo..=hi` missing from the cache, checkpointing as it
/// goes. `progress` sees the number of rows done after each checkpoint.
pub fn run_batch(
    store: &ZeroStore,
    lo: u64,
    hi: u64,
    opts: &BatchOptions,
    mut progress: impl FnMut(usize, usize),
) -> Result<BatchSummary> {
    if lo == 0 || hi < lo {
        return Err(ZetaError::EmptyRange(format!("{lo}..={hi}")));
    }
    if hi > DEFAULT_INDEX_CAP {
        return Err(ZetaError::Domain(format!("index {hi} above the solving cap {DEFAULT_INDEX_CAP}")));
    }
    let digits = cache_digits(opts.method, opts.digits)?;
    let mut file = store.open(opts.method, digits)?;
    let missing = file.missing(lo, hi);
    let mut summary = BatchSummary {
        requested: (hi - lo + 1) as usize,
        already_cached: (hi - lo + 1) as usize - missing.len(),
        ..Default::default()
    };
    if missing.is_empty() {
        return Ok(summary);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| ZetaError::Config(e.to_string()))?;
    let schedule = opts.delta_schedule.as_deref();
    for chunk in missing.chunks(opts.checkpoint.max(1)) {
        let results: Vec<(u64, Result<ZeroRecord>)> =
            pool.install(|| chunk.par_iter().map(|&n| (n, solve_one(n, opts.method, opts.digits, schedule))).collect());
        for (n, r) in results {
            match r.and_then(|rec| file.insert(&rec).map(|_| rec)) {
                Ok(rec) => {
                    summary.solved += 1;
                    let r = rec.residual;
                    summary.min_residual = Some(summary.min_residual.map_or(r, |m| m.min(r)));
                    summary.max_residual = Some(summary.max_residual.map_or(r, |m| m.max(r)));
                }
                Err(e) => summary.failed.push((n, e.to_string())),
            }
        }
        store.save(&file)?;
        progress(summary.solved + summary.failed.len(), missing.len());
    }
    Ok(summary)
}
