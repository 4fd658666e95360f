//! Command-line front end: solve zeros, keep them in a cache, and run the
//! statistics and prime-counting experiments on them.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;
use zeta_zeros::audit::audit;
use zeta_zeros::batch::{cache_digits, run_batch, solve_one, BatchOptions};
use zeta_zeros::counting::{count_zeros_smooth, gram_point, CountVariant};
use zeta_zeros::prime::{half_integer_grid, linear_grid, reconstruct, Series};
use zeta_zeros::scalar::to_decimal_string;
use zeta_zeros::solver::{Method, ZeroRecord};
use zeta_zeros::special::build_arithmetic_tables;
use zeta_zeros::statistics::{bin_edges, correlation_bins, global_spacings, normalized_spacings};
use zeta_zeros::store::{read_ordinates, ZeroStore};
use zeta_zeros::{MpFloat, PrecisionContext, ZetaError};

use config::{check_digits, RunConfig, CACHE_ENV, DEFAULT_CACHE_DIR};
use output::{num, Format, Table};

#[derive(Parser, Debug)]
#[command(name = "zeta-zeros", version, about = "Riemann zeta zeros from transcendental equations")]
struct Cli {
    /// Cache directory.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache: Option<PathBuf>,
    /// TOML file with digits, delta_schedule, n_range, output_format, cache_path.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the n-th zero.
    Zero {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        digits: Option<u32>,
        #[arg(long, default_value = "asymptotic", value_parser = parse_method)]
        method: Method,
        /// Do not write the result to the cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Solve every uncached zero in a range.
    Batch {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n_lo: Option<u64>,
        n_hi: Option<u64>,
        #[arg(long, default_value = "asymptotic", value_parser = parse_method)]
        method: Method,
        #[arg(long)]
        digits: Option<u32>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Zeros solved between cache rewrites.
        #[arg(long, default_value_t = 2000)]
        checkpoint: usize,
        /// Report progress on stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Pair correlation of normalized spacings against GUE.
    Gue {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        n: u64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Left edge of the last bin.
        #[arg(long, default_value_t = 3.0)]
        x_max: f64,
        /// External ordinate file, one per line.
        #[arg(long)]
        import: Option<PathBuf>,
        /// Index of the zero before the first imported line.
        #[arg(long, default_value_t = 0)]
        offset: u64,
        /// Normalize by the single factor log(T/2π) instead of the local density.
        #[arg(long)]
        global: Option<f64>,
    },
    /// Prime counting reconstructed from zeros.
    Prime {
        x_lo: f64,
        x_hi: f64,
        #[arg(long = "zeros", default_value_t = 50)]
        zero_count: u64,
        #[arg(long, default_value = "pi", value_parser = parse_series)]
        what: Series,
        /// Use Lambert seeds instead of solved ordinates.
        #[arg(long)]
        seed_ordinates: bool,
        /// Evenly spaced samples instead of the half-integer grid.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Residuals of both equations at cached ordinates.
    Audit {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n_lo: u64,
        n_hi: u64,
        #[arg(long, default_value_t = 1e-9)]
        delta: f64,
        /// Round ordinates to this many decimals first.
        #[arg(long)]
        decimals: Option<u32>,
        /// Working digits of the evaluation.
        #[arg(long, default_value_t = 30)]
        digits: u32,
    },
    /// Gram point g_n.
    Gram {
        n: u64,
        #[arg(long)]
        digits: Option<u32>,
    },
    /// Zero counting functions at height T.
    Count {
        t: f64,
        #[arg(long, value_parser = parse_variant)]
        variant: Option<CountVariant>,
    },
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: ZetaError| e.to_string())
}

fn parse_series(s: &str) -> Result<Series, String> {
    s.parse().map_err(|e: ZetaError| e.to_string())
}

fn parse_variant(s: &str) -> Result<CountVariant, String> {
    s.parse().map_err(|e: ZetaError| e.to_string())
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<ZetaError> for Failure {
    fn from(e: ZetaError) -> Self {
        match e {
            ZetaError::Domain(_) | ZetaError::EmptyRange(_) | ZetaError::Config(_) | ZetaError::Parse(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Numeric(other.to_string()),
        }
    }
}

struct Env {
    store: ZeroStore,
    format: Format,
    config: RunConfig,
}

impl Env {
    fn digits(&self, flag: Option<u32>) -> Result<u32, Failure> {
        let d = flag.or(self.config.digits).unwrap_or(15);
        check_digits(d)?;
        Ok(d)
    }
}

fn record_table(recs: &[ZeroRecord]) -> Table {
    let mut t = Table::new(vec!["n", "y", "digits_certified", "method", "residual"]);
    for r in recs {
        t.push(vec![
            Value::from(r.n),
            Value::from(r.y.clone()),
            Value::from(r.digits_certified),
            Value::from(r.method.as_str()),
            num(r.residual),
        ]);
    }
    t
}

fn cmd_zero(env: &Env, n: u64, digits: Option<u32>, method: Method, no_cache: bool) -> Result<String, Failure> {
    let digits = env.digits(digits)?;
    let rec = solve_one(n, method, digits, env.config.delta_schedule.as_deref())?;
    if !no_cache {
        if let Ok(d) = cache_digits(method, digits) {
            let mut file = env.store.open(method, d)?;
            match file.insert(&rec) {
                Ok(true) => env.store.save(&file)?,
                Ok(false) => {}
                Err(e) => eprintln!("not cached: {e}"),
            }
        }
    }
    Ok(record_table(&[rec]).render(env.format))
}

#[allow(clippy::too_many_arguments)]
fn cmd_batch(
    env: &Env,
    lo: Option<u64>,
    hi: Option<u64>,
    method: Method,
    digits: Option<u32>,
    jobs: usize,
    checkpoint: usize,
    progress: bool,
) -> Result<String, Failure> {
    let (lo, hi) = match (lo, hi, env.config.n_range) {
        (Some(lo), Some(hi), _) => (lo, hi),
        (None, None, Some(r)) => r,
        _ => return Err(Failure::Usage("batch needs N_LO and N_HI (or n_range in the config)".into())),
    };
    if hi < lo {
        return Err(Failure::Usage(format!("empty range {lo}..={hi}")));
    }
    let opts = BatchOptions {
        method,
        digits: env.digits(digits)?,
        jobs,
        checkpoint,
        delta_schedule: env.config.delta_schedule.clone(),
    };
    let s = run_batch(&env.store, lo, hi, &opts, |done, total| {
        if progress {
            eprintln!("{done}/{total}");
        }
    })?;
    let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:e}"));
    let mut out = format!(
        "requested {}\nalready cached {}\nsolved {}\nfailed {}\nmin residual {}\nmax residual {}\n",
        s.requested,
        s.already_cached,
        s.solved,
        s.failed.len(),
        fmt(s.min_residual),
        fmt(s.max_residual)
    );
    for (n, e) in &s.failed {
        out.push_str(&format!("failed n={n}: {e}\n"));
    }
    if s.failed.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Numeric(format!("{} zeros failed", s.failed.len())))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_gue(
    env: &Env,
    m: u64,
    n: u64,
    step: f64,
    x_max: f64,
    import: Option<PathBuf>,
    offset: u64,
    global: Option<f64>,
) -> Result<String, Failure> {
    if n <= m {
        return Err(Failure::Usage(format!("need N > M, got M={m}, N={n}")));
    }
    let zeros = match import {
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| ZetaError::Io(format!("{}: {e}", p.display())))?;
            read_ordinates(&text, offset)?
        }
        None => env.store.zeros(m, n + 1)?,
    };
    let s = match global {
        Some(t) => global_spacings(&zeros, m, n, t)?,
        None => normalized_spacings(&zeros, m, n)?,
    };
    let bins = correlation_bins(&s, &bin_edges(step, x_max)?)?;
    let mut t = Table::new(vec!["x_mid", "alpha", "beta", "empirical", "gue"]);
    for b in bins {
        t.push(vec![num(b.x_mid), num(b.alpha), num(b.beta), num(b.empirical), num(b.gue)]);
    }
    Ok(t.render(env.format))
}

fn cmd_prime(
    env: &Env,
    x_lo: f64,
    x_hi: f64,
    k: u64,
    what: Series,
    seed_ordinates: bool,
    samples: Option<usize>,
) -> Result<String, Failure> {
    if !(x_lo >= 2.0 && x_hi > x_lo) {
        return Err(Failure::Usage(format!("need 2 <= x_lo < x_hi, got [{x_lo}, {x_hi}]")));
    }
    let tables = build_arithmetic_tables((x_hi.floor() as u64).max(2))?;
    let zeros: Vec<ZeroRecord> = if k == 0 {
        Vec::new()
    } else if seed_ordinates {
        (1..=k).map(|n| solve_one(n, Method::LambertSeed, 15, None)).collect::<Result<_, _>>()?
    } else {
        match env.store.zeros(1, k) {
            Ok(z) => z,
            Err(_) => (1..=k).map(|n| solve_one(n, Method::AsymptoticEq, 15, None)).collect::<Result<_, _>>()?,
        }
    };
    let xs = match samples {
        Some(s) => linear_grid(x_lo, x_hi, s),
        None => half_integer_grid(x_lo.ceil() as u64, x_hi.ceil() as u64).into_iter().filter(|&x| x >= x_lo).collect(),
    };
    let rec = reconstruct(&xs, &zeros, &tables, &PrecisionContext::double())?;
    let mut t = Table::new(vec!["x", "reconstructed", "oracle"]);
    for i in 0..xs.len() {
        let (r, o) = match what {
            Series::Pi => (rec.pi_vals[i], rec.pi_true[i]),
            Series::Psi => (rec.psi_vals[i], rec.psi_true[i]),
            Series::J => (rec.j_vals[i], zeta_zeros::prime::j_oracle(xs[i], &tables)?),
        };
        t.push(vec![num(xs[i]), num(r), num(o)]);
    }
    Ok(t.render(env.format))
}

fn cmd_audit(env: &Env, lo: u64, hi: u64, delta: f64, decimals: Option<u32>, digits: u32) -> Result<String, Failure> {
    if !(delta > 0.0) {
        return Err(Failure::Usage(format!("delta must be positive, got {delta}")));
    }
    if hi < lo {
        return Err(Failure::Usage(format!("empty range {lo}..={hi}")));
    }
    check_digits(digits)?;
    let zeros = env.store.zeros(lo, hi)?;
    let rows = audit(&zeros, delta, decimals, digits)?;
    let mut t = Table::new(vec!["n", "y", "asymptotic", "exact"]);
    for r in rows {
        t.push(vec![Value::from(r.n), Value::from(r.y), num(r.asymptotic), num(r.exact)]);
    }
    Ok(t.render(env.format))
}

fn cmd_gram(env: &Env, n: u64, digits: Option<u32>) -> Result<String, Failure> {
    let digits = env.digits(digits)?;
    let g = if digits <= 15 {
        let v: f64 = gram_point(n, &PrecisionContext::double())?;
        to_decimal_string(&v, 15)
    } else {
        let ctx = PrecisionContext::new(digits)?;
        let v: MpFloat = gram_point(n, &ctx)?;
        to_decimal_string(&v, digits as usize)
    };
    let mut t = Table::new(vec!["n", "gram_point"]);
    t.push(vec![Value::from(n), Value::from(g)]);
    Ok(t.render(env.format))
}

fn cmd_count(env: &Env, t: f64, variant: Option<CountVariant>) -> Result<String, Failure> {
    let ctx = PrecisionContext::double();
    let variants: Vec<CountVariant> = variant.map_or(CountVariant::ALL.to_vec(), |v| vec![v]);
    let mut table = Table::new(vec!["variant", "value", "near_zero"]);
    let mut warned = false;
    for v in variants {
        let c = count_zeros_smooth(&t, v, &ctx)?;
        if c.near_zero && !warned {
            eprintln!("warning: |zeta(1/2 + iT)| < 1e-6 at T = {t}; the count is unstable");
            warned = true;
        }
        table.push(vec![Value::from(v.as_str()), num(c.value), Value::from(c.near_zero)]);
    }
    Ok(table.render(env.format))
}

fn run(cli: Cli) -> Result<String, Failure> {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let dir = cli.cache.clone().or(config.cache_path.clone()).unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
    let env = Env {
        store: ZeroStore::new(dir),
        format: cli.format.or(config.output_format).unwrap_or(Format::Plain),
        config,
    };
    match cli.command {
        Command::Zero { n, digits, method, no_cache } => cmd_zero(&env, n, digits, method, no_cache),
        Command::Batch { n_lo, n_hi, method, digits, jobs, checkpoint, progress } => {
            cmd_batch(&env, n_lo, n_hi, method, digits, jobs, checkpoint, progress)
        }
        Command::Gue { m, n, step, x_max, import, offset, global } => {
            cmd_gue(&env, m, n, step, x_max, import, offset, global)
        }
        Command::Prime { x_lo, x_hi, zero_count, what, seed_ordinates, samples } => {
            cmd_prime(&env, x_lo, x_hi, zero_count, what, seed_ordinates, samples)
        }
        Command::Audit { n_lo, n_hi, delta, decimals, digits } => cmd_audit(&env, n_lo, n_hi, delta, decimals, digits),
        Command::Gram { n, digits } => cmd_gram(&env, n, digits),
        Command::Count { t, variant } => cmd_count(&env, t, variant),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
