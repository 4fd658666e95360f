//! Solving the asymptotic and exact transcendental equations for `y_n`.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::counting::{zero_count, zero_index_at};
use crate::error::{Result, ZetaError};
use crate::precision::PrecisionContext;
use crate::roots::brent;
use crate::scalar::{convert, to_decimal_string, MpFloat, Real};
use crate::special::{lambert_w0, riemann_siegel_theta};
use crate::zeta::arg_zeta_shifted;

/// How an ordinate was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    LambertSeed,
    AsymptoticEq,
    ExactEq,
    /// Read from an external ordinate table.
    Imported,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::LambertSeed => "lambert_seed",
            Method::AsymptoticEq => "asymptotic_eq",
            Method::ExactEq => "exact_eq",
            Method::Imported => "imported",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = ZetaError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seed" | "lambert_seed" => Ok(Method::LambertSeed),
            "asymptotic" | "asymptotic_eq" => Ok(Method::AsymptoticEq),
            "exact" | "exact_eq" => Ok(Method::ExactEq),
            "imported" => Ok(Method::Imported),
            other => Err(ZetaError::Parse(format!("unknown method `{other}`"))),
        }
    }
}

/// One solved zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub n: u64,
    /// Ordinate as a decimal string with `digits_certified` significant digits.
    pub y: String,
    pub digits_certified: u32,
    pub method: Method,
    /// `|lhs|` of the solved equation at the final δ; count units for the
    /// asymptotic equation, radians for the exact one.
    pub residual: f64,
}

impl ZeroRecord {
    pub fn value<T: Real>(&self, bits: u32) -> Result<T> {
        T::parse_prec(&self.y, bits)
    }

    pub fn y_f64(&self) -> f64 {
        self.y.parse().unwrap_or(f64::NAN)
    }
}

/// Root-finding policy shared by both solvers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Strictly decreasing δ values for the exact solver.
    pub delta_schedule: Vec<f64>,
    /// δ at which the asymptotic equation is solved.
    pub asymptotic_delta: f64,
    /// Initial bracket half-width as a fraction of the local mean spacing.
    pub bracket_halfwidth_factor: f64,
    /// Relative root tolerance.
    pub brent_tol: f64,
    pub max_bracket_expansions: u32,
    pub target_digits: u32,
    pub max_iterations: u32,
    /// Check each root against the zero count `N(y ± ε)` and re-bracket
    /// when it belongs to a neighbouring index.
    #[serde(default = "default_true")]
    pub verify_index: bool,
}

fn default_true() -> bool {
    true
}

const GRID_POINTS: usize = 24;
/// Depth and fan-out of the cell refinement in the grid scan.
const SUBDIVISIONS: u32 = 4;
const SPLIT: usize = 4;

impl SolverConfig {
    /// Defaults matched to the working precision of `T` under `ctx`.
    pub fn for_context<T: Real>(ctx: &PrecisionContext) -> Self {
        let w = ctx.working_digits::<T>().min((ctx.digits + ctx.guard) as f64);
        // doubles resolve |ζ| ≈ |ζ'|δ down to δ ~ 1e-11; MPFR keeps half the
        // working digits in reserve
        let floor = if T::MAX_BITS.is_some() { 1e-11 } else { 10f64.powf(-w / 2.0) };
        let mut schedule = Vec::new();
        let mut k = 5;
        while 10f64.powi(-k) >= floor * 0.999 {
            schedule.push(10f64.powi(-k));
            k += 3;
        }
        let (tol, target) = if T::MAX_BITS.is_some() {
            (4.0 * f64::EPSILON, ctx.digits.min(10))
        } else {
            (10f64.powf(-w), ctx.digits)
        };
        SolverConfig {
            delta_schedule: schedule,
            asymptotic_delta: 1e-9,
            bracket_halfwidth_factor: 0.45,
            brent_tol: tol,
            max_bracket_expansions: 20,
            target_digits: target,
            max_iterations: 500,
            verify_index: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta_schedule.is_empty() {
            return Err(ZetaError::Config("delta schedule is empty".into()));
        }
        for w in self.delta_schedule.windows(2) {
            if !(w[1] < w[0]) {
                return Err(ZetaError::Config("delta schedule must be strictly decreasing".into()));
            }
        }
        let last = *self.delta_schedule.last().expect("nonempty");
        if !(last > 0.0) || self.delta_schedule[0] >= 1e-2 {
            return Err(ZetaError::Config("delta schedule entries must lie in (0, 1e-2)".into()));
        }
        if !(self.asymptotic_delta > 0.0 && self.asymptotic_delta < 1e-2) {
            return Err(ZetaError::Config("asymptotic delta must lie in (0, 1e-2)".into()));
        }
        if !(self.bracket_halfwidth_factor > 0.0) || !(self.brent_tol > 0.0) {
            return Err(ZetaError::Config("bracket factor and tolerance must be positive".into()));
        }
        Ok(())
    }
}

fn two_pi<T: Real>(ctx: &PrecisionContext) -> T {
    T::pi(ctx.bits()) * ctx.int::<T>(2)
}

/// `ỹ_n = 2π(n − 11/8) / W₀((n − 11/8)/e)` for a (possibly huge) real `n ≥ 1`.
pub fn lambert_seed_real<T: Real>(n: &T, ctx: &PrecisionContext) -> Result<T> {
    if *n < T::from_u64_prec(1, ctx.bits()) {
        return Err(ZetaError::Domain(format!("seed index must be >= 1, got {n}")));
    }
    let m = n.clone() - ctx.ratio::<T>(11, 8);
    let e = T::from_u64_prec(1, ctx.bits()).exp();
    let w = lambert_w0(&(m.clone() / e), ctx)?;
    Ok(two_pi::<T>(ctx) * m / w)
}

pub fn lambert_seed<T: Real>(n: u64, ctx: &PrecisionContext) -> Result<T> {
    lambert_seed_real(&T::from_u64_prec(n, ctx.bits()), ctx)
}

/// Local mean zero spacing `2π / log(y/2π)`.
pub fn mean_spacing(y: f64) -> f64 {
    let tp = 2.0 * std::f64::consts::PI;
    tp / (y / tp).ln().max(0.25)
}

/// `(y/2π) log(y/2πe) − (n − 11/8)`: the asymptotic equation without `arg ζ`.
pub fn asymptotic_smooth<T: Real>(y: &T, n: u64, ctx: &PrecisionContext) -> T {
    let tp = two_pi::<T>(ctx);
    let one = T::from_u64_prec(1, ctx.bits());
    y.clone() / tp.clone() * ((y.clone() / tp).ln() - one) - (T::from_u64_prec(n, ctx.bits()) - ctx.ratio::<T>(11, 8))
}

/// `(y/2π) log(y/2πe) + arg ζ(½+δ+iy)/π − (n − 11/8)`.
pub fn asymptotic_lhs<T: Real>(y: &T, n: u64, delta: &T, ctx: &PrecisionContext) -> Result<T> {
    if *y <= two_pi::<T>(ctx) {
        return Err(ZetaError::Domain(format!("asymptotic equation needs y > 2π, got {y}")));
    }
    let a = arg_zeta_shifted(y, delta, ctx)?;
    Ok(asymptotic_smooth(y, n, ctx) + a / T::pi(ctx.bits()))
}

/// `ϑ(y) + arg ζ(½+δ+iy) − (n − 3/2)π`.
pub fn exact_lhs<T: Real>(y: &T, n: u64, delta: &T, ctx: &PrecisionContext) -> Result<T> {
    if *y <= T::zero() {
        return Err(ZetaError::Domain(format!("exact equation needs y > 0, got {y}")));
    }
    let th = riemann_siegel_theta(y, ctx)?;
    let a = arg_zeta_shifted(y, delta, ctx)?;
    let k = T::from_u64_prec(n, ctx.bits()) - ctx.ratio::<T>(3, 2);
    Ok(th + a - k * T::pi(ctx.bits()))
}

/// Distance of `v` from the nearest even integer.
fn mod2_offset(v: f64) -> f64 {
    (v - 2.0 * (v / 2.0).round()).abs()
}

/// Reduce an angle to `[-π, π]`.
fn wrap_angle<T: Real>(x: T) -> T {
    let tp = T::pi(x.bits()) * T::from_u64_prec(2, x.bits());
    let k = (x.clone() / tp.clone()).round();
    x - k * tp
}

/// Branch on which `arg ζ` is measured: `ref ± π`, then shifted by an even
/// number of counts. The principal branch is `ref = 0, shift = 0`.
#[derive(Clone, Debug)]
struct Branch<T> {
    reference: T,
    shift: T,
}

/// Root search for one zero. `parts(y)` returns the smooth part of the
/// equation in count units and the principal `arg ζ(½+δ+iy)`; the equation
/// is `smooth + arg/π = 0` with plateaus at `∓½ (mod 2)` on either side of
/// the wanted zero.
///
/// Where the principal argument wraps inside the phase transition of a zero,
/// the principal equation has no sign change there; such zeros are located
/// on a branch continuous through the transition.
struct Locator<'a, T, P> {
    parts: P,
    n: u64,
    cfg: &'a SolverConfig,
    delta: f64,
    spacing: f64,
    floor: f64,
    tol: T,
}

struct Located<T> {
    root: T,
    value: T,
}

impl<'a, T: Real, P: FnMut(&T) -> Result<(T, T)>> Locator<'a, T, P> {
    fn principal(&self, bits: u32) -> Branch<T> {
        Branch { reference: T::from_u64_prec(0, bits), shift: T::from_u64_prec(0, bits) }
    }

    fn eval(&mut self, y: &T, br: &Branch<T>) -> Result<T> {
        let (smooth, arg) = (self.parts)(y)?;
        let pi = T::pi(y.bits());
        let a = br.reference.clone() + wrap_angle(arg - br.reference.clone());
        Ok(smooth + a / pi - br.shift.clone())
    }

    fn genuine(&mut self, x: &T, gx: &T, br: &Branch<T>) -> Result<bool> {
        if gx.to_f64().abs() >= 0.25 {
            return Ok(false);
        }
        let eps = (1000.0 * self.delta).min(self.spacing / 100.0);
        let e = T::from_f64_prec(eps, x.bits());
        let left = self.eval(&(x.clone() - e.clone()), br)?.to_f64();
        let right = self.eval(&(x.clone() + e), br)?.to_f64();
        Ok(mod2_offset(left + 0.5) < 0.25 && mod2_offset(right - 0.5) < 0.25)
    }

    fn refine(&mut self, lo: T, hi: T, glo: T, ghi: T, br: Branch<T>) -> Result<Option<Located<T>>> {
        let out = {
            let me = &mut *self;
            let b = br.clone();
            let tol = me.tol.clone();
            let iters = me.cfg.max_iterations as usize;
            brent(|x| me.eval(x, &b), lo, hi, glo, ghi, &tol, iters)?
        };
        if self.genuine(&out.root, &out.value, &br)? {
            Ok(Some(Located { root: out.root, value: out.value }))
        } else {
            Ok(None)
        }
    }

    /// Try `[lo, hi]` as a cell holding the wanted zero: either a principal
    /// sign change, or an odd rise of the count starting from `−½ (mod 2)`.
    fn try_cell(&mut self, lo: &T, hi: &T, glo: &T, ghi: &T) -> Result<Option<Located<T>>> {
        let bits = lo.bits();
        if *glo < T::zero() && *ghi > T::zero() {
            let br = self.principal(bits);
            if let Some(r) = self.refine(lo.clone(), hi.clone(), glo.clone(), ghi.clone(), br)? {
                return Ok(Some(r));
            }
        }
        let (gl, gh) = (glo.to_f64(), ghi.to_f64());
        if mod2_offset(gl + 0.5) < 0.25 && mod2_offset(gh - gl - 1.0) < 0.25 {
            let (_, arg_lo) = (self.parts)(lo)?;
            let half_pi = T::pi(bits) / T::from_u64_prec(2, bits);
            let shift = T::from_f64_prec(2.0 * ((gl + 0.5) / 2.0).round(), bits);
            let br = Branch { reference: arg_lo + half_pi, shift };
            let a = self.eval(lo, &br)?;
            let b = self.eval(hi, &br)?;
            if a < T::zero() && b > T::zero() {
                return self.refine(lo.clone(), hi.clone(), a, b, br);
            }
        }
        Ok(None)
    }

    fn clamp(&self, x: T) -> T {
        let f = T::from_f64_prec(self.floor, x.bits());
        if x < f {
            f
        } else {
            x
        }
    }

    fn g(&mut self, y: &T) -> Result<T> {
        let br = self.principal(y.bits());
        self.eval(y, &br)
    }

    fn locate(&mut self, center: &T, halfwidth: f64) -> Result<Located<T>> {
        let bits = center.bits();
        let hw = T::from_f64_prec(halfwidth, bits);
        let mut lo = self.clamp(center.clone() - hw.clone());
        let mut hi = center.clone() + hw;
        let mut glo = self.g(&lo)?;
        let mut ghi = self.g(&hi)?;
        let mut expansions = 0;
        loop {
            if let Some(r) = self.try_cell(&lo, &hi, &glo, &ghi)? {
                return Ok(r);
            }
            let bracketed = glo < T::zero() && ghi > T::zero();
            if bracketed || expansions >= self.cfg.max_bracket_expansions {
                break;
            }
            let step = (hi.clone() - lo.clone()) * T::from_f64_prec(0.5, bits);
            let (gl, gh) = (glo.to_f64(), ghi.to_f64());
            // move whichever end sits on the wrong side of the wanted zero
            let grow_lo = gl >= 0.0 || gh - gl > 1.5;
            let grow_hi = gh <= 0.0 || !grow_lo;
            if grow_lo {
                lo = self.clamp(lo - step.clone());
                glo = self.g(&lo)?;
            }
            if grow_hi {
                hi += step;
                ghi = self.g(&hi)?;
            }
            expansions += 1;
        }
        self.scan(center, halfwidth.max(1.5 * self.spacing), expansions)
    }

    /// Candidates in one grid cell, tagged with whether the left plateau is
    /// exactly −½. A cell that rises by more than one count (a close pair)
    /// is split until each part holds a single transition.
    fn search_cell(
        &mut self,
        lo: &T,
        hi: &T,
        glo: &T,
        ghi: &T,
        depth: u32,
        out: &mut Vec<(bool, Located<T>)>,
    ) -> Result<()> {
        if let Some(r) = self.try_cell(lo, hi, glo, ghi)? {
            out.push(((glo.to_f64() + 0.5).abs() < 0.25, r));
            return Ok(());
        }
        if depth == 0 || (ghi.clone() - glo.clone()).abs().to_f64() < 0.25 {
            return Ok(());
        }
        let bits = lo.bits();
        let step = (hi.clone() - lo.clone()) / T::from_u64_prec(SPLIT as u64, bits);
        let mut a = lo.clone();
        let mut ga = glo.clone();
        for k in 1..=SPLIT {
            let (b, gb) = if k == SPLIT {
                (hi.clone(), ghi.clone())
            } else {
                let b = lo.clone() + step.clone() * T::from_u64_prec(k as u64, bits);
                let gb = self.g(&b)?;
                (b, gb)
            };
            self.search_cell(&a, &b, &ga, &gb, depth - 1, out)?;
            a = b;
            ga = gb;
        }
        Ok(())
    }

    /// Slow path: sample a grid and keep only cells that look like the zero.
    fn scan(&mut self, center: &T, halfwidth: f64, expansions: u32) -> Result<Located<T>> {
        let bits = center.bits();
        let lo = self.clamp(center.clone() - T::from_f64_prec(halfwidth, bits));
        let hi = center.clone() + T::from_f64_prec(halfwidth, bits);
        let step = (hi.clone() - lo.clone()) / T::from_u64_prec(GRID_POINTS as u64, bits);
        let mut xs = Vec::with_capacity(GRID_POINTS + 1);
        let mut gs = Vec::with_capacity(GRID_POINTS + 1);
        for i in 0..=GRID_POINTS {
            let x = lo.clone() + step.clone() * T::from_u64_prec(i as u64, bits);
            gs.push(self.g(&x)?);
            xs.push(x);
        }
        let mut found = Vec::new();
        for i in 0..GRID_POINTS {
            self.search_cell(&xs[i], &xs[i + 1], &gs[i], &gs[i + 1], SUBDIVISIONS, &mut found)?;
        }
        // prefer cells whose left plateau is exactly −½ (no wrap), then the
        // one closest to the seed
        let mut best: Option<(bool, T, Located<T>)> = None;
        for (exact_level, r) in found {
            let dist = (r.root.clone() - center.clone()).abs();
            let better = match &best {
                None => true,
                Some((lvl, d, _)) => (exact_level && !*lvl) || (exact_level == *lvl && dist < *d),
            };
            if better {
                best = Some((exact_level, dist, r));
            }
        }
        match best {
            Some((_, _, r)) => Ok(r),
            None => self.locate_by_count(center).map_err(|e| match e {
                ZetaError::BracketFailure { .. } => {
                    ZetaError::BracketFailure { n: self.n, lo: lo.to_f64(), hi: hi.to_f64(), expansions }
                }
                other => other,
            }),
        }
    }

    /// Isolate the step of the zero count from `n − 1` to `n` by bisection,
    /// then solve inside it. Finds zeros of close pairs, whose two phase
    /// transitions can cancel in the principal argument at every grid point.
    fn locate_by_count(&mut self, center: &T) -> Result<Located<T>> {
        let n = self.n as i64;
        let c = center.to_f64();
        let floor = self.floor.max(2.0 * std::f64::consts::PI * 1.0001);
        let (mut a, mut b) = ((c - self.spacing).max(floor), c + self.spacing);
        let mut widen = 0;
        while zero_count(a)? > n - 1 || zero_count(b)? < n {
            widen += 1;
            if widen > 40 || a <= floor && zero_count(a)? > n - 1 {
                return Err(ZetaError::BracketFailure { n: self.n, lo: a, hi: b, expansions: widen });
            }
            a = (a - self.spacing).max(floor);
            b += self.spacing;
        }
        // cells well below the closest pairs but far wider than the δ transition
        let width = (1e-4 * self.spacing).max(1e4 * self.delta);
        while b - a > width {
            let m = 0.5 * (a + b);
            if zero_count(m)? >= n {
                b = m;
            } else {
                a = m;
            }
        }
        let bits = center.bits();
        let (lo, hi) = (T::from_f64_prec(a, bits), T::from_f64_prec(b, bits));
        let (glo, ghi) = (self.g(&lo)?, self.g(&hi)?);
        let mut found = Vec::new();
        self.search_cell(&lo, &hi, &glo, &ghi, SUBDIVISIONS, &mut found)?;
        found.into_iter().next().map(|(_, r)| r).ok_or(ZetaError::BracketFailure {
            n: self.n,
            lo: a,
            hi: b,
            expansions: widen,
        })
    }
}

fn abs_tol<T: Real>(y: &T, rel: f64) -> T {
    let ulp = y.abs() * y.epsilon();
    (y.abs() * T::from_f64_prec(rel, y.bits())).max_of(ulp * T::from_u64_prec(4, y.bits()))
}

/// Root of the asymptotic equation at δ = `cfg.asymptotic_delta`, bracketed
/// around the Lambert seed.
pub fn solve_zero_asymptotic<T: Real>(n: u64, cfg: &SolverConfig, ctx: &PrecisionContext) -> Result<ZeroRecord> {
    Ok(solve_asymptotic_value::<T>(n, cfg, ctx)?.0)
}

/// As [`solve_zero_asymptotic`], also returning the root in `T`.
pub fn solve_asymptotic_value<T: Real>(n: u64, cfg: &SolverConfig, ctx: &PrecisionContext) -> Result<(ZeroRecord, T)> {
    if n == 0 {
        return Err(ZetaError::Domain("zero index must be >= 1".into()));
    }
    cfg.validate()?;
    let seed: T = lambert_seed(n, ctx)?;
    let spacing = mean_spacing(seed.to_f64());
    let delta = cfg.asymptotic_delta;
    let dt = T::from_f64_prec(delta, ctx.bits());
    let tp = two_pi::<T>(ctx);
    let parts = |y: &T| {
        if *y <= tp {
            return Err(ZetaError::Domain(format!("asymptotic equation needs y > 2π, got {y}")));
        }
        Ok((asymptotic_smooth(y, n, ctx), arg_zeta_shifted(y, &dt, ctx)?))
    };
    let mut loc = Locator {
        parts,
        n,
        cfg,
        delta,
        spacing,
        floor: 2.0 * std::f64::consts::PI * 1.0001,
        tol: abs_tol(&seed, cfg.brent_tol),
    };
    let hw = cfg.bracket_halfwidth_factor * spacing;
    let mut found = loc.locate(&seed, hw)?;
    if cfg.verify_index {
        found = reindex(n, found, spacing, |c| loc.locate_by_count(c))?;
    }
    let residual = found.value.to_f64().abs();
    let root = found.root;
    let yf = root.to_f64();
    // worst of: the shift of the asymptotic root off the zero, the δ² bias,
    // and the floating point resolution of the root
    let ulp = (root.abs() * root.epsilon()).to_f64();
    let err = (delta / (48.0 * yf) + delta * delta).max(16.0 * ulp).max(cfg.brent_tol * yf);
    let digits = ((yf / err).log10().floor() as u32).min(ctx.working_digits::<T>().floor() as u32);
    let record = ZeroRecord {
        n,
        y: to_decimal_string(&root, digits as usize),
        digits_certified: digits,
        method: Method::AsymptoticEq,
        residual,
    };
    Ok((record, root))
}

/// Move a root onto zero `n` when the zero count says it belongs to a
/// neighbour, re-locating one mean spacing per index of the offset.
fn reindex<T: Real>(
    n: u64,
    mut found: Located<T>,
    spacing: f64,
    mut relocate: impl FnMut(&T) -> Result<Located<T>>,
) -> Result<Located<T>> {
    let eps = spacing / 200.0;
    for _ in 0..4 {
        let m = match zero_index_at(found.root.to_f64(), eps)? {
            Some(m) if m != n => m,
            _ => return Ok(found),
        };
        let shift = T::from_f64_prec((n as f64 - m as f64) * spacing, found.root.bits());
        let center = found.root.clone() + shift;
        let next = relocate(&center)?;
        if next.root == found.root {
            return Err(ZetaError::Misindexed { n, found: m });
        }
        found = next;
    }
    match zero_index_at(found.root.to_f64(), eps)? {
        Some(m) if m != n => Err(ZetaError::Misindexed { n, found: m }),
        _ => Ok(found),
    }
}

/// Lambert-W seed as a record.
pub fn seed_record<T: Real>(n: u64, ctx: &PrecisionContext) -> Result<ZeroRecord> {
    if n == 0 {
        return Err(ZetaError::Domain("zero index must be >= 1".into()));
    }
    let y: T = lambert_seed(n, ctx)?;
    let smooth = asymptotic_smooth(&y, n, ctx).to_f64().abs();
    let digits = ctx.working_digits::<T>().floor().min(ctx.digits as f64) as u32;
    Ok(ZeroRecord {
        n,
        y: to_decimal_string(&y, digits as usize),
        digits_certified: 0,
        method: Method::LambertSeed,
        residual: smooth,
    })
}

/// Per-stage trace of the exact solver.
#[derive(Clone, Debug)]
pub struct ExactStage {
    pub delta: f64,
    pub root: MpFloat,
    pub agreed_digits: u32,
}

#[derive(Clone, Debug)]
pub struct ExactSolution {
    pub record: ZeroRecord,
    /// Root at the final δ, polished at raised precision.
    pub value: MpFloat,
    pub stages: Vec<ExactStage>,
}

/// Iterated root of the exact equation over the δ schedule.
pub fn solve_zero_exact<T: Real>(n: u64, cfg: &SolverConfig, ctx: &PrecisionContext) -> Result<ZeroRecord> {
    Ok(solve_zero_exact_detailed::<T>(n, cfg, ctx)?.record)
}

pub fn solve_zero_exact_detailed<T: Real>(n: u64, cfg: &SolverConfig, ctx: &PrecisionContext) -> Result<ExactSolution> {
    if n == 0 {
        return Err(ZetaError::Domain("zero index must be >= 1".into()));
    }
    cfg.validate()?;
    let seed: T = lambert_seed(n, ctx)?;
    let spacing = mean_spacing(seed.to_f64());
    let working = ctx.working_digits::<T>().min((ctx.digits + ctx.guard) as f64).floor() as u32;
    let mut stages: Vec<ExactStage> = Vec::new();
    let mut prev: Option<(T, f64)> = None;
    let mut agreed = 0u32;
    let mut final_delta = cfg.delta_schedule[0];
    for &delta in &cfg.delta_schedule {
        let dt = T::from_f64_prec(delta, ctx.bits());
        let pi = T::pi(ctx.bits());
        let k = T::from_u64_prec(n, ctx.bits()) - ctx.ratio::<T>(3, 2);
        let parts = |y: &T| {
            if *y <= T::zero() {
                return Err(ZetaError::Domain(format!("exact equation needs y > 0, got {y}")));
            }
            let th = riemann_siegel_theta(y, ctx)?;
            Ok((th / pi.clone() - k.clone(), arg_zeta_shifted(y, &dt, ctx)?))
        };
        let (center, hw) = match &prev {
            None => (seed.clone(), cfg.bracket_halfwidth_factor * spacing),
            Some((y, d)) => (y.clone(), (8.0 * d).min(cfg.bracket_halfwidth_factor * spacing)),
        };
        let mut loc = Locator {
            parts,
            n,
            cfg,
            delta,
            spacing,
            floor: 1e-3,
            tol: abs_tol(&center, cfg.brent_tol),
        };
        let mut found = loc.locate(&center, hw)?;
        if cfg.verify_index && prev.is_none() {
            found = reindex(n, found, spacing, |c| loc.locate_by_count(c))?;
        }
        let root = found.root;
        if let Some((p, _)) = &prev {
            let diff = (root.clone() - p.clone()).abs();
            agreed = if diff.is_zero() {
                working
            } else {
                ((root.abs() / diff).to_f64().log10().floor().max(0.0) as u32).min(working)
            };
        }
        stages.push(ExactStage { delta, root: convert(&root, ctx.bits().max(64)), agreed_digits: agreed });
        final_delta = delta;
        prev = Some((root, delta));
        if agreed >= cfg.target_digits {
            break;
        }
    }
    if agreed < cfg.target_digits {
        return Err(ZetaError::NonConvergence { n, agreed, wanted: cfg.target_digits });
    }
    let (root, _) = prev.expect("at least one stage");
    let (value, residual) = polish(n, &root, final_delta, cfg, ctx)?;
    let mut digits = agreed.min(working.saturating_sub(1).max(1));
    // residual contract: |lhs| < 10^(2 - digits)
    if residual > 0.0 {
        let bound = (2.0 - residual.log10()).floor();
        if bound < digits as f64 {
            digits = bound.max(0.0) as u32;
        }
    }
    let record = ZeroRecord {
        n,
        y: to_decimal_string(&value, digits.max(1) as usize),
        digits_certified: digits,
        method: Method::ExactEq,
        residual,
    };
    Ok(ExactSolution { record, value, stages })
}

/// Re-solve at the final δ with enough extra digits that the residual of
/// the root reflects the equation rather than the resolution of `y`.
fn polish<T: Real>(n: u64, root: &T, delta: f64, cfg: &SolverConfig, ctx: &PrecisionContext) -> Result<(MpFloat, f64)> {
    let extra = (-delta.log10()).ceil().max(0.0) as u32 + 4;
    let hctx = ctx.raised(extra);
    let bits = hctx.bits();
    let y: MpFloat = convert(root, bits);
    let dt = MpFloat::parse_prec(&format!("{delta:e}"), bits)?;
    let pi = MpFloat::pi(bits);
    let k = MpFloat::from_u64_prec(n, bits) - hctx.ratio::<MpFloat>(3, 2);
    let parts = |x: &MpFloat| {
        let th = riemann_siegel_theta(x, &hctx)?;
        Ok((th / pi.clone() - k.clone(), arg_zeta_shifted(x, &dt, &hctx)?))
    };
    let mut loc = Locator {
        parts,
        n,
        cfg,
        delta,
        spacing: mean_spacing(y.to_f64()),
        floor: 1e-3,
        tol: y.abs() * MpFloat::from_f64_prec(10f64.powi(-((hctx.digits + hctx.guard) as i32)), bits),
    };
    // branch through the root itself, so a wrap of the principal argument
    // inside the transition does not matter
    let (smooth0, arg0) = (loc.parts)(&y)?;
    let g0 = (smooth0 + arg0.clone() / MpFloat::pi(bits)).to_f64();
    let br = Branch { reference: arg0, shift: MpFloat::from_f64_prec(2.0 * (g0 / 2.0).round(), bits) };
    let rel = cfg.brent_tol.max(2f64.powi(-(ctx.bits_for::<T>() as i32)));
    let mut h = y.abs() * MpFloat::from_f64_prec(64.0 * rel, bits);
    for _ in 0..12 {
        let lo = y.clone() - h.clone();
        let hi = y.clone() + h.clone();
        let glo = loc.eval(&lo, &br)?;
        let ghi = loc.eval(&hi, &br)?;
        if glo < MpFloat::zero() && ghi > MpFloat::zero() {
            if let Some(r) = loc.refine(lo, hi, glo, ghi, br.clone())? {
                let residual = (r.value.to_f64() * std::f64::consts::PI).abs();
                return Ok((r.root, residual));
            }
            break;
        }
        h *= MpFloat::from_u64_prec(4, bits);
    }
    Err(ZetaError::Evaluation(format!("polish lost the root of zero n={n}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_values() {
        let ctx = PrecisionContext::double();
        let s1: f64 = lambert_seed(1, &ctx).unwrap();
        assert_eq!(to_decimal_string(&s1, 4), "14.52");
        let s: f64 = lambert_seed(100_000, &ctx).unwrap();
        assert_eq!(format!("{s:.2}"), "74920.89");
        assert!(asymptotic_smooth(&s, 100_000, &ctx).abs() < 1e-9);
    }

    #[test]
    fn method_names_roundtrip() {
        for m in [Method::LambertSeed, Method::AsymptoticEq, Method::ExactEq] {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert_eq!("seed".parse::<Method>().unwrap(), Method::LambertSeed);
        assert!("newton".parse::<Method>().is_err());
    }

    #[test]
    fn config_validation() {
        let ctx = PrecisionContext::new(60).unwrap();
        let cfg = SolverConfig::for_context::<MpFloat>(&ctx);
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.delta_schedule[0], 1e-5);
        assert!(*cfg.delta_schedule.last().unwrap() < 1e-30);
        let mut bad = cfg.clone();
        bad.delta_schedule = vec![1e-5, 1e-5];
        assert!(bad.validate().is_err());
        bad.delta_schedule = vec![1e-5, 0.0];
        assert!(bad.validate().is_err());
    }

    #[test]
    fn lhs_relations() {
        let ctx = PrecisionContext::double();
        let d = 1e-6;
        let a = exact_lhs(&30.0, 4, &d, &ctx).unwrap();
        let b = exact_lhs(&30.0, 5, &d, &ctx).unwrap();
        assert!((a - b - std::f64::consts::PI).abs() < 1e-12);
        assert!(asymptotic_lhs(&5.0, 1, &d, &ctx).is_err());
        let e = exact_lhs(&1e4, 10_000, &d, &ctx).unwrap() / std::f64::consts::PI;
        let s = asymptotic_lhs(&1e4, 10_000, &d, &ctx).unwrap();
        assert!((e - s).abs() < 1e-3);
    }

    #[test]
    fn asymptotic_first_zeros() {
        let ctx = PrecisionContext::double();
        let cfg = SolverConfig::for_context::<f64>(&ctx);
        let r = solve_zero_asymptotic::<f64>(1, &cfg, &ctx).unwrap();
        assert!((r.y_f64() - 14.134725141734694).abs() < 1e-10, "{r:?}");
        assert!(r.digits_certified >= 12);
        let r = solve_zero_asymptotic::<f64>(2, &cfg, &ctx).unwrap();
        assert!((r.y_f64() - 21.022039638771555).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn close_pairs() {
        // 4765/4766 are 0.043 apart; 25000 used to land on 25002
        let ctx = PrecisionContext::double();
        let cfg = SolverConfig::for_context::<f64>(&ctx);
        for (n, y) in [(4765, 5229.19855719922), (4766, 5229.241811259), (25000, 21942.5924301326), (25001, 21942.6611012978)] {
            let r = solve_zero_asymptotic::<f64>(n, &cfg, &ctx).unwrap();
            assert!((r.y_f64() - y).abs() < 1e-8, "{r:?}");
        }
    }

    #[test]
    fn exact_f64_first_zero() {
        let ctx = PrecisionContext::double();
        let cfg = SolverConfig::for_context::<f64>(&ctx);
        let r = solve_zero_exact::<f64>(1, &cfg, &ctx).unwrap();
        assert!(r.digits_certified >= 10, "{r:?}");
        assert!(r.residual < 10f64.powi(2 - r.digits_certified as i32));
        assert!(r.y.starts_with("14.13472514"), "{r:?}");
    }
}
