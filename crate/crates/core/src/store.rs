//! Line-oriented cache of solved ordinates.
//!
//! ```text
//! zeta-zeros-cache format_version=1 digits=12 method=asymptotic_eq
//! 1 14.1347251417
//! 2 21.0220396388
//! ```
//!
//! Every row carries exactly `digits` significant digits. Rows are strictly
//! increasing in both `n` and `y`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Result, ZetaError};
use crate::scalar::{significant_digits, to_decimal_string, MpFloat, Real};
use crate::solver::{Method, ZeroRecord};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "zeta-zeros-cache";

/// Digits kept for asymptotic-equation ordinates. The root of that equation
/// sits within `δ/(48y)` of the zero, which at δ = 1e-9 leaves at least 12
/// good digits from `n = 1` upward.
pub const ASYMPTOTIC_CACHE_DIGITS: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CacheHeader {
    pub format_version: u32,
    pub digits: u32,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCacheFile {
    pub header: CacheHeader,
    rows: BTreeMap<u64, String>,
}

/// Round a decimal string to `digits` significant digits.
pub fn round_decimal(y: &str, digits: u32) -> Result<String> {
    if significant_digits(y) == digits as usize {
        return Ok(y.to_string());
    }
    let bits = ((y.len() as f64 + digits as f64) * 3.33) as u32 + 64;
    let v = MpFloat::parse_prec(y, bits)?;
    Ok(to_decimal_string(&v, digits as usize))
}

fn parse_header(line: &str) -> Result<CacheHeader> {
    let bad = |reason: String| ZetaError::Integrity { line: 1, reason };
    let mut parts = line.split_whitespace();
    if parts.next() != Some(MAGIC) {
        return Err(bad(format!("expected `{MAGIC}` header")));
    }
    let (mut version, mut digits, mut method) = (None, None, None);
    for kv in parts {
        let (k, v) = kv.split_once('=').ok_or_else(|| bad(format!("malformed header field `{kv}`")))?;
        match k {
            "format_version" => version = Some(v.parse::<u32>().map_err(|e| bad(format!("format_version: {e}")))?),
            "digits" => digits = Some(v.parse::<u32>().map_err(|e| bad(format!("digits: {e}")))?),
            "method" => method = Some(v.parse::<Method>().map_err(|e| bad(e.to_string()))?),
            other => return Err(bad(format!("unknown header field `{other}`"))),
        }
    }
    let format_version = version.ok_or_else(|| bad("missing format_version".into()))?;
    if format_version != FORMAT_VERSION {
        return Err(bad(format!("unsupported format_version {format_version}")));
    }
    let digits = digits.ok_or_else(|| bad("missing digits".into()))?;
    if digits == 0 {
        return Err(bad("digits must be positive".into()));
    }
    Ok(CacheHeader { format_version, digits, method: method.ok_or_else(|| bad("missing method".into()))? })
}

fn valid_decimal(s: &str) -> bool {
    let mut dot = false;
    let mut any = false;
    for c in s.chars() {
        match c {
            '.' if !dot => dot = true,
            '0'..='9' => any = true,
            _ => return false,
        }
    }
    any && !s.starts_with('.') && !s.ends_with('.')
}

impl ZeroCacheFile {
    pub fn new(digits: u32, method: Method) -> Self {
        ZeroCacheFile { header: CacheHeader { format_version: FORMAT_VERSION, digits, method }, rows: BTreeMap::new() }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = parse_header(lines.next().unwrap_or(""))?;
        let mut file = ZeroCacheFile { header, rows: BTreeMap::new() };
        let bits = (header.digits as f64 * 3.33) as u32 + 64;
        let mut last: Option<(u64, MpFloat)> = None;
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            let bad = |reason: String| ZetaError::Integrity { line: lineno, reason };
            let mut parts = line.split(' ');
            let (n, y) = match (parts.next(), parts.next(), parts.next()) {
                (Some(n), Some(y), None) => (n, y),
                _ => return Err(bad(format!("expected `n y`, got `{line}`"))),
            };
            let n: u64 = n.parse().map_err(|_| bad(format!("bad index `{n}`")))?;
            if n == 0 {
                return Err(bad("index 0".into()));
            }
            if !valid_decimal(y) {
                return Err(bad(format!("bad ordinate `{y}`")));
            }
            let sig = significant_digits(y);
            if sig != header.digits as usize {
                return Err(bad(format!("ordinate `{y}` has {sig} significant digits, header says {}", header.digits)));
            }
            let v = MpFloat::parse_prec(y, bits).map_err(|e| bad(e.to_string()))?;
            if let Some((pn, pv)) = &last {
                if n <= *pn {
                    return Err(bad(format!("index {n} does not increase (previous {pn})")));
                }
                if v <= *pv {
                    return Err(bad(format!("ordinate for n={n} does not increase")));
                }
            }
            last = Some((n, v));
            file.rows.insert(n, y.to_string());
        }
        Ok(file)
    }

    pub fn render(&self) -> String {
        let h = &self.header;
        let mut out = format!("{MAGIC} format_version={} digits={} method={}\n", h.format_version, h.digits, h.method);
        for (n, y) in &self.rows {
            out.push_str(&format!("{n} {y}\n"));
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| ZetaError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Write through a temporary file in the same directory and rename it
    /// into place, so readers see either the old or the new file.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
        tmp.write_all(self.render().as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| ZetaError::Io(e.to_string()))?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, n: u64) -> Option<&str> {
        self.rows.get(&n).map(|s| s.as_str())
    }

    pub fn contains(&self, n: u64) -> bool {
        self.rows.contains_key(&n)
    }

    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.rows.keys().copied()
    }

    pub fn missing(&self, lo: u64, hi: u64) -> Vec<u64> {
        (lo..=hi).filter(|n| !self.rows.contains_key(n)).collect()
    }

    /// Add a record rounded to the header digits. Returns `false` when the
    /// index is already present. Records of another method, or certified to
    /// fewer digits than the header, are rejected.
    pub fn insert(&mut self, rec: &ZeroRecord) -> Result<bool> {
        if rec.method != self.header.method {
            return Err(ZetaError::Config(format!(
                "cache holds {} ordinates, record n={} is {}",
                self.header.method, rec.n, rec.method
            )));
        }
        if rec.digits_certified < self.header.digits {
            return Err(ZetaError::Config(format!(
                "record n={} has {} certified digits, cache needs {}",
                rec.n, rec.digits_certified, self.header.digits
            )));
        }
        if self.rows.contains_key(&rec.n) {
            return Ok(false);
        }
        let y = round_decimal(&rec.y, self.header.digits)?;
        self.check_order(rec.n, &y)?;
        self.rows.insert(rec.n, y);
        Ok(true)
    }

    fn check_order(&self, n: u64, y: &str) -> Result<()> {
        let bits = (self.header.digits as f64 * 3.33) as u32 + 64;
        let v = MpFloat::parse_prec(y, bits)?;
        if let Some((_, below)) = self.rows.range(..n).next_back() {
            if MpFloat::parse_prec(below, bits)? >= v {
                return Err(ZetaError::NotIncreasing(n));
            }
        }
        if let Some((&m, above)) = self.rows.range(n + 1..).next() {
            if MpFloat::parse_prec(above, bits)? <= v {
                return Err(ZetaError::NotIncreasing(m));
            }
        }
        Ok(())
    }

    pub fn record(&self, n: u64) -> Option<ZeroRecord> {
        self.rows.get(&n).map(|y| ZeroRecord {
            n,
            y: y.clone(),
            digits_certified: self.header.digits,
            method: self.header.method,
            residual: f64::NAN,
        })
    }

    /// All records for `lo..=hi`, or a gap error naming the first missing run.
    pub fn range(&self, lo: u64, hi: u64) -> Result<Vec<ZeroRecord>> {
        let missing = self.missing(lo, hi);
        if let Some(&first) = missing.first() {
            let mut last = first;
            for &m in &missing[1..] {
                if m != last + 1 {
                    break;
                }
                last = m;
            }
            return Err(ZetaError::Gap { first, last });
        }
        Ok((lo..=hi).filter_map(|n| self.record(n)).collect())
    }
}

/// A directory of cache files, one per `(method, digits)`.
#[derive(Clone, Debug)]
pub struct ZeroStore {
    pub dir: PathBuf,
}

impl ZeroStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ZeroStore { dir: dir.into() }
    }

    pub fn path_for(&self, method: Method, digits: u32) -> PathBuf {
        self.dir.join(format!("{}-d{digits}.zeros", method.as_str()))
    }

    /// Load the file for `(method, digits)`, or an empty one if absent.
    pub fn open(&self, method: Method, digits: u32) -> Result<ZeroCacheFile> {
        let p = self.path_for(method, digits);
        if p.exists() {
            let f = ZeroCacheFile::read(&p)?;
            if f.header.method != method || f.header.digits != digits {
                return Err(ZetaError::Integrity { line: 1, reason: format!("{} header does not match its name", p.display()) });
            }
            Ok(f)
        } else {
            Ok(ZeroCacheFile::new(digits, method))
        }
    }

    pub fn save(&self, file: &ZeroCacheFile) -> Result<()> {
        file.write_atomic(&self.path_for(file.header.method, file.header.digits))
    }

    /// Every cache file in the directory, validated.
    pub fn files(&self) -> Result<Vec<ZeroCacheFile>> {
        let mut out = Vec::new();
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e.into()),
        };
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "zeros"))
            .collect();
        paths.sort();
        for p in paths {
            out.push(ZeroCacheFile::read(&p).map_err(|e| match e {
                ZetaError::Integrity { line, reason } => {
                    ZetaError::Integrity { line, reason: format!("{}: {reason}", p.display()) }
                }
                other => other,
            })?);
        }
        Ok(out)
    }

    /// The most precise file holding all of `lo..=hi`, exact ordinates first.
    pub fn best_covering(&self, lo: u64, hi: u64) -> Result<Option<ZeroCacheFile>> {
        let mut best: Option<ZeroCacheFile> = None;
        for f in self.files()? {
            if !f.missing(lo, hi).is_empty() {
                continue;
            }
            let rank = |f: &ZeroCacheFile| (f.header.method == Method::ExactEq, f.header.digits);
            if best.as_ref().is_none_or(|b| rank(&f) > rank(b)) {
                best = Some(f);
            }
        }
        Ok(best)
    }

    /// Records for `lo..=hi` from the best covering file, or the gap of the
    /// fullest file.
    pub fn zeros(&self, lo: u64, hi: u64) -> Result<Vec<ZeroRecord>> {
        if let Some(f) = self.best_covering(lo, hi)? {
            return f.range(lo, hi);
        }
        let files = self.files()?;
        match files.iter().min_by_key(|f| f.missing(lo, hi).len()) {
            Some(f) => f.range(lo, hi),
            None => Err(ZetaError::Gap { first: lo, last: hi }),
        }
    }
}

/// Ordinates from an external table: one decimal per line, line `k`
/// (1-based, blank and `#` lines skipped) being zero `offset + k`.
pub fn read_ordinates(text: &str, offset: u64) -> Result<Vec<ZeroRecord>> {
    let mut out = Vec::new();
    let mut k = 0u64;
    let mut prev = f64::NEG_INFINITY;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        k += 1;
        let bad = |reason: String| ZetaError::Integrity { line: i + 1, reason };
        if !valid_decimal(line) {
            return Err(bad(format!("bad ordinate `{line}`")));
        }
        let v: f64 = line.parse().map_err(|_| bad(format!("bad ordinate `{line}`")))?;
        if v <= prev {
            return Err(bad(format!("ordinate `{line}` does not increase")));
        }
        prev = v;
        out.push(ZeroRecord {
            n: offset + k,
            y: line.to_string(),
            digits_certified: significant_digits(line) as u32,
            method: Method::Imported,
            residual: f64::NAN,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(n: u64, y: &str, digits: u32) -> ZeroRecord {
        ZeroRecord { n, y: y.into(), digits_certified: digits, method: Method::AsymptoticEq, residual: 0.0 }
    }

    #[test]
    fn roundtrip() {
        let mut f = ZeroCacheFile::new(12, Method::AsymptoticEq);
        assert!(f.insert(&rec(2, "21.0220396387716", 15)).unwrap());
        assert!(f.insert(&rec(1, "14.1347251417347", 15)).unwrap());
        assert!(!f.insert(&rec(1, "14.1347251417347", 15)).unwrap());
        let text = f.render();
        assert_eq!(
            text,
            "zeta-zeros-cache format_version=1 digits=12 method=asymptotic_eq\n1 14.1347251417\n2 21.0220396388\n"
        );
        let back = ZeroCacheFile::parse(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.render(), text);
    }

    #[test]
    fn rejects_broken_rows() {
        let head = "zeta-zeros-cache format_version=1 digits=4 method=exact_eq\n";
        let cases = [
            ("1 14.134\n", 2),
            ("2 21.02\n1 14.13\n", 3),
            ("1 21.02\n2 14.13\n", 3),
            ("1 14.13\n1 14.14\n", 3),
            ("1 1e1\n", 2),
            ("1 14.13 x\n", 2),
            ("0 14.13\n", 2),
        ];
        assert!(ZeroCacheFile::parse(&format!("{head}1 14.13\n")).is_ok());
        for (body, line) in cases {
            match ZeroCacheFile::parse(&format!("{head}{body}")) {
                Err(ZetaError::Integrity { line: l, .. }) => assert_eq!(l, line, "{body}"),
                other => panic!("{body}: {other:?}"),
            }
        }
        assert!(ZeroCacheFile::parse("zeta-zeros-cache format_version=2 digits=4 method=exact_eq\n").is_err());
        assert!(ZeroCacheFile::parse("bogus\n").is_err());
    }

    #[test]
    fn insert_checks() {
        let mut f = ZeroCacheFile::new(12, Method::AsymptoticEq);
        assert!(f.insert(&rec(1, "14.13", 4)).is_err());
        let mut e = rec(1, "14.1347251417347", 15);
        e.method = Method::ExactEq;
        assert!(f.insert(&e).is_err());
        f.insert(&rec(3, "25.0108575801457", 15)).unwrap();
        assert!(matches!(f.insert(&rec(2, "26.0", 15)), Err(ZetaError::NotIncreasing(3))));
        assert_eq!(f.missing(1, 4), vec![1, 2, 4]);
        assert!(matches!(f.range(1, 4), Err(ZetaError::Gap { first: 1, last: 2 })));
    }

    #[test]
    fn store_files() {
        let dir = tempfile::tempdir().unwrap();
        let store = ZeroStore::new(dir.path());
        let mut f = store.open(Method::AsymptoticEq, 12).unwrap();
        assert!(f.is_empty());
        f.insert(&rec(1, "14.1347251417347", 15)).unwrap();
        f.insert(&rec(2, "21.0220396387716", 15)).unwrap();
        store.save(&f).unwrap();
        let again = store.open(Method::AsymptoticEq, 12).unwrap();
        assert_eq!(again, f);
        assert_eq!(store.zeros(1, 2).unwrap().len(), 2);
        assert!(matches!(store.zeros(1, 3), Err(ZetaError::Gap { first: 3, last: 3 })));
        let p = store.path_for(Method::AsymptoticEq, 12);
        let text = std::fs::read_to_string(&p).unwrap().replace("21.0220396388", "21.022039638");
        std::fs::write(&p, text).unwrap();
        assert!(matches!(store.files(), Err(ZetaError::Integrity { line: 3, .. })));
    }

    #[test]
    fn external_ordinates() {
        let recs = read_ordinates("# header\n14.134725142\n\n21.022039639\n", 0).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1].n, 2);
        assert_eq!(recs[1].digits_certified, 11);
        assert_eq!(read_ordinates("100.5\n", 99).unwrap()[0].n, 100);
        assert!(read_ordinates("2\n1\n", 0).is_err());
        assert!(matches!(read_ordinates("1\nx\n", 0), Err(ZetaError::Integrity { line: 2, .. })));
    }
}
