use std::path::{Path, PathBuf};

use serde::Deserialize;
use zeta_zeros::{Result, ZetaError};

use crate::output::Format;

pub const DEFAULT_CACHE_DIR: &str = "zeta-zeros-cache";
pub const CACHE_ENV: &str = "ZETA_ZEROS_CACHE";

/// Optional TOML run configuration; every field may be overridden on the
/// command line.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub digits: Option<u32>,
    pub delta_schedule: Option<Vec<f64>>,
    pub n_range: Option<(u64, u64)>,
    pub output_format: Option<Format>,
    pub cache_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ZetaError::Io(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig =
            toml::from_str(&text).map_err(|e| ZetaError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(d) = self.digits {
            check_digits(d)?;
        }
        if let Some((lo, hi)) = self.n_range {
            if lo == 0 || hi < lo {
                return Err(ZetaError::Config(format!("n_range must be nonempty with n >= 1, got [{lo}, {hi}]")));
            }
        }
        if let Some(s) = &self.delta_schedule {
            if s.is_empty() || s.windows(2).any(|w| !(w[1] < w[0])) || s.iter().any(|d| !(*d > 0.0 && *d < 1e-2)) {
                return Err(ZetaError::Config("delta_schedule must be strictly decreasing within (0, 1e-2)".into()));
            }
        }
        Ok(())
    }
}

pub fn check_digits(d: u32) -> Result<()> {
    if d < 15 {
        return Err(ZetaError::Config(format!("digits must be >= 15, got {d}")));
    }
    Ok(())
}
