//! Defaults from `NAQC_CONFIG`, overridden by flags.

use std::path::Path;

use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const ENV_VAR: &str = "NAQC_CONFIG";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    grid_theta: Option<usize>,
    grid_phi: Option<usize>,
    tolerance: Option<f64>,
    seed: Option<u64>,
    trials: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub grid_theta: usize,
    pub grid_phi: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub trials: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            grid_theta: 64,
            grid_phi: 32,
            tolerance: 1e-9,
            seed: 0,
            trials: 10_000,
        }
    }
}

impl Settings {
    /// Built-in defaults, replaced field by field from the file named by
    /// `NAQC_CONFIG` when it is set.
    pub fn load() -> CliResult<Self> {
        match std::env::var_os(ENV_VAR) {
            Some(path) => Self::from_file(Path::new(&path)),
            None => Ok(Self::default()),
        }
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: shown.clone(),
            source,
        })?;
        let file: FileConfig = serde_json::from_str(&text).map_err(|e| CliError::Parse {
            path: shown,
            message: e.to_string(),
        })?;
        let base = Self::default();
        let s = Self {
            grid_theta: file.grid_theta.unwrap_or(base.grid_theta),
            grid_phi: file.grid_phi.unwrap_or(base.grid_phi),
            tolerance: file.tolerance.unwrap_or(base.tolerance),
            seed: file.seed.unwrap_or(base.seed),
            trials: file.trials.unwrap_or(base.trials),
        };
        s.check()?;
        Ok(s)
    }

    pub fn check(&self) -> CliResult<()> {
        if self.grid_theta < 2 || self.grid_phi < 1 {
            return Err(CliError::Usage(format!(
                "grid must be at least 2×1, got {}×{}",
                self.grid_theta, self.grid_phi
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(CliError::Usage(format!("tolerance {} must be positive", self.tolerance)));
        }
        if self.trials == 0 {
            return Err(CliError::Usage("trials must be at least 1".into()));
        }
        Ok(())
    }
}
