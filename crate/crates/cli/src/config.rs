use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Settings shared by every command. Loaded from TOML, then overridden by flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub sigma_truncation: usize,
    pub snap_tol: f64,
    pub grid_step: f64,
    pub max_radius: f64,
    pub output_dir: PathBuf,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            sigma_truncation: 60,
            snap_tol: 1e-12,
            grid_step: 0.25,
            max_radius: 8.0,
            output_dir: PathBuf::from("out"),
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.sigma_truncation < 20 {
            return Err(format!("sigma_truncation must be at least 20, got {}", self.sigma_truncation));
        }
        if !(self.snap_tol > 0.0 && self.snap_tol <= 1e-9) {
            return Err(format!("snap_tol must lie in (0, 1e-9], got {}", self.snap_tol));
        }
        if !(self.grid_step > 0.0 && self.grid_step <= 0.5) {
            return Err(format!("grid_step must lie in (0, 0.5], got {}", self.grid_step));
        }
        if !(self.max_radius > 0.0 && self.max_radius <= 50.0) {
            return Err(format!("max_radius must lie in (0, 50], got {}", self.max_radius));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn invariants_are_enforced() {
        let bad = [
            RunConfig { sigma_truncation: 19, ..Default::default() },
            RunConfig { snap_tol: 0.0, ..Default::default() },
            RunConfig { snap_tol: 1e-8, ..Default::default() },
            RunConfig { grid_step: 0.6, ..Default::default() },
            RunConfig { max_radius: 51.0, ..Default::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn toml_partial_override() {
        let c: RunConfig = toml::from_str("grid_step = 0.125\nformat = \"csv\"").unwrap();
        assert_eq!(c.grid_step, 0.125);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.sigma_truncation, 60);
        assert!(toml::from_str::<RunConfig>("gridstep = 1").is_err());
    }
}
