//! Run configuration: a flat `key = value` file, overridden by flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use strata::tracer::TraceConfig;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Local error tolerance of the trajectory integrator.
    pub step_tolerance: f64,
    /// Capture radius, in units of the differential's scale.
    pub capture: f64,
    /// Escape radius, in units of the differential's scale.
    pub escape: f64,
    /// Transverse-period tolerance of the short-trajectory detector.
    pub short_tolerance: f64,
    pub max_steps: usize,
    pub out: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let t = TraceConfig::default();
        Self {
            step_tolerance: t.tolerance,
            capture: t.capture_factor,
            escape: t.escape_factor,
            short_tolerance: strata::scanner::SHORT_TOL,
            max_steps: t.max_steps,
            out: PathBuf::from("."),
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("step_tolerance", self.step_tolerance),
            ("capture", self.capture),
            ("escape", self.escape),
            ("short_tolerance", self.short_tolerance),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Input(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_steps == 0 {
            return Err(CliError::Input("max_steps must be positive".into()));
        }
        Ok(())
    }

    pub fn trace_config(&self) -> TraceConfig {
        TraceConfig {
            tolerance: self.step_tolerance,
            max_steps: self.max_steps,
            escape_factor: self.escape,
            capture_factor: self.capture,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_defaults() {
        let c: RunConfig = toml::from_str("step_tolerance = 1e-10\nseed = 7\n").unwrap();
        assert_eq!(c.step_tolerance, 1e-10);
        assert_eq!(c.seed, 7);
        assert_eq!(c.max_steps, RunConfig::default().max_steps);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("tolerence = 1e-10").is_err());
    }

    #[test]
    fn non_positive_tolerance_is_rejected() {
        let c = RunConfig { capture: 0.0, ..RunConfig::default() };
        assert!(c.validate().is_err());
    }
}
