//! Numeric settings: defaults, an optional TOML file, then command-line flags.

use std::path::Path;

use pairker::oracle::DEFAULT_CUTOFF;
use pairker::CircleTol;
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub tol_circle: f64,
    pub order: usize,
    pub cutoff: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tol_circle: CircleTol::default().0,
            order: 64,
            cutoff: DEFAULT_CUTOFF,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSettings {
    tol_circle: Option<f64>,
    order: Option<usize>,
    cutoff: Option<f64>,
}

impl Settings {
    pub fn tol(&self) -> CircleTol {
        CircleTol(self.tol_circle)
    }

    /// Overlays the keys present in a config file.
    pub fn with_file(self, path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        self.with_toml(&text)
            .map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    pub fn with_toml(self, text: &str) -> Result<Self, String> {
        let file: FileSettings = toml::from_str(text).map_err(|e| e.to_string())?;
        Ok(self.overlay(file.tol_circle, file.order, file.cutoff))
    }

    pub fn overlay(
        self,
        tol_circle: Option<f64>,
        order: Option<usize>,
        cutoff: Option<f64>,
    ) -> Self {
        Self {
            tol_circle: tol_circle.unwrap_or(self.tol_circle),
            order: order.unwrap_or(self.order),
            cutoff: cutoff.unwrap_or(self.cutoff),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.tol_circle > 0.0 && self.tol_circle < 0.5) {
            return Err(format!(
                "tol_circle must lie in (0, 0.5), got {}",
                self.tol_circle
            ));
        }
        if self.order == 0 {
            return Err("order must be at least 1".into());
        }
        if !(self.cutoff > 0.0 && self.cutoff < 1.0) {
            return Err(format!("cutoff must lie in (0, 1), got {}", self.cutoff));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_keys_overlay_defaults() {
        let s = Settings::default()
            .with_toml("order = 128\ncutoff = 1e-10\n")
            .unwrap();
        assert_eq!(s.order, 128);
        assert_eq!(s.cutoff, 1e-10);
        assert_eq!(s.tol_circle, 1e-9);
        let s = s.overlay(None, Some(32), None);
        assert_eq!(s.order, 32);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(Settings::default().with_toml("tolerance = 1").is_err());
    }
}
