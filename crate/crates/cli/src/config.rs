//! TOML configuration of the `simulate` command.

use crate::commands::CoeffsReport;
use crate::error::{CliError, Result};
use couette_core::gldyn::{SimConfig, DEFAULT_DT};
use couette_core::landau::GLCoefficients;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub seed: Option<u64>,
    pub grid: GridSection,
    pub coefficients: CoeffSection,
    pub base: BaseSection,
    pub perturbation: PerturbationSection,
    pub run: RunSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "default_modes")]
    pub modes: usize,
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Domain holds this many wavelengths of the base wavenumber.
    pub periods: Option<usize>,
    /// Explicit domain length; required when the base has zero wavenumber.
    pub length: Option<f64>,
}

/// Either explicit a3, c, b4 or a `coeffs` JSON file; tau is always explicit.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffSection {
    pub tau: f64,
    pub a3: Option<f64>,
    pub c: Option<f64>,
    pub b4: Option<f64>,
    pub from: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseKind {
    Zero,
    Wavy,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSection {
    pub kind: BaseKind,
    /// Wavenumber B0 = beta0 R of a wavy base (0 gives Taylor vortices).
    #[serde(default)]
    pub bbeta: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSection {
    /// Signed Fourier index on the domain.
    pub mode: i64,
    #[serde(default = "default_amp")]
    pub amplitude: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub t_end: f64,
    #[serde(default = "default_stride")]
    pub stride: usize,
    pub window: [f64; 2],
}

fn default_modes() -> usize {
    128
}
fn default_dt() -> f64 {
    DEFAULT_DT
}
fn default_amp() -> f64 {
    1e-9
}
fn default_stride() -> usize {
    100
}

impl SimulateConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        if let (Some(f), Some(dir)) = (&cfg.coefficients.from, path.parent()) {
            if f.is_relative() {
                cfg.coefficients.from = Some(dir.join(f));
            }
        }
        Ok(cfg)
    }

    pub fn coefficients(&self) -> Result<GLCoefficients> {
        let s = &self.coefficients;
        let (a3, c, b4) = match (&s.from, s.a3, s.c, s.b4) {
            (Some(p), None, None, None) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                let r: CoeffsReport = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                (r.a3, r.c, r.b4_bvp)
            }
            (None, Some(a3), Some(c), Some(b4)) => (a3, c, b4),
            _ => return Err(CliError::Config("coefficients need either `from` or all of a3, c, b4".into())),
        };
        Ok(GLCoefficients { a3, c, b4, reynolds: 1.0, tau: s.tau, beta: 0.0 })
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        let g = &self.grid;
        let domain_length = match (g.length, self.base.kind, self.base.bbeta) {
            (Some(l), _, _) => l,
            (None, BaseKind::Wavy, b) if b != 0.0 => SimConfig::length_for(b.abs(), g.periods.unwrap_or(8)),
            _ => return Err(CliError::Config("grid.length is required unless the base is wavy with B0 != 0".into())),
        };
        let cfg = SimConfig { domain_length, modes: g.modes, dt: g.dt, gl: self.coefficients()? };
        cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let r = &self.run;
        if !(r.t_end > 0.0 && r.window[0] < r.window[1] && r.window[1] <= r.t_end && r.window[0] >= 0.0) {
            return Err(CliError::Config("run needs t_end > 0 and 0 <= window[0] < window[1] <= t_end".into()));
        }
        if !(self.perturbation.amplitude > 0.0) {
            return Err(CliError::Config("perturbation amplitude must be positive".into()));
        }
        Ok(cfg)
    }
}
