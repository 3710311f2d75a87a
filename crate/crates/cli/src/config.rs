//! Resolved run configurations. Every run is fully described by one
//! [`RunConfig`]; `--print-config` renders it as TOML and `--config` reads
//! it back.

use std::path::{Path, PathBuf};

use lsabr_core::fd::{Boundary, FdConfig, Lattice, ResidualRegion, Window};
use lsabr_core::SabrParams;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::table::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub sigma: f64,
    pub nu: f64,
    pub rho: f64,
    pub kappa0: f64,
    pub theta: f64,
}

impl ModelConfig {
    pub fn params(&self) -> Result<SabrParams> {
        SabrParams::new(self.sigma, self.nu, self.rho, self.kappa0, self.theta).map_err(usage)
    }
}

/// Parameter validation failures are the caller's mistake, not a numeric one.
fn usage(e: lsabr_core::Error) -> CliError {
    CliError::usage(e.to_string())
}

impl From<SabrParams> for ModelConfig {
    fn from(p: SabrParams) -> Self {
        Self {
            sigma: p.sigma0,
            nu: p.nu,
            rho: p.rho,
            kappa0: p.kappa0,
            theta: p.theta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriceConfig {
    pub models: Vec<String>,
    pub t: Vec<f64>,
    /// Log-moneyness lattice (used when `strikes` is empty).
    pub y: Vec<f64>,
    pub spot: f64,
    pub strikes: Vec<f64>,
    pub rate: f64,
    pub model: ModelConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl From<Lattice> for LatticeConfig {
    fn from(l: Lattice) -> Self {
        Self {
            lo: l.lo,
            hi: l.hi,
            n: l.n,
        }
    }
}

impl From<LatticeConfig> for Lattice {
    fn from(l: LatticeConfig) -> Self {
        Lattice::new(l.lo, l.hi, l.n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualConfig {
    pub models: Vec<String>,
    pub strike_scale: f64,
    /// Reported values are `R × report_scale`.
    pub report_scale: f64,
    /// Published values in `models` order, when the run is a preset.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub published: Vec<f64>,
    pub model: ModelConfig,
    pub t: LatticeConfig,
    pub sigma: LatticeConfig,
    pub y: LatticeConfig,
}

impl ResidualConfig {
    pub fn region(&self) -> ResidualRegion {
        ResidualRegion {
            t: self.t.into(),
            sigma: self.sigma.into(),
            y: self.y.into(),
            strike_scale: self.strike_scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryName {
    BlackScholes,
    Zero,
}

impl From<BoundaryName> for Boundary {
    fn from(b: BoundaryName) -> Self {
        match b {
            BoundaryName::BlackScholes => Boundary::BlackScholes,
            BoundaryName::Zero => Boundary::Zero,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdRunConfig {
    pub t: f64,
    pub nu: f64,
    pub rho: f64,
    pub levels: u32,
    pub cutoff: bool,
    pub x_max: f64,
    pub sigma_center: f64,
    pub sigma_max: f64,
    pub nx0: usize,
    pub nsigma0: usize,
    pub safety: f64,
    pub boundary: BoundaryName,
    pub smooth_payoff: bool,
    pub window_x: [f64; 2],
    pub window_sigma: [f64; 2],
    /// Finest surface as `x,sigma,value` CSV.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<PathBuf>,
}

impl FdRunConfig {
    pub fn with_defaults(t: f64, nu: f64, rho: f64) -> Self {
        let d = FdConfig::default();
        Self {
            t,
            nu,
            rho,
            levels: 2,
            cutoff: true,
            x_max: d.x_max,
            sigma_center: d.sigma_center,
            sigma_max: d.sigma_max,
            nx0: d.nx0,
            nsigma0: d.nsigma0,
            safety: d.safety,
            boundary: BoundaryName::BlackScholes,
            smooth_payoff: d.smooth_payoff,
            window_x: [d.window.x.0, d.window.x.1],
            window_sigma: [d.window.sigma.0, d.window.sigma.1],
            surface: None,
        }
    }

    pub fn solver(&self) -> FdConfig {
        FdConfig {
            x_max: self.x_max,
            sigma_center: self.sigma_center,
            sigma_max: self.sigma_max,
            nx0: self.nx0,
            nsigma0: self.nsigma0,
            safety: self.safety,
            boundary: self.boundary.into(),
            smooth_payoff: self.smooth_payoff,
            window: Window {
                x: (self.window_x[0], self.window_x[1]),
                sigma: (self.window_sigma[0], self.window_sigma[1]),
            },
        }
    }

    pub fn params(&self) -> Result<SabrParams> {
        SabrParams::sabr(self.sigma_center, self.nu, self.rho).map_err(usage)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McRunConfig {
    pub spot: f64,
    pub strikes: Vec<f64>,
    pub t: f64,
    pub rate: f64,
    pub paths: usize,
    pub dt: f64,
    pub seed: u64,
    pub antithetic: bool,
    pub model: ModelConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub days: usize,
    pub noise: f64,
    pub seed: u64,
    /// Volatility objective whose model generates the quotes.
    pub generator: String,
    pub nu: f64,
    pub sigma: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrateConfig {
    pub objectives: Vec<String>,
    /// Starting `(ν, σ, ρ)` for the first day.
    pub init: [f64; 3],
    pub kappa0: f64,
    pub theta: f64,
    pub f_tol: f64,
    pub max_iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotes: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SynthConfig>,
    /// Per-objective panel statistics, one row per objective.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Job {
    Price(PriceConfig),
    Residual(ResidualConfig),
    Fd(FdRunConfig),
    Mc(McRunConfig),
    Calibrate(CalibrateConfig),
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Price(_) => "price",
            Job::Residual(_) => "residual",
            Job::Fd(_) => "fd",
            Job::Mc(_) => "mc",
            Job::Calibrate(_) => "calibrate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub output: OutputConfig,
    pub job: Job,
}

impl RunConfig {
    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        Self::from_toml(&text)
    }
}
