use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lsabr_core::calibration::Objective;
use lsabr_core::fd::Lattice;
use lsabr_core::presets;

use crate::config::{
    BoundaryName, CalibrateConfig, FdRunConfig, Job, LatticeConfig, McRunConfig, ModelConfig, OutputConfig,
    PriceConfig, ResidualConfig, RunConfig, SynthConfig,
};
use crate::error::{CliError, Result};
use crate::table::Format;

/// Pricing, residual, finite-difference, Monte Carlo and calibration runs
/// for the λSABR model.
#[derive(Debug, Parser)]
#[command(name = "lsabr", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prices and implied vols on a (y, T) or (K, T) lattice.
    Price(PriceArgs),
    /// PDE residual norms of the closed-form prices.
    Residual(ResidualArgs),
    /// Finite-difference benchmark and comparison table.
    Fd(FdArgs),
    /// Monte Carlo benchmark across strikes.
    Mc(McArgs),
    /// Daily least-squares calibration of (ν, σ, ρ).
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Named parameter set (table4, table5-rowN, fd1-rowN, fd2-rowN, mc-paper).
    #[arg(long)]
    pub preset: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Print the resolved configuration as TOML and exit.
    #[arg(long)]
    pub print_config: bool,
    /// Run from a configuration written by --print-config (other options are ignored).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub kappa0: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
}

impl ModelArgs {
    fn resolve(&self, base: ModelConfig) -> ModelConfig {
        ModelConfig {
            sigma: self.sigma.unwrap_or(base.sigma),
            nu: self.nu.unwrap_or(base.nu),
            rho: self.rho.unwrap_or(base.rho),
            kappa0: self.kappa0.unwrap_or(base.kappa0),
            theta: self.theta.unwrap_or(base.theta),
        }
    }
}

fn default_model() -> ModelConfig {
    ModelConfig {
        sigma: 0.2,
        nu: 0.5,
        rho: -0.3,
        kappa0: 0.0,
        theta: 0.0,
    }
}

#[derive(Debug, Args)]
pub struct PriceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub params: ModelArgs,
    /// Models among sa2, d, h, h_raw, bs, kappa.
    #[arg(long = "model", value_delimiter = ',', default_value = "sa2,d,h,bs")]
    pub models: Vec<String>,
    /// Expiries in years; `lo:hi:n` expands to n nodes.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub t: Vec<String>,
    /// Log-moneyness values; `lo:hi:n` expands to n nodes.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub y: Vec<String>,
    /// Strikes; when given, rows run over strikes at --spot instead of --y.
    #[arg(long, value_delimiter = ',')]
    pub strike: Vec<String>,
    #[arg(long, default_value_t = 1.0)]
    pub spot: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub rate: f64,
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub params: ModelArgs,
    #[arg(long = "model", value_delimiter = ',')]
    pub models: Option<Vec<String>>,
    /// `lo:hi:n` lattice in T.
    #[arg(long)]
    pub t_range: Option<String>,
    #[arg(long)]
    pub sigma_range: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub y_range: Option<String>,
    #[arg(long)]
    pub strike_scale: Option<f64>,
    /// Multiplier applied to reported residuals.
    #[arg(long)]
    pub report_scale: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FdArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Finest refinement level.
    #[arg(long)]
    pub levels: Option<u32>,
    /// Level 0 only, without the cut-off run.
    #[arg(long)]
    pub quick: bool,
    #[arg(long)]
    pub no_cutoff: bool,
    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryName>,
    /// Start from the nodal payoff instead of cell averages.
    #[arg(long)]
    pub nodal_payoff: bool,
    /// Write the finest surface as x,sigma,value CSV.
    #[arg(long)]
    pub surface: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub params: ModelArgs,
    #[arg(long)]
    pub spot: Option<f64>,
    /// Strikes; `lo:hi:n` expands to n nodes.
    #[arg(long, value_delimiter = ',')]
    pub strike: Vec<String>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rate: Option<f64>,
    #[arg(long)]
    pub paths: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub no_antithetic: bool,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Quote CSV: day,type,expiry_months,delta,implied_vol.
    #[arg(long)]
    pub quotes: Option<PathBuf>,
    /// Objectives such as sigma_d, price_h, log_price_sa2, price_kappa.
    #[arg(long = "objective", value_delimiter = ',', default_value = "sigma_d")]
    pub objectives: Vec<String>,
    /// First-day starting point `nu,sigma,rho`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub init: Option<Vec<f64>>,
    #[arg(long)]
    pub kappa0: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Generate a synthetic panel of this many days instead of reading quotes.
    #[arg(long)]
    pub synthetic_days: Option<usize>,
    /// Absolute vol noise of the synthetic panel.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Volatility objective generating the synthetic quotes.
    #[arg(long, default_value = "sigma_d")]
    pub generator: String,
    /// Generator parameters for the synthetic panel.
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Also write the panel statistics (ise, ose, nu_mean, nu_std, ...) here.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

/// Expands `a,b,lo:hi:n,...` into values.
pub fn parse_list(items: &[String], name: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in items {
        let item = item.trim();
        if item.contains(':') {
            out.extend(parse_lattice(item, name)?.nodes());
        } else {
            out.push(parse_f64(item, name)?);
        }
    }
    Ok(out)
}

fn parse_f64(s: &str, name: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| CliError::usage(format!("--{name}: `{s}` is not a number")))
}

pub fn parse_lattice(s: &str, name: &str) -> Result<Lattice> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!("--{name}: expected lo:hi:n, got `{s}`")));
    }
    let n = parts[2]
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("--{name}: `{}` is not a count", parts[2])))?;
    Ok(Lattice::new(parse_f64(parts[0], name)?, parse_f64(parts[1], name)?, n))
}

fn preset_row(preset: &str, prefix: &str) -> Option<usize> {
    preset.strip_prefix(prefix)?.parse().ok()
}

fn unknown_preset(name: &str, command: &str) -> CliError {
    CliError::usage(format!("unknown preset `{name}` for `{command}`"))
}

fn output(common: &CommonArgs) -> OutputConfig {
    OutputConfig {
        format: common.format.unwrap_or_default(),
        out: common.out.clone(),
    }
}

fn nonempty(values: Vec<f64>, name: &str) -> Result<Vec<f64>> {
    if values.is_empty() {
        Err(CliError::usage(format!("--{name}: empty list")))
    } else {
        Ok(values)
    }
}

pub fn resolve_price(a: &PriceArgs) -> Result<RunConfig> {
    if let Some(p) = &a.common.preset {
        return Err(unknown_preset(p, "price"));
    }
    let strikes = parse_list(&a.strike, "strike")?;
    Ok(RunConfig {
        output: output(&a.common),
        job: Job::Price(PriceConfig {
            models: a.models.clone(),
            t: nonempty(parse_list(&a.t, "t")?, "t")?,
            y: if strikes.is_empty() {
                nonempty(parse_list(&a.y, "y")?, "y")?
            } else {
                Vec::new()
            },
            spot: a.spot,
            strikes,
            rate: a.rate,
            model: a.params.resolve(default_model()),
        }),
    })
}

pub fn resolve_residual(a: &ResidualArgs) -> Result<RunConfig> {
    let preset = a.common.preset.as_deref().unwrap_or("table4");
    let (case, report_scale, published) = if preset == "table4" {
        (presets::table4(), 1e3, presets::TABLE4_VALUES)
    } else if let Some(row) = preset_row(preset, "table5-row") {
        let case = presets::table5(row).ok_or_else(|| unknown_preset(preset, "residual"))?;
        (case, 1e2, presets::TABLE5_VALUES[row - 1])
    } else {
        return Err(unknown_preset(preset, "residual"));
    };
    let models = a
        .models
        .clone()
        .unwrap_or_else(|| ["h", "d", "sa2", "bs"].map(String::from).to_vec());
    let published = if a.models.is_none() {
        published.to_vec()
    } else {
        Vec::new()
    };
    let lattice = |arg: &Option<String>, base: Lattice, name: &str| -> Result<LatticeConfig> {
        Ok(match arg {
            Some(s) => parse_lattice(s, name)?.into(),
            None => base.into(),
        })
    };
    let custom_region = a.t_range.is_some() || a.sigma_range.is_some() || a.y_range.is_some();
    Ok(RunConfig {
        output: output(&a.common),
        job: Job::Residual(ResidualConfig {
            models,
            strike_scale: a.strike_scale.unwrap_or(case.region.strike_scale),
            report_scale: a.report_scale.unwrap_or(report_scale),
            published: if custom_region { Vec::new() } else { published },
            model: a.params.resolve(case.params.into()),
            t: lattice(&a.t_range, case.region.t, "t-range")?,
            sigma: lattice(&a.sigma_range, case.region.sigma, "sigma-range")?,
            y: lattice(&a.y_range, case.region.y, "y-range")?,
        }),
    })
}

pub fn resolve_fd(a: &FdArgs) -> Result<RunConfig> {
    let case = match a.common.preset.as_deref() {
        None => presets::fd1(8).expect("row exists"),
        Some(p) => preset_row(p, "fd1-row")
            .and_then(presets::fd1)
            .or_else(|| preset_row(p, "fd2-row").and_then(presets::fd2))
            .ok_or_else(|| unknown_preset(p, "fd"))?,
    };
    let mut c = FdRunConfig::with_defaults(
        a.t.unwrap_or(case.expiry),
        a.nu.unwrap_or(case.nu),
        a.rho.unwrap_or(case.rho),
    );
    if let Some(l) = a.levels {
        c.levels = l;
    }
    if a.quick {
        c.levels = 0;
        c.cutoff = false;
    }
    if a.no_cutoff {
        c.cutoff = false;
    }
    if let Some(b) = a.boundary {
        c.boundary = b;
    }
    c.smooth_payoff = !a.nodal_payoff;
    c.surface = a.surface.clone();
    Ok(RunConfig {
        output: output(&a.common),
        job: Job::Fd(c),
    })
}

pub fn resolve_mc(a: &McArgs) -> Result<RunConfig> {
    let case = match a.common.preset.as_deref() {
        None | Some("mc-paper") => presets::mc_benchmark(),
        Some(p) => return Err(unknown_preset(p, "mc")),
    };
    let strikes = parse_list(&a.strike, "strike")?;
    Ok(RunConfig {
        output: output(&a.common),
        job: Job::Mc(McRunConfig {
            spot: a.spot.unwrap_or(case.query.spot),
            strikes: if strikes.is_empty() {
                vec![case.query.strike]
            } else {
                strikes
            },
            t: a.t.unwrap_or(case.query.expiry),
            rate: a.rate.unwrap_or(case.query.rate),
            paths: a.paths.unwrap_or(case.config.n_paths),
            dt: a.dt.unwrap_or(case.config.dt),
            seed: a.seed.unwrap_or(case.config.seed),
            antithetic: !a.no_antithetic,
            model: a.params.resolve(case.params.into()),
        }),
    })
}

pub fn resolve_calibrate(a: &CalibrateArgs) -> Result<RunConfig> {
    if let Some(p) = &a.common.preset {
        return Err(unknown_preset(p, "calibrate"));
    }
    let synthetic = a.synthetic_days.map(|days| SynthConfig {
        days,
        noise: a.noise,
        seed: a.seed,
        generator: a.generator.clone(),
        nu: a.nu.unwrap_or(1.3),
        sigma: a.sigma.unwrap_or(0.19),
        rho: a.rho.unwrap_or(-0.55),
    });
    if synthetic.is_some() == a.quotes.is_some() {
        return Err(CliError::usage("give exactly one of --quotes and --synthetic-days"));
    }
    let init = match a.init.as_deref() {
        Some(&[nu, sigma, rho]) => [nu, sigma, rho],
        Some(_) => return Err(CliError::usage("--init expects nu,sigma,rho")),
        None => [1.0, 0.2, -0.3],
    };
    let optimizer = lsabr_core::calibration::NelderMeadOptions::default();
    Ok(RunConfig {
        output: output(&a.common),
        job: Job::Calibrate(CalibrateConfig {
            objectives: a.objectives.clone(),
            init,
            kappa0: a.kappa0.unwrap_or(Objective::DEFAULT_KAPPA0),
            theta: a.theta.unwrap_or(Objective::DEFAULT_THETA),
            f_tol: optimizer.f_tol,
            max_iterations: a.max_iterations.unwrap_or(optimizer.max_iterations),
            quotes: a.quotes.clone(),
            synthetic,
            summary: a.summary.clone(),
        }),
    })
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Price(a) => &a.common,
            Command::Residual(a) => &a.common,
            Command::Fd(a) => &a.common,
            Command::Mc(a) => &a.common,
            Command::Calibrate(a) => &a.common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Price(_) => "price",
            Command::Residual(_) => "residual",
            Command::Fd(_) => "fd",
            Command::Mc(_) => "mc",
            Command::Calibrate(_) => "calibrate",
        }
    }

    /// The run described by the flags, or by `--config` when given.
    pub fn resolve(&self) -> Result<RunConfig> {
        if let Some(path) = &self.common().config {
            let cfg = RunConfig::load(path)?;
            if cfg.job.name() != self.name() {
                return Err(CliError::usage(format!(
                    "{} holds a `{}` run, not `{}`",
                    path.display(),
                    cfg.job.name(),
                    self.name()
                )));
            }
            return Ok(cfg);
        }
        match self {
            Command::Price(a) => resolve_price(a),
            Command::Residual(a) => resolve_residual(a),
            Command::Fd(a) => resolve_fd(a),
            Command::Mc(a) => resolve_mc(a),
            Command::Calibrate(a) => resolve_calibrate(a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_expansion() {
        let v = parse_list(&["0.1".into(), "1:2:3".into()], "t").unwrap();
        assert_eq!(v, vec![0.1, 1.0, 1.5, 2.0]);
        assert!(parse_list(&["x".into()], "t").is_err());
        assert!(parse_lattice("1:2", "t").is_err());
    }
}
