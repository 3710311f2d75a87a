use std::str::FromStr;

use lsabr_core::calibration::{
    fit_panel, summarize, synth_panel, CalibrationResult, FitFlag, FitOptions, FitParams, NelderMeadOptions, Objective,
    PanelSummary,
};
use lsabr_core::expansion::{price_d, relative_price_sa2, sigma_d};
use lsabr_core::fd::{compare, cutoff_sensitivity, residual_norm, solve_sequence, FdSequence};
use lsabr_core::hagan::{price_h, sigma_h, Quotient};
use lsabr_core::math::{bs_implied_vol, c_rel, OptionQuery};
use lsabr_core::mc::{simulate_price, McConfig};
use lsabr_core::{norms, SabrParams};

use crate::config::{CalibrateConfig, FdRunConfig, Job, McRunConfig, PriceConfig, ResidualConfig, RunConfig};
use crate::error::{CliError, Result};
use crate::quotes::read_quotes;
use crate::table::{num, opt, Table};

/// Closed-form models selectable with `--model`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Sa2,
    D,
    H,
    HRaw,
    Bs,
    Kappa,
}

impl FromStr for ModelKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "sa2" => ModelKind::Sa2,
            "d" => ModelKind::D,
            "h" => ModelKind::H,
            "h_raw" => ModelKind::HRaw,
            "bs" => ModelKind::Bs,
            "kappa" => ModelKind::Kappa,
            other => {
                return Err(CliError::usage(format!(
                    "unknown model `{other}` (expected sa2, d, h, h_raw, bs or kappa)"
                )))
            }
        })
    }
}

impl ModelKind {
    fn name(self) -> &'static str {
        match self {
            ModelKind::Sa2 => "sa2",
            ModelKind::D => "d",
            ModelKind::H => "h",
            ModelKind::HRaw => "h_raw",
            ModelKind::Bs => "bs",
            ModelKind::Kappa => "kappa",
        }
    }

    /// Only `kappa` sees the mean-reversion parameters.
    fn params(self, p: &SabrParams) -> SabrParams {
        match self {
            ModelKind::Kappa => *p,
            _ => SabrParams {
                kappa0: 0.0,
                theta: 0.0,
                ..*p
            },
        }
    }

    /// Strike-normalized forward price at log-moneyness `y`.
    pub fn relative_price(self, y: f64, t: f64, p: &SabrParams) -> lsabr_core::Result<f64> {
        let p = self.params(p);
        match self {
            ModelKind::Sa2 | ModelKind::Kappa => relative_price_sa2(y, t, &p),
            ModelKind::D => price_d(y, t, &p),
            ModelKind::H => price_h(y, t, &p, Quotient::Regularized),
            ModelKind::HRaw => price_h(y, t, &p, Quotient::Raw),
            ModelKind::Bs => c_rel(y, p.sigma0, t),
        }
    }

    pub fn implied_vol(self, y: f64, t: f64, p: &SabrParams) -> lsabr_core::Result<f64> {
        let q = self.params(p);
        match self {
            ModelKind::Sa2 | ModelKind::Kappa => bs_implied_vol(self.relative_price(y, t, p)?, y, t),
            ModelKind::D => Ok(sigma_d(y, t, &q)?.value),
            ModelKind::H => sigma_h(y, t, &q, Quotient::Regularized),
            ModelKind::HRaw => sigma_h(y, t, &q, Quotient::Raw),
            ModelKind::Bs => Ok(q.sigma0),
        }
    }
}

fn parse_models(names: &[String]) -> Result<Vec<ModelKind>> {
    if names.is_empty() {
        return Err(CliError::usage("no models requested"));
    }
    names.iter().map(|n| n.parse()).collect()
}

pub fn run(config: &RunConfig) -> Result<()> {
    let (table, pending) = match &config.job {
        Job::Price(c) => (price(c)?, None),
        Job::Residual(c) => (residual(c)?, None),
        Job::Fd(c) => (fd(c)?, None),
        Job::Mc(c) => (mc(c)?, None),
        Job::Calibrate(c) => calibrate(c)?,
    };
    table.emit(config.output.format, config.output.out.as_deref())?;
    match pending {
        Some(err) => Err(err),
        None => Ok(()),
    }
}

pub fn price(c: &PriceConfig) -> Result<Table> {
    let models = parse_models(&c.models)?;
    let params = c.model.params()?;
    let by_strike = !c.strikes.is_empty();
    if !(c.rate.is_finite() && c.spot > 0.0 && c.spot.is_finite()) {
        return Err(CliError::usage("spot must be positive and rate finite"));
    }
    if c.t.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(CliError::usage("expiries must be nonnegative"));
    }
    if c.strikes.iter().any(|k| !(*k > 0.0 && k.is_finite())) {
        return Err(CliError::usage("strikes must be positive"));
    }
    let mut headers = vec!["y".to_string(), "t".to_string()];
    if by_strike {
        headers.push("strike".into());
    }
    for m in &models {
        headers.push(format!("price_{}", m.name()));
        headers.push(format!("vol_{}", m.name()));
    }
    headers.push("error".into());
    let mut table = Table::new(headers);

    let points: Vec<(f64, f64, f64)> = if by_strike {
        c.t.iter()
            .flat_map(|&t| c.strikes.iter().map(move |&k| (k, t)))
            .map(|(k, t)| {
                let q = OptionQuery::new(c.spot, k, c.rate, t)?;
                Ok((q.log_moneyness(), t, k))
            })
            .collect::<lsabr_core::Result<_>>()?
    } else {
        c.t.iter()
            .flat_map(|&t| c.y.iter().map(move |&y| (y, t, 1.0)))
            .collect()
    };
    for (y, t, strike) in points {
        let mut row = vec![num(y), num(t)];
        if by_strike {
            row.push(num(strike));
        }
        let discount = (-c.rate * t).exp();
        let mut errors = Vec::new();
        for &m in &models {
            match m.relative_price(y, t, &params) {
                Ok(v) => row.push(num(discount * strike * v)),
                Err(e) => {
                    errors.push(format!("price_{}: {e}", m.name()));
                    row.push(String::new());
                }
            }
            match m.implied_vol(y, t, &params) {
                Ok(v) => row.push(num(v)),
                Err(e) => {
                    errors.push(format!("vol_{}: {e}", m.name()));
                    row.push(String::new());
                }
            }
        }
        row.push(errors.join("; "));
        table.push(row);
    }
    Ok(table)
}

pub fn residual(c: &ResidualConfig) -> Result<Table> {
    let models = parse_models(&c.models)?;
    let params = c.model.params()?;
    let region = c.region();
    if region.is_empty() {
        return Err(CliError::usage("empty residual region"));
    }
    region.validate().map_err(|e| CliError::usage(e.to_string()))?;
    let mut table = Table::new(["model", "residual", "scale", "published"]);
    for (k, m) in models.iter().enumerate() {
        let r = residual_norm(
            |y, s, t| m.relative_price(y, t, &params.with_sigma0(s)),
            &params,
            &region,
        )?;
        table.push(vec![
            m.name().to_string(),
            num(r * c.report_scale),
            num(c.report_scale),
            opt(c.published.get(k).copied()),
        ]);
    }
    Ok(table)
}

const FD_HEADERS: [&str; 15] = [
    "level",
    "nx",
    "nsigma",
    "nt",
    "h_l2",
    "h_linf",
    "h_log",
    "sa2_l2",
    "sa2_linf",
    "sa2_log",
    "hd_l2",
    "bs_l2",
    "diff",
    "ratio",
    "est_error",
];

pub fn fd(c: &FdRunConfig) -> Result<Table> {
    let params = c.params()?;
    let solver = c.solver();
    solver.validate().map_err(|e| CliError::usage(e.to_string()))?;
    if !(c.t > 0.0 && c.t.is_finite()) {
        return Err(CliError::usage("fd horizon must be positive"));
    }
    let t = c.t;
    let seq: FdSequence = solve_sequence(&params, t, &solver, c.levels)?;
    let mut table = Table::new(FD_HEADERS);
    let ratios = seq.ratios();
    for (k, w) in seq.levels.iter().enumerate() {
        let at = |m: ModelKind| compare(w, |y, s| m.relative_price(y, t, &params.with_sigma0(s)));
        let h = at(ModelKind::H)?;
        let sa = at(ModelKind::Sa2)?;
        let bs = at(ModelKind::Bs)?;
        let hd: Vec<f64> = w
            .restriction()
            .iter()
            .map(|&(x, s, _)| {
                let p = params.with_sigma0(s);
                Ok(price_h(x, t, &p, Quotient::Regularized)? - price_d(x, t, &p)?)
            })
            .collect::<lsabr_core::Result<_>>()?;
        let pct = |v: f64| num(100.0 * v);
        table.push(vec![
            k.to_string(),
            w.grid.nx().to_string(),
            w.grid.nsigma().to_string(),
            w.grid.n_time_steps.to_string(),
            pct(h.l2),
            pct(h.linf),
            pct(h.log_l2),
            pct(sa.l2),
            pct(sa.linf),
            pct(sa.log_l2),
            pct(norms::l2(&hd)),
            pct(bs.l2),
            if k == 0 { String::new() } else { pct(seq.diffs[k - 1]) },
            if k >= 2 { num(ratios[k - 2]) } else { String::new() },
            w.est_error.map(|e| num(100.0 * e)).unwrap_or_default(),
        ]);
    }
    if c.cutoff {
        let d = cutoff_sensitivity(&params, t, &solver, c.levels)?;
        let mut row = vec![String::new(); FD_HEADERS.len()];
        row[0] = "cutoff".into();
        row[12] = num(100.0 * d);
        table.push(row);
    }
    if let Some(path) = &c.surface {
        let w = seq.finest();
        let mut surface = Table::new(["x", "sigma", "value"]);
        for i in 0..w.grid.nx() {
            for j in 0..w.grid.nsigma() {
                surface.push(vec![num(w.grid.x[i]), num(w.grid.sigma[j]), num(w.value(i, j))]);
            }
        }
        surface.emit(crate::table::Format::Csv, Some(path))?;
    }
    Ok(table)
}

pub fn mc(c: &McRunConfig) -> Result<Table> {
    let params = c.model.params()?;
    if params.kappa0 != 0.0 {
        return Err(CliError::usage(
            "the Monte Carlo benchmark runs without mean reversion (kappa0 = 0)",
        ));
    }
    let config = McConfig {
        n_paths: c.paths,
        dt: c.dt,
        seed: c.seed,
        antithetic: c.antithetic,
    };
    config.validate().map_err(|e| CliError::usage(e.to_string()))?;
    if c.strikes.is_empty() {
        return Err(CliError::usage("no strikes"));
    }
    let mut table = Table::new(["strike", "mc_price", "std_error", "c_h", "c_d", "c_sa2", "e_h", "e_d"]);
    for &k in &c.strikes {
        let q = OptionQuery::new(c.spot, k, c.rate, c.t).map_err(|e| CliError::usage(e.to_string()))?;
        let est = simulate_price(&q, &params, &config)?;
        let y = q.log_moneyness();
        let today = |m: ModelKind| -> Result<f64> { Ok(q.discount() * k * m.relative_price(y, c.t, &params)?) };
        let (ch, cd, csa) = (today(ModelKind::H)?, today(ModelKind::D)?, today(ModelKind::Sa2)?);
        table.push(vec![
            num(k),
            num(est.price),
            num(est.std_error),
            num(ch),
            num(cd),
            num(csa),
            num(ch - est.price),
            num(cd - est.price),
        ]);
    }
    Ok(table)
}

fn objective(name: &str, kappa0: f64, theta: f64) -> Result<Objective> {
    let mut o: Objective = name
        .trim()
        .parse()
        .map_err(|e| CliError::usage(format!("objective `{name}`: {e}")))?;
    o.kappa0 = kappa0;
    o.theta = theta;
    Ok(o)
}

pub fn calibrate(c: &CalibrateConfig) -> Result<(Table, Option<CliError>)> {
    if c.objectives.is_empty() {
        return Err(CliError::usage("no objectives"));
    }
    let objectives: Vec<(String, Objective)> = c
        .objectives
        .iter()
        .map(|n| Ok((n.trim().to_string(), objective(n, c.kappa0, c.theta)?)))
        .collect::<Result<_>>()?;
    let init = FitParams::new(c.init[0], c.init[1], c.init[2]);
    if !init.in_bounds() {
        return Err(CliError::usage(format!(
            "init {:?} lies outside the parameter bounds",
            c.init
        )));
    }
    if !(c.f_tol > 0.0 && c.max_iterations > 0) {
        return Err(CliError::usage("f_tol and max_iterations must be positive"));
    }
    let days = match (&c.quotes, &c.synthetic) {
        (Some(path), None) => read_quotes(path)?,
        (None, Some(s)) => {
            let generator = objective(&s.generator, c.kappa0, c.theta)?;
            let truth = FitParams::new(s.nu, s.sigma, s.rho);
            if !truth.in_bounds() {
                return Err(CliError::usage("synthetic generator parameters lie outside the bounds"));
            }
            if s.days == 0 {
                return Err(CliError::usage("synthetic panel needs at least one day"));
            }
            synth_panel(truth, &generator, s.days, s.noise, s.seed).map_err(|e| CliError::usage(e.to_string()))?
        }
        _ => return Err(CliError::usage("give exactly one quote source")),
    };
    let options = FitOptions {
        optimizer: NelderMeadOptions {
            f_tol: c.f_tol,
            max_iterations: c.max_iterations,
            ..NelderMeadOptions::default()
        },
        ..FitOptions::default()
    };

    let mut table = Table::new([
        "day",
        "objective",
        "ise",
        "ose",
        "nu",
        "sigma",
        "rho",
        "flag",
        "iterations",
    ]);
    let mut summary = Table::new(std::iter::once("objective").chain(PanelSummary::COLUMNS));
    let mut unconverged = 0;
    for (name, objective) in &objectives {
        let fits: Vec<CalibrationResult> = fit_panel(&days, init, objective, &options)?;
        for f in &fits {
            table.push(vec![
                f.day.to_string(),
                name.clone(),
                num(f.ise),
                opt(f.ose),
                num(f.params.nu),
                num(f.params.sigma),
                num(f.params.rho),
                f.flag.to_string(),
                f.iterations.to_string(),
            ]);
        }
        unconverged += fits.iter().filter(|f| f.flag == FitFlag::MaxIterations).count();
        let s = summarize(&fits);
        let blank = String::new;
        table.push(vec![
            "mean".into(),
            name.clone(),
            num(s.ise),
            num(s.ose),
            num(s.nu_mean),
            num(s.sigma_mean),
            num(s.rho_mean),
            blank(),
            blank(),
        ]);
        table.push(vec![
            "std".into(),
            name.clone(),
            blank(),
            blank(),
            num(s.nu_std),
            num(s.sigma_std),
            num(s.rho_std),
            blank(),
            blank(),
        ]);
        summary.push(
            std::iter::once(name.clone())
                .chain(s.values().into_iter().map(num))
                .collect(),
        );
    }
    if let Some(path) = &c.summary {
        summary.emit(crate::table::Format::Csv, Some(path))?;
    }
    let pending = (unconverged > 0).then_some(CliError::NotConverged(unconverged));
    Ok((table, pending))
}
