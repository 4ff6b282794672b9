use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use serde::{Deserialize, Serialize};

use filtered_hermite::analysis::{
    eigen_report_filtered, fit_decay_rate, recurrence_metric, solve_dispersion, DispersionRoot,
};
use filtered_hermite::dynamics::{run_simulation, Model, SimConfig, TimeSeries};
use filtered_hermite::hermite::{FilterSpec, FilterVariant, HermiteParams};
use filtered_hermite::Error;

use crate::args::{
    Command, DispersionArgs, EigenArgs, FilterArgs, FilterName, GridArgs, LandauArgs, RunArgs,
};

const DEFAULT_ORDER: usize = 30;
const DEFAULT_FORCED_MC: usize = 5;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numerical(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "usage error: {msg}"),
            Failure::Numerical(err) => write!(f, "{err:#}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::InvalidParameter(_) | Error::Unsupported(_) | Error::InertFilter => {
                Failure::Usage(err.to_string())
            }
            other => Failure::Numerical(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        Failure::Numerical(err)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

pub fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Advection(args) => run_model("advection", Model::Advection, &args),
        Command::Forced(args) => run_model("forced", Model::Forced, &args),
        Command::Landau(LandauArgs { run, linearized }) => {
            let model = if linearized {
                Model::LinearizedLandau
            } else {
                Model::VlasovPoisson
            };
            run_model("landau", model, &run)
        }
        Command::Eigen(args) => eigen(&args),
        Command::Dispersion(args) => dispersion(&args),
    }
}

/// Everything written next to the CSV files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub config: SimConfig,
    pub t_f: Vec<f64>,
    pub outputs: Vec<PathBuf>,
    pub summary: RunSummary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub dt: f64,
    pub samples: usize,
    pub final_time: f64,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub max_mass_drift: f64,
    pub fits: Vec<FitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recurrence: Option<RecurrenceSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral_abscissa: Option<f64>,
    /// Largest relative deviation from the closed-form energy (advection without filter).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_exact_rel_error: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitSummary {
    pub t_f: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    pub n_peaks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecurrenceSummary {
    pub t_min: f64,
    pub metric: f64,
}

fn now_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

fn default_config(model: Model, order: usize, m_c: Option<usize>) -> SimConfig {
    match model {
        Model::Advection => SimConfig::advection(order),
        Model::Forced => SimConfig::forced(order, m_c.unwrap_or(DEFAULT_FORCED_MC)),
        Model::VlasovPoisson => SimConfig::landau(order),
        Model::LinearizedLandau => SimConfig::linearized_landau(order),
    }
}

/// A config file holds either a bare `SimConfig` or a previous run's manifest.
fn load_config(path: &Path) -> Result<(SimConfig, Vec<f64>), Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| Failure::Usage(format!("{e:#}")))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if value.get("config").is_some() {
        let manifest: RunManifest = serde_json::from_value(value)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        Ok((manifest.config, manifest.t_f))
    } else {
        let config = serde_json::from_value(value)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        Ok((config, Vec::new()))
    }
}

fn apply_grid(params: HermiteParams, grid: &GridArgs) -> Result<HermiteParams, Failure> {
    let order = grid.order.unwrap_or(params.order);
    let p = match (grid.k, grid.period) {
        (Some(k), _) => HermiteParams::from_wavenumber(order, k)?,
        (None, Some(d)) => HermiteParams::new(order, d)?,
        (None, None) => HermiteParams::new(order, params.period)?,
    };
    Ok(p)
}

fn filter_name(variant: FilterVariant) -> FilterName {
    match variant {
        FilterVariant::None => FilterName::None,
        FilterVariant::Exponential => FilterName::HouLi,
        FilterVariant::HouLiThreshold => FilterName::Threshold,
        FilterVariant::Cutoff => FilterName::Cutoff,
        FilterVariant::TimestepScaled => FilterName::Timestep,
    }
}

fn apply_filter_args(base: FilterSpec, args: &FilterArgs) -> Result<FilterSpec, Failure> {
    let tuned = args.alpha.is_some() || args.p.is_some() || args.dt_ref.is_some();
    let name = match (args.no_filter, args.filter) {
        (true, _) => FilterName::None,
        (false, Some(name)) => name,
        (false, None) if !tuned => return Ok(base),
        (false, None) => filter_name(base.variant),
    };
    let keep = name == filter_name(base.variant) && !base.is_none();
    let alpha = args.alpha.unwrap_or(if keep { base.alpha } else { 36.0 });
    let p = args.p.unwrap_or(if keep { base.p } else { 36.0 });
    if args.dt_ref.is_some() && name != FilterName::Timestep {
        return usage("--dt-ref only applies to --filter timestep");
    }
    let spec = match name {
        FilterName::None if tuned => {
            return usage("filter parameters given together with no filter")
        }
        FilterName::None => FilterSpec::none(),
        FilterName::HouLi => FilterSpec::exponential(alpha, p),
        FilterName::Threshold => FilterSpec::threshold(alpha, p),
        FilterName::Cutoff if args.alpha.is_some() || args.p.is_some() => {
            return usage("the cutoff filter takes no --alpha or --p")
        }
        FilterName::Cutoff => FilterSpec::cutoff(),
        FilterName::Timestep => {
            let Some(dt_ref) = args.dt_ref.or(if keep { base.dt_ref } else { None }) else {
                return usage("--filter timestep needs --dt-ref");
            };
            FilterSpec::timestep_scaled(alpha, p, dt_ref)
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn resolve_config(model: Model, args: &RunArgs) -> Result<(SimConfig, Vec<f64>), Failure> {
    let (mut cfg, file_t_f) = match &args.config {
        Some(path) => {
            let (cfg, t_f) = load_config(path)?;
            let compatible = cfg.model == model
                || (model == Model::VlasovPoisson && cfg.model == Model::LinearizedLandau);
            if !compatible {
                return usage(format!(
                    "{} holds a {:?} configuration, not {:?}",
                    path.display(),
                    cfg.model,
                    model
                ));
            }
            (cfg, t_f)
        }
        None => (
            default_config(model, args.grid.order.unwrap_or(DEFAULT_ORDER), args.mc),
            Vec::new(),
        ),
    };
    if cfg.model == Model::LinearizedLandau && args.mc.is_some_and(|mc| mc != 1) {
        return usage("the linearized model evolves the single mode m = 1; --mc does not apply");
    }
    cfg.params = apply_grid(cfg.params, &args.grid)?;
    cfg.filter = apply_filter_args(cfg.filter, &args.filter)?;
    if let Some(v) = args.epsilon {
        cfg.epsilon = v;
    }
    if let Some(v) = args.mc {
        cfg.m_c = v;
    }
    if let Some(v) = args.grid.cfl_c {
        cfg.cfl_c = v;
    }
    if let Some(v) = args.t_end {
        cfg.t_end = v;
    }
    if let Some(v) = args.sample_every {
        cfg.sample_every = v;
    }
    cfg.validate()?;
    let t_f = if args.t_f.is_empty() {
        file_t_f
    } else {
        args.t_f.clone()
    };
    if t_f.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return usage("--tF values must be positive");
    }
    Ok((cfg, t_f))
}

fn fit_summary(series: &TimeSeries, t_f: f64) -> Result<FitSummary, Failure> {
    match fit_decay_rate(series, t_f) {
        Ok(fit) => Ok(FitSummary {
            t_f,
            rate: Some(fit.rate),
            slope: Some(fit.slope),
            n_peaks: fit.n_peaks,
            error: None,
        }),
        Err(Error::TooFewPeaks { found, .. }) => Ok(FitSummary {
            t_f,
            rate: None,
            slope: None,
            n_peaks: found,
            error: Some(format!("only {found} peaks before tF")),
        }),
        Err(other) => Err(other.into()),
    }
}

fn run_model(command: &str, model: Model, args: &RunArgs) -> Result<(), Failure> {
    let started = now_ms();
    let (cfg, t_f) = resolve_config(model, args)?;
    let series = run_simulation(&cfg)?;

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut outputs = Vec::new();
    let energy_path = args.out.join("energy.csv");
    crate::output::write_energy_csv(&energy_path, &series)?;
    outputs.push(energy_path);

    let mut max_exact_rel_error = None;
    if cfg.model == Model::Advection {
        let exact_path = args.out.join("exact.csv");
        let err = crate::output::write_exact_csv(&exact_path, &series, &cfg)?;
        if cfg.filter.is_none() {
            max_exact_rel_error = Some(err);
        }
        outputs.push(exact_path);
    }

    let fits = t_f
        .iter()
        .map(|&t| fit_summary(&series, t))
        .collect::<Result<Vec<_>, _>>()?;
    let spectral_abscissa = if args.abscissa {
        Some(eigen_report_filtered(&cfg.params, &cfg.filter, cfg.dt(), 1, false)?.spectral_abscissa)
    } else {
        None
    };
    let first = &series.samples[0];
    let last = series
        .samples
        .last()
        .expect("a run records at least two samples");
    let summary = RunSummary {
        dt: series.dt,
        samples: series.samples.len(),
        final_time: last.t,
        initial_energy: first.energy,
        final_energy: last.energy,
        max_mass_drift: series
            .samples
            .iter()
            .map(|s| (s.mass - first.mass).abs())
            .fold(0.0, f64::max),
        fits,
        recurrence: args.recurrence_after.map(|t_min| RecurrenceSummary {
            t_min,
            metric: recurrence_metric(&series, t_min),
        }),
        spectral_abscissa,
        max_exact_rel_error,
    };
    let summary_path = args.out.join("summary.json");
    outputs.push(summary_path.clone());
    let manifest = RunManifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        started_unix_ms: started,
        finished_unix_ms: now_ms(),
        config: cfg,
        t_f,
        outputs,
        summary,
    };
    crate::output::write_json(&summary_path, &manifest)?;
    crate::output::print_run(&manifest);
    Ok(())
}

fn eigen(args: &EigenArgs) -> Result<(), Failure> {
    let params = apply_grid(
        HermiteParams::new(
            args.grid.order.unwrap_or(DEFAULT_ORDER),
            4.0 * std::f64::consts::PI,
        )?,
        &args.grid,
    )?;
    let filter = apply_filter_args(FilterSpec::hou_li(), &args.filter)?;
    let dt = args.grid.cfl_c.unwrap_or(0.5) / (params.order as f64).sqrt();
    let report = eigen_report_filtered(&params, &filter, dt, args.m, args.with_g)?;
    let text = crate::output::eigen_text(&report.eigenvalues);
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join("eigenvalues.txt");
            fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
            let summary = serde_json::json!({
                "M": params.order,
                "k": params.k,
                "m": args.m,
                "with_g": args.with_g,
                "dt": dt,
                "filter": filter,
                "spectral_abscissa": report.spectral_abscissa,
                "max_abs_real": report.max_abs_real(),
                "outputs": [path],
            });
            crate::output::write_json(&dir.join("eigen.json"), &summary)?;
        }
        None => print!("{text}"),
    }
    println!("spectral abscissa {}", report.spectral_abscissa);
    Ok(())
}

fn parse_sweep(spec: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("--sweep expects start:stop:step, got {spec}")))?;
    let [start, stop, step] = parts[..] else {
        return usage(format!("--sweep expects start:stop:step, got {spec}"));
    };
    if !(step > 0.0 && start > 0.0 && stop >= start) {
        return usage("--sweep needs 0 < start <= stop and step > 0");
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    if n > 10_000 {
        return usage("--sweep grid has more than 10000 points");
    }
    Ok((0..=n).map(|j| start + j as f64 * step).collect())
}

fn dispersion(args: &DispersionArgs) -> Result<(), Failure> {
    let ks = match (&args.sweep, args.k) {
        (Some(spec), _) => parse_sweep(spec)?,
        (None, Some(k)) => vec![k],
        (None, None) => vec![0.5],
    };
    let roots = ks
        .iter()
        .map(|&k| solve_dispersion(k))
        .collect::<Result<Vec<DispersionRoot>, _>>()?;
    let csv = crate::output::dispersion_csv(&roots);
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join("dispersion.csv");
        fs::write(&path, &csv).with_context(|| format!("writing {}", path.display()))?;
    }
    print!("{csv}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn filter_args(filter: Option<FilterName>) -> FilterArgs {
        FilterArgs {
            filter,
            no_filter: false,
            alpha: None,
            p: None,
            dt_ref: None,
        }
    }

    #[test]
    fn sweep_is_inclusive() {
        let ks = parse_sweep("0.3:0.6:0.05").unwrap();
        assert_eq!(ks.len(), 7);
        assert!((ks[6] - 0.6).abs() < 1e-12);
        assert!(parse_sweep("0.3:0.6").is_err());
        assert!(parse_sweep("0.6:0.3:0.1").is_err());
    }

    #[test]
    fn filter_flags_resolve() {
        let base = FilterSpec::hou_li();
        assert_eq!(apply_filter_args(base, &filter_args(None)).unwrap(), base);
        let mut a = filter_args(Some(FilterName::Threshold));
        a.alpha = Some(10.0);
        let t = apply_filter_args(base, &a).unwrap();
        assert_eq!(t.variant, FilterVariant::HouLiThreshold);
        assert_eq!((t.alpha, t.p), (10.0, 36.0));
        assert!(apply_filter_args(base, &filter_args(Some(FilterName::Timestep))).is_err());
        let mut c = filter_args(Some(FilterName::Cutoff));
        c.p = Some(2.0);
        assert!(apply_filter_args(base, &c).is_err());
        let mut n = filter_args(None);
        n.no_filter = true;
        assert!(apply_filter_args(base, &n).unwrap().is_none());
    }

    #[test]
    fn library_errors_map_to_exit_codes() {
        assert_eq!(
            Failure::from(Error::InvalidParameter("x".into())).exit_code(),
            1
        );
        let nf = Error::NonFinite {
            time: 1.0,
            mode: 1,
            index: 3,
        };
        assert_eq!(Failure::from(nf).exit_code(), 2);
    }
}
