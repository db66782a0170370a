//! Argument parsing and command dispatch for the `kpchannel` binary.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use kpchannel::channel::point_spectrum_scan_at_depth;
use kpchannel::floquet::{floquet_bands, grid_scan, GridSpec};
use kpchannel::io::{self, PotentialRow, ResultsDocument, RunResults};
use kpchannel::kp1d::{energy_bands_1d, negative_bands_1d};
use kpchannel::params::ModelParams;
use kpchannel::wkb::{count_estimate, wkb_eta_limit, wkb_spectrum, AiryBranch, EffectivePotential, PotentialKind};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] kpchannel::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Negative-energy Floquet points and bands of the 1D δ comb.
    Kp1dBands,
    /// Point spectrum of a single δ vertex in the channel.
    SingleSpectrum,
    /// Roots of the WKB secular function.
    WkbSpectrum,
    /// ζ(η, ω) on a rectangular grid.
    FloquetScan,
    /// Traced Floquet curves and spectral bands of the periodic channel.
    FloquetBands,
    /// Scaled effective potential of the periodic channel.
    PotentialTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Options {
    /// Scaled coupling Λ = λ/√2.
    #[arg(long = "lambda-scaled", global = true, conflicts_with = "lambda", allow_negative_numbers = true)]
    pub lambda_scaled: Option<f64>,
    /// Raw coupling λ.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Period L.
    #[arg(long = "L", global = true, allow_negative_numbers = true)]
    pub period: Option<f64>,
    #[arg(long, global = true, default_value_t = 500)]
    pub omega_steps: usize,
    #[arg(long, global = true, default_value_t = 200)]
    pub eta_steps: usize,
    #[arg(long, global = true, default_value_t = kpchannel::params::ETA_MIN, allow_negative_numbers = true)]
    pub eta_min: f64,
    /// Root tolerance.
    #[arg(long, global = true, default_value_t = 1e-10, allow_negative_numbers = true)]
    pub tol: f64,
    /// Backward-recursion start depth (default chosen per η).
    #[arg(long, global = true)]
    pub m_start: Option<usize>,
    /// Matching index of the WKB secular function.
    #[arg(long, global = true, default_value_t = kpchannel::wkb::DEFAULT_M0)]
    pub m0: usize,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Parser, Serialize, Deserialize)]
#[command(name = "kpchannel", version, about = "Spectra of the Kronig-Penney model in a quadratic channel")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

pub fn parse_args<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    RunConfig::try_parse_from(args)
}

/// Default coupling and period per command.
fn defaults(cmd: Command) -> (f64, f64) {
    match cmd {
        // raw λ for the 1D comb
        Command::Kp1dBands => (-1.0, 2.0),
        Command::PotentialTable => (0.999, 0.5),
        Command::SingleSpectrum | Command::WkbSpectrum => (0.97, 1.0),
        Command::FloquetScan | Command::FloquetBands => (0.999, 1.75),
    }
}

impl RunConfig {
    pub fn model_params(&self) -> Result<ModelParams, CliError> {
        let o = &self.options;
        let (lam_default, period_default) = defaults(self.command);
        let period = o.period.unwrap_or(period_default);
        let p = match (o.lambda_scaled, o.lambda, self.command) {
            (Some(s), _, _) => ModelParams::from_scaled(s, period),
            (None, Some(r), _) => ModelParams::from_raw(r, period),
            (None, None, Command::Kp1dBands) => ModelParams::from_raw(lam_default, period),
            (None, None, _) => ModelParams::from_scaled(lam_default, period),
        };
        p.map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<ModelParams, CliError> {
        let o = &self.options;
        if o.omega_steps < 2 {
            return Err(CliError::Config("--omega-steps must be at least 2".into()));
        }
        if o.eta_steps < 2 {
            return Err(CliError::Config("--eta-steps must be at least 2".into()));
        }
        if !(o.eta_min > 0.0 && o.eta_min < 0.25) {
            return Err(CliError::Config(format!("--eta-min must lie in (0, 1/4), got {}", o.eta_min)));
        }
        if !(o.tol > 0.0 && o.tol.is_finite()) {
            return Err(CliError::Config(format!("--tol must be positive, got {}", o.tol)));
        }
        if o.threads == Some(0) {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        if o.m_start.is_some_and(|m| m < 2) {
            return Err(CliError::Config("--m-start must be at least 2".into()));
        }
        self.model_params()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    /// None means standard output.
    pub path: Option<PathBuf>,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub results: RunResults,
    pub files: Vec<OutputFile>,
}

fn compute(cfg: &RunConfig, params: &ModelParams) -> Result<RunResults, CliError> {
    let o = &cfg.options;
    let results = match cfg.command {
        Command::Kp1dBands => {
            let omegas: Vec<f64> =
                (0..o.omega_steps).map(|i| PI * i as f64 / (o.omega_steps - 1) as f64).collect();
            let roots = negative_bands_1d(params, &omegas, o.tol)?;
            let bands = energy_bands_1d(&roots);
            RunResults::Kp1dBands { roots, bands }
        }
        Command::SingleSpectrum => {
            let lam = params.require_subcritical("single-spectrum")?;
            let scan = point_spectrum_scan_at_depth(lam, o.eta_min, 0.5 - o.eta_min, o.tol, o.m_start)?;
            RunResults::SingleSpectrum {
                count: scan.roots.len(),
                roots: scan.roots,
                estimate: count_estimate(lam).ok(),
                poles_rejected: scan.poles_rejected,
                magnitude_rejected: scan.magnitude_rejected,
            }
        }
        Command::WkbSpectrum => {
            let lam = params.require_subcritical("wkb-spectrum")?;
            let roots = wkb_spectrum(lam, o.m0, AiryBranch::Recessive, o.eta_min, o.tol)?;
            RunResults::WkbSpectrum { roots, m0: o.m0, eta_limit: wkb_eta_limit(lam, o.m0) }
        }
        Command::FloquetScan => {
            let scan = grid_scan(params, &grid(cfg))?;
            RunResults::FloquetScan { samples: scan.samples }
        }
        Command::FloquetBands => {
            let b = floquet_bands(params, &grid(cfg), o.tol, true)?;
            RunResults::FloquetBands { curves: b.curves, bands: b.bands, count: b.count }
        }
        Command::PotentialTable => RunResults::PotentialTable { rows: potential_table(params) },
    };
    Ok(results)
}

fn grid(cfg: &RunConfig) -> GridSpec {
    let o = &cfg.options;
    GridSpec { n_omega: o.omega_steps, n_eta: o.eta_steps, eta_min: o.eta_min, eta_max: 0.5, m_start: o.m_start }
}

const POTENTIAL_M_MAX: f64 = 50.0;
const POTENTIAL_M_POINTS: usize = 1001;

/// Scaled potential at ω ∈ {π/4, π/2, 3π/4} for η = 0, 1/12, …, 1/2.
fn potential_table(params: &ModelParams) -> Vec<PotentialRow> {
    let mut rows = Vec::new();
    for omega in [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
        for k in 0..7 {
            let eta = k as f64 / 12.0;
            let pot = EffectivePotential {
                kind: PotentialKind::Periodic { omega, period: params.period },
                eta,
                lambda: params.lambda_scaled,
            };
            for i in 0..POTENTIAL_M_POINTS {
                let m = POTENTIAL_M_MAX * i as f64 / (POTENTIAL_M_POINTS - 1) as f64;
                rows.push(PotentialRow { omega, eta, m, potential: pot.scaled(m) });
            }
        }
    }
    rows
}

/// `foo.csv` → `foo.curves.csv`.
fn sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

fn render(cfg: &RunConfig, results: &RunResults) -> Result<Vec<OutputFile>, CliError> {
    let out = cfg.options.out.clone();
    if cfg.options.format == Format::Json {
        let doc = ResultsDocument::new(cfg.clone(), results.clone());
        return Ok(vec![OutputFile { path: out, contents: io::write_results_json(&doc)? }]);
    }
    let main = match results {
        RunResults::Kp1dBands { roots, .. } => io::write_kappa_csv(roots),
        RunResults::SingleSpectrum { roots, .. } | RunResults::WkbSpectrum { roots, .. } => io::write_roots_csv(roots),
        RunResults::FloquetScan { samples } => io::write_grid_csv(samples),
        RunResults::FloquetBands { bands, .. } => io::write_bands_csv(bands),
        RunResults::PotentialTable { rows } => io::write_potential_csv(rows),
    };
    let mut files = vec![OutputFile { path: out.clone(), contents: main }];
    if let RunResults::FloquetBands { curves, .. } = results {
        let contents = io::write_curves_csv(curves);
        match &out {
            Some(p) => files.push(OutputFile { path: Some(sibling(p, "curves")), contents }),
            None => files.push(OutputFile { path: None, contents }),
        }
    }
    Ok(files)
}

/// Runs the command and renders its output without touching the file system.
pub fn execute(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let params = cfg.validate()?;
    let results = match cfg.options.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(e.to_string()))?;
            pool.install(|| compute(cfg, &params))?
        }
        None => compute(cfg, &params)?,
    };
    let files = render(cfg, &results)?;
    Ok(RunOutput { results, files })
}

/// Runs the command and writes its output files (or standard output).
pub fn run(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let output = execute(cfg)?;
    for f in &output.files {
        match &f.path {
            Some(p) => std::fs::write(p, &f.contents).map_err(|source| CliError::Io { path: p.clone(), source })?,
            None => print!("{}", f.contents),
        }
    }
    Ok(output)
}
