//! Command-line arguments and their merge with an optional TOML config file.
//!
//! Precedence: flag, then config file, then the command's defaults.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use super::{parse_grid, run, Command, ExperimentSpec, OutputFormat, ReportError};
use crate::integrated::BlendType;
use crate::params::PortfolioKind;
use crate::stat_kernels::LogNormalVolModel;

#[derive(Debug, Parser)]
#[command(
    name = "turnover-ir",
    version,
    about = "Turnover-adjusted information ratios: closed forms, simulation and signal blending"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Closed-form IR, turnover-adjusted IR and turnover over a decay grid.
    Theory(Flags),
    /// Closed forms joined with Monte Carlo estimates.
    Simulate(Flags),
    /// `simulate` for both portfolio kinds.
    Sweep(Flags),
    /// Turnover-adjusted IR of a blended signal and its optimal blend.
    Optimize(Flags),
    /// Where the mean-variance and quintile turnover-adjusted IRs cross.
    Crossover(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Mv,
    Quintile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlendArg {
    OneLag,
    Ewma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML file supplying any of the options below (snake_case keys).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Mean information coefficient.
    #[arg(long)]
    pub mu_ic: Option<f64>,
    /// Standard deviation of the information coefficient.
    #[arg(long)]
    pub v_ic: Option<f64>,
    /// Single signal decay.
    #[arg(long, conflicts_with = "decay_grid")]
    pub decay: Option<f64>,
    /// Decays as `start:stop:step` or a comma list.
    #[arg(long)]
    pub decay_grid: Option<String>,
    /// Number of securities.
    #[arg(long)]
    pub n: Option<usize>,
    /// Target tracking error per period.
    #[arg(long)]
    pub te: Option<f64>,
    /// One-way proportional transaction cost.
    #[arg(long)]
    pub tcost: Option<f64>,
    /// Mean of log specific volatility.
    #[arg(long, allow_hyphen_values = true)]
    pub vol_log_mean: Option<f64>,
    /// Standard deviation of log specific volatility.
    #[arg(long)]
    pub vol_log_sd: Option<f64>,
    /// Rebalances per simulated repetition.
    #[arg(long)]
    pub periods: Option<usize>,
    /// Monte Carlo repetitions.
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Portfolio construction.
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Signal blend searched by `optimize`.
    #[arg(long, value_enum)]
    pub blend: Option<BlendArg>,
    /// Blend-parameter grid for `optimize`.
    #[arg(long)]
    pub param_grid: Option<String>,
    /// Quintile formulas with truncated-normal constants.
    #[arg(long)]
    pub exact_constants: bool,
    /// Largest `reps * n * periods` a single simulation may use.
    #[arg(long)]
    pub max_cells: Option<u128>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall-clock runtime in the JSON metadata.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    List(Vec<f64>),
    Text(String),
}

impl GridValue {
    fn resolve(&self) -> Result<Vec<f64>, ReportError> {
        match self {
            GridValue::List(v) => Ok(v.clone()),
            GridValue::Text(s) => parse_grid(s),
        }
    }
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mu_ic: Option<f64>,
    pub v_ic: Option<f64>,
    pub decay: Option<f64>,
    pub decay_grid: Option<GridValue>,
    pub n: Option<usize>,
    pub te: Option<f64>,
    pub tcost: Option<f64>,
    pub vol_log_mean: Option<f64>,
    pub vol_log_sd: Option<f64>,
    pub periods: Option<usize>,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub kind: Option<KindArg>,
    pub blend: Option<BlendArg>,
    pub param_grid: Option<GridValue>,
    pub exact_constants: Option<bool>,
    pub max_cells: Option<u128>,
    pub format: Option<FormatArg>,
    pub out: Option<PathBuf>,
    pub timing: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ReportError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ReportError::Usage(format!("cannot read config {}: {e}", path.display()))
        })?;
        toml::from_str(&text)
            .map_err(|e| ReportError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

impl CliCommand {
    pub fn parts(&self) -> (Command, &Flags) {
        match self {
            CliCommand::Theory(f) => (Command::Theory, f),
            CliCommand::Simulate(f) => (Command::Simulate, f),
            CliCommand::Sweep(f) => (Command::Sweep, f),
            CliCommand::Optimize(f) => (Command::Optimize, f),
            CliCommand::Crossover(f) => (Command::Crossover, f),
        }
    }
}

/// Resolves flags over file values over defaults.
pub fn resolve(command: Command, flags: &Flags, file: &FileConfig) -> Result<ExperimentSpec, ReportError> {
    let mut spec = ExperimentSpec::defaults(command);
    macro_rules! pick {
        ($field:ident) => {
            if let Some(v) = flags.$field.clone().or(file.$field.clone()) {
                spec.$field = v;
            }
        };
    }
    pick!(mu_ic);
    pick!(v_ic);
    pick!(n);
    pick!(te);
    pick!(tcost);
    pick!(periods);
    pick!(reps);
    pick!(seed);
    pick!(max_cells);

    let decay_grid = match (flags.decay, &flags.decay_grid) {
        (Some(d), _) => Some(vec![d]),
        (None, Some(g)) => Some(parse_grid(g)?),
        (None, None) => match (file.decay, &file.decay_grid) {
            (Some(_), Some(_)) => {
                return Err(ReportError::Usage(
                    "config sets both decay and decay_grid".to_owned(),
                ))
            }
            (Some(d), None) => Some(vec![d]),
            (None, Some(g)) => Some(g.resolve()?),
            (None, None) => None,
        },
    };
    if let Some(grid) = decay_grid {
        spec.decay_grid = grid;
    }

    let log_mean = flags
        .vol_log_mean
        .or(file.vol_log_mean)
        .unwrap_or(spec.vol_model.log_mean());
    let log_sd = flags
        .vol_log_sd
        .or(file.vol_log_sd)
        .unwrap_or(spec.vol_model.log_sd());
    spec.vol_model = LogNormalVolModel::new(log_mean, log_sd)?;

    if let Some(kind) = flags.kind.or(file.kind) {
        spec.kind = match kind {
            KindArg::Mv => PortfolioKind::MeanVariance,
            KindArg::Quintile => PortfolioKind::QuintileLongShort,
        };
    }
    if let Some(blend) = flags.blend.or(file.blend) {
        spec.blend = match blend {
            BlendArg::OneLag => BlendType::OneLag,
            BlendArg::Ewma => BlendType::Ewma,
        };
    }
    spec.param_grid = match (&flags.param_grid, &file.param_grid) {
        (Some(g), _) => parse_grid(g)?,
        (None, Some(g)) => g.resolve()?,
        (None, None) => ExperimentSpec::default_param_grid(spec.blend),
    };
    spec.exact_constants = flags.exact_constants || file.exact_constants.unwrap_or(false);
    spec.timing = flags.timing || file.timing.unwrap_or(false);
    if let Some(format) = flags.format.or(file.format) {
        spec.format = match format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    spec.out = flags.out.clone().or(file.out.clone());
    spec.validate()?;
    Ok(spec)
}

/// Runs a parsed command line and writes the report.
pub fn execute(cli: &Cli) -> Result<(), ReportError> {
    let (command, flags) = cli.command.parts();
    let file = match &flags.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let spec = resolve(command, flags, &file)?;
    let table = run(&spec)?;
    let sink: Box<dyn Write> = match &spec.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match spec.format {
        OutputFormat::Csv => table.write_csv(&mut sink)?,
        OutputFormat::Json => table.write_json(&mut sink)?,
    }
    sink.flush()?;
    Ok(())
}
