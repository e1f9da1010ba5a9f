//! Fully resolved description of one CLI run.

use std::path::PathBuf;

use serde::Serialize;

use super::ReportError;
use crate::integrated::BlendType;
use crate::params::PortfolioKind;
use crate::stat_kernels::LogNormalVolModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Theory,
    Simulate,
    Sweep,
    Optimize,
    Crossover,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Theory => "theory",
            Command::Simulate => "simulate",
            Command::Sweep => "sweep",
            Command::Optimize => "optimize",
            Command::Crossover => "crossover",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Simulated cells (`reps * n * periods`) allowed per configuration.
pub const DEFAULT_MAX_CELLS: u128 = 5_000_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub command: Command,
    pub mu_ic: f64,
    pub v_ic: f64,
    /// Signal decays; `optimize` uses exactly one.
    pub decay_grid: Vec<f64>,
    pub n: usize,
    pub te: f64,
    pub tcost: f64,
    pub vol_model: LogNormalVolModel,
    pub periods: usize,
    pub reps: usize,
    pub seed: u64,
    pub kind: PortfolioKind,
    pub blend: BlendType,
    /// Blend-parameter values at which `optimize` reports the curve.
    pub param_grid: Vec<f64>,
    /// Use truncated-normal constants instead of the rounded quintile ones.
    pub exact_constants: bool,
    #[serde(skip)]
    pub max_cells: u128,
    #[serde(skip)]
    pub format: OutputFormat,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub timing: bool,
}

impl ExperimentSpec {
    /// Defaults for `command`: IC mean 0.05, IC volatility 0.05 (0.1 for
    /// `optimize`), 5000 securities, 5% tracking error, 1% cost and a
    /// log-normal universe with `log(sigma) ~ N(-0.722, 0.306^2)`.
    pub fn defaults(command: Command) -> Self {
        let (v_ic, decay_grid) = match command {
            Command::Optimize => (0.1, vec![0.1]),
            Command::Crossover => (0.05, parse_grid("0.01:0.5:0.01").expect("valid grid")),
            _ => (0.05, parse_grid("0.05:0.4:0.05").expect("valid grid")),
        };
        Self {
            command,
            mu_ic: 0.05,
            v_ic,
            decay_grid,
            n: 5000,
            te: 0.05,
            tcost: 0.01,
            vol_model: LogNormalVolModel::default(),
            periods: 600,
            reps: 1000,
            seed: 42,
            kind: PortfolioKind::MeanVariance,
            blend: BlendType::Ewma,
            param_grid: Vec::new(),
            exact_constants: false,
            max_cells: DEFAULT_MAX_CELLS,
            format: OutputFormat::Csv,
            out: None,
            timing: false,
        }
    }

    /// Default curve grid for a blend: step 0.01 over `[0, 1]` for `w1`
    /// and over `[0, 0.99]` for `lambda`.
    pub fn default_param_grid(blend: BlendType) -> Vec<f64> {
        match blend {
            BlendType::OneLag => parse_grid("0:1:0.01"),
            BlendType::Ewma => parse_grid("0:0.99:0.01"),
        }
        .expect("valid grid")
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        check_grid("decay grid", &self.decay_grid, 0.0, 1.0)?;
        if self.command == Command::Optimize {
            if self.decay_grid.len() != 1 {
                return Err(ReportError::Usage(
                    "optimize takes a single --decay".to_owned(),
                ));
            }
            let (lo, hi) = self.blend.domain();
            check_grid(self.blend.parameter_name(), &self.param_grid, lo, hi)?;
        }
        Ok(())
    }
}

fn check_grid(name: &str, grid: &[f64], lo: f64, hi: f64) -> Result<(), ReportError> {
    if grid.is_empty() {
        return Err(ReportError::Usage(format!("{name} is empty")));
    }
    if let Some(v) = grid.iter().find(|v| !(lo..=hi).contains(*v)) {
        return Err(ReportError::Usage(format!(
            "{name} value {v} is outside [{lo}, {hi}]"
        )));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ReportError::Usage(format!(
            "{name} must be strictly increasing"
        )));
    }
    Ok(())
}

/// Parses `start:stop:step` (inclusive of `stop`) or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, ReportError> {
    let bad = |why: &str| ReportError::Usage(format!("invalid grid '{text}': {why}"));
    let number = |s: &str| -> Result<f64, ReportError> {
        let v: f64 = s.trim().parse().map_err(|_| bad("not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad("not finite"))
        }
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
            if step <= 0.0 || stop < start {
                return Err(bad("need start <= stop and step > 0"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            if count > 1_000_000 {
                return Err(bad("more than 1e6 points"));
            }
            // Snap to 12 decimals so 0.05 * 3 prints as 0.15.
            Ok((0..count)
                .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
                .collect())
        }
        [list] => list.split(',').map(number).collect(),
        _ => Err(bad("expected start:stop:step or a comma list")),
    }
}
