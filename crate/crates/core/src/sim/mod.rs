//! Monte Carlo verification engine.
//!
//! Each repetition draws an IC series, a fixed cross-section of log-normal
//! specific volatilities, an AR(1) signal panel and returns driven by the
//! signal through the period's IC, builds the portfolio every period and
//! records its gross return, return net of proportional costs, and turnover.
//! Repetitions run in parallel; results are reduced in repetition order so
//! the output does not depend on the number of worker threads.

mod panel;
pub mod rng;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{CostParams, PortfolioKind, SignalStats};
use crate::stat_kernels::LogNormalVolModel;

pub use panel::{
    build_weights, gen_ic_series, gen_returns, gen_signal_panel, gen_universe_vols,
    portfolio_metrics, Panel, PanelState, PeriodMetrics,
};

use panel::{advance_signals, draw_initial_signals, draw_returns, period_metrics, WeightBuilder};
use rng::RepStreams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub periods: usize,
    pub reps: usize,
    pub n: usize,
    pub stats: SignalStats,
    pub vol_model: LogNormalVolModel,
    pub costs: CostParams,
    pub kind: PortfolioKind,
    pub seed: u64,
}

impl SimulationConfig {
    /// 600 periods, 1000 repetitions, 5000 securities.
    pub fn new(
        stats: SignalStats,
        vol_model: LogNormalVolModel,
        costs: CostParams,
        kind: PortfolioKind,
        seed: u64,
    ) -> Self {
        Self {
            periods: 600,
            reps: 1000,
            n: 5000,
            stats,
            vol_model,
            costs,
            kind,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.periods < 2 {
            return Err(Error::InvalidConfig(format!(
                "periods must be at least 2, got {}",
                self.periods
            )));
        }
        if self.reps < 1 {
            return Err(Error::InvalidConfig("reps must be at least 1".into()));
        }
        if self.n < 10 {
            return Err(Error::InvalidConfig(format!(
                "n must be at least 10, got {}",
                self.n
            )));
        }
        Ok(())
    }

    /// Number of security-period cells simulated, `reps * n * periods`.
    pub fn cells(&self) -> u128 {
        self.reps as u128 * self.n as u128 * self.periods as u128
    }
}

/// Time-series summary of one repetition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RepOutcome {
    pub ir: f64,
    pub ir_adj: f64,
    pub tr: f64,
    pub clamped_noise_periods: usize,
}

impl RepOutcome {
    /// IR is mean over sample standard deviation. `None` when either return
    /// series has no dispersion.
    pub fn from_metrics(metrics: &[PeriodMetrics], clamped_noise_periods: usize) -> Option<Self> {
        let (gross_mean, gross_sd) = mean_sd(metrics.iter().map(|m| m.gross));
        let (net_mean, net_sd) = mean_sd(metrics.iter().map(|m| m.net));
        let (tr, _) = mean_sd(metrics.iter().map(|m| m.turnover));
        let ok = |sd: f64| sd.is_finite() && sd > 0.0;
        if !(ok(gross_sd) && ok(net_sd)) {
            return None;
        }
        Some(Self {
            ir: gross_mean / gross_sd,
            ir_adj: net_mean / net_sd,
            tr,
            clamped_noise_periods,
        })
    }
}

fn mean_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let mut count = 0usize;
    let mut sum = 0.0;
    for v in values.clone() {
        sum += v;
        count += 1;
    }
    if count == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = sum / count as f64;
    if count < 2 {
        return (mean, f64::NAN);
    }
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (count - 1) as f64).sqrt())
}

/// Aggregate over repetitions. Standard errors are `None` with fewer than
/// two usable repetitions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub ir_mean: f64,
    pub ir_adj_mean: f64,
    pub tr_mean: f64,
    pub ir_se: Option<f64>,
    pub ir_adj_se: Option<f64>,
    pub tr_se: Option<f64>,
    pub reps_used: usize,
    /// Repetitions dropped because a return series had zero variance.
    pub reps_excluded: usize,
    /// Repetitions whose net IR exceeded their gross IR.
    pub ir_adj_above_ir: usize,
    /// Periods (over all repetitions) with `|IC_t| > 1`.
    pub clamped_noise_periods: usize,
}

impl SimResult {
    pub fn aggregate(outcomes: &[Option<RepOutcome>]) -> Result<Self> {
        let used: Vec<&RepOutcome> = outcomes.iter().flatten().collect();
        if used.is_empty() {
            return Err(Error::InvalidConfig(
                "every repetition had zero return variance".into(),
            ));
        }
        let k = used.len();
        let summarize = |f: fn(&RepOutcome) -> f64| {
            let (mean, sd) = mean_sd(used.iter().map(|o| f(o)));
            let se = (k >= 2).then(|| sd / (k as f64).sqrt());
            (mean, se)
        };
        let (ir_mean, ir_se) = summarize(|o| o.ir);
        let (ir_adj_mean, ir_adj_se) = summarize(|o| o.ir_adj);
        let (tr_mean, tr_se) = summarize(|o| o.tr);
        Ok(Self {
            ir_mean,
            ir_adj_mean,
            tr_mean,
            ir_se,
            ir_adj_se,
            tr_se,
            reps_used: k,
            reps_excluded: outcomes.len() - k,
            ir_adj_above_ir: used.iter().filter(|o| o.ir_adj > o.ir).count(),
            clamped_noise_periods: used.iter().map(|o| o.clamped_noise_periods).sum(),
        })
    }
}

/// Per-period metrics of repetition `rep`, generated one cross-section at a
/// time. Identical to `PanelState::generate(config, rep).metrics(..)`.
pub fn simulate_rep_metrics(config: &SimulationConfig, rep: u64) -> (Vec<PeriodMetrics>, usize) {
    let n = config.n;
    let mut streams = RepStreams::new(config.seed, rep);
    let ic_series = gen_ic_series(&config.stats, config.periods, &mut streams.ic);
    let vols = gen_universe_vols(&config.vol_model, n, &mut streams.vols);
    let rho = config.stats.rho().value();

    let mut builder = WeightBuilder::new(config, &vols);
    let mut signals = vec![0.0; n];
    let mut next_signals = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut next_weights = vec![0.0; n];
    let mut returns = vec![0.0; n];

    draw_initial_signals(&mut signals, &mut streams.signals);
    builder.fill(&signals, &mut weights);

    let mut metrics = Vec::with_capacity(config.periods);
    let mut clamped = 0;
    for &ic in &ic_series {
        advance_signals(&signals, &mut next_signals, rho, &mut streams.signals);
        builder.fill(&next_signals, &mut next_weights);
        if draw_returns(&next_signals, ic, &vols, &mut returns, &mut streams.noise) {
            clamped += 1;
        }
        metrics.push(period_metrics(&weights, &next_weights, &returns, &config.costs));
        std::mem::swap(&mut signals, &mut next_signals);
        std::mem::swap(&mut weights, &mut next_weights);
    }
    (metrics, clamped)
}

pub fn simulate_rep(config: &SimulationConfig, rep: u64) -> Option<RepOutcome> {
    let (metrics, clamped) = simulate_rep_metrics(config, rep);
    RepOutcome::from_metrics(&metrics, clamped)
}

/// Runs all repetitions of `config` on the current rayon pool.
pub fn run_experiment(config: &SimulationConfig) -> Result<SimResult> {
    config.validate()?;
    let outcomes: Vec<Option<RepOutcome>> = (0..config.reps as u64)
        .into_par_iter()
        .map(|rep| simulate_rep(config, rep))
        .collect();
    SimResult::aggregate(&outcomes)
}
