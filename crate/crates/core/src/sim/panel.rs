//! Panel generators and the per-period portfolio arithmetic.
//!
//! Panels are stored period-major: entry `(i, t)` of an `n`-security panel
//! lives at `t * n + i`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::analytics::mv_risk_scale_n;
use crate::params::{CostParams, PortfolioKind, SignalStats};
use crate::stat_kernels::{Correlation, LogNormalVolModel};

use super::SimulationConfig;

/// A dense `n x columns` panel of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    n: usize,
    data: Vec<f64>,
}

impl Panel {
    pub fn zeros(n: usize, columns: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * columns],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> usize {
        self.data.len() / self.n
    }

    pub fn column(&self, t: usize) -> &[f64] {
        &self.data[t * self.n..(t + 1) * self.n]
    }

    pub fn column_mut(&mut self, t: usize) -> &mut [f64] {
        &mut self.data[t * self.n..(t + 1) * self.n]
    }

    pub fn get(&self, i: usize, t: usize) -> f64 {
        self.data[t * self.n + i]
    }
}

pub fn gen_ic_series<R: Rng>(stats: &SignalStats, periods: usize, rng: &mut R) -> Vec<f64> {
    (0..periods)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            stats.mu_ic() + stats.v_ic() * z
        })
        .collect()
}

pub fn gen_universe_vols<R: Rng>(model: &LogNormalVolModel, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            (model.log_mean() + model.log_sd() * z).exp()
        })
        .collect()
}

pub(crate) fn draw_initial_signals<R: Rng>(out: &mut [f64], rng: &mut R) {
    for x in out.iter_mut() {
        *x = rng.sample(StandardNormal);
    }
}

/// `x_{t+1} = rho x_t + sqrt(1 - rho^2) z`, keeping a unit marginal variance.
pub(crate) fn advance_signals<R: Rng>(prev: &[f64], next: &mut [f64], rho: f64, rng: &mut R) {
    let innovation_sd = (1.0 - rho * rho).max(0.0).sqrt();
    for (x, &p) in next.iter_mut().zip(prev) {
        let z: f64 = rng.sample(StandardNormal);
        *x = rho * p + innovation_sd * z;
    }
}

/// Signal panel with `periods + 1` columns; column 0 seeds the first
/// rebalance.
pub fn gen_signal_panel<R: Rng>(n: usize, periods: usize, rho: Correlation, rng: &mut R) -> Panel {
    let mut panel = Panel::zeros(n, periods + 1);
    draw_initial_signals(panel.column_mut(0), rng);
    for t in 1..=periods {
        let (done, rest) = panel.data.split_at_mut(t * n);
        advance_signals(&done[(t - 1) * n..], &mut rest[..n], rho.value(), rng);
    }
    panel
}

/// `r_i = sigma_i (IC x_i + sqrt(1 - IC^2) eps_i)`. Returns `true` when
/// `|IC| > 1` forced the noise variance to be floored at zero.
pub(crate) fn draw_returns<R: Rng>(
    signals: &[f64],
    ic: f64,
    vols: &[f64],
    out: &mut [f64],
    rng: &mut R,
) -> bool {
    let noise_var = 1.0 - ic * ic;
    let noise_sd = noise_var.max(0.0).sqrt();
    for ((r, &x), &sigma) in out.iter_mut().zip(signals).zip(vols) {
        let eps: f64 = rng.sample(StandardNormal);
        *r = sigma * (ic * x + noise_sd * eps);
    }
    noise_var < 0.0
}

/// Realized returns for periods `1..=periods`, as a panel with one column per
/// period (column `t - 1` holds period `t`). Also returns the number of
/// periods whose noise variance had to be floored.
pub fn gen_returns<R: Rng>(
    signals: &Panel,
    ic_series: &[f64],
    vols: &[f64],
    rng: &mut R,
) -> (Panel, usize) {
    let n = signals.n();
    let periods = ic_series.len();
    let mut returns = Panel::zeros(n, periods);
    let mut clamped = 0;
    for t in 1..=periods {
        if draw_returns(
            signals.column(t),
            ic_series[t - 1],
            vols,
            returns.column_mut(t - 1),
            rng,
        ) {
            clamped += 1;
        }
    }
    (returns, clamped)
}

/// Turns one cross-section of signals into active weights.
pub(crate) enum WeightBuilder {
    MeanVariance {
        /// `TE / risk_scale / (n sigma_i)`
        loadings: Vec<f64>,
    },
    Quintile {
        per_side: usize,
        weight: f64,
        order: Vec<usize>,
    },
}

impl WeightBuilder {
    pub(crate) fn new(config: &SimulationConfig, vols: &[f64]) -> Self {
        let n = vols.len();
        match config.kind {
            PortfolioKind::MeanVariance => {
                let scale = config.costs.te() / mv_risk_scale_n(&config.stats, n);
                let loadings = vols.iter().map(|&s| scale / (n as f64 * s)).collect();
                WeightBuilder::MeanVariance { loadings }
            }
            PortfolioKind::QuintileLongShort => WeightBuilder::Quintile {
                per_side: n / 5,
                weight: 5.0 / n as f64,
                order: (0..n).collect(),
            },
        }
    }

    pub(crate) fn fill(&mut self, signals: &[f64], out: &mut [f64]) {
        match self {
            WeightBuilder::MeanVariance { loadings } => {
                for ((w, &x), &l) in out.iter_mut().zip(signals).zip(loadings.iter()) {
                    *w = l * x;
                }
            }
            WeightBuilder::Quintile {
                per_side,
                weight,
                order,
            } => {
                let k = *per_side;
                let n = signals.len();
                out.fill(0.0);
                if k == 0 {
                    return;
                }
                // Strict rank; equal signals are ordered by security index.
                let cmp = |a: &usize, b: &usize| {
                    signals[*a].total_cmp(&signals[*b]).then(a.cmp(b))
                };
                order.select_nth_unstable_by(k - 1, cmp);
                for &i in &order[..k] {
                    out[i] = -*weight;
                }
                order.select_nth_unstable_by(n - k, cmp);
                for &i in &order[n - k..] {
                    out[i] = *weight;
                }
            }
        }
    }
}

/// Active weights for every signal column (including the seed column 0).
pub fn build_weights(signals: &Panel, vols: &[f64], config: &SimulationConfig) -> Panel {
    let mut builder = WeightBuilder::new(config, vols);
    let mut weights = Panel::zeros(signals.n(), signals.columns());
    for t in 0..signals.columns() {
        builder.fill(signals.column(t), weights.column_mut(t));
    }
    weights
}

/// Gross return, net return and one-way turnover of one rebalance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodMetrics {
    pub gross: f64,
    pub net: f64,
    pub turnover: f64,
}

pub(crate) fn period_metrics(
    prev_weights: &[f64],
    weights: &[f64],
    returns: &[f64],
    costs: &CostParams,
) -> PeriodMetrics {
    let mut gross = 0.0;
    let mut traded = 0.0;
    for ((&w, &p), &r) in weights.iter().zip(prev_weights).zip(returns) {
        gross += w * r;
        traded += (w - p).abs();
    }
    PeriodMetrics {
        gross,
        net: gross - costs.tcost() * traded,
        turnover: 0.5 * traded,
    }
}

/// Per-period metrics for weights with a seed column 0 and a returns panel
/// holding one column per period.
pub fn portfolio_metrics(weights: &Panel, returns: &Panel, costs: &CostParams) -> Vec<PeriodMetrics> {
    (1..weights.columns())
        .map(|t| period_metrics(weights.column(t - 1), weights.column(t), returns.column(t - 1), costs))
        .collect()
}

/// Everything one repetition draws, kept in memory.
#[derive(Debug, Clone)]
pub struct PanelState {
    pub ic_series: Vec<f64>,
    pub vols: Vec<f64>,
    /// `periods + 1` columns.
    pub signals: Panel,
    /// `periods` columns.
    pub returns: Panel,
    /// `periods + 1` columns; column 0 comes from the seed signals.
    pub weights: Panel,
    pub clamped_noise_periods: usize,
}

impl PanelState {
    /// Materializes repetition `rep` of `config`. Uses the same streams and
    /// draw order as the streaming engine.
    pub fn generate(config: &SimulationConfig, rep: u64) -> Self {
        let mut streams = super::rng::RepStreams::new(config.seed, rep);
        let ic_series = gen_ic_series(&config.stats, config.periods, &mut streams.ic);
        let vols = gen_universe_vols(&config.vol_model, config.n, &mut streams.vols);
        let signals = gen_signal_panel(config.n, config.periods, config.stats.rho(), &mut streams.signals);
        let (returns, clamped_noise_periods) =
            gen_returns(&signals, &ic_series, &vols, &mut streams.noise);
        let weights = build_weights(&signals, &vols, config);
        Self {
            ic_series,
            vols,
            signals,
            returns,
            weights,
            clamped_noise_periods,
        }
    }

    pub fn metrics(&self, costs: &CostParams) -> Vec<PeriodMetrics> {
        portfolio_metrics(&self.weights, &self.returns, costs)
    }
}
