//! Integrated alpha signals: one-lag blends and exponentially weighted
//! moving averages of an AR(1) signal, their IC scaling and autocorrelation,
//! the resulting turnover-adjusted IRs, and the search for the best blend.

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::Serialize;

use crate::analytics::{ir_adj, ir_adj_quintile};
use crate::error::{Error, Result};
use crate::optimize::{maximize, OptimizationResult};
use crate::params::{CostParams, PortfolioKind, SignalStats, UniverseStats};
use crate::stat_kernels::Correlation;

/// Largest EWMA factor searched by the optimizer.
pub const EWMA_LAMBDA_MAX: f64 = 0.9999;

/// `A_t = w1 x_t + (1 - w1) x_{t-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneLagBlend {
    w1: f64,
}

impl OneLagBlend {
    pub fn new(w1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w1) {
            return Err(Error::OutOfDomain {
                name: "w1",
                value: w1,
                domain: "[0, 1]",
            });
        }
        Ok(Self { w1 })
    }

    pub fn w1(&self) -> f64 {
        self.w1
    }

    pub fn w2(&self) -> f64 {
        1.0 - self.w1
    }

    fn variance(&self, rho: f64) -> f64 {
        let (w1, w2) = (self.w1, self.w2());
        w1 * w1 + 2.0 * w1 * w2 * rho + w2 * w2
    }
}

/// `A_t = sum_j (1 - lambda) lambda^j x_{t-j}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EwmaBlend {
    lambda: f64,
}

impl EwmaBlend {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(Error::OutOfDomain {
                name: "lambda",
                value: lambda,
                domain: "[0, 1)",
            });
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Factor applied to both IC moments when trading the one-lag blend.
pub fn one_lag_ic_scale(blend: OneLagBlend, rho: Correlation) -> f64 {
    let r = rho.value();
    (blend.w1 + blend.w2() * r) / blend.variance(r).sqrt()
}

pub fn one_lag_autocorr(blend: OneLagBlend, rho: Correlation) -> Correlation {
    let r = rho.value();
    let (w1, w2) = (blend.w1, blend.w2());
    let num = w1 * w1 * r + w1 * w2 * r * r + w1 * w2 + w2 * w2 * r;
    let value = (num / blend.variance(r)).clamp(-1.0, 1.0);
    Correlation::new(value).expect("clamped")
}

pub fn ir_adj_one_lag(
    blend: OneLagBlend,
    stats: &SignalStats,
    universe: &UniverseStats,
    costs: &CostParams,
    kind: PortfolioKind,
) -> Result<f64> {
    let rho = stats.rho();
    let blended = stats.scaled(one_lag_ic_scale(blend, rho), one_lag_autocorr(blend, rho))?;
    ir_adj(kind, &blended, universe, costs)
}

/// `(lambda + rho) / (1 + lambda + rho)` evaluated literally. Not used by
/// any IR computation: it does not reduce to `rho` at `lambda = 0`.
pub fn ewma_autocorr_printed(blend: EwmaBlend, rho: Correlation) -> f64 {
    let (l, r) = (blend.lambda, rho.value());
    (l + r) / (1.0 + l + r)
}

fn check_lambda_rho(blend: EwmaBlend, rho: Correlation) -> Result<()> {
    if blend.lambda * rho.value() >= 1.0 {
        return Err(Error::InvalidConfig(format!(
            "lambda * rho must be below 1 (lambda = {}, rho = {})",
            blend.lambda,
            rho.value()
        )));
    }
    Ok(())
}

/// Variance of the EWMA of a unit-variance AR(1) signal.
pub fn ewma_variance(blend: EwmaBlend, rho: Correlation) -> Result<f64> {
    check_lambda_rho(blend, rho)?;
    let (l, r) = (blend.lambda, rho.value());
    Ok((1.0 - l) * (1.0 + l * r) / ((1.0 + l) * (1.0 - l * r)))
}

pub fn ewma_ic_scale(blend: EwmaBlend, rho: Correlation) -> Result<f64> {
    check_lambda_rho(blend, rho)?;
    let (l, r) = (blend.lambda, rho.value());
    Ok(((1.0 - l * l) / (1.0 - l * l * r * r)).sqrt())
}

/// Signal decay of the EWMA blend as seen by turnover:
/// `(1 - rho)(1 - lambda rho) / (1 + lambda)`.
pub fn ewma_effective_decay(blend: EwmaBlend, rho: Correlation) -> f64 {
    let (l, r) = (blend.lambda, rho.value());
    (1.0 - r) * (1.0 - l * r) / (1.0 + l)
}

pub fn ir_adj_mv_ewma(
    blend: EwmaBlend,
    stats: &SignalStats,
    universe: &UniverseStats,
    costs: &CostParams,
) -> Result<f64> {
    check_lambda_rho(blend, stats.rho())?;
    let (l, r) = (blend.lambda, stats.rho().value());
    let (mu, v) = (stats.mu_ic(), stats.v_ic());
    let n = universe.n() as f64;
    let drag = 2.0
        * costs.tcost()
        * universe.e_inv_sigma()
        * ((1.0 - r) / PI).sqrt()
        * ((1.0 - l * r) / (1.0 + l)).sqrt();
    let risk = (v * v - (mu * mu + v * v) / n + (1.0 - l * l * r * r) / (n * (1.0 - l * l))).sqrt();
    Ok((mu - drag) / risk)
}

pub fn ir_adj_quintile_ewma(
    blend: EwmaBlend,
    stats: &SignalStats,
    universe: &UniverseStats,
    costs: &CostParams,
) -> Result<f64> {
    let rho = stats.rho();
    let scale = ewma_ic_scale(blend, rho)?;
    let effective_rho = Correlation::new(1.0 - ewma_effective_decay(blend, rho))?;
    let blended = stats.scaled(scale, effective_rho)?;
    ir_adj_quintile(&blended, universe, costs)
}

pub fn ir_adj_ewma(
    blend: EwmaBlend,
    stats: &SignalStats,
    universe: &UniverseStats,
    costs: &CostParams,
    kind: PortfolioKind,
) -> Result<f64> {
    match kind {
        PortfolioKind::MeanVariance => ir_adj_mv_ewma(blend, stats, universe, costs),
        PortfolioKind::QuintileLongShort => ir_adj_quintile_ewma(blend, stats, universe, costs),
    }
}

/// Numerator of the derivative of the mean-variance EWMA objective with
/// respect to `lambda`, in the form
///
/// ```text
/// m (1+p) sqrt(1-p) / (2 (1+x)^{3/2} sqrt(1-xp)) * sqrt(1 - x^2 p^2 + k N (1-x^2))
///   - x (1-p^2) / ((1-x^2) sqrt(1 - x^2 p^2 + k N (1-x^2)))
///       * (mu - m sqrt(1-p) sqrt(1-xp) / sqrt(1+x))
/// ```
///
/// with `k = V^2 - (mu^2 + V^2)/N`, `m = 2 Tcost E(1/sigma) / sqrt(pi)`,
/// `x = lambda`, `p = rho`. It equals the derivative times a positive factor.
pub fn eq20_derivative_numerator(
    blend: EwmaBlend,
    stats: &SignalStats,
    universe: &UniverseStats,
    costs: &CostParams,
) -> Result<f64> {
    let x = blend.lambda;
    if x <= 0.0 {
        return Err(Error::OutOfDomain {
            name: "lambda",
            value: x,
            domain: "(0, 1)",
        });
    }
    check_lambda_rho(blend, stats.rho())?;
    let p = stats.rho().value();
    let (mu, v) = (stats.mu_ic(), stats.v_ic());
    let n = universe.n() as f64;
    let k = v * v - (mu * mu + v * v) / n;
    let m = 2.0 * costs.tcost() * universe.e_inv_sigma() / PI.sqrt();

    let root = (1.0 - x * x * p * p + k * n * (1.0 - x * x)).sqrt();
    let first =
        m * (1.0 + p) * (1.0 - p).sqrt() / (2.0 * (1.0 + x).powf(1.5) * (1.0 - x * p).sqrt()) * root;
    let net_ic = mu - m * (1.0 - p).sqrt() * (1.0 - x * p).sqrt() / (1.0 + x).sqrt();
    let second = x * (1.0 - p * p) / ((1.0 - x * x) * root) * net_ic;
    Ok(first - second)
}

pub fn eq20_derivative_sign(
    blend: EwmaBlend,
    stats: &SignalStats,
    universe: &UniverseStats,
    costs: &CostParams,
) -> Result<Ordering> {
    let num = eq20_derivative_numerator(blend, stats, universe, costs)?;
    Ok(num.partial_cmp(&0.0).unwrap_or(Ordering::Equal))
}

/// Blend family searched by [`optimize_blend`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlendType {
    OneLag,
    Ewma,
}

impl BlendType {
    pub fn label(self) -> &'static str {
        match self {
            BlendType::OneLag => "one-lag",
            BlendType::Ewma => "ewma",
        }
    }

    pub fn parameter_name(self) -> &'static str {
        match self {
            BlendType::OneLag => "w1",
            BlendType::Ewma => "lambda",
        }
    }

    /// Closed search interval for the blend parameter.
    pub fn domain(self) -> (f64, f64) {
        match self {
            BlendType::OneLag => (0.0, 1.0),
            BlendType::Ewma => (0.0, EWMA_LAMBDA_MAX),
        }
    }
}

/// One of the four turnover-adjusted IR curves of an integrated signal,
/// as a function of the blend parameter.
#[derive(Debug, Clone, Copy)]
pub struct BlendObjective {
    pub blend: BlendType,
    pub kind: PortfolioKind,
    pub stats: SignalStats,
    pub universe: UniverseStats,
    pub costs: CostParams,
}

impl BlendObjective {
    pub fn evaluate(&self, param: f64) -> Result<f64> {
        match self.blend {
            BlendType::OneLag => ir_adj_one_lag(
                OneLagBlend::new(param)?,
                &self.stats,
                &self.universe,
                &self.costs,
                self.kind,
            ),
            BlendType::Ewma => ir_adj_ewma(
                EwmaBlend::new(param)?,
                &self.stats,
                &self.universe,
                &self.costs,
                self.kind,
            ),
        }
    }
}

/// Maximizes `objective` over `[lo, hi]`, which must lie inside the blend's
/// domain.
pub fn optimize_blend(objective: &BlendObjective, lo: f64, hi: f64) -> Result<OptimizationResult> {
    let (dlo, dhi) = objective.blend.domain();
    if !(lo < hi && lo >= dlo && hi <= dhi) {
        return Err(Error::InvalidConfig(format!(
            "search interval [{lo}, {hi}] must be non-empty and inside [{dlo}, {dhi}] for {}",
            objective.blend.parameter_name()
        )));
    }
    // Validate once so the objective can be evaluated infallibly below.
    objective.evaluate(lo)?;
    objective.evaluate(hi)?;
    Ok(maximize(
        |x| objective.evaluate(x).unwrap_or(f64::NEG_INFINITY),
        lo,
        hi,
    ))
}
