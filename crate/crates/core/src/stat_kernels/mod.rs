//! Normal-distribution primitives used throughout the crate: univariate
//! density, distribution and quantile, bivariate rectangle probabilities,
//! truncated-normal tail moments and log-normal cross-sectional moments.

mod bivariate;
mod normal;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_open_unit, Error, Result};
use crate::params::UniverseStats;

pub use bivariate::{bvn_rect_prob, DEGENERATE_EPS};
pub use normal::{std_normal_cdf, std_normal_pdf, std_normal_quantile, FRAC_1_SQRT_2PI};

pub(crate) use normal::{cdf as phi, pdf as phi_density, quantile as phi_inv};

/// A correlation coefficient in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Correlation(f64);

impl Correlation {
    pub const ONE: Correlation = Correlation(1.0);
    pub const ZERO: Correlation = Correlation(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if (-1.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::OutOfDomain {
                name: "correlation",
                value,
                domain: "[-1, 1]",
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Correlation {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<Correlation> for f64 {
    fn from(c: Correlation) -> f64 {
        c.0
    }
}

/// `log(sigma)` is normal with the given mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNormalVolModel {
    log_mean: f64,
    log_sd: f64,
}

impl LogNormalVolModel {
    pub fn new(log_mean: f64, log_sd: f64) -> Result<Self> {
        if !log_mean.is_finite() {
            return Err(Error::NonFinite {
                name: "log_mean",
                value: log_mean,
            });
        }
        if !log_sd.is_finite() || log_sd <= 0.0 {
            return Err(Error::OutOfDomain {
                name: "log_sd",
                value: log_sd,
                domain: "(0, inf)",
            });
        }
        Ok(Self { log_mean, log_sd })
    }

    pub fn log_mean(&self) -> f64 {
        self.log_mean
    }

    pub fn log_sd(&self) -> f64 {
        self.log_sd
    }
}

impl Default for LogNormalVolModel {
    fn default() -> Self {
        Self {
            log_mean: -0.722,
            log_sd: 0.306,
        }
    }
}

/// Mean and variance of a standard normal conditioned on `X > Phi^-1(p_cut)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailMoments {
    pub mean: f64,
    pub variance: f64,
}

pub fn truncated_tail_moments(p_cut: f64) -> Result<TailMoments> {
    ensure_open_unit("p_cut", p_cut)?;
    let a = phi_inv(p_cut);
    // Inverse Mills ratio; Phi(-a) is 1 - p_cut without cancellation.
    let h = phi_density(a) / phi(-a);
    Ok(TailMoments {
        mean: h,
        variance: 1.0 + a * h - h * h,
    })
}

/// Closed-form cross-sectional volatility moments for a log-normal universe.
pub fn lognormal_universe_stats(model: LogNormalVolModel, n: usize) -> Result<UniverseStats> {
    let m = model.log_mean;
    let s2 = model.log_sd * model.log_sd;
    UniverseStats::new(
        n,
        (-m + 0.5 * s2).exp(),
        (m + 0.5 * s2).exp(),
        (2.0 * m + 2.0 * s2).exp(),
    )
}
