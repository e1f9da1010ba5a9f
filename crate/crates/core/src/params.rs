//! Parameter types shared by the closed forms, the integrated-signal
//! analytics and the simulation engine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stat_kernels::Correlation;

/// Which portfolio construction a formula or simulation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PortfolioKind {
    /// Active weights proportional to signal over specific volatility,
    /// scaled to a tracking-error target.
    MeanVariance,
    /// Equal weights `+5/N` on the top fifth and `-5/N` on the bottom fifth.
    QuintileLongShort,
}

impl PortfolioKind {
    pub fn label(self) -> &'static str {
        match self {
            PortfolioKind::MeanVariance => "mv",
            PortfolioKind::QuintileLongShort => "quintile",
        }
    }
}

/// IC moments of the alpha model together with the period-to-period
/// autocorrelation of its signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalStats {
    mu_ic: f64,
    v_ic: f64,
    rho: Correlation,
}

impl SignalStats {
    pub fn new(mu_ic: f64, v_ic: f64, rho: f64) -> Result<Self> {
        let rho = Correlation::new(rho)?;
        Self::with_correlation(mu_ic, v_ic, rho)
    }

    pub fn with_correlation(mu_ic: f64, v_ic: f64, rho: Correlation) -> Result<Self> {
        if !mu_ic.is_finite() || mu_ic.abs() >= 1.0 {
            return Err(Error::OutOfDomain {
                name: "mu_ic",
                value: mu_ic,
                domain: "(-1, 1)",
            });
        }
        if !v_ic.is_finite() || !(0.0..1.0).contains(&v_ic) {
            return Err(Error::OutOfDomain {
                name: "v_ic",
                value: v_ic,
                domain: "[0, 1)",
            });
        }
        if mu_ic * mu_ic + v_ic * v_ic >= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "mu_ic^2 + v_ic^2 must be below 1 (got {})",
                mu_ic * mu_ic + v_ic * v_ic
            )));
        }
        if rho.value() < 0.0 {
            return Err(Error::OutOfDomain {
                name: "rho",
                value: rho.value(),
                domain: "[0, 1]",
            });
        }
        Ok(Self { mu_ic, v_ic, rho })
    }

    /// Same IC moments with signal decay `1 - rho` set to `decay`.
    pub fn from_decay(mu_ic: f64, v_ic: f64, decay: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&decay) {
            return Err(Error::OutOfDomain {
                name: "decay",
                value: decay,
                domain: "[0, 1]",
            });
        }
        Self::new(mu_ic, v_ic, 1.0 - decay)
    }

    pub fn mu_ic(&self) -> f64 {
        self.mu_ic
    }

    pub fn v_ic(&self) -> f64 {
        self.v_ic
    }

    pub fn rho(&self) -> Correlation {
        self.rho
    }

    pub fn decay(&self) -> f64 {
        1.0 - self.rho.value()
    }

    /// Multiplies both IC moments by `scale`, as happens when the signal is
    /// replaced by a blend with lower predictive power.
    pub(crate) fn scaled(self, scale: f64, rho: Correlation) -> Result<Self> {
        Self::with_correlation(self.mu_ic * scale, self.v_ic * scale, rho)
    }
}

/// Cross-sectional moments of specific volatility over the universe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniverseStats {
    n: usize,
    e_inv_sigma: f64,
    e_sigma: f64,
    e_sigma_sq: f64,
}

impl UniverseStats {
    pub fn new(n: usize, e_inv_sigma: f64, e_sigma: f64, e_sigma_sq: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "universe needs at least 2 securities, got {n}"
            )));
        }
        for (name, value) in [
            ("e_inv_sigma", e_inv_sigma),
            ("e_sigma", e_sigma),
            ("e_sigma_sq", e_sigma_sq),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::OutOfDomain {
                    name,
                    value,
                    domain: "(0, inf)",
                });
            }
        }
        // Relative slack for moments that are equal up to rounding.
        if e_sigma_sq < e_sigma * e_sigma * (1.0 - 1e-12) {
            return Err(Error::InvalidConfig(format!(
                "E(sigma^2) = {e_sigma_sq} is below E(sigma)^2 = {}",
                e_sigma * e_sigma
            )));
        }
        Ok(Self {
            n,
            e_inv_sigma,
            e_sigma,
            e_sigma_sq,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn e_inv_sigma(&self) -> f64 {
        self.e_inv_sigma
    }

    pub fn e_sigma(&self) -> f64 {
        self.e_sigma
    }

    pub fn e_sigma_sq(&self) -> f64 {
        self.e_sigma_sq
    }
}

/// Proportional one-way transaction cost and tracking-error target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    tcost: f64,
    te: f64,
}

impl CostParams {
    pub fn new(tcost: f64, te: f64) -> Result<Self> {
        if !tcost.is_finite() || tcost < 0.0 {
            return Err(Error::OutOfDomain {
                name: "tcost",
                value: tcost,
                domain: "[0, inf)",
            });
        }
        if !te.is_finite() || te <= 0.0 {
            return Err(Error::OutOfDomain {
                name: "te",
                value: te,
                domain: "(0, inf)",
            });
        }
        Ok(Self { tcost, te })
    }

    pub fn tcost(&self) -> f64 {
        self.tcost
    }

    pub fn te(&self) -> f64 {
        self.te
    }

    pub fn with_tcost(self, tcost: f64) -> Result<Self> {
        Self::new(tcost, self.te)
    }
}
