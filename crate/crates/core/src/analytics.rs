//! Closed-form information ratios, turnover rates and turnover-adjusted
//! information ratios for mean-variance and quintile long-short portfolios.
//!
//! All quantities are per rebalance period.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{CostParams, PortfolioKind, SignalStats, UniverseStats};
use crate::stat_kernels::{bvn_rect_prob, phi_inv, truncated_tail_moments, Correlation};

/// One row of a theory table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsRow {
    pub rho: f64,
    pub decay: f64,
    pub ir: f64,
    pub ir_adj: f64,
    pub tr: f64,
}

/// `sqrt(V^2 + (1 - mu^2 - V^2) / N)`, the active-risk scale of a
/// mean-variance book per unit of tracking error.
pub fn mv_risk_scale(stats: &SignalStats, universe: &UniverseStats) -> f64 {
    mv_risk_scale_n(stats, universe.n())
}

pub(crate) fn mv_risk_scale_n(stats: &SignalStats, n: usize) -> f64 {
    let (mu, v) = (stats.mu_ic(), stats.v_ic());
    (v * v + (1.0 - mu * mu - v * v) / n as f64).sqrt()
}

/// Unadjusted IR of the mean-variance portfolio. Tends to `mu / V` as `N`
/// grows.
pub fn ir_mv(stats: &SignalStats, universe: &UniverseStats) -> f64 {
    stats.mu_ic() / mv_risk_scale(stats, universe)
}

/// Unadjusted IR with a constant IC, `mu / V`.
pub fn ir_large_n_limit(stats: &SignalStats) -> Option<f64> {
    (stats.v_ic() > 0.0).then(|| stats.mu_ic() / stats.v_ic())
}

/// The classic `IC * sqrt(breadth)` relation.
pub fn ir_fundamental_law(ic: f64, breadth: f64) -> f64 {
    ic * breadth.sqrt()
}

pub fn turnover_mv(stats: &SignalStats, universe: &UniverseStats, costs: &CostParams) -> f64 {
    universe.e_inv_sigma() * costs.te() * (stats.decay() / PI).sqrt()
        / mv_risk_scale(stats, universe)
}

pub fn expected_return_mv(stats: &SignalStats, universe: &UniverseStats, costs: &CostParams) -> f64 {
    ir_mv(stats, universe) * costs.te()
}

/// Mean-variance IR net of a `2 * Tcost * TR` per-period cost drag. May be
/// negative.
pub fn ir_adj_mv(stats: &SignalStats, universe: &UniverseStats, costs: &CostParams) -> f64 {
    let drag = 2.0 * costs.tcost() * universe.e_inv_sigma() * (stats.decay() / PI).sqrt();
    (stats.mu_ic() - drag) / mv_risk_scale(stats, universe)
}

/// Active weight of one security in the mean-variance book.
pub fn mv_weight(
    signal: f64,
    sigma_i: f64,
    stats: &SignalStats,
    universe: &UniverseStats,
    costs: &CostParams,
) -> Result<f64> {
    if !sigma_i.is_finite() || sigma_i <= 0.0 {
        return Err(Error::OutOfDomain {
            name: "sigma_i",
            value: sigma_i,
            domain: "(0, inf)",
        });
    }
    let scale = costs.te() / mv_risk_scale(stats, universe);
    Ok(scale * signal / (universe.n() as f64 * sigma_i))
}

/// Probabilities of the three buy events of a quintile long-short book
/// between consecutive rebalances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuintileTransitions {
    /// Bottom fifth to top fifth.
    pub short_to_long: f64,
    /// Middle three fifths to top fifth.
    pub flat_to_long: f64,
    /// Bottom fifth to middle three fifths.
    pub short_to_flat: f64,
}

impl QuintileTransitions {
    pub fn new(rho: Correlation) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho.value()) {
            return Err(Error::OutOfDomain {
                name: "rho",
                value: rho.value(),
                domain: "[0, 1]",
            });
        }
        let inf = f64::INFINITY;
        let q2 = phi_inv(0.2);
        let q8 = phi_inv(0.8);
        Ok(Self {
            short_to_long: bvn_rect_prob(-inf, q2, q8, inf, rho)?,
            flat_to_long: bvn_rect_prob(q2, q8, q8, inf, rho)?,
            short_to_flat: bvn_rect_prob(-inf, q2, q2, q8, rho)?,
        })
    }

    /// One-way turnover, `5 * (2 P1 + P2 + P3)`.
    pub fn turnover(&self) -> f64 {
        5.0 * (2.0 * self.short_to_long + self.flat_to_long + self.short_to_flat)
    }
}

pub fn quintile_turnover(rho: Correlation) -> Result<f64> {
    QuintileTransitions::new(rho).map(|t| t.turnover())
}

/// Constants of the quintile-spread mean and variance.
///
/// `printed()` carries the rounded values (2.8, 7.84, 10, 7.8) that the
/// published tables were computed with; `exact()` derives them from the
/// truncated-normal moments of the top fifth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuintileConstants {
    /// Spread mean per unit `mu_IC * E(sigma)`: twice the tail mean.
    pub spread: f64,
    /// Coefficient of `V^2 E(sigma)^2` in the spread variance.
    pub ic_risk: f64,
    /// Idiosyncratic noise coefficient of `E(sigma^2) / N`.
    pub noise: f64,
    /// Reduction of `noise` per unit `mu^2 + V^2`.
    pub ic_noise: f64,
}

impl QuintileConstants {
    pub const fn printed() -> Self {
        Self {
            spread: 2.8,
            ic_risk: 7.84,
            noise: 10.0,
            ic_noise: 7.8,
        }
    }

    pub fn exact() -> Self {
        let tail = truncated_tail_moments(0.8).expect("0.8 is a valid cut");
        Self {
            spread: 2.0 * tail.mean,
            ic_risk: 4.0 * tail.mean * tail.mean,
            noise: 10.0,
            ic_noise: 10.0 * (1.0 - tail.variance),
        }
    }

    fn risk(&self, stats: &SignalStats, universe: &UniverseStats) -> f64 {
        let (mu, v) = (stats.mu_ic(), stats.v_ic());
        let es = universe.e_sigma();
        (self.ic_risk * v * v * es * es
            + universe.e_sigma_sq() * (self.noise - self.ic_noise * (v * v + mu * mu))
                / universe.n() as f64)
            .sqrt()
    }

    fn expected_spread(&self, stats: &SignalStats, universe: &UniverseStats) -> f64 {
        self.spread * stats.mu_ic() * universe.e_sigma()
    }
}

impl Default for QuintileConstants {
    fn default() -> Self {
        Self::printed()
    }
}

pub fn ir_quintile(stats: &SignalStats, universe: &UniverseStats) -> f64 {
    ir_quintile_with(&QuintileConstants::printed(), stats, universe)
}

pub fn ir_quintile_with(
    constants: &QuintileConstants,
    stats: &SignalStats,
    universe: &UniverseStats,
) -> f64 {
    constants.expected_spread(stats, universe) / constants.risk(stats, universe)
}

pub fn ir_adj_quintile(
    stats: &SignalStats,
    universe: &UniverseStats,
    costs: &CostParams,
) -> Result<f64> {
    ir_adj_quintile_with(&QuintileConstants::printed(), stats, universe, costs)
}

pub fn ir_adj_quintile_with(
    constants: &QuintileConstants,
    stats: &SignalStats,
    universe: &UniverseStats,
    costs: &CostParams,
) -> Result<f64> {
    let tr = quintile_turnover(stats.rho())?;
    Ok(
        (constants.expected_spread(stats, universe) - 2.0 * costs.tcost() * tr)
            / constants.risk(stats, universe),
    )
}

/// Theory row for either portfolio kind.
pub fn theory_row(
    kind: PortfolioKind,
    stats: &SignalStats,
    universe: &UniverseStats,
    costs: &CostParams,
) -> Result<MetricsRow> {
    theory_row_with(&QuintileConstants::printed(), kind, stats, universe, costs)
}

/// As [`theory_row`], with the given quintile constants.
pub fn theory_row_with(
    constants: &QuintileConstants,
    kind: PortfolioKind,
    stats: &SignalStats,
    universe: &UniverseStats,
    costs: &CostParams,
) -> Result<MetricsRow> {
    let (ir, ir_adj, tr) = match kind {
        PortfolioKind::MeanVariance => (
            ir_mv(stats, universe),
            ir_adj_mv(stats, universe, costs),
            turnover_mv(stats, universe, costs),
        ),
        PortfolioKind::QuintileLongShort => (
            ir_quintile_with(constants, stats, universe),
            ir_adj_quintile_with(constants, stats, universe, costs)?,
            quintile_turnover(stats.rho())?,
        ),
    };
    Ok(MetricsRow {
        rho: stats.rho().value(),
        decay: stats.decay(),
        ir,
        ir_adj,
        tr,
    })
}

/// Turnover-adjusted IR for `kind` at the given decay.
pub fn ir_adj(
    kind: PortfolioKind,
    stats: &SignalStats,
    universe: &UniverseStats,
    costs: &CostParams,
) -> Result<f64> {
    match kind {
        PortfolioKind::MeanVariance => Ok(ir_adj_mv(stats, universe, costs)),
        PortfolioKind::QuintileLongShort => ir_adj_quintile(stats, universe, costs),
    }
}

const CROSSOVER_GRID: usize = 64;
const CROSSOVER_TOL: f64 = 1e-10;

/// Decay in `(0, 1)` at which the mean-variance and quintile turnover-adjusted
/// IRs are equal, or `None` when the difference does not change sign.
///
/// The decay implied by `stats` is ignored; only its IC moments are used.
pub fn crossover_decay(
    stats: &SignalStats,
    universe: &UniverseStats,
    costs: &CostParams,
) -> Result<Option<f64>> {
    let diff = |decay: f64| -> Result<f64> {
        let s = SignalStats::from_decay(stats.mu_ic(), stats.v_ic(), decay)?;
        Ok(ir_adj_mv(&s, universe, costs) - ir_adj_quintile(&s, universe, costs)?)
    };

    let step = 1.0 / CROSSOVER_GRID as f64;
    let mut lo = step * 1e-3;
    let mut f_lo = diff(lo)?;
    for i in 1..=CROSSOVER_GRID {
        let hi = if i == CROSSOVER_GRID {
            1.0 - step * 1e-3
        } else {
            i as f64 * step
        };
        let f_hi = diff(hi)?;
        if f_lo == 0.0 {
            return Ok(Some(lo));
        }
        if f_lo.signum() != f_hi.signum() {
            let (mut a, mut b, mut fa) = (lo, hi, f_lo);
            while b - a > CROSSOVER_TOL {
                let mid = 0.5 * (a + b);
                let fm = diff(mid)?;
                if fm == 0.0 {
                    return Ok(Some(mid));
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            return Ok(Some(0.5 * (a + b)));
        }
        lo = hi;
        f_lo = f_hi;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stat_kernels::{lognormal_universe_stats, LogNormalVolModel};
    use approx::assert_abs_diff_eq;

    fn universe() -> UniverseStats {
        lognormal_universe_stats(LogNormalVolModel::default(), 5000).unwrap()
    }

    fn costs() -> CostParams {
        CostParams::new(0.01, 0.05).unwrap()
    }

    fn stats(decay: f64) -> SignalStats {
        SignalStats::from_decay(0.05, 0.05, decay).unwrap()
    }

    #[test]
    fn mean_variance_reference_row() {
        let s = stats(0.4);
        assert_abs_diff_eq!(ir_mv(&s, &universe()), 0.962, epsilon = 5e-4);
        assert_abs_diff_eq!(ir_adj_mv(&s, &universe(), &costs()), 0.666, epsilon = 5e-4);
        assert_abs_diff_eq!(turnover_mv(&s, &universe(), &costs()), 0.741, epsilon = 5e-4);
        assert_abs_diff_eq!(
            expected_return_mv(&s, &universe(), &costs()),
            0.0481,
            epsilon = 5e-5
        );
    }

    #[test]
    fn mean_variance_edge_cases() {
        let zero_mu = SignalStats::from_decay(0.0, 0.07, 0.3).unwrap();
        assert_eq!(ir_mv(&zero_mu, &universe()), 0.0);
        assert_eq!(turnover_mv(&stats(0.0), &universe(), &costs()), 0.0);
        let huge = UniverseStats::new(1_000_000_000_000, 2.0, 0.5, 0.3).unwrap();
        assert_abs_diff_eq!(ir_mv(&stats(0.2), &huge), 1.0, epsilon = 1e-4);
        assert_eq!(ir_large_n_limit(&stats(0.2)), Some(1.0));
        let free = costs().with_tcost(0.0).unwrap();
        assert_eq!(ir_adj_mv(&stats(0.3), &universe(), &free), ir_mv(&stats(0.3), &universe()));
    }

    #[test]
    fn weight_formula() {
        let s = stats(0.2);
        assert_eq!(mv_weight(0.0, 0.5, &s, &universe(), &costs()).unwrap(), 0.0);
        let w = mv_weight(1.0, 0.509, &s, &universe(), &costs()).unwrap();
        assert_abs_diff_eq!(w, 3.78e-4, epsilon = 5e-6);
        let wm = mv_weight(-1.0, 0.509, &s, &universe(), &costs()).unwrap();
        assert_eq!(w, -wm);
        assert!(mv_weight(1.0, 0.0, &s, &universe(), &costs()).is_err());
        assert!(mv_weight(1.0, -0.1, &s, &universe(), &costs()).is_err());
    }

    #[test]
    fn quintile_turnover_reference_points() {
        let tr = quintile_turnover(Correlation::new(0.6).unwrap()).unwrap();
        assert_abs_diff_eq!(tr, 1.008, epsilon = 5e-4);
        assert_eq!(quintile_turnover(Correlation::ONE).unwrap(), 0.0);
        let t = QuintileTransitions::new(Correlation::ZERO).unwrap();
        assert_abs_diff_eq!(t.short_to_long, 0.04, epsilon = 1e-15);
        assert_abs_diff_eq!(t.flat_to_long, 0.12, epsilon = 1e-15);
        assert_abs_diff_eq!(t.short_to_flat, 0.12, epsilon = 1e-15);
        assert_abs_diff_eq!(t.turnover(), 1.6, epsilon = 1e-14);
        assert!(quintile_turnover(Correlation::new(-0.2).unwrap()).is_err());
    }

    #[test]
    fn quintile_reference_rows() {
        let u = universe();
        assert_abs_diff_eq!(ir_quintile(&stats(0.4), &u), 0.948, epsilon = 1e-3);
        assert_abs_diff_eq!(ir_adj_quintile(&stats(0.4), &u, &costs()).unwrap(), 0.680, epsilon = 1e-3);
        assert_abs_diff_eq!(ir_adj_quintile(&stats(0.05), &u, &costs()).unwrap(), 0.854, epsilon = 1e-3);
        assert!(ir_quintile(&stats(0.2), &u) < ir_mv(&stats(0.2), &u));
    }

    #[test]
    fn exact_constants_close_to_printed() {
        let e = QuintileConstants::exact();
        let p = QuintileConstants::printed();
        assert_abs_diff_eq!(e.spread, p.spread, epsilon = 1e-3);
        // The IC-risk constant is the square of the spread constant.
        assert_abs_diff_eq!(e.ic_risk, e.spread * e.spread, epsilon = 1e-12);
        assert_abs_diff_eq!(p.ic_risk, p.spread * p.spread, epsilon = 1e-12);
        assert_abs_diff_eq!(e.ic_noise, p.ic_noise, epsilon = 0.02);
        let u = universe();
        let s = stats(0.2);
        assert_abs_diff_eq!(
            ir_quintile_with(&e, &s, &u),
            ir_quintile(&s, &u),
            epsilon = 1e-3
        );
    }

    #[test]
    fn crossover_near_nine_percent() {
        let c = crossover_decay(&stats(0.1), &universe(), &costs()).unwrap().unwrap();
        assert!((0.07..0.11).contains(&c), "crossover {c}");
        let zero_mu = SignalStats::from_decay(0.0, 0.05, 0.1).unwrap();
        assert_eq!(crossover_decay(&zero_mu, &universe(), &costs()).unwrap(), None);
    }
}
