//! Rectangle probabilities of the standard bivariate normal.
//!
//! Orthant probabilities follow Genz's double-precision refinement of the
//! Drezner–Wesolowsky method: the integral over the correlation parameter is
//! evaluated with 20-point Gauss–Legendre quadrature, with a separate
//! expansion for `|rho| >= 0.925`.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use super::normal::cdf;
use super::Correlation;
use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Correlations this close to +-1 are treated as exactly +-1.
pub const DEGENERATE_EPS: f64 = 1e-12;

// Gauss–Legendre N = 20, (weight, abscissa) pairs for the negative half.
const GL20: [(f64, f64); 10] = [
    (0.1761400713915212e-01, -0.9931285991850949),
    (0.4060142980038694e-01, -0.9639719272779138),
    (0.6267204833410906e-01, -0.9122344282513259),
    (0.8327674157670475e-01, -0.8391169718222188),
    (0.1019301198172404, -0.7463319064601508),
    (0.1181945319615184, -0.6360536807265150),
    (0.1316886384491766, -0.5108670019508271),
    (0.1420961093183821, -0.3737060887154196),
    (0.1491729864726037, -0.2277858511416451),
    (0.1527533871307259, -0.7652652113349733e-01),
];

/// `P(X > h, Y > k)` for finite `h`, `k` and `|r| < 1`.
fn bvnd(h: f64, k: f64, r: f64) -> f64 {
    let mut k = k;
    let mut hk = h * k;

    if r.abs() < 0.925 {
        let mut bvn = 0.0;
        if r != 0.0 {
            let hs = 0.5 * (h * h + k * k);
            let asr = r.asin();
            for &(w, x) in &GL20 {
                for is in [-1.0, 1.0] {
                    let sn = (asr * (is * x + 1.0) * 0.5).sin();
                    bvn += w * ((sn * hk - hs) / (1.0 - sn * sn)).exp();
                }
            }
            bvn *= asr / (2.0 * TWO_PI);
        }
        return bvn + cdf(-h) * cdf(-k);
    }

    if r < 0.0 {
        k = -k;
        hk = -hk;
    }
    let mut bvn = 0.0;
    if r.abs() < 1.0 {
        let a_s = (1.0 - r) * (1.0 + r);
        let mut a = a_s.sqrt();
        let b_s = (h - k) * (h - k);
        let c = (4.0 - hk) / 8.0;
        let d = (12.0 - hk) / 16.0;
        bvn = a
            * (-0.5 * (b_s / a_s + hk)).exp()
            * (1.0 - c * (b_s - a_s) * (1.0 - d * b_s / 5.0) / 3.0 + c * d * a_s * a_s / 5.0);
        if hk > -160.0 {
            let b = b_s.sqrt();
            bvn -= (-0.5 * hk).exp()
                * TWO_PI.sqrt()
                * cdf(-b / a)
                * b
                * (1.0 - c * b_s * (1.0 - d * b_s / 5.0) / 3.0);
        }
        a *= 0.5;
        for &(w, x) in &GL20 {
            for is in [-1.0, 1.0] {
                let xs = (a * (is * x + 1.0)).powi(2);
                let rs = (1.0 - xs).sqrt();
                bvn += a
                    * w
                    * ((-b_s / (2.0 * xs) - hk / (1.0 + rs)).exp() / rs
                        - (-0.5 * (b_s / xs + hk)).exp() * (1.0 + c * xs * (1.0 + d * xs)));
            }
        }
        bvn = -bvn / TWO_PI;
    }
    if r > 0.0 {
        bvn + cdf(-h.max(k))
    } else {
        let mut bvn = -bvn;
        if k > h {
            bvn += if h < 0.0 {
                cdf(k) - cdf(h)
            } else {
                cdf(-h) - cdf(-k)
            };
        }
        bvn
    }
}

/// Upper orthant `P(X > h, Y > k)`, with infinite limits allowed.
pub(crate) fn upper_orthant(h: f64, k: f64, rho: f64) -> f64 {
    if h == f64::INFINITY || k == f64::INFINITY {
        return 0.0;
    }
    if h == f64::NEG_INFINITY {
        return cdf(-k);
    }
    if k == f64::NEG_INFINITY {
        return cdf(-h);
    }
    if rho >= 1.0 - DEGENERATE_EPS {
        cdf(-h.max(k))
    } else if rho <= -1.0 + DEGENERATE_EPS {
        // X > h and -X > k  <=>  h < X < -k
        (cdf(-k) - cdf(h)).max(0.0)
    } else {
        bvnd(h, k, rho)
    }
}

fn check_bounds(name: &'static str, lower: f64, upper: f64) -> Result<()> {
    if lower.is_nan() || upper.is_nan() || lower >= upper {
        return Err(Error::InvertedBounds { name, lower, upper });
    }
    Ok(())
}

/// `P(lo1 < X < up1, lo2 < Y < up2)` for a standard bivariate normal with
/// correlation `rho`. Infinite bounds are open ends of the rectangle.
pub fn bvn_rect_prob(lo1: f64, up1: f64, lo2: f64, up2: f64, rho: Correlation) -> Result<f64> {
    check_bounds("first margin", lo1, up1)?;
    check_bounds("second margin", lo2, up2)?;
    let r = rho.value();
    let p = upper_orthant(lo1, lo2, r) - upper_orthant(up1, lo2, r) - upper_orthant(lo1, up2, r)
        + upper_orthant(up1, up2, r);
    Ok(p.clamp(0.0, 1.0))
}
