//! Univariate standard normal density, distribution and quantile.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{ensure_finite, ensure_open_unit, Result};

/// `1 / sqrt(2 pi)`
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub(crate) fn pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Unchecked `Phi(x)`; accepts infinities.
pub(crate) fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

pub fn std_normal_pdf(x: f64) -> Result<f64> {
    ensure_finite("x", x).map(pdf)
}

/// Standard normal distribution function, accurate to well below `1e-10`
/// absolute over the whole real line.
pub fn std_normal_cdf(x: f64) -> Result<f64> {
    ensure_finite("x", x).map(cdf)
}

/// Inverse of [`std_normal_cdf`] on `(0, 1)`.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    ensure_open_unit("p", p).map(quantile)
}

// Acklam's rational approximation (relative error ~1.2e-9).
const A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_69e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];
const P_LOW: f64 = 0.02425;

fn tail_approx(q: f64) -> f64 {
    (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
        / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
}

pub(crate) fn quantile(p: f64) -> f64 {
    let x = if p < P_LOW {
        tail_approx((-2.0 * p.ln()).sqrt())
    } else if p > 1.0 - P_LOW {
        -tail_approx((-2.0 * (1.0 - p).ln()).sqrt())
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };
    // One Halley step brings the error to roughly machine precision.
    let e = if x < 0.0 {
        cdf(x) - p
    } else {
        // Work with the upper tail to avoid cancellation near 1.
        (1.0 - p) - cdf(-x)
    };
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}
