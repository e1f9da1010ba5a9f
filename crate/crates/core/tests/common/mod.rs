//! Independent numerical oracles. Nothing here calls into the library's
//! special-function code paths.

#![allow(dead_code)]

use std::f64::consts::PI;

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Recursive bisection until the Gauss/Kronrod difference is below `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gk15(f, a, b);
        if err <= tol || depth >= 40 {
            return value;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, 0.5 * tol, depth + 1) + recurse(f, m, b, 0.5 * tol, depth + 1)
    }
    recurse(f, a, b, tol, 0)
}

/// Integration limits beyond which the standard normal density is < 1e-19.
pub const CUTOFF: f64 = 9.5;

fn clip(v: f64) -> f64 {
    v.clamp(-CUTOFF, CUTOFF)
}

pub fn normal_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Brute-force rectangle probability: nested adaptive quadrature of the
/// bivariate normal density.
pub fn bvn_rect_oracle(lo1: f64, up1: f64, lo2: f64, up2: f64, rho: f64) -> f64 {
    let (a1, b1, a2, b2) = (clip(lo1), clip(up1), clip(lo2), clip(up2));
    if a1 >= b1 || a2 >= b2 {
        return 0.0;
    }
    let s2 = 1.0 - rho * rho;
    let norm = 1.0 / (2.0 * PI * s2.sqrt());
    let inner = |x: f64| {
        let f = |y: f64| norm * (-(x * x - 2.0 * rho * x * y + y * y) / (2.0 * s2)).exp();
        // Split the inner range at the conditional mean where the mass sits.
        let centre = (rho * x).clamp(a2, b2);
        integrate(&f, a2, centre, 1e-13) + integrate(&f, centre, b2, 1e-13)
    };
    integrate(&inner, a1, b1, 1e-11)
}

/// Univariate normal probability by quadrature.
pub fn normal_prob_oracle(lo: f64, up: f64) -> f64 {
    integrate(&normal_density, clip(lo), clip(up), 1e-14)
}

/// `Phi^{-1}(p)` by bisection on the quadrature distribution function.
pub fn quantile_oracle(p: f64) -> f64 {
    let (mut a, mut b) = (-CUTOFF, CUTOFF);
    while b - a > 1e-13 {
        let m = 0.5 * (a + b);
        if normal_prob_oracle(-CUTOFF, m) < p {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Mean and variance of `X | X > cut` by quadrature of the tail.
pub fn tail_moments_oracle(cut: f64) -> (f64, f64) {
    let upper = 40.0;
    let mass = integrate(&normal_density, cut, upper, 1e-15);
    let m1 = integrate(&|x: f64| x * normal_density(x), cut, upper, 1e-15) / mass;
    let m2 = integrate(&|x: f64| x * x * normal_density(x), cut, upper, 1e-15) / mass;
    (m1, m2 - m1 * m1)
}

/// Sample mean and standard error.
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
