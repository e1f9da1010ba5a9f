//! Bounded scalar maximization: a coarse grid scan followed by golden-section
//! refinement of the best bracket.

use serde::Serialize;

pub const GRID_POINTS: usize = 1024;
pub const PARAM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub argmax: f64,
    pub max_value: f64,
    /// `argmax` lies strictly inside `(lo, hi)`.
    pub interior: bool,
}

/// Maximizes `objective` on `[lo, hi]`.
///
/// Ties resolve to the smallest argument, so a constant objective returns
/// `lo`. The refined point replaces the best grid point only if it is
/// strictly better.
pub fn maximize<F>(objective: F, lo: f64, hi: f64) -> OptimizationResult
where
    F: Fn(f64) -> f64,
{
    assert!(lo < hi, "empty interval [{lo}, {hi}]");
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let at = |i: usize| {
        if i == GRID_POINTS - 1 {
            hi
        } else {
            lo + i as f64 * step
        }
    };

    let mut best_i = 0;
    let mut best = objective(lo);
    for i in 1..GRID_POINTS {
        let v = objective(at(i));
        if v > best {
            best = v;
            best_i = i;
        }
    }

    let a = at(best_i.saturating_sub(1));
    let b = at((best_i + 1).min(GRID_POINTS - 1));
    let (x, fx) = golden_section(&objective, a, b, PARAM_TOL);

    let (argmax, max_value) = if fx > best { (x, fx) } else { (at(best_i), best) };
    OptimizationResult {
        argmax,
        max_value,
        interior: argmax > lo && argmax < hi,
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn golden_section<F>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
