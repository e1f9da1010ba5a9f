//! Acceptance suite. Run with `cargo test --test acceptance`; prints one
//! PASS/FAIL line per criterion and exits non-zero if any fails.

mod common;

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use turnover_ir::analytics::{
    crossover_decay, ir_adj_mv, ir_adj_quintile, ir_mv, ir_quintile, quintile_turnover,
    theory_row, turnover_mv, MetricsRow,
};
use turnover_ir::integrated::{
    eq20_derivative_numerator, ir_adj_mv_ewma, ir_adj_one_lag, optimize_blend, BlendObjective,
    BlendType, EwmaBlend, OneLagBlend,
};
use turnover_ir::sim::{run_experiment, SimulationConfig};
use turnover_ir::stat_kernels::{
    bvn_rect_prob, lognormal_universe_stats, truncated_tail_moments, Correlation,
    LogNormalVolModel,
};
use turnover_ir::{CostParams, PortfolioKind, SignalStats, UniverseStats};

const DECAYS: [f64; 8] = [0.4, 0.35, 0.3, 0.25, 0.2, 0.15, 0.1, 0.05];

// Printed theoretical columns: IR, IR', TR.
const TABLE1: [[f64; 3]; 8] = [
    [0.962, 0.666, 0.741],
    [0.962, 0.685, 0.693],
    [0.962, 0.706, 0.641],
    [0.962, 0.728, 0.586],
    [0.962, 0.753, 0.524],
    [0.962, 0.781, 0.454],
    [0.962, 0.814, 0.370],
    [0.962, 0.858, 0.262],
];
const TABLE2: [[f64; 3]; 8] = [
    [0.948, 0.680, 1.008],
    [0.948, 0.698, 0.942],
    [0.948, 0.717, 0.871],
    [0.948, 0.737, 0.794],
    [0.948, 0.759, 0.710],
    [0.948, 0.785, 0.614],
    [0.948, 0.815, 0.501],
    [0.948, 0.854, 0.354],
];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn universe(n: usize) -> UniverseStats {
    lognormal_universe_stats(LogNormalVolModel::default(), n).unwrap()
}

fn base_costs() -> CostParams {
    CostParams::new(0.01, 0.05).unwrap()
}

fn table_rows(kind: PortfolioKind) -> Vec<MetricsRow> {
    let u = universe(5000);
    DECAYS
        .iter()
        .map(|&d| {
            let stats = SignalStats::from_decay(0.05, 0.05, d).unwrap();
            theory_row(kind, &stats, &u, &base_costs()).unwrap()
        })
        .collect()
}

fn check_table(kind: PortfolioKind, printed: &[[f64; 3]; 8], tol: f64, budget: Duration) -> Outcome {
    let start = Instant::now();
    let rows = table_rows(kind);
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (row, expected) in rows.iter().zip(printed) {
        for (got, want) in [row.ir, row.ir_adj, row.tr].into_iter().zip(expected) {
            let err = (got - want).abs();
            worst = worst.max(err);
            if err > tol {
                failures.push(format!("decay {}: {got:.5} vs {want}", row.decay));
            }
        }
    }
    let passed = failures.is_empty() && elapsed < budget;
    Outcome::new(
        passed,
        format!(
            "max |err| {worst:.2e} (tol {tol}), {:.3} s (limit {} s){}",
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; {}", failures.join(", "))
            }
        ),
    )
}

fn criterion_table1() -> Outcome {
    check_table(PortfolioKind::MeanVariance, &TABLE1, 0.001, Duration::from_secs(1))
}

fn criterion_table2() -> Outcome {
    check_table(PortfolioKind::QuintileLongShort, &TABLE2, 0.002, Duration::from_secs(5))
}

fn criterion_simulation() -> Outcome {
    let start = Instant::now();
    let u = universe(5000);
    let mut failures = Vec::new();
    let (mut worst_ir, mut worst_tr) = (0.0f64, 0.0f64);
    for kind in [PortfolioKind::MeanVariance, PortfolioKind::QuintileLongShort] {
        for &d in &DECAYS {
            let stats = SignalStats::from_decay(0.05, 0.05, d).unwrap();
            let theory = theory_row(kind, &stats, &u, &base_costs()).unwrap();
            let mut config = SimulationConfig::new(
                stats,
                LogNormalVolModel::default(),
                base_costs(),
                kind,
                20_240_601,
            );
            config.reps = 50;
            let sim = run_experiment(&config).unwrap();
            let e_ir = (sim.ir_mean - theory.ir).abs();
            let e_adj = (sim.ir_adj_mean - theory.ir_adj).abs();
            let e_tr = (sim.tr_mean - theory.tr).abs();
            worst_ir = worst_ir.max(e_ir).max(e_adj);
            worst_tr = worst_tr.max(e_tr);
            println!(
                "    {:<8} decay {d:.2}: IR {:.4}/{:.4}  IR' {:.4}/{:.4}  TR {:.4}/{:.4}",
                kind.label(),
                sim.ir_mean,
                theory.ir,
                sim.ir_adj_mean,
                theory.ir_adj,
                sim.tr_mean,
                theory.tr
            );
            if e_ir > 0.02 || e_adj > 0.02 || e_tr > 0.01 {
                failures.push(format!("{} decay {d}", kind.label()));
            }
        }
    }
    let elapsed = start.elapsed();
    let passed = failures.is_empty() && elapsed < Duration::from_secs(600);
    Outcome::new(
        passed,
        format!(
            "max |IR err| {worst_ir:.4} (tol 0.02), max |TR err| {worst_tr:.4} (tol 0.01), {:.1} s{}",
            elapsed.as_secs_f64(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failing: {}", failures.join(", "))
            }
        ),
    )
}

fn criterion_crossover() -> Outcome {
    let u = universe(5000);
    let costs = base_costs();
    let stats = SignalStats::from_decay(0.05, 0.05, 0.2).unwrap();
    let Some(root) = crossover_decay(&stats, &u, &costs).unwrap() else {
        return Outcome::new(false, "no crossover found");
    };
    let diff = |d: f64| {
        let s = SignalStats::from_decay(0.05, 0.05, d).unwrap();
        ir_adj_mv(&s, &u, &costs) - ir_adj_quintile(&s, &u, &costs).unwrap()
    };
    let below_ok = (1..=8).all(|i| diff(root * i as f64 / 9.0) > 0.0);
    let above_ok = (1..=40).all(|i| diff(root + (0.9 - root) * i as f64 / 40.0) < 0.0);
    Outcome::new(
        (root - 0.09).abs() <= 0.02 && below_ok && above_ok,
        format!("crossover decay {root:.5} (want 0.09 +/- 0.02); mv higher below: {below_ok}; quintile higher above: {above_ok}"),
    )
}

fn criterion_bivariate() -> Outcome {
    let rhos = [-0.95, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 0.95, 0.6];
    let points = [-3.0, -1.5, -0.8416212335729143, -0.3, 0.0, 0.5, 0.8416212335729143, 1.7, 3.5];
    let inf = f64::INFINITY;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for &rho in &rhos {
        for _ in 0..20 {
            let pick = |rng: &mut ChaCha8Rng| -> (f64, f64) {
                let a = rng.random_range(0..=points.len());
                let b = rng.random_range(0..=points.len());
                let (a, b) = (a.min(b), a.max(b) + 1);
                let at = |i: usize| {
                    if i == 0 {
                        -inf
                    } else if i > points.len() {
                        inf
                    } else {
                        points[i - 1]
                    }
                };
                (at(a), at(b))
            };
            let (lo1, up1) = pick(&mut rng);
            let (lo2, up2) = pick(&mut rng);
            let got = bvn_rect_prob(lo1, up1, lo2, up2, Correlation::new(rho).unwrap()).unwrap();
            let want = common::bvn_rect_oracle(lo1, up1, lo2, up2, rho);
            worst = worst.max((got - want).abs());
            cases += 1;
        }
    }
    let mut worst_sum = 0.0f64;
    for &rho in &rhos {
        for &h in &points {
            for &k in &points {
                let r = Correlation::new(rho).unwrap();
                let total = bvn_rect_prob(-inf, h, -inf, k, r).unwrap()
                    + bvn_rect_prob(h, inf, -inf, k, r).unwrap()
                    + bvn_rect_prob(-inf, h, k, inf, r).unwrap()
                    + bvn_rect_prob(h, inf, k, inf, r).unwrap();
                worst_sum = worst_sum.max((total - 1.0).abs());
            }
        }
    }
    Outcome::new(
        cases == 200 && worst <= 1e-6 && worst_sum <= 1e-7,
        format!("{cases} cases, max |err| vs quadrature {worst:.2e} (tol 1e-6); max |quadrant sum - 1| {worst_sum:.2e} (tol 1e-7)"),
    )
}

fn criterion_tail_constants() -> Outcome {
    let m = truncated_tail_moments(0.8).unwrap();
    let ok = (m.mean - 1.3998).abs() <= 0.0005 && (m.variance - 0.2187).abs() <= 0.0005;
    Outcome::new(
        ok,
        format!("tail mean {:.6} (want 1.3998), tail variance {:.6} (want 0.2187)", m.mean, m.variance),
    )
}

fn criterion_appendix_b() -> Outcome {
    let u = universe(5000);
    let stats = SignalStats::new(0.05, 0.1, 0.9).unwrap();
    let mut notes = Vec::new();
    let mut ok = true;
    let mut lambda_star = [0.0; 2];
    let mut w1_star = [0.0; 2];
    for (slot, tcost) in [0.01, 0.03].into_iter().enumerate() {
        let costs = CostParams::new(tcost, 0.05).unwrap();
        let num = |l: f64| {
            eq20_derivative_numerator(EwmaBlend::new(l).unwrap(), &stats, &u, &costs).unwrap()
        };
        let start_pos = num(0.001) > 0.0;
        let end_neg = num(0.999) < 0.0;
        let signs: Vec<Ordering> = (1..10_000)
            .map(|i| num(i as f64 * 1e-4).partial_cmp(&0.0).unwrap())
            .filter(|o| *o != Ordering::Equal)
            .collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        ok &= start_pos && end_neg && changes == 1;

        let ewma = BlendObjective {
            blend: BlendType::Ewma,
            kind: PortfolioKind::MeanVariance,
            stats,
            universe: u,
            costs,
        };
        let (lo, hi) = BlendType::Ewma.domain();
        let best = optimize_blend(&ewma, lo, hi).unwrap();
        let strictly_inside = best.argmax > 0.0 && best.argmax < 1.0 && best.interior;
        ok &= strictly_inside;
        lambda_star[slot] = best.argmax;

        let one_lag = BlendObjective {
            blend: BlendType::OneLag,
            ..ewma
        };
        let (lo, hi) = BlendType::OneLag.domain();
        w1_star[slot] = optimize_blend(&one_lag, lo, hi).unwrap().argmax;
        notes.push(format!(
            "Tcost {tcost}: A16 +@0.001 {start_pos}, -@0.999 {end_neg}, sign changes {changes}, lambda* {:.4} interior {strictly_inside}, w1* {:.4}",
            lambda_star[slot], w1_star[slot]
        ));
    }
    ok &= lambda_star[1] > lambda_star[0] && w1_star[1] < w1_star[0];
    Outcome::new(ok, notes.join("; "))
}

fn criterion_reductions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = [0.0f64; 6];
    for _ in 0..100 {
        let mu = rng.random_range(0.005..0.15);
        let v = rng.random_range(0.005..0.2);
        let rho = rng.random_range(0.0..0.99);
        let n = rng.random_range(50..20_000);
        let tcost = rng.random_range(0.0..0.05);
        let te = rng.random_range(0.01..0.2);
        let model = LogNormalVolModel::new(rng.random_range(-2.0..0.0), rng.random_range(0.05..0.6)).unwrap();
        let u = lognormal_universe_stats(model, n).unwrap();
        let stats = SignalStats::new(mu, v, rho).unwrap();
        let costs = CostParams::new(tcost, te).unwrap();
        let free = CostParams::new(0.0, te).unwrap();

        let ewma0 = ir_adj_mv_ewma(EwmaBlend::new(0.0).unwrap(), &stats, &u, &costs).unwrap();
        worst[0] = worst[0].max((ewma0 - ir_adj_mv(&stats, &u, &costs)).abs());

        let w1 = OneLagBlend::new(1.0).unwrap();
        for kind in [PortfolioKind::MeanVariance, PortfolioKind::QuintileLongShort] {
            let blended = ir_adj_one_lag(w1, &stats, &u, &costs, kind).unwrap();
            let plain = match kind {
                PortfolioKind::MeanVariance => ir_adj_mv(&stats, &u, &costs),
                PortfolioKind::QuintileLongShort => ir_adj_quintile(&stats, &u, &costs).unwrap(),
            };
            worst[1] = worst[1].max((blended - plain).abs());
        }

        worst[2] = worst[2]
            .max((ir_adj_mv(&stats, &u, &free) - ir_mv(&stats, &u)).abs())
            .max((ir_adj_quintile(&stats, &u, &free).unwrap() - ir_quintile(&stats, &u)).abs());

        let frozen = SignalStats::new(mu, v, 1.0).unwrap();
        worst[3] = worst[3].max(turnover_mv(&frozen, &u, &costs).abs());
        worst[4] = worst[4].max(quintile_turnover(Correlation::ONE).unwrap().abs());
        worst[5] = worst[5].max((quintile_turnover(Correlation::ZERO).unwrap() - 1.6).abs());
    }
    let tol = 1e-12;
    Outcome::new(
        worst.iter().all(|w| *w <= tol),
        format!(
            "100 draws; max deviations: ewma(0) {:.1e}, w1=1 {:.1e}, Tcost=0 {:.1e}, mv TR@decay 0 {:.1e}, quintile TR@rho 1 {:.1e}, quintile TR@rho 0 - 1.6 {:.1e} (tol {tol:.0e})",
            worst[0], worst[1], worst[2], worst[3], worst[4], worst[5]
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("Table 1 mean-variance closed forms", criterion_table1),
        ("Table 2 quintile closed forms", criterion_table2),
        ("Desk-scale simulation agreement", criterion_simulation),
        ("Crossover of turnover-adjusted IR curves", criterion_crossover),
        ("Bivariate normal rectangle kernel", criterion_bivariate),
        ("Truncated-normal tail constants", criterion_tail_constants),
        ("Blend derivative and optimizers", criterion_appendix_b),
        ("Reduction identities", criterion_reductions),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = check();
        println!(
            "{} {name}: {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
