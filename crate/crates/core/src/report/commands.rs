//! The five report commands.

use std::time::Instant;

use serde_json::{json, Map, Value};

use super::table::{meta_real, Cell, ReportTable};
use super::{Command, ExperimentSpec, ReportError};
use crate::analytics::{
    crossover_decay, ir_adj, quintile_turnover, theory_row_with, turnover_mv, MetricsRow,
    QuintileConstants,
};
use crate::integrated::{optimize_blend, BlendObjective};
use crate::params::{CostParams, PortfolioKind, SignalStats, UniverseStats};
use crate::sim::{run_experiment, SimResult, SimulationConfig};
use crate::stat_kernels::lognormal_universe_stats;

const THEORY_COLUMNS: [&str; 5] = ["autocorrelation", "decay", "ir", "ir_adj", "tr"];
const SIM_COLUMNS: [&str; 8] = [
    "ir_sim",
    "ir_adj_sim",
    "tr_sim",
    "ir_se",
    "ir_adj_se",
    "tr_se",
    "reps",
    "seed",
];

struct Inputs {
    universe: UniverseStats,
    costs: CostParams,
    constants: QuintileConstants,
}

impl Inputs {
    fn new(spec: &ExperimentSpec) -> Result<Self, ReportError> {
        Ok(Self {
            universe: lognormal_universe_stats(spec.vol_model, spec.n)?,
            costs: CostParams::new(spec.tcost, spec.te)?,
            constants: if spec.exact_constants {
                QuintileConstants::exact()
            } else {
                QuintileConstants::printed()
            },
        })
    }

    fn theory(&self, spec: &ExperimentSpec, kind: PortfolioKind, decay: f64) -> Result<MetricsRow, ReportError> {
        let stats = SignalStats::from_decay(spec.mu_ic, spec.v_ic, decay)?;
        Ok(theory_row_with(&self.constants, kind, &stats, &self.universe, &self.costs)?)
    }
}

fn theory_cells(row: &MetricsRow) -> Vec<Cell> {
    vec![
        row.rho.into(),
        row.decay.into(),
        row.ir.into(),
        row.ir_adj.into(),
        row.tr.into(),
    ]
}

fn metadata(spec: &ExperimentSpec, seed: Option<u64>, started: Instant) -> Map<String, Value> {
    let mut meta = Map::new();
    meta.insert("command".into(), json!(spec.command.name()));
    meta.insert(
        "parameters".into(),
        serde_json::to_value(spec).expect("spec serializes"),
    );
    meta.insert("seed".into(), json!(seed));
    meta.insert(
        "runtime_seconds".into(),
        if spec.timing {
            meta_real(started.elapsed().as_secs_f64())
        } else {
            Value::Null
        },
    );
    meta
}

/// Closed-form IR, turnover-adjusted IR and turnover over the decay grid.
pub fn cmd_theory(spec: &ExperimentSpec) -> Result<ReportTable, ReportError> {
    let started = Instant::now();
    spec.validate()?;
    let inputs = Inputs::new(spec)?;
    let mut table = ReportTable::new(THEORY_COLUMNS.to_vec());
    for &decay in &spec.decay_grid {
        table.push(theory_cells(&inputs.theory(spec, spec.kind, decay)?));
    }
    table.metadata = metadata(spec, None, started);
    Ok(table)
}

fn sim_config(spec: &ExperimentSpec, kind: PortfolioKind, decay: f64) -> Result<SimulationConfig, ReportError> {
    let config = SimulationConfig {
        periods: spec.periods,
        reps: spec.reps,
        n: spec.n,
        ..SimulationConfig::new(
            SignalStats::from_decay(spec.mu_ic, spec.v_ic, decay)?,
            spec.vol_model,
            CostParams::new(spec.tcost, spec.te)?,
            kind,
            spec.seed,
        )
    };
    config.validate()?;
    if config.cells() > spec.max_cells {
        return Err(ReportError::Resource(format!(
            "refusing to simulate {} cells (reps x n x periods); the cap is {}",
            config.cells(),
            spec.max_cells
        )));
    }
    Ok(config)
}

fn sim_cells(result: &SimResult, spec: &ExperimentSpec) -> Vec<Cell> {
    vec![
        result.ir_mean.into(),
        result.ir_adj_mean.into(),
        result.tr_mean.into(),
        result.ir_se.into(),
        result.ir_adj_se.into(),
        result.tr_se.into(),
        (result.reps_used as u64).into(),
        spec.seed.into(),
    ]
}

fn simulate_table(spec: &ExperimentSpec, kinds: &[PortfolioKind], with_kind: bool) -> Result<ReportTable, ReportError> {
    let started = Instant::now();
    spec.validate()?;
    let inputs = Inputs::new(spec)?;
    // Refuse before doing any work.
    let configs = kinds
        .iter()
        .flat_map(|&kind| spec.decay_grid.iter().map(move |&d| (kind, d)))
        .map(|(kind, decay)| Ok((kind, decay, sim_config(spec, kind, decay)?)))
        .collect::<Result<Vec<_>, ReportError>>()?;

    let mut columns = Vec::new();
    if with_kind {
        columns.push("kind");
    }
    columns.extend(THEORY_COLUMNS);
    columns.extend(SIM_COLUMNS);
    let mut table = ReportTable::new(columns);

    let mut excluded = 0;
    let mut clamped = 0;
    let mut above = 0;
    for (kind, decay, config) in configs {
        let theory = inputs.theory(spec, kind, decay)?;
        let result = run_experiment(&config)?;
        excluded += result.reps_excluded;
        clamped += result.clamped_noise_periods;
        above += result.ir_adj_above_ir;
        let mut row = Vec::new();
        if with_kind {
            row.push(kind.label().into());
        }
        row.extend(theory_cells(&theory));
        row.extend(sim_cells(&result, spec));
        table.push(row);
    }
    table.metadata = metadata(spec, Some(spec.seed), started);
    table.metadata.insert("reps_excluded".into(), json!(excluded));
    table.metadata.insert("clamped_noise_periods".into(), json!(clamped));
    table.metadata.insert("reps_with_ir_adj_above_ir".into(), json!(above));
    Ok(table)
}

/// Theory joined with Monte Carlo estimates for the selected portfolio kind.
pub fn cmd_simulate(spec: &ExperimentSpec) -> Result<ReportTable, ReportError> {
    simulate_table(spec, &[spec.kind], false)
}

/// `simulate` for both portfolio kinds, with a leading `kind` column.
pub fn cmd_sweep(spec: &ExperimentSpec) -> Result<ReportTable, ReportError> {
    simulate_table(
        spec,
        &[PortfolioKind::MeanVariance, PortfolioKind::QuintileLongShort],
        true,
    )
}

/// Turnover-adjusted IR of the blended signal over the parameter grid,
/// followed by the optimum as a row flagged `is_optimum = 1`.
pub fn cmd_optimize(spec: &ExperimentSpec) -> Result<ReportTable, ReportError> {
    let started = Instant::now();
    spec.validate()?;
    let inputs = Inputs::new(spec)?;
    let objective = BlendObjective {
        blend: spec.blend,
        kind: spec.kind,
        stats: SignalStats::from_decay(spec.mu_ic, spec.v_ic, spec.decay_grid[0])?,
        universe: inputs.universe,
        costs: inputs.costs,
    };
    let mut table = ReportTable::new(vec!["parameter", "ir_adj", "is_optimum", "interior"]);
    for &x in &spec.param_grid {
        table.push(vec![
            x.into(),
            objective.evaluate(x)?.into(),
            false.into(),
            Cell::Missing,
        ]);
    }
    let (lo, hi) = spec.blend.domain();
    let best = optimize_blend(&objective, lo, hi)?;
    table.push(vec![
        best.argmax.into(),
        best.max_value.into(),
        true.into(),
        best.interior.into(),
    ]);
    table.metadata = metadata(spec, None, started);
    table.metadata.insert("parameter".into(), json!(spec.blend.parameter_name()));
    table.metadata.insert(
        "optimum".into(),
        json!({
            "argmax": meta_real(best.argmax),
            "max_value": meta_real(best.max_value),
            "interior": best.interior,
        }),
    );
    Ok(table)
}

/// Both turnover-adjusted IR curves and both turnover curves over the decay
/// grid, followed by the crossover point (if any) flagged `is_crossover = 1`.
pub fn cmd_crossover(spec: &ExperimentSpec) -> Result<ReportTable, ReportError> {
    let started = Instant::now();
    spec.validate()?;
    let inputs = Inputs::new(spec)?;
    let mut table = ReportTable::new(vec![
        "autocorrelation",
        "decay",
        "ir_adj_mv",
        "ir_adj_quintile",
        "tr_mv",
        "tr_quintile",
        "is_crossover",
    ]);
    let row = |decay: f64, flag: bool| -> Result<Vec<Cell>, ReportError> {
        let stats = SignalStats::from_decay(spec.mu_ic, spec.v_ic, decay)?;
        let (u, c) = (&inputs.universe, &inputs.costs);
        Ok(vec![
            (1.0 - decay).into(),
            decay.into(),
            ir_adj(PortfolioKind::MeanVariance, &stats, u, c)?.into(),
            ir_adj(PortfolioKind::QuintileLongShort, &stats, u, c)?.into(),
            turnover_mv(&stats, u, c).into(),
            quintile_turnover(stats.rho())?.into(),
            flag.into(),
        ])
    };
    for &decay in &spec.decay_grid {
        table.push(row(decay, false)?);
    }
    let reference = SignalStats::from_decay(spec.mu_ic, spec.v_ic, 0.5)?;
    let root = crossover_decay(&reference, &inputs.universe, &inputs.costs)?;
    if let Some(decay) = root {
        table.push(row(decay, true)?);
    }
    table.metadata = metadata(spec, None, started);
    table
        .metadata
        .insert("crossover_decay".into(), root.map_or(Value::Null, meta_real));
    Ok(table)
}

pub fn run(spec: &ExperimentSpec) -> Result<ReportTable, ReportError> {
    match spec.command {
        Command::Theory => cmd_theory(spec),
        Command::Simulate => cmd_simulate(spec),
        Command::Sweep => cmd_sweep(spec),
        Command::Optimize => cmd_optimize(spec),
        Command::Crossover => cmd_crossover(spec),
    }
}
