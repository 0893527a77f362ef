//! Experiment orchestration: parameter sweeps over generated (or tabled)
//! instances, one result row per (grid point, trial, algorithm).

mod output;
mod realworld;
mod seed;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use output::{emit_csv, write_csv, CSV_HEADER};
pub use realworld::{
    load_realworld, standin_table, RealWorldRow, RealWorldTable, STANDIN_LOCATIONS,
};
pub use seed::{derive_seed, instance_rng, noise_rng};

use crate::error::{Error, Result};
use crate::evaluation::{check_capacities, normalized_cost, total_cost};
use crate::exec::Exec;
use crate::generators::{generate_with, ClientModel, CostRange, GeneratorConfig, Process};
use crate::model::{Instance, Solution};
use crate::privacy::PrivacyParams;
use crate::solvers::{
    solve_ldp_margin, solve_ldp_reconnection, solve_optimal, Algorithm, SolveParams,
};

/// The parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepKind {
    Delta,
    Epsilon,
    N,
    BAvg,
    /// One grid point at `grid.start`, nothing varied.
    Single,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Delta => "delta",
            SweepKind::Epsilon => "epsilon",
            SweepKind::N => "n",
            SweepKind::BAvg => "bavg",
            SweepKind::Single => "single",
        }
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            SweepKind::Delta,
            SweepKind::Epsilon,
            SweepKind::N,
            SweepKind::BAvg,
            SweepKind::Single,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::param(format!("unknown sweep kind '{s}'")))
    }
}

/// Inclusive arithmetic grid `start, start + step, ..., <= stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !start.is_finite() || !stop.is_finite() || !step.is_finite() {
            return Err(Error::param("grid bounds must be finite"));
        }
        if !(step > 0.0) {
            return Err(Error::param(format!("grid step must be > 0, got {step}")));
        }
        if stop < start {
            return Err(Error::param(format!(
                "grid stop {stop} is below start {start}"
            )));
        }
        Ok(Grid { start, stop, step })
    }

    /// A one-point grid.
    pub fn single(value: f64) -> Self {
        Grid {
            start: value,
            stop: value,
            step: 1.0,
        }
    }

    /// Grid values, snapped to 12 decimals so that `0.05 * 7` prints as
    /// `0.35`.
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| {
                let v = self.start + i as f64 * self.step;
                (v * 1e12).round() / 1e12
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [a, b, c] = parts[..] else {
            return Err(Error::param(format!(
                "grid must be START,STOP,STEP, got '{s}'"
            )));
        };
        let num = |x: &str| {
            x.parse::<f64>()
                .map_err(|_| Error::param(format!("bad grid number '{x}'")))
        };
        Grid::new(num(a)?, num(b)?, num(c)?)
    }
}

/// Where each trial's instance comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    /// A fresh point-process realization per trial.
    Generated {
        process: Process,
        config: GeneratorConfig,
    },
    /// Fixed locations and clients; facility costs are redrawn per trial.
    Table {
        table: RealWorldTable,
        costs: CostRange,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub grid: Grid,
    pub trials_per_point: usize,
    pub source: InstanceSource,
    pub solve: SolveParams,
    pub algorithms: Vec<Algorithm>,
    pub master_seed: u64,
    /// Record wall-clock solve times. Off by default because timings make
    /// otherwise identical runs differ.
    pub record_timing: bool,
    pub exec: Exec,
}

impl SweepConfig {
    /// Clustered-instance defaults: n = 1000, γ = 2, δ_gen = 0.2,
    /// f ∈ [0.1, 0.3], ε = 0.1, α = 0.1, δ = 0.2, all three algorithms.
    pub fn new(kind: SweepKind, grid: Grid, trials_per_point: usize) -> Self {
        SweepConfig {
            kind,
            grid,
            trials_per_point,
            source: InstanceSource::Generated {
                process: Process::Matern,
                config: GeneratorConfig::default(),
            },
            solve: SolveParams {
                privacy: PrivacyParams::new(0.1, 0.1).expect("valid defaults"),
                delta: 0.2,
            },
            algorithms: Algorithm::ALL.to_vec(),
            master_seed: 0,
            record_timing: false,
            exec: Exec::default(),
        }
    }

    pub fn points(&self) -> Vec<f64> {
        match self.kind {
            SweepKind::Single => vec![self.grid.start],
            _ => self.grid.values(),
        }
    }

    fn algorithms_in_order(&self) -> Vec<Algorithm> {
        let mut algs = self.algorithms.clone();
        algs.sort();
        algs.dedup();
        algs
    }

    /// Expected number of result rows.
    pub fn row_count(&self) -> usize {
        self.points().len() * self.trials_per_point * self.algorithms_in_order().len()
    }

    fn validate(&self) -> Result<()> {
        if self.trials_per_point == 0 {
            return Err(Error::param("trials per point must be at least 1"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::param("no algorithms selected"));
        }
        if matches!(self.source, InstanceSource::Table { .. }) && self.kind == SweepKind::N {
            return Err(Error::param("an n-sweep needs generated instances"));
        }
        Ok(())
    }

    /// Source and solve parameters at one grid value.
    fn at(&self, value: f64) -> Result<(InstanceSource, SolveParams)> {
        let mut source = self.source.clone();
        let mut solve = self.solve;
        match self.kind {
            SweepKind::Delta => solve = SolveParams::new(solve.privacy, value)?,
            SweepKind::Epsilon => {
                solve.privacy = PrivacyParams::new(value, solve.privacy.alpha())?;
            }
            SweepKind::N => {
                if let InstanceSource::Generated { config, .. } = &mut source {
                    if !(value >= 1.0) {
                        return Err(Error::param(format!("n must be >= 1, got {value}")));
                    }
                    config.n = value.round() as usize;
                }
            }
            SweepKind::BAvg => {
                if !(value >= 0.0) {
                    return Err(Error::param(format!("b_avg must be >= 0, got {value}")));
                }
                let b = value.round() as u64;
                match &mut source {
                    InstanceSource::Generated { config, .. } => {
                        config.clients = ClientModel::Constant(b)
                    }
                    InstanceSource::Table { table, .. } => {
                        table.rows.iter_mut().for_each(|r| r.clients = b)
                    }
                }
            }
            SweepKind::Single => {}
        }
        Ok((source, solve))
    }
}

/// One algorithm's outcome on one trial instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub sweep_kind: SweepKind,
    pub sweep_value: f64,
    pub trial: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub realized_n: usize,
    pub total_cost: f64,
    pub facility_cost: f64,
    pub connection_cost: f64,
    pub opt_cost: f64,
    /// `total_cost / opt_cost`; absent when the optimum is zero.
    pub normalized_cost: Option<f64>,
    pub failed: bool,
    pub n_open_facilities: usize,
    pub runtime_ms: Option<f64>,
}

fn build_instance(source: &InstanceSource, seed: u64) -> Result<Instance> {
    let mut rng = instance_rng(seed);
    match source {
        InstanceSource::Generated { process, config } => generate_with(*process, config, &mut rng),
        InstanceSource::Table { table, costs } => table.to_instance(*costs, &mut rng),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

/// Runs every (grid point, trial) and returns rows ordered by
/// (point, trial, algorithm), whatever order the trials executed in.
///
/// Within a trial all algorithms share one instance and the private ones
/// share one noise stream, so they compare on identical perturbed counts.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let points = cfg.points();
    let settings = points
        .iter()
        .map(|&v| cfg.at(v))
        .collect::<Result<Vec<_>>>()?;
    let algorithms = cfg.algorithms_in_order();
    let trials = cfg.trials_per_point;

    let per_trial = cfg.exec.try_map_range(points.len() * trials, |job| {
        let (p, t) = (job / trials, job % trials);
        let (source, solve) = &settings[p];
        let seed = derive_seed(cfg.master_seed, p as u64, t as u64);
        let inst = build_instance(source, seed)?;
        let (optimal, opt_ms) = timed(|| solve_optimal(&inst));
        let opt_cost = total_cost(&inst, &optimal)?.total;

        algorithms
            .iter()
            .map(|&alg| {
                let (sol, ms): (Solution, f64) = match alg {
                    Algorithm::Optimal => (optimal.clone(), opt_ms),
                    Algorithm::Margin => {
                        timed(|| solve_ldp_margin(&inst, &solve.privacy, &mut noise_rng(seed)))
                    }
                    Algorithm::Reconnection => {
                        let (sol, ms) =
                            timed(|| solve_ldp_reconnection(&inst, solve, &mut noise_rng(seed)));
                        (sol?, ms)
                    }
                };
                let cost = total_cost(&inst, &sol)?;
                Ok(ResultRow {
                    sweep_kind: cfg.kind,
                    sweep_value: points[p],
                    trial: t,
                    seed,
                    algorithm: alg,
                    realized_n: inst.len(),
                    total_cost: cost.total,
                    facility_cost: cost.facility_cost,
                    connection_cost: cost.connection_cost,
                    opt_cost,
                    normalized_cost: normalized_cost(cost.total, opt_cost).ok(),
                    failed: check_capacities(&inst, &sol)?.any_failure,
                    n_open_facilities: sol.n_open(),
                    runtime_ms: cfg.record_timing.then_some(ms),
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(per_trial.into_iter().flatten().collect())
}
