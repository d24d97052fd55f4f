//! Interval-task load balancing driven by a k-generator.
//!
//! Task `i` goes to machine `emit() mod m`. Loads are measured at interval
//! endpoints only: the active set changes nowhere else.

use std::io::Write;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, FieldContext};
use crate::generator::{GeneratorError, GeneratorFactory, KGenerator};

#[derive(Debug, Error)]
pub enum LoadBalanceError {
    #[error("invalid task [{start}, {end}): need finite start < end")]
    InvalidTask { start: f64, end: f64 },
    #[error("m = {m} does not divide the field size {order}")]
    NotDivisor { m: u64, order: u128 },
    #[error("epsilon must be positive, got {0}")]
    Epsilon(f64),
    #[error("load {load} at time {time} violates (1 + eps) L < m b = {capacity}")]
    Overloaded {
        time: f64,
        load: usize,
        capacity: f64,
    },
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// A half-open interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Task {
    pub start: f64,
    pub end: f64,
}

impl Task {
    pub fn new(start: f64, end: f64) -> Result<Self, LoadBalanceError> {
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(LoadBalanceError::InvalidTask { start, end });
        }
        Ok(Task { start, end })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.start <= x && x < self.end
    }
}

/// Machine index per task: the `i`-th emitted value mod `m`.
pub fn assign(
    tasks: &[Task],
    m: u64,
    generator: &mut dyn KGenerator,
) -> Result<Vec<usize>, LoadBalanceError> {
    let field: FieldContext = generator
        .descriptor()
        .field
        .parse()
        .map_err(|e: crate::field::FieldError| LoadBalanceError::Precondition(e.to_string()))?;
    check_divides(&field, m)?;
    let mut values = vec![0u64; tasks.len()];
    generator.emit_batch(&mut values)?;
    Ok(values.into_iter().map(|v| (v % m) as usize).collect())
}

fn check_divides(field: &FieldContext, m: u64) -> Result<(), LoadBalanceError> {
    let order = field.order();
    if m == 0 || order % u128::from(m) != 0 {
        return Err(LoadBalanceError::NotDivisor { m, order });
    }
    Ok(())
}

/// Task endpoints in sweep order: by time, ends before starts so that
/// touching half-open intervals never overlap.
#[derive(Debug, Clone)]
pub struct Sweep {
    /// `(time, task, is_start)`.
    events: Vec<(f64, usize, bool)>,
}

impl Sweep {
    pub fn new(tasks: &[Task]) -> Self {
        let mut events: Vec<(f64, usize, bool)> = tasks
            .iter()
            .enumerate()
            .flat_map(|(i, t)| [(t.start, i, true), (t.end, i, false)])
            .collect();
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
        Sweep { events }
    }

    /// Largest number of simultaneously active tasks and the first time it
    /// is reached.
    pub fn max_load(&self) -> (usize, f64) {
        let mut active = 0usize;
        let mut best = (0, f64::NAN);
        for &(time, _, start) in &self.events {
            if start {
                active += 1;
                if active > best.0 {
                    best = (active, time);
                }
            } else {
                active -= 1;
            }
        }
        best
    }

    /// Per-machine peak number of simultaneously active tasks.
    pub fn peaks(&self, assignment: &[usize], m: usize) -> PeakLoads {
        let mut active = vec![0u32; m];
        let mut peak = vec![0u32; m];
        for &(_, task, start) in &self.events {
            let q = assignment[task];
            if start {
                active[q] += 1;
                peak[q] = peak[q].max(active[q]);
            } else {
                active[q] -= 1;
            }
        }
        PeakLoads::new(peak)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeakLoads {
    pub per_machine: Vec<u32>,
    pub global: u32,
}

impl PeakLoads {
    fn new(per_machine: Vec<u32>) -> Self {
        let global = per_machine.iter().copied().max().unwrap_or(0);
        PeakLoads {
            per_machine,
            global,
        }
    }
}

/// Peak concurrent load per machine over all times.
pub fn peak_loads(tasks: &[Task], assignment: &[usize], m: usize) -> PeakLoads {
    Sweep::new(tasks).peaks(assignment, m)
}

/// `2 t m exp(-eps^2 b / 3)`: bound on the probability that some machine
/// ever holds more than `b` tasks when `(1 + eps) L(x) < m b` throughout.
pub fn overflow_bound(m: usize, b: usize, eps: f64, t: usize) -> Result<f64, LoadBalanceError> {
    if !(eps > 0.0) {
        return Err(LoadBalanceError::Epsilon(eps));
    }
    Ok(2.0 * t as f64 * m as f64 * (-eps * eps * b as f64 / 3.0).exp())
}

/// Wilson score interval for `successes` out of `n` at normal quantile `z`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let center = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Normal quantile for a two-sided 99% interval.
pub const Z_99: f64 = 2.575_829_303_548_9;

/// Task sets for experiments.
#[derive(Debug, Clone, PartialEq)]
pub enum Workload {
    /// Poisson arrivals at `rate` per unit time on `[0, horizon)`, each task
    /// lasting `duration`.
    Poisson {
        rate: f64,
        duration: f64,
        horizon: f64,
    },
    /// `count` copies of the interval `[0, 1)`.
    Burst {
        count: usize,
    },
    Fixed(Vec<Task>),
}

impl Workload {
    pub fn tasks(&self, rng: &mut dyn RngCore) -> Result<Vec<Task>, LoadBalanceError> {
        match self {
            Workload::Poisson {
                rate,
                duration,
                horizon,
            } => {
                if !(*rate > 0.0 && *duration > 0.0 && *horizon > 0.0) {
                    return Err(LoadBalanceError::Precondition(
                        "rate, duration and horizon must be positive".into(),
                    ));
                }
                let gap =
                    Exp::new(*rate).map_err(|e| LoadBalanceError::Precondition(e.to_string()))?;
                let mut tasks = Vec::new();
                let mut time = 0.0;
                loop {
                    time += gap.sample(rng);
                    if time >= *horizon {
                        break;
                    }
                    tasks.push(Task::new(time, time + duration)?);
                }
                Ok(tasks)
            }
            Workload::Burst { count } => (0..*count).map(|_| Task::new(0.0, 1.0)).collect(),
            Workload::Fixed(tasks) => Ok(tasks.clone()),
        }
    }
}

/// Rejects task sets where `(1 + eps) L(x) >= m b` for some `x`.
pub fn check_capacity(sweep: &Sweep, m: usize, b: usize, eps: f64) -> Result<(), LoadBalanceError> {
    if !(eps > 0.0) {
        return Err(LoadBalanceError::Epsilon(eps));
    }
    let (load, time) = sweep.max_load();
    let capacity = (m * b) as f64;
    if (1.0 + eps) * load as f64 >= capacity {
        return Err(LoadBalanceError::Overloaded {
            time,
            load,
            capacity,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub m: usize,
    pub b: usize,
    pub eps: f64,
    pub repetitions: u64,
    /// Run `r` draws its generator seed from a ChaCha stream keyed by
    /// `seed + r`.
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub run: u64,
    pub seed: u64,
    pub peaks: PeakLoads,
    pub overflow: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub tasks: usize,
    pub runs: Vec<RunRecord>,
    pub overflows: u64,
    pub frequency: f64,
    pub bound: f64,
    /// 99% Wilson interval of `frequency`.
    pub wilson: (f64, f64),
}

impl ExperimentReport {
    fn new(tasks: usize, runs: Vec<RunRecord>, bound: f64) -> Self {
        let overflows = runs.iter().filter(|r| r.overflow).count() as u64;
        let n = runs.len() as u64;
        ExperimentReport {
            tasks,
            frequency: if n == 0 {
                0.0
            } else {
                overflows as f64 / n as f64
            },
            wilson: wilson_interval(overflows, n, Z_99),
            runs,
            overflows,
            bound,
        }
    }

    /// CSV with columns `run,seed,peaks,overflow,bound`; `peaks` lists the
    /// per-machine peaks joined by `;`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), LoadBalanceError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["run", "seed", "peaks", "overflow", "bound"])?;
        for r in &self.runs {
            let peaks: Vec<String> = r.peaks.per_machine.iter().map(u32::to_string).collect();
            out.write_record([
                r.run.to_string(),
                r.seed.to_string(),
                peaks.join(";"),
                u8::from(r.overflow).to_string(),
                format!("{:e}", self.bound),
            ])?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

fn run_seed(base: u64, run: u64) -> u64 {
    base.wrapping_add(run)
}

fn prepare(tasks: &[Task], config: &ExperimentConfig) -> Result<(Sweep, f64), LoadBalanceError> {
    if config.m == 0 {
        return Err(LoadBalanceError::Precondition("m must be positive".into()));
    }
    let sweep = Sweep::new(tasks);
    check_capacity(&sweep, config.m, config.b, config.eps)?;
    let bound = overflow_bound(config.m, config.b, config.eps, tasks.len())?;
    Ok((sweep, bound))
}

/// Repeats the assignment with a fresh generator seed per run and reports
/// how often some machine exceeds `b`.
pub fn run_experiment(
    tasks: &[Task],
    config: &ExperimentConfig,
    factory: &dyn GeneratorFactory,
) -> Result<ExperimentReport, LoadBalanceError> {
    let (sweep, bound) = prepare(tasks, config)?;
    check_divides(factory.field(), config.m as u64)?;
    let runs = (0..config.repetitions)
        .into_par_iter()
        .map(|run| {
            let seed = run_seed(config.seed, run);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut generator = factory.init(&factory.random_seed(&mut rng))?;
            let assignment = assign(tasks, config.m as u64, generator.as_mut())?;
            let peaks = sweep.peaks(&assignment, config.m);
            Ok(RunRecord {
                run,
                seed,
                overflow: peaks.global as usize > config.b,
                peaks,
            })
        })
        .collect::<Result<Vec<_>, LoadBalanceError>>()?;
    Ok(ExperimentReport::new(tasks.len(), runs, bound))
}

/// The same experiment with every task placed independently and uniformly.
pub fn run_baseline(
    tasks: &[Task],
    config: &ExperimentConfig,
) -> Result<ExperimentReport, LoadBalanceError> {
    let (sweep, bound) = prepare(tasks, config)?;
    let runs = (0..config.repetitions)
        .into_par_iter()
        .map(|run| {
            let seed = run_seed(config.seed, run);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let assignment: Vec<usize> = (0..tasks.len())
                .map(|_| rng.gen_range(0..config.m))
                .collect();
            let peaks = sweep.peaks(&assignment, config.m);
            RunRecord {
                run,
                seed,
                overflow: peaks.global as usize > config.b,
                peaks,
            }
        })
        .collect();
    Ok(ExperimentReport::new(tasks.len(), runs, bound))
}
