use std::fs::File;
use std::io::{BufWriter, Write};

use rand::rngs::OsRng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    exhaustive_independence_check_with_guard as exact_with_guard, screen_generator,
    support_enumeration_check, AnalysisError, IndependenceReport,
};
use crate::expander::{search_parameters, Candidate, ModeledCost, NeighborSource, SearchGrid};
use crate::field::Field;
use crate::generator::{
    build_expander_generator, Blueprint, ExpanderParams, GeneratorFactory, GraphStorage, InnerKind,
    KGenerator, Kind,
};
use crate::loadbalance::{run_baseline, run_experiment, ExperimentConfig, Workload};

use super::bench::{measure_ns_per_value, pinned_batch, BenchRow};
use super::seed::{decode_seed, encode_element, encode_seed};
use super::{
    BenchArgs, CliError, Command, Format, GenArgs, LoadBalanceArgs, Method, SearchArgs, VerifyArgs,
    WorkloadArg, EXIT_FAIL, EXIT_PASS,
};

pub(super) fn dispatch(
    command: &Command,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    match command {
        Command::Gen(a) => with_output(&a.out, out, |w| cmd_gen(a, w, err)),
        Command::Search(a) => with_output(&a.out, out, |w| cmd_search(a, w, err)),
        Command::Bench(a) => with_output(&a.out, out, |w| cmd_bench(a, w)),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Loadbalance(a) => with_output(&a.out, out, |w| cmd_loadbalance(a, w, err)),
    }
}

fn with_output(
    path: &Option<std::path::PathBuf>,
    out: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<i32, CliError>,
) -> Result<i32, CliError> {
    match path {
        Some(p) => {
            let mut file = BufWriter::new(File::create(p)?);
            let code = body(&mut file)?;
            file.flush()?;
            Ok(code)
        }
        None => {
            let mut buffered = BufWriter::new(out);
            let code = body(&mut buffered)?;
            buffered.flush()?;
            Ok(code)
        }
    }
}

fn header_line(bp: &Blueprint, seed: &[u64]) -> String {
    let mut line = format!("# {}", bp.descriptor());
    if let Some(g) = bp.graphs().first() {
        line += &format!(" c={} m={} d={}", g.imbalance(), g.right(), g.degree());
    }
    if !bp.graphs().is_empty() {
        line += &format!(" levels={}", bp.graphs().len());
    }
    line + &format!(" seed={}", encode_seed(bp.field_context(), seed))
}

/// Emits `--count` values. With `--entropy` the drawn seed is always
/// recorded in the header.
pub fn cmd_gen(a: &GenArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let bp = a.generator.blueprint(4)?;
    let field = bp.field_context().clone();
    let seed = match (&a.seed, a.entropy) {
        (Some(text), _) => decode_seed(&field, text)?,
        (None, true) => bp.random_seed(&mut OsRng),
        (None, false) => {
            return Err(CliError::Config(
                "either --seed or --entropy is required".into(),
            ))
        }
    };
    let mut gen = bp.init(&seed)?;
    let format = if a.hex { Format::Hex } else { a.format };
    if a.header || a.entropy {
        let mut line = header_line(&bp, &seed);
        if matches!(a.generator.kind, Kind::Expander | Kind::Cascade) {
            line += &format!(" graph_key={}", a.generator.graph_key);
        }
        match format {
            Format::Bin => writeln!(err, "{line}")?,
            _ => writeln!(out, "{line}")?,
        }
    }
    if format == Format::Csv {
        writeln!(out, "index,value")?;
    }
    let remaining = gen.remaining();
    let total = u128::from(a.count).min(remaining);
    let mut index: u128 = 0;
    let mut buf = vec![0u64; 4096];
    let mut bytes = Vec::new();
    while index < total {
        let take = (total - index).min(buf.len() as u128) as usize;
        gen.emit_batch(&mut buf[..take])?;
        for &v in &buf[..take] {
            match format {
                Format::Hex => writeln!(out, "{}", encode_element(&field, v))?,
                Format::Csv => writeln!(out, "{index},{v}")?,
                Format::Bin => {
                    bytes.clear();
                    field.encode(v, &mut bytes);
                    out.write_all(&bytes)?;
                }
            }
            index += 1;
        }
    }
    if u128::from(a.count) > remaining {
        out.flush()?;
        return Err(CliError::Exhausted { emitted: total });
    }
    Ok(EXIT_PASS)
}

const SEARCH_HEADER: &str = "k,feasible,c,d,log2_m,log10_delta,predicted_ns,measured_ns";

fn search_row(cand: &Candidate, measured: Option<f64>) -> String {
    match cand.log2_m {
        Some(l) => format!(
            "{},1,{},{},{},{:.3},{:.3},{}",
            cand.k,
            cand.c,
            cand.d,
            l,
            cand.log10_delta,
            cand.predicted_ns,
            measured.map_or(String::new(), |x| format!("{x:.3}"))
        ),
        None => format!(
            "{},0,{},{},,{:.3},,",
            cand.k, cand.c, cand.d, cand.log10_delta
        ),
    }
}

/// One row per `k` with the fastest feasible `(c, m, d)`, or every cell
/// with `--all`. Exits 1 when some `k` has no feasible cell.
pub fn cmd_search(
    a: &SearchArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    if !(a.delta > 0.0) {
        return Err(CliError::Config(format!(
            "--delta must be positive, got {}",
            a.delta
        )));
    }
    writeln!(out, "{SEARCH_HEADER}")?;
    let mut code = EXIT_PASS;
    for &k in &a.k {
        let grid = SearchGrid {
            k,
            imbalances: a.c.clone(),
            degrees: a.d.clone(),
            min_log2_m: a.min_log2_m,
            max_log2_m: a.max_log2_m,
            log10_delta_target: a.delta.log10(),
        };
        let result = search_parameters(&grid, &ModeledCost::default())?;
        let measured = match (&result.winner, a.bench) {
            (Some(w), true) => Some(bench_expander(
                k,
                w.c,
                w.d,
                w.m().expect("feasible"),
                1 << 18,
                5,
            )?),
            _ => None,
        };
        if a.all {
            for cand in &result.table {
                let m = (Some(cand) == result.winner.as_ref())
                    .then_some(measured)
                    .flatten();
                writeln!(out, "{}", search_row(cand, m))?;
            }
        }
        match &result.winner {
            Some(w) if !a.all => writeln!(out, "{}", search_row(w, measured))?,
            Some(_) => {}
            None => {
                writeln!(
                    err,
                    "k={k}: no (c, d, m) in the grid reaches delta <= {:e}",
                    a.delta
                )?;
                if !a.all {
                    let best = result
                        .table
                        .iter()
                        .min_by(|x, y| x.log10_delta.total_cmp(&y.log10_delta))
                        .expect("non-empty grid");
                    writeln!(out, "{}", search_row(best, None))?;
                }
                code = EXIT_FAIL;
            }
        }
    }
    Ok(code)
}

fn bench_expander(
    k: usize,
    c: usize,
    d: usize,
    m: usize,
    batch: usize,
    reps: usize,
) -> Result<f64, CliError> {
    let params = ExpanderParams {
        k,
        c,
        m,
        d,
        inner: InnerKind::FftBatch,
        storage: GraphStorage::Auto,
    };
    let bp = build_expander_generator("gf2w:64".parse().expect("builtin field"), &params, 0)?;
    let mut gen = bp.init_random(&mut ChaCha8Rng::seed_from_u64(0))?;
    Ok(measure_ns_per_value(gen.as_mut(), batch, reps)?)
}

fn timed(bp: &Blueprint, batch: usize, reps: usize) -> Result<f64, CliError> {
    let mut gen: Box<dyn KGenerator> = bp.init_random(&mut ChaCha8Rng::seed_from_u64(0))?;
    let batch = batch
        .min(bp.descriptor().period.saturating_sub(1) as usize / (reps + 1))
        .max(1);
    Ok(measure_ns_per_value(gen.as_mut(), batch, reps)?)
}

/// CSV of ns/value per kind and `k`; expander rows split the time into the
/// inner batch-evaluation share and the lookup share.
pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut csv = csv::Writer::from_writer(out);
    for &kind in &a.kinds {
        for &k in &a.k {
            let batch = a.batch.unwrap_or_else(|| pinned_batch(kind, k));
            let row = match kind {
                Kind::Horner | Kind::FftBatch => {
                    let bp = if kind == Kind::Horner {
                        Blueprint::horner(a.field.clone(), k)?
                    } else {
                        Blueprint::fft_batch(a.field.clone(), k)?
                    };
                    BenchRow {
                        kind: kind.name(),
                        k,
                        c: None,
                        d: None,
                        log2_m: None,
                        ns_per_value: timed(&bp, batch, a.reps)?,
                        fft_ns: None,
                        lookup_ns: None,
                    }
                }
                Kind::Expander => {
                    let m = match a.m {
                        Some(m) => m,
                        None => super::bench::expander_params_for(k, a.c, a.d, a.delta.log10(), 26)
                            .ok_or_else(|| {
                                CliError::Config(format!(
                                    "no m <= 2^26 reaches delta {:e} at k = {k}",
                                    a.delta
                                ))
                            })?,
                    };
                    let params = ExpanderParams {
                        k,
                        c: a.c,
                        m,
                        d: a.d,
                        inner: InnerKind::FftBatch,
                        storage: GraphStorage::Auto,
                    };
                    let bp = build_expander_generator(a.field.clone(), &params, 0)?;
                    let total = timed(&bp, batch, a.reps)?;
                    let inner = bp.inner().expect("expander has an inner generator");
                    let fft =
                        timed(inner, pinned_batch(Kind::FftBatch, a.d * k), a.reps)? / a.c as f64;
                    BenchRow {
                        kind: kind.name(),
                        k,
                        c: Some(a.c),
                        d: Some(a.d),
                        log2_m: Some(m.trailing_zeros()),
                        ns_per_value: total,
                        fft_ns: Some(fft),
                        lookup_ns: Some((total - fft).max(0.0)),
                    }
                }
                other => {
                    return Err(CliError::Config(format!(
                        "bench does not cover the {other} kind"
                    )))
                }
            };
            csv.serialize(row)
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
    }
    csv.flush()?;
    Ok(EXIT_PASS)
}

fn default_length(bp: &Blueprint) -> usize {
    let period = bp.descriptor().period;
    match bp.graphs().last() {
        Some(g) => g.left().min(period as usize),
        None => period.min(64) as usize,
    }
}

/// Prints the report as one JSON line; exits 1 on a fail verdict.
pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let k = a.generator.k.unwrap_or(2);
    let bp = a.generator.blueprint(k)?;
    let n = a.n.unwrap_or_else(|| default_length(&bp));
    let report: IndependenceReport = match a.method {
        Method::Seed => exact_with_guard(&bp, k, n, a.max_positions, a.guard)?,
        Method::Support => support_enumeration_check(&bp, k, n, a.max_positions)?,
        Method::Screen => screen_generator(&bp, k, a.window, a.trials, a.screen_seed)?,
        Method::Auto => match exact_with_guard(&bp, k, n, a.max_positions, a.guard) {
            Err(AnalysisError::Guard { .. })
                if bp.field_context().characteristic_two()
                    && matches!(bp.kind(), Kind::Expander | Kind::Cascade)
                    && matches!(bp.inner(), Some(Blueprint::Table { .. })) =>
            {
                support_enumeration_check(&bp, k, n, a.max_positions)?
            }
            other => other?,
        },
    };
    writeln!(out, "{}", report.to_line())?;
    Ok(if report.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

/// Writes the per-run CSV and a summary line to `err`.
pub fn cmd_loadbalance(
    a: &LoadBalanceArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let seed = u64::from_str_radix(a.seed.trim_start_matches("0x"), 16)
        .map_err(|e| CliError::Config(format!("--seed `{}`: {e}", a.seed)))?;
    let workload = match a.workload {
        WorkloadArg::Poisson => Workload::Poisson {
            rate: a.rate,
            duration: a.duration,
            horizon: a.horizon,
        },
        WorkloadArg::Burst => Workload::Burst { count: a.tasks },
    };
    let tasks = workload.tasks(&mut ChaCha8Rng::seed_from_u64(a.workload_seed))?;
    let config = ExperimentConfig {
        m: a.machines,
        b: a.b,
        eps: a.eps,
        repetitions: a.runs,
        seed,
    };
    let report = if a.baseline {
        run_baseline(&tasks, &config)?
    } else {
        let bp = a.generator.blueprint(a.machines * a.b)?;
        run_experiment(&tasks, &config, &bp)?
    };
    report.write_csv(&mut *out)?;
    writeln!(
        err,
        "tasks={} runs={} overflows={} frequency={} bound={:e} wilson99=[{}, {}]",
        report.tasks,
        report.runs.len(),
        report.overflows,
        report.frequency,
        report.bound,
        report.wilson.0,
        report.wilson.1
    )?;
    Ok(EXIT_PASS)
}
