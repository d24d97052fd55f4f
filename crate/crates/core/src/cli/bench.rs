//! Timing harness: medians of per-value times over repeated batches.

use std::hint::black_box;
use std::time::Instant;

use serde::Serialize;

use crate::expander::{search_parameters, ModeledCost, SearchGrid};
use crate::generator::{GeneratorError, KGenerator, Kind};

/// Median ns/value over `reps` timed batches of `batch` values, after one
/// untimed warm-up batch.
pub fn measure_ns_per_value(
    gen: &mut dyn KGenerator,
    batch: usize,
    reps: usize,
) -> Result<f64, GeneratorError> {
    let mut buf = vec![0u64; batch.max(1)];
    gen.emit_batch(&mut buf)?;
    let mut times = Vec::with_capacity(reps.max(1));
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        gen.emit_batch(&mut buf)?;
        black_box(&buf);
        times.push(start.elapsed().as_nanos() as f64 / buf.len() as f64);
    }
    Ok(median(&mut times))
}

pub(crate) fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Median ns for `d` dependent-free random reads from a table of `m` words,
/// the lower limit on an expander value's cost.
pub fn table_lookup_ns(m: usize, d: usize, batch: usize, reps: usize) -> f64 {
    let table: Vec<u64> = (0..m as u64)
        .map(|i| i.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .collect();
    let mask = m.next_power_of_two() - 1;
    let mut times = Vec::with_capacity(reps.max(1));
    let mut state = 1u64;
    for _ in 0..=reps.max(1) {
        let start = Instant::now();
        let mut acc = 0u64;
        for _ in 0..batch {
            for _ in 0..d {
                state = state
                    .wrapping_mul(6_364_136_223_846_793_005)
                    .wrapping_add(1_442_695_040_888_963_407);
                let i = (state >> 33) as usize & mask;
                acc ^= table[if i < m { i } else { i - m }];
            }
        }
        black_box(acc);
        times.push(start.elapsed().as_nanos() as f64 / batch.max(1) as f64);
    }
    times.remove(0);
    median(&mut times)
}

/// Least power-of-two `m` at which a `(c, m, d)` expander meets the target
/// for independence `k`.
pub fn expander_params_for(
    k: usize,
    c: usize,
    d: usize,
    log10_target: f64,
    max_log2_m: u32,
) -> Option<usize> {
    let grid = SearchGrid {
        k,
        imbalances: vec![c],
        degrees: vec![d],
        min_log2_m: 1,
        max_log2_m,
        log10_delta_target: log10_target,
    };
    search_parameters(&grid, &ModeledCost::default())
        .ok()?
        .winner?
        .m()
}

/// Values per timed batch for a kind at independence `k`.
pub(crate) fn pinned_batch(kind: Kind, k: usize) -> usize {
    match kind {
        Kind::Horner => ((1usize << 21) / k.max(1)).clamp(256, 1 << 16),
        Kind::FftBatch => (4 * k.next_power_of_two()).max(1 << 16),
        _ => 1 << 18,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub kind: &'static str,
    pub k: usize,
    pub c: Option<usize>,
    pub d: Option<usize>,
    pub log2_m: Option<u32>,
    pub ns_per_value: f64,
    /// Expander kind: the inner batch evaluation's share, `FFT_{dk} / c`.
    pub fft_ns: Option<f64>,
    /// Expander kind: the remainder, spent on table lookups.
    pub lookup_ns: Option<f64>,
}
