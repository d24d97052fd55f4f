use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::field::Field;
use crate::generator::GeneratorFactory;

use super::{binomial, AnalysisError, IndependenceReport, Verdict};

/// Largest number of streams [`exhaustive_independence_check`] enumerates.
pub const DEFAULT_STREAM_GUARD: u128 = 10_000_000;

/// Largest seed support, in coordinates, per position subset in
/// [`support_enumeration_check`].
pub const MAX_SUPPORT: usize = 24;

/// Largest number of tuple counters held at once.
const COUNTER_LIMIT: u128 = 1 << 28;

/// `k`-subsets of `0..n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct KSubsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl KSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        KSubsets {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for KSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

fn check_shape(factory: &dyn GeneratorFactory, k: usize, n: usize) -> Result<(), AnalysisError> {
    if k == 0 {
        return Err(AnalysisError::Precondition("k must be positive".into()));
    }
    if n < k {
        return Err(AnalysisError::Precondition(format!(
            "stream length {n} is below k = {k}"
        )));
    }
    let period = factory.descriptor().period;
    if n as u128 > period {
        return Err(AnalysisError::Precondition(format!(
            "stream length {n} exceeds the period {period}"
        )));
    }
    Ok(())
}

fn position_subsets(n: usize, k: usize, max_positions: u64) -> Vec<Vec<usize>> {
    KSubsets::new(n, k).take(max_positions as usize).collect()
}

/// Deviation of `counts` from `expected` each, and whether all match.
fn deviation(counts: &[u32], expected: u128) -> (f64, bool) {
    let uniform = counts.iter().all(|&c| u128::from(c) == expected);
    let e = expected.max(1) as f64;
    let worst = counts
        .iter()
        .map(|&c| (f64::from(c) - expected as f64).abs() / e)
        .fold(0.0, f64::max);
    (worst, uniform)
}

/// Enumerates all `|F|^seed_len` seeds, materializes each length-`n`
/// stream and checks that at every examined `k`-subset of positions each of
/// the `|F|^k` tuples occurs exactly `#seeds / |F|^k` times.
///
/// Position subsets are taken in lexicographic order, at most
/// `max_positions` of them.
pub fn exhaustive_independence_check(
    factory: &dyn GeneratorFactory,
    k: usize,
    n: usize,
    max_positions: u64,
) -> Result<IndependenceReport, AnalysisError> {
    exhaustive_independence_check_with_guard(factory, k, n, max_positions, DEFAULT_STREAM_GUARD)
}

pub fn exhaustive_independence_check_with_guard(
    factory: &dyn GeneratorFactory,
    k: usize,
    n: usize,
    max_positions: u64,
    guard: u128,
) -> Result<IndependenceReport, AnalysisError> {
    check_shape(factory, k, n)?;
    let field = factory.field();
    let q = field.order();
    let seed_len = factory.descriptor().seed_len;
    let seeds = q.checked_pow(seed_len as u32).unwrap_or(u128::MAX);
    if seeds > guard {
        return Err(AnalysisError::Guard {
            what: "seed enumeration",
            required: seeds,
            limit: guard,
        });
    }
    let subsets = position_subsets(n, k, max_positions);
    let cells = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    let counters = cells.saturating_mul(subsets.len() as u128);
    if counters > COUNTER_LIMIT {
        return Err(AnalysisError::Guard {
            what: "tuple counters",
            required: counters,
            limit: COUNTER_LIMIT,
        });
    }
    let cells = cells as usize;
    let chunk = (seeds / 64).max(1);
    let chunks = seeds.div_ceil(chunk) as usize;
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<Vec<u32>, AnalysisError> {
            let c = c as u128;
            let mut counts = vec![0u32; subsets.len() * cells];
            let mut seed = vec![0u64; seed_len];
            let mut stream = vec![0u64; n];
            for code in c * chunk..((c + 1) * chunk).min(seeds) {
                let mut rest = code;
                for s in seed.iter_mut() {
                    *s = field.element_at(rest % q);
                    rest /= q;
                }
                factory.init(&seed)?.emit_batch(&mut stream)?;
                for (idx, subset) in subsets.iter().enumerate() {
                    let tuple = subset
                        .iter()
                        .rev()
                        .fold(0u128, |acc, &p| acc * q + u128::from(stream[p]));
                    counts[idx * cells + tuple as usize] += 1;
                }
            }
            Ok(counts)
        })
        .try_reduce(
            || vec![0u32; subsets.len() * cells],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    let expected = if seeds % cells as u128 == 0 {
        seeds / cells as u128
    } else {
        u128::MAX
    };
    let mut worst = 0.0f64;
    let mut failing = None;
    for (idx, subset) in subsets.iter().enumerate() {
        let (dev, uniform) =
            deviation(&counts[idx * cells..(idx + 1) * cells], expected.min(seeds));
        worst = worst.max(dev);
        if (!uniform || expected == u128::MAX) && failing.is_none() {
            failing = Some(subset.clone());
        }
    }
    Ok(IndependenceReport {
        verdict: if failing.is_none() {
            Verdict::ExactPass
        } else {
            Verdict::ExactFail
        },
        method: "seed-enumeration",
        k,
        n,
        positions_examined: subsets.len() as u64,
        positions_total: binomial(n as u128, k as u128),
        samples: seeds,
        worst_deviation: worst,
        threshold: None,
        failing_positions: failing,
    })
}

/// Number of random seeds on which the recovered linear map is checked.
const LINEARITY_PROBES: usize = 4;

/// Exact check for streams over `GF(2^w)` that are sums of seed entries
/// (expanders and cascades over a table base).
///
/// Each output is `sum_y M[j][y] x_y` for a 0/1 matrix `M`, recovered by
/// probing with unit seeds and confirmed on random seeds. Addition acts on
/// each bit plane separately and the planes of a uniform seed are
/// independent uniform vectors over `F_2`, so the outputs at a position
/// subset `S` are uniform over `F^k` iff one plane is uniform over
/// `F_2^k`. For each `S` this enumerates all `2^|U|` assignments of the
/// plane restricted to the support `U` of the rows in `S`; coordinates
/// outside `U` do not affect those outputs.
pub fn support_enumeration_check(
    factory: &dyn GeneratorFactory,
    k: usize,
    n: usize,
    max_positions: u64,
) -> Result<IndependenceReport, AnalysisError> {
    check_shape(factory, k, n)?;
    let field = factory.field();
    if !field.characteristic_two() {
        return Err(AnalysisError::Precondition(
            "support enumeration needs a field of characteristic 2".into(),
        ));
    }
    let rows = recover_rows(factory, n)?;
    let subsets = position_subsets(n, k, max_positions);
    let cells = 1usize << k;
    let mut counts = vec![0u32; cells];
    let mut support: Vec<usize> = Vec::new();
    let mut masks = vec![0u32; k];
    let mut worst = 0.0f64;
    let mut failing = None;
    let mut samples: u128 = 0;
    for subset in &subsets {
        support.clear();
        for &p in subset {
            support.extend(bits(&rows[p]));
        }
        support.sort_unstable();
        support.dedup();
        if support.len() > MAX_SUPPORT {
            return Err(AnalysisError::Guard {
                what: "support assignments",
                required: 1u128 << support.len(),
                limit: 1 << MAX_SUPPORT,
            });
        }
        for (mask, &p) in masks.iter_mut().zip(subset) {
            *mask = support
                .iter()
                .enumerate()
                .filter(|&(_, &y)| rows[p][y / 64] >> (y % 64) & 1 == 1)
                .fold(0, |acc, (i, _)| acc | 1 << i);
        }
        counts.fill(0);
        let total = 1u32 << support.len();
        for a in 0..total {
            let tuple = masks.iter().enumerate().fold(0usize, |acc, (j, &mask)| {
                acc | (((a & mask).count_ones() & 1) as usize) << j
            });
            counts[tuple] += 1;
        }
        samples += u128::from(total);
        let expected = if support.len() >= k {
            u128::from(total) >> k
        } else {
            u128::MAX
        };
        let (dev, uniform) = deviation(&counts, expected.min(u128::from(total)));
        worst = worst.max(dev);
        if (!uniform || expected == u128::MAX) && failing.is_none() {
            failing = Some(subset.clone());
        }
    }
    Ok(IndependenceReport {
        verdict: if failing.is_none() {
            Verdict::ExactPass
        } else {
            Verdict::ExactFail
        },
        method: "support-enumeration",
        k,
        n,
        positions_examined: subsets.len() as u64,
        positions_total: binomial(n as u128, k as u128),
        samples,
        worst_deviation: worst,
        threshold: None,
        failing_positions: failing,
    })
}

fn bits(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        (0..64)
            .filter(move |b| word >> b & 1 == 1)
            .map(move |b| w * 64 + b)
    })
}

/// Rows of the 0/1 map from seed to the first `n` outputs.
fn recover_rows(factory: &dyn GeneratorFactory, n: usize) -> Result<Vec<Vec<u64>>, AnalysisError> {
    let len = factory.descriptor().seed_len;
    let words = len.div_ceil(64);
    let mut stream = vec![0u64; n];
    let mut seed = vec![0u64; len];
    factory.init(&seed)?.emit_batch(&mut stream)?;
    if let Some(position) = stream.iter().position(|&v| v != 0) {
        return Err(AnalysisError::NotLinear { position });
    }
    let mut rows = vec![vec![0u64; words]; n];
    for y in 0..len {
        seed.fill(0);
        seed[y] = 1;
        factory.init(&seed)?.emit_batch(&mut stream)?;
        for (j, &v) in stream.iter().enumerate() {
            match v {
                0 => {}
                1 => rows[j][y / 64] |= 1 << (y % 64),
                _ => return Err(AnalysisError::NotLinear { position: j }),
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..LINEARITY_PROBES {
        let seed = factory.random_seed(&mut rng);
        factory.init(&seed)?.emit_batch(&mut stream)?;
        for (j, &v) in stream.iter().enumerate() {
            let want = bits(&rows[j]).fold(0, |acc, y| acc ^ seed[y]);
            if v != want {
                return Err(AnalysisError::NotLinear { position: j });
            }
        }
    }
    Ok(rows)
}
