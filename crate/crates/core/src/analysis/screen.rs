use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::field::{Field, FieldContext};
use crate::generator::{GeneratorError, GeneratorFactory};

use super::{binomial, AnalysisError, IndependenceReport, Verdict};

/// Upper-tail probability at which a screen rejects.
pub const SCREEN_QUANTILE: f64 = 1e-6;

/// Largest `k` a screen accepts; the joint histogram has `4^k` cells.
const MAX_SCREEN_K: usize = 4;

/// Probability of each low-2-bit residue for a uniform element.
fn residue_distribution(field: &FieldContext) -> [f64; 4] {
    let q = field.order();
    let mut p = [0.0; 4];
    for (r, slot) in p.iter_mut().enumerate() {
        let r = r as u128;
        let count = if q > r { (q - 1 - r) / 4 + 1 } else { 0 };
        *slot = count as f64 / q as f64;
    }
    p
}

/// Position sets screened in a window: the first `k` positions and `k`
/// positions spread evenly across the window.
fn position_sets(k: usize, window: usize) -> Vec<Vec<usize>> {
    let mut sets = vec![(0..k).collect::<Vec<_>>()];
    if k > 1 && window > k {
        let spread: Vec<usize> = (0..k).map(|j| j * (window - 1) / (k - 1)).collect();
        if spread != sets[0] {
            sets.push(spread);
        }
    }
    sets
}

/// Screens the joint distribution of the low 2 bits at fixed `k`-position
/// sets of a window, one window per trial.
///
/// `source(trial, window)` fills a window; trials must be independent
/// draws (a fresh seed each). Expected cell probabilities account for
/// fields whose order is not a multiple of 4. Fails when a chi-square
/// statistic exceeds the upper [`SCREEN_QUANTILE`] quantile.
pub fn chi_square_screen(
    field: &FieldContext,
    source: &mut dyn FnMut(u64, &mut [u64]) -> Result<(), GeneratorError>,
    k: usize,
    window: usize,
    trials: u64,
) -> Result<IndependenceReport, AnalysisError> {
    if k == 0 || k > MAX_SCREEN_K {
        return Err(AnalysisError::Precondition(format!(
            "screening needs 1 <= k <= {MAX_SCREEN_K}, got {k}"
        )));
    }
    if window < k {
        return Err(AnalysisError::Precondition(format!(
            "window {window} is below k = {k}"
        )));
    }
    let residue = residue_distribution(field);
    let cells = 1usize << (2 * k);
    let probs: Vec<f64> = (0..cells)
        .map(|cell| (0..k).map(|j| residue[(cell >> (2 * j)) & 3]).product())
        .collect();
    let support = probs.iter().filter(|&&p| p > 0.0).count();
    let sets = position_sets(k, window);
    let mut counts = vec![vec![0u64; cells]; sets.len()];
    let mut buf = vec![0u64; window];
    for trial in 0..trials {
        source(trial, &mut buf)?;
        for (set, count) in sets.iter().zip(counts.iter_mut()) {
            let cell = set.iter().enumerate().fold(0usize, |acc, (j, &p)| {
                acc | ((buf[p] & 3) as usize) << (2 * j)
            });
            count[cell] += 1;
        }
    }
    let threshold = if support > 1 {
        ChiSquared::new((support - 1) as f64)
            .expect("positive degrees of freedom")
            .inverse_cdf(1.0 - SCREEN_QUANTILE)
    } else {
        0.0
    };
    let mut worst = 0.0f64;
    let mut failing = None;
    for (set, count) in sets.iter().zip(&counts) {
        let stat: f64 = count
            .iter()
            .zip(&probs)
            .map(|(&o, &p)| {
                let e = p * trials as f64;
                if e == 0.0 {
                    if o == 0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    (o as f64 - e).powi(2) / e
                }
            })
            .sum();
        worst = worst.max(stat);
        if stat > threshold && failing.is_none() {
            failing = Some(set.clone());
        }
    }
    Ok(IndependenceReport {
        verdict: if failing.is_none() {
            Verdict::ScreenPass
        } else {
            Verdict::ScreenFail
        },
        method: "chi-square",
        k,
        n: window,
        positions_examined: sets.len() as u64,
        positions_total: binomial(window as u128, k as u128),
        samples: u128::from(trials),
        worst_deviation: worst,
        threshold: Some(threshold),
        failing_positions: failing,
    })
}

/// Screens `factory` with a fresh seed per trial drawn from a ChaCha
/// stream keyed by `rng_seed`.
pub fn screen_generator(
    factory: &dyn GeneratorFactory,
    k: usize,
    window: usize,
    trials: u64,
    rng_seed: u64,
) -> Result<IndependenceReport, AnalysisError> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let field = factory.field().clone();
    let mut source = |_trial: u64, out: &mut [u64]| -> Result<(), GeneratorError> {
        let seed = factory.random_seed(&mut rng as &mut dyn RngCore);
        factory.init(&seed)?.emit_batch(out)
    };
    chi_square_screen(&field, &mut source, k, window, trials)
}
