//! Failure-probability bounds for random expander constructions.
//!
//! Everything is computed in log space: the bounds of interest go far below
//! the smallest representable double.

use std::f64::consts::{E, LN_10, LN_2};

use statrs::function::gamma::ln_gamma;

use super::ExpanderError;

/// A union bound `delta = sum_i term_i`, kept in log10.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    /// `log10` of the total.
    pub log10_delta: f64,
    /// `log10` of the term for subset size `i`, at index `i - 1`.
    pub log10_terms: Vec<f64>,
}

impl BoundResult {
    fn from_ln_terms(ln_terms: Vec<f64>) -> Self {
        let ln_total = log_sum_exp(&ln_terms);
        BoundResult {
            log10_delta: ln_total / LN_10,
            log10_terms: ln_terms.into_iter().map(|t| t / LN_10).collect(),
        }
    }

    /// The bound as a probability; underflows to zero for tiny values.
    pub fn delta(&self) -> f64 {
        10f64.powf(self.log10_delta)
    }
}

/// `ln(sum exp(x_i))`, stable for very negative inputs.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max == f64::INFINITY {
        return max;
    }
    max + xs.iter().map(|&x| (x - max).exp()).sum::<f64>().ln()
}

/// Bound on the probability that a random `(c, m, d)`-graph fails to be
/// `k`-unique:
/// `sum_{i=1}^k (c m e^(1 + d/2) ((d/2) i^(1 - 2/d) / m)^(d/2))^i`.
pub fn unique_failure_bound(
    c: usize,
    m: usize,
    d: usize,
    k: usize,
) -> Result<BoundResult, ExpanderError> {
    if c == 0 || m == 0 || d == 0 || k == 0 {
        return Err(ExpanderError::ZeroSize);
    }
    if k.saturating_mul(d) > m {
        return Err(ExpanderError::Precondition(format!(
            "k d = {} exceeds m = {m}",
            k * d
        )));
    }
    let h = d as f64 / 2.0;
    let ln_cm = (c as f64).ln() + (m as f64).ln();
    let ln_m = (m as f64).ln();
    let terms = (1..=k)
        .map(|i| {
            let ln_i = (i as f64).ln();
            let bracket = ln_cm + 1.0 + h + h * (h.ln() + (1.0 - 1.0 / h) * ln_i - ln_m);
            i as f64 * bracket
        })
        .collect();
    Ok(BoundResult::from_ln_terms(terms))
}

/// `delta = e c d / gamma^(d/2 - 1)`, the failure probability obtained by
/// taking `m` proportional to `d k gamma`.
pub fn delta_from_gamma(c: f64, d: f64, gamma: f64) -> f64 {
    E * c * d / gamma.powf(d / 2.0 - 1.0)
}

/// `ln` of `(i d - 1)!! (1/m)^(i d / 2)`, the pairing bound on `i d` balls
/// in `m` bins landing with even parity in every bin. An odd number of
/// balls can never pair up, giving `ln 0 = -inf`.
pub fn beta_pair(i: usize, d: usize, m: usize) -> f64 {
    let n = i * d;
    if n % 2 == 1 {
        return f64::NEG_INFINITY;
    }
    let half = (n / 2) as f64;
    // (2h - 1)!! = (2h)! / (2^h h!)
    let ln_double_factorial = ln_gamma(n as f64 + 1.0) - half * LN_2 - ln_gamma(half + 1.0);
    ln_double_factorial - half * (m as f64).ln()
}

/// `ln` of `e sqrt(i d) ((1 + e^(-2 i d / m)) / 2)^m`, the Poisson
/// approximation bound on every bin having even parity.
pub fn beta_poisson(i: usize, d: usize, m: usize) -> f64 {
    let n = (i * d) as f64;
    let m = m as f64;
    // ln((1 + e^-x) / 2) = ln(1 + expm1(-x) / 2), accurate for small x.
    1.0 + 0.5 * n.ln() + m * ((-2.0 * n / m).exp_m1() / 2.0).ln_1p()
}

/// Union bound over subsets of at most `k` rows on the probability that
/// some nonempty subset of rows of the random `c m x m` matrix sums to zero:
/// `sum_{i=1}^k C(c m, i) min(beta_pair, beta_poisson)`.
pub fn rank_failure_bound(
    c: usize,
    m: usize,
    d: usize,
    k: usize,
) -> Result<BoundResult, ExpanderError> {
    if c == 0 || m == 0 || d == 0 || k == 0 {
        return Err(ExpanderError::ZeroSize);
    }
    let n = (c * m) as f64;
    let mut ln_binom = 0.0;
    let mut terms = Vec::with_capacity(k);
    for i in 1..=k {
        let fi = i as f64;
        if fi > n {
            terms.push(f64::NEG_INFINITY);
            continue;
        }
        ln_binom += (n - fi + 1.0).ln() - fi.ln();
        terms.push(ln_binom + beta_pair(i, d, m).min(beta_poisson(i, d, m)));
    }
    Ok(BoundResult::from_ln_terms(terms))
}
