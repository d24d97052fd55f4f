//! Verification that generator streams are `(n, k)`-sequences.
//!
//! * [`exhaustive_independence_check`] enumerates every seed and counts the
//!   output tuples at every `k`-subset of positions.
//! * [`support_enumeration_check`] handles streams that are `F_2`-linear
//!   in the seed with 0/1 coefficients (expanders and cascades over a table
//!   base in characteristic 2), where full enumeration is out of reach. It
//!   recovers the linear map, then enumerates every assignment of the seed
//!   coordinates a position subset depends on, one bit plane at a time.
//! * [`chi_square_screen`] is a statistical smoke test at scale.

mod exact;
mod screen;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::generator::GeneratorError;

pub use exact::{
    exhaustive_independence_check, exhaustive_independence_check_with_guard,
    support_enumeration_check, KSubsets, DEFAULT_STREAM_GUARD, MAX_SUPPORT,
};
pub use screen::{chi_square_screen, screen_generator, SCREEN_QUANTILE};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("{what} needs {required}, above the limit of {limit}")]
    Guard {
        what: &'static str,
        required: u128,
        limit: u128,
    },
    #[error("{0}")]
    Precondition(String),
    #[error("stream is not a 0/1 linear map of the seed (position {position})")]
    NotLinear { position: usize },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExactPass,
    ExactFail,
    ScreenPass,
    ScreenFail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        matches!(self, Verdict::ExactPass | Verdict::ScreenPass)
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::ExactPass => "exact-pass",
            Verdict::ExactFail => "exact-fail",
            Verdict::ScreenPass => "screen-pass",
            Verdict::ScreenFail => "screen-fail",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub verdict: Verdict,
    /// `seed-enumeration`, `support-enumeration` or `chi-square`.
    pub method: &'static str,
    pub k: usize,
    /// Stream length considered.
    pub n: usize,
    /// Number of `k`-subsets of positions examined.
    pub positions_examined: u64,
    /// Total `k`-subsets of the `n` positions.
    pub positions_total: u128,
    /// Seeds (or support assignments) enumerated, or trials screened.
    pub samples: u128,
    /// Exact checks: largest `|count - expected| / expected` over all
    /// tuples. Screens: largest chi-square statistic.
    pub worst_deviation: f64,
    /// Screens: the rejection threshold for `worst_deviation`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// First position subset where the check failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_positions: Option<Vec<usize>>,
}

impl IndependenceReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    /// Single-line JSON.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for IndependenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}
