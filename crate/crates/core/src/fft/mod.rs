//! Batch polynomial evaluation at structured point sets.
//!
//! * [`AdditiveFftPlan`] evaluates over `GF(2^w)` on an affine `F_2`-subspace
//!   with the Gao–Mateer recursion.
//! * [`CosetDftPlan`] evaluates over `GF(p)` on the multiplicative cosets
//!   `w^j <w_k>` with a radix-2 DFT of twisted coefficients.

mod additive;
mod coset;

use thiserror::Error;

use crate::field::FieldError;

pub use additive::{additive_fft, AdditiveFftPlan, NoCount, OpCount, OpCounter};
pub use coset::{coset_dft, direct_dft, CosetDftPlan};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FftError {
    #[error("polynomial of length {len} does not fit a transform of size {size}")]
    TooLong { len: usize, size: usize },
    #[error("subspace dimension {s} exceeds field width {w}")]
    DimensionTooLarge { s: u32, w: u32 },
    #[error("basis elements are linearly dependent over F_2")]
    DependentBasis,
    #[error("expected {expected} basis elements, got {got}")]
    BasisLength { expected: usize, got: usize },
    #[error("transform length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("transform length {k} does not divide p - 1 = {group}")]
    NotDivisor { k: usize, group: u64 },
    #[error("coset {j} is out of range (there are {cosets})")]
    BadCoset { j: u64, cosets: u64 },
    #[error("all cosets have been used")]
    PeriodExhausted,
    #[error(transparent)]
    Field(#[from] FieldError),
}
