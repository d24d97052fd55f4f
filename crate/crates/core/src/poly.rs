//! Polynomials over a [`Field`], Horner evaluation and the naive
//! multipoint oracle.
//!
//! A uniformly random polynomial with `k` coefficients is a member of a
//! `k`-independent family: its values at any `k` distinct points are
//! independent and uniform. The coefficient vector is therefore the seed of
//! every polynomial-based generator.

use rand::RngCore;
use thiserror::Error;

use crate::field::{Field, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("a polynomial needs at least one coefficient")]
    Empty,
    #[error("k = {k} exceeds the field size {order}")]
    TooManyCoefficients { k: usize, order: u128 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Coefficients `a_0, ..., a_{k-1}`, constant term first.
///
/// Trailing zero coefficients are kept: the length is the family parameter
/// `k`, not the degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<F: Field> {
    field: F,
    coeffs: Vec<u64>,
}

impl<F: Field> Polynomial<F> {
    pub fn new(field: F, coeffs: Vec<u64>) -> Result<Self, PolyError> {
        if coeffs.is_empty() {
            return Err(PolyError::Empty);
        }
        for &c in &coeffs {
            field.check(c)?;
        }
        Ok(Polynomial { field, coeffs })
    }

    /// Draws `k` independent uniform coefficients.
    pub fn random(field: F, k: usize, rng: &mut dyn RngCore) -> Result<Self, PolyError> {
        if k == 0 {
            return Err(PolyError::Empty);
        }
        if k as u128 > field.order() {
            return Err(PolyError::TooManyCoefficients {
                k,
                order: field.order(),
            });
        }
        let coeffs = (0..k).map(|_| field.random_element(rng)).collect();
        Ok(Polynomial { field, coeffs })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation: `k - 1` multiplications and `k - 1` additions.
    pub fn eval(&self, x: u64) -> Result<u64, PolyError> {
        self.field.check(x)?;
        Ok(self.eval_unchecked(x))
    }

    #[inline]
    pub fn eval_unchecked(&self, x: u64) -> u64 {
        let f = &self.field;
        let (last, rest) = self.coeffs.split_last().expect("non-empty");
        rest.iter()
            .rev()
            .fold(*last, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluates at every point with Horner's rule. This is the reference
    /// every fast evaluation path is checked against.
    pub fn eval_many(&self, points: &[u64]) -> Result<Vec<u64>, PolyError> {
        points.iter().map(|&x| self.eval(x)).collect()
    }
}

/// Free-function form of [`Polynomial::eval`].
pub fn horner_eval<F: Field>(h: &Polynomial<F>, x: u64) -> Result<u64, PolyError> {
    h.eval(x)
}

/// Free-function form of [`Polynomial::eval_many`].
pub fn naive_multipoint<F: Field>(
    h: &Polynomial<F>,
    points: &[u64],
) -> Result<Vec<u64>, PolyError> {
    h.eval_many(points)
}
