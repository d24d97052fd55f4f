//! Finite field arithmetic on machine words.
//!
//! Two families are supported: binary extension fields `GF(2^w)` with
//! `w <= 64`, reduced modulo a sparse irreducible polynomial, and prime
//! fields `GF(p)` with `p < 2^63`, reduced with a precomputed reciprocal.
//!
//! Elements are plain `u64` words in canonical form. Every operation takes
//! the field context explicitly, so a single code path serves any field
//! size (including the tiny fields used by the brute-force oracles).

mod binary;
pub mod clmul;
mod number;
mod prime;

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use thiserror::Error;

pub use binary::{builtin_polynomial, is_irreducible_bruteforce, is_irreducible_rabin, Gf2w};
pub use number::{factorize, is_prime};
pub use prime::Gfp;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("bit width {0} is outside 1..=64")]
    BadWidth(u32),
    #[error("reduction polynomial {0}")]
    BadPolynomial(String),
    #[error("modulus {0} is not a prime below 2^63")]
    NotPrime(u64),
    #[error("element {value:#x} is not canonical in {field}")]
    NonCanonical { value: u64, field: String },
    #[error("invalid factorization of p-1: {0}")]
    BadFactorization(String),
    #[error("cannot parse field description `{0}` (expected gf2w:<w> or gfp:<p>)")]
    Parse(String),
    #[error("expected {expected} bytes per element, got {got}")]
    Encoding { expected: usize, got: usize },
}

/// Borrowed view of a concrete field, for code that needs the
/// field-specific structure (FFT plans, bit-plane arguments).
#[derive(Debug, Clone, Copy)]
pub enum FieldView<'a> {
    Binary(&'a Gf2w),
    Prime(&'a Gfp),
}

/// Arithmetic over a finite field whose elements fit in a `u64`.
pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    /// Number of elements `|F|`.
    fn order(&self) -> u128;
    fn add(&self, a: u64, b: u64) -> u64;
    fn sub(&self, a: u64, b: u64) -> u64;
    fn neg(&self, a: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;
    fn is_canonical(&self, a: u64) -> bool;
    /// The `index`-th element in the field's enumeration order
    /// (`0, 1, 2, ...` as integers for `GF(p)`, as words for `GF(2^w)`).
    fn element_at(&self, index: u128) -> u64;
    fn random_element(&self, rng: &mut dyn RngCore) -> u64;
    /// Bytes per serialized element.
    fn byte_width(&self) -> usize;
    fn view(&self) -> FieldView<'_>;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn characteristic_two(&self) -> bool {
        matches!(self.view(), FieldView::Binary(_))
    }

    fn check(&self, a: u64) -> Result<u64, FieldError> {
        if self.is_canonical(a) {
            Ok(a)
        } else {
            Err(FieldError::NonCanonical {
                value: a,
                field: self.describe(),
            })
        }
    }

    /// Square-and-multiply exponentiation; `pow(a, 0) == 1`.
    fn pow(&self, a: u64, mut e: u128) -> u64 {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(|F|-2)`; `None` for zero.
    fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    fn describe(&self) -> String {
        match self.view() {
            FieldView::Binary(f) => format!("gf2w:{}", f.width()),
            FieldView::Prime(f) => format!("gfp:{}", f.modulus()),
        }
    }

    /// Little-endian fixed-width encoding.
    fn encode(&self, a: u64, out: &mut Vec<u8>) {
        out.extend_from_slice(&a.to_le_bytes()[..self.byte_width()]);
    }

    fn decode(&self, bytes: &[u8]) -> Result<u64, FieldError> {
        let width = self.byte_width();
        if bytes.len() != width {
            return Err(FieldError::Encoding {
                expected: width,
                got: bytes.len(),
            });
        }
        let mut buf = [0u8; 8];
        buf[..width].copy_from_slice(bytes);
        self.check(u64::from_le_bytes(buf))
    }
}

/// Runtime-selected field, as named on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldContext {
    Binary(Gf2w),
    Prime(Gfp),
}

impl FieldContext {
    pub fn binary(w: u32) -> Result<Self, FieldError> {
        Gf2w::new(w).map(FieldContext::Binary)
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Gfp::new(p).map(FieldContext::Prime)
    }
}

impl FromStr for FieldContext {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || FieldError::Parse(s.to_string());
        let (family, arg) = s.trim().split_once(':').ok_or_else(err)?;
        match family.to_ascii_lowercase().as_str() {
            "gf2w" => FieldContext::binary(arg.parse().map_err(|_| err())?),
            "gfp" => FieldContext::prime(arg.parse().map_err(|_| err())?),
            _ => Err(err()),
        }
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

macro_rules! dispatch {
    ($self:ident, $f:ident => $e:expr) => {
        match $self {
            FieldContext::Binary($f) => $e,
            FieldContext::Prime($f) => $e,
        }
    };
}

impl Field for FieldContext {
    fn order(&self) -> u128 {
        dispatch!(self, f => f.order())
    }
    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        dispatch!(self, f => f.add(a, b))
    }
    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        dispatch!(self, f => f.sub(a, b))
    }
    fn neg(&self, a: u64) -> u64 {
        dispatch!(self, f => f.neg(a))
    }
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        dispatch!(self, f => f.mul(a, b))
    }
    fn is_canonical(&self, a: u64) -> bool {
        dispatch!(self, f => f.is_canonical(a))
    }
    fn element_at(&self, index: u128) -> u64 {
        dispatch!(self, f => f.element_at(index))
    }
    fn random_element(&self, rng: &mut dyn RngCore) -> u64 {
        dispatch!(self, f => f.random_element(rng))
    }
    fn byte_width(&self) -> usize {
        dispatch!(self, f => f.byte_width())
    }
    fn view(&self) -> FieldView<'_> {
        dispatch!(self, f => f.view())
    }
}

/// Finds an element of multiplicative order exactly `p - 1`, given the
/// complete list of distinct prime factors of `p - 1`.
///
/// Candidates are tried in increasing order `2, 3, ...`; a candidate is
/// accepted when `w^((p-1)/q) != 1` for every prime factor `q`.
pub fn find_primitive_element(field: &Gfp, factors: &[u64]) -> Result<u64, FieldError> {
    let p = field.modulus();
    if p == 2 {
        return Ok(1);
    }
    let group = p - 1;
    let mut rest = group;
    for &q in factors {
        if q < 2 || !is_prime(q) || group % q != 0 {
            return Err(FieldError::BadFactorization(format!(
                "{q} is not a prime factor of {group}"
            )));
        }
        while rest % q == 0 {
            rest /= q;
        }
    }
    if rest != 1 {
        return Err(FieldError::BadFactorization(format!(
            "factors {factors:?} leave cofactor {rest} of {group}"
        )));
    }
    for candidate in 2..p {
        if factors
            .iter()
            .all(|&q| field.pow(candidate, u128::from(group / q)) != 1)
        {
            return Ok(candidate);
        }
    }
    Err(FieldError::BadFactorization(format!(
        "no element of order {group} found"
    )))
}

/// Multiplicative order of a nonzero element, by brute-force iteration.
/// Only intended for tiny fields in tests and oracles.
pub fn multiplicative_order<F: Field>(field: &F, a: u64) -> u128 {
    assert!(a != 0, "zero has no multiplicative order");
    let mut x = a;
    let mut n = 1u128;
    while x != 1 {
        x = field.mul(x, a);
        n += 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let f: FieldContext = "gf2w:64".parse().unwrap();
        assert_eq!(f.to_string(), "gf2w:64");
        let p: FieldContext = "gfp:257".parse().unwrap();
        assert_eq!(p.to_string(), "gfp:257");
        assert!("gfp:256".parse::<FieldContext>().is_err());
        assert!("gf3:5".parse::<FieldContext>().is_err());
        assert!("gf2w:65".parse::<FieldContext>().is_err());
    }

    #[test]
    fn pow_edge_cases() {
        let f = Gfp::new(5).unwrap();
        assert_eq!(f.pow(3, 0), 1);
        assert_eq!(f.pow(3, 1), 3);
        // Fermat: 2^4 = 16 = 1 mod 5, checked against repeated multiplication.
        let mut acc = 1;
        for _ in 0..4 {
            acc = f.mul(acc, 2);
        }
        assert_eq!(acc, 1);
        assert_eq!(f.pow(2, 4), acc);
        let g = Gf2w::new(8).unwrap();
        assert_eq!(g.pow(0x53, 0), 1);
        assert_eq!(g.pow(0x53, 255), 1);
    }

    #[test]
    fn primitive_elements_small_primes() {
        let f5 = Gfp::new(5).unwrap();
        let w = find_primitive_element(&f5, &[2]).unwrap();
        assert!(w == 2 || w == 3);
        assert_eq!(multiplicative_order(&f5, w), 4);

        let f7 = Gfp::new(7).unwrap();
        let w = find_primitive_element(&f7, &[2, 3]).unwrap();
        assert!(w == 3 || w == 5);
        assert_eq!(multiplicative_order(&f7, w), 6);

        let f3 = Gfp::new(3).unwrap();
        assert_eq!(find_primitive_element(&f3, &[2]).unwrap(), 2);
    }

    #[test]
    fn primitive_element_rejects_bad_factorization() {
        let f7 = Gfp::new(7).unwrap();
        assert!(matches!(
            find_primitive_element(&f7, &[2]),
            Err(FieldError::BadFactorization(_))
        ));
        assert!(find_primitive_element(&f7, &[2, 5]).is_err());
        assert!(find_primitive_element(&f7, &[4, 3]).is_err());
    }

    #[test]
    fn encoding_widths() {
        let g = Gf2w::new(12).unwrap();
        let mut out = Vec::new();
        g.encode(0xabc, &mut out);
        assert_eq!(out, vec![0xbc, 0x0a]);
        assert_eq!(g.decode(&out).unwrap(), 0xabc);
        assert!(g.decode(&[0xff, 0xff]).is_err());
        let p = Gfp::new(257).unwrap();
        out.clear();
        p.encode(256, &mut out);
        assert_eq!(out, vec![0x00, 0x01]);
        assert_eq!(p.decode(&out).unwrap(), 256);
        assert_eq!(Gfp::new(251).unwrap().byte_width(), 1);
        assert_eq!(Gfp::new(3).unwrap().byte_width(), 1);
    }
}
