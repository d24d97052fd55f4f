use rand::{Rng, RngCore};

use super::{is_prime, Field, FieldError, FieldView};

/// `GF(p)` for a prime `2 <= p < 2^63`.
///
/// Products are reduced with Barrett's method: for `s = bitlen(p)` the
/// constant `mu = floor(4^s / p)` fits in a word, and the quotient estimate
/// `((x >> (s-1)) * mu) >> (s+1)` is short by at most two. No division
/// instruction is executed after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gfp {
    p: u64,
    bits: u32,
    mu: u64,
}

impl Gfp {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let bits = 64 - p.leading_zeros();
        let mu = ((1u128 << (2 * bits)) / u128::from(p)) as u64;
        Ok(Gfp { p, bits, mu })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces any `x < p^2` into `[0, p)`.
    #[inline]
    pub fn reduce(&self, x: u128) -> u64 {
        let q1 = (x >> (self.bits - 1)) as u64;
        let q = (u128::from(q1) * u128::from(self.mu)) >> (self.bits + 1);
        let mut r = (x - q * u128::from(self.p)) as u64;
        if r >= self.p {
            r -= self.p;
        }
        if r >= self.p {
            r -= self.p;
        }
        r
    }
}

impl Field for Gfp {
    fn order(&self) -> u128 {
        u128::from(self.p)
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(u128::from(a) * u128::from(b))
    }

    fn is_canonical(&self, a: u64) -> bool {
        a < self.p
    }

    fn element_at(&self, index: u128) -> u64 {
        debug_assert!(index < self.order());
        index as u64
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn byte_width(&self) -> usize {
        (64 - (self.p - 1).leading_zeros()).div_ceil(8).max(1) as usize
    }

    fn view(&self) -> FieldView<'_> {
        FieldView::Prime(self)
    }
}
