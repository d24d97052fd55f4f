use rand::RngCore;

use super::clmul::{self, clmul_portable};
use super::{Field, FieldError, FieldView};

/// `GF(2^w)` for `1 <= w <= 64`, modulo a sparse irreducible polynomial.
///
/// The reduction polynomial `g = X^w + g*` has weight at most 5. Products
/// are reduced by repeatedly folding the high half `H` back as `H * g*`,
/// which for sparse `g*` is a handful of shifts and XORs; the fold count
/// is fixed per field at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2w {
    width: u32,
    /// Exponents of the set bits of `g`, descending, starting with `w`.
    poly: Vec<u32>,
    /// Exponents of `g* = g - X^w`.
    tail: Vec<u32>,
    /// `g*` as a bit mask.
    tail_mask: u64,
    folds: u32,
    mask: u64,
    hardware: bool,
}

/// Built-in low-weight irreducible polynomials (exponent lists).
pub fn builtin_polynomial(w: u32) -> Option<&'static [u32]> {
    Some(match w {
        1 => &[1, 0],
        2 => &[2, 1, 0],
        3 => &[3, 1, 0],
        4 => &[4, 1, 0],
        8 => &[8, 4, 3, 1, 0],
        16 => &[16, 5, 3, 2, 0],
        32 => &[32, 7, 3, 2, 0],
        64 => &[64, 4, 3, 1, 0],
        _ => return None,
    })
}

fn poly_word(exps: &[u32]) -> u128 {
    exps.iter().fold(0u128, |acc, &e| acc | (1u128 << e))
}

fn degree(p: u128) -> i32 {
    127 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `b` in `F_2[X]`, by long division.
pub(crate) fn poly_rem(mut a: u128, b: u128) -> u128 {
    assert!(b != 0);
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

fn poly_mulmod(a: u128, b: u128, g: u128) -> u128 {
    // Operands have degree < deg(g) <= 64, so they fit in a word.
    poly_rem(clmul_portable(a as u64, b as u64), g)
}

/// Irreducibility by trial division with every polynomial of degree
/// `1..=deg(g)/2`. Exponential in the degree; meant for `deg(g) <= 16`.
pub fn is_irreducible_bruteforce(exps: &[u32]) -> bool {
    let g = poly_word(exps);
    let n = degree(g);
    if n < 1 {
        return false;
    }
    for d in 1..=(n / 2) {
        for low in 0u128..(1u128 << d) {
            let divisor = (1u128 << d) | low;
            if poly_rem(g, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// Rabin's irreducibility test: `g` of degree `n` is irreducible iff
/// `X^(2^n) = X mod g` and `gcd(X^(2^(n/q)) - X, g) = 1` for every prime
/// `q | n`.
pub fn is_irreducible_rabin(exps: &[u32]) -> bool {
    let g = poly_word(exps);
    let n = degree(g);
    if n < 1 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = poly_rem(2, g);
    // frob[i] = X^(2^i) mod g
    let mut frob = Vec::with_capacity(n as usize + 1);
    frob.push(x);
    for i in 0..n as usize {
        let f = frob[i];
        frob.push(poly_mulmod(f, f, g));
    }
    if frob[n as usize] != x {
        return false;
    }
    let n = n as u64;
    super::factorize(n).into_iter().all(|q| {
        let h = frob[(n / q) as usize] ^ x;
        poly_gcd(g, h) == 1
    })
}

fn search_polynomial(w: u32) -> Option<Vec<u32>> {
    let test = |exps: &[u32]| {
        if w <= 16 {
            is_irreducible_bruteforce(exps)
        } else {
            is_irreducible_rabin(exps)
        }
    };
    for a in 1..w {
        let exps = [w, a, 0];
        if test(&exps) {
            return Some(exps.to_vec());
        }
    }
    for a in 3..w {
        for b in 2..a {
            for c in 1..b {
                let exps = [w, a, b, c, 0];
                if test(&exps) {
                    return Some(exps.to_vec());
                }
            }
        }
    }
    None
}

impl Gf2w {
    /// Field of width `w` using the built-in polynomial for that width, or
    /// the lowest-weight irreducible found by search.
    pub fn new(w: u32) -> Result<Self, FieldError> {
        if !(1..=64).contains(&w) {
            return Err(FieldError::BadWidth(w));
        }
        match builtin_polynomial(w) {
            Some(exps) => {
                // Small widths are cheap enough to re-verify every time.
                if w <= 16 && !is_irreducible_bruteforce(exps) {
                    return Err(FieldError::BadPolynomial(format!("{exps:?} is reducible")));
                }
                Ok(Self::build(w, exps.to_vec()))
            }
            None => {
                let exps = search_polynomial(w).ok_or_else(|| {
                    FieldError::BadPolynomial(format!("no irreducible of weight <= 5 for w = {w}"))
                })?;
                Ok(Self::build(w, exps))
            }
        }
    }

    /// Field with an explicit reduction polynomial given as the exponents of
    /// its set bits.
    pub fn with_polynomial(w: u32, exps: &[u32]) -> Result<Self, FieldError> {
        if !(1..=64).contains(&w) {
            return Err(FieldError::BadWidth(w));
        }
        let mut exps = exps.to_vec();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        exps.dedup();
        if exps.first() != Some(&w) || exps.last() != Some(&0) {
            return Err(FieldError::BadPolynomial(format!(
                "{exps:?} must have degree {w} and constant term 1"
            )));
        }
        if exps.len() > 5 {
            return Err(FieldError::BadPolynomial(format!(
                "{exps:?} has weight > 5"
            )));
        }
        let irreducible = if w <= 16 {
            is_irreducible_bruteforce(&exps)
        } else {
            is_irreducible_rabin(&exps)
        };
        if !irreducible {
            return Err(FieldError::BadPolynomial(format!("{exps:?} is reducible")));
        }
        Ok(Self::build(w, exps))
    }

    fn build(w: u32, poly: Vec<u32>) -> Self {
        let tail: Vec<u32> = poly[1..].to_vec();
        let e_max = tail[0];
        // Bit length of the unreduced input shrinks from 2w to w, by
        // (w - e_max) bits per fold.
        let mut len = 2 * w;
        let mut folds = 0;
        while len > w {
            len = w.max(len - w + e_max);
            folds += 1;
        }
        Gf2w {
            width: w,
            poly,
            tail_mask: tail.iter().fold(0, |acc, &e| acc | 1 << e),
            tail,
            folds,
            mask: if w == 64 { u64::MAX } else { (1u64 << w) - 1 },
            hardware: clmul::hardware_available(),
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn polynomial(&self) -> &[u32] {
        &self.poly
    }

    /// Number of shift-XOR folds used by [`Gf2w::reduce`].
    pub fn folds(&self) -> u32 {
        self.folds
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Same field, forced onto the portable carryless multiply.
    pub fn portable(&self) -> Self {
        Gf2w {
            hardware: false,
            ..self.clone()
        }
    }

    pub fn uses_hardware(&self) -> bool {
        self.hardware
    }

    #[inline]
    pub fn carryless_mul(&self, a: u64, b: u64) -> u128 {
        #[cfg(target_arch = "x86_64")]
        if self.hardware {
            // SAFETY: `hardware` is only set when the CPU reports pclmulqdq.
            return unsafe { clmul::x86::clmul(a, b) };
        }
        clmul_portable(a, b)
    }

    /// Reduces a product of two canonical elements modulo `g`.
    ///
    /// Each fold replaces `z = H X^w + L` with `L + H g*`; for `2 deg(g*) <= w`
    /// two folds evaluate exactly `L^w(z) + L^w(L^w(g) M^w(M^w(z) g))`.
    #[inline]
    pub fn reduce(&self, z: u128) -> u64 {
        let mask = u128::from(self.mask);
        let mut z = z;
        for _ in 0..self.folds {
            let high = z >> self.width;
            z &= mask;
            for &e in &self.tail {
                z ^= high << e;
            }
        }
        z as u64
    }
}

impl Field for Gf2w {
    fn order(&self) -> u128 {
        1u128 << self.width
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    #[inline]
    fn neg(&self, a: u64) -> u64 {
        a
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        #[cfg(target_arch = "x86_64")]
        if self.hardware {
            // SAFETY: `hardware` is only set when the CPU reports pclmulqdq.
            return unsafe { clmul::x86::mul_reduce(a, b, self.tail_mask, self.width, self.folds) };
        }
        self.reduce(clmul_portable(a, b))
    }

    fn is_canonical(&self, a: u64) -> bool {
        a & !self.mask == 0
    }

    fn element_at(&self, index: u128) -> u64 {
        debug_assert!(index < self.order());
        index as u64
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> u64 {
        rng.next_u64() & self.mask
    }

    fn byte_width(&self) -> usize {
        self.width.div_ceil(8) as usize
    }

    fn view(&self) -> FieldView<'_> {
        FieldView::Binary(self)
    }
}
