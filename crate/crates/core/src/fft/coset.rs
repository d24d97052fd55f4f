use crate::field::{factorize, find_primitive_element, Field, Gfp};
use crate::poly::Polynomial;

use super::FftError;

/// Radix-2 evaluation over the cosets `S_j = { w^j w_k^r : r < k }` of the
/// order-`k` subgroup of `GF(p)*`, where `w` is primitive and
/// `w_k = w^((p-1)/k)`.
///
/// Evaluating `h` on `S_j` is the length-`k` DFT of the twisted
/// coefficients `a_i w^(j i)`. The cosets `j = 0 .. (p-1)/k` partition
/// `GF(p)*`. The plan carries a cursor `(j, w^j)` that advances one coset at
/// a time.
#[derive(Debug, Clone)]
pub struct CosetDftPlan {
    field: Gfp,
    k: usize,
    omega: u64,
    omega_k: u64,
    /// `w_k^i` for `i < k/2`.
    twiddles: Vec<u64>,
    cosets: u64,
    j: u64,
    twist: u64,
}

impl CosetDftPlan {
    pub fn new(field: Gfp, k: usize) -> Result<Self, FftError> {
        let p = field.modulus();
        let omega = find_primitive_element(&field, &factorize(p - 1))?;
        Self::with_generator(field, k, omega)
    }

    /// Plan using a caller-chosen primitive element `omega`.
    pub fn with_generator(field: Gfp, k: usize, omega: u64) -> Result<Self, FftError> {
        if !k.is_power_of_two() {
            return Err(FftError::NotPowerOfTwo(k));
        }
        let group = field.modulus() - 1;
        if group % k as u64 != 0 {
            return Err(FftError::NotDivisor { k, group });
        }
        field.check(omega)?;
        let omega_k = field.pow(omega, u128::from(group / k as u64));
        let mut twiddles = Vec::with_capacity(k / 2);
        let mut acc = 1;
        for _ in 0..k / 2 {
            twiddles.push(acc);
            acc = field.mul(acc, omega_k);
        }
        Ok(CosetDftPlan {
            field,
            k,
            omega,
            omega_k,
            twiddles,
            cosets: group / k as u64,
            j: 0,
            twist: 1,
        })
    }

    pub fn field(&self) -> &Gfp {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn omega(&self) -> u64 {
        self.omega
    }

    pub fn omega_k(&self) -> u64 {
        self.omega_k
    }

    /// Number of cosets `(p-1)/k`.
    pub fn cosets(&self) -> u64 {
        self.cosets
    }

    pub fn coset_index(&self) -> u64 {
        self.j
    }

    /// Current twist `w^j`.
    pub fn twist(&self) -> u64 {
        self.twist
    }

    /// Moves to the next coset with one multiplication.
    pub fn advance_coset(&mut self) -> Result<(), FftError> {
        if self.j + 1 >= self.cosets {
            return Err(FftError::PeriodExhausted);
        }
        self.j += 1;
        self.twist = self.field.mul(self.twist, self.omega);
        Ok(())
    }

    /// Returns to coset 0.
    pub fn reset(&mut self) {
        self.j = 0;
        self.twist = 1;
    }

    /// The point `w^j w_k^r`.
    pub fn point(&self, j: u64, r: usize) -> u64 {
        let f = &self.field;
        f.mul(
            f.pow(self.omega, u128::from(j)),
            f.pow(self.omega_k, r as u128),
        )
    }

    /// `a_i w^(j i)` for coset `j`.
    pub fn twist_coefficients(
        &self,
        h: &Polynomial<Gfp>,
        j: u64,
    ) -> Result<Polynomial<Gfp>, FftError> {
        if j >= self.cosets {
            return Err(FftError::BadCoset {
                j,
                cosets: self.cosets,
            });
        }
        if h.len() != self.k {
            return Err(FftError::TooLong {
                len: h.len(),
                size: self.k,
            });
        }
        let base = if j == self.j {
            self.twist
        } else {
            self.field.pow(self.omega, u128::from(j))
        };
        let mut out = h.coeffs().to_vec();
        self.twist_in_place(&mut out, base);
        Ok(Polynomial::new(self.field.clone(), out).expect("canonical"))
    }

    /// Multiplies `coeffs[i]` by `base^i` with one running power.
    pub fn twist_in_place(&self, coeffs: &mut [u64], base: u64) {
        if base == 1 {
            return;
        }
        let f = &self.field;
        let mut pw = base;
        for c in coeffs.iter_mut().skip(1) {
            *c = f.mul(*c, pw);
            pw = f.mul(pw, base);
        }
    }

    /// In-place length-`k` DFT: `out[r] = sum_i x_i w_k^(r i)`.
    pub fn dft_in_place(&self, x: &mut [u64]) {
        let n = self.k;
        assert_eq!(x.len(), n, "input length must equal the transform length");
        if n == 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let r = i.reverse_bits() >> (usize::BITS - bits);
            if i < r {
                x.swap(i, r);
            }
        }
        let f = &self.field;
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let step = n / len;
            for block in x.chunks_exact_mut(len) {
                let (lo, hi) = block.split_at_mut(half);
                for i in 0..half {
                    let t = f.mul(hi[i], self.twiddles[i * step]);
                    let u = lo[i];
                    lo[i] = f.add(u, t);
                    hi[i] = f.sub(u, t);
                }
            }
            len *= 2;
        }
    }

    /// `h` evaluated on the current coset, in the order `r = 0 .. k`.
    pub fn evaluate_current(&self, h: &Polynomial<Gfp>) -> Result<Vec<u64>, FftError> {
        let mut t = self.twist_coefficients(h, self.j)?.coeffs().to_vec();
        self.dft_in_place(&mut t);
        Ok(t)
    }
}

/// DFT of already-twisted coefficients.
pub fn coset_dft(plan: &CosetDftPlan, twisted: &Polynomial<Gfp>) -> Result<Vec<u64>, FftError> {
    if twisted.len() != plan.len() {
        return Err(FftError::TooLong {
            len: twisted.len(),
            size: plan.len(),
        });
    }
    let mut x = twisted.coeffs().to_vec();
    plan.dft_in_place(&mut x);
    Ok(x)
}

/// `O(k^2)` reference DFT with root `root`.
pub fn direct_dft(field: &Gfp, x: &[u64], root: u64) -> Vec<u64> {
    let n = x.len();
    (0..n)
        .map(|r| {
            let wr = field.pow(root, r as u128);
            let mut acc = 0;
            let mut pw = 1;
            for &xi in x {
                acc = field.add(acc, field.mul(xi, pw));
                pw = field.mul(pw, wr);
            }
            acc
        })
        .collect()
}
