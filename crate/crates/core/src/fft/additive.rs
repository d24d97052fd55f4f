use crate::field::{Field, Gf2w};
use crate::poly::Polynomial;

use super::FftError;

/// Tally of field operations performed by a transform.
pub trait OpCounter {
    fn adds(&mut self, n: u64);
    fn muls(&mut self, n: u64);
}

/// Counter that discards everything; compiles away.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoCount;

impl OpCounter for NoCount {
    #[inline(always)]
    fn adds(&mut self, _: u64) {}
    #[inline(always)]
    fn muls(&mut self, _: u64) {}
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCount {
    pub additions: u64,
    pub multiplications: u64,
}

impl OpCounter for OpCount {
    fn adds(&mut self, n: u64) {
        self.additions += n;
    }
    fn muls(&mut self, n: u64) {
        self.multiplications += n;
    }
}

/// Per-depth constants of the recursion. At depth `d` the subproblem has
/// dimension `t = s - d` and basis `b_1..b_t`; everything is rescaled by
/// the last basis element `b_t`, so the rescaled basis is `g_j = b_j / b_t`
/// with `g_t = 1`.
#[derive(Debug, Clone)]
struct Level {
    beta: u64,
    beta_inv: u64,
    /// `beta^i` for `i < 2^t`.
    powers: Vec<u64>,
    /// `span[i] = sum of g_j over the set bits j of i`, for `i < 2^(t-1)`.
    span: Vec<u64>,
}

/// Gao–Mateer additive FFT over `GF(2^w)` on `shift + span(b_1..b_s)`.
///
/// Point index `b` of the output corresponds to `shift + sum_i bit_i(b) b_i`.
/// The coefficient preprocessing (scalings, Taylor expansions at `x^2 + x`,
/// even/odd splits) does not depend on the shift, so it is exposed
/// separately as [`AdditiveFftPlan::prepare`]; each shift then costs only
/// the butterfly passes of [`AdditiveFftPlan::evaluate_prepared`].
#[derive(Debug, Clone)]
pub struct AdditiveFftPlan {
    field: Gf2w,
    s: u32,
    basis: Vec<u64>,
    levels: Vec<Level>,
}

/// Rank of a set of words viewed as vectors over `F_2`.
fn f2_rank(words: &[u64]) -> usize {
    let mut pivots = [0u64; 64];
    let mut rank = 0;
    for &w in words {
        let mut x = w;
        while x != 0 {
            let top = 63 - x.leading_zeros() as usize;
            if pivots[top] == 0 {
                pivots[top] = x;
                rank += 1;
                break;
            }
            x ^= pivots[top];
        }
    }
    rank
}

impl AdditiveFftPlan {
    /// Plan with the monomial basis `b_i = x^(i-1)`, so point index `b`
    /// is the word `shift ^ b`.
    pub fn new(field: Gf2w, s: u32) -> Result<Self, FftError> {
        let basis = (0..s).map(|i| 1u64 << i).collect();
        Self::with_basis(field, s, basis)
    }

    pub fn with_basis(field: Gf2w, s: u32, basis: Vec<u64>) -> Result<Self, FftError> {
        if s > field.width() {
            return Err(FftError::DimensionTooLarge {
                s,
                w: field.width(),
            });
        }
        if basis.len() != s as usize {
            return Err(FftError::BasisLength {
                expected: s as usize,
                got: basis.len(),
            });
        }
        for &b in &basis {
            field.check(b)?;
        }
        if f2_rank(&basis) != basis.len() {
            return Err(FftError::DependentBasis);
        }

        let mut levels = Vec::with_capacity(s as usize);
        let mut current = basis.clone();
        while let Some(&beta) = current.last() {
            let t = current.len();
            let beta_inv = field.inv(beta).expect("basis element is nonzero");
            let mut powers = Vec::with_capacity(1 << t);
            let mut acc = 1;
            for _ in 0..1usize << t {
                powers.push(acc);
                acc = field.mul(acc, beta);
            }
            let gammas: Vec<u64> = current[..t - 1]
                .iter()
                .map(|&b| field.mul(b, beta_inv))
                .collect();
            let mut span = vec![0u64; 1 << (t - 1)];
            for i in 1..span.len() {
                let low = i.trailing_zeros() as usize;
                span[i] = span[i & (i - 1)] ^ gammas[low];
            }
            current = gammas.iter().map(|&g| field.mul(g, g) ^ g).collect();
            levels.push(Level {
                beta,
                beta_inv,
                powers,
                span,
            });
        }
        Ok(AdditiveFftPlan {
            field,
            s,
            basis,
            levels,
        })
    }

    pub fn field(&self) -> &Gf2w {
        &self.field
    }

    pub fn dimension(&self) -> u32 {
        self.s
    }

    pub fn size(&self) -> usize {
        1 << self.s
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    /// The point evaluated at output index `b`.
    pub fn point(&self, shift: u64, b: usize) -> u64 {
        self.basis
            .iter()
            .enumerate()
            .filter(|(i, _)| (b >> i) & 1 == 1)
            .fold(shift, |acc, (_, &beta)| acc ^ beta)
    }

    /// Shift-independent preprocessing of a coefficient vector.
    pub fn prepare(&self, coeffs: &[u64]) -> Result<Vec<u64>, FftError> {
        self.prepare_counted(coeffs, &mut NoCount)
    }

    pub fn prepare_counted<C: OpCounter>(
        &self,
        coeffs: &[u64],
        ops: &mut C,
    ) -> Result<Vec<u64>, FftError> {
        let n = self.size();
        if coeffs.len() > n {
            return Err(FftError::TooLong {
                len: coeffs.len(),
                size: n,
            });
        }
        let mut buf = vec![0u64; n];
        buf[..coeffs.len()].copy_from_slice(coeffs);
        let mut scratch = vec![0u64; n];
        self.prepare_rec(0, &mut buf, &mut scratch, ops);
        Ok(buf)
    }

    fn prepare_rec<C: OpCounter>(
        &self,
        depth: usize,
        f: &mut [u64],
        scratch: &mut [u64],
        ops: &mut C,
    ) {
        if f.len() == 1 {
            return;
        }
        let level = &self.levels[depth];
        if level.beta != 1 {
            for (c, &p) in f.iter_mut().zip(&level.powers).skip(1) {
                *c = self.field.mul(*c, p);
            }
            ops.muls(f.len() as u64 - 1);
        }
        taylor_expand(f, ops);
        let half = f.len() / 2;
        for i in 0..half {
            scratch[i] = f[2 * i];
            scratch[half + i] = f[2 * i + 1];
        }
        f.copy_from_slice(scratch);
        let (lo, hi) = f.split_at_mut(half);
        let (s_lo, s_hi) = scratch.split_at_mut(half);
        self.prepare_rec(depth + 1, lo, s_lo, ops);
        self.prepare_rec(depth + 1, hi, s_hi, ops);
    }

    /// Evaluates a prepared vector at `shift + span(basis)`, in place.
    pub fn evaluate_prepared(&self, data: &mut [u64], shift: u64) {
        self.evaluate_prepared_counted(data, shift, &mut NoCount)
    }

    pub fn evaluate_prepared_counted<C: OpCounter>(
        &self,
        data: &mut [u64],
        shift: u64,
        ops: &mut C,
    ) {
        assert_eq!(
            data.len(),
            self.size(),
            "prepared vector has the wrong length"
        );
        let f = &self.field;
        // Rescaled shift at each depth: s'_d = shift_d / b_t and
        // shift_{d+1} = s'_d^2 + s'_d.
        let mut shifts = Vec::with_capacity(self.levels.len());
        let mut current = shift;
        for level in &self.levels {
            let scaled = f.mul(current, level.beta_inv);
            shifts.push(scaled);
            current = f.mul(scaled, scaled) ^ scaled;
            ops.muls(2);
            ops.adds(1);
        }
        for (level, &s) in self.levels.iter().zip(&shifts).rev() {
            let half = level.span.len();
            for block in data.chunks_exact_mut(2 * half) {
                let (u, v) = block.split_at_mut(half);
                for i in 0..half {
                    let x = s ^ level.span[i];
                    let lo = u[i] ^ f.mul(x, v[i]);
                    u[i] = lo;
                    v[i] ^= lo;
                }
            }
            ops.muls(data.len() as u64 / 2);
            ops.adds(data.len() as u64 / 2 * 3);
        }
    }

    /// Evaluates `h` at every point of `shift + span(basis)`.
    pub fn evaluate(&self, h: &Polynomial<Gf2w>, shift: u64) -> Result<Vec<u64>, FftError> {
        self.evaluate_counted(h, shift, &mut NoCount)
    }

    pub fn evaluate_counted<C: OpCounter>(
        &self,
        h: &Polynomial<Gf2w>,
        shift: u64,
        ops: &mut C,
    ) -> Result<Vec<u64>, FftError> {
        self.field.check(shift)?;
        let mut data = self.prepare_counted(h.coeffs(), ops)?;
        self.evaluate_prepared_counted(&mut data, shift, ops);
        Ok(data)
    }
}

/// Rewrites `f` (length `2^t`) in place so that
/// `f(x) = sum_i (f[2i] + f[2i+1] x) (x^2 + x)^i`.
fn taylor_expand<C: OpCounter>(f: &mut [u64], ops: &mut C) {
    let n = f.len();
    if n <= 2 {
        return;
    }
    let q = n / 4;
    // f = A + x^(2q) (B + x^q C) = [A + x^q (B + C)] + (x^2 + x)^q [(B + C) + x^q C]
    for i in 0..q {
        f[2 * q + i] ^= f[3 * q + i];
        f[q + i] ^= f[2 * q + i];
    }
    ops.adds(2 * q as u64);
    let (lo, hi) = f.split_at_mut(n / 2);
    taylor_expand(lo, ops);
    taylor_expand(hi, ops);
}

/// Shorthand for a one-off transform with a fresh monomial-basis plan.
pub fn additive_fft(h: &Polynomial<Gf2w>, s: u32, shift: u64) -> Result<Vec<u64>, FftError> {
    AdditiveFftPlan::new(h.field().clone(), s)?.evaluate(h, shift)
}
