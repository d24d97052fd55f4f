use crate::fft::{AdditiveFftPlan, CosetDftPlan};
use crate::field::{Gf2w, Gfp};

use super::{check_batch, exhausted, GeneratorDescriptor, GeneratorError, KGenerator};

/// Binary reflected Gray code.
#[inline]
pub fn gray_code(j: u64) -> u64 {
    j ^ (j >> 1)
}

/// Batch `j` covers the coset `(gray(j) << s) + span(1, x, ..., x^(s-1))`;
/// together the batches partition `GF(2^w)`.
#[derive(Debug, Clone)]
pub struct BinaryBatchGenerator {
    plan: AdditiveFftPlan,
    prepared: Vec<u64>,
    buf: Vec<u64>,
    pos: usize,
    batch: u64,
    desc: GeneratorDescriptor,
    emitted: u128,
}

impl BinaryBatchGenerator {
    pub fn new(
        field: Gf2w,
        seed: &[u64],
        desc: GeneratorDescriptor,
    ) -> Result<Self, GeneratorError> {
        let s = seed.len().next_power_of_two().trailing_zeros();
        let plan = AdditiveFftPlan::new(field, s)?;
        let prepared = plan.prepare(seed)?;
        let mut buf = prepared.clone();
        plan.evaluate_prepared(&mut buf, 0);
        Ok(BinaryBatchGenerator {
            plan,
            prepared,
            buf,
            pos: 0,
            batch: 0,
            desc,
            emitted: 0,
        })
    }

    /// The point whose value is emitted at stream position `n`.
    pub fn point_at(&self, n: u128) -> u64 {
        let s = self.plan.dimension();
        let size = self.plan.size() as u128;
        let shift = if s >= 64 {
            0
        } else {
            gray_code((n / size) as u64) << s
        };
        self.plan.point(shift, (n % size) as usize)
    }

    fn next_batch(&mut self) {
        self.batch += 1;
        let shift = gray_code(self.batch) << self.plan.dimension();
        self.buf.copy_from_slice(&self.prepared);
        self.plan.evaluate_prepared(&mut self.buf, shift);
        self.pos = 0;
    }
}

impl KGenerator for BinaryBatchGenerator {
    fn descriptor(&self) -> &GeneratorDescriptor {
        &self.desc
    }

    fn emitted(&self) -> u128 {
        self.emitted
    }

    fn emit(&mut self) -> Result<u64, GeneratorError> {
        if self.emitted == self.desc.period {
            return Err(exhausted(&self.desc));
        }
        if self.pos == self.buf.len() {
            self.next_batch();
        }
        let v = self.buf[self.pos];
        self.pos += 1;
        self.emitted += 1;
        Ok(v)
    }

    fn emit_batch(&mut self, out: &mut [u64]) -> Result<(), GeneratorError> {
        check_batch(self, out.len())?;
        let mut done = 0;
        while done < out.len() {
            if self.pos == self.buf.len() {
                self.next_batch();
            }
            let take = (self.buf.len() - self.pos).min(out.len() - done);
            out[done..done + take].copy_from_slice(&self.buf[self.pos..self.pos + take]);
            self.pos += take;
            done += take;
        }
        self.emitted += out.len() as u128;
        Ok(())
    }
}

/// Batch `j` covers the coset `w^j <w_k>`; together the batches partition
/// `GF(p)*`.
#[derive(Debug, Clone)]
pub struct PrimeBatchGenerator {
    plan: CosetDftPlan,
    coeffs: Vec<u64>,
    buf: Vec<u64>,
    pos: usize,
    desc: GeneratorDescriptor,
    emitted: u128,
}

impl PrimeBatchGenerator {
    pub fn new(
        field: Gfp,
        seed: &[u64],
        desc: GeneratorDescriptor,
    ) -> Result<Self, GeneratorError> {
        let plan = CosetDftPlan::new(field, seed.len())?;
        let mut buf = seed.to_vec();
        plan.dft_in_place(&mut buf);
        Ok(PrimeBatchGenerator {
            plan,
            coeffs: seed.to_vec(),
            buf,
            pos: 0,
            desc,
            emitted: 0,
        })
    }

    /// The point whose value is emitted at stream position `n`.
    pub fn point_at(&self, n: u128) -> u64 {
        let k = self.plan.len() as u128;
        self.plan.point((n / k) as u64, (n % k) as usize)
    }

    fn next_batch(&mut self) -> Result<(), GeneratorError> {
        self.plan.advance_coset()?;
        self.buf.copy_from_slice(&self.coeffs);
        self.plan.twist_in_place(&mut self.buf, self.plan.twist());
        self.plan.dft_in_place(&mut self.buf);
        self.pos = 0;
        Ok(())
    }
}

impl KGenerator for PrimeBatchGenerator {
    fn descriptor(&self) -> &GeneratorDescriptor {
        &self.desc
    }

    fn emitted(&self) -> u128 {
        self.emitted
    }

    fn emit(&mut self) -> Result<u64, GeneratorError> {
        if self.emitted == self.desc.period {
            return Err(exhausted(&self.desc));
        }
        if self.pos == self.buf.len() {
            self.next_batch()?;
        }
        let v = self.buf[self.pos];
        self.pos += 1;
        self.emitted += 1;
        Ok(v)
    }

    fn emit_batch(&mut self, out: &mut [u64]) -> Result<(), GeneratorError> {
        check_batch(self, out.len())?;
        let mut done = 0;
        while done < out.len() {
            if self.pos == self.buf.len() {
                self.next_batch()?;
            }
            let take = (self.buf.len() - self.pos).min(out.len() - done);
            out[done..done + take].copy_from_slice(&self.buf[self.pos..self.pos + take]);
            self.pos += take;
            done += take;
        }
        self.emitted += out.len() as u128;
        Ok(())
    }
}
