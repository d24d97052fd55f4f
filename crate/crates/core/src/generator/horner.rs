use crate::field::Field;
use crate::poly::Polynomial;

use super::{check_batch, exhausted, GeneratorDescriptor, GeneratorError, KGenerator};

/// Evaluates the seed polynomial at `element_at(0), element_at(1), ...`.
#[derive(Debug, Clone)]
pub struct HornerGenerator<F: Field> {
    poly: Polynomial<F>,
    desc: GeneratorDescriptor,
    emitted: u128,
}

impl<F: Field> HornerGenerator<F> {
    pub fn new(field: F, seed: &[u64], desc: GeneratorDescriptor) -> Result<Self, GeneratorError> {
        let poly = Polynomial::new(field, seed.to_vec())?;
        Ok(HornerGenerator {
            poly,
            desc,
            emitted: 0,
        })
    }

    pub fn polynomial(&self) -> &Polynomial<F> {
        &self.poly
    }
}

impl<F: Field> KGenerator for HornerGenerator<F> {
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
        let x = self.poly.field().element_at(self.emitted);
        self.emitted += 1;
        Ok(self.poly.eval_unchecked(x))
    }

    fn emit_batch(&mut self, out: &mut [u64]) -> Result<(), GeneratorError> {
        check_batch(self, out.len())?;
        let field = self.poly.field().clone();
        for slot in out.iter_mut() {
            *slot = self.poly.eval_unchecked(field.element_at(self.emitted));
            self.emitted += 1;
        }
        Ok(())
    }
}
