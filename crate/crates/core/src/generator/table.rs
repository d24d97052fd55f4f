use super::{check_batch, exhausted, GeneratorDescriptor, GeneratorError, KGenerator};

/// Emits its seed in order.
#[derive(Debug, Clone)]
pub struct TableGenerator {
    values: Vec<u64>,
    desc: GeneratorDescriptor,
    pos: usize,
}

impl TableGenerator {
    pub fn new(seed: &[u64], desc: GeneratorDescriptor) -> Self {
        TableGenerator {
            values: seed.to_vec(),
            desc,
            pos: 0,
        }
    }
}

impl KGenerator for TableGenerator {
    fn descriptor(&self) -> &GeneratorDescriptor {
        &self.desc
    }

    fn emitted(&self) -> u128 {
        self.pos as u128
    }

    fn emit(&mut self) -> Result<u64, GeneratorError> {
        let v = *self
            .values
            .get(self.pos)
            .ok_or_else(|| exhausted(&self.desc))?;
        self.pos += 1;
        Ok(v)
    }

    fn emit_batch(&mut self, out: &mut [u64]) -> Result<(), GeneratorError> {
        check_batch(self, out.len())?;
        out.copy_from_slice(&self.values[self.pos..self.pos + out.len()]);
        self.pos += out.len();
        Ok(())
    }
}
