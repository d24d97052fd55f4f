use crate::expander::NeighborSource;
use crate::field::Field;

use super::{
    check_batch, exhausted, EmitStats, GeneratorDescriptor, GeneratorError, GraphSpec, KGenerator,
};

const CHUNK: usize = 64;

/// Output `i` of a block is the field sum of `table[y]` over the neighbors
/// `y` of left vertex `i`. The table holds the next `m` inner values and is
/// refilled at every block boundary.
pub struct ExpanderGenerator<F: Field, G: NeighborSource> {
    field: F,
    graph: G,
    inner: Box<dyn KGenerator>,
    table: Vec<u64>,
    neighbors: Vec<u32>,
    counts: Vec<usize>,
    cursor: usize,
    left: usize,
    desc: GeneratorDescriptor,
    emitted: u128,
    stats: EmitStats,
}

impl<F: Field, G: NeighborSource> ExpanderGenerator<F, G> {
    pub fn new(
        field: F,
        graph: G,
        mut inner: Box<dyn KGenerator>,
        desc: GeneratorDescriptor,
    ) -> Result<Self, GeneratorError> {
        let mut table = vec![0; graph.right()];
        inner.emit_batch(&mut table)?;
        let left = graph.left();
        let d = graph.degree();
        Ok(ExpanderGenerator {
            field,
            graph,
            inner,
            stats: EmitStats {
                table_reads: 0,
                inner_values: table.len() as u64,
            },
            table,
            neighbors: vec![0; d * CHUNK],
            counts: vec![0; CHUNK],
            cursor: 0,
            left,
            desc,
            emitted: 0,
        })
    }

    fn refill(&mut self) -> Result<(), GeneratorError> {
        self.inner.emit_batch(&mut self.table)?;
        self.stats.inner_values += self.table.len() as u64;
        self.cursor = 0;
        Ok(())
    }

    #[inline]
    fn value(&mut self, i: usize) -> u64 {
        let n = self.graph.neighbors_into(i, &mut self.neighbors);
        self.stats.table_reads += n as u64;
        self.neighbors[..n]
            .iter()
            .fold(self.field.zero(), |acc, &y| {
                self.field.add(acc, self.table[y as usize])
            })
    }
}

impl<F: Field, G: NeighborSource> KGenerator for ExpanderGenerator<F, G> {
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
        if self.cursor == self.left {
            self.refill()?;
        }
        let v = self.value(self.cursor);
        self.cursor += 1;
        self.emitted += 1;
        Ok(v)
    }

    /// Rows are handled in chunks: all neighbor lists of a chunk first, then
    /// the table reads, so that independent reads overlap.
    fn emit_batch(&mut self, out: &mut [u64]) -> Result<(), GeneratorError> {
        check_batch(self, out.len())?;
        let d = self.graph.degree();
        let mut done = 0;
        while done < out.len() {
            if self.cursor == self.left {
                self.refill()?;
            }
            let len = (out.len() - done).min(self.left - self.cursor).min(CHUNK);
            for (r, count) in self.counts[..len].iter_mut().enumerate() {
                let row = &mut self.neighbors[r * d..(r + 1) * d];
                *count = self.graph.neighbors_into(self.cursor + r, row);
            }
            for (r, slot) in out[done..done + len].iter_mut().enumerate() {
                let row = &self.neighbors[r * d..r * d + self.counts[r]];
                *slot = row.iter().fold(self.field.zero(), |acc, &y| {
                    self.field.add(acc, self.table[y as usize])
                });
            }
            self.stats.table_reads += self.counts[..len].iter().sum::<usize>() as u64;
            self.cursor += len;
            done += len;
        }
        self.emitted += out.len() as u128;
        Ok(())
    }

    fn stats(&self) -> EmitStats {
        self.stats
    }
}

/// Expander levels applied in sequence: the base fills a table of `m`
/// values, level `i` maps a table of `c^(i-1) m` values to `c^i m` values,
/// and the last table is emitted in order.
pub struct CascadeGenerator<F: Field> {
    field: F,
    levels: Vec<GraphSpec>,
    base: Box<dyn KGenerator>,
    tables: Vec<Vec<u64>>,
    neighbors: Vec<u32>,
    cursor: usize,
    desc: GeneratorDescriptor,
    emitted: u128,
    stats: EmitStats,
}

impl<F: Field> CascadeGenerator<F> {
    /// `block` is the base block size used when there are no levels.
    pub fn new(
        field: F,
        levels: Vec<GraphSpec>,
        base: Box<dyn KGenerator>,
        block: usize,
        desc: GeneratorDescriptor,
    ) -> Result<Self, GeneratorError> {
        let m = levels.first().map_or(block, NeighborSource::right);
        let mut tables = vec![vec![0; m]];
        tables.extend(levels.iter().map(|g| vec![0; g.left()]));
        let d = levels.iter().map(NeighborSource::degree).max().unwrap_or(1);
        let mut g = CascadeGenerator {
            field,
            levels,
            base,
            tables,
            neighbors: vec![0; d],
            cursor: 0,
            desc,
            emitted: 0,
            stats: EmitStats::default(),
        };
        g.refill()?;
        Ok(g)
    }

    fn refill(&mut self) -> Result<(), GeneratorError> {
        self.base.emit_batch(&mut self.tables[0])?;
        self.stats.inner_values += self.tables[0].len() as u64;
        for (i, graph) in self.levels.iter().enumerate() {
            let (prev, next) = self.tables.split_at_mut(i + 1);
            let src = &prev[i];
            for (x, slot) in next[0].iter_mut().enumerate() {
                let n = graph.neighbors_into(x, &mut self.neighbors);
                self.stats.table_reads += n as u64;
                *slot = self.neighbors[..n]
                    .iter()
                    .fold(self.field.zero(), |acc, &y| {
                        self.field.add(acc, src[y as usize])
                    });
            }
        }
        self.cursor = 0;
        Ok(())
    }

    fn output(&self) -> &[u64] {
        self.tables.last().expect("base table")
    }
}

impl<F: Field> KGenerator for CascadeGenerator<F> {
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
        if self.cursor == self.output().len() {
            self.refill()?;
        }
        let v = self.output()[self.cursor];
        self.cursor += 1;
        self.emitted += 1;
        Ok(v)
    }

    fn emit_batch(&mut self, out: &mut [u64]) -> Result<(), GeneratorError> {
        check_batch(self, out.len())?;
        let mut done = 0;
        while done < out.len() {
            if self.cursor == self.output().len() {
                self.refill()?;
            }
            let avail = self.output().len() - self.cursor;
            let take = avail.min(out.len() - done);
            out[done..done + take].copy_from_slice(&self.output()[self.cursor..self.cursor + take]);
            self.cursor += take;
            done += take;
        }
        self.emitted += out.len() as u128;
        Ok(())
    }

    fn stats(&self) -> EmitStats {
        self.stats
    }
}
