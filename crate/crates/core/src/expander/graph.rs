use std::io::{self, Read, Write};

use rand::RngCore;

use super::ExpanderError;

/// Padding value for unused adjacency slots.
pub const PAD: u32 = u32::MAX;

/// Read access to the adjacency lists of a `(c, m, d)` bipartite graph.
pub trait NeighborSource: Send + Sync {
    fn imbalance(&self) -> usize;
    fn right(&self) -> usize;
    fn degree(&self) -> usize;

    fn left(&self) -> usize {
        self.imbalance() * self.right()
    }

    /// Writes the sorted, duplicate-free neighbors of left vertex `i` into
    /// `out[..n]` and returns `n`. `out` must hold at least `degree()` slots.
    fn neighbors_into(&self, i: usize, out: &mut [u32]) -> usize;
}

impl<T: NeighborSource + ?Sized> NeighborSource for std::sync::Arc<T> {
    fn imbalance(&self) -> usize {
        (**self).imbalance()
    }
    fn right(&self) -> usize {
        (**self).right()
    }
    fn degree(&self) -> usize {
        (**self).degree()
    }
    #[inline]
    fn neighbors_into(&self, i: usize, out: &mut [u32]) -> usize {
        (**self).neighbors_into(i, out)
    }
}

fn check_sizes(c: usize, m: usize, d: usize) -> Result<(), ExpanderError> {
    if c == 0 || m == 0 || d == 0 {
        return Err(ExpanderError::ZeroSize);
    }
    if d > usize::from(u16::MAX) {
        return Err(ExpanderError::Precondition(format!(
            "degree {d} is too large"
        )));
    }
    if m > PAD as usize || c.checked_mul(m).is_none() {
        return Err(ExpanderError::Precondition(format!(
            "right side {m} with imbalance {c} is too large"
        )));
    }
    Ok(())
}

/// Sorts `row` and moves distinct values to the front; returns their count.
#[inline]
fn sort_dedup(row: &mut [u32]) -> usize {
    // Insertion sort: rows are short.
    for i in 1..row.len() {
        let mut j = i;
        while j > 0 && row[j - 1] > row[j] {
            row.swap(j - 1, j);
            j -= 1;
        }
    }
    let mut n = 0;
    for i in 0..row.len() {
        if n == 0 || row[n - 1] != row[i] {
            row[n] = row[i];
            n += 1;
        }
    }
    n
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A random graph whose rows are recomputed on demand from a key.
///
/// Slot `j` of row `i` is a uniform draw from `[m]` derived from a
/// counter-based hash of `(key, i, j)`, so any row can be produced
/// independently and in any order. Memory use is constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashedGraph {
    c: usize,
    m: usize,
    d: usize,
    key: u64,
}

impl HashedGraph {
    pub fn new(c: usize, m: usize, d: usize, key: u64) -> Result<Self, ExpanderError> {
        check_sizes(c, m, d)?;
        Ok(HashedGraph { c, m, d, key })
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    /// Uniform draw from `[m]` for slot `n = i d + j`, by multiply-high with
    /// rejection of the biased low range.
    #[inline]
    fn draw(&self, n: u64) -> u32 {
        let m = self.m as u64;
        if m.is_power_of_two() {
            return (mix64(self.key.wrapping_add(n.wrapping_mul(GOLDEN))) & (m - 1)) as u32;
        }
        let threshold = m.wrapping_neg() % m;
        let mut x = mix64(self.key.wrapping_add(n.wrapping_mul(GOLDEN)));
        loop {
            let wide = u128::from(x) * u128::from(m);
            if (wide as u64) >= threshold {
                return (wide >> 64) as u32;
            }
            x = mix64(x.wrapping_add(GOLDEN));
        }
    }

    /// Stores every row explicitly.
    pub fn materialize(&self) -> BipartiteGraph {
        let mut rows = vec![PAD; self.left() * self.d];
        let mut degrees = vec![0u16; self.left()];
        for (i, row) in rows.chunks_exact_mut(self.d).enumerate() {
            degrees[i] = self.neighbors_into(i, row) as u16;
        }
        BipartiteGraph {
            c: self.c,
            m: self.m,
            d: self.d,
            rows,
            degrees,
        }
    }
}

impl NeighborSource for HashedGraph {
    fn imbalance(&self) -> usize {
        self.c
    }
    fn right(&self) -> usize {
        self.m
    }
    fn degree(&self) -> usize {
        self.d
    }

    #[inline]
    fn neighbors_into(&self, i: usize, out: &mut [u32]) -> usize {
        let base = (i * self.d) as u64;
        for (j, slot) in out[..self.d].iter_mut().enumerate() {
            *slot = self.draw(base + j as u64);
        }
        let n = sort_dedup(&mut out[..self.d]);
        for slot in &mut out[n..self.d] {
            *slot = PAD;
        }
        n
    }
}

/// An explicit `(c, m, d)` bipartite graph: `c m` left vertices, each with
/// a sorted, duplicate-free list of at most `d` neighbors in `[m]`.
///
/// Rows are stored at a fixed stride of `d`, padded with [`PAD`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    c: usize,
    m: usize,
    d: usize,
    rows: Vec<u32>,
    degrees: Vec<u16>,
}

impl BipartiteGraph {
    /// Builds a graph from explicit adjacency lists, sorting and
    /// deduplicating each.
    pub fn from_rows(
        c: usize,
        m: usize,
        d: usize,
        adjacency: &[Vec<u32>],
    ) -> Result<Self, ExpanderError> {
        check_sizes(c, m, d)?;
        if adjacency.len() != c * m {
            return Err(ExpanderError::Precondition(format!(
                "expected {} rows, got {}",
                c * m,
                adjacency.len()
            )));
        }
        let mut rows = vec![PAD; c * m * d];
        let mut degrees = vec![0u16; c * m];
        for (i, list) in adjacency.iter().enumerate() {
            let mut list = list.clone();
            list.sort_unstable();
            list.dedup();
            if list.len() > d {
                return Err(ExpanderError::Precondition(format!(
                    "row {i} has {} neighbors, more than d = {d}",
                    list.len()
                )));
            }
            if let Some(&y) = list.iter().find(|&&y| y as usize >= m) {
                return Err(ExpanderError::Precondition(format!(
                    "row {i} has neighbor {y} outside [0, {m})"
                )));
            }
            rows[i * d..i * d + list.len()].copy_from_slice(&list);
            degrees[i] = list.len() as u16;
        }
        Ok(BipartiteGraph {
            c,
            m,
            d,
            rows,
            degrees,
        })
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Sorted neighbors of left vertex `i`.
    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i * self.d..i * self.d + usize::from(self.degrees[i])]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.left()).map(move |i| self.row(i))
    }

    /// Row `i` as an indicator bitset over `[m]`.
    pub fn row_bits(&self, i: usize) -> Vec<u64> {
        let mut bits = vec![0u64; self.m.div_ceil(64)];
        for &y in self.row(i) {
            bits[y as usize / 64] |= 1 << (y % 64);
        }
        bits
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for v in [self.c, self.m, self.d] {
            w.write_all(&(v as u32).to_le_bytes())?;
        }
        for &y in &self.rows {
            w.write_all(&y.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self, ExpanderError> {
        let mut word = [0u8; 4];
        let mut next = |r: &mut R| -> Result<u32, ExpanderError> {
            r.read_exact(&mut word)?;
            Ok(u32::from_le_bytes(word))
        };
        let c = next(&mut r)? as usize;
        let m = next(&mut r)? as usize;
        let d = next(&mut r)? as usize;
        check_sizes(c, m, d)?;
        let mut adjacency = Vec::with_capacity(c * m);
        for _ in 0..c * m {
            let mut row = Vec::with_capacity(d);
            for _ in 0..d {
                let y = next(&mut r)?;
                if y != PAD {
                    row.push(y);
                }
            }
            adjacency.push(row);
        }
        Self::from_rows(c, m, d, &adjacency)
    }
}

impl NeighborSource for BipartiteGraph {
    fn imbalance(&self) -> usize {
        self.c
    }
    fn right(&self) -> usize {
        self.m
    }
    fn degree(&self) -> usize {
        self.d
    }

    #[inline]
    fn neighbors_into(&self, i: usize, out: &mut [u32]) -> usize {
        let row = self.row(i);
        out[..row.len()].copy_from_slice(row);
        row.len()
    }
}

/// Samples a graph: each left vertex takes `d` uniform draws from `[m]`
/// with replacement, deduplicated. Equal to the materialized
/// [`HashedGraph`] keyed by the next word of `rng`.
pub fn sample_graph(
    c: usize,
    m: usize,
    d: usize,
    rng: &mut dyn RngCore,
) -> Result<BipartiteGraph, ExpanderError> {
    Ok(HashedGraph::new(c, m, d, rng.next_u64())?.materialize())
}

/// Block-diagonal union of `b` copies of `g`: block `t` maps left vertex
/// `t c m + i` to the neighbors of `i` shifted by `t m`.
pub fn stack(g: &BipartiteGraph, b: usize) -> Result<BipartiteGraph, ExpanderError> {
    if b == 0 {
        return Err(ExpanderError::ZeroSize);
    }
    let mut adjacency = Vec::with_capacity(g.left() * b);
    for t in 0..b {
        for row in g.rows() {
            adjacency.push(row.iter().map(|&y| y + (t * g.m) as u32).collect());
        }
    }
    // Left size b c m = c (b m) keeps the imbalance.
    BipartiteGraph::from_rows(g.c, g.m * b, g.d, &adjacency)
}
