//! Exact (exponential-time) verification of small graphs.

use super::graph::{BipartiteGraph, NeighborSource};
use super::ExpanderError;

/// Default cap on the number of row subsets a check may visit.
pub const DEFAULT_GUARD: u128 = 10_000_000;

/// `sum_{i=0}^{k} C(n, i)`, saturating.
pub fn subsets_up_to(n: usize, k: usize) -> u128 {
    let mut total = 1u128;
    let mut binom = 1u128;
    for i in 1..=k.min(n) {
        binom = binom.saturating_mul((n - i + 1) as u128) / i as u128;
        total = total.saturating_add(binom);
    }
    total
}

fn guard(n: usize, k: usize, limit: u128) -> Result<(), ExpanderError> {
    let required = subsets_up_to(n, k);
    if required > limit {
        return Err(ExpanderError::Guard { required, limit });
    }
    Ok(())
}

/// Whether every nonempty set of at most `k` left vertices has a right
/// vertex adjacent to exactly one of them.
pub fn is_k_unique_bruteforce(g: &BipartiteGraph, k: usize) -> Result<bool, ExpanderError> {
    is_k_unique_bruteforce_with_guard(g, k, DEFAULT_GUARD)
}

pub fn is_k_unique_bruteforce_with_guard(
    g: &BipartiteGraph,
    k: usize,
    limit: u128,
) -> Result<bool, ExpanderError> {
    guard(g.left(), k, limit)?;
    struct Sweep<'a> {
        g: &'a BipartiteGraph,
        k: usize,
        hits: Vec<u32>,
        unique: usize,
    }
    impl Sweep<'_> {
        fn toggle(&mut self, i: usize, add: bool) {
            for &y in self.g.row(i) {
                let h = &mut self.hits[y as usize];
                if add {
                    *h += 1;
                    match *h {
                        1 => self.unique += 1,
                        2 => self.unique -= 1,
                        _ => {}
                    }
                } else {
                    *h -= 1;
                    match *h {
                        0 => self.unique -= 1,
                        1 => self.unique += 1,
                        _ => {}
                    }
                }
            }
        }
        fn run(&mut self, start: usize, size: usize) -> bool {
            for i in start..self.g.left() {
                self.toggle(i, true);
                let ok = self.unique > 0 && (size + 1 == self.k || self.run(i + 1, size + 1));
                self.toggle(i, false);
                if !ok {
                    return false;
                }
            }
            true
        }
    }
    if k == 0 {
        return Ok(true);
    }
    let mut sweep = Sweep {
        g,
        k,
        hits: vec![0; g.m()],
        unique: 0,
    };
    Ok(sweep.run(0, 0))
}

fn row_matrix(g: &BipartiteGraph) -> (usize, Vec<u64>) {
    let words = g.m().div_ceil(64);
    let mut bits = vec![0u64; g.left() * words];
    for (i, chunk) in bits.chunks_exact_mut(words).enumerate() {
        for &y in g.row(i) {
            chunk[y as usize / 64] |= 1 << (y % 64);
        }
    }
    (words, bits)
}

/// Whether no nonempty set of at most `k` rows of the `F_2` adjacency
/// matrix sums to zero, i.e. every such set of rows is linearly independent.
///
/// Small instances enumerate every subset. Larger ones split a would-be
/// dependency `S` into halves `A`, `B` of size at most `ceil(k/2)` with equal
/// sums, and look for such collisions among all small subsets using a
/// linear fingerprint.
pub fn all_small_row_subsets_independent(
    g: &BipartiteGraph,
    k: usize,
) -> Result<bool, ExpanderError> {
    all_small_row_subsets_independent_with_guard(g, k, DEFAULT_GUARD)
}

pub fn all_small_row_subsets_independent_with_guard(
    g: &BipartiteGraph,
    k: usize,
    limit: u128,
) -> Result<bool, ExpanderError> {
    let n = g.left();
    let k = k.min(n);
    if k == 0 {
        return Ok(true);
    }
    if subsets_up_to(n, k) <= limit {
        return Ok(subset_sweep(g, k));
    }
    let h = k.div_ceil(2);
    guard(n, h, limit)?;
    Ok(collision_search(g, k, h))
}

fn subset_sweep(g: &BipartiteGraph, k: usize) -> bool {
    let (words, bits) = row_matrix(g);
    let n = g.left();
    // acc[depth] holds the sum of the first `depth` chosen rows.
    let mut acc = vec![0u64; (k + 1) * words];
    fn run(
        bits: &[u64],
        acc: &mut [u64],
        words: usize,
        n: usize,
        k: usize,
        start: usize,
        depth: usize,
    ) -> bool {
        for i in start..n {
            let (done, rest) = acc.split_at_mut((depth + 1) * words);
            let prev = &done[depth * words..];
            let cur = &mut rest[..words];
            let mut zero = true;
            for w in 0..words {
                cur[w] = prev[w] ^ bits[i * words + w];
                zero &= cur[w] == 0;
            }
            if zero {
                return false;
            }
            if depth + 1 < k && !run(bits, acc, words, n, k, i + 1, depth + 1) {
                return false;
            }
        }
        true
    }
    run(&bits, &mut acc, words, n, k, 0, 0)
}

fn collision_search(g: &BipartiteGraph, k: usize, h: usize) -> bool {
    let (words, bits) = row_matrix(g);
    let n = g.left();
    // Linear fingerprint: each column gets a fixed pseudorandom word, and a
    // row's fingerprint is the XOR over its set columns. Equal sums imply
    // equal fingerprints.
    let column_key = |y: usize| {
        let mut z = (y as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    let row_fp: Vec<u64> = (0..n)
        .map(|i| {
            g.row(i)
                .iter()
                .fold(0, |acc, &y| acc ^ column_key(y as usize))
        })
        .collect();

    // Every subset of size <= h, including the empty one, as
    // (fingerprint, index into `members`).
    let mut entries: Vec<(u64, u32)> = Vec::new();
    let mut members: Vec<u32> = Vec::new();
    let mut stack: Vec<u32> = Vec::with_capacity(h);
    fn enumerate(
        row_fp: &[u64],
        h: usize,
        start: usize,
        fp: u64,
        stack: &mut Vec<u32>,
        entries: &mut Vec<(u64, u32)>,
        members: &mut Vec<u32>,
    ) {
        entries.push((fp, members.len() as u32));
        members.push(stack.len() as u32);
        members.extend_from_slice(stack);
        if stack.len() == h {
            return;
        }
        for i in start..row_fp.len() {
            stack.push(i as u32);
            enumerate(row_fp, h, i + 1, fp ^ row_fp[i], stack, entries, members);
            stack.pop();
        }
    }
    enumerate(&row_fp, h, 0, 0, &mut stack, &mut entries, &mut members);
    entries.sort_unstable();

    let subset = |at: u32| {
        let at = at as usize;
        let len = members[at] as usize;
        &members[at + 1..at + 1 + len]
    };
    let sum = |set: &[u32]| {
        let mut out = vec![0u64; words];
        for &i in set {
            for w in 0..words {
                out[w] ^= bits[i as usize * words + w];
            }
        }
        out
    };
    let symmetric_difference = |a: &[u32], b: &[u32]| {
        let common = a.iter().filter(|x| b.contains(x)).count();
        a.len() + b.len() - 2 * common
    };

    let mut lo = 0;
    while lo < entries.len() {
        let mut hi = lo + 1;
        while hi < entries.len() && entries[hi].0 == entries[lo].0 {
            hi += 1;
        }
        for x in lo..hi {
            for y in x + 1..hi {
                let (a, b) = (subset(entries[x].1), subset(entries[y].1));
                let diff = symmetric_difference(a, b);
                if diff > 0 && diff <= k && sum(a) == sum(b) {
                    return false;
                }
            }
        }
        lo = hi;
    }
    true
}

/// Rank of a set of row bitsets over `F_2`.
pub fn f2_rank(rows: &[Vec<u64>]) -> usize {
    let mut rows: Vec<Vec<u64>> = rows.to_vec();
    let mut rank = 0;
    let width = rows.first().map_or(0, Vec::len) * 64;
    for col in 0..width {
        let (w, b) = (col / 64, col % 64);
        let Some(p) = (rank..rows.len()).find(|&r| (rows[r][w] >> b) & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && (row[w] >> b) & 1 == 1 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Same property as [`all_small_row_subsets_independent`], decided by
/// Gaussian elimination on every set of `min(k, cm)` rows.
pub fn small_row_subsets_independent_by_rank(
    g: &BipartiteGraph,
    k: usize,
) -> Result<bool, ExpanderError> {
    let n = g.left();
    let k = k.min(n);
    guard(n, k, DEFAULT_GUARD)?;
    let rows: Vec<Vec<u64>> = (0..n).map(|i| g.row_bits(i)).collect();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let chosen: Vec<Vec<u64>> = idx.iter().map(|&i| rows[i].clone()).collect();
        if f2_rank(&chosen) < k {
            return Ok(false);
        }
        // Next k-combination in lexicographic order.
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            return Ok(true);
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expander::graph::{sample_graph, stack};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn identity(m: usize) -> BipartiteGraph {
        let rows: Vec<Vec<u32>> = (0..m as u32).map(|i| vec![i]).collect();
        BipartiteGraph::from_rows(1, m, 1, &rows).unwrap()
    }

    /// Second uniqueness oracle: bitmask sweep over all subsets, m <= 64.
    fn unique_by_masks(g: &BipartiteGraph, k: usize) -> bool {
        let n = g.left();
        let masks: Vec<u64> = (0..n)
            .map(|i| g.row(i).iter().fold(0u64, |a, &y| a | 1 << y))
            .collect();
        for s in 1u64..1 << n {
            if s.count_ones() as usize > k {
                continue;
            }
            let (mut once, mut more) = (0u64, 0u64);
            for (i, &mask) in masks.iter().enumerate() {
                if (s >> i) & 1 == 1 {
                    more |= once & mask;
                    once |= mask;
                }
            }
            if once & !more == 0 {
                return false;
            }
        }
        true
    }

    #[test]
    fn identity_graph_passes() {
        let g = identity(6);
        for k in 0..=6 {
            assert!(is_k_unique_bruteforce(&g, k).unwrap());
            assert!(all_small_row_subsets_independent(&g, k).unwrap());
        }
    }

    #[test]
    fn duplicate_rows_fail_at_two() {
        let g = BipartiteGraph::from_rows(2, 2, 2, &[vec![0, 1], vec![0, 1], vec![0], vec![1]])
            .unwrap();
        assert!(is_k_unique_bruteforce(&g, 1).unwrap());
        assert!(!is_k_unique_bruteforce(&g, 2).unwrap());
        assert!(all_small_row_subsets_independent(&g, 1).unwrap());
        assert!(!all_small_row_subsets_independent(&g, 2).unwrap());
    }

    #[test]
    fn uniqueness_oracles_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let g = sample_graph(2, 8, 3, &mut rng).unwrap();
            for k in 1..=5 {
                assert_eq!(
                    is_k_unique_bruteforce(&g, k).unwrap(),
                    unique_by_masks(&g, k)
                );
            }
        }
    }

    #[test]
    fn independence_oracles_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let m = rng.gen_range(4..=12);
            let d = rng.gen_range(1..=4);
            let g = sample_graph(2, m, d, &mut rng).unwrap();
            for k in 1..=4 {
                let sweep = all_small_row_subsets_independent(&g, k).unwrap();
                assert_eq!(sweep, small_row_subsets_independent_by_rank(&g, k).unwrap());
                assert_eq!(
                    collision_search(&g, k, k.div_ceil(2)),
                    sweep,
                    "m={m} d={d} k={k}"
                );
            }
        }
    }

    #[test]
    fn uniqueness_implies_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let g = sample_graph(2, 8, 3, &mut rng).unwrap();
            for k in 1..=4 {
                if is_k_unique_bruteforce(&g, k).unwrap() {
                    assert!(all_small_row_subsets_independent(&g, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn stacking_preserves_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..60 {
            let g = sample_graph(2, 4, 2, &mut rng).unwrap();
            let s = stack(&g, 3).unwrap();
            for k in 1..=3 {
                assert_eq!(
                    is_k_unique_bruteforce(&s, k).unwrap(),
                    is_k_unique_bruteforce(&g, k).unwrap()
                );
                assert_eq!(
                    all_small_row_subsets_independent(&s, k).unwrap(),
                    all_small_row_subsets_independent(&g, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn guard_rejects_large_sweeps() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = sample_graph(64, 64, 4, &mut rng).unwrap();
        assert!(matches!(
            is_k_unique_bruteforce(&g, 4),
            Err(ExpanderError::Guard { .. })
        ));
        // Collision search handles k = 4 on 4096 rows.
        assert!(all_small_row_subsets_independent(&g, 4).is_ok());
        assert!(matches!(
            all_small_row_subsets_independent(&g, 8),
            Err(ExpanderError::Guard { .. })
        ));
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subsets_up_to(5, 0), 1);
        assert_eq!(subsets_up_to(5, 2), 1 + 5 + 10);
        assert_eq!(subsets_up_to(3, 10), 8);
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(f2_rank(&[vec![0b011], vec![0b110], vec![0b101]]), 2);
        assert_eq!(f2_rank(&[vec![1], vec![2], vec![4]]), 3);
        assert_eq!(f2_rank(&[]), 0);
    }
}
