//! Parameter search over imbalance `c`, degree `d` and right size `m`.

use rayon::prelude::*;

use super::bounds::rank_failure_bound;
use super::ExpanderError;

/// Per-value costs feeding `T = FFT_{dk} / c + RA_{d,m}`.
pub trait CostModel: Sync {
    /// Nanoseconds per value for batch evaluation of a `dk`-independent
    /// polynomial.
    fn fft_ns(&self, dk: usize) -> f64;
    /// Nanoseconds for `d` lookups into a table of `m` words.
    fn lookup_ns(&self, d: usize, m: usize) -> f64;

    fn predicted_ns(&self, k: usize, c: usize, d: usize, m: usize) -> f64 {
        self.fft_ns(d * k) / c as f64 + self.lookup_ns(d, m)
    }
}

/// Cost model from operation counts and cache-level latencies.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeledCost {
    pub mul_ns: f64,
    pub add_ns: f64,
    /// `(table bytes upper limit, ns per lookup)`, ascending; the last entry
    /// applies beyond all limits.
    pub latency_tiers: Vec<(usize, f64)>,
}

impl Default for ModeledCost {
    fn default() -> Self {
        ModeledCost {
            mul_ns: 1.5,
            add_ns: 0.3,
            latency_tiers: vec![
                (32 << 10, 0.5),
                (1 << 20, 1.5),
                (32 << 20, 5.0),
                (usize::MAX, 20.0),
            ],
        }
    }
}

impl CostModel for ModeledCost {
    fn fft_ns(&self, dk: usize) -> f64 {
        // Per value of a size-2^s transform with a prepared polynomial:
        // s/2 multiplications and 3s/2 additions.
        let s = dk.next_power_of_two().trailing_zeros().max(1) as f64;
        s / 2.0 * self.mul_ns + 1.5 * s * self.add_ns
    }

    fn lookup_ns(&self, d: usize, m: usize) -> f64 {
        let bytes = m.saturating_mul(8);
        let per = self
            .latency_tiers
            .iter()
            .find(|(limit, _)| bytes <= *limit)
            .map_or(f64::INFINITY, |&(_, ns)| ns);
        d as f64 * per
    }
}

/// Caller-supplied measurements.
pub struct MeasuredCost<F, R> {
    pub fft: F,
    pub lookup: R,
}

impl<F, R> CostModel for MeasuredCost<F, R>
where
    F: Fn(usize) -> f64 + Sync,
    R: Fn(usize, usize) -> f64 + Sync,
{
    fn fft_ns(&self, dk: usize) -> f64 {
        (self.fft)(dk)
    }
    fn lookup_ns(&self, d: usize, m: usize) -> f64 {
        (self.lookup)(d, m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchGrid {
    pub k: usize,
    pub imbalances: Vec<usize>,
    pub degrees: Vec<usize>,
    pub min_log2_m: u32,
    pub max_log2_m: u32,
    pub log10_delta_target: f64,
}

impl SearchGrid {
    /// `c in {16, 32, 64}`, `d in {4, 8, 16}`, `m <= 2^26`.
    pub fn standard(k: usize, log10_delta_target: f64) -> Self {
        SearchGrid {
            k,
            imbalances: vec![16, 32, 64],
            degrees: vec![4, 8, 16],
            min_log2_m: 1,
            max_log2_m: 26,
            log10_delta_target,
        }
    }
}

/// One `(c, d)` cell of the search.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub k: usize,
    pub c: usize,
    pub d: usize,
    /// Least feasible `log2 m`, if any `m` in range works.
    pub log2_m: Option<u32>,
    pub log10_delta: f64,
    pub predicted_ns: f64,
}

impl Candidate {
    pub fn m(&self) -> Option<usize> {
        self.log2_m.map(|l| 1usize << l)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub table: Vec<Candidate>,
    pub winner: Option<Candidate>,
}

impl SearchResult {
    pub fn is_feasible(&self) -> bool {
        self.winner.is_some()
    }
}

/// A failure probability bound capped at 1, in log10.
fn capped_log10_bound(c: usize, m: usize, d: usize, k: usize) -> f64 {
    rank_failure_bound(c, m, d, k).map_or(0.0, |b| b.log10_delta.min(0.0))
}

/// For every `(c, d)`, the least power-of-two `m` in range whose bound
/// meets the target; the winner minimizes the predicted time per value.
pub fn search_parameters(
    grid: &SearchGrid,
    cost: &dyn CostModel,
) -> Result<SearchResult, ExpanderError> {
    if grid.imbalances.is_empty() || grid.degrees.is_empty() {
        return Err(ExpanderError::Precondition("empty candidate set".into()));
    }
    if grid.k == 0 || grid.imbalances.contains(&0) || grid.degrees.contains(&0) {
        return Err(ExpanderError::ZeroSize);
    }
    if grid.min_log2_m > grid.max_log2_m || grid.max_log2_m > 31 {
        return Err(ExpanderError::Precondition(format!(
            "right-size range 2^{}..=2^{} is invalid",
            grid.min_log2_m, grid.max_log2_m
        )));
    }
    let cells: Vec<(usize, usize)> = grid
        .imbalances
        .iter()
        .flat_map(|&c| grid.degrees.iter().map(move |&d| (c, d)))
        .collect();
    let table: Vec<Candidate> = cells
        .par_iter()
        .map(|&(c, d)| {
            let mut last = 0.0;
            for l in grid.min_log2_m..=grid.max_log2_m {
                let m = 1usize << l;
                last = capped_log10_bound(c, m, d, grid.k);
                if last <= grid.log10_delta_target {
                    return Candidate {
                        k: grid.k,
                        c,
                        d,
                        log2_m: Some(l),
                        log10_delta: last,
                        predicted_ns: cost.predicted_ns(grid.k, c, d, m),
                    };
                }
            }
            Candidate {
                k: grid.k,
                c,
                d,
                log2_m: None,
                log10_delta: last,
                predicted_ns: f64::INFINITY,
            }
        })
        .collect();
    let winner = table
        .iter()
        .filter(|cand| cand.log2_m.is_some())
        .min_by(|a, b| a.predicted_ns.total_cmp(&b.predicted_ns))
        .cloned();
    Ok(SearchResult { table, winner })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuous_target_takes_smallest_m() {
        let grid = SearchGrid::standard(32, 0.0);
        let r = search_parameters(&grid, &ModeledCost::default()).unwrap();
        assert_eq!(r.table.len(), 9);
        assert!(r.table.iter().all(|c| c.log2_m == Some(1)));
    }

    #[test]
    fn published_row_k32() {
        let grid = SearchGrid::standard(32, -7.0);
        let r = search_parameters(&grid, &ModeledCost::default()).unwrap();
        let cell = r.table.iter().find(|c| c.c == 64 && c.d == 8).unwrap();
        assert!(cell.log2_m.unwrap() <= 13);
        assert!(capped_log10_bound(64, 1 << 13, 8, 32) <= -7.0);
        assert!(r.is_feasible());
    }

    #[test]
    fn tighter_target_needs_larger_m() {
        let loose = SearchGrid {
            degrees: vec![8],
            ..SearchGrid::standard(256, -6.0)
        };
        let tight = SearchGrid {
            log10_delta_target: -9.0,
            ..loose.clone()
        };
        let cost = ModeledCost::default();
        let a = search_parameters(&loose, &cost).unwrap();
        let b = search_parameters(&tight, &cost).unwrap();
        for (x, y) in a.table.iter().zip(&b.table) {
            let rank = |l: Option<u32>| l.unwrap_or(u32::MAX);
            assert!(rank(y.log2_m) >= rank(x.log2_m));
        }
        assert!(b.winner.unwrap().log2_m > a.winner.unwrap().log2_m);
    }

    #[test]
    fn infeasible_grid_reported() {
        let grid = SearchGrid {
            max_log2_m: 8,
            ..SearchGrid::standard(1 << 10, -12.0)
        };
        let r = search_parameters(&grid, &ModeledCost::default()).unwrap();
        assert!(!r.is_feasible());
        assert!(r.table.iter().all(|c| c.log2_m.is_none()));
    }

    #[test]
    fn invalid_grids_rejected() {
        let mut grid = SearchGrid::standard(8, -3.0);
        grid.degrees.clear();
        assert!(search_parameters(&grid, &ModeledCost::default()).is_err());
    }

    #[test]
    fn measured_costs_are_used() {
        let cost = MeasuredCost {
            fft: |dk: usize| dk as f64,
            lookup: |d: usize, _m: usize| d as f64,
        };
        assert_eq!(cost.predicted_ns(4, 2, 8, 64), 32.0 / 2.0 + 8.0);
    }
}
