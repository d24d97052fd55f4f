//! Random unbalanced bipartite graphs, exact verification of small
//! instances, failure-probability bounds and parameter search.
//!
//! A `(c, m, d)`-graph has `c m` left vertices, `m` right vertices and at
//! most `d` distinct neighbors per left vertex. Its `F_2` adjacency matrix
//! has one row per left vertex.

mod bounds;
mod checks;
mod graph;
mod search;

use thiserror::Error;

pub use bounds::{
    beta_pair, beta_poisson, delta_from_gamma, log_sum_exp, rank_failure_bound,
    unique_failure_bound, BoundResult,
};
pub use checks::{
    all_small_row_subsets_independent, all_small_row_subsets_independent_with_guard, f2_rank,
    is_k_unique_bruteforce, is_k_unique_bruteforce_with_guard,
    small_row_subsets_independent_by_rank, subsets_up_to, DEFAULT_GUARD,
};
pub use graph::{sample_graph, stack, BipartiteGraph, HashedGraph, NeighborSource, PAD};
pub use search::{
    search_parameters, Candidate, CostModel, MeasuredCost, ModeledCost, SearchGrid, SearchResult,
};

#[derive(Debug, Error)]
pub enum ExpanderError {
    #[error("graph sizes c, m, d and k must be positive")]
    ZeroSize,
    #[error("{0}")]
    Precondition(String),
    #[error("check needs {required} subsets, above the limit of {limit}")]
    Guard { required: u128, limit: u128 },
    #[error("graph file: {0}")]
    Io(#[from] std::io::Error),
}

impl PartialEq for ExpanderError {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::ZeroSize, Self::ZeroSize) => true,
            (Self::Precondition(a), Self::Precondition(b)) => a == b,
            (
                Self::Guard {
                    required: a,
                    limit: b,
                },
                Self::Guard {
                    required: c,
                    limit: d,
                },
            ) => a == c && b == d,
            (Self::Io(a), Self::Io(b)) => a.kind() == b.kind(),
            _ => false,
        }
    }
}
