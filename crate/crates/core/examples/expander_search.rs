//! Failure bounds and the parameter search for expander generators.

use kgen::expander::{
    all_small_row_subsets_independent, rank_failure_bound, sample_graph, search_parameters,
    ModeledCost, SearchGrid,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    for (k, c, m, d) in [
        (32, 64, 1 << 13, 8),
        (1024, 64, 1 << 18, 8),
        (4096, 64, 1 << 18, 16),
    ] {
        let bound = rank_failure_bound(c, m, d, k).expect("positive sizes");
        println!(
            "k={k} c={c} m=2^{} d={d}: log10 delta = {:.2}",
            m.trailing_zeros(),
            bound.log10_delta
        );
    }

    let cost = ModeledCost::default();
    for k in [32, 1024, 1 << 16] {
        let result = search_parameters(&SearchGrid::standard(k, -7.0), &cost).expect("valid grid");
        match result.winner {
            Some(w) => println!(
                "k={k}: c={} d={} m=2^{} predicts {:.1} ns/value (log10 delta {:.1})",
                w.c,
                w.d,
                w.log2_m.expect("feasible"),
                w.predicted_ns,
                w.log10_delta
            ),
            None => println!("k={k}: infeasible"),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let accepted = (0..200)
        .filter(|_| {
            let g = sample_graph(4, 64, 4, &mut rng).expect("positive sizes");
            all_small_row_subsets_independent(&g, 2).expect("within guard")
        })
        .count();
    println!("{accepted} of 200 sampled (4, 64, 4) graphs have pairwise independent rows");
}
