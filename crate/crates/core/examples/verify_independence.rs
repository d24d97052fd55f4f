//! Exact and statistical independence checks.

use std::sync::Arc;

use kgen::analysis::{exhaustive_independence_check, screen_generator, support_enumeration_check};
use kgen::expander::sample_graph;
use kgen::field::FieldContext;
use kgen::generator::{Blueprint, GraphSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gf5: FieldContext = "gfp:5".parse()?;
    let good = Blueprint::horner(gf5.clone(), 3)?;
    println!(
        "{}",
        exhaustive_independence_check(&good, 3, 5, u64::MAX)?.to_line()
    );

    let gf3: FieldContext = "gfp:3".parse()?;
    let short = Blueprint::horner(gf3, 2)?;
    println!(
        "{}",
        exhaustive_independence_check(&short, 3, 3, u64::MAX)?.to_line()
    );

    let gf16 = FieldContext::binary(4)?;
    let graph = sample_graph(4, 64, 4, &mut ChaCha8Rng::seed_from_u64(9))?;
    let expander = Blueprint::expander(
        gf16.clone(),
        2,
        GraphSpec::Stored(Arc::new(graph)),
        Blueprint::table(gf16, 64)?,
    )?;
    println!(
        "{}",
        support_enumeration_check(&expander, 2, 256, u64::MAX)?.to_line()
    );

    let wide = Blueprint::fft_batch(FieldContext::binary(64)?, 8)?;
    println!("{}", screen_generator(&wide, 4, 64, 50_000, 1)?.to_line());
    Ok(())
}
