//! Nanoseconds per value for horner, fft-batch and expander generators as
//! k grows.

use kgen::cli::{expander_params_for, measure_ns_per_value, table_lookup_ns};
use kgen::field::FieldContext;
use kgen::generator::{
    build_expander_generator, Blueprint, ExpanderParams, GraphStorage, InnerKind,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ns(bp: &Blueprint, batch: usize) -> Result<f64, Box<dyn std::error::Error>> {
    let mut gen = bp.init_random(&mut ChaCha8Rng::seed_from_u64(0))?;
    Ok(measure_ns_per_value(gen.as_mut(), batch, 5)?)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let field = FieldContext::binary(64)?;
    println!(
        "{:>6} {:>10} {:>10} {:>10}",
        "k", "horner", "fft-batch", "expander"
    );
    for k in [16usize, 64, 256, 1024, 4096] {
        let horner = ns(&Blueprint::horner(field.clone(), k)?, (1 << 20) / k)?;
        let fft = ns(&Blueprint::fft_batch(field.clone(), k)?, 1 << 16)?;
        let (c, d) = (4, 8);
        let m = expander_params_for(k, c, d, -7.0, 26).ok_or("no feasible m")?;
        let params = ExpanderParams {
            k,
            c,
            m,
            d,
            inner: InnerKind::FftBatch,
            storage: GraphStorage::Auto,
        };
        let expander = ns(
            &build_expander_generator(field.clone(), &params, 0)?,
            1 << 18,
        )?;
        println!("{k:>6} {horner:>10.1} {fft:>10.1} {expander:>10.1}");
    }
    println!(
        "8 reads from a 2^20-word table: {:.1} ns",
        table_lookup_ns(1 << 20, 8, 1 << 16, 5)
    );
    Ok(())
}
