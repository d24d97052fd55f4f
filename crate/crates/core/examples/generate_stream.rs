//! Building generators of each kind and drawing values from them.

use kgen::field::FieldContext;
use kgen::generator::{
    build_cascade_generator, build_expander_generator, Blueprint, CascadeParams, ExpanderParams,
    GeneratorFactory, GraphStorage, InnerKind,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let field = FieldContext::binary(64)?;
    let k = 64;
    let expander = ExpanderParams {
        k,
        c: 16,
        m: 1 << 12,
        d: 8,
        inner: InnerKind::FftBatch,
        storage: GraphStorage::Auto,
    };
    let cascade = CascadeParams {
        k,
        c: 16,
        m: 1 << 16,
        d: 8,
        t: 2,
        base: InnerKind::FftBatch,
        storage: GraphStorage::Hashed,
    };
    let blueprints = [
        Blueprint::horner(field.clone(), k)?,
        Blueprint::fft_batch(field.clone(), k)?,
        build_expander_generator(field.clone(), &expander, 42)?,
        build_cascade_generator(field.clone(), &cascade, 42)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for bp in &blueprints {
        let mut gen = bp.init_random(&mut rng)?;
        let mut values = [0u64; 4];
        gen.emit_batch(&mut values)?;
        println!("{}", bp.descriptor());
        println!("  first values {values:016x?}");
    }

    let small = Blueprint::horner("gfp:7".parse()?, 3)?;
    let seed = vec![1, 0, 2];
    let mut gen = small.init(&seed)?;
    let all: Vec<u64> = (0..7).map(|_| gen.emit()).collect::<Result<_, _>>()?;
    println!("1 + 2x^2 over GF(7) at 0..6: {all:?}");
    println!("an eighth value is refused: {}", gen.emit().unwrap_err());
    Ok(())
}
