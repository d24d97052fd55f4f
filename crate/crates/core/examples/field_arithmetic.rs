//! Arithmetic in GF(2^64) and GF(p), and the two carryless-multiply paths.

use kgen::field::{Field, FieldContext, Gf2w, Gfp};

fn main() {
    let f = Gf2w::new(64).expect("built-in modulus");
    let (a, b) = (0x0123_4567_89ab_cdef, 0xfedc_ba98_7654_3210);
    let product = f.mul(a, b);
    println!("GF(2^64) modulus exponents {:?}", f.polynomial());
    println!("hardware carryless multiply: {}", f.uses_hardware());
    println!("{a:#018x} * {b:#018x} = {product:#018x}");
    assert_eq!(product, f.portable().mul(a, b));
    let inv = f.inv(a).expect("nonzero");
    println!("inverse of {a:#x} is {inv:#x}, check {}", f.mul(a, inv));

    let p = Gfp::new((1 << 61) - 1).expect("prime");
    let (x, y) = (1_234_567_890_123, 987_654_321_987);
    println!("in GF(2^61 - 1): {x} * {y} = {}", p.mul(x, y));

    for name in ["gf2w:8", "gfp:257", "gfp:65537"] {
        let field: FieldContext = name.parse().expect("valid field");
        let mut bytes = Vec::new();
        field.encode(field.element_at(field.order() - 1), &mut bytes);
        println!(
            "{name}: order {}, largest element encodes as {bytes:02x?}",
            field.order()
        );
    }
}
