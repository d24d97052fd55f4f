//! Batch evaluation: additive FFT over GF(2^w) and coset DFT over GF(p).

use kgen::fft::{AdditiveFftPlan, CosetDftPlan, OpCount};
use kgen::field::{Gf2w, Gfp};
use kgen::poly::{naive_multipoint, Polynomial};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    let f = Gf2w::new(64).expect("built-in modulus");
    let s = 10;
    let plan = AdditiveFftPlan::new(f.clone(), s).expect("s <= w");
    let h = Polynomial::random(f, 1 << s, &mut rng).expect("nonempty");
    let mut ops = OpCount::default();
    let shift = 7 << s;
    let values = plan.evaluate_counted(&h, shift, &mut ops).expect("fits");
    let points: Vec<u64> = (0..1 << s).map(|b| plan.point(shift, b)).collect();
    assert_eq!(values, naive_multipoint(&h, &points).expect("canonical"));
    println!("additive FFT of {} coefficients: {ops:?}", 1 << s);

    let p = Gfp::new(65_537).expect("prime");
    let k = 256;
    let mut coset = CosetDftPlan::new(p.clone(), k).expect("k divides p - 1");
    let h = Polynomial::random(p, k, &mut rng).expect("nonempty");
    println!(
        "GF(65537), k = {k}: {} cosets cover the nonzero elements",
        coset.cosets()
    );
    for _ in 0..3 {
        let j = coset.coset_index();
        let values = coset.evaluate_current(&h).expect("length k");
        let x = coset.point(j, 1);
        assert_eq!(values[1], h.eval(x).expect("canonical"));
        println!("coset {j}: h({x}) = {}", values[1]);
        coset.advance_coset().expect("more cosets");
    }
}
