//! Carryless (polynomial over `F_2`) multiplication of 64-bit words.

/// Shift-and-XOR schoolbook product of `a` and `b` as polynomials in `F_2[X]`.
#[inline]
pub fn clmul_portable(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut b = b;
    let mut acc = 0u128;
    while b != 0 {
        let i = b.trailing_zeros();
        acc ^= a << i;
        b &= b - 1;
    }
    acc
}

/// Whether the running CPU has a carryless-multiply instruction we can use.
pub fn hardware_available() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::arch::is_x86_feature_detected!("pclmulqdq")
            && std::arch::is_x86_feature_detected!("sse2")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

/// Hardware carryless product, if the CPU supports it.
pub fn clmul_hardware(a: u64, b: u64) -> Option<u128> {
    if hardware_available() {
        // SAFETY: feature presence checked just above.
        #[cfg(target_arch = "x86_64")]
        return Some(unsafe { x86::clmul(a, b) });
    }
    None
}

/// Carryless product using the hardware path when available.
#[inline]
pub fn carryless_mul(a: u64, b: u64) -> u128 {
    clmul_hardware(a, b).unwrap_or_else(|| clmul_portable(a, b))
}

#[cfg(target_arch = "x86_64")]
pub(crate) mod x86 {
    use core::arch::x86_64::{
        _mm_clmulepi64_si128, _mm_cvtsi128_si64, _mm_cvtsi64_si128, _mm_unpackhi_epi64,
    };

    #[inline]
    #[target_feature(enable = "pclmulqdq,sse2")]
    pub unsafe fn clmul(a: u64, b: u64) -> u128 {
        let x = _mm_cvtsi64_si128(a as i64);
        let y = _mm_cvtsi64_si128(b as i64);
        let z = _mm_clmulepi64_si128(x, y, 0);
        let lo = _mm_cvtsi128_si64(z) as u64;
        let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(z, z)) as u64;
        (u128::from(hi) << 64) | u128::from(lo)
    }

    /// Product in `GF(2^w)` with `g = X^w + tail`: each fold multiplies the
    /// high part by `tail` with one more carryless product.
    #[inline]
    #[target_feature(enable = "pclmulqdq,sse2")]
    pub unsafe fn mul_reduce(a: u64, b: u64, tail: u64, w: u32, folds: u32) -> u64 {
        let mask = if w == 64 {
            u128::from(u64::MAX)
        } else {
            (1u128 << w) - 1
        };
        let mut z = clmul(a, b);
        for _ in 0..folds {
            let high = (z >> w) as u64;
            z = (z & mask) ^ clmul(high, tail);
        }
        z as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn schoolbook(a: u64, b: u64) -> u128 {
        let mut acc = 0u128;
        for i in 0..64 {
            if (b >> i) & 1 == 1 {
                acc ^= (a as u128) << i;
            }
        }
        acc
    }

    #[test]
    fn small_products() {
        assert_eq!(clmul_portable(0b11, 0b11), 0b101);
        assert_eq!(clmul_portable(0xdead_beef, 1), 0xdead_beef);
        assert_eq!(clmul_portable(0b1011, 0b110), schoolbook(0b1011, 0b110));
        assert_eq!(clmul_portable(0b1011, 0b110), 0b111010);
        assert_eq!(clmul_portable(u64::MAX, 0), 0);
    }

    #[test]
    fn portable_matches_bitwise_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let (a, b) = (rng.gen::<u64>(), rng.gen::<u64>());
            assert_eq!(clmul_portable(a, b), schoolbook(a, b));
        }
    }

    #[test]
    fn hardware_matches_portable() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        if !hardware_available() {
            return;
        }
        for _ in 0..100_000 {
            let (a, b) = (rng.gen::<u64>(), rng.gen::<u64>());
            assert_eq!(clmul_hardware(a, b), Some(clmul_portable(a, b)));
        }
    }
}
