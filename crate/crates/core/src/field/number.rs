//! Integer helpers: primality and factorization of 64-bit integers.

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Pollard's rho with Brent's cycle detection; `n` must be an odd composite.
fn rho(n: u64) -> u64 {
    for c in 1.. {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        while g == 1 {
            x = f(x);
            y = f(f(y));
            g = gcd(x.abs_diff(y), n);
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    if n % 2 == 0 {
        out.push(2);
        return factor_into(n / 2, out);
    }
    let d = rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Distinct prime factors of `n`, ascending. `factorize(1)` is empty.
pub fn factorize(n: u64) -> Vec<u64> {
    assert!(n > 0, "cannot factor zero");
    let mut out = Vec::new();
    factor_into(n, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_range() {
        let sieve: Vec<bool> = (0..10_000u64)
            .map(|n| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        for (n, &p) in sieve.iter().enumerate() {
            assert_eq!(is_prime(n as u64), p, "{n}");
        }
    }

    #[test]
    fn known_large_values() {
        assert!(is_prime((1 << 61) - 1));
        assert!(is_prime((1 << 63) - 25));
        assert!(!is_prime((1 << 63) - 1));
        // Strong pseudoprime to bases 2..=37 would break a weaker base set.
        assert!(!is_prime(3_825_123_056_546_413_051));
    }

    #[test]
    fn factorizations() {
        assert_eq!(factorize(1), Vec::<u64>::new());
        assert_eq!(factorize(12), vec![2, 3]);
        assert_eq!(factorize(256), vec![2]);
        assert_eq!(
            factorize((1 << 61) - 2),
            vec![2, 3, 5, 7, 11, 13, 31, 41, 61, 151, 331, 1321]
        );
        let n = 1_000_000_007u64 * 998_244_353;
        assert_eq!(factorize(n), vec![998_244_353, 1_000_000_007]);
    }
}
