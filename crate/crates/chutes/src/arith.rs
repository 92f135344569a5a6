//! Exact integer arithmetic shared by every other module: factorization,
//! divisors, Euler phi, multiplicative order, radical, integer e-th roots,
//! primality and squarefreeness.
//!
//! All functions here are total over their documented domains and panic on
//! contract violations (zero where positives are required, exponents below 2,
//! non-coprime order queries). Nothing in this module allocates beyond the
//! returned values; everything is safe to call from any thread.

use num_bigint::BigUint;
use num_traits::Zero;

/// Prime factorization of a positive 64-bit integer.
///
/// Invariants: primes are strictly increasing, every exponent is at least 1,
/// and the product of `prime^exponent` reconstructs the original value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// The `(prime, exponent)` pairs in increasing prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Recomputes the product; used by tests to confirm the invariant.
    pub fn reconstruct(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, k)| p.pow(k))
            .product::<u64>()
            .max(1)
    }
}

/// Factors `n` by deterministic trial division.
///
/// `factorize(1)` yields an empty factor list. Panics if `n == 0`.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let value = n;
    let mut n = n;
    let mut factors = Vec::new();
    let mut push = |p: u64, k: u32| {
        if k > 0 {
            factors.push((p, k));
        }
    };

    let mut k = 0;
    while n % 2 == 0 {
        n /= 2;
        k += 1;
    }
    push(2, k);

    let mut p = 3;
    while p <= n / p {
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        push(p, k);
        p += 2;
    }
    if n > 1 {
        push(n, 1);
    }
    Factorization { value, factors }
}

/// Product of the distinct prime factors of `n`; `radical(1) == 1`.
pub fn radical(n: u64) -> u64 {
    assert!(n >= 1, "radical requires n >= 1");
    factorize(n).primes().product::<u64>().max(1)
}

/// Euler's totient: the number of `1 <= k <= n` coprime to `n`.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi requires n >= 1");
    let mut phi = n;
    for p in factorize(n).primes() {
        phi = phi / p * (p - 1);
    }
    phi
}

/// All divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors requires n >= 1");
    let mut out = vec![1u64];
    for &(p, k) in factorize(n).factors() {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..k {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// True when no square of a prime divides `n`.
pub fn is_squarefree(n: u64) -> bool {
    assert!(n >= 1, "is_squarefree requires n >= 1");
    factorize(n).factors().iter().all(|&(_, k)| k == 1)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "mod_pow requires a positive modulus");
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin primality test, valid for all 64-bit inputs.
///
/// The first twelve primes are a proven witness set below 3.3 * 10^24, which
/// covers the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least `k >= 1` with `e^k = 1 (mod d)`. `mult_order(e, 1) == 1`.
///
/// Panics unless `gcd(e, d) == 1` (the order is undefined otherwise).
/// Computed by shrinking `phi(d)` one prime factor at a time, so it stays
/// fast for the divisor sums this crate evaluates.
pub fn mult_order(e: u64, d: u64) -> u64 {
    assert!(e >= 1 && d >= 1, "mult_order requires positive arguments");
    assert!(
        gcd(e, d) == 1,
        "mult_order requires gcd(e, d) = 1, got e={e}, d={d}"
    );
    if d == 1 {
        return 1;
    }
    let mut order = euler_phi(d);
    for p in factorize(order).primes().collect::<Vec<_>>() {
        while order % p == 0 && mod_pow(e, order / p, d) == 1 {
            order /= p;
        }
    }
    order
}

/// Decides `base^e > n` without materializing `base^e` when a bit-length
/// argument already settles it (`base >= 2^(bits-1)`, so `e*(bits-1)` bits
/// or more means the power exceeds `n` for sure).
fn pow_exceeds(base: &BigUint, e: u32, n: &BigUint) -> bool {
    let bits = base.bits();
    if bits > 1 && u64::from(e) * (bits - 1) >= n.bits() {
        return true;
    }
    bits > 0 && base.pow(e) > *n
}

/// Floor of the real `e`-th root of `n`, for `e >= 2`.
///
/// A fast seed comes from `BigUint::nth_root`; the result is then adjusted by
/// exact integer comparison so the returned value always satisfies
/// `r^e <= n < (r+1)^e` regardless of how the seed was produced.
pub fn integer_root(n: &BigUint, e: u32) -> BigUint {
    assert!(e >= 2, "integer_root requires e >= 2");
    if n.is_zero() {
        return BigUint::zero();
    }
    let mut root = n.nth_root(e);
    while pow_exceeds(&root, e, n) {
        root -= 1u32;
    }
    while !pow_exceeds(&(&root + 1u32), e, n) {
        root += 1u32;
    }
    root
}

/// The exact `e`-th root of `n` when `n` is a perfect `e`-th power.
pub fn exact_eth_root(n: &BigUint, e: u32) -> Option<BigUint> {
    let root = integer_root(n, e);
    if root.pow(e) == *n {
        Some(root)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).factors().is_empty());
        assert_eq!(factorize(12).factors(), &[(2, 2), (3, 1)]);
        // 8532241 = 2921^2 and 2921 = 23 * 127
        assert_eq!(2921u64 * 2921, 8532241);
        assert_eq!(factorize(8532241).factors(), &[(23, 2), (127, 2)]);
    }

    #[test]
    #[should_panic(expected = "n >= 1")]
    fn factorize_rejects_zero() {
        factorize(0);
    }

    #[test]
    fn factorize_reconstructs() {
        for n in 1..10_000u64 {
            let f = factorize(n);
            assert_eq!(f.reconstruct(), n);
            assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.primes().all(is_prime));
        }
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(1), 1);
        assert_eq!(radical(4), 2);
        assert_eq!(radical(12), 6);
    }

    #[test]
    fn euler_phi_examples() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(3), 2);
        assert_eq!(euler_phi(10), 4);
    }

    #[test]
    fn euler_phi_matches_coprime_count() {
        for n in 1..1000u64 {
            let count = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
            assert_eq!(euler_phi(n), count, "phi({n})");
        }
    }

    #[test]
    fn divisors_examples() {
        assert_eq!(divisors(3), vec![1, 3]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(6));
        assert!(!is_squarefree(4));
        assert!(is_squarefree(1));
    }

    #[test]
    fn mult_order_examples() {
        assert_eq!(mult_order(2, 1), 1);
        assert_eq!(mult_order(2, 3), 2);
        assert_eq!(mult_order(2, 5), 4);
    }

    #[test]
    #[should_panic(expected = "gcd")]
    fn mult_order_rejects_non_coprime() {
        mult_order(2, 4);
    }

    #[test]
    fn mult_order_matches_iteration() {
        for d in 1..=200u64 {
            for e in 1..=50u64 {
                if gcd(e, d) != 1 {
                    continue;
                }
                let k = mult_order(e, d);
                assert_eq!(mod_pow(e, k, d), 1 % d, "e={e} d={d}");
                // no smaller exponent works
                let mut cur = 1 % d;
                for j in 1..k {
                    cur = cur * e % d;
                    assert_ne!(cur, 1 % d, "e={e} d={d} j={j}");
                }
            }
        }
    }

    #[test]
    fn integer_root_examples() {
        assert_eq!(integer_root(&BigUint::from(0u32), 2), BigUint::from(0u32));
        assert_eq!(
            integer_root(&BigUint::from(6561u32), 2),
            BigUint::from(81u32)
        );
        assert_eq!(integer_root(&BigUint::from(10u32), 2), BigUint::from(3u32));
    }

    #[test]
    #[should_panic(expected = "e >= 2")]
    fn integer_root_rejects_small_exponent() {
        integer_root(&BigUint::from(4u32), 1);
    }

    #[test]
    fn integer_root_brackets() {
        for n in 0..10_000u64 {
            let big = BigUint::from(n);
            for e in 2..=6u32 {
                let r = integer_root(&big, e);
                assert!(r.pow(e) <= big);
                assert!((&r + 1u32).pow(e) > big);
            }
        }
    }

    #[test]
    fn exact_eth_root_examples() {
        assert_eq!(
            exact_eth_root(&BigUint::from(49u32), 2),
            Some(BigUint::from(7u32))
        );
        assert_eq!(
            exact_eth_root(&BigUint::from(8532241u64), 2),
            Some(BigUint::from(2921u32))
        );
        assert_eq!(exact_eth_root(&BigUint::from(2u32), 2), None);
    }

    #[test]
    fn exact_eth_root_round_trips() {
        for m in 0..=500u32 {
            for e in 2..=5u32 {
                let n = BigUint::from(m).pow(e);
                assert_eq!(exact_eth_root(&n, e), Some(BigUint::from(m)));
            }
        }
    }

    #[test]
    fn huge_exponents_stay_cheap() {
        // the bracket checks must not materialize 2^(10^6)
        assert_eq!(
            integer_root(&BigUint::from(2u32), 1_000_000),
            BigUint::from(1u32)
        );
        assert_eq!(exact_eth_root(&BigUint::from(2u32), 1_000_000), None);
        let n = BigUint::from(3u32).pow(41);
        assert_eq!(exact_eth_root(&n, 41), Some(BigUint::from(3u32)));
        assert_eq!(exact_eth_root(&n, 1_000_000), None);
    }

    #[test]
    fn exact_root_near_u64_boundary() {
        // values around 2^63 must be decided exactly, never by a float
        let m = BigUint::from(3_037_000_499u64); // floor(sqrt(2^63))
        let sq = &m * &m;
        assert_eq!(exact_eth_root(&sq, 2), Some(m.clone()));
        assert_eq!(exact_eth_root(&(&sq + 1u32), 2), None);
        assert_eq!(integer_root(&(&sq - 1u32), 2), &m - 1u32);
    }

    #[test]
    fn primality_small_and_known() {
        let primes: Vec<u64> = (0..100).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![
                2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
                83, 89, 97
            ]
        );
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(!is_prime(561)); // Carmichael
        assert!(is_prime(2_147_483_647)); // 2^31 - 1
        assert!(is_prime(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime(18_446_744_073_709_551_615)); // u64::MAX = 3*5*17*257*641*65537*6700417
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..10_000u64 {
            let naive = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), naive, "n={n}");
        }
    }
}
