//! Small prime utilities: 1-based prime indexing `p_1 = 2, p_2 = 3, …`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{KronError, Result};

const TRIAL_BOUND: u64 = 10_000;

/// `p_n`, the n-th prime (1-based).
pub fn nth_prime(n: usize) -> u64 {
    assert!(n >= 1, "primes are indexed from 1");
    primal::StreamingSieve::nth_prime(n) as u64
}

/// Index `n` with `p_n = p`. `p` must be prime.
pub fn prime_index(p: u64) -> usize {
    debug_assert!(is_prime(p));
    primal::StreamingSieve::prime_pi(p as usize)
}

pub fn is_prime(n: u64) -> bool {
    primal::is_prime(n)
}

/// True when `p` is `p_1, p_3, p_5, …`.
pub fn has_odd_index(p: u64) -> bool {
    prime_index(p) % 2 == 1
}

/// Prime factorization by trial division, ascending. Stops early once the
/// remaining cofactor is prime.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n && !is_prime(n) {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Factorization of `|n|`: primes below 10⁴ are divided out first, and the
/// remaining cofactor must fit in 64 bits.
pub fn factorize(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(KronError::Domain("cannot factor zero".into()));
    }
    let mut m = n.magnitude().clone();
    let mut out = Vec::new();
    if m.to_u64().is_none() {
        for p in primal::Primes::all().map(|p| p as u64).take_while(|&p| p < TRIAL_BOUND) {
            let mut e = 0;
            while (&m % p).is_zero() {
                m /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
        }
    }
    let rest = m
        .to_u64()
        .ok_or_else(|| KronError::unsupported("factorization", format!("{n} is too large to factor")))?;
    out.extend(factorize_u64(rest));
    Ok(out)
}

/// Exponent of `p` in `n` (`n ≠ 0`).
pub fn valuation(n: &BigInt, p: u64) -> u64 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}
