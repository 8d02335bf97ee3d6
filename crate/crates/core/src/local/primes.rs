use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A place of the rationals: the real place or a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Prime(u64),
}

impl Place {
    /// The place at `p`; rejects composites.
    pub fn prime(p: u64) -> Result<Place> {
        if is_prime(p) {
            Ok(Place::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn as_prime(&self) -> Option<u64> {
        match *self {
            Place::Real => None,
            Place::Prime(p) => Some(p),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => f.write_str("real"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic primality for all `u64` (trial division, then Miller–Rabin
/// with the first twelve prime bases).
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
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

pub fn primes_below(n: u64) -> Vec<u64> {
    (2..n).filter(|&p| is_prime(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_sieve() {
        let mut sieve = [true; 2000];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..2000 {
            if sieve[i] {
                for j in (i * i..2000).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (i, &s) in sieve.iter().enumerate() {
            assert_eq!(is_prime(i as u64), s, "{i}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
        assert_eq!(Place::prime(9), Err(Error::NotPrime(9)));
    }
}
