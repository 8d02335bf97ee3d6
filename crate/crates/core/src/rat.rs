//! Rational numbers and the small integer helpers shared by the crate.

use alloc::vec::Vec;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, always kept in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn big(n: BigInt) -> Rat {
    Rat::from_integer(n)
}

/// `n / d`, panicking on a zero denominator.
pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn zeros(n: usize) -> Vec<Rat> {
    (0..n).map(|_| Rat::zero()).collect()
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Rat> {
    let mut v = zeros(n);
    v[i] = Rat::one();
    v
}

pub fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| int(x)).collect()
}

/// `p`-adic valuation of a nonzero integer.
pub fn ord_int(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// `p`-adic valuation of a rational; `None` for zero.
pub fn ord(x: &Rat, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(ord_int(x.numer(), p) as i64 - ord_int(x.denom(), p) as i64)
}

/// Splits a nonzero integer as `p^k · u` with `p ∤ u`.
pub fn split_prime(n: &BigInt, p: u64) -> (u32, BigInt) {
    let k = ord_int(n, p);
    (k, n / BigInt::from(p).pow(k))
}

/// Least common multiple of the denominators of `values` (1 when empty).
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Least nonnegative residue of `a` modulo `m > 0`.
pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = modulo(a, m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(modulo(&e.x, m))
    } else {
        None
    }
}

/// Reduces a `p`-integral rational modulo `m = p^k`.
pub fn reduce_mod(x: &Rat, m: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse(x.denom(), m)?;
    Some(modulo(&(x.numer() * inv), m))
}

/// Max-norm height of an integer vector.
pub fn height(v: &[i64]) -> u64 {
    v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

/// Floor of a rational as an integer.
pub fn floor(x: &Rat) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

pub fn sign(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// 64-bit value of a small integer, if it fits.
pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}
