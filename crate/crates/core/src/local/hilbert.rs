use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::primes::Place;
use crate::error::{Error, Result};
use crate::rat::{self, Rat};

/// `num·den`, which lies in the square class of `x`.
fn square_class_integer(x: &Rat) -> BigInt {
    x.numer() * x.denom()
}

/// `(ord_p n, n / p^ord)`.
fn split(n: &BigInt, p: u64) -> (u32, BigInt) {
    rat::split_prime(n, p)
}

fn legendre(u: &BigInt, p: u64) -> i8 {
    let pb = BigInt::from(p);
    let r = u.mod_floor(&pb).modpow(&BigInt::from((p - 1) / 2), &pb);
    if r.is_one() {
        1
    } else {
        -1
    }
}

fn residue(u: &BigInt, m: u32) -> u32 {
    let r = u.mod_floor(&BigInt::from(m));
    r.iter_u32_digits().next().unwrap_or(0)
}

/// The Hilbert symbol `(a, b)_v`: `1` iff `z² = a·x² + b·y²` has a nonzero
/// solution over the completion at `v`.
pub fn hilbert_symbol(a: &Rat, b: &Rat, v: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Precondition("Hilbert symbol of zero".into()));
    }
    let (a, b) = (square_class_integer(a), square_class_integer(b));
    let sign = |neg: bool| if neg { -1 } else { 1 };
    Ok(match v {
        Place::Real => sign(a.is_negative() && b.is_negative()),
        Place::Prime(2) => {
            let (alpha, u) = split(&a, 2);
            let (beta, w) = split(&b, 2);
            let eps = |x: &BigInt| u32::from(residue(x, 4) == 3);
            let omega = |x: &BigInt| u32::from(matches!(residue(x, 8), 3 | 5));
            let e = eps(&u) * eps(&w) + alpha * omega(&w) + beta * omega(&u);
            sign(e % 2 == 1)
        }
        Place::Prime(p) => {
            let (alpha, u) = split(&a, p);
            let (beta, w) = split(&b, p);
            let mut s = sign((alpha as u64 * beta as u64 * ((p - 1) / 2)) % 2 == 1);
            if beta % 2 == 1 {
                s *= legendre(&u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre(&w, p);
            }
            s
        }
    })
}

/// Whether a nonzero rational is a square in the completion at `v`.
pub fn is_local_square(x: &Rat, v: Place) -> bool {
    if x.is_zero() {
        return true;
    }
    let n = square_class_integer(x);
    match v {
        Place::Real => n.is_positive(),
        Place::Prime(p) => {
            let (k, u) = split(&n, p);
            k % 2 == 0 && if p == 2 { residue(&u, 8) == 1 } else { legendre(&u, p) == 1 }
        }
    }
}

/// `Π_{i<j} (a_i, a_j)_v` for a nondegenerate diagonal form.
pub fn hasse_invariant(diag: &[Rat], v: Place) -> Result<i8> {
    let mut s = 1;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            s *= hilbert_symbol(&diag[i], &diag[j], v)?;
        }
    }
    Ok(s)
}
