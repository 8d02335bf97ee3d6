//! Isotropy of rational quadratic forms over the completions of Q.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::hilbert::{hasse_invariant, hilbert_symbol, is_local_square};
use super::intpoly::IntPoly;
use super::modp::{hensel_refine, HenselPoint};
use super::primes::Place;
use crate::error::Result;
use crate::lattice::HeightVectors;
use crate::matrix::{self, Matrix};
use crate::pencil::diagonalize_congruent;
use crate::poly::Poly;
use crate::rat::{self, Rat};

/// Vectors examined by [`isotropy_witness`] before giving up.
pub const WITNESS_BUDGET: usize = 100_000;

/// Whether `xᵀ·q·x` has a nonzero zero over the completion at `v`: any
/// degenerate form is isotropic; otherwise the real place needs mixed
/// signs, and a prime place is decided by rank, discriminant `d` and Hasse
/// invariant `ε` (rank 2: `−d` a square; rank 3: `(−1, −d) = ε`; rank 4:
/// `d` not a square or `ε = (−1, −1)`; rank ≥ 5: always).
pub fn quadric_isotropic(q: &Matrix, v: Place) -> Result<bool> {
    matrix::require_symmetric(q)?;
    let n = q.rows();
    if n == 0 {
        return Ok(false);
    }
    let d = diagonalize_congruent(q)?.d.diagonal_entries();
    if d.iter().any(Zero::is_zero) {
        return Ok(true);
    }
    if v == Place::Real {
        return Ok(d.iter().any(Signed::is_positive) && d.iter().any(Signed::is_negative));
    }
    let disc = d.iter().fold(Rat::from_integer(1.into()), |acc, x| acc * x);
    let minus_one = rat::int(-1);
    Ok(match n {
        1 => false,
        2 => is_local_square(&-disc, v),
        3 => hilbert_symbol(&minus_one, &-disc, v)? == hasse_invariant(&d, v)?,
        4 => !is_local_square(&disc, v) || hasse_invariant(&d, v)? == hilbert_symbol(&minus_one, &minus_one, v)?,
        _ => true,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsotropyWitness {
    /// A nonzero rational vector with `Q(v) = 0`.
    Zero(Vec<Rat>),
    /// `Q(positive) > 0 > Q(negative)`: a real zero lies on the segment.
    SignChange { positive: Vec<Rat>, negative: Vec<Rat> },
    /// An integer vector meeting the Hensel criterion for the primitive
    /// integer multiple of `Q`.
    Hensel(HenselPoint),
}

/// A certificate of isotropy, found by a height-ordered search over
/// primitive integer vectors of height `≤ height` (at most
/// [`WITNESS_BUDGET`] vectors). `None` when the form is anisotropic or the
/// search ran out.
pub fn isotropy_witness(q: &Matrix, v: Place, height: u64) -> Result<Option<IsotropyWitness>> {
    if !quadric_isotropic(q, v)? {
        return Ok(None);
    }
    let n = q.rows();
    if let Some(k) = q.kernel().into_iter().next() {
        return Ok(Some(IsotropyWitness::Zero(scale_to_integers(&k))));
    }
    let f = IntPoly::from_poly(&Poly::quadratic(q));
    let coeffs = small_coefficients(&f, n);
    let (mut pos, mut neg): (Option<Vec<i64>>, Option<Vec<i64>>) = (None, None);
    let mut hensel: Option<HenselPoint> = None;
    let mut seen = 0;
    'search: for h in 1..=height {
        for x in HeightVectors::primitive(n, h) {
            seen += 1;
            if seen > WITNESS_BUDGET {
                break 'search;
            }
            let value = match &coeffs {
                Some(c) => quadratic_i128(c, &x).map(BigInt::from),
                None => None,
            }
            .unwrap_or_else(|| f.eval(&bigs(&x)));
            if value.is_zero() {
                return Ok(Some(IsotropyWitness::Zero(rat::ints(&x))));
            }
            match v {
                Place::Real => {
                    let slot = if value.is_positive() { &mut pos } else { &mut neg };
                    slot.get_or_insert(x);
                }
                Place::Prime(p) => {
                    if hensel.is_none() {
                        hensel = HenselPoint::check(&f, &bigs(&x), p);
                        if hensel.is_some() {
                            break 'search;
                        }
                    }
                }
            }
        }
    }
    Ok(match (hensel, pos, neg) {
        (Some(hp), _, _) => Some(IsotropyWitness::Hensel(hp)),
        (None, Some(a), Some(b)) => Some(IsotropyWitness::SignChange {
            positive: rat::ints(&a),
            negative: rat::ints(&b),
        }),
        _ => None,
    })
}

/// Refines a Hensel witness to `Q(v) ≡ 0 (mod p^target)`.
pub fn lift_isotropic(q: &Matrix, w: &HenselPoint, target: u32) -> Vec<BigInt> {
    hensel_refine(&IntPoly::from_poly(&Poly::quadratic(q)), w, target)
}

fn bigs(x: &[i64]) -> Vec<BigInt> {
    x.iter().map(|&v| BigInt::from(v)).collect()
}

fn scale_to_integers(v: &[Rat]) -> Vec<Rat> {
    let l = Rat::from_integer(rat::denominator_lcm(v.iter()));
    v.iter().map(|x| x * &l).collect()
}

/// Upper-triangular `i64` coefficients `c[i][j]` (`i ≤ j`) of a quadratic
/// integer polynomial, when they all fit.
fn small_coefficients(f: &IntPoly, n: usize) -> Option<Vec<Vec<i64>>> {
    let mut c = alloc::vec![alloc::vec![0i64; n]; n];
    let poly = f.to_poly();
    for (e, coeff) in poly.terms() {
        let idx: Vec<usize> = (0..n).flat_map(|i| core::iter::repeat_n(i, e[i] as usize)).collect();
        c[idx[0]][idx[1]] = coeff.to_integer().to_i64()?;
    }
    Some(c)
}

fn quadratic_i128(c: &[Vec<i64>], x: &[i64]) -> Option<i128> {
    let mut acc: i128 = 0;
    for i in 0..x.len() {
        for j in i..x.len() {
            if c[i][j] != 0 {
                let t = (c[i][j] as i128).checked_mul(x[i] as i128)?.checked_mul(x[j] as i128)?;
                acc = acc.checked_add(t)?;
            }
        }
    }
    Some(acc)
}
