use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::target::LocalTarget;
use crate::cubic::CubicForm;
use crate::error::{check_dim, Error, Result};
use crate::local::Place;
use crate::poly::Poly;
use crate::rat::{self, Rat};

/// A common integral approximation `a` of the prime-place targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtShift {
    pub a: Vec<BigInt>,
    /// `Π p^{r_p}`.
    pub m: BigInt,
    /// `(p, r_p)` in increasing order of `p`.
    pub exponents: Vec<(u64, u32)>,
}

/// Solves `a ≡ target (mod p^r)` componentwise for all prime targets, with
/// `a` the least nonnegative residue modulo `Π p^r`. The exponent of `p` in
/// `m` is `min_i ord_p(a_i − target_i)`, capped at the requested `r`.
/// Repeated primes must agree and are merged at the larger precision.
pub fn crt_shift(targets: &[LocalTarget], n: usize) -> Result<CrtShift> {
    let mut merged: Vec<(u64, u32, Vec<BigInt>)> = Vec::new();
    for t in targets {
        let Place::Prime(p) = t.place else { continue };
        check_dim(n, t.point.len())?;
        let r = t.exponent().ok_or_else(|| Error::Precondition("prime target without an exponent".into()))?;
        let modulus = num_traits::pow(BigInt::from(p), r as usize);
        let residues = t
            .point
            .iter()
            .map(|x| rat::reduce_mod(x, &modulus).ok_or_else(|| Error::Precondition(alloc::format!("target is not {p}-integral"))))
            .collect::<Result<Vec<_>>>()?;
        match merged.iter_mut().find(|(q, _, _)| *q == p) {
            Some((_, r0, res0)) => {
                let low = num_traits::pow(BigInt::from(p), (*r0).min(r) as usize);
                if res0.iter().zip(&residues).any(|(u, v)| u.mod_floor(&low) != v.mod_floor(&low)) {
                    return Err(Error::Precondition(alloc::format!("inconsistent targets at {p}")));
                }
                if r > *r0 {
                    *r0 = r;
                    *res0 = residues;
                }
            }
            None => merged.push((p, r, residues)),
        }
    }
    merged.sort_by_key(|(p, _, _)| *p);
    let mut a = alloc::vec![BigInt::zero(); n];
    let mut modulus = BigInt::one();
    for (p, r, res) in &merged {
        let pr = num_traits::pow(BigInt::from(*p), *r as usize);
        let inv = rat::mod_inverse(&modulus.mod_floor(&pr), &pr).expect("coprime moduli");
        for (ai, ri) in a.iter_mut().zip(res) {
            let k = ((ri - &*ai) * &inv).mod_floor(&pr);
            *ai += &modulus * k;
        }
        modulus *= pr;
    }
    let mut m = BigInt::one();
    let mut exponents = Vec::new();
    for (p, r, res) in &merged {
        let achieved = a
            .iter()
            .zip(res)
            .filter_map(|(ai, ti)| {
                let d = ai - ti;
                (!d.is_zero()).then(|| rat::ord_int(&d, *p))
            })
            .min()
            .map_or(*r, |o| o.min(*r));
        m *= num_traits::pow(BigInt::from(*p), achieved as usize);
        exponents.push((*p, achieved));
    }
    Ok(CrtShift { a, m, exponents })
}

/// `f(x) = C(x + a)`; its cubic part is `C` itself.
pub fn shifted_poly(c: &CubicForm, a: &[BigInt]) -> Result<Poly> {
    let n = c.nvars();
    check_dim(n, a.len())?;
    let images: Vec<Poly> = (0..n)
        .map(|i| &Poly::var(n, i) + &Poly::constant(n, Rat::from_integer(a[i].clone())))
        .collect();
    let cp = c.to_poly();
    let f = cp.substitute(&images)?;
    debug_assert_eq!(f.homogeneous_part(3), cp);
    Ok(f)
}

/// The least positive `D ≡ 1 (mod m^t)` with `D > 2/ε`.
pub fn choose_scaling(m: &BigInt, t: u32, eps: &Rat) -> Result<BigInt> {
    if eps <= &Rat::zero() || m <= &BigInt::zero() {
        return Err(Error::Precondition("need ε > 0 and m ≥ 1".into()));
    }
    let mt = num_traits::pow(m.clone(), t as usize);
    let w = Rat::from_integer(BigInt::from(2)) / eps - Rat::one();
    if w < Rat::zero() {
        return Ok(BigInt::one());
    }
    let k = rat::floor(&(w / Rat::from_integer(mt.clone()))) + 1;
    Ok(BigInt::one() + mt * k)
}
