//! Integer polynomials for congruence work.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::Poly;
use crate::rat::{self, Rat};

/// The primitive integer multiple of a rational polynomial: denominators
/// cleared, content removed, sign kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl IntPoly {
    pub fn from_poly(p: &Poly) -> IntPoly {
        let lcm = rat::denominator_lcm(p.terms().map(|(_, c)| c));
        let mut terms: Vec<(Vec<u32>, BigInt)> = p
            .terms()
            .map(|(e, c)| (e.clone(), (c * Rat::from_integer(lcm.clone())).to_integer()))
            .collect();
        let g = terms.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for (_, c) in terms.iter_mut() {
                *c /= &g;
            }
        }
        IntPoly { nvars: p.nvars(), terms }
    }

    /// Same polynomial, which must have integer coefficients.
    pub(crate) fn from_poly_unscaled(p: &Poly) -> IntPoly {
        let terms = p
            .terms()
            .map(|(e, c)| {
                debug_assert!(c.is_integer());
                (e.clone(), c.to_integer())
            })
            .collect();
        IntPoly { nvars: p.nvars(), terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Value modulo `m`, in `[0, m)`.
    pub fn eval_mod(&self, x: &[BigInt], m: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.mod_floor(m);
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = (t * xi.modpow(&BigInt::from(k), m)).mod_floor(m);
                }
            }
            acc = (acc + t).mod_floor(m);
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> IntPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[var] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[var] -= 1;
                (e2, c * BigInt::from(e[var]))
            })
            .collect();
        IntPoly { nvars: self.nvars, terms }
    }

    pub fn gradient(&self) -> Vec<IntPoly> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    pub fn reduce(&self, p: u64) -> ModPoly {
        let pb = BigInt::from(p);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.mod_floor(&pb).to_u64().expect("residue below p")))
            .filter(|(_, c)| *c != 0)
            .collect();
        ModPoly { p, terms }
    }

    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), Rat::from_integer(c.clone()));
        }
        p
    }

    /// Largest absolute coefficient.
    pub fn max_coefficient(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c.abs()).max().unwrap_or_default()
    }
}

/// An integer polynomial reduced modulo a prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    p: u64,
    terms: Vec<(Vec<u32>, u64)>,
}

impl ModPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        let p = self.p;
        let mut acc: u64 = 0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (&xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = ((t as u128 * super::primes::pow_mod(xi, k as u64, p) as u128) % p as u128) as u64;
                }
            }
            acc = ((acc as u128 + t as u128) % p as u128) as u64;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::frac;

    #[test]
    fn primitive_multiple() {
        let mut p = Poly::zero(2);
        p.add_term(alloc::vec![3, 0], frac(1, 2));
        p.add_term(alloc::vec![0, 3], frac(-3, 4));
        let f = IntPoly::from_poly(&p);
        // 2x1³ − 3x2³
        assert_eq!(f.eval(&[BigInt::from(1), BigInt::from(1)]), BigInt::from(-1));
        assert_eq!(f.reduce(5).eval(&[1, 1]), 4);
        assert_eq!(f.eval_mod(&[BigInt::from(1), BigInt::from(1)], &BigInt::from(5)), BigInt::from(4));
    }
}
