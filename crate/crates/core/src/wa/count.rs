use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::target::AxisBox;
use crate::error::{check_dim, Error, Result};
use crate::lattice::{integer_roots, multiples_in};
use crate::local::IntPoly;
use crate::poly::Poly;
use crate::rat::Rat;

/// Prefixes enumerated by [`count`] before it gives up.
pub const DEFAULT_COUNT_BUDGET: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    /// The open box `|x_i − b_i| < ρ/2`.
    Box(AxisBox),
    /// The closed product `Π [lo_i, hi_i]`.
    Intervals(Vec<(Rat, Rat)>),
}

/// `N(P) = #{x ∈ P·region ∩ (mℤ)^n : ψ(x) = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountQuery {
    pub poly: Poly,
    pub region: Region,
    pub modulus: BigInt,
    pub scale: BigInt,
    pub budget: u128,
}

impl CountQuery {
    pub fn new(poly: Poly, region: Region, modulus: BigInt, scale: BigInt) -> Self {
        CountQuery {
            poly,
            region,
            modulus,
            scale,
            budget: DEFAULT_COUNT_BUDGET,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.modulus.is_positive() || !self.scale.is_positive() {
            return Err(Error::Precondition("modulus and scale must be positive".into()));
        }
        let n = self.poly.nvars();
        match &self.region {
            Region::Box(b) => {
                check_dim(n, b.center.len())?;
                AxisBox::new(b.center.clone(), b.side.clone())?;
            }
            Region::Intervals(iv) => check_dim(n, iv.len())?,
        }
        Ok(())
    }

    /// For every coordinate, the range of `w` with `m·w` inside `P·region`.
    pub fn ranges(&self) -> Result<Vec<(BigInt, BigInt)>> {
        self.validate()?;
        let p = Rat::from_integer(self.scale.clone());
        Ok(match &self.region {
            Region::Box(b) => {
                let half = &p * &b.side / Rat::from_integer(BigInt::from(2));
                b.center
                    .iter()
                    .map(|c| {
                        let mid = &p * c;
                        multiples_in(&(&mid - &half), &(&mid + &half), &self.modulus, true)
                    })
                    .collect()
            }
            Region::Intervals(iv) => iv
                .iter()
                .map(|(lo, hi)| multiples_in(&(&p * lo), &(&p * hi), &self.modulus, false))
                .collect(),
        })
    }
}

/// Exact count, enumerating all but the last coordinate and solving for it.
pub fn count(q: &CountQuery) -> Result<BigInt> {
    let ranges = q.ranges()?;
    let total = prefix_count(&ranges);
    if total > q.budget {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget: q.budget,
        });
    }
    Ok(match ranges.len() {
        0 => BigInt::from(u8::from(q.poly.eval(&[])?.is_zero())),
        1 => Sliced::new(&IntPoly::from_poly(&q.poly), &q.modulus).count_last(&[], &ranges[0]),
        _ => count_range(q, &ranges, &ranges[0].0, &ranges[0].1),
    })
}

/// The part of [`count`] whose first coordinate `w_1` lies in `[lo, hi]`,
/// for sharding. Requires at least two variables.
pub fn count_range(q: &CountQuery, ranges: &[(BigInt, BigInt)], lo: &BigInt, hi: &BigInt) -> BigInt {
    let n = ranges.len();
    assert!(n >= 2, "sharded counting needs two or more variables");
    let sliced = Sliced::new(&IntPoly::from_poly(&q.poly), &q.modulus);
    let mut sub: Vec<(BigInt, BigInt)> = ranges[..n - 1].to_vec();
    sub[0] = (lo.clone(), hi.clone());
    let mut total = BigInt::zero();
    let mut odo = Odometer::new(&sub);
    while let Some(w) = odo.current() {
        total += sliced.count_last(w, &ranges[n - 1]);
        odo.advance();
    }
    total
}

pub(crate) fn range_len(r: &(BigInt, BigInt)) -> u128 {
    if r.0 > r.1 {
        0
    } else {
        (&r.1 - &r.0 + 1u8).to_u128().unwrap_or(u128::MAX)
    }
}

/// Number of prefixes `(w_1, …, w_{n−1})`; one for `n ≤ 1`.
pub fn prefix_count(ranges: &[(BigInt, BigInt)]) -> u128 {
    let k = ranges.len().saturating_sub(1);
    ranges[..k].iter().fold(1u128, |acc, r| acc.saturating_mul(range_len(r)))
}

/// A polynomial viewed in its last variable, with coefficients as integer
/// polynomials in the others.
pub(crate) struct Sliced {
    n: usize,
    modulus: BigInt,
    coeffs: Vec<IntPoly>,
}

impl Sliced {
    pub(crate) fn new(f: &IntPoly, modulus: &BigInt) -> Self {
        let n = f.nvars();
        let coeffs = if n == 0 {
            Vec::new()
        } else {
            f.to_poly()
                .coefficients_in(n - 1)
                .iter()
                .map(IntPoly::from_poly_unscaled)
                .collect()
        };
        Sliced {
            n,
            modulus: modulus.clone(),
            coeffs,
        }
    }

    /// Coefficients, low degree first, of `g(w) = f(m·prefix, m·w)`.
    pub(crate) fn univariate(&self, prefix: &[BigInt]) -> Vec<BigInt> {
        let mut x: Vec<BigInt> = prefix.iter().map(|w| w * &self.modulus).collect();
        x.push(BigInt::zero());
        debug_assert_eq!(x.len(), self.n);
        let mut mk = BigInt::one();
        self.coeffs
            .iter()
            .map(|c| {
                let v = c.eval(&x) * &mk;
                mk *= &self.modulus;
                v
            })
            .collect()
    }

    /// Last coordinates `w` in `range` with `g(w) = 0`, or `None` when `g`
    /// vanishes identically.
    pub(crate) fn last_roots(&self, prefix: &[BigInt], range: &(BigInt, BigInt)) -> Option<Vec<BigInt>> {
        let g = self.univariate(prefix);
        if g.iter().all(Zero::is_zero) {
            return None;
        }
        Some(integer_roots(&g, &range.0, &range.1))
    }

    pub(crate) fn count_last(&self, prefix: &[BigInt], range: &(BigInt, BigInt)) -> BigInt {
        match self.last_roots(prefix, range) {
            Some(r) => BigInt::from(r.len()),
            None if range.0 > range.1 => BigInt::zero(),
            None => &range.1 - &range.0 + 1u8,
        }
    }
}

/// Lexicographic enumeration of a product of integer ranges.
pub(crate) struct Odometer<'a> {
    ranges: &'a [(BigInt, BigInt)],
    cur: Option<Vec<BigInt>>,
}

impl<'a> Odometer<'a> {
    pub(crate) fn new(ranges: &'a [(BigInt, BigInt)]) -> Self {
        let cur = ranges
            .iter()
            .all(|(lo, hi)| lo <= hi)
            .then(|| ranges.iter().map(|(lo, _)| lo.clone()).collect());
        Odometer { ranges, cur }
    }

    pub(crate) fn current(&self) -> Option<&[BigInt]> {
        self.cur.as_deref()
    }

    pub(crate) fn advance(&mut self) {
        let Some(v) = self.cur.as_mut() else { return };
        for i in (0..v.len()).rev() {
            if v[i] < self.ranges[i].1 {
                v[i] += 1u8;
                for j in i + 1..v.len() {
                    v[j] = self.ranges[j].0.clone();
                }
                return;
            }
        }
        self.cur = None;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};

    fn x1_plus_x2() -> Poly {
        &Poly::var(2, 0) + &Poly::var(2, 1)
    }

    fn square() -> Region {
        Region::Intervals(alloc::vec![(int(-1), int(1)), (int(-1), int(1))])
    }

    #[test]
    fn count_examples() {
        let q = CountQuery::new(x1_plus_x2(), square(), BigInt::one(), BigInt::from(10));
        assert_eq!(count(&q).unwrap(), BigInt::from(21));
        let q2 = CountQuery::new(x1_plus_x2(), square(), BigInt::from(2), BigInt::from(10));
        assert_eq!(count(&q2).unwrap(), BigInt::from(11));
        let q3 = CountQuery::new(Poly::one(2), square(), BigInt::one(), BigInt::from(10));
        assert_eq!(count(&q3).unwrap(), BigInt::zero());
        let q4 = CountQuery::new(Poly::zero(2), square(), BigInt::one(), BigInt::from(10));
        assert_eq!(count(&q4).unwrap(), BigInt::from(441));
    }

    #[test]
    fn open_box_excludes_boundary() {
        let b = AxisBox::new(alloc::vec![int(0)], frac(1, 2)).unwrap();
        let q = CountQuery::new(Poly::zero(1), Region::Box(b), BigInt::one(), BigInt::from(4));
        // |x| < 1 at P = 4
        assert_eq!(count(&q).unwrap(), BigInt::one());
    }

    #[test]
    fn budget_is_enforced() {
        let mut q = CountQuery::new(x1_plus_x2(), square(), BigInt::one(), BigInt::from(10));
        q.budget = 5;
        assert!(matches!(count(&q), Err(Error::BudgetExceeded { needed: 21, budget: 5 })));
    }

    #[test]
    fn shards_partition_the_count() {
        let q = CountQuery::new(x1_plus_x2(), square(), BigInt::one(), BigInt::from(10));
        let r = q.ranges().unwrap();
        let a = count_range(&q, &r, &BigInt::from(-10), &BigInt::from(-1));
        let b = count_range(&q, &r, &BigInt::from(0), &BigInt::from(10));
        assert_eq!(a + b, BigInt::from(21));
    }
}
