//! Integer-point enumeration: height-ordered vectors, primitive normals,
//! and exact integer roots of univariate integer polynomials.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::{self, Rat};

/// Integer vectors of dimension `dim` with max-norm exactly `height`, in
/// lexicographic order of the coordinate tuple.
#[derive(Clone, Debug)]
pub struct HeightVectors {
    height: i64,
    cur: Option<Vec<i64>>,
    primitive_only: bool,
}

impl HeightVectors {
    pub fn new(dim: usize, height: u64) -> Self {
        let h = height as i64;
        HeightVectors {
            height: h,
            cur: if dim == 0 { None } else { Some(vec![-h; dim]) },
            primitive_only: false,
        }
    }

    /// Primitive vectors whose first nonzero coordinate is positive, one per
    /// line through the origin.
    pub fn primitive(dim: usize, height: u64) -> Self {
        let mut it = Self::new(dim, height);
        it.primitive_only = true;
        it
    }

    fn accept(&self, v: &[i64]) -> bool {
        if rat::height(v) as i64 != self.height {
            return false;
        }
        if !self.primitive_only {
            return true;
        }
        match v.iter().find(|&&x| x != 0) {
            Some(&first) if first > 0 => v.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1,
            _ => false,
        }
    }

    fn advance(&mut self) {
        let h = self.height;
        let Some(v) = self.cur.as_mut() else { return };
        for i in (0..v.len()).rev() {
            if v[i] < h {
                v[i] += 1;
                for x in v.iter_mut().skip(i + 1) {
                    *x = -h;
                }
                return;
            }
        }
        self.cur = None;
    }
}

impl Iterator for HeightVectors {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        loop {
            let v = self.cur.clone()?;
            self.advance();
            if self.accept(&v) {
                return Some(v);
            }
        }
    }
}

/// All integer vectors of height `1..=max_height`, height by height
/// (the origin first when `with_origin`).
pub fn by_height(dim: usize, max_height: u64, with_origin: bool) -> impl Iterator<Item = Vec<i64>> {
    let origin = with_origin.then(|| vec![0; dim]);
    origin
        .into_iter()
        .chain((1..=max_height).flat_map(move |h| HeightVectors::new(dim, h)))
}

/// Integers `w` with `lo < m·w < hi` (open) or `lo ≤ m·w ≤ hi` (closed).
pub fn multiples_in(lo: &Rat, hi: &Rat, m: &BigInt, open: bool) -> (BigInt, BigInt) {
    let mr = Rat::from_integer(m.clone());
    let a = lo / &mr;
    let b = hi / &mr;
    let first = if open { rat::floor(&a) + 1 } else { ceil(&a) };
    let last = if open { ceil(&b) - 1 } else { rat::floor(&b) };
    (first, last)
}

pub fn ceil(x: &Rat) -> BigInt {
    -rat::floor(&-x)
}

/// Evaluates an integer polynomial given by coefficients, low degree first.
pub fn horner(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn trim(coeffs: &[BigInt]) -> &[BigInt] {
    let len = coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |p| p + 1);
    &coeffs[..len]
}

fn derivative(coeffs: &[BigInt]) -> Vec<BigInt> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect()
}

fn sign_at(coeffs: &[BigInt], x: &BigInt) -> i32 {
    rat::sign(&horner(coeffs, x))
}

/// Integer breakpoints `s` splitting `[lo, hi]` into runs `[.., s-1]`,
/// `[s, ..]` on which `coeffs` is monotone: every `x` where the sign of the
/// derivative differs from its sign at `x - 1`.
fn monotone_breaks(coeffs: &[BigInt], lo: &BigInt, hi: &BigInt) -> Vec<BigInt> {
    let c = trim(coeffs);
    if c.len() <= 2 {
        return Vec::new();
    }
    let d = derivative(c);
    let mut breaks = Vec::new();
    let segs = segments(&monotone_breaks(&d, lo, hi), lo, hi);
    for (k, (a, b)) in segs.iter().enumerate() {
        if k > 0 && sign_at(&d, &(a - 1)) != sign_at(&d, a) {
            breaks.push(a.clone());
        }
        // d is monotone here, so its sign changes at most through one zero.
        let sa = sign_at(&d, a);
        if sa == sign_at(&d, b) {
            continue;
        }
        let (mut l, mut r) = (a.clone(), b.clone());
        while l < r {
            let mid: BigInt = (&l + &r).div_floor(&BigInt::from(2));
            if sign_at(&d, &mid) == sa {
                l = mid + 1;
            } else {
                r = mid;
            }
        }
        if sign_at(&d, &l) == 0 && &l < b {
            breaks.push(&l + 1);
        }
        breaks.push(l);
    }
    breaks.sort();
    breaks.dedup();
    breaks
}

fn segments(breaks: &[BigInt], lo: &BigInt, hi: &BigInt) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let mut start = lo.clone();
    for b in breaks {
        if b > &start && b <= hi {
            out.push((start.clone(), b - 1));
            start = b.clone();
        }
    }
    if &start <= hi {
        out.push((start, hi.clone()));
    }
    out
}

/// All integer roots in `[lo, hi]` of a nonzero integer polynomial
/// (coefficients low degree first), ascending. Exact: the interval is cut
/// into monotone runs and each run is bisected.
pub fn integer_roots(coeffs: &[BigInt], lo: &BigInt, hi: &BigInt) -> Vec<BigInt> {
    let c = trim(coeffs);
    if c.len() <= 1 || lo > hi {
        return Vec::new();
    }
    let mut roots = Vec::new();
    for (a, b) in segments(&monotone_breaks(c, lo, hi), lo, hi) {
        let sa = sign_at(c, &a);
        let sb = sign_at(c, &b);
        if sa == 0 {
            roots.push(a.clone());
            continue;
        }
        if sb == 0 {
            roots.push(b.clone());
            continue;
        }
        if sa == sb {
            continue;
        }
        let (mut l, mut r) = (a, b);
        while &r - &l > BigInt::one() {
            let mid: BigInt = (&l + &r).div_floor(&BigInt::from(2));
            let s = sign_at(c, &mid);
            if s == 0 {
                l = mid.clone();
                r = mid;
                break;
            }
            if s == sa {
                l = mid;
            } else {
                r = mid;
            }
        }
        if horner(c, &l).is_zero() {
            roots.push(l);
        } else if horner(c, &r).is_zero() {
            roots.push(r);
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Integer polynomial coefficients of a univariate rational polynomial
/// after clearing denominators (the zero set is unchanged).
pub fn clear_denominators(coeffs: &[Rat]) -> Vec<BigInt> {
    let l = rat::denominator_lcm(coeffs);
    coeffs
        .iter()
        .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
        .collect()
}

pub fn abs_big(x: &BigInt) -> BigInt {
    x.abs()
}
