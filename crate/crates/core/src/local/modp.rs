//! Solutions modulo `p` and their lifts to `p^k`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::intpoly::IntPoly;
use super::primes::is_prime;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rat;

/// Default bound on `p^n` for exhaustive enumeration.
pub const DEFAULT_MODP_BUDGET: u128 = 1_000_000;

/// A solution of `f ≡ 0 (mod p^k)`, reduced into `[0, p^k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPSolution {
    pub p: u64,
    pub k: u32,
    pub point: Vec<BigInt>,
    /// Some partial derivative is a unit mod `p`.
    pub nonsingular: bool,
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub(crate) fn grid_size(p: u64, n: usize, budget: u128) -> Result<u128> {
    let mut size: u128 = 1;
    for _ in 0..n {
        size = size.saturating_mul(p as u128);
    }
    if size > budget {
        return Err(Error::BudgetExceeded { needed: size, budget });
    }
    Ok(size)
}

/// Visits every point of `(Z/p)^n` in lexicographic order with whether it
/// is a root and whether it is a nonsingular one; stops when `visit` says so.
pub(crate) fn scan_mod_p(f: &IntPoly, p: u64, budget: u128, mut visit: impl FnMut(&[u64], bool) -> bool) -> Result<()> {
    let n = f.nvars();
    grid_size(p, n, budget)?;
    let fp = f.reduce(p);
    let grad: Vec<_> = f.gradient().iter().map(|g| g.reduce(p)).collect();
    let mut x = vec![0u64; n];
    loop {
        if fp.eval(&x) == 0 {
            let nonsingular = grad.iter().any(|g| g.eval(&x) != 0);
            if visit(&x, nonsingular) {
                return Ok(());
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            x[i] += 1;
            if x[i] < p {
                break;
            }
            x[i] = 0;
        }
    }
}

/// All solutions of `f ≡ 0 (mod p)` in lexicographic order; `f` is taken
/// as its primitive integer multiple. Fails when `p^n` exceeds `budget`.
pub fn solutions_mod_p(f: &Poly, p: u64, require_nonsingular: bool, budget: u128) -> Result<Vec<ModPSolution>> {
    check_prime(p)?;
    let g = IntPoly::from_poly(f);
    let mut out = Vec::new();
    scan_mod_p(&g, p, budget, |x, nonsingular| {
        if nonsingular || !require_nonsingular {
            out.push(ModPSolution {
                p,
                k: 1,
                point: x.iter().map(|&v| BigInt::from(v)).collect(),
                nonsingular,
            });
        }
        false
    })?;
    Ok(out)
}

fn pow(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Lifts a nonsingular solution to `p^target_k` by Newton steps on the
/// lowest-index coordinate with a unit partial derivative, doubling the
/// exponent each step.
pub fn hensel_lift(f: &Poly, s: &ModPSolution, target_k: u32) -> Result<ModPSolution> {
    Ok(hensel_lift_steps(f, s, target_k)?.pop().expect("at least the start"))
}

/// The start and every intermediate lift of [`hensel_lift`].
pub fn hensel_lift_steps(f: &Poly, s: &ModPSolution, target_k: u32) -> Result<Vec<ModPSolution>> {
    check_prime(s.p)?;
    let g = IntPoly::from_poly(f);
    crate::error::check_dim(g.nvars(), s.point.len())?;
    let p = s.p;
    let pb = BigInt::from(p);
    if s.k == 0 || !g.eval_mod(&s.point, &pow(p, s.k)).is_zero() {
        return Err(Error::Precondition("point is not a solution at its exponent".into()));
    }
    let grad = g.gradient();
    let var = grad
        .iter()
        .position(|d| !d.eval_mod(&s.point, &pb).is_zero())
        .ok_or_else(|| Error::Precondition("solution is singular mod p".into()))?;
    let mut cur = s.clone();
    cur.nonsingular = true;
    if target_k <= cur.k {
        let m = pow(p, target_k);
        cur.point.iter_mut().for_each(|v| *v = v.mod_floor(&m));
        cur.k = target_k;
        return Ok(vec![cur]);
    }
    let mut steps = vec![cur.clone()];
    while cur.k < target_k {
        let k = (cur.k * 2).min(target_k);
        let m = pow(p, k);
        let value = g.eval_mod(&cur.point, &m);
        let slope = grad[var].eval_mod(&cur.point, &m);
        let inv = rat::mod_inverse(&slope, &m).expect("unit partial derivative");
        let mut point = cur.point.clone();
        point[var] = (&point[var] - value * inv).mod_floor(&m);
        debug_assert!(g.eval_mod(&point, &m).is_zero());
        cur = ModPSolution { p, k, point, nonsingular: true };
        steps.push(cur.clone());
    }
    Ok(steps)
}

/// An integer point `v` with `ord_p f(v) ≥ 2e + 1`, where
/// `e = ord_p ∂_var f(v)` is the least order among the partials. Such a point
/// is congruent mod `p^{e+1}` to a nonsingular `p`-adic zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenselPoint {
    pub p: u64,
    pub point: Vec<BigInt>,
    pub var: usize,
    pub gradient_ord: u32,
    /// `None` when `f(v) = 0` exactly.
    pub value_ord: Option<u32>,
}

impl HenselPoint {
    /// Checks the criterion at `v`.
    pub fn check(f: &IntPoly, v: &[BigInt], p: u64) -> Option<HenselPoint> {
        let grad: Vec<BigInt> = f.gradient().iter().map(|d| d.eval(v)).collect();
        let (var, e) = grad
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_zero())
            .map(|(i, g)| (i, rat::ord_int(g, p)))
            .min_by_key(|&(i, e)| (e, i))?;
        let value = f.eval(v);
        let value_ord = (!value.is_zero()).then(|| rat::ord_int(&value, p));
        if value_ord.is_none_or(|o| o > 2 * e) {
            Some(HenselPoint {
                p,
                point: v.to_vec(),
                var,
                gradient_ord: e,
                value_ord,
            })
        } else {
            None
        }
    }
}

/// Refines a [`HenselPoint`] to `f(v) ≡ 0 (mod p^target)` by Newton steps
/// in its coordinate; the result is congruent to the start mod `p^{e+1}`.
pub fn hensel_refine(f: &IntPoly, h: &HenselPoint, target: u32) -> Vec<BigInt> {
    let p = h.p;
    let e = h.gradient_ord;
    let keep = pow(p, target + e + 1);
    let m = pow(p, target);
    let unit_mod = pow(p, target);
    let df = f.derivative(h.var);
    let mut v = h.point.clone();
    loop {
        let value = f.eval(&v);
        if value.is_zero() || rat::ord_int(&value, p) >= target {
            return v;
        }
        let slope = df.eval(&v);
        let pe = pow(p, e);
        let u = &slope / &pe;
        let inv = rat::mod_inverse(&u.mod_floor(&unit_mod), &unit_mod).expect("unit part");
        let t = ((value / &pe) * inv).mod_floor(&m);
        v[h.var] = (&v[h.var] - t).mod_floor(&keep);
    }
}
