//! Per-prime nonsingular solubility of `C(x) ≡ 0`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::intpoly::IntPoly;
use super::modp::{check_prime, grid_size, hensel_lift, hensel_refine, scan_mod_p, HenselPoint, ModPSolution, DEFAULT_MODP_BUDGET};
use crate::cubic::CubicForm;
use crate::error::{Error, Result};
use crate::lattice::HeightVectors;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    /// Bound on `p^n` for exhaustive search mod `p`.
    pub budget: u128,
    /// Random points tried mod `p` when exhaustive search is over budget.
    pub samples: u64,
    pub seed: u64,
    /// Height bound for the integer search for Hensel points.
    pub height: u64,
    /// Vectors examined by that search.
    pub height_budget: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            budget: DEFAULT_MODP_BUDGET,
            samples: 100_000,
            seed: 0,
            height: 32,
            height_budget: 200_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolubilityStatus {
    Found,
    /// Exhaustive search mod `p` found no root with a unit partial
    /// derivative, and the integer search found no Hensel point.
    Refuted,
    /// Nothing found by sampling or by the integer search.
    NotFound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMethod {
    Exhaustive,
    Sampled,
    Height,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    /// A root mod `p` with some partial derivative a unit.
    UnitGradient,
    /// An integer point with `ord f(v) ≥ 2e + 1`, `e` the least order of a
    /// partial derivative.
    Hensel { gradient_ord: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeReport {
    pub p: u64,
    pub status: SolubilityStatus,
    /// How the witness was found, or the last search tried.
    pub method: SearchMethod,
    pub criterion: Option<Criterion>,
    pub witness: Option<Vec<BigInt>>,
    /// Exponent `k` and a point with `f ≡ 0 (mod p^k)` refining the witness.
    pub lift: Option<(u32, Vec<BigInt>)>,
}

/// Looks for nonsingular solutions of `C ≡ 0` at each prime: exhaustively
/// mod `p` within budget (otherwise by seeded sampling), then among small
/// integer vectors satisfying the Hensel criterion. Each witness is lifted
/// to at least `p³`.
pub fn congruence_solubility_report(c: &CubicForm, primes: &[u64], opts: &ReportOptions) -> Result<Vec<PrimeReport>> {
    primes.iter().map(|&p| prime_report(c, p, opts)).collect()
}

pub(crate) fn prime_report(c: &CubicForm, p: u64, opts: &ReportOptions) -> Result<PrimeReport> {
    check_prime(p)?;
    let poly = c.to_poly();
    let f = IntPoly::from_poly(&poly);
    let n = f.nvars();
    let found = |method, point: Vec<BigInt>| -> Result<PrimeReport> {
        let s = ModPSolution { p, k: 1, point: point.clone(), nonsingular: true };
        let lifted = hensel_lift(&poly, &s, 3)?;
        Ok(PrimeReport {
            p,
            status: SolubilityStatus::Found,
            method,
            criterion: Some(Criterion::UnitGradient),
            witness: Some(point),
            lift: Some((3, lifted.point)),
        })
    };
    let exhaustive = match grid_size(p, n, opts.budget) {
        Ok(_) => true,
        Err(Error::BudgetExceeded { .. }) => false,
        Err(e) => return Err(e),
    };
    if exhaustive {
        let mut hit = None;
        scan_mod_p(&f, p, opts.budget, |x, nonsingular| {
            if nonsingular {
                hit = Some(x.to_vec());
            }
            nonsingular
        })?;
        if let Some(x) = hit {
            return found(SearchMethod::Exhaustive, x.into_iter().map(BigInt::from).collect());
        }
    } else if let Some(x) = sample_mod_p(&f, p, opts) {
        return found(SearchMethod::Sampled, x.into_iter().map(BigInt::from).collect());
    }
    if let Some(h) = hensel_search(&f, p, opts) {
        let k = 2 * h.gradient_ord + 3;
        let lifted = hensel_refine(&f, &h, k);
        return Ok(PrimeReport {
            p,
            status: SolubilityStatus::Found,
            method: SearchMethod::Height,
            criterion: Some(Criterion::Hensel { gradient_ord: h.gradient_ord }),
            witness: Some(h.point),
            lift: Some((k, lifted)),
        });
    }
    Ok(PrimeReport {
        p,
        status: if exhaustive { SolubilityStatus::Refuted } else { SolubilityStatus::NotFound },
        method: SearchMethod::Height,
        criterion: None,
        witness: None,
        lift: None,
    })
}

fn sample_mod_p(f: &IntPoly, p: u64, opts: &ReportOptions) -> Option<Vec<u64>> {
    let fp = f.reduce(p);
    let grad: Vec<_> = f.gradient().iter().map(|g| g.reduce(p)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(p);
    let mut x = alloc::vec![0u64; f.nvars()];
    for _ in 0..opts.samples {
        x.iter_mut().for_each(|v| *v = rng.next_u64() % p);
        if fp.eval(&x) == 0 && grad.iter().any(|g| g.eval(&x) != 0) {
            return Some(x);
        }
    }
    None
}

fn hensel_search(f: &IntPoly, p: u64, opts: &ReportOptions) -> Option<HenselPoint> {
    let n = f.nvars();
    (1..=opts.height)
        .flat_map(|h| HeightVectors::primitive(n, h))
        .take(opts.height_budget as usize)
        .find_map(|x| {
            let v: Vec<BigInt> = x.iter().map(|&t| BigInt::from(t)).collect();
            HenselPoint::check(f, &v, p)
        })
}
