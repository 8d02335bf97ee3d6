//! Sparse multivariate polynomials with rational coefficients.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::rat::Rat;

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

/// Polynomial in a fixed number of variables, stored as a map from
/// exponent vectors to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    /// The variable `x_i` (zero-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rat::one())
    }

    pub fn monomial(exps: Exponents, c: Rat) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Sums the given terms; exponent vectors must all have length `nvars`.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, Rat)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            check_dim(nvars, e.len())?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Linear form `Σ l_i x_i`.
    pub fn linear(l: &[Rat]) -> Self {
        let n = l.len();
        let mut p = Self::zero(n);
        for (i, c) in l.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    /// Quadratic form `xᵀ·M·x` of a symmetric matrix.
    pub fn quadratic(m: &crate::Matrix) -> Self {
        let n = m.rows();
        let mut p = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let c = &m[(i, j)];
                if c.is_zero() {
                    continue;
                }
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                p.add_term(e, c.clone());
            }
        }
        p
    }

    pub fn add_term(&mut self, exps: Exponents, c: Rat) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == degree)
    }

    /// Sum of the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        check_dim(self.nvars, point.len())?;
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Partial derivative with respect to `x_var`.
    pub fn derivative(&self, var: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            p.add_term(e2, c * Rat::from_integer(e[var].into()));
        }
        p
    }

    pub fn gradient(&self) -> Vec<Poly> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    /// Composition `p(q_1, …, q_n)`; every `q_i` must share one variable count.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        check_dim(self.nvars, images.len())?;
        let target = images.first().map_or(0, Poly::nvars);
        for q in images {
            check_dim(target, q.nvars)?;
        }
        // Cache powers per variable so repeated exponents are computed once.
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|q| vec![Poly::one(target), q.clone()]).collect();
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Sets `x_var = value` and keeps the variable count.
    pub fn eval_var(&self, var: usize, value: &Rat) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = core::mem::replace(&mut e2[var], 0);
            p.add_term(e2, c * num_traits::pow(value.clone(), k as usize));
        }
        p
    }

    /// Renames variables: `x_i ↦ x_{map[i]}` in a ring of `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Result<Poly> {
        check_dim(self.nvars, map.len())?;
        let mut p = Poly::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                if map[i] >= nvars {
                    return Err(Error::DimensionMismatch {
                        expected: nvars,
                        found: map[i] + 1,
                    });
                }
                e2[map[i]] += k;
            }
            p.add_term(e2, c.clone());
        }
        Ok(p)
    }

    /// Coefficients of `p` viewed as a polynomial in `x_var`: entry `k` holds
    /// the coefficient of `x_var^k`, as a polynomial free of `x_var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly> {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = core::mem::replace(&mut e2[var], 0) as usize;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    /// Division by a nonzero linear form `l`: returns `(q, r)` with
    /// `self = l·q + r`, where `r` does not involve the lowest-index variable
    /// appearing in `l`.
    pub fn div_linear(&self, l: &[Rat]) -> Result<(Poly, Poly)> {
        check_dim(self.nvars, l.len())?;
        let pivot = l
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::Precondition("division by the zero linear form".into()))?;
        let lead = l[pivot].clone();
        let divisor = Poly::linear(l);
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        // Repeatedly cancel the highest power of the pivot variable.
        while let Some(d) = rem.degree_in(pivot).filter(|&d| d > 0) {
            let top = rem.coefficients_in(pivot).swap_remove(d as usize);
            let mut shift = vec![0; self.nvars];
            shift[pivot] = d - 1;
            let step = &top * &Poly::monomial(shift, lead.recip());
            rem = &rem - &(&step * &divisor);
            quot = &quot + &step;
        }
        Ok((quot, rem))
    }

    /// Terms in graded lexicographic order (higher degree first, then
    /// larger exponent of `x1`, then of `x2`, …).
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Rat)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| grlex_desc(a.0, b.0));
        t
    }
}

fn grlex_desc(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for Poly {
    /// Canonical text form, e.g. `x1^3 - 1/2*x1*x2 + 4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let constant = e.iter().all(|&x| x == 0);
            if constant || !a.is_one() {
                write!(f, "{a}")?;
                if !constant {
                    f.write_str("*")?;
                }
            }
            let mut first = true;
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "x{}", i + 1)?;
                if x > 1 {
                    write!(f, "^{x}")?;
                }
            }
        }
        Ok(())
    }
}
