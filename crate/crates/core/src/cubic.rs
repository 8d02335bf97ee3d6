//! Cubic forms as symmetric tensors, linear changes of variables, and the
//! cone / forced-singular-point detectors.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::rat::{self, Rat};

/// Homogeneous cubic `C(x) = Σ_{i,j,k} T[i][j][k]·x_i·x_j·x_k` with `T`
/// fully symmetric. The coefficient of the monomial `x_i x_j x_k`
/// (`i ≤ j ≤ k`) is `T[i][j][k]` times the number of distinct orderings
/// of `(i, j, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubicForm {
    n: usize,
    tensor: Vec<Rat>,
}

/// Number of distinct orderings of the multiset `{i, j, k}`.
fn multiplicity(i: usize, j: usize, k: usize) -> i64 {
    match (i == j, j == k, i == k) {
        (true, true, _) => 1,
        (false, false, false) => 6,
        _ => 3,
    }
}

impl CubicForm {
    pub fn zero(n: usize) -> Self {
        CubicForm {
            n,
            tensor: rat::zeros(n * n * n),
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    /// Symmetric tensor entry.
    pub fn entry(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.tensor[self.idx(i, j, k)]
    }

    /// Coefficient of the monomial `x_i·x_j·x_k`.
    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> Rat {
        self.entry(i, j, k) * rat::int(multiplicity(i, j, k))
    }

    /// Adds `c` to the coefficient of the monomial `x_i·x_j·x_k`.
    pub fn add_monomial(&mut self, i: usize, j: usize, k: usize, c: &Rat) {
        let share = c / rat::int(multiplicity(i, j, k));
        let mut seen: Vec<(usize, usize, usize)> = Vec::with_capacity(6);
        for o in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            if !seen.contains(&o) {
                seen.push(o);
                let p = self.idx(o.0, o.1, o.2);
                self.tensor[p] += &share;
            }
        }
    }

    pub fn from_poly(p: &Poly) -> Result<Self> {
        if !p.is_homogeneous(3) {
            return Err(Error::NotCubicForm);
        }
        let mut c = Self::zero(p.nvars());
        for (e, coef) in p.terms() {
            let mut ids = Vec::with_capacity(3);
            for (v, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    ids.push(v);
                }
            }
            c.add_monomial(ids[0], ids[1], ids[2], coef);
        }
        Ok(c)
    }

    pub fn to_poly(&self) -> Poly {
        let n = self.n;
        let mut p = Poly::zero(n);
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let c = self.coefficient(i, j, k);
                    if !c.is_zero() {
                        let mut e = vec![0; n];
                        e[i] += 1;
                        e[j] += 1;
                        e[k] += 1;
                        p.add_term(e, c);
                    }
                }
            }
        }
        p
    }

    /// `Σ L_i·Q_i` for linear forms `L_i` (coefficient vectors) and
    /// quadratic forms `Q_i` (symmetric matrices).
    pub fn from_pairs(n: usize, pairs: &[(Vec<Rat>, Matrix)]) -> Result<Self> {
        let mut c = Self::zero(n);
        let third = Rat::new(1.into(), 3.into());
        for (l, q) in pairs {
            check_dim(n, l.len())?;
            check_dim(n, q.rows())?;
            check_dim(n, q.cols())?;
            // Symmetrization of l_i q_jk.
            for i in 0..n {
                if l[i].is_zero() {
                    continue;
                }
                for j in 0..n {
                    for k in 0..n {
                        if q[(j, k)].is_zero() {
                            continue;
                        }
                        let v = &l[i] * &q[(j, k)] * &third;
                        for (a, b, d) in [(i, j, k), (j, i, k), (j, k, i)] {
                            let p = c.idx(a, b, d);
                            c.tensor[p] += &v;
                        }
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Rat> {
        check_dim(self.n, x.len())?;
        let q = self.contract(x);
        q.quadratic_form(x)
    }

    /// The symmetric matrix `Σ_i v_i·T[i][·][·]`; its quadratic form is
    /// one third of the directional derivative `D_v C`.
    pub fn contract(&self, v: &[Rat]) -> Matrix {
        let n = self.n;
        let mut m = Matrix::zeros(n, n);
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    let t = &self.tensor[self.idx(i, j, k)];
                    if !t.is_zero() {
                        m[(j, k)] += vi * t;
                    }
                }
            }
        }
        m
    }

    /// `∂C/∂x_i` as quadratic polynomials.
    pub fn gradient(&self) -> Vec<Poly> {
        self.to_poly().gradient()
    }

    /// Gradient evaluated at `x`: `(3·T(e_i, x, x))_i`.
    pub fn gradient_at(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        check_dim(self.n, x.len())?;
        let q = self.contract(x);
        Ok(q.mul_vec(x)?.into_iter().map(|v| v * rat::int(3)).collect())
    }

    /// Pullback `u ↦ C(B·u)` along an `n × k` matrix.
    pub fn pullback(&self, b: &Matrix) -> Result<CubicForm> {
        check_dim(self.n, b.rows())?;
        let (n, k) = (self.n, b.cols());
        // Contract one index at a time: O(n^3 k + n^2 k^2 + n k^3).
        let mut u = rat::zeros(n * n * k);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let t = &self.tensor[self.idx(i, j, l)];
                    if t.is_zero() {
                        continue;
                    }
                    for c in 0..k {
                        if !b[(l, c)].is_zero() {
                            u[(i * n + j) * k + c] += t * &b[(l, c)];
                        }
                    }
                }
            }
        }
        let mut v = rat::zeros(n * k * k);
        for i in 0..n {
            for j in 0..n {
                for c in 0..k {
                    let t = &u[(i * n + j) * k + c];
                    if t.is_zero() {
                        continue;
                    }
                    for bb in 0..k {
                        if !b[(j, bb)].is_zero() {
                            v[(i * k + bb) * k + c] += t * &b[(j, bb)];
                        }
                    }
                }
            }
        }
        let mut out = CubicForm::zero(k);
        for i in 0..n {
            for bb in 0..k {
                for c in 0..k {
                    let t = &v[(i * k + bb) * k + c];
                    if t.is_zero() {
                        continue;
                    }
                    for a in 0..k {
                        if !b[(i, a)].is_zero() {
                            let p = out.idx(a, bb, c);
                            out.tensor[p] += t * &b[(i, a)];
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `C∘B` for an invertible change of variables.
    pub fn substitute(&self, t: &LinearChange) -> Result<CubicForm> {
        self.pullback(t.matrix())
    }

    /// A nonzero `v` with `C(x + λv) = C(x)` identically, if one exists.
    ///
    /// Such `v` are exactly the kernel of `v ↦ Σ_i v_i ∂C/∂x_i`; the first
    /// canonical kernel vector is returned after the translation identity
    /// has been checked by full expansion.
    pub fn cone_vertex(&self) -> Option<Vec<Rat>> {
        self.vertex_space().into_iter().next()
    }

    /// Canonical basis of the space of cone vertices.
    pub fn vertex_space(&self) -> Vec<Vec<Rat>> {
        let n = self.n;
        let mut m = Matrix::zeros(n * n, n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    m[(j * n + k, i)] = self.entry(i, j, k).clone();
                }
            }
        }
        let basis = m.kernel();
        for v in &basis {
            assert!(
                self.is_translation_invariant(v),
                "kernel vector failed the translation identity"
            );
        }
        basis
    }

    /// Checks `C(x + λv) − C(x) = 0` as a polynomial in `(x, λ)`.
    pub fn is_translation_invariant(&self, v: &[Rat]) -> bool {
        let n = self.n;
        if v.len() != n {
            return false;
        }
        let lambda = Poly::var(n + 1, n);
        let images: Vec<Poly> = (0..n)
            .map(|i| &Poly::var(n + 1, i) + &lambda.scale(&v[i]))
            .collect();
        let p = self.to_poly();
        let lifted = p.substitute(&images).expect("dimensions agree");
        let base = p.embed(n + 1, &(0..n).collect::<Vec<_>>()).expect("in range");
        (&lifted - &base).is_zero()
    }

    /// Lowest `j` such that `C` is at most linear in `x_j`; then `e_j` is a
    /// rational singular point of `C = 0`, which is certified by evaluation.
    pub fn forced_singular_point(&self) -> Option<usize> {
        let n = self.n;
        let j = (0..n).find(|&j| (0..n).all(|k| self.entry(j, j, k).is_zero()))?;
        let e = rat::unit_vector(n, j);
        assert!(self.eval(&e).expect("dims").is_zero());
        assert!(self.gradient_at(&e).expect("dims").iter().all(Zero::is_zero));
        Some(j)
    }
}

/// Invertible `n × n` change of variables `x ↦ B·x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearChange {
    matrix: Matrix,
}

impl LinearChange {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        if matrix.det()?.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(LinearChange { matrix })
    }

    pub fn identity(n: usize) -> Self {
        LinearChange {
            matrix: Matrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        self.matrix.mul_vec(x)
    }

    pub fn inverse(&self) -> LinearChange {
        LinearChange {
            matrix: self.matrix.inverse().expect("invertible by construction"),
        }
    }

    /// `self ∘ other`, i.e. the matrix product `self·other`.
    pub fn compose(&self, other: &LinearChange) -> Result<LinearChange> {
        Ok(LinearChange {
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }
}

impl Default for LinearChange {
    fn default() -> Self {
        Self::identity(0)
    }
}
