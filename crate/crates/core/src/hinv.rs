//! Decompositions `C = L_1·Q_1 + … + L_h·Q_h`, the rational linear spaces
//! they cut out, and a height-bounded search for such decompositions.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::cubic::CubicForm;
use crate::error::{check_dim, Error, Result};
use crate::lattice::HeightVectors;
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::rat::{self, Rat};

/// A list of (linear form, quadratic form) pairs over `n` variables.
/// `L_i` is a coefficient vector, `Q_i` a symmetric matrix with
/// `Q_i(x) = xᵀ·Q_i·x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    n: usize,
    pairs: Vec<(Vec<Rat>, Matrix)>,
}

impl Decomposition {
    pub fn new(n: usize, pairs: Vec<(Vec<Rat>, Matrix)>) -> Result<Self> {
        for (l, q) in &pairs {
            check_dim(n, l.len())?;
            check_dim(n, q.rows())?;
            if !q.is_symmetric() {
                return Err(Error::NotSymmetric);
            }
            if l.iter().all(Zero::is_zero) {
                return Err(Error::Precondition("linear form L_i is zero".into()));
            }
        }
        Ok(Decomposition { n, pairs })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(Vec<Rat>, Matrix)] {
        &self.pairs
    }

    /// The cubic form `Σ L_i·Q_i`.
    pub fn expand(&self) -> CubicForm {
        CubicForm::from_pairs(self.n, &self.pairs).expect("validated dimensions")
    }

    /// Pairs transformed by `x ↦ B·x`: `(L_i∘B, Q_i∘B)`.
    pub fn transform(&self, b: &crate::LinearChange) -> Result<Decomposition> {
        check_dim(self.n, b.dim())?;
        let m = b.matrix();
        let pairs = self
            .pairs
            .iter()
            .map(|(l, q)| Ok((m.transpose().mul_vec(l)?, q.congruent(m)?)))
            .collect::<Result<Vec<_>>>()?;
        Decomposition::new(self.n, pairs)
    }

    /// Matrix whose rows are the `L_i`.
    pub fn linear_rows(&self) -> Matrix {
        if self.pairs.is_empty() {
            return Matrix::zeros(0, self.n);
        }
        Matrix::from_rows(self.pairs.iter().map(|(l, _)| l.clone()).collect()).expect("same length")
    }
}

/// True iff `Σ L_i·Q_i` equals `c` coefficient by coefficient.
pub fn verify_decomposition(c: &CubicForm, d: &Decomposition) -> Result<bool> {
    check_dim(c.nvars(), d.nvars())?;
    Ok(&d.expand() == c)
}

/// A rational linear subspace on which the cubic form vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPlane {
    pub basis: Vec<Vec<Rat>>,
}

impl RationalPlane {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `Σ coeffs_i · basis_i`.
    pub fn combination(&self, coeffs: &[Rat]) -> Vec<Rat> {
        let n = self.basis.first().map_or(0, Vec::len);
        let mut v = rat::zeros(n);
        for (b, c) in self.basis.iter().zip(coeffs) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        v
    }
}

/// Kernel of the `L_i`, checked against `c`. Fails unless `d` verifies `c`.
pub fn extract_plane(c: &CubicForm, d: &Decomposition) -> Result<RationalPlane> {
    if !verify_decomposition(c, d)? {
        return Err(Error::Precondition("decomposition does not verify the cubic form".into()));
    }
    let basis = if d.h() == 0 {
        (0..d.nvars()).map(|i| rat::unit_vector(d.nvars(), i)).collect()
    } else {
        d.linear_rows().kernel()
    };
    for v in &basis {
        if !c.eval(v)?.is_zero() {
            return Err(Error::Precondition("kernel vector off the hypersurface".into()));
        }
    }
    Ok(RationalPlane { basis })
}

/// Search limits for [`h_upper_bound_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HinvSearch {
    /// Largest max-norm of a normal vector.
    pub height: u64,
    /// Nodes (candidate hyperplanes) examined per codimension.
    pub budget: u64,
}

impl HinvSearch {
    pub const DEFAULT_BUDGET: u64 = 200_000;

    pub fn new(height: u64) -> Self {
        HinvSearch {
            height,
            budget: Self::DEFAULT_BUDGET,
        }
    }
}

/// Result of the subspace search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HinvBound {
    /// Upper bound on the h-invariant.
    pub bound: usize,
    /// Verified decomposition with `bound` pairs.
    pub witness: Decomposition,
    /// Basis of the linear space `L_1 = … = L_h = 0` found by the search.
    pub plane: Vec<Vec<Rat>>,
    /// Some codimension below `bound` was abandoned on budget.
    pub budget_exhausted: bool,
}

/// [`h_upper_bound_with`] at the default budget.
pub fn h_upper_bound(c: &CubicForm, height: u64) -> Result<HinvBound> {
    h_upper_bound_with(c, &HinvSearch::new(height))
}

/// Smallest codimension `r` of a rational linear space inside `C = 0`
/// reachable by successive restriction to hyperplanes with primitive
/// normals of height `≤ search.height`, returned with a decomposition built
/// by dividing `C` by the linear forms cutting out that space.
///
/// For each codimension the candidate chains are visited in phases of
/// increasing maximal height, so a larger height bound revisits the same
/// prefix first and the bound cannot get worse.
pub fn h_upper_bound_with(c: &CubicForm, search: &HinvSearch) -> Result<HinvBound> {
    if search.height == 0 {
        return Err(Error::Precondition("height must be at least 1".into()));
    }
    let n = c.nvars();
    let mut exhausted = false;
    for r in 1..n {
        let mut state = Dfs {
            budget: search.budget,
            spent: 0,
        };
        let mut found = None;
        for phase in 1..=search.height {
            found = state.descend(c, &Matrix::identity(n), r, phase, false);
            if found.is_some() || state.spent >= state.budget {
                break;
            }
        }
        if let Some(k) = found {
            let rows = k.transpose().kernel();
            let witness = divide_out(c, &rows)?;
            return Ok(HinvBound {
                bound: r,
                witness,
                plane: k.transpose().to_rows(),
                budget_exhausted: exhausted,
            });
        }
        exhausted |= state.spent >= state.budget;
    }
    let rows: Vec<Vec<Rat>> = (0..n).map(|i| rat::unit_vector(n, i)).collect();
    Ok(HinvBound {
        bound: n,
        witness: divide_out(c, &rows)?,
        plane: Vec::new(),
        budget_exhausted: exhausted,
    })
}

struct Dfs {
    budget: u64,
    spent: u64,
}

impl Dfs {
    /// `basis` maps current coordinates into the original ones; `form` is
    /// the cubic restricted to its image. Returns the final basis.
    fn descend(&mut self, form: &CubicForm, basis: &Matrix, remaining: usize, phase: u64, hit: bool) -> Option<Matrix> {
        let k = form.nvars();
        let heights: Vec<u64> = if remaining == 1 && !hit { alloc::vec![phase] } else { (1..=phase).collect() };
        for h in heights {
            for normal in HeightVectors::primitive(k, h) {
                if self.spent >= self.budget {
                    return None;
                }
                self.spent += 1;
                let hyper = hyperplane_basis(&normal);
                let now_hit = hit || h == phase;
                if remaining == 1 {
                    // Cheap rejection before the full restriction.
                    let w = hyper.col(0);
                    if !form.eval(&w).expect("dims").is_zero() {
                        continue;
                    }
                }
                let restricted = form.pullback(&hyper).expect("dims");
                let next = basis.mul(&hyper).expect("dims");
                if remaining == 1 {
                    if restricted.is_zero() && now_hit {
                        return Some(next);
                    }
                } else if let Some(found) = self.descend(&restricted, &next, remaining - 1, phase, now_hit) {
                    return Some(found);
                }
            }
        }
        None
    }
}

/// Integer basis (as columns) of the hyperplane `normal · x = 0`: with `p`
/// the first nonzero position, the vectors `a_p e_j − a_j e_p`, `j ≠ p`.
pub fn hyperplane_basis(normal: &[i64]) -> Matrix {
    let k = normal.len();
    let p = normal.iter().position(|&a| a != 0).expect("nonzero normal");
    let mut m = Matrix::zeros(k, k - 1);
    let mut col = 0;
    for j in 0..k {
        if j == p {
            continue;
        }
        m[(j, col)] = rat::int(normal[p]);
        m[(p, col)] = rat::int(-normal[j]);
        col += 1;
    }
    m
}

/// Divides `c` successively by the linear forms `rows` (which must cut out
/// a space inside `C = 0`). Each form is first reduced against the pivots
/// of the previous ones; its quotient is `Q_i` and the remainder is passed on.
pub fn divide_out(c: &CubicForm, rows: &[Vec<Rat>]) -> Result<Decomposition> {
    let n = c.nvars();
    let mut rem = c.to_poly();
    let mut reduced: Vec<(usize, Vec<Rat>)> = Vec::new();
    let mut pairs = Vec::new();
    for l in rows {
        check_dim(n, l.len())?;
        let mut l = l.clone();
        for (p, prev) in &reduced {
            if !l[*p].is_zero() {
                let f = &l[*p] / &prev[*p];
                for (x, y) in l.iter_mut().zip(prev) {
                    *x -= &f * y;
                }
            }
        }
        let pivot = l
            .iter()
            .position(|x| !x.is_zero())
            .ok_or_else(|| Error::Precondition("linear forms are dependent".into()))?;
        let (q, r) = rem.div_linear(&l)?;
        pairs.push((l.clone(), quadratic_matrix(&q)?));
        rem = r;
        reduced.push((pivot, l));
    }
    if !rem.is_zero() {
        return Err(Error::Precondition("linear forms do not cut out a space on the hypersurface".into()));
    }
    Decomposition::new(n, pairs)
}

/// Symmetric matrix of a quadratic form given as a polynomial.
pub fn quadratic_matrix(q: &Poly) -> Result<Matrix> {
    if !q.is_homogeneous(2) {
        return Err(Error::Precondition("expected a quadratic form".into()));
    }
    let n = q.nvars();
    let mut m = Matrix::zeros(n, n);
    let half = rat::frac(1, 2);
    for (e, c) in q.terms() {
        let idx: Vec<usize> = (0..n).flat_map(|i| core::iter::repeat_n(i, e[i] as usize)).collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            m[(i, i)] = c.clone();
        } else {
            m[(i, j)] = c * &half;
            m[(j, i)] = c * &half;
        }
    }
    Ok(m)
}
