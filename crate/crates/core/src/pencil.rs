//! Symmetric matrix pencils `Σ y_j·M_j`: congruent diagonalization, the
//! symbolic pencil determinant, and full-rank witnesses.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lattice;
use crate::matrix::{self, Matrix};
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::rat::{self, Rat};

/// Default size bound for [`pencil_det`].
pub const DEFAULT_DET_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricPencil {
    rho: usize,
    mats: Vec<Matrix>,
}

impl SymmetricPencil {
    pub fn new(rho: usize, mats: Vec<Matrix>) -> Result<Self> {
        for m in &mats {
            check_dim(rho, m.rows())?;
            matrix::require_symmetric(m)?;
        }
        Ok(SymmetricPencil { rho, mats })
    }

    pub fn from_matrices(mats: Vec<Matrix>) -> Result<Self> {
        let rho = mats.first().map_or(0, Matrix::rows);
        Self::new(rho, mats)
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn mu(&self) -> usize {
        self.mats.len()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    /// `Σ y_j·M_j`.
    pub fn combine(&self, y: &[Rat]) -> Result<Matrix> {
        check_dim(self.mu(), y.len())?;
        let mut acc = Matrix::zeros(self.rho, self.rho);
        for (m, c) in self.mats.iter().zip(y) {
            if !c.is_zero() {
                acc = acc.add(&m.scale(c))?;
            }
        }
        Ok(acc)
    }

    /// The pencil `{Bᵀ·M_j·B}`.
    pub fn congruent(&self, b: &Matrix) -> Result<SymmetricPencil> {
        let mats = self.mats.iter().map(|m| m.congruent(b)).collect::<Result<Vec<_>>>()?;
        SymmetricPencil::new(b.cols(), mats)
    }
}

/// `Bᵀ·M·B = D` with `B` invertible and `D` diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceCertificate {
    pub b: Matrix,
    pub d: Matrix,
}

impl CongruenceCertificate {
    pub fn rank(&self) -> usize {
        self.d.diagonal_entries().iter().filter(|x| !x.is_zero()).count()
    }
}

/// `y` with `det(Σ y_j·M_j) = det_value ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankWitness {
    pub y: Vec<Rat>,
    pub det_value: Rat,
}

/// Symmetric Gaussian elimination. The pivot is the first nonzero diagonal
/// entry of the active block; when the whole active diagonal vanishes but
/// some `a_ij ≠ 0` (first in row-major order), the basis vector `b_i` is
/// replaced by `b_i + b_j` first, which puts `2·a_ij` on the diagonal.
pub fn diagonalize_congruent(m: &Matrix) -> Result<CongruenceCertificate> {
    matrix::require_symmetric(m)?;
    let n = m.rows();
    let mut a = m.clone();
    let mut b = Matrix::identity(n);
    for k in 0..n {
        let pivot = match (k..n).find(|&i| !a[(i, i)].is_zero()) {
            Some(i) => i,
            None => {
                let Some((i, j)) = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[(i, j)].is_zero())
                else {
                    break;
                };
                add_basis_vector(&mut a, &mut b, i, j, &Rat::one());
                i
            }
        };
        a.swap_rows(pivot, k);
        a.swap_cols(pivot, k);
        b.swap_cols(pivot, k);
        for j in k + 1..n {
            if a[(k, j)].is_zero() {
                continue;
            }
            let f = -(&a[(k, j)] / &a[(k, k)]);
            add_basis_vector(&mut a, &mut b, j, k, &f);
        }
    }
    debug_assert!(a.is_diagonal());
    debug_assert_eq!(m.congruent(&b)?, a);
    Ok(CongruenceCertificate { b, d: a })
}

/// `b_i ← b_i + f·b_j`, updating `a = Bᵀ·M·B` accordingly.
fn add_basis_vector(a: &mut Matrix, b: &mut Matrix, i: usize, j: usize, f: &Rat) {
    let n = a.rows();
    for r in 0..n {
        let t = f * &a[(r, j)];
        a[(r, i)] += t;
    }
    for c in 0..n {
        let t = f * &a[(j, c)];
        a[(i, c)] += t;
    }
    for r in 0..n {
        let t = f * &b[(r, j)];
        b[(r, i)] += t;
    }
}

/// `det(Σ y_j·M_j)` as a polynomial in `y_1..y_μ`, for `ρ ≤ DEFAULT_DET_LIMIT`.
pub fn pencil_det(p: &SymmetricPencil) -> Result<Poly> {
    pencil_det_with_limit(p, DEFAULT_DET_LIMIT)
}

pub fn pencil_det_with_limit(p: &SymmetricPencil, limit: usize) -> Result<Poly> {
    if p.rho() > limit {
        return Err(Error::TooLarge {
            size: p.rho(),
            limit,
        });
    }
    if p.mu() == 0 {
        let c = if p.rho() == 0 { Rat::one() } else { Rat::zero() };
        return Ok(Poly::constant(0, c));
    }
    PolyMatrix::linear_combination(p.matrices())?.det()
}

/// For each `i`, whether some `M_j` has a nonzero `(i, i)` entry.
pub fn check_diagonal_hypothesis(p: &SymmetricPencil) -> Vec<bool> {
    (0..p.rho())
        .map(|i| p.matrices().iter().any(|m| !m[(i, i)].is_zero()))
        .collect()
}

/// Doublings of the scale before the inductive construction gives up.
const MAX_DOUBLINGS: u32 = 256;

/// Full-rank witness for the pencil, or `None` iff its determinant is the
/// zero polynomial.
///
/// First runs the inductive construction: diagonalize the lowest-index
/// nonzero `M_j` as `diag(0, …, 0, λ_1, …, λ_r)`, recurse on the leading
/// `(ρ−r)`-blocks of the other matrices, then put a scale `P = 1, 2, 4, …`
/// at position `j` until the determinant is nonzero (the leading term in
/// `P` is `λ_1⋯λ_r·P^r` times the sub-pencil determinant). If the
/// construction fails (its hypotheses do not hold), the symbolic
/// determinant decides, and a height-ordered grid search finds a witness.
pub fn find_full_rank_point(p: &SymmetricPencil) -> Result<Option<RankWitness>> {
    if p.rho() == 0 {
        return Ok(Some(RankWitness {
            y: rat::zeros(p.mu()),
            det_value: Rat::one(),
        }));
    }
    if let Some(y) = inductive_witness(p)? {
        let det_value = p.combine(&y)?.det()?;
        return Ok(Some(RankWitness { y, det_value }));
    }
    let det = pencil_det_with_limit(p, polymat_limit())?;
    if det.is_zero() {
        return Ok(None);
    }
    grid_full_rank_point(p, p.rho() as u64)
}

fn polymat_limit() -> usize {
    crate::polymat::MAX_DET_SIZE
}

/// Rank of `Σ y_j·M_j` over `Q(y)`, with a point and a nonsingular
/// principal minor attaining it.
pub fn generic_rank(p: &SymmetricPencil) -> Result<crate::fibration::FiberRank> {
    let first = find_full_rank_point(p)?.map(|w| w.y);
    let a = PolyMatrix::linear_combination(p.matrices())?;
    crate::fibration::symmetric_rank(&a, first)
}

/// The inductive construction alone; `None` when it does not apply.
pub fn inductive_witness(p: &SymmetricPencil) -> Result<Option<Vec<Rat>>> {
    let rho = p.rho();
    let mu = p.mu();
    if rho == 0 {
        return Ok(Some(rat::zeros(mu)));
    }
    let Some(j) = p.matrices().iter().position(|m| !m.is_zero()) else {
        return Ok(None);
    };
    let cert = diagonalize_congruent(&p.matrices()[j])?;
    // Zero diagonal entries first, keeping relative order.
    let diag = cert.d.diagonal_entries();
    let mut order: Vec<usize> = (0..rho).filter(|&i| diag[i].is_zero()).collect();
    order.extend((0..rho).filter(|&i| !diag[i].is_zero()));
    let mut perm = alloc::vec![0; rho];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    let b = cert.b.mul(&matrix::permutation(&perm))?;
    let transformed = p.congruent(&b)?;
    let s = rho - cert.rank();
    let others: Vec<Matrix> = transformed
        .matrices()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, m)| m.leading(s))
        .collect();
    let sub = if s == 0 {
        rat::zeros(mu - 1)
    } else {
        match inductive_witness(&SymmetricPencil::new(s, others)?)? {
            Some(v) => v,
            None => return Ok(None),
        }
    };
    let mut y = Vec::with_capacity(mu);
    let mut it = sub.into_iter();
    for i in 0..mu {
        y.push(if i == j { Rat::one() } else { it.next().expect("mu - 1 entries") });
    }
    for _ in 0..MAX_DOUBLINGS {
        if !p.combine(&y)?.det()?.is_zero() {
            return Ok(Some(y));
        }
        y[j] *= rat::int(2);
    }
    Ok(None)
}

/// First `y` in height order (height `0..=max_height`, lexicographic within
/// a height) with `det(Σ y_j·M_j) ≠ 0`.
pub fn grid_full_rank_point(p: &SymmetricPencil, max_height: u64) -> Result<Option<RankWitness>> {
    for v in lattice::by_height(p.mu(), max_height, true) {
        let y = rat::ints(&v);
        let det_value = p.combine(&y)?.det()?;
        if !det_value.is_zero() {
            return Ok(Some(RankWitness { y, det_value }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int, ints};
    use alloc::vec;

    fn diag(v: &[i64]) -> Matrix {
        Matrix::diagonal(&ints(v))
    }

    #[test]
    fn diagonalization_examples() {
        let c = diagonalize_congruent(&diag(&[1, 2])).unwrap();
        assert_eq!(c.b, Matrix::identity(2));
        assert_eq!(c.d, diag(&[1, 2]));
        let c = diagonalize_congruent(&Matrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(c.d, Matrix::diagonal(&[int(2), frac(-1, 2)]));
        let z = diagonalize_congruent(&Matrix::zeros(3, 3)).unwrap();
        assert_eq!(z.b, Matrix::identity(3));
        assert!(z.d.is_zero());
        assert_eq!(diagonalize_congruent(&Matrix::from_i64(&[&[0, 1], &[2, 0]])), Err(Error::NotSymmetric));
    }

    #[test]
    fn determinant_examples() {
        let y = |i| Poly::var(2, i);
        let p = SymmetricPencil::from_matrices(vec![diag(&[1, 0]), diag(&[0, 1])]).unwrap();
        assert_eq!(pencil_det(&p).unwrap(), &y(0) * &y(1));
        let p = SymmetricPencil::from_matrices(vec![diag(&[1, 0]), Matrix::from_i64(&[&[0, 1], &[1, 0]])]).unwrap();
        assert_eq!(pencil_det(&p).unwrap(), -&y(1).pow(2));
        let p = SymmetricPencil::from_matrices(vec![diag(&[1, 0]), diag(&[1, 0])]).unwrap();
        assert!(pencil_det(&p).unwrap().is_zero());
        let big = SymmetricPencil::from_matrices(vec![Matrix::identity(9)]).unwrap();
        assert!(matches!(pencil_det(&big), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn witness_examples() {
        let p = SymmetricPencil::from_matrices(vec![diag(&[1, 0]), diag(&[0, 1])]).unwrap();
        let w = find_full_rank_point(&p).unwrap().unwrap();
        assert_eq!(w.y, ints(&[1, 1]));
        assert_eq!(w.det_value, int(1));
        let p = SymmetricPencil::from_matrices(vec![diag(&[2, 3])]).unwrap();
        assert_eq!(find_full_rank_point(&p).unwrap().unwrap().y, ints(&[1]));
        let p = SymmetricPencil::from_matrices(vec![diag(&[1, 0]), diag(&[1, 0])]).unwrap();
        assert_eq!(find_full_rank_point(&p).unwrap(), None);
        let empty = SymmetricPencil::new(0, vec![]).unwrap();
        assert_eq!(find_full_rank_point(&empty).unwrap().unwrap().det_value, int(1));
    }

    #[test]
    fn outside_the_hypothesis_falls_back() {
        // det = -y2^2 but no matrix has a nonzero (2,2) entry.
        let p = SymmetricPencil::from_matrices(vec![diag(&[1, 0]), Matrix::from_i64(&[&[0, 1], &[1, 0]])]).unwrap();
        assert_eq!(check_diagonal_hypothesis(&p), vec![true, false]);
        assert_eq!(inductive_witness(&p).unwrap(), None);
        let w = find_full_rank_point(&p).unwrap().unwrap();
        assert!(!w.det_value.is_zero());
    }

    #[test]
    fn generic_rank_examples() {
        let p = SymmetricPencil::from_matrices(vec![diag(&[1, 0, 0]), diag(&[1, 0, 0]), diag(&[0, 2, 0])]).unwrap();
        let r = generic_rank(&p).unwrap();
        assert_eq!(r.rank, 2);
        let w = r.witness.unwrap();
        let m = p.combine(&w.y).unwrap();
        assert_eq!(m.submatrix(&w.indices, &w.indices).det().unwrap(), w.minor);
        assert!(!w.minor.is_zero());
        let full = SymmetricPencil::from_matrices(vec![diag(&[1, 0]), diag(&[0, 1])]).unwrap();
        assert_eq!(generic_rank(&full).unwrap().rank, 2);
        let zero = SymmetricPencil::from_matrices(vec![Matrix::zeros(2, 2)]).unwrap();
        assert_eq!(generic_rank(&zero).unwrap().rank, 0);
    }

    #[test]
    fn hypothesis_examples() {
        let p = SymmetricPencil::from_matrices(vec![diag(&[1, 0]), diag(&[0, 1])]).unwrap();
        assert_eq!(check_diagonal_hypothesis(&p), vec![true, true]);
        let p = SymmetricPencil::from_matrices(vec![Matrix::from_i64(&[&[0, 1], &[1, 0]])]).unwrap();
        assert_eq!(check_diagonal_hypothesis(&p), vec![false, false]);
        let p = SymmetricPencil::from_matrices(vec![diag(&[1, 0])]).unwrap();
        assert_eq!(check_diagonal_hypothesis(&p), vec![true, false]);
    }
}
