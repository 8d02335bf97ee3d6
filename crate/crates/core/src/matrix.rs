//! Dense matrices over the rationals.

use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::rat::{self, Rat};

/// Row-major dense matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: rat::zeros(rows * cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn diagonal(entries: &[Rat]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            check_dim(c, row.len())?;
            data.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Integer matrix from row slices; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| rat::ints(r)).collect()).expect("ragged rows")
    }

    /// Symmetric matrix from its upper triangle, row by row
    /// (`n(n+1)/2` entries: `a11 a12 … a1n a22 … ann`).
    pub fn from_upper_triangle(n: usize, entries: &[Rat]) -> Result<Self> {
        check_dim(n * (n + 1) / 2, entries.len())?;
        let mut m = Self::zeros(n, n);
        let mut it = entries.iter();
        for i in 0..n {
            for j in i..n {
                let v = it.next().expect("length checked").clone();
                m[(i, j)] = v.clone();
                m[(j, i)] = v;
            }
        }
        Ok(m)
    }

    /// Upper triangle in the order accepted by [`Matrix::from_upper_triangle`].
    pub fn upper_triangle(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in i..self.cols {
                out.push(self[(i, j)].clone());
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal_entries(&self) -> Vec<Rat> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: &Rat) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect())
    }

    /// `vᵀ·M·v`.
    pub fn quadratic_form(&self, v: &[Rat]) -> Result<Rat> {
        let mv = self.mul_vec(v)?;
        check_dim(self.rows, v.len())?;
        Ok(dot(v, &mv))
    }

    /// `Bᵀ·M·B`.
    pub fn congruent(&self, b: &Matrix) -> Result<Matrix> {
        b.transpose().mul(&self.mul(b)?)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Leading `k × k` block.
    pub fn leading(&self, k: usize) -> Matrix {
        let idx: Vec<usize> = (0..k).collect();
        self.submatrix(&idx, &idx)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Determinant by Gaussian elimination over the rationals.
    pub fn det(&self) -> Result<Rat> {
        check_dim(self.rows, self.cols)?;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Ok(Rat::zero());
            };
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let pivot = a[(k, k)].clone();
            det *= &pivot;
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = &a[(i, k)] / &pivot;
                for j in k..n {
                    let t = &f * &a[(k, j)];
                    a[(i, j)] -= t;
                }
            }
        }
        Ok(det)
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let inv = a[(r, c)].recip();
            for j in c..self.cols {
                a[(r, j)] *= &inv;
            }
            for i in 0..self.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in c..self.cols {
                    let t = &f * &a[(r, j)];
                    a[(i, j)] -= t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the right kernel: one vector per free column,
    /// with a 1 in that column and zeros in the other free columns.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = rat::zeros(self.cols);
                v[f] = Rat::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rat::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(r.submatrix(&rows, &cols))
    }

    /// Rank by fraction-free (Bareiss) elimination on an integer matrix
    /// obtained by clearing the denominators of every row.
    pub fn rank_fraction_free(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = rat::denominator_lcm(row);
                row.iter()
                    .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
                    .collect()
            })
            .collect();
        let (n, m) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..m {
            if r == n {
                break;
            }
            let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(p, r);
            for i in r + 1..n {
                for j in c + 1..m {
                    let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    a[i][j] = v / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            r += 1;
        }
        r
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rat;

    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Checks that `m` is square and symmetric.
pub fn require_symmetric(m: &Matrix) -> Result<()> {
    if m.is_symmetric() {
        Ok(())
    } else {
        Err(Error::NotSymmetric)
    }
}

/// Permutation matrix `P` with `P·e_j = e_{perm[j]}`.
pub fn permutation(perm: &[usize]) -> Matrix {
    let n = perm.len();
    let mut p = Matrix::zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        p[(i, j)] = Rat::one();
    }
    p
}

/// Linearly independent rows, in order, that span the row space of `rows`.
pub fn independent_prefix(rows: &[Vec<Rat>]) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(r.clone());
        if Matrix::from_rows(trial.clone()).map(|m| m.rank()).unwrap_or(0) == trial.len() {
            basis = trial;
            kept.push(i);
        }
    }
    kept
}

impl Matrix {
    /// Symmetric matrix of a homogeneous quadratic polynomial; panics on
    /// other input (convenience for tests and fixtures).
    pub fn quadratic_of(q: &crate::Poly) -> Matrix {
        crate::hinv::quadratic_matrix(q).expect("quadratic form")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};
    use alloc::vec;

    #[test]
    fn det_and_inverse() {
        let m = Matrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det().unwrap(), int(18));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3));
        let s = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.det().unwrap(), int(0));
        assert!(s.inverse().is_none());
    }

    #[test]
    fn kernel_is_canonical() {
        let m = Matrix::from_i64(&[&[1, 0, 0, 0], &[0, 0, 0, 1]]);
        let k = m.kernel();
        assert_eq!(k, vec![rat::ints(&[0, 1, 0, 0]), rat::ints(&[0, 0, 1, 0])]);
        let row = Matrix::from_rows(vec![vec![int(2), int(1), frac(1, 2)]]).unwrap();
        for v in row.kernel() {
            assert!(row.mul_vec(&v).unwrap()[0].is_zero());
        }
    }

    #[test]
    fn ranks_agree() {
        let m = Matrix::from_rows(vec![
            vec![frac(1, 2), int(1), int(3)],
            vec![int(1), int(2), int(6)],
            vec![int(0), frac(1, 3), int(1)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank_fraction_free(), 2);
    }

    #[test]
    fn upper_triangle_round_trip() {
        let m = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 5], &[3, 5, 6]]);
        let t = m.upper_triangle();
        assert_eq!(Matrix::from_upper_triangle(3, &t).unwrap(), m);
    }
}
