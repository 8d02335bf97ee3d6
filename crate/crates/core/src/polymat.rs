//! Matrices whose entries are polynomials.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::rat::Rat;

/// Largest size accepted by [`PolyMatrix::det`].
pub const MAX_DET_SIZE: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            nvars,
            data: vec![Poly::zero(nvars); rows * cols],
        }
    }

    /// `Σ_j y_j·M_j` as a matrix of linear forms in `μ = mats.len()` variables.
    pub fn linear_combination(mats: &[Matrix]) -> Result<Self> {
        let mu = mats.len();
        let (r, c) = mats.first().map_or((0, 0), |m| (m.rows(), m.cols()));
        let mut out = Self::zeros(r, c, mu);
        for (j, m) in mats.iter().enumerate() {
            check_dim(r, m.rows())?;
            check_dim(c, m.cols())?;
            let yj = Poly::var(mu, j);
            for a in 0..r {
                for b in 0..c {
                    if !num_traits::Zero::is_zero(&m[(a, b)]) {
                        let t = yj.scale(&m[(a, b)]);
                        out.data[a * c + b] = &out.data[a * c + b] + &t;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        debug_assert_eq!(p.nvars(), self.nvars);
        self.data[i * self.cols + j] = p;
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Matrix> {
        check_dim(self.nvars, point.len())?;
        let mut m = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self.get(i, j).eval(point)?;
            }
        }
        Ok(m)
    }

    /// Entrywise composition with polynomials in a new ring.
    pub fn substitute(&self, images: &[Poly]) -> Result<PolyMatrix> {
        let nv = images.first().map_or(0, Poly::nvars);
        let mut out = Self::zeros(self.rows, self.cols, nv);
        for (k, p) in self.data.iter().enumerate() {
            out.data[k] = p.substitute(images)?;
        }
        Ok(out)
    }

    pub fn det(&self) -> Result<Poly> {
        check_dim(self.rows, self.cols)?;
        let all: Vec<usize> = (0..self.rows).collect();
        self.minor(&all, &all)
    }

    /// Determinant of the submatrix on `rows × cols`, by cofactor expansion
    /// along the rows with the minors memoized by remaining column set.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Poly> {
        check_dim(rows.len(), cols.len())?;
        let k = rows.len();
        if k > MAX_DET_SIZE {
            return Err(Error::TooLarge {
                size: k,
                limit: MAX_DET_SIZE,
            });
        }
        if k == 0 {
            return Ok(Poly::one(self.nvars));
        }
        // memo[mask] = det of rows[k - |mask| ..] × (cols selected by mask)
        let mut memo: Vec<Option<Poly>> = vec![None; 1 << k];
        memo[0] = Some(Poly::one(self.nvars));
        for mask in 1usize..(1 << k) {
            let size = mask.count_ones() as usize;
            let row = rows[k - size];
            let mut acc = Poly::zero(self.nvars);
            let mut position = 0;
            for c in 0..k {
                if mask & (1 << c) == 0 {
                    continue;
                }
                let entry = self.get(row, cols[c]);
                if !entry.is_zero() {
                    let sub = memo[mask & !(1 << c)].as_ref().expect("filled in mask order");
                    if !sub.is_zero() {
                        let t = entry * sub;
                        acc = if position % 2 == 0 { &acc + &t } else { &acc - &t };
                    }
                }
                position += 1;
            }
            memo[mask] = Some(acc);
        }
        Ok(memo.pop().flatten().expect("full mask"))
    }
}
