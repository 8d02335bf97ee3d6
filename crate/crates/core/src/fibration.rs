//! Cubic forms in split shape
//!
//! `C(x, y) = Σ_i y_i·xᵀM_i x + 2·Σ_j x_j·q_j(y) + c(y)`,
//!
//! the fiber matrix `A(y)`, strong equivalence, and full-rank fiber witnesses.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::cubic::{CubicForm, LinearChange};
use crate::error::{check_dim, Error, Result};
use crate::lattice;
use crate::matrix::{self, Matrix};
use crate::pencil::{self, SymmetricPencil};
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::rat::{self, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCubic {
    m: usize,
    h: usize,
    order: Vec<usize>,
    source: CubicForm,
    mats: Vec<Matrix>,
    border: Vec<Poly>,
    corner: CubicForm,
}

/// Splits with the first `m` variables as the x-block.
pub fn split(c: &CubicForm, m: usize) -> Result<SplitCubic> {
    let x: Vec<usize> = (0..m).collect();
    split_with(c, &x)
}

/// Splits with the given variables (0-based) as the x-block; the remaining
/// variables form the y-block in increasing order.
pub fn split_with(c: &CubicForm, x_vars: &[usize]) -> Result<SplitCubic> {
    let n = c.nvars();
    let m = x_vars.len();
    if m == 0 || n < m + 1 {
        return Err(Error::Precondition(alloc::format!(
            "an x-block of size {m} needs 1 ≤ m < n = {n}"
        )));
    }
    let mut seen = vec![false; n];
    for &v in x_vars {
        if v >= n || core::mem::replace(&mut seen[v], true) {
            return Err(Error::Precondition(alloc::format!("invalid x-block variable index {v}")));
        }
    }
    let mut order = x_vars.to_vec();
    order.extend((0..n).filter(|&v| !seen[v]));
    let mut p = Matrix::zeros(n, n);
    for (k, &v) in order.iter().enumerate() {
        p[(v, k)] = Rat::one();
    }
    let arranged = c.pullback(&p)?;
    let mut s = split_arranged(arranged, m)?;
    s.order = order;
    Ok(s)
}

fn split_arranged(source: CubicForm, m: usize) -> Result<SplitCubic> {
    let n = source.nvars();
    let h = n - m;
    for a in 0..m {
        for b in a..m {
            for c in b..m {
                if !source.entry(a, b, c).is_zero() {
                    return Err(Error::Precondition(alloc::format!(
                        "not in split shape: x{}*x{}*x{} is cubic in the x-block",
                        a + 1,
                        b + 1,
                        c + 1
                    )));
                }
            }
        }
    }
    let three = rat::int(3);
    let mats = (0..h)
        .map(|i| {
            let mut mi = Matrix::zeros(m, m);
            for a in 0..m {
                for b in 0..m {
                    mi[(a, b)] = source.entry(a, b, m + i) * &three;
                }
            }
            mi
        })
        .collect();
    let three_halves = rat::frac(3, 2);
    let border = (0..m)
        .map(|a| {
            let mut q = Poly::zero(h);
            for i in 0..h {
                for j in 0..h {
                    let t = source.entry(a, m + i, m + j);
                    if !t.is_zero() {
                        let mut e = vec![0; h];
                        e[i] += 1;
                        e[j] += 1;
                        q.add_term(e, t * &three_halves);
                    }
                }
            }
            q
        })
        .collect();
    let mut corner = CubicForm::zero(h);
    for i in 0..h {
        for j in i..h {
            for k in j..h {
                let t = source.coefficient(m + i, m + j, m + k);
                if !t.is_zero() {
                    corner.add_monomial(i, j, k, &t);
                }
            }
        }
    }
    Ok(SplitCubic {
        m,
        h,
        order: (0..n).collect(),
        source,
        mats,
        border,
        corner,
    })
}

impl SplitCubic {
    /// Assembles a split from its blocks without checking them against
    /// `source` (the form in arranged order, x-block first).
    pub fn from_parts(source: CubicForm, mats: Vec<Matrix>, border: Vec<Poly>, corner: CubicForm) -> Result<Self> {
        let h = mats.len();
        let m = border.len();
        check_dim(m + h, source.nvars())?;
        for mi in &mats {
            check_dim(m, mi.rows())?;
            matrix::require_symmetric(mi)?;
        }
        for q in &border {
            check_dim(h, q.nvars())?;
            if !q.is_homogeneous(2) {
                return Err(Error::Precondition("border entries must be quadratic forms".into()));
            }
        }
        check_dim(h, corner.nvars())?;
        Ok(SplitCubic {
            m,
            h,
            order: (0..m + h).collect(),
            source,
            mats,
            border,
            corner,
        })
    }

    /// The split whose source is the reassembled form of the given blocks.
    pub fn assemble(mats: Vec<Matrix>, border: Vec<Poly>, corner: CubicForm) -> Result<Self> {
        let h = mats.len();
        let placeholder = CubicForm::zero(border.len() + h);
        let mut s = Self::from_parts(placeholder, mats, border, corner)?;
        s.source = s.reassemble();
        Ok(s)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// Original variable index of each arranged variable (x-block first).
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// The source form in arranged order.
    pub fn source(&self) -> &CubicForm {
        &self.source
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn border(&self) -> &[Poly] {
        &self.border
    }

    pub fn corner(&self) -> &CubicForm {
        &self.corner
    }

    /// `Σ y_i·xᵀM_i x + 2·Σ x_j·q_j(y) + c(y)` in arranged order.
    pub fn reassemble(&self) -> CubicForm {
        let (m, h) = (self.m, self.h);
        let n = m + h;
        let mut out = CubicForm::zero(n);
        for (i, mi) in self.mats.iter().enumerate() {
            for a in 0..m {
                for b in a..m {
                    let c = if a == b { mi[(a, a)].clone() } else { &mi[(a, b)] * rat::int(2) };
                    out.add_monomial(a, b, m + i, &c);
                }
            }
        }
        let two = rat::int(2);
        for (a, q) in self.border.iter().enumerate() {
            for (e, c) in q.terms() {
                let ij = exponent_indices(e);
                out.add_monomial(a, m + ij[0], m + ij[1], &(c * &two));
            }
        }
        for i in 0..h {
            for j in i..h {
                for k in j..h {
                    out.add_monomial(m + i, m + j, m + k, &self.corner.coefficient(i, j, k));
                }
            }
        }
        out
    }

    /// The symmetric `(m+1) × (m+1)` matrix `A(y)` over `Q[y_1..y_h]`.
    pub fn fiber_matrix(&self) -> PolyMatrix {
        let (m, h) = (self.m, self.h);
        let mut a = if h == 0 {
            PolyMatrix::zeros(m + 1, m + 1, 0)
        } else {
            let mut full = PolyMatrix::zeros(m + 1, m + 1, h);
            let block = PolyMatrix::linear_combination(&self.mats).expect("uniform block sizes");
            for r in 0..m {
                for c in 0..m {
                    full.set(r, c, block.get(r, c).clone());
                }
            }
            full
        };
        for (j, q) in self.border.iter().enumerate() {
            a.set(j, m, q.clone());
            a.set(m, j, q.clone());
        }
        a.set(m, m, self.corner.to_poly());
        a
    }

    /// `A(y)` at a rational point.
    pub fn fiber_quadric(&self, y: &[Rat]) -> Result<Matrix> {
        check_dim(self.h, y.len())?;
        self.fiber_matrix().eval(y)
    }

    /// Re-splits after `x ↦ B_x·x`, `y ↦ B_y·y`.
    pub fn transform(&self, bx: &Matrix, by: &Matrix) -> Result<SplitCubic> {
        check_dim(self.m, bx.rows())?;
        check_dim(self.h, by.rows())?;
        let b = block_diagonal(bx, by);
        split_arranged(self.source.pullback(&b)?, self.m)
    }
}

fn exponent_indices(e: &[u32]) -> Vec<usize> {
    e.iter()
        .enumerate()
        .flat_map(|(i, &k)| core::iter::repeat_n(i, k as usize))
        .collect()
}

fn block_diagonal(a: &Matrix, b: &Matrix) -> Matrix {
    let (p, q) = (a.rows(), b.rows());
    let mut out = Matrix::zeros(p + q, p + q);
    for r in 0..p {
        for c in 0..p {
            out[(r, c)] = a[(r, c)].clone();
        }
    }
    for r in 0..q {
        for c in 0..q {
            out[(p + r, p + c)] = b[(r, c)].clone();
        }
    }
    out
}

/// Checks `t·Q_y(x, t) = C(x, t·y)` as an identity in `(x, y, t)`.
pub fn fiber_identity_check(s: &SplitCubic) -> bool {
    let (m, h) = (s.m, s.h);
    let n = m + h + 1;
    let t = Poly::var(n, m + h);
    let y_map: Vec<usize> = (m..m + h).collect();
    let a = s.fiber_matrix();
    // w = (x_1, …, x_m, t)
    let w: Vec<Poly> = (0..m).map(|i| Poly::var(n, i)).chain(core::iter::once(t.clone())).collect();
    let mut q = Poly::zero(n);
    for r in 0..=m {
        for c in 0..=m {
            let e = a.get(r, c);
            if e.is_zero() {
                continue;
            }
            let e = e.embed(n, &y_map).expect("y-block index map");
            q = &q + &(&(&e * &w[r]) * &w[c]);
        }
    }
    let lhs = &t * &q;
    let images: Vec<Poly> = (0..m)
        .map(|i| Poly::var(n, i))
        .chain((0..h).map(|i| &t * &Poly::var(n, m + i)))
        .collect();
    let rhs = s.source.to_poly().substitute(&images).expect("image count matches");
    lhs == rhs
}

/// A point `y` where the principal minor of `A(y)` on `indices` is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorWitness {
    pub y: Vec<Rat>,
    pub indices: Vec<usize>,
    pub minor: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberRank {
    pub rank: usize,
    pub witness: Option<MinorWitness>,
}

/// Number of sample points tried before symbolic minors are computed.
const RANK_SAMPLES: usize = 256;

/// Rank of `A(y)` over `Q(y)`. A symmetric matrix has the rank of its
/// largest nonsingular principal submatrix, so only principal minors are
/// inspected: sampled points give a lower bound, and the larger principal
/// minors are then expanded symbolically.
pub fn generic_fiber_rank(s: &SplitCubic) -> Result<FiberRank> {
    let mut first = None;
    if s.h > 0 && s.m <= crate::polymat::MAX_DET_SIZE {
        let p = SymmetricPencil::new(s.m, s.mats.clone())?;
        first = pencil::find_full_rank_point(&p)?.map(|w| w.y);
    }
    symmetric_rank(&s.fiber_matrix(), first)
}

/// Generic rank of a symmetric polynomial matrix, trying `first` before the
/// height-ordered samples.
pub(crate) fn symmetric_rank(a: &PolyMatrix, first: Option<Vec<Rat>>) -> Result<FiberRank> {
    let size = a.rows();
    let nvars = a.nvars();
    let mut best: Option<(usize, Vec<Rat>, Matrix)> = None;
    let consider = |y: Vec<Rat>, best: &mut Option<(usize, Vec<Rat>, Matrix)>| -> Result<bool> {
        let v = a.eval(&y)?;
        let r = v.rank();
        if best.as_ref().is_none_or(|b| r > b.0) {
            *best = Some((r, y, v));
        }
        Ok(r == size)
    };
    let mut done = false;
    if let Some(y) = first {
        done = consider(y, &mut best)?;
    }
    if !done {
        for v in lattice::by_height(nvars, u64::MAX, false).take(RANK_SAMPLES) {
            if consider(rat::ints(&v), &mut best)? {
                break;
            }
        }
    }
    let (r0, y0, v0) = best.unwrap_or_else(|| (0, Vec::new(), Matrix::zeros(size, size)));
    for k in (r0 + 1..=size).rev() {
        for idx in combinations(size, k) {
            let minor = a.minor(&idx, &idx)?;
            if minor.is_zero() {
                continue;
            }
            let y = first_nonvanishing(&minor, nvars)?;
            let value = minor.eval(&y)?;
            return Ok(FiberRank {
                rank: k,
                witness: Some(MinorWitness { y, indices: idx, minor: value }),
            });
        }
    }
    if r0 == 0 {
        return Ok(FiberRank { rank: 0, witness: None });
    }
    let idx = principal_nonsingular(&v0, r0);
    let minor = v0.submatrix(&idx, &idx).det()?;
    Ok(FiberRank {
        rank: r0,
        witness: Some(MinorWitness { y: y0, indices: idx, minor }),
    })
}

/// Indices of a nonsingular principal submatrix of size `rank`.
fn principal_nonsingular(v: &Matrix, rank: usize) -> Vec<usize> {
    combinations(v.rows(), rank)
        .into_iter()
        .find(|idx| !v.submatrix(idx, idx).det().map_or(true, |d| d.is_zero()))
        .expect("symmetric matrices have a nonsingular principal submatrix of full rank")
}

/// `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// First integer point in height order where a nonzero polynomial does not
/// vanish. Terminates because a nonzero polynomial of degree `d` has a
/// non-root on any grid `{-H..H}^n` with `2H + 1 > d`.
fn first_nonvanishing(p: &Poly, nvars: usize) -> Result<Vec<Rat>> {
    debug_assert!(!p.is_zero());
    for v in lattice::by_height(nvars, u64::MAX, true) {
        let y = rat::ints(&v);
        if !p.eval(&y)?.is_zero() {
            return Ok(y);
        }
    }
    unreachable!("height enumeration is unbounded")
}

/// Result of a strong-equivalence reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongReduction {
    /// The split of `C′` with `C′(x, L(y)) = C(x, y)`.
    pub reduced: SplitCubic,
    /// `y′ = L·y`.
    pub change: LinearChange,
    /// Size of the maximal independent subset of the `M_i`; `M′_i = 0` for
    /// every `i` at or past this index.
    pub independent: usize,
}

/// Rewrites `Σ y_i·Q_i` as `Σ_{j ∈ I} L_j(y)·Q_j` over a maximal independent
/// subset `I` of the quadratic forms (chosen greedily in index order), and
/// completes the `L_j` by the coordinate forms `y_i`, `i ∉ I`. Independent
/// indices come first in the new coordinates. Requires `m = 4` and `h ≥ 11`.
pub fn strong_equivalence_reduce(s: &SplitCubic) -> Result<StrongReduction> {
    if s.m != 4 {
        return Err(Error::Precondition(alloc::format!("x-block must have size 4, found {}", s.m)));
    }
    if s.h < 11 {
        return Err(Error::Precondition(alloc::format!("need h ≥ 11, found h = {}", s.h)));
    }
    let h = s.h;
    let vecs: Vec<Vec<Rat>> = s.mats.iter().map(Matrix::upper_triangle).collect();
    let indep = matrix::independent_prefix(&vecs);
    let t = indep.len();
    let dependent: Vec<usize> = (0..h).filter(|i| !indep.contains(i)).collect();
    // Columns v_j, j ∈ I; solve K·α = v_i for each dependent i.
    let dim = vecs.first().map_or(0, Vec::len);
    let mut l = Matrix::zeros(h, h);
    for (pos, &j) in indep.iter().enumerate() {
        l[(pos, j)] = Rat::one();
    }
    for &i in &dependent {
        let rows: Vec<Vec<Rat>> = (0..dim)
            .map(|r| indep.iter().map(|&j| vecs[j][r].clone()).chain(core::iter::once(vecs[i][r].clone())).collect())
            .collect();
        let (rref, pivots) = Matrix::from_rows(rows)?.rref();
        debug_assert!(pivots.iter().all(|&p| p < t));
        for pos in 0..t {
            if !rref[(pos, t)].is_zero() {
                l[(pos, i)] = rref[(pos, t)].clone();
            }
        }
    }
    for (k, &i) in dependent.iter().enumerate() {
        l[(t + k, i)] = Rat::one();
    }
    let change = LinearChange::new(l)?;
    let reduced = s.transform(&Matrix::identity(s.m), change.inverse().matrix())?;
    let back = reduced.source.pullback(&block_diagonal(&Matrix::identity(s.m), change.matrix()))?;
    if back != s.source || reduced.mats[t..].iter().any(|m| !m.is_zero()) {
        return Err(Error::Precondition("strong equivalence failed to verify".into()));
    }
    Ok(StrongReduction {
        reduced,
        change,
        independent: t,
    })
}

/// Which construction produced a [`CaseWitness`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessCase {
    /// All `q⋆_j` vanish; the corner dominates.
    Corner,
    /// Some `q⋆_j` is nonzero; a border pair dominates.
    Border,
    /// Neither construction applied; found by search on `det A(y)`.
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseWitness {
    pub case: WitnessCase,
    /// Witness in the coordinates of the input split.
    pub y: Vec<Rat>,
    /// `det A(y)` for the input split.
    pub det: Rat,
    /// Split in which the construction ran: the input after `x ↦ B_x·x`,
    /// `y ↦ B_y·y`.
    pub frame: SplitCubic,
    pub x_change: Matrix,
    pub y_change: Matrix,
    /// The witness in the frame is `scale·direction + base`.
    pub direction: Vec<Rat>,
    pub base: Vec<Rat>,
    pub scale: Rat,
    /// Predicted leading coefficient of `det A(P·direction + base)` in `P`
    /// and its degree.
    pub leading: Option<(u32, Rat)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseOutcome {
    Witness(CaseWitness),
    /// `q⋆ ≡ 0` and `c⋆ ≡ 0`: `{y_i = 0 : M_i ≠ 0}` is a linear space on
    /// the hypersurface.
    LinearSpace,
    /// `det A(y)` vanishes identically.
    Degenerate,
}

/// `det A(P·direction + base)` as a polynomial in the single variable `P`.
pub fn fiber_det_in_scale(s: &SplitCubic, direction: &[Rat], base: &[Rat]) -> Result<Poly> {
    check_dim(s.h, direction.len())?;
    check_dim(s.h, base.len())?;
    let p = Poly::var(1, 0);
    let images: Vec<Poly> = direction
        .iter()
        .zip(base)
        .map(|(d, b)| &p.scale(d) + &Poly::constant(1, b.clone()))
        .collect();
    s.fiber_matrix().substitute(&images)?.det()
}

const MAX_DOUBLINGS: u32 = 256;

/// Full-rank fiber witness for a split whose zero matrices `M_i` mark the
/// variables `y_Z`; `q⋆`, `c⋆` are the border and corner at `y_W = 0`.
pub fn case_witness(s: &SplitCubic) -> Result<CaseOutcome> {
    let zs: Vec<usize> = (0..s.h).filter(|&i| s.mats[i].is_zero()).collect();
    let ws: Vec<usize> = (0..s.h).filter(|&i| !s.mats[i].is_zero()).collect();
    if zs.is_empty() {
        return Err(Error::Precondition("no zero matrices M_i".into()));
    }
    if s.m < 2 {
        return Err(Error::Precondition("x-block must have size at least 2".into()));
    }
    let (q_star, c_star) = starred(s, &ws);
    let attempt = if q_star.iter().all(Poly::is_zero) {
        if c_star.is_zero() {
            return Ok(CaseOutcome::LinearSpace);
        }
        corner_case(s, &zs, &ws, &c_star)?
    } else {
        border_case(s, &zs, &ws, &q_star)?
    };
    if let Some(w) = attempt {
        return Ok(CaseOutcome::Witness(w));
    }
    let det = s.fiber_matrix().det()?;
    if det.is_zero() {
        return Ok(CaseOutcome::Degenerate);
    }
    let y = first_nonvanishing(&det, s.h)?;
    let value = s.fiber_quadric(&y)?.det()?;
    Ok(CaseOutcome::Witness(CaseWitness {
        case: WitnessCase::Search,
        det: value,
        frame: s.clone(),
        x_change: Matrix::identity(s.m),
        y_change: Matrix::identity(s.h),
        direction: rat::zeros(s.h),
        base: y.clone(),
        y,
        scale: Rat::zero(),
        leading: None,
    }))
}

fn starred(s: &SplitCubic, ws: &[usize]) -> (Vec<Poly>, Poly) {
    let zero = Rat::zero();
    let kill = |p: &Poly| ws.iter().fold(p.clone(), |acc, &i| acc.eval_var(i, &zero));
    (s.border.iter().map(kill).collect(), kill(&s.corner.to_poly()))
}

/// Doubles `P` from 1 until `det A(P·dir + base) ≠ 0`.
fn scale_until_nonsingular(s: &SplitCubic, dir: &[Rat], base: &[Rat]) -> Result<Option<(Rat, Vec<Rat>)>> {
    let mut p = Rat::one();
    for _ in 0..MAX_DOUBLINGS {
        let y: Vec<Rat> = dir.iter().zip(base).map(|(d, b)| &p * d + b).collect();
        if !s.fiber_quadric(&y)?.det()?.is_zero() {
            return Ok(Some((p, y)));
        }
        p *= rat::int(2);
    }
    Ok(None)
}

fn pencil_witness(s: &SplitCubic, ws: &[usize], size: usize) -> Result<Option<Vec<Rat>>> {
    let mats: Vec<Matrix> = ws.iter().map(|&i| s.mats[i].leading(size)).collect();
    let p = SymmetricPencil::new(size, mats)?;
    Ok(pencil::find_full_rank_point(&p)?.map(|w| w.y))
}

fn scatter(h: usize, idx: &[usize], vals: &[Rat]) -> Vec<Rat> {
    let mut out = rat::zeros(h);
    for (&i, v) in idx.iter().zip(vals) {
        out[i] = v.clone();
    }
    out
}

fn corner_case(s: &SplitCubic, zs: &[usize], ws: &[usize], c_star: &Poly) -> Result<Option<CaseWitness>> {
    let h = s.h;
    let mut b_z = None;
    for v in lattice::by_height(zs.len(), u64::MAX, false) {
        let y = scatter(h, zs, &rat::ints(&v));
        let value = c_star.eval(&y)?;
        if !value.is_zero() {
            b_z = Some((y, value));
            break;
        }
    }
    let (dir, c_value) = b_z.expect("a nonzero cubic has a non-root of height ≤ 2");
    let Some(b_w) = pencil_witness(s, ws, s.m)? else {
        return Ok(None);
    };
    let base = scatter(h, ws, &b_w);
    let det_m = s.fiber_quadric(&base)?.leading(s.m).det()?;
    let Some((scale, y)) = scale_until_nonsingular(s, &dir, &base)? else {
        return Ok(None);
    };
    let det = s.fiber_quadric(&y)?.det()?;
    Ok(Some(CaseWitness {
        case: WitnessCase::Corner,
        y,
        det,
        frame: s.clone(),
        x_change: Matrix::identity(s.m),
        y_change: Matrix::identity(h),
        direction: dir,
        base,
        scale,
        leading: Some((3, c_value * det_m)),
    }))
}

fn border_case(s: &SplitCubic, zs: &[usize], ws: &[usize], q_star: &[Poly]) -> Result<Option<CaseWitness>> {
    let (m, h) = (s.m, s.h);
    let j = q_star.iter().position(|q| !q.is_zero()).expect("some q⋆ is nonzero");
    let q = &q_star[j];
    let z1 = zs[0];
    let square = |k: usize| {
        let mut e = vec![0; h];
        e[k] = 2;
        e
    };
    // y-change within the Z block producing a y_{z1}² term in q⋆_j.
    let mut by = Matrix::identity(h);
    let k = match zs.iter().copied().find(|&k| !q.coeff(&square(k)).is_zero()) {
        Some(k) => k,
        None => {
            let (e, _) = q.terms().next().expect("nonzero");
            let ij = exponent_indices(e);
            let (k, l) = (ij[0], ij[1]);
            // y_l ↦ y_l + y_k
            by[(l, k)] = Rat::one();
            k
        }
    };
    if k != z1 {
        by.swap_cols(k, z1);
    }
    let s2 = s.transform(&Matrix::identity(m), &by)?;
    let (q2, _) = starred(&s2, ws);
    let a: Vec<Rat> = q2.iter().map(|qi| qi.coeff(&square(z1))).collect();
    if a[j].is_zero() {
        return Ok(None);
    }
    // x-change: move x_j last, then x′_m = L(x)/a_j with L(x) = Σ a_i x_i.
    let mut bx = Matrix::identity(m);
    bx.swap_cols(j, m - 1);
    let mut a_sw = a.clone();
    a_sw.swap(j, m - 1);
    let mut shear = Matrix::identity(m);
    for i in 0..m - 1 {
        shear[(m - 1, i)] = -(&a_sw[i] / &a_sw[m - 1]);
    }
    let bx = bx.mul(&shear)?;
    let frame = s.transform(&bx, &by)?;
    let (q3, _) = starred(&frame, ws);
    let a3: Vec<Rat> = q3.iter().map(|qi| qi.coeff(&square(z1))).collect();
    let zero_kept = zs.iter().all(|&i| frame.mats[i].is_zero());
    if !zero_kept || a3[..m - 1].iter().any(|x| !x.is_zero()) || a3[m - 1].is_zero() {
        return Ok(None);
    }
    let Some(b_w) = pencil_witness(&frame, ws, m - 1)? else {
        return Ok(None);
    };
    let base = scatter(h, ws, &b_w);
    let det_m1 = frame.fiber_quadric(&base)?.leading(m - 1).det()?;
    let dir = rat::unit_vector(h, z1);
    let Some((scale, y_frame)) = scale_until_nonsingular(&frame, &dir, &base)? else {
        return Ok(None);
    };
    let y = by.mul_vec(&y_frame)?;
    let det = s.fiber_quadric(&y)?.det()?;
    debug_assert!(!det.is_zero());
    let a = &a3[m - 1];
    Ok(Some(CaseWitness {
        case: WitnessCase::Border,
        y,
        det,
        frame,
        x_change: bx,
        y_change: by,
        direction: dir,
        base,
        scale,
        leading: Some((4, -(a * a) * det_m1)),
    }))
}

/// Human-readable label of a [`WitnessCase`].
pub fn case_label(c: WitnessCase) -> String {
    String::from(match c {
        WitnessCase::Corner => "corner",
        WitnessCase::Border => "border",
        WitnessCase::Search => "search",
    })
}
