//! Sparse Hermitian operators in compressed-row form.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{czero, inner, Cplx, Real};

/// Which product space an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisTag {
    /// θ charge basis ⊗ φ grid.
    ThetaPhi,
    /// θ charge basis ⊗ φ grid ⊗ ζ Fock basis.
    ThetaPhiZeta,
    ZetaOnly,
    /// Eigenstates of the 2D Hamiltonian ⊗ ζ Fock basis.
    QubitZeta,
}

/// Hermiticity is required to this relative accuracy.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Rows above which matrix-vector products are split across threads.
const PARALLEL_ROWS: usize = 32_768;

#[derive(Debug, Clone)]
pub struct HermitianOperator<T> {
    dim: usize,
    tag: BasisTag,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Cplx<T>>,
}

/// Accumulates (row, col, value) entries; duplicates are summed.
#[derive(Debug, Clone)]
pub struct TripletBuilder<T> {
    dim: usize,
    entries: Vec<(usize, usize, Cplx<T>)>,
}

impl<T: Real> TripletBuilder<T> {
    pub fn new(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    pub fn with_capacity(dim: usize, cap: usize) -> Self {
        Self { dim, entries: Vec::with_capacity(cap) }
    }

    #[inline]
    pub fn push(&mut self, row: usize, col: usize, v: Cplx<T>) {
        debug_assert!(row < self.dim && col < self.dim);
        if v.re != T::zero() || v.im != T::zero() {
            self.entries.push((row, col, v));
        }
    }

    #[inline]
    pub fn push_real(&mut self, row: usize, col: usize, v: T) {
        self.push(row, col, Cplx::new(v, T::zero()));
    }

    /// Pushes `v` at (row, col) and its conjugate at (col, row).
    #[inline]
    pub fn push_pair(&mut self, row: usize, col: usize, v: Cplx<T>) {
        self.push(row, col, v);
        self.push(col, row, v.conj());
    }

    /// Sorts, merges duplicates and checks Hermiticity.
    pub fn build(mut self, tag: BasisTag) -> Result<HermitianOperator<T>> {
        self.entries.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; self.dim + 1];
        let mut cols = Vec::with_capacity(self.entries.len());
        let mut vals: Vec<Cplx<T>> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in self.entries {
            if last == Some((r, c)) {
                let top = vals.last_mut().unwrap();
                *top = *top + v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..self.dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let op = HermitianOperator { dim: self.dim, tag, row_ptr, cols, vals };
        let dev = op.hermiticity_defect();
        if dev > HERMITICITY_TOL {
            return Err(Error::Internal(format!("assembled operator is not Hermitian (relative defect {dev:.3e})")));
        }
        Ok(op)
    }
}

impl<T: Real> HermitianOperator<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_tag(&self) -> BasisTag {
        self.tag
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Iterator over stored (row, col, value) entries.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Cplx<T>)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k]))
        })
    }

    pub fn get(&self, row: usize, col: usize) -> Cplx<T> {
        let lo = self.row_ptr[row];
        let hi = self.row_ptr[row + 1];
        match self.cols[lo..hi].binary_search(&col) {
            Ok(k) => self.vals[lo + k],
            Err(_) => czero(),
        }
    }

    pub fn max_abs(&self) -> T {
        self.vals.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    /// max |H - H†| / max |H| over stored entries (0 for the zero operator).
    pub fn hermiticity_defect(&self) -> f64 {
        let scale = self.max_abs();
        let mut worst = T::zero();
        for (r, c, v) in self.entries() {
            let mirror = self.get(c, r).conj();
            worst = worst.max((v - mirror).norm());
        }
        if scale > T::zero() {
            (worst / scale).to_f64().unwrap_or(f64::INFINITY)
        } else {
            0.0
        }
    }

    /// Gershgorin bound on the spectral radius.
    pub fn norm_estimate(&self) -> T {
        (0..self.dim)
            .map(|r| (self.row_ptr[r]..self.row_ptr[r + 1]).map(|k| self.vals[k].norm()).sum::<T>())
            .fold(T::zero(), |m, s| m.max(s))
    }

    /// Gershgorin enclosure (lower, upper) of the spectrum.
    pub fn gershgorin_bounds(&self) -> (T, T) {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for r in 0..self.dim {
            let mut d = T::zero();
            let mut off = T::zero();
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.cols[k] == r {
                    d = self.vals[k].re;
                } else {
                    off = off + self.vals[k].norm();
                }
            }
            lo = lo.min(d - off);
            hi = hi.max(d + off);
        }
        (lo, hi)
    }

    /// y = H x
    pub fn apply(&self, x: &[Cplx<T>], y: &mut [Cplx<T>]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let row = |r: usize| {
            let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
            let mut re = T::zero();
            let mut im = T::zero();
            for (c, v) in self.cols[lo..hi].iter().zip(&self.vals[lo..hi]) {
                let xc = x[*c];
                re = re + v.re * xc.re - v.im * xc.im;
                im = im + v.re * xc.im + v.im * xc.re;
            }
            Cplx::new(re, im)
        };
        if self.dim >= PARALLEL_ROWS {
            y.par_iter_mut().enumerate().for_each(|(r, yr)| *yr = row(r));
        } else {
            for (r, yr) in y.iter_mut().enumerate() {
                *yr = row(r);
            }
        }
    }

    pub fn apply_new(&self, x: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let mut y = vec![czero(); self.dim];
        self.apply(x, &mut y);
        y
    }

    /// <a|H|b>
    pub fn matrix_element(&self, a: &[Cplx<T>], b: &[Cplx<T>]) -> Cplx<T> {
        inner(a, &self.apply_new(b))
    }

    pub fn expectation(&self, v: &[Cplx<T>]) -> T {
        self.matrix_element(v, v).re
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Cplx<T>> {
        let mut m = vec![czero(); self.dim * self.dim];
        for (r, c, v) in self.entries() {
            m[r * self.dim + c] = v;
        }
        m
    }

    /// Dense Hermitian matrix given row-major.
    pub fn from_dense(dim: usize, row_major: &[Cplx<T>], tag: BasisTag) -> Result<Self> {
        assert_eq!(row_major.len(), dim * dim);
        let mut b = TripletBuilder::new(dim);
        for r in 0..dim {
            for c in 0..dim {
                b.push(r, c, row_major[r * dim + c]);
            }
        }
        b.build(tag)
    }

    pub fn identity(dim: usize, tag: BasisTag) -> Self {
        let mut b = TripletBuilder::new(dim);
        for i in 0..dim {
            b.push_real(i, i, T::one());
        }
        b.build(tag).expect("identity is Hermitian")
    }

    /// Diagonal operator.
    pub fn diagonal(values: &[T], tag: BasisTag) -> Self {
        let mut b = TripletBuilder::new(values.len());
        for (i, v) in values.iter().enumerate() {
            b.push_real(i, i, *v);
        }
        b.build(tag).expect("real diagonal is Hermitian")
    }

    /// `self + alpha * other`, same tag as `self`.
    pub fn add_scaled(&self, alpha: T, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Usage(format!("dimension mismatch {} vs {}", self.dim, other.dim)));
        }
        let mut b = TripletBuilder::with_capacity(self.dim, self.nnz() + other.nnz());
        for (r, c, v) in self.entries() {
            b.push(r, c, v);
        }
        for (r, c, v) in other.entries() {
            b.push(r, c, v.scale(alpha));
        }
        b.build(self.tag)
    }
}
