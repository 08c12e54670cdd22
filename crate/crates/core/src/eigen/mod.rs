//! Lowest eigenpairs of sparse Hermitian operators.
//!
//! [`lowest_eigenpairs`] runs a thick-restart block Lanczos iteration with
//! full reorthogonalization; [`dense_oracle`] diagonalizes the dense matrix
//! and is used to cross-check it.

mod filter;
mod lanczos;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::scalar::{czero, inner, norm, Cplx, Real};

pub use lanczos::{block_lanczos, LinearOp};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SEED: u64 = 0x5eed_0e1f;
/// Largest dimension [`dense_oracle`] accepts.
pub const DEFAULT_DENSE_LIMIT: usize = 4000;
/// At or below this dimension [`lowest_eigenpairs`] diagonalizes densely.
pub const DEFAULT_DENSE_THRESHOLD: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    /// Residual target relative to the Gershgorin bound on ‖H‖.
    pub tol: f64,
    pub seed: u64,
    pub block_size: usize,
    /// Largest Krylov basis before a restart; 0 picks `max(3k, k + 60)`.
    pub max_basis: usize,
    pub max_restarts: usize,
    pub dense_threshold: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            seed: DEFAULT_SEED,
            block_size: 2,
            max_basis: 0,
            max_restarts: 2000,
            dense_threshold: DEFAULT_DENSE_THRESHOLD,
        }
    }
}

impl EigenOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    /// Never take the dense shortcut.
    pub fn sparse_only(mut self) -> Self {
        self.dense_threshold = 0;
        self
    }
}

#[derive(Debug, Clone)]
pub struct EigenSolution<T> {
    /// Ascending, GHz.
    pub eigenvalues: Vec<T>,
    /// Unit-norm eigenvectors, same order as `eigenvalues`.
    pub eigenvectors: Vec<Vec<Cplx<T>>>,
    /// ‖H v - λ v‖₂ per pair.
    pub residuals: Vec<T>,
    /// Matrix-vector products performed (0 for a dense solve).
    pub iterations: usize,
    pub converged: Vec<bool>,
    /// Gershgorin bound on ‖H‖ used for the tolerance.
    pub norm_estimate: T,
}

impl<T: Real> EigenSolution<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }

    /// Largest |<v_i|v_j>| over i ≠ j.
    pub fn max_overlap(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.len() {
            for j in 0..i {
                let o = inner(&self.eigenvectors[i], &self.eigenvectors[j]).norm();
                worst = worst.max(o.to_f64().unwrap_or(f64::INFINITY));
            }
        }
        worst
    }

    /// Keeps the lowest `k` pairs.
    pub fn truncated(mut self, k: usize) -> Self {
        self.eigenvalues.truncate(k);
        self.eigenvectors.truncate(k);
        self.residuals.truncate(k);
        self.converged.truncate(k);
        self
    }
}

/// Explicit residual ‖H v - λ v‖.
pub fn residual_norm<T: Real>(h: &HermitianOperator<T>, lambda: T, v: &[Cplx<T>]) -> T {
    let mut hv = h.apply_new(v);
    for (y, x) in hv.iter_mut().zip(v) {
        *y = *y - x.scale(lambda);
    }
    norm(&hv)
}

/// The `k` lowest eigenpairs with default options and the given tolerance.
pub fn lowest_eigenpairs<T: Real>(h: &HermitianOperator<T>, k: usize, tol: f64) -> Result<EigenSolution<T>> {
    lowest_eigenpairs_with(h, k, &EigenOptions::with_tol(tol))
}

pub fn lowest_eigenpairs_with<T: Real>(
    h: &HermitianOperator<T>,
    k: usize,
    opts: &EigenOptions,
) -> Result<EigenSolution<T>> {
    if k == 0 || k >= h.dim() {
        return Err(Error::Usage(format!("requested {k} eigenpairs of a {}-dimensional operator", h.dim())));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Usage(format!("eigensolver tolerance must be positive, got {}", opts.tol)));
    }
    if h.dim() <= opts.dense_threshold {
        return Ok(dense_oracle_limited(h, usize::MAX)?.truncated(k));
    }
    if let Some(sol) = filter::filtered_lanczos(h, k, opts) {
        return Ok(sol);
    }
    log::debug!("polynomial filter unavailable, running plain Lanczos on dim {}", h.dim());
    block_lanczos(h, k, opts)
}

/// Full spectrum by dense diagonalization.
pub fn dense_oracle<T: Real>(h: &HermitianOperator<T>) -> Result<EigenSolution<T>> {
    dense_oracle_limited(h, DEFAULT_DENSE_LIMIT)
}

pub fn dense_oracle_limited<T: Real>(h: &HermitianOperator<T>, limit: usize) -> Result<EigenSolution<T>> {
    let n = h.dim();
    if n > limit {
        return Err(Error::Resource { dim: n, max: limit });
    }
    let (vals, vecs) = T::hermitian_eigh(n, &h.to_dense());
    let eigenvectors: Vec<Vec<Cplx<T>>> = (0..n).map(|j| vecs[j * n..(j + 1) * n].to_vec()).collect();
    let residuals: Vec<T> = vals.iter().zip(&eigenvectors).map(|(l, v)| residual_norm(h, *l, v)).collect();
    Ok(EigenSolution {
        converged: vec![true; n],
        eigenvalues: vals,
        eigenvectors,
        residuals,
        iterations: 0,
        norm_estimate: h.norm_estimate(),
    })
}

pub(crate) fn zero_vec<T: Real>(n: usize) -> Vec<Cplx<T>> {
    vec![czero(); n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{BasisTag, TripletBuilder};
    use crate::scalar::cplx;

    #[test]
    fn pauli_x() {
        let mut b = TripletBuilder::<f64>::new(2);
        b.push_pair(0, 1, cplx(1.0, 0.0));
        let h = b.build(BasisTag::ZetaOnly).unwrap();
        let s = dense_oracle(&h).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dense_limit_is_a_resource_error() {
        let h = HermitianOperator::<f64>::identity(5, BasisTag::ZetaOnly);
        assert!(matches!(dense_oracle_limited(&h, 4), Err(Error::Resource { dim: 5, max: 4 })));
    }

    #[test]
    fn rejects_bad_requests() {
        let h = HermitianOperator::<f64>::identity(5, BasisTag::ZetaOnly);
        assert!(lowest_eigenpairs(&h, 5, 1e-10).is_err());
        assert!(lowest_eigenpairs(&h, 0, 1e-10).is_err());
        assert!(lowest_eigenpairs(&h, 2, 0.0).is_err());
    }
}
