use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{zero_vec, EigenOptions, EigenSolution};
use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::scalar::{axpy, cplx, czero, inner, lit, norm, scale, to_f64, Cplx, Real};

/// Projected matrix M[i][j] = <v_i|H v_j>, fixed capacity.
struct Projected<T> {
    cap: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> Projected<T> {
    fn new(cap: usize) -> Self {
        Self { cap, data: vec![czero(); cap * cap] }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> Cplx<T> {
        self.data[i * self.cap + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: Cplx<T>) {
        self.data[i * self.cap + j] = v;
    }

    fn clear_index(&mut self, idx: usize) {
        for j in 0..self.cap {
            self.set(idx, j, czero());
            self.set(j, idx, czero());
        }
    }

    fn clear(&mut self) {
        self.data.iter_mut().for_each(|z| *z = czero());
    }
}

/// Orthogonalizes `w` against `basis` twice; returns the accumulated coefficients.
fn cgs2<T: Real>(basis: &[Vec<Cplx<T>>], w: &mut [Cplx<T>]) -> Vec<Cplx<T>> {
    let mut coef = vec![czero(); basis.len()];
    for _ in 0..2 {
        for (c, v) in coef.iter_mut().zip(basis) {
            let d = inner(v, w);
            *c = *c + d;
            axpy(-d, v, w);
        }
    }
    coef
}

fn random_vector<T: Real>(n: usize, rng: &mut ChaCha8Rng) -> Vec<Cplx<T>> {
    (0..n).map(|_| cplx(lit(rng.gen_range(-1.0..1.0)), lit(rng.gen_range(-1.0..1.0)))).collect()
}

/// Appends a random unit vector orthogonal to `basis`. Returns false when
/// the basis already spans the space.
fn inject<T: Real>(basis: &mut Vec<Vec<Cplx<T>>>, n: usize, rng: &mut ChaCha8Rng) -> bool {
    if basis.len() >= n {
        return false;
    }
    for _ in 0..8 {
        let mut v = random_vector::<T>(n, rng);
        let before = norm(&v);
        cgs2(basis, &mut v);
        let after = norm(&v);
        if after > before * lit(1e-6) {
            scale(T::one() / after, &mut v);
            basis.push(v);
            return true;
        }
    }
    false
}

fn ritz_vector<T: Real>(basis: &[Vec<Cplx<T>>], coeffs: &[Cplx<T>]) -> Vec<Cplx<T>> {
    let mut x = zero_vec(basis[0].len());
    for (c, v) in coeffs.iter().zip(basis) {
        axpy(*c, v, &mut x);
    }
    x
}

/// Hermitian linear map the Lanczos iteration can run on.
pub trait LinearOp<T: Real>: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[Cplx<T>], y: &mut [Cplx<T>]);
    /// Magnitude that residual tolerances are measured against.
    fn scale_estimate(&self) -> T;
    /// Products with H per application.
    fn cost(&self) -> usize {
        1
    }
}

impl<T: Real> LinearOp<T> for HermitianOperator<T> {
    fn dim(&self) -> usize {
        HermitianOperator::dim(self)
    }

    fn apply(&self, x: &[Cplx<T>], y: &mut [Cplx<T>]) {
        HermitianOperator::apply(self, x, y)
    }

    fn scale_estimate(&self) -> T {
        self.norm_estimate()
    }
}

fn op_residual<T: Real, O: LinearOp<T>>(op: &O, lambda: T, v: &[Cplx<T>]) -> T {
    let mut y = zero_vec(v.len());
    op.apply(v, &mut y);
    for (yi, xi) in y.iter_mut().zip(v) {
        *yi = *yi - xi.scale(lambda);
    }
    norm(&y)
}

/// Thick-restart block Lanczos for the `k` lowest eigenpairs.
///
/// The basis holds processed vectors (whose images under H are expanded in
/// the basis) followed by a frontier of at most `block_size` unprocessed
/// vectors. Rayleigh–Ritz runs on the processed block; the frontier rows of
/// the projected matrix give the residual norms. When the frontier empties
/// before the basis spans the space, a random orthogonal vector is injected,
/// which resolves exact degeneracies beyond the block size.
pub fn block_lanczos<T: Real>(h: &HermitianOperator<T>, k: usize, opts: &EigenOptions) -> Result<EigenSolution<T>> {
    lanczos_on(h, k, opts)
}

pub(crate) fn lanczos_on<T: Real, O: LinearOp<T>>(h: &O, k: usize, opts: &EigenOptions) -> Result<EigenSolution<T>> {
    lanczos_impl(h, k, opts, false)
}

/// Like [`lanczos_on`] but returns the current Ritz pairs instead of an
/// error when the restart budget runs out.
pub(crate) fn lanczos_partial<T: Real, O: LinearOp<T>>(h: &O, k: usize, opts: &EigenOptions) -> EigenSolution<T> {
    lanczos_impl(h, k, opts, true).expect("partial Lanczos does not fail")
}

fn lanczos_impl<T: Real, O: LinearOp<T>>(h: &O, k: usize, opts: &EigenOptions, partial: bool) -> Result<EigenSolution<T>> {
    let n = h.dim();
    let b = opts.block_size.max(1).min(n);
    let m_max = if opts.max_basis == 0 { (3 * k).max(k + 60) } else { opts.max_basis };
    let m_max = m_max.max(k + 2 * b + 1).min(n);
    let hnorm = h.scale_estimate();
    let hnorm_f = to_f64(hnorm).max(f64::MIN_POSITIVE);
    let tol_abs = opts.tol * hnorm_f;
    let floor = 100.0 * T::EPS_F64 * hnorm_f;
    let breakdown = lit::<T>(1e3 * T::EPS_F64) * hnorm;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut basis: Vec<Vec<Cplx<T>>> = Vec::with_capacity(m_max);
    let mut proj = Projected::<T>::new(m_max);
    for _ in 0..b {
        inject(&mut basis, n, &mut rng);
    }
    let mut processed = 0usize;
    let mut matvecs = 0usize;
    let mut restarts = 0usize;
    let mut target = tol_abs;

    loop {
        let full_space = |len: usize| len == n;
        while processed < basis.len() && (basis.len() < m_max || full_space(basis.len())) {
            let p = processed;
            let mut w = zero_vec(n);
            h.apply(&basis[p], &mut w);
            matvecs += h.cost();
            let coef = cgs2(&basis, &mut w);
            for (i, c) in coef.iter().enumerate() {
                proj.set(i, p, *c);
            }
            processed += 1;
            let beta = norm(&w);
            if beta > breakdown && basis.len() < n {
                scale(T::one() / beta, &mut w);
                let idx = basis.len();
                basis.push(w);
                proj.clear_index(idx);
                proj.set(idx, p, cplx(beta, T::zero()));
            }
            if processed == basis.len() && basis.len() < m_max {
                let idx = basis.len();
                if inject(&mut basis, n, &mut rng) {
                    proj.clear_index(idx);
                }
            }
        }

        // Rayleigh–Ritz on the processed block.
        let np = processed;
        let frontier: Vec<usize> = (np..basis.len()).collect();
        let mut a = vec![czero::<T>(); np * np];
        let half: T = lit(0.5);
        for i in 0..np {
            for j in 0..np {
                a[i * np + j] = (proj.get(i, j) + proj.get(j, i).conj()).scale(half);
            }
        }
        let (theta, s) = T::hermitian_eigh(np, &a);
        let implicit: Vec<T> = (0..np)
            .map(|j| {
                let sj = &s[j * np..(j + 1) * np];
                frontier
                    .iter()
                    .map(|&f| (0..np).fold(czero::<T>(), |acc, i| acc + proj.get(f, i) * sj[i]).norm_sqr())
                    .sum::<T>()
                    .sqrt()
            })
            .collect();

        let want = k.min(np);
        let implicit_ok = want == k && implicit[..k].iter().all(|r| to_f64(*r) <= target);
        if implicit_ok || frontier.is_empty() {
            let mut values = Vec::with_capacity(k);
            let mut vectors = Vec::with_capacity(k);
            let mut residuals = Vec::with_capacity(k);
            for j in 0..want {
                let mut x = ritz_vector(&basis[..np], &s[j * np..(j + 1) * np]);
                let nx = norm(&x);
                scale(T::one() / nx, &mut x);
                residuals.push(op_residual(h, theta[j], &x));
                values.push(theta[j]);
                vectors.push(x);
            }
            let converged: Vec<bool> = residuals.iter().map(|r| to_f64(*r) <= tol_abs).collect();
            if want == k && converged.iter().all(|&c| c) {
                return Ok(EigenSolution {
                    eigenvalues: values,
                    eigenvectors: vectors,
                    residuals,
                    iterations: matvecs,
                    converged,
                    norm_estimate: hnorm,
                });
            }
            target = (target * 0.1).max(floor);
        }

        restarts += 1;
        if restarts > opts.max_restarts || (frontier.is_empty() && full_space(basis.len())) {
            if partial {
                let vectors: Vec<Vec<Cplx<T>>> = (0..want)
                    .map(|j| {
                        let mut x = ritz_vector(&basis[..np], &s[j * np..(j + 1) * np]);
                        let nx = norm(&x);
                        scale(T::one() / nx, &mut x);
                        x
                    })
                    .collect();
                return Ok(EigenSolution {
                    eigenvalues: theta[..want].to_vec(),
                    eigenvectors: vectors,
                    residuals: implicit[..want].to_vec(),
                    iterations: matvecs,
                    converged: implicit[..want].iter().map(|r| to_f64(*r) <= tol_abs).collect(),
                    norm_estimate: hnorm,
                });
            }
            let partial_residuals: Vec<f64> = implicit[..want].iter().map(|r| to_f64(*r)).collect();
            return Err(Error::NotConverged {
                iterations: matvecs,
                converged: partial_residuals.iter().filter(|r| **r <= tol_abs).count(),
                requested: k,
                worst_residual: partial_residuals.iter().cloned().fold(0.0, f64::max),
                partial_eigenvalues: theta[..want].iter().map(|t| to_f64(*t)).collect(),
                partial_residuals,
            });
        }

        // Thick restart: keep the lowest q Ritz vectors plus the frontier.
        let q = (k + (m_max - k) / 2).min(np.saturating_sub(1)).max(k.min(np));
        let mut fresh: Vec<Vec<Cplx<T>>> = Vec::with_capacity(m_max);
        for j in 0..q {
            fresh.push(ritz_vector(&basis[..np], &s[j * np..(j + 1) * np]));
        }
        let coupling: Vec<Vec<Cplx<T>>> = frontier
            .iter()
            .map(|&f| {
                (0..q)
                    .map(|j| (0..np).fold(czero::<T>(), |acc, i| acc + proj.get(f, i) * s[j * np + i]))
                    .collect()
            })
            .collect();
        let frontier_vecs: Vec<Vec<Cplx<T>>> = frontier.iter().map(|&f| std::mem::take(&mut basis[f])).collect();
        proj.clear();
        for (j, t) in theta.iter().take(q).enumerate() {
            proj.set(j, j, cplx(*t, T::zero()));
        }
        for (fi, v) in frontier_vecs.into_iter().enumerate() {
            let idx = q + fi;
            for j in 0..q {
                proj.set(idx, j, coupling[fi][j]);
                proj.set(j, idx, coupling[fi][j].conj());
            }
            fresh.push(v);
        }
        basis = fresh;
        processed = q;
        if processed == basis.len() {
            inject(&mut basis, n, &mut rng);
        }
    }
}
