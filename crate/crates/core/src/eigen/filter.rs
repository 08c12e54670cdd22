//! Chebyshev spectral transformation for the Lanczos driver.
//!
//! Lanczos convergence at the bottom of the spectrum degrades with the ratio
//! of the wanted gaps to the full spectral width, which the φ kinetic term
//! makes of order 1e-4. Running the iteration on
//! `-T_d((H - σ) / e)`, with `[σ - e, σ + e]` covering the unwanted upper
//! spectrum, maps the lowest eigenvalues of H to well separated lowest
//! eigenvalues of the filter while keeping the eigenvectors. A final
//! Rayleigh–Ritz step with H recovers the energies.

use super::lanczos::{lanczos_on, lanczos_partial, LinearOp};
use super::{zero_vec, EigenOptions, EigenSolution};
use crate::operator::HermitianOperator;
use crate::scalar::{axpy, czero, inner, lit, norm, scale, to_f64, Cplx, Real};

/// Amplification of the estimated ground level relative to the damped band.
const TARGET_GAIN: f64 = 100.0;
const MAX_DEGREE: usize = 400;
/// Fewest Ritz values probed when placing the filter cut.
const MIN_PROBE: usize = 20;

struct ChebyshevFilter<'a, T> {
    h: &'a HermitianOperator<T>,
    center: T,
    half_width: T,
    degree: usize,
    gain: T,
}

impl<'a, T: Real> ChebyshevFilter<'a, T> {
    /// Damps `[cut, upper]` to `[-1, 1]` with gain about `TARGET_GAIN` at `bottom`.
    fn new(h: &'a HermitianOperator<T>, bottom: f64, cut: f64, upper: f64) -> Self {
        let x0 = 1.0 + 2.0 * (cut - bottom) / (upper - cut);
        let mut degree = (TARGET_GAIN.acosh() / x0.acosh()).ceil() as usize;
        degree = (degree + degree % 2).clamp(2, MAX_DEGREE);
        let gain = (degree as f64 * x0.acosh()).cosh();
        Self {
            h,
            center: lit(0.5 * (upper + cut)),
            half_width: lit(0.5 * (upper - cut)),
            degree,
            gain: lit(gain),
        }
    }
}

impl<T: Real> LinearOp<T> for ChebyshevFilter<'_, T> {
    fn dim(&self) -> usize {
        self.h.dim()
    }

    fn apply(&self, x: &[Cplx<T>], y: &mut [Cplx<T>]) {
        let n = x.len();
        let inv = T::one() / self.half_width;
        let two: T = lit(2.0);
        let mut prev = x.to_vec();
        let mut cur = zero_vec(n);
        let mut tmp = zero_vec(n);
        self.h.apply(x, &mut cur);
        for (c, xi) in cur.iter_mut().zip(x) {
            *c = (*c - xi.scale(self.center)).scale(inv);
        }
        for _ in 2..=self.degree {
            self.h.apply(&cur, &mut tmp);
            for ((t, c), p) in tmp.iter_mut().zip(&cur).zip(&prev) {
                *t = (*t - c.scale(self.center)).scale(two * inv) - *p;
            }
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut tmp);
        }
        for (yi, c) in y.iter_mut().zip(&cur) {
            *yi = -*c;
        }
    }

    fn scale_estimate(&self) -> T {
        self.gain
    }

    fn cost(&self) -> usize {
        self.degree
    }
}

/// Rayleigh–Ritz of H on an orthonormal set; returns ascending pairs with
/// explicit residuals.
fn rayleigh_ritz<T: Real>(h: &HermitianOperator<T>, x: &[Vec<Cplx<T>>]) -> (Vec<T>, Vec<Vec<Cplx<T>>>, Vec<T>) {
    let m = x.len();
    let hx: Vec<Vec<Cplx<T>>> = x.iter().map(|v| h.apply_new(v)).collect();
    let mut a = vec![czero::<T>(); m * m];
    for i in 0..m {
        for j in 0..m {
            a[i * m + j] = inner(&x[i], &hx[j]);
        }
    }
    let half: T = lit(0.5);
    let sym: Vec<Cplx<T>> = (0..m * m).map(|ij| (a[ij] + a[(ij % m) * m + ij / m].conj()).scale(half)).collect();
    let (vals, s) = T::hermitian_eigh(m, &sym);
    let n = x[0].len();
    let mut vecs = Vec::with_capacity(m);
    let mut res = Vec::with_capacity(m);
    for (j, lambda) in vals.iter().enumerate() {
        let mut y = zero_vec(n);
        let mut hy = zero_vec(n);
        for i in 0..m {
            axpy(s[j * m + i], &x[i], &mut y);
            axpy(s[j * m + i], &hx[i], &mut hy);
        }
        let ny = norm(&y);
        scale(T::one() / ny, &mut y);
        scale(T::one() / ny, &mut hy);
        axpy(-Cplx::new(*lambda, T::zero()), &y, &mut hy);
        res.push(norm(&hy));
        vecs.push(y);
    }
    (vals, vecs, res)
}

/// Filtered Lanczos; `None` when the spectrum gives no room for a filter
/// or the filtered solve does not reach the requested accuracy.
pub(crate) fn filtered_lanczos<T: Real>(
    h: &HermitianOperator<T>,
    k: usize,
    opts: &EigenOptions,
) -> Option<EigenSolution<T>> {
    let n = h.dim();
    let b = opts.block_size.max(1);
    let kf = (k + b).min(n - 1);
    let count = (kf + 4).max(MIN_PROBE).min(n - 1);
    let hnorm = h.norm_estimate();
    let hnorm_f = to_f64(hnorm);
    let (_, upper) = h.gershgorin_bounds();
    let upper = to_f64(upper);

    // Short unrestarted Krylov runs bracket the wanted band; every
    // Rayleigh–Ritz value is an upper bound on the matching eigenvalue.
    let probe = EigenOptions { max_basis: (2 * count).max(40), max_restarts: 0, tol: 1e-300, ..*opts };
    let first = lanczos_partial(h, count, &probe);
    let mut matvecs = first.iterations;
    if first.len() < count {
        return None;
    }
    let mut theta: Vec<f64> = first.eigenvalues.iter().map(|v| to_f64(*v)).collect();
    let mut cut = theta[count - 1];
    let mut bottom = theta[0];
    for _ in 0..8 {
        if !(cut - bottom > 1e-9 * hnorm_f) || !(upper - cut > 1e-9 * hnorm_f) {
            return None;
        }
        let f = ChebyshevFilter::new(h, bottom, cut, upper);
        let trial = lanczos_partial(&f, count, &probe);
        matvecs += trial.iterations + count;
        let (vals, _, _) = rayleigh_ritz(h, &trial.eigenvectors);
        theta = vals.iter().map(|v| to_f64(*v)).collect();
        let improved = theta[count - 1] < cut - 0.05 * (cut - bottom);
        cut = cut.min(theta[count - 1]);
        bottom = bottom.min(theta[0]);
        if !improved {
            break;
        }
    }
    if !(cut - bottom > 1e-9 * hnorm_f) || !(upper - cut > 1e-9 * hnorm_f) {
        return None;
    }
    let filter = ChebyshevFilter::new(h, bottom, cut, upper);

    let tol_abs = opts.tol * hnorm_f;
    let mut tol_f = opts.tol;
    for _ in 0..3 {
        let fopts = EigenOptions { tol: tol_f, ..*opts };
        let sol = lanczos_on(&filter, kf, &fopts).ok()?;
        matvecs += sol.iterations + kf;
        let (vals, vecs, res) = rayleigh_ritz(h, &sol.eigenvectors);
        if to_f64(vals[k - 1]) >= cut {
            return None;
        }
        if res[..k].iter().all(|r| to_f64(*r) <= tol_abs) {
            return Some(EigenSolution {
                converged: vec![true; k],
                eigenvalues: vals[..k].to_vec(),
                eigenvectors: vecs.into_iter().take(k).collect(),
                residuals: res[..k].to_vec(),
                iterations: matvecs,
                norm_estimate: hnorm,
            });
        }
        tol_f *= 1e-2;
        if tol_f < 10.0 * T::EPS_F64 {
            break;
        }
    }
    None
}
