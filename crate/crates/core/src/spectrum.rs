//! Parameter sweeps, level tracking, dressed-state labels and energy
//! derivatives.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::BasisSpec;
use crate::eigen::{lowest_eigenpairs_with, EigenOptions, EigenSolution};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_h_2d, parameter_derivative_2d, SweepParameter};
use crate::params::CircuitParams;
use crate::scalar::{czero, inner, lit, to_f64, Cplx, Real};
use crate::units::ghz_to_rad_per_s;

/// Levels retained per sweep point unless configured otherwise.
pub const DEFAULT_SWEEP_LEVELS: usize = 15;
pub const DEFAULT_HYBRIDIZATION_THRESHOLD: f64 = 0.5;
/// Consecutive-point overlap below which a tracked level is flagged.
pub const TRACKING_THRESHOLD: f64 = 0.8;
/// Fraction of failed sweep points that aborts the sweep.
pub const MAX_FAILED_FRACTION: f64 = 0.1;

/// Lowest `k` eigenpairs of the 2D Hamiltonian.
pub fn solve_2d<T: Real>(
    params: &CircuitParams<T>,
    basis: &BasisSpec<T>,
    k: usize,
    opts: &EigenOptions,
) -> Result<EigenSolution<T>> {
    let h = build_h_2d(params, basis)?;
    lowest_eigenpairs_with(&h, k, opts)
}

/// Default finite-difference step for a parameter at value `x`.
pub fn default_step(parameter: SweepParameter, x: f64) -> f64 {
    match parameter {
        SweepParameter::Flux | SweepParameter::NgTheta => 1e-3,
        SweepParameter::EJ | SweepParameter::EL => 1e-4 * x.abs(),
    }
}

/// First and second derivative with Richardson error estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Derivatives {
    pub d1: f64,
    pub d2: f64,
    pub err1: f64,
    pub err2: f64,
    pub step: f64,
}

/// Central differences of `f` at `x0` with steps `h` and `h/2`, combined by
/// one Richardson extrapolation. `f` returns a value and its absolute
/// uncertainty; the uncertainty is propagated into the error estimates.
pub fn richardson_derivative<F>(mut f: F, x0: f64, h: f64) -> Result<Derivatives>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::domain("step", format!("must be positive, got {h}")));
    }
    let hh = 0.5 * h;
    let (f0, e0) = f(x0)?;
    let (fp, ep) = f(x0 + h)?;
    let (fm, em) = f(x0 - h)?;
    let (gp, gpe) = f(x0 + hh)?;
    let (gm, gme) = f(x0 - hh)?;
    for v in [f0, fp, fm, gp, gm] {
        if !v.is_finite() {
            return Err(Error::Internal(format!("non-finite function value near {x0}")));
        }
    }
    let noise = [e0, ep, em, gpe, gme].into_iter().fold(0.0, f64::max);
    let d1_h = (fp - fm) / (2.0 * h);
    let d1_hh = (gp - gm) / (2.0 * hh);
    let d2_h = (fp - 2.0 * f0 + fm) / (h * h);
    let d2_hh = (gp - 2.0 * f0 + gm) / (hh * hh);
    Ok(Derivatives {
        d1: d1_hh + (d1_hh - d1_h) / 3.0,
        d2: d2_hh + (d2_hh - d2_h) / 3.0,
        err1: (d1_hh - d1_h).abs() / 3.0 + 3.0 * noise / h,
        err2: (d2_hh - d2_h).abs() / 3.0 + 23.0 * noise / (h * h),
        step: h,
    })
}

/// Uncertainty of E_1 - E_0 in GHz from the residuals of a solve.
fn gap_uncertainty<T: Real>(sol: &EigenSolution<T>) -> f64 {
    let e: Vec<f64> = sol.eigenvalues.iter().map(|x| to_f64(*x)).collect();
    let r: Vec<f64> = sol.residuals.iter().map(|x| to_f64(*x)).collect();
    let cluster_gap = if e.len() > 2 { (e[2] - e[1]).max(f64::MIN_POSITIVE) } else { 1.0 };
    let residual_part = (r[0] * r[0] + r[1] * r[1]) / cluster_gap;
    let rounding = 10.0 * T::EPS_F64 * to_f64(sol.norm_estimate);
    residual_part + rounding
}

/// Derivatives of the qubit frequency ω_ge = 2π (E_1 - E_0)/h, in rad/s per
/// unit of `parameter`. `step` defaults to [`default_step`].
pub fn energy_derivatives<T: Real>(
    params: &CircuitParams<T>,
    basis: &BasisSpec<T>,
    parameter: SweepParameter,
    step: Option<f64>,
    opts: &EigenOptions,
) -> Result<Derivatives> {
    energy_derivatives_around(params, basis, parameter, step, opts, None)
}

/// As [`energy_derivatives`], reusing `center` (a solve at `params` with at
/// least two levels) for the unshifted point.
pub fn energy_derivatives_around<T: Real>(
    params: &CircuitParams<T>,
    basis: &BasisSpec<T>,
    parameter: SweepParameter,
    step: Option<f64>,
    opts: &EigenOptions,
    center: Option<&EigenSolution<T>>,
) -> Result<Derivatives> {
    let x0 = to_f64(parameter.get(params));
    let h = step.unwrap_or_else(|| default_step(parameter, x0));
    let k = 3;
    let gap = |sol: &EigenSolution<T>| {
        let g = to_f64(sol.eigenvalues[1]) - to_f64(sol.eigenvalues[0]);
        (ghz_to_rad_per_s(g), ghz_to_rad_per_s(gap_uncertainty(sol)))
    };
    richardson_derivative(
        |x| match center {
            Some(c) if x == x0 && c.len() >= 2 => Ok(gap(c)),
            _ => {
                let p = parameter.with_value(params, lit(x));
                Ok(gap(&solve_2d(&p, basis, k, opts)?))
            }
        },
        x0,
        h,
    )
}

/// Hellmann–Feynman slopes `<l| ∂H/∂λ |l>` in GHz per unit λ.
pub fn hellmann_feynman<T: Real>(
    params: &CircuitParams<T>,
    basis: &BasisSpec<T>,
    sol: &EigenSolution<T>,
    parameter: SweepParameter,
) -> Result<Vec<T>> {
    let dh = parameter_derivative_2d(params, basis, parameter)?;
    Ok(sol.eigenvectors.iter().map(|v| dh.expectation(v)).collect())
}

/// Energies along a one-parameter sweep with levels tracked by continuity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DispersionCurve<T> {
    pub parameter: SweepParameter,
    pub grid: Vec<T>,
    /// `energies[point][level]` in GHz, level order fixed by tracking; NaN at
    /// failed points.
    pub energies: Vec<Vec<T>>,
    /// Tracked level to ascending-eigenvalue index at each point.
    pub order: Vec<Vec<usize>>,
    /// Smallest tracking overlap at each point (1 at the first point).
    pub min_overlap: Vec<f64>,
    /// `overlaps[point][level]`: |<previous|current>|² of each tracked level.
    pub overlaps: Vec<Vec<f64>>,
    /// (point, tracked level) pairs whose overlap fell below the threshold.
    pub anticrossings: Vec<(usize, usize)>,
    pub failed: Vec<bool>,
    /// ω_ge in rad/s from the two lowest eigenvalues.
    pub omega_ge: Vec<T>,
    /// Richardson derivatives of ω_ge per point, when requested.
    pub derivatives: Option<Vec<Option<Derivatives>>>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub solutions: Vec<Option<EigenSolution<T>>>,
}

impl<T: Real> DispersionCurve<T> {
    pub fn levels(&self) -> usize {
        self.energies.iter().find(|e| !e.is_empty()).map_or(0, |e| e.len())
    }
}

/// Options of [`sweep`].
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub k: usize,
    pub eigen: EigenOptions,
    /// Finite-difference step for ω_ge derivatives; `None` skips them.
    pub derivative_step: Option<f64>,
    pub derivatives: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { k: DEFAULT_SWEEP_LEVELS, eigen: EigenOptions::default(), derivative_step: None, derivatives: false }
    }
}

fn greedy_match(overlap: &[Vec<f64>]) -> Vec<(usize, f64)> {
    let m = overlap.len();
    let mut taken_prev = vec![false; m];
    let mut taken_cur = vec![false; m];
    let mut out = vec![(usize::MAX, 0.0); m];
    for _ in 0..m {
        let mut best = (usize::MAX, usize::MAX, -1.0);
        for (a, row) in overlap.iter().enumerate() {
            if taken_prev[a] {
                continue;
            }
            for (b, &o) in row.iter().enumerate() {
                if !taken_cur[b] && o > best.2 {
                    best = (a, b, o);
                }
            }
        }
        let (a, b, o) = best;
        taken_prev[a] = true;
        taken_cur[b] = true;
        out[a] = (b, o);
    }
    out
}

/// Solves the 2D problem at every grid point (in parallel) and tracks the
/// levels across points by eigenvector overlap.
pub fn sweep<T: Real>(
    params: &CircuitParams<T>,
    basis: &BasisSpec<T>,
    parameter: SweepParameter,
    grid: &[T],
    opts: &SweepOptions,
) -> Result<DispersionCurve<T>> {
    if grid.is_empty() {
        return Err(Error::Usage("sweep grid is empty".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Usage("sweep grid must be strictly increasing".into()));
    }
    params.validate()?;
    basis.validate()?;
    for x in grid {
        parameter.with_value(params, *x).validate()?;
    }

    type PointResult<T> = (Result<EigenSolution<T>>, Option<Result<Derivatives>>);
    let results: Vec<PointResult<T>> = grid
        .par_iter()
        .map(|x| {
            let p = parameter.with_value(params, *x);
            let sol = solve_2d(&p, basis, opts.k, &opts.eigen);
            let der = if opts.derivatives && sol.is_ok() {
                Some(energy_derivatives(&p, basis, parameter, opts.derivative_step, &opts.eigen))
            } else {
                None
            };
            (sol, der)
        })
        .collect();

    let total = grid.len();
    let mut warnings = Vec::new();
    let mut solutions = Vec::with_capacity(total);
    let mut derivatives = opts.derivatives.then(Vec::new);
    for (i, (sol, der)) in results.into_iter().enumerate() {
        match sol {
            Ok(s) => solutions.push(Some(s)),
            Err(e) => {
                if matches!(e, Error::Domain { .. } | Error::Resource { .. } | Error::Usage(_)) {
                    return Err(e);
                }
                warnings.push(format!("{} = {}: solve failed: {e}", parameter, grid[i]));
                solutions.push(None);
            }
        }
        if let Some(list) = derivatives.as_mut() {
            list.push(match der {
                Some(Ok(d)) => Some(d),
                Some(Err(e)) => {
                    warnings.push(format!("{} = {}: derivative failed: {e}", parameter, grid[i]));
                    None
                }
                None => None,
            });
        }
    }
    let failed_count = solutions.iter().filter(|s| s.is_none()).count();
    if failed_count as f64 > MAX_FAILED_FRACTION * total as f64 {
        return Err(Error::SweepAborted { failed: failed_count, total });
    }

    let k = opts.k;
    let mut energies = Vec::with_capacity(total);
    let mut order = Vec::with_capacity(total);
    let mut min_overlap = Vec::with_capacity(total);
    let mut overlaps = Vec::with_capacity(total);
    let mut anticrossings = Vec::new();
    let mut omega_ge = Vec::with_capacity(total);
    let mut previous: Option<(usize, Vec<usize>)> = None;
    for (i, sol) in solutions.iter().enumerate() {
        let Some(sol) = sol else {
            energies.push(vec![T::nan(); k]);
            order.push(Vec::new());
            min_overlap.push(f64::NAN);
            overlaps.push(vec![f64::NAN; k]);
            omega_ge.push(T::nan());
            continue;
        };
        let m = sol.len();
        let perm: Vec<usize> = match &previous {
            None => {
                min_overlap.push(1.0);
                overlaps.push(vec![1.0; m]);
                (0..m).collect()
            }
            Some((pi, pperm)) => {
                let prev = solutions[*pi].as_ref().expect("previous point solved");
                let ov: Vec<Vec<f64>> = pperm
                    .iter()
                    .map(|&a| sol.eigenvectors.iter().map(|v| to_f64(inner(&prev.eigenvectors[a], v).norm_sqr())).collect())
                    .collect();
                let matched = greedy_match(&ov);
                let mut worst: f64 = 1.0;
                for (level, (_, o)) in matched.iter().enumerate() {
                    if *o < TRACKING_THRESHOLD {
                        anticrossings.push((i, level));
                    }
                    worst = worst.min(*o);
                }
                min_overlap.push(worst);
                overlaps.push(matched.iter().map(|(_, o)| *o).collect());
                matched.into_iter().map(|(b, _)| b).collect()
            }
        };
        energies.push(perm.iter().map(|&b| sol.eigenvalues[b]).collect());
        omega_ge.push(lit::<T>(ghz_to_rad_per_s(to_f64(sol.eigenvalues[1] - sol.eigenvalues[0]))));
        previous = Some((i, perm.clone()));
        order.push(perm);
    }
    for (i, l) in &anticrossings {
        warnings.push(format!("{} = {}: level {l} tracking overlap below {TRACKING_THRESHOLD}", parameter, grid[*i]));
    }
    Ok(DispersionCurve {
        parameter,
        grid: grid.to_vec(),
        energies,
        order,
        min_overlap,
        overlaps,
        anticrossings,
        failed: solutions.iter().map(|s| s.is_none()).collect(),
        omega_ge,
        derivatives,
        warnings,
        solutions,
    })
}

/// A dressed eigenstate with its bare-product label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledState<T> {
    /// Position in the ascending eigenvalue list.
    pub index: usize,
    pub energy: T,
    pub l: usize,
    pub n: usize,
    /// max |<l, n|ψ>|²
    pub overlap: f64,
    pub hybridized: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabeledSpectrum<T> {
    pub states: Vec<LabeledState<T>>,
    pub threshold: f64,
    #[serde(skip)]
    lookup: BTreeMap<(usize, usize), usize>,
}

impl<T: Real> LabeledSpectrum<T> {
    /// State carrying label (l, n).
    pub fn find(&self, l: usize, n: usize) -> Option<&LabeledState<T>> {
        self.lookup.get(&(l, n)).map(|&i| &self.states[i])
    }

    pub fn hybridized(&self) -> impl Iterator<Item = &LabeledState<T>> {
        self.states.iter().filter(|s| s.hybridized)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Labels each state by the bare product (l, n) of largest overlap. Ties go
/// to the lexicographically smaller label. Two states with the same label
/// are an error.
pub fn assign_labels<T: Real>(
    energies: &[T],
    levels: usize,
    fock: usize,
    threshold: f64,
    overlap: impl Fn(usize, usize, usize) -> f64,
) -> Result<LabeledSpectrum<T>> {
    let mut states = Vec::with_capacity(energies.len());
    let mut claims: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (j, e) in energies.iter().enumerate() {
        let mut best = (0, 0, -1.0);
        for l in 0..levels {
            for n in 0..fock {
                let o = overlap(j, l, n);
                if o > best.2 {
                    best = (l, n, o);
                }
            }
        }
        let (l, n, o) = best;
        claims.entry((l, n)).or_default().push(j);
        states.push(LabeledState { index: j, energy: *e, l, n, overlap: o, hybridized: o < threshold });
    }
    if let Some(((l, n), who)) = claims.iter().find(|(_, v)| v.len() > 1) {
        return Err(Error::DuplicateLabel { l: *l, n: *n, states: who.clone() });
    }
    let lookup = claims.into_iter().map(|(k, v)| (k, v[0])).collect();
    Ok(LabeledSpectrum { states, threshold, lookup })
}

/// Labels eigenstates of the θ–φ–ζ grid Hamiltonian against products of 2D
/// eigenstates and Fock states.
pub fn label_dressed<T: Real>(
    sol3d: &EigenSolution<T>,
    sol2d: &EigenSolution<T>,
    n_zeta_max: usize,
    threshold: f64,
) -> Result<LabeledSpectrum<T>> {
    let z = n_zeta_max + 1;
    let d2 = sol2d.eigenvectors.first().map_or(0, |v| v.len());
    if sol3d.eigenvectors.iter().any(|v| v.len() != d2 * z) {
        return Err(Error::Usage(format!("3D states do not match a {d2} x {z} product basis")));
    }
    // table[j][l * z + n] = |<l, n|ψ_j>|²
    let table: Vec<Vec<f64>> = sol3d
        .eigenvectors
        .iter()
        .map(|psi| {
            let mut row = vec![0.0; sol2d.len() * z];
            for (l, v) in sol2d.eigenvectors.iter().enumerate() {
                let mut acc = vec![czero::<T>(); z];
                for (i, a) in v.iter().enumerate() {
                    let ac = a.conj();
                    for (n, slot) in acc.iter_mut().enumerate() {
                        *slot = *slot + ac * psi[i * z + n];
                    }
                }
                for (n, c) in acc.iter().enumerate() {
                    row[l * z + n] = to_f64(c.norm_sqr());
                }
            }
            row
        })
        .collect();
    assign_labels(&sol3d.eigenvalues, sol2d.len(), z, threshold, |j, l, n| table[j][l * z + n])
}

/// |<a|b>|² for unit vectors.
pub fn overlap_sq<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>]) -> f64 {
    to_f64(inner(a, b).norm_sqr())
}
