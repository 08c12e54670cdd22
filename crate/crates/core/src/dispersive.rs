//! Qubit–ζ couplings, ac Stark shifts χ_l and Lamb shifts Λ_l.
//!
//! With `<l, n| H |l', n+1> = g_ll' √(n+1)` and `Δ_ll' = E_l - E_l' - Ω_ζ`,
//! second-order perturbation theory gives
//!
//! ```text
//! E_{l,n} ≈ E_l + Λ_l + n (Ω_ζ + χ_l)
//! Λ_l = Σ_l' |g_ll'|² / Δ_ll'
//! χ_l = Σ_l' ( |g_ll'|² / Δ_ll' - |g_l'l|² / Δ_l'l )
//! ```
//!
//! g is not symmetric in modulus once both the φ and the θ channel couple,
//! so both orderings are kept.

use serde::{Deserialize, Serialize};

use crate::basis::BasisSpec;
use crate::eigen::EigenSolution;
use crate::error::{Error, Result};
use crate::hamiltonian::{charge_operator, phi_operator};
use crate::matrix::CMatrix;
use crate::operator::HermitianOperator;
use crate::params::CircuitParams;
use crate::scalar::{cplx, lit, to_f64, Real};

pub const DEFAULT_LEVELS: usize = 15;
/// |g/Δ| above which a warning is attached.
pub const DISPERSIVE_WARNING: f64 = 0.2;
/// |g/Δ| above which a term is dropped from the sums.
pub const EXCLUSION_THRESHOLD: f64 = 0.5;
/// GHz
pub const RESONANCE_TOL: f64 = 1e-9;

/// `<l| O |l'>` over the lowest `levels` states.
pub fn operator_matrix<T: Real>(sol2d: &EigenSolution<T>, op: &HermitianOperator<T>, levels: usize) -> Result<CMatrix<T>> {
    if levels > sol2d.len() {
        return Err(Error::Usage(format!("{levels} levels requested but only {} states solved", sol2d.len())));
    }
    if let Some(v) = sol2d.eigenvectors.first() {
        if v.len() != op.dim() {
            return Err(Error::Usage(format!("operator dimension {} does not match states of length {}", op.dim(), v.len())));
        }
    }
    let images: Vec<_> = sol2d.eigenvectors[..levels].iter().map(|v| op.apply_new(v)).collect();
    Ok(CMatrix::from_fn(levels, |r, c| crate::scalar::inner(&sol2d.eigenvectors[r], &images[c])))
}

/// g_ll' = c_φ <l|φ|l'> + i c_θ <l| i∂_θ |l'>, GHz.
pub fn coupling_matrix<T: Real>(
    sol2d: &EigenSolution<T>,
    params: &CircuitParams<T>,
    basis: &BasisSpec<T>,
    levels: usize,
) -> Result<CMatrix<T>> {
    let unconverged = sol2d.converged.iter().take(levels).filter(|c| !**c).count();
    if unconverged > 0 {
        return Err(Error::Usage(format!("{unconverged} of the first {levels} states are not converged")));
    }
    let phi = operator_matrix(sol2d, &phi_operator(basis), levels)?;
    let q = operator_matrix(sol2d, &charge_operator(params, basis), levels)?;
    let cphi = params.g_phi_prefactor()?;
    let ctheta = params.g_theta_prefactor()?;
    // i ∂_θ = -q, so i c_θ <i∂_θ> = -i c_θ <q>.
    Ok(CMatrix::from_fn(levels, |r, c| phi.get(r, c).scale(cphi) - cplx(T::zero(), ctheta) * q.get(r, c)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcludedTerm {
    pub l: usize,
    pub lp: usize,
    pub g_over_delta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DispersiveReport<T> {
    pub g: CMatrix<T>,
    /// Δ_ll' = E_l - E_l' - Ω_ζ, GHz
    pub delta: Vec<Vec<T>>,
    pub chi: Vec<T>,
    pub lambda: Vec<T>,
    /// (χ_1 - χ_0) / 2
    pub chi01: T,
    /// Largest |g/Δ| among the terms entering χ_0 and χ_1.
    pub max_g_over_delta: f64,
    /// Largest |g/Δ| among the terms entering each χ_l.
    pub g_over_delta: Vec<f64>,
    pub excluded: Vec<ExcludedTerm>,
    pub warnings: Vec<String>,
}

/// Evaluates χ_l and Λ_l for the lowest `levels` states.
pub fn stark_lamb<T: Real>(g: &CMatrix<T>, energies: &[T], omega_zeta: T, levels: usize) -> Result<DispersiveReport<T>> {
    if levels < 2 || levels > g.dim() || levels > energies.len() {
        return Err(Error::Usage(format!(
            "need 2 <= levels <= min({}, {}), got {levels}",
            g.dim(),
            energies.len()
        )));
    }
    let delta: Vec<Vec<T>> = (0..levels)
        .map(|l| (0..levels).map(|lp| energies[l] - energies[lp] - omega_zeta).collect())
        .collect();

    // Each directed term |g_ab|² / Δ_ab, or None if excluded.
    let mut excluded = Vec::new();
    let mut ratio = vec![vec![0.0f64; levels]; levels];
    let mut term = vec![vec![Some(T::zero()); levels]; levels];
    for a in 0..levels {
        for b in 0..levels {
            let gab = g.get(a, b).norm();
            if gab == T::zero() {
                continue;
            }
            let d = delta[a][b];
            if to_f64(d.abs()) < RESONANCE_TOL {
                return Err(Error::Resonance { l: a, lp: b, delta: to_f64(d) });
            }
            let r = to_f64(gab / d.abs());
            ratio[a][b] = r;
            if r > EXCLUSION_THRESHOLD {
                excluded.push(ExcludedTerm { l: a, lp: b, g_over_delta: r });
                term[a][b] = None;
            } else {
                term[a][b] = Some(gab * gab / d);
            }
        }
    }

    let mut chi = Vec::with_capacity(levels);
    let mut lambda = Vec::with_capacity(levels);
    let mut g_over_delta = Vec::with_capacity(levels);
    for l in 0..levels {
        let mut c = T::zero();
        let mut lam = T::zero();
        let mut worst = 0.0f64;
        for lp in 0..levels {
            if let Some(t) = term[l][lp] {
                c = c + t;
                lam = lam + t;
            }
            if let Some(t) = term[lp][l] {
                c = c - t;
            }
            worst = worst.max(ratio[l][lp]).max(ratio[lp][l]);
        }
        chi.push(c);
        lambda.push(lam);
        g_over_delta.push(worst);
    }
    let chi01 = (chi[1] - chi[0]) * lit(0.5);
    let max_g_over_delta = g_over_delta[0].max(g_over_delta[1]);

    let mut warnings = Vec::new();
    for e in &excluded {
        let msg = format!("term (l={}, l'={}) dropped from dispersive sums: |g/Delta| = {:.3}", e.l, e.lp, e.g_over_delta);
        log::warn!("{msg}");
        warnings.push(msg);
    }
    if max_g_over_delta > DISPERSIVE_WARNING {
        let msg = format!("dispersive approximation questionable: max |g/Delta| = {max_g_over_delta:.3}");
        log::warn!("{msg}");
        warnings.push(msg);
    }
    Ok(DispersiveReport {
        g: g.leading(levels),
        delta,
        chi,
        lambda,
        chi01,
        max_g_over_delta,
        g_over_delta,
        excluded,
        warnings,
    })
}

/// Couplings and shifts straight from a 2D solve.
pub fn dispersive_analysis<T: Real>(
    params: &CircuitParams<T>,
    basis: &BasisSpec<T>,
    sol2d: &EigenSolution<T>,
    levels: usize,
) -> Result<DispersiveReport<T>> {
    let g = coupling_matrix(sol2d, params, basis, levels)?;
    let omega = params.derive_energies()?.omega_zeta;
    stark_lamb(&g, &sol2d.eigenvalues, omega, levels)
}
