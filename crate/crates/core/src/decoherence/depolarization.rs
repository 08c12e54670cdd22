use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::spectra::NoiseSpectrum;
use super::thermal::ThermalEnv;
use crate::dressed::DressedSpectrum;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::operator::HermitianOperator;
use crate::scalar::{inner, lit, Cplx, Real};
use crate::units::ghz_to_rad_per_s;

/// Golden-rule rate from a matrix element `<f|G|i>` in GHz per λ-unit and
/// the transition frequency `omega_fi = (E_f - E_i)/ħ` in rad/s. Upward
/// transitions sample `S(-|ω|)`, downward ones `S(+|ω|)`.
pub fn golden_rule_from_element<T: Real>(element: Cplx<T>, omega_fi: T, spectrum: &NoiseSpectrum<T>) -> T {
    let m = lit::<T>(ghz_to_rad_per_s(1.0)) * element.norm();
    let w = if omega_fi > T::zero() { -omega_fi.abs() } else { omega_fi.abs() };
    m * m * spectrum.eval(w)
}

/// Golden-rule rate between two states of the operator's space, 1/s.
pub fn golden_rule_rate<T: Real>(
    g: &HermitianOperator<T>,
    psi_i: &[Cplx<T>],
    psi_f: &[Cplx<T>],
    omega_fi: T,
    spectrum: &NoiseSpectrum<T>,
) -> Result<T> {
    if psi_i.len() != g.dim() || psi_f.len() != g.dim() {
        return Err(Error::Usage(format!(
            "states of length {} and {} do not match operator dimension {}",
            psi_i.len(),
            psi_f.len(),
            g.dim()
        )));
    }
    Ok(golden_rule_from_element(g.matrix_element(psi_f, psi_i), omega_fi, spectrum))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompositeRates<T> {
    /// Γ_{1→0}, 1/s
    pub gamma_1to0: T,
    /// Σ_{l' ≥ 2} Γ_{0→l'}
    pub gamma_0up: T,
    /// Σ_{l' ≥ 2} Γ_{1→l'}
    pub gamma_1up: T,
    pub gamma1: T,
    /// Γ_{l→l'} for l ∈ {0, 1}, keyed by (l, l').
    pub transitions: BTreeMap<(usize, usize), T>,
    pub warnings: Vec<String>,
}

impl<T: Real> CompositeRates<T> {
    pub fn from_transitions(transitions: BTreeMap<(usize, usize), T>, warnings: Vec<String>) -> Self {
        let get = |k: (usize, usize)| transitions.get(&k).copied().unwrap_or_else(T::zero);
        let up = |l: usize| transitions.iter().filter(|((a, b), _)| *a == l && *b >= 2).map(|(_, v)| *v).sum::<T>();
        let gamma_1to0 = get((1, 0));
        let gamma_0up = up(0);
        let gamma_1up = up(1);
        Self { gamma_1to0, gamma_0up, gamma_1up, gamma1: gamma_1to0 + gamma_0up + gamma_1up, transitions, warnings }
    }
}

/// Thermal-averaged initial states (l, n) for l ∈ {0, 1}, with their weights.
pub(crate) fn initial_states<T: Real>(
    dressed: &DressedSpectrum<T>,
    env: &ThermalEnv<T>,
    warnings: &mut Vec<String>,
) -> Result<Vec<(usize, usize, T)>> {
    if env.n_max() > dressed.n_zeta_max {
        return Err(Error::Usage(format!(
            "Fock cutoff {} is below the thermally occupied range (n <= {})",
            dressed.n_zeta_max,
            env.n_max()
        )));
    }
    let mut out = Vec::new();
    for l in 0..2.min(dressed.levels) {
        for (n, p) in env.weights.iter().enumerate() {
            let st = dressed.labels.find(l, n).ok_or_else(|| Error::Usage(format!("no dressed state labeled ({l}, {n})")))?;
            if st.hybridized {
                warnings.push(format!("state ({l}, {n}) is hybridized (overlap {:.3})", st.overlap));
            }
            out.push((l, st.index, *p));
        }
    }
    Ok(out)
}

/// Thermal-averaged depolarization rates through a qubit operator `op`
/// (matrix over the 0-π levels, GHz per λ-unit).
pub fn composite_depolarization<T: Real>(
    dressed: &DressedSpectrum<T>,
    op: &CMatrix<T>,
    spectrum: &NoiseSpectrum<T>,
    env: &ThermalEnv<T>,
) -> Result<CompositeRates<T>> {
    spectrum.validate()?;
    if op.dim() != dressed.levels {
        return Err(Error::Usage(format!("operator over {} levels for a {}-level model", op.dim(), dressed.levels)));
    }
    let mut warnings = Vec::new();
    let init = initial_states(dressed, env, &mut warnings)?;
    let mut transitions: BTreeMap<(usize, usize), T> = BTreeMap::new();
    let to_rad = lit::<T>(ghz_to_rad_per_s(1.0));
    for (l, i, p) in init {
        let w = dressed.apply_qubit_operator(op, i);
        let ei = dressed.energies[i];
        for st in &dressed.labels.states {
            if st.l == l {
                continue;
            }
            let element = inner(dressed.vector(st.index), &w);
            let rate = golden_rule_from_element(element, (st.energy - ei) * to_rad, spectrum);
            let e = transitions.entry((l, st.l)).or_insert_with(T::zero);
            *e = *e + p * rate;
        }
    }
    warnings.sort();
    warnings.dedup();
    Ok(CompositeRates::from_transitions(transitions, warnings))
}
