use std::collections::BTreeMap;

use super::depolarization::{initial_states, CompositeRates};
use super::thermal::ThermalEnv;
use crate::dispersive::RESONANCE_TOL;
use crate::dressed::DressedSpectrum;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::{inner, to_f64, Real};

/// Purcell rates from dressed-state matrix elements of a and a†. Each pair
/// of dressed states exchanges one bath photon at their own transition
/// frequency: absorption through a† when the final state lies higher,
/// emission through a otherwise.
pub fn purcell_exact<T: Real>(dressed: &DressedSpectrum<T>, env: &ThermalEnv<T>) -> Result<CompositeRates<T>> {
    let mut warnings = Vec::new();
    let init = initial_states(dressed, env, &mut warnings)?;
    let mut transitions: BTreeMap<(usize, usize), T> = BTreeMap::new();
    for (l, i, p) in init {
        let up = dressed.apply_creation(i);
        let down = dressed.apply_annihilation(i);
        let ei = dressed.energies[i];
        for st in &dressed.labels.states {
            let lp = st.l;
            if lp == l {
                continue;
            }
            let w = st.energy - ei;
            if w == T::zero() {
                warnings.push(format!("degenerate dressed pair ({l}) -> ({lp}) skipped"));
                continue;
            }
            let n_th = env.occupation(w.abs());
            let (v, factor) = if w > T::zero() { (&up, n_th) } else { (&down, n_th + T::one()) };
            let m = inner(dressed.vector(st.index), v).norm_sqr();
            let e = transitions.entry((l, lp)).or_insert_with(T::zero);
            *e = *e + env.kappa_zeta * factor * p * m;
        }
    }
    warnings.sort();
    warnings.dedup();
    Ok(CompositeRates::from_transitions(transitions, warnings))
}

/// Second-order estimate of the Purcell rates out of l ∈ {0, 1}.
pub fn purcell_perturbative<T: Real>(g: &CMatrix<T>, energies: &[T], omega_zeta: T, env: &ThermalEnv<T>) -> Result<CompositeRates<T>> {
    let levels = g.dim().min(energies.len());
    let mut transitions = BTreeMap::new();
    for l in 0..2.min(levels) {
        for lp in 0..levels {
            if lp == l {
                continue;
            }
            let upward = energies[lp] > energies[l];
            let n_th = env.occupation(energies[lp] - energies[l]);
            let (coupling, denom, factor) = if upward {
                (g.get(lp, l), energies[l] - energies[lp] + omega_zeta, n_th)
            } else {
                (g.get(l, lp), energies[l] - energies[lp] - omega_zeta, n_th + T::one())
            };
            let c2 = coupling.norm_sqr();
            if c2 == T::zero() {
                transitions.insert((l, lp), T::zero());
                continue;
            }
            if to_f64(denom.abs()) < RESONANCE_TOL {
                return Err(Error::Resonance { l, lp, delta: to_f64(denom) });
            }
            transitions.insert((l, lp), env.kappa_zeta * factor * c2 / (denom * denom));
        }
    }
    Ok(CompositeRates::from_transitions(transitions, Vec::new()))
}
