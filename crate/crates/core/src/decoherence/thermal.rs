use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::units::KB_OVER_H_GHZ_PER_K;

/// Thermal weights below this are dropped.
pub const WEIGHT_CUTOFF: f64 = 1e-6;

/// Bose occupation of a mode at `omega_ghz` (ordinary frequency).
pub fn thermal_occupation<T: Real>(omega_ghz: T, temperature: T) -> T {
    if temperature == T::zero() {
        return T::zero();
    }
    let x = omega_ghz / (lit::<T>(KB_OVER_H_GHZ_PER_K) * temperature);
    T::one() / x.exp_m1()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalEnv<T> {
    pub temperature: T,
    /// GHz
    pub omega_zeta: T,
    /// 1/s
    pub kappa_zeta: T,
    pub n_th: T,
    /// P_ζ(n) for n = 0, 1, ..., renormalized after truncation.
    pub weights: Vec<T>,
    /// Probability mass discarded by the truncation.
    pub discarded: T,
}

impl<T: Real> ThermalEnv<T> {
    pub fn new(omega_zeta: T, temperature: T, kappa_zeta: T) -> Result<Self> {
        if !(omega_zeta > T::zero()) {
            return Err(Error::domain("Omega_zeta", "must be positive"));
        }
        if !(temperature >= T::zero()) {
            return Err(Error::domain("temperature", "must be >= 0"));
        }
        let n_th = thermal_occupation(omega_zeta, temperature);
        let mut weights = Vec::new();
        if temperature == T::zero() {
            weights.push(T::one());
        } else {
            let x = omega_zeta / (lit::<T>(KB_OVER_H_GHZ_PER_K) * temperature);
            let p0 = -(-x).exp_m1();
            let mut n = 0usize;
            loop {
                let p = p0 * (-x * T::from_usize(n).unwrap()).exp();
                if p < lit(WEIGHT_CUTOFF) {
                    break;
                }
                weights.push(p);
                n += 1;
            }
        }
        let total: T = weights.iter().copied().sum();
        weights.iter_mut().for_each(|w| *w = *w / total);
        Ok(Self { temperature, omega_zeta, kappa_zeta, n_th, weights, discarded: T::one() - total })
    }

    /// Largest Fock number carrying thermal weight.
    pub fn n_max(&self) -> usize {
        self.weights.len() - 1
    }

    /// Bose occupation at another frequency (GHz) and the same temperature.
    pub fn occupation(&self, omega_ghz: T) -> T {
        thermal_occupation(omega_ghz.abs(), self.temperature)
    }
}
