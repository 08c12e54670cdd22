//! Unit conventions.
//!
//! Every stored energy is E/h in GHz. Angular frequencies (rad/s) appear only
//! at the boundary to noise spectra and rates, via `omega = 2 pi (E/h)`.

/// Boltzmann constant over Planck constant, GHz per kelvin.
pub const KB_OVER_H_GHZ_PER_K: f64 = 20.836_619;

/// Reduced Planck constant, J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K.
pub const KB_SI: f64 = 1.380_649e-23;

pub const GHZ: f64 = 1.0e9;

/// GHz (ordinary frequency) to angular frequency in rad/s.
#[inline]
pub fn ghz_to_rad_per_s(e_ghz: f64) -> f64 {
    2.0 * std::f64::consts::PI * e_ghz * GHZ
}

#[inline]
pub fn rad_per_s_to_ghz(omega: f64) -> f64 {
    omega / (2.0 * std::f64::consts::PI * GHZ)
}

/// Thermal energy k_B T / h in GHz.
#[inline]
pub fn thermal_energy_ghz(temperature_k: f64) -> f64 {
    KB_OVER_H_GHZ_PER_K * temperature_k
}
