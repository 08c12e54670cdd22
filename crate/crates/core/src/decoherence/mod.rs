//! Pure-dephasing and depolarization channels and the combined budget.
//!
//! Matrix elements of noise operators are in GHz per unit of the noise
//! variable λ; spectra are in λ²·s; a golden-rule rate is
//! `(2π · 1e9 · |G_fi|)² S(∓|ω_fi|)` in 1/s.

mod budget;
mod dephasing;
mod depolarization;
mod purcell;
mod spectra;
mod thermal;

pub use budget::{
    coherence_budget, working_point, BudgetOptions, Channel, ChannelResult, RateBreakdown, SubRates, WorkingPoint,
    DEFAULT_FOCK_MARGIN,
};
pub use dephasing::{shot_noise_asymptotes, shot_noise_rate, tphi_1f, tphi_smooth, ShotNoise, ShotNoiseRegime};
pub use depolarization::{composite_depolarization, golden_rule_from_element, golden_rule_rate, CompositeRates};
pub use purcell::{purcell_exact, purcell_perturbative};
pub use spectra::NoiseSpectrum;
pub use thermal::{thermal_occupation, ThermalEnv, WEIGHT_CUTOFF};
