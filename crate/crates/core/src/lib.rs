//! Disordered 0-π qubit: Hamiltonians, sparse eigensolver, dressed spectra,
//! dispersive shifts and decoherence rates.
//!
//! Everything is generic over the floating-point type through [`Real`];
//! the aliases at the crate root fix it to `f64`.

pub mod basis;
pub mod charge;
pub mod decoherence;
pub mod dispersive;
pub mod dressed;
pub mod eigen;
pub mod error;
pub mod hamiltonian;
pub mod matrix;
pub mod operator;
pub mod params;
pub mod scalar;
pub mod spectrum;
pub mod units;

pub use basis::BasisSpec;
pub use charge::{effective_offset_charges, BareCharges, EffectiveChargeMap};
pub use decoherence::{coherence_budget, BudgetOptions, Channel, NoiseSpectrum, RateBreakdown, ThermalEnv};
pub use dispersive::{dispersive_analysis, DispersiveReport};
pub use dressed::{dressed_spectrum, dressed_spectrum_below, DressedSpectrum};
pub use eigen::{dense_oracle, lowest_eigenpairs, lowest_eigenpairs_with, EigenOptions, EigenSolution};
pub use error::{Error, Result};
pub use hamiltonian::{build_h_2d, build_h_3d, build_noise_operator, NoiseChannel, SweepParameter};
pub use matrix::CMatrix;
pub use operator::{BasisTag, HermitianOperator};
pub use params::{CircuitParams, DerivedEnergies};
pub use scalar::{Cplx, Real};
pub use spectrum::{energy_derivatives, solve_2d, sweep, DispersionCurve, LabeledSpectrum, SweepOptions};

pub type Params = CircuitParams<f64>;
pub type Basis = BasisSpec<f64>;
pub type Operator = HermitianOperator<f64>;
pub type Budget = RateBreakdown<f64>;
pub type Curve = DispersionCurve<f64>;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
