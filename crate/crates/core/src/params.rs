//! Physical parameters of the disordered 0-π circuit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Amplitudes of the three 1/f noise channels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseAmplitudes<T> {
    /// Flux noise, in units of Φ_0.
    pub a_flux: T,
    /// Offset-charge noise, in the same units as `ng_theta`.
    pub a_charge: T,
    /// Critical-current noise as a fraction of I_c.
    pub a_ic: T,
}

/// Flux-bias line coupled through a mutual inductance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxLine<T> {
    /// Mutual inductance, Φ_0 per ampere.
    pub mutual: T,
    /// Line impedance, ohm.
    pub resistance: T,
}

/// Spectral cutoffs and Ramsey measurement time for 1/f dephasing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseCutoffs<T> {
    /// rad/s
    pub omega_ir: T,
    /// rad/s
    pub omega_uv: T,
    /// seconds
    pub t_meas: T,
}

/// Complete parameter record of the circuit and its environment.
///
/// Energies are E/h in GHz. Disorder fractions follow `dX = (X1 - X2) / X`
/// with `X` the mean of the two nominally identical elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams<T> {
    pub ec: T,
    pub ecj: T,
    pub ej: T,
    pub el: T,
    pub dc: T,
    pub dcj: T,
    pub dej: T,
    pub del: T,
    /// External flux in units of Φ_0.
    pub flux: T,
    /// Offset charge of the θ mode, in Cooper pairs.
    pub ng_theta: T,
    /// kelvin
    pub temperature: T,
    /// Intrinsic ζ-mode energy decay rate, 1/s.
    pub kappa_zeta: T,
    pub noise: NoiseAmplitudes<T>,
    pub fluxline: FluxLine<T>,
    pub cutoffs: NoiseCutoffs<T>,
    /// Gate capacitance in farads. `None` means the charging energies above
    /// already include any gate renormalization.
    pub gate_capacitance: Option<T>,
}

/// Energy scales that follow directly from [`CircuitParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedEnergies<T> {
    /// E_CΣ = (1/E_C + 1/E_CJ)^-1, GHz
    pub ecs: T,
    /// ζ-mode frequency sqrt(8 E_C E_L), GHz
    pub omega_zeta: T,
    /// Junction plasma frequency sqrt(8 E_CJ E_J), GHz
    pub omega_p: T,
    /// (8 E_C / E_L)^{1/4}; the ζ coordinate is `zeta_osc_length / 2 * (a + a†)`.
    pub zeta_osc_length: T,
}

impl<T: Real> NoiseAmplitudes<T> {
    pub fn standard() -> Self {
        Self { a_flux: lit(1e-6), a_charge: lit(1e-4), a_ic: lit(1e-7) }
    }
}

impl<T: Real> FluxLine<T> {
    pub fn standard() -> Self {
        Self { mutual: lit(1000.0), resistance: lit(50.0) }
    }
}

impl<T: Real> NoiseCutoffs<T> {
    /// ω_ir/2π = 1 Hz, ω_uv/2π = 3 GHz, t = 10 µs.
    pub fn standard() -> Self {
        let two_pi = T::PI() + T::PI();
        Self { omega_ir: two_pi, omega_uv: two_pi * lit(3.0e9), t_meas: lit(1e-5) }
    }
}

impl<T: Real> CircuitParams<T> {
    /// Symmetric-disorder parameter set with the standard environment
    /// (15 mK, 1/κ_ζ = 100 µs, standard noise amplitudes).
    pub fn with_energies(ec: f64, ecj: f64, ej: f64, el: f64, disorder: f64) -> Self {
        let d = lit(disorder);
        Self {
            ec: lit(ec),
            ecj: lit(ecj),
            ej: lit(ej),
            el: lit(el),
            dc: d,
            dcj: d,
            dej: d,
            del: d,
            flux: T::zero(),
            ng_theta: T::zero(),
            temperature: lit(0.015),
            kappa_zeta: lit(1.0e4),
            noise: NoiseAmplitudes::standard(),
            fluxline: FluxLine::standard(),
            cutoffs: NoiseCutoffs::standard(),
            gate_capacitance: None,
        }
    }

    /// Parameter set 1: deep 0-π regime, smallest E_L.
    pub fn ps1() -> Self {
        Self::with_energies(0.02, 20.0, 10.0, 0.008, 0.05)
    }

    pub fn ps2() -> Self {
        Self::with_energies(0.04, 20.0, 10.0, 0.04, 0.05)
    }

    /// Parameter set 3: inductive energy within reach of current fabrication.
    pub fn ps3() -> Self {
        Self::with_energies(0.15, 10.0, 5.0, 0.13, 0.05)
    }

    /// Copy with the capacitive and inductive disorder removed, so that the
    /// ζ mode decouples. Junction disorder is kept.
    pub fn without_zeta_coupling(&self) -> Self {
        Self { dc: T::zero(), del: T::zero(), ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [("EC", self.ec), ("ECJ", self.ecj), ("EJ", self.ej), ("EL", self.el)];
        for (field, v) in positive {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::domain(field, format!("must be positive and finite, got {v}")));
            }
        }
        let disorder = [("dC", self.dc), ("dCJ", self.dcj), ("dEJ", self.dej), ("dEL", self.del)];
        for (field, v) in disorder {
            if !(v.abs() < T::one()) {
                return Err(Error::domain(field, format!("|d| must be < 1, got {v}")));
            }
        }
        for (field, v) in [("flux", self.flux), ("ng_theta", self.ng_theta)] {
            if !v.is_finite() {
                return Err(Error::domain(field, "must be finite"));
            }
        }
        if !(self.temperature >= T::zero()) || !self.temperature.is_finite() {
            return Err(Error::domain("temperature", format!("must be >= 0, got {}", self.temperature)));
        }
        if !(self.kappa_zeta >= T::zero()) || !self.kappa_zeta.is_finite() {
            return Err(Error::domain("kappa_zeta", format!("must be >= 0, got {}", self.kappa_zeta)));
        }
        let n = &self.noise;
        for (field, v) in [("A_flux", n.a_flux), ("A_charge", n.a_charge), ("A_Ic", n.a_ic)] {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(Error::domain(field, format!("must be >= 0, got {v}")));
            }
        }
        if !(self.fluxline.mutual >= T::zero()) {
            return Err(Error::domain("M", "mutual inductance must be >= 0"));
        }
        if !(self.fluxline.resistance > T::zero()) {
            return Err(Error::domain("R", "line resistance must be positive"));
        }
        let c = &self.cutoffs;
        if !(c.omega_ir > T::zero()) || !(c.omega_ir < c.omega_uv) {
            return Err(Error::domain("omega_ir", "need 0 < omega_ir < omega_uv"));
        }
        if !(c.t_meas > T::zero()) {
            return Err(Error::domain("t_meas", "must be positive"));
        }
        if let Some(cg) = self.gate_capacitance {
            if !(cg >= T::zero()) || !cg.is_finite() {
                return Err(Error::domain("Cg", "gate capacitance must be >= 0"));
            }
        }
        Ok(())
    }

    /// Mode charging and oscillator energies.
    pub fn derive_energies(&self) -> Result<DerivedEnergies<T>> {
        for (field, v) in [("EC", self.ec), ("ECJ", self.ecj), ("EJ", self.ej), ("EL", self.el)] {
            if !(v > T::zero()) {
                return Err(Error::domain(field, format!("must be positive, got {v}")));
            }
        }
        let eight: T = lit(8.0);
        Ok(DerivedEnergies {
            ecs: T::one() / (T::one() / self.ec + T::one() / self.ecj),
            omega_zeta: (eight * self.ec * self.el).sqrt(),
            omega_p: (eight * self.ecj * self.ej).sqrt(),
            zeta_osc_length: (eight * self.ec / self.el).sqrt().sqrt(),
        })
    }

    /// External phase φ_ext = 2π Φ_ext / Φ_0.
    pub fn phi_ext(&self) -> T {
        (T::PI() + T::PI()) * self.flux
    }

    /// Coefficient of `φ (a + a†)` in the φ–ζ coupling, GHz.
    pub fn g_phi_prefactor(&self) -> Result<T> {
        let d = self.derive_energies()?;
        Ok(lit::<T>(0.5) * self.el * self.del * d.zeta_osc_length)
    }

    /// Coefficient c_θ of `i (n̂_θ - n_g)(a† - a)` in the θ–ζ coupling, GHz.
    /// Equals ½ dC E_CΣ (32 E_L / E_C)^{1/4}.
    pub fn g_theta_prefactor(&self) -> Result<T> {
        let d = self.derive_energies()?;
        Ok(lit::<T>(2.0) * d.ecs * self.dc / d.zeta_osc_length)
    }
}
