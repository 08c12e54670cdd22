use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};
use crate::units::{HBAR_SI, KB_SI};

/// Noise power spectrum `S(ω) = ∫ dt e^{-iωt} <δλ(0) δλ(t)>` in λ²·s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpectrum<T> {
    /// `2π A² / |ω|^γ`, with |ω| clamped below at ω_ir.
    OneOverF { amplitude: T, exponent: T, omega_ir: T, omega_uv: T },
    /// Current noise of a resistive bias line, seen as flux through the
    /// mutual inductance: `M² (2ħω/R) [1 + coth(ħω / 2k_B T)]`.
    OhmicFluxLine { mutual: T, resistance: T, temperature: T },
    /// Gaussian correlator `σ² exp(-t²/2t_c²)`.
    SmoothGaussian { sigma2: T, t_c: T },
}

impl<T: Real> NoiseSpectrum<T> {
    pub fn one_over_f(amplitude: T, omega_ir: T, omega_uv: T) -> Self {
        NoiseSpectrum::OneOverF { amplitude, exponent: T::one(), omega_ir, omega_uv }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseSpectrum::OneOverF { amplitude, exponent, omega_ir, omega_uv } => {
                if !(amplitude >= T::zero()) {
                    return Err(Error::domain("amplitude", "must be >= 0"));
                }
                if !(exponent > T::zero()) {
                    return Err(Error::domain("exponent", "must be positive"));
                }
                if !(omega_ir > T::zero() && omega_ir < omega_uv) {
                    return Err(Error::domain("omega_ir", "need 0 < omega_ir < omega_uv"));
                }
            }
            NoiseSpectrum::OhmicFluxLine { mutual, resistance, temperature } => {
                if !(mutual >= T::zero()) || !(resistance > T::zero()) || !(temperature >= T::zero()) {
                    return Err(Error::domain("fluxline", "need M >= 0, R > 0, T >= 0"));
                }
            }
            NoiseSpectrum::SmoothGaussian { sigma2, t_c } => {
                if !(sigma2 >= T::zero()) || !(t_c > T::zero()) {
                    return Err(Error::domain("smooth_gaussian", "need sigma2 >= 0, t_c > 0"));
                }
            }
        }
        Ok(())
    }

    /// S at angular frequency `omega` (rad/s, signed).
    pub fn eval(&self, omega: T) -> T {
        match *self {
            NoiseSpectrum::OneOverF { amplitude, exponent, omega_ir, .. } => {
                let w = omega.abs().max(omega_ir);
                lit::<T>(2.0) * T::PI() * amplitude * amplitude / w.powf(exponent)
            }
            NoiseSpectrum::OhmicFluxLine { mutual, resistance, temperature } => {
                let m = to_f64(mutual);
                let r = to_f64(resistance);
                let t = to_f64(temperature);
                let w = to_f64(omega);
                let s_current = if t == 0.0 {
                    if w > 0.0 {
                        4.0 * HBAR_SI * w / r
                    } else {
                        0.0
                    }
                } else if w == 0.0 {
                    4.0 * KB_SI * t / r
                } else {
                    // (2ħω/R)(1 + coth x) = 4ħω / (R (1 - e^{-2x})), x = ħω/2k_BT
                    let y = HBAR_SI * w / (KB_SI * t);
                    4.0 * HBAR_SI * w / (r * -(-y).exp_m1())
                };
                lit(m * m * s_current)
            }
            NoiseSpectrum::SmoothGaussian { sigma2, t_c } => {
                let two_pi = lit::<T>(2.0) * T::PI();
                two_pi.sqrt() * t_c * sigma2 * (-(t_c * t_c * omega * omega) * lit(0.5)).exp()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ohmic_detailed_balance() {
        let s = NoiseSpectrum::<f64>::OhmicFluxLine { mutual: 1000.0, resistance: 50.0, temperature: 0.015 };
        for f in [1e6, 1e8, 1e9, 5e9] {
            let w = 2.0 * std::f64::consts::PI * f;
            let ratio = s.eval(-w) / s.eval(w);
            let want = (-HBAR_SI * w / (KB_SI * 0.015)).exp();
            assert!((ratio / want - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn ohmic_is_continuous_at_zero() {
        let s = NoiseSpectrum::<f64>::OhmicFluxLine { mutual: 1.0, resistance: 50.0, temperature: 0.02 };
        assert!((s.eval(1e-3) / s.eval(0.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn one_over_f_is_clamped() {
        let s = NoiseSpectrum::<f64>::one_over_f(1.0, 10.0, 1e10);
        assert_eq!(s.eval(1.0), s.eval(10.0));
        assert!((s.eval(-100.0) - 2.0 * std::f64::consts::PI / 100.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_zero_frequency_value() {
        let s = NoiseSpectrum::<f64>::SmoothGaussian { sigma2: 2.0, t_c: 0.5 };
        assert!((s.eval(0.0) - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-14);
    }
}
