use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::NoiseCutoffs;
use crate::scalar::{lit, Real};
use crate::units::ghz_to_rad_per_s;

/// Ramsey pure-dephasing time for 1/f noise of amplitude `a`, given the
/// first and second derivatives of ω_ge (rad/s per λ, rad/s per λ²).
/// Returns infinity when both derivatives vanish.
pub fn tphi_1f<T: Real>(d1: T, d2: T, a: T, cutoffs: &NoiseCutoffs<T>) -> Result<T> {
    let (w_ir, w_uv, t) = (cutoffs.omega_ir, cutoffs.omega_uv, cutoffs.t_meas);
    if !(w_ir * t < T::one()) {
        return Err(Error::domain("omega_ir", "need omega_ir * t_meas < 1"));
    }
    if !(a >= T::zero()) {
        return Err(Error::domain("A", "noise amplitude must be >= 0"));
    }
    let two: T = lit(2.0);
    let ln_t = (w_ir * t).ln();
    let ln_uv = (w_uv / w_ir).ln();
    let a2 = a * a;
    let rate2 = two * a2 * d1 * d1 * ln_t.abs() + two * a2 * a2 * d2 * d2 * (ln_uv * ln_uv + two * ln_t * ln_t);
    if rate2 == T::zero() {
        return Ok(T::infinity());
    }
    Ok(T::one() / rate2.sqrt())
}

/// Dephasing time for noise with a smooth spectrum, `S0 = S(0)` in λ²·s.
pub fn tphi_smooth<T: Real>(s0: T, sigma2: T, d1: T, d2: T) -> Result<T> {
    if !(s0 >= T::zero()) {
        return Err(Error::domain("S0", "must be >= 0"));
    }
    let denom = s0 * (d1 * d1 + d2 * d2 * sigma2 / lit::<T>(2.0).sqrt());
    if denom == T::zero() {
        return Ok(T::infinity());
    }
    Ok(lit::<T>(4.0) / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShotNoiseRegime {
    /// χ ≪ κ: rate ≈ 4χ² n_th (n_th + 1) / κ
    SmallChi,
    /// χ ≫ κ: rate ≈ κ n_th
    LargeChi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotNoise<T> {
    /// 1/s
    pub rate: T,
    pub regime: ShotNoiseRegime,
    pub small_chi: T,
    pub large_chi: T,
}

/// Asymptotes of the shot-noise rate: (small χ, large χ), in 1/s.
pub fn shot_noise_asymptotes<T: Real>(chi01_ghz: T, kappa: T, n_th: T) -> (T, T) {
    let chi = lit::<T>(ghz_to_rad_per_s(1.0)) * chi01_ghz;
    let small = if kappa > T::zero() { lit::<T>(4.0) * chi * chi * n_th * (n_th + T::one()) / kappa } else { T::infinity() };
    let small = if n_th == T::zero() || chi == T::zero() { T::zero() } else { small };
    (small, kappa * n_th)
}

/// Dephasing rate from thermal photon-number fluctuations of a mode with
/// decay rate `kappa` (1/s) that shifts the qubit by `chi01_ghz`.
pub fn shot_noise_rate<T: Real>(chi01_ghz: T, kappa: T, n_th: T) -> Result<ShotNoise<T>> {
    if !(kappa >= T::zero()) || !(n_th >= T::zero()) || !chi01_ghz.is_finite() {
        return Err(Error::domain("shot_noise", "need kappa >= 0, n_th >= 0 and finite chi"));
    }
    let (small, large) = shot_noise_asymptotes(chi01_ghz, kappa, n_th);
    let rate = if kappa == T::zero() || n_th == T::zero() || chi01_ghz == T::zero() {
        T::zero()
    } else {
        let y = lit::<T>(ghz_to_rad_per_s(1.0)) * chi01_ghz / kappa;
        let four: T = lit(4.0);
        // sqrt(1 + w) - 1 = w / (sqrt(1 + w) + 1), w = (1 + 2iy)² + 8iy n - 1
        let w = Complex::new(-four * y * y, four * y * (T::one() + lit::<T>(2.0) * n_th));
        let one = Complex::new(T::one(), T::zero());
        let root = (one + w).sqrt();
        (kappa * lit(0.5)) * (w / (root + one)).re
    };
    let regime = if (rate / small).ln().abs() <= (rate / large).ln().abs() || large == T::zero() {
        ShotNoiseRegime::SmallChi
    } else {
        ShotNoiseRegime::LargeChi
    };
    Ok(ShotNoise { rate, regime, small_chi: small, large_chi: large })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_reduction() {
        let c = NoiseCutoffs::<f64>::standard();
        let d1 = 2.0 * std::f64::consts::PI * 1e6;
        let t = tphi_1f(d1, 0.0, 1e-6, &c).unwrap();
        let want = 1.0 / (2.0 * 1e-12 * d1 * d1 * (c.omega_ir * c.t_meas).ln().abs()).sqrt();
        assert!((t / want - 1.0).abs() < 1e-14);
        assert!(tphi_1f(0.0, 0.0, 1e-6, &c).unwrap().is_infinite());
    }

    #[test]
    fn smooth_closed_form() {
        assert!((tphi_smooth(1.0, 2f64.sqrt(), 1.0, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(tphi_smooth(1.0f64, 1.0, 0.0, 0.0).unwrap().is_infinite());
    }

    #[test]
    fn shot_noise_limits() {
        let r = shot_noise_rate(0.0, 1e4, 2.0).unwrap();
        assert_eq!(r.rate, 0.0);
        let r = shot_noise_rate(1e-3, 1e4, 0.0).unwrap();
        assert_eq!(r.rate, 0.0);
        let big = shot_noise_rate(1e-3f64, 1e4, 2.29).unwrap();
        assert_eq!(big.regime, ShotNoiseRegime::LargeChi);
        assert!((big.rate / (1e4 * 2.29) - 1.0).abs() < 1e-3);
    }
}
