//! Discretization of the three circuit variables.
//!
//! θ is compact and uses the Cooper-pair charge basis n_θ ∈ [-N, N]. φ is
//! extended and lives on a uniform grid with hard walls just outside
//! [-φ_max, φ_max]. ζ is harmonic and uses its Fock basis.
//!
//! Flattened 2D index: `i_theta * phi_points + i_phi`. Flattened 3D index:
//! `index_2d * (n_zeta_max + 1) + n_zeta`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::CircuitParams;
use crate::scalar::{lit, Real};

pub const DEFAULT_N_THETA_MAX: usize = 10;
pub const DEFAULT_N_ZETA_MAX: usize = 20;
pub const DEFAULT_FD_ORDER: usize = 10;
/// Grid points are added until the spacing is at most this, in radians.
pub const DEFAULT_MAX_PHI_SPACING: f64 = 0.15;
/// φ_max in units of the wave-function spread (8 E_CJ / E_L)^{1/4} / √2.
pub const DEFAULT_PHI_EXTENT_SIGMAS: f64 = 7.0;
pub const DEFAULT_MAX_DIM: usize = 4_000_000;

/// Environment variable capping the dimension of any assembled operator.
pub const MAX_DIM_ENV: &str = "ZEROPI_MAX_DIM";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec<T> {
    pub n_theta_max: usize,
    pub phi_points: usize,
    /// radians
    pub phi_max: T,
    pub n_zeta_max: usize,
    /// Accuracy order of the central finite-difference stencils in φ (even).
    pub fd_order: usize,
    /// Largest operator dimension that may be assembled.
    pub max_dim: usize,
}

/// Largest dimension allowed by `ZEROPI_MAX_DIM`, or the built-in default.
pub fn max_dim_from_env() -> usize {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM)
}

impl<T: Real> BasisSpec<T> {
    /// Default discretization for a parameter set: φ_max = 7 σ_φ with
    /// σ_φ = (8 E_CJ / E_L)^{1/4} / √2, spacing ≤ 0.15 rad.
    pub fn for_params(params: &CircuitParams<T>) -> Self {
        let sigma = (lit::<T>(8.0) * params.ecj / params.el).sqrt().sqrt() / lit::<T>(2.0).sqrt();
        let phi_max = lit::<T>(DEFAULT_PHI_EXTENT_SIGMAS) * sigma;
        Self {
            n_theta_max: DEFAULT_N_THETA_MAX,
            phi_points: points_for_spacing(phi_max, lit(DEFAULT_MAX_PHI_SPACING)),
            phi_max,
            n_zeta_max: DEFAULT_N_ZETA_MAX,
            fd_order: DEFAULT_FD_ORDER,
            max_dim: max_dim_from_env(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_theta_max < 1 {
            return Err(Error::domain("n_theta_max", "must be >= 1"));
        }
        if self.phi_points < 3 {
            return Err(Error::domain("phi_points", "must be >= 3"));
        }
        if !(self.phi_max > T::zero()) || !self.phi_max.is_finite() {
            return Err(Error::domain("phi_max", "must be positive"));
        }
        if self.fd_order < 2 || self.fd_order % 2 != 0 || self.fd_order > 16 {
            return Err(Error::domain("fd_order", format!("must be even in 2..=16, got {}", self.fd_order)));
        }
        Ok(())
    }

    pub fn theta_dim(&self) -> usize {
        2 * self.n_theta_max + 1
    }

    pub fn zeta_dim(&self) -> usize {
        self.n_zeta_max + 1
    }

    pub fn dim_2d(&self) -> usize {
        self.theta_dim() * self.phi_points
    }

    pub fn dim_3d(&self) -> usize {
        self.dim_2d() * self.zeta_dim()
    }

    pub fn dphi(&self) -> T {
        (self.phi_max + self.phi_max) / T::from_usize(self.phi_points - 1).unwrap()
    }

    pub fn phi_at(&self, j: usize) -> T {
        -self.phi_max + self.dphi() * T::from_usize(j).unwrap()
    }

    /// Cooper-pair number of charge index `i`.
    pub fn charge_at(&self, i: usize) -> i64 {
        i as i64 - self.n_theta_max as i64
    }

    #[inline]
    pub fn index_2d(&self, i_theta: usize, i_phi: usize) -> usize {
        i_theta * self.phi_points + i_phi
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if dim > self.max_dim {
            Err(Error::Resource { dim, max: self.max_dim })
        } else {
            Ok(())
        }
    }

    /// Same extent, spacing halved.
    pub fn refined_phi(&self) -> Self {
        Self { phi_points: 2 * self.phi_points - 1, ..*self }
    }

    /// Extent doubled at the same spacing.
    pub fn extended_phi(&self) -> Self {
        Self { phi_points: 2 * self.phi_points - 1, phi_max: self.phi_max + self.phi_max, ..*self }
    }
}

fn points_for_spacing<T: Real>(phi_max: T, spacing: T) -> usize {
    let intervals = ((phi_max + phi_max) / spacing).ceil().to_usize().unwrap_or(2).max(2);
    intervals + 1
}

/// Central-difference weights for the second derivative, offsets 0..=p.
/// The stencil is symmetric: w[-k] = w[k].
pub fn second_derivative_weights(order: usize) -> Vec<f64> {
    let p = order / 2;
    let mut w = vec![0.0; p + 1];
    for k in 1..=p {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        w[k] = 2.0 * sign * ratio(p, k) / (k * k) as f64;
        w[0] -= 2.0 / (k * k) as f64;
    }
    w
}

/// Central-difference weights for the first derivative, offsets 1..=p
/// (index 0 unused). Antisymmetric: w[-k] = -w[k].
pub fn first_derivative_weights(order: usize) -> Vec<f64> {
    let p = order / 2;
    let mut w = vec![0.0; p + 1];
    for k in 1..=p {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        w[k] = sign * ratio(p, k) / k as f64;
    }
    w
}

/// (p!)^2 / ((p-k)! (p+k)!)
fn ratio(p: usize, k: usize) -> f64 {
    (1..=k).map(|j| (p + 1 - j) as f64 / (p + j) as f64).product()
}
