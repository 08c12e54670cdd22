//! Assembly of the circuit Hamiltonians and noise-coupling operators.
//!
//! Conventions, with n̂ the θ Cooper-pair number and n_g = `ng_theta`:
//!
//! * `-i ∂_θ → n̂ - n_g`, so `∂_θ → i (n̂ - n_g)` and `i ∂_θ → -(n̂ - n_g)`.
//! * `cos θ` and `sin θ` act as charge ladders: `<n±1| e^{±iθ} |n> = 1`.
//! * `∂_φ`, `∂²_φ` are central finite differences with hard walls.
//! * ζ = (8 E_C / E_L)^{1/4} (a + a†) / 2 and `-i ∂_ζ = i (a† - a) / (8 E_C / E_L)^{1/4}`.
//!
//! The 2D operator is
//!
//! ```text
//! H = 2 E_CΣ (n̂ - n_g)² - 2 E_CJ ∂²_φ + E_L φ² - 2 E_J cos θ cos(φ - φ_ext/2)
//!     + 2 E_CΣ dCJ ∂_φ ∂_θ + E_J dEJ sin θ sin(φ - φ_ext/2)
//! ```
//!
//! with the constant 2 E_J omitted. The ζ mode adds `Ω_ζ a†a` (zero-point
//! energy omitted) and the coupling `G a + G† a†` with
//! `G = c_φ φ - i c_θ (n̂ - n_g)`, whose matrix elements between 0-π
//! eigenstates are the couplings g_ll'.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::basis::{first_derivative_weights, second_derivative_weights, BasisSpec};
use crate::error::{Error, Result};
use crate::operator::{BasisTag, HermitianOperator, TripletBuilder};
use crate::params::CircuitParams;
use crate::scalar::{cplx, lit, Cplx, Real};

/// Noise processes that couple through the junctions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseChannel {
    /// Fluctuations of the mean critical current; operator in GHz per unit δI_c/I_c.
    CriticalCurrent,
    /// Fluctuations of the external flux; operator in GHz per Φ_0.
    Flux,
}

impl fmt::Display for NoiseChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseChannel::CriticalCurrent => "critical_current",
            NoiseChannel::Flux => "flux",
        })
    }
}

impl FromStr for NoiseChannel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "critical_current" | "Ic" | "ic" => Ok(NoiseChannel::CriticalCurrent),
            "flux" => Ok(NoiseChannel::Flux),
            other => Err(Error::Usage(format!("unknown noise channel `{other}`"))),
        }
    }
}

/// Parameters whose variation the spectrum module can differentiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "flux")]
    Flux,
    #[serde(rename = "ng_theta")]
    NgTheta,
    #[serde(rename = "EJ")]
    EJ,
    #[serde(rename = "EL")]
    EL,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Flux => "flux",
            SweepParameter::NgTheta => "ng_theta",
            SweepParameter::EJ => "EJ",
            SweepParameter::EL => "EL",
        }
    }

    pub fn get<T: Real>(self, p: &CircuitParams<T>) -> T {
        match self {
            SweepParameter::Flux => p.flux,
            SweepParameter::NgTheta => p.ng_theta,
            SweepParameter::EJ => p.ej,
            SweepParameter::EL => p.el,
        }
    }

    pub fn with_value<T: Real>(self, p: &CircuitParams<T>, v: T) -> CircuitParams<T> {
        let mut q = *p;
        match self {
            SweepParameter::Flux => q.flux = v,
            SweepParameter::NgTheta => q.ng_theta = v,
            SweepParameter::EJ => q.ej = v,
            SweepParameter::EL => q.el = v,
        }
        q
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flux" => Ok(SweepParameter::Flux),
            "ng_theta" | "ng" => Ok(SweepParameter::NgTheta),
            "EJ" => Ok(SweepParameter::EJ),
            "EL" => Ok(SweepParameter::EL),
            other => Err(Error::Usage(format!("unknown sweep parameter `{other}` (expected flux, ng_theta, EJ or EL)"))),
        }
    }
}

fn prepare<T: Real>(params: &CircuitParams<T>, basis: &BasisSpec<T>, dim: usize) -> Result<()> {
    params.validate()?;
    basis.validate()?;
    basis.check_dim(dim)
}

/// Pushes `c(x) cos θ + s(x) sin θ` with `x = φ - shift`, where `f(x) = (c, s)`.
fn push_junction_ladders<T: Real>(
    b: &mut TripletBuilder<T>,
    basis: &BasisSpec<T>,
    shift: T,
    f: impl Fn(T) -> (T, T),
) {
    let nt = basis.theta_dim();
    let half: T = lit(0.5);
    for it in 0..nt - 1 {
        for j in 0..basis.phi_points {
            let (cos_coef, sin_coef) = f(basis.phi_at(j) - shift);
            let lo = basis.index_2d(it, j);
            let hi = basis.index_2d(it + 1, j);
            // <n+1| cos θ |n> = 1/2, <n+1| sin θ |n> = -i/2
            let v = cplx(cos_coef * half, -sin_coef * half);
            b.push_pair(hi, lo, v);
        }
    }
}

/// The 0-π Hamiltonian on the θ-charge ⊗ φ-grid basis, GHz.
pub fn build_h_2d<T: Real>(params: &CircuitParams<T>, basis: &BasisSpec<T>) -> Result<HermitianOperator<T>> {
    let dim = basis.dim_2d();
    prepare(params, basis, dim)?;
    let de = params.derive_energies()?;
    let two: T = lit(2.0);
    let p = basis.phi_points;
    let h = basis.dphi();
    let w2 = second_derivative_weights(basis.fd_order);
    let w1 = first_derivative_weights(basis.fd_order);
    let kin = -two * params.ecj / (h * h);
    let cross = two * de.ecs * params.dcj / h;
    let shift = params.phi_ext() / two;

    let mut b = TripletBuilder::with_capacity(dim, dim * (2 * w2.len() + 4));
    for it in 0..basis.theta_dim() {
        let q = T::from_i64(basis.charge_at(it)).unwrap() - params.ng_theta;
        for j in 0..p {
            let phi = basis.phi_at(j);
            let row = basis.index_2d(it, j);
            let diag = two * de.ecs * q * q + params.el * phi * phi + kin * lit(w2[0]);
            b.push_real(row, row, diag);
            for k in 1..w2.len() {
                if j + k >= p {
                    break;
                }
                let col = basis.index_2d(it, j + k);
                // kinetic: symmetric real; cross term 2E_CΣ dCJ · i q · D1, D1 antisymmetric
                let v = cplx(kin * lit(w2[k]), cross * q * lit(w1[k]));
                b.push_pair(row, col, v);
            }
        }
    }
    let ej = params.ej;
    let dej = params.dej;
    push_junction_ladders(&mut b, basis, shift, |x| (-two * ej * x.cos(), ej * dej * x.sin()));
    b.build(BasisTag::ThetaPhi)
}

/// Diagonal 2D operator `φ` (radians).
pub fn phi_operator<T: Real>(basis: &BasisSpec<T>) -> HermitianOperator<T> {
    let vals: Vec<T> = (0..basis.dim_2d()).map(|i| basis.phi_at(i % basis.phi_points)).collect();
    HermitianOperator::diagonal(&vals, BasisTag::ThetaPhi)
}

/// Diagonal 2D operator `n̂_θ - n_g`, i.e. `-i ∂_θ`.
pub fn charge_operator<T: Real>(params: &CircuitParams<T>, basis: &BasisSpec<T>) -> HermitianOperator<T> {
    let vals: Vec<T> = (0..basis.dim_2d())
        .map(|i| T::from_i64(basis.charge_at(i / basis.phi_points)).unwrap() - params.ng_theta)
        .collect();
    HermitianOperator::diagonal(&vals, BasisTag::ThetaPhi)
}

/// Full θ–φ–ζ Hamiltonian on the charge ⊗ grid ⊗ Fock basis, GHz.
pub fn build_h_3d<T: Real>(params: &CircuitParams<T>, basis: &BasisSpec<T>) -> Result<HermitianOperator<T>> {
    let dim = basis.dim_3d();
    prepare(params, basis, dim)?;
    let h2 = build_h_2d(params, basis)?;
    let de = params.derive_energies()?;
    let cphi = params.g_phi_prefactor()?;
    let ctheta = params.g_theta_prefactor()?;
    let z = basis.zeta_dim();
    let p = basis.phi_points;

    let mut b = TripletBuilder::with_capacity(dim, h2.nnz() * z + 3 * dim);
    for (r, c, v) in h2.entries() {
        for n in 0..z {
            b.push(r * z + n, c * z + n, v);
        }
    }
    for i in 0..basis.dim_2d() {
        let phi = basis.phi_at(i % p);
        let q = T::from_i64(basis.charge_at(i / p)).unwrap() - params.ng_theta;
        // coefficient of a†: G† = c_φ φ + i c_θ q
        let gdag = cplx(cphi * phi, ctheta * q);
        for n in 0..z {
            let row = i * z + n;
            b.push_real(row, row, de.omega_zeta * T::from_usize(n).unwrap());
            if n + 1 < z {
                let amp = T::from_usize(n + 1).unwrap().sqrt();
                b.push_pair(row + 1, row, gdag.scale(amp));
            }
        }
    }
    b.build(BasisTag::ThetaPhiZeta)
}

/// Coupling operator of a junction noise channel on the 2D basis.
///
/// * flux: `∂H/∂(Φ_ext/Φ_0) = -2π E_J cos θ sin(φ - φ_ext/2) - π E_J dEJ sin θ cos(φ - φ_ext/2)`
/// * critical current: `∂H/∂(δI_c/I_c) = E_J [-2 cos θ cos(φ - φ_ext/2) + dEJ sin θ sin(φ - φ_ext/2)]`
pub fn build_noise_operator<T: Real>(
    params: &CircuitParams<T>,
    basis: &BasisSpec<T>,
    channel: NoiseChannel,
) -> Result<HermitianOperator<T>> {
    prepare(params, basis, basis.dim_2d())?;
    let two: T = lit(2.0);
    let pi = T::PI();
    let ej = params.ej;
    let dej = params.dej;
    let shift = params.phi_ext() / two;
    let mut b = TripletBuilder::new(basis.dim_2d());
    match channel {
        NoiseChannel::Flux => push_junction_ladders(&mut b, basis, shift, |x| {
            // cos θ coefficient, sin θ coefficient
            (-two * pi * ej * x.sin(), -pi * ej * dej * x.cos())
        }),
        NoiseChannel::CriticalCurrent => {
            push_junction_ladders(&mut b, basis, shift, |x| (-two * ej * x.cos(), ej * dej * x.sin()))
        }
    }
    b.build(BasisTag::ThetaPhi)
}

/// `∂H/∂λ` on the 2D basis for the Hellmann–Feynman check.
pub fn parameter_derivative_2d<T: Real>(
    params: &CircuitParams<T>,
    basis: &BasisSpec<T>,
    parameter: SweepParameter,
) -> Result<HermitianOperator<T>> {
    match parameter {
        SweepParameter::Flux => build_noise_operator(params, basis, NoiseChannel::Flux),
        SweepParameter::EJ => {
            let mut unit = *params;
            unit.ej = T::one();
            build_noise_operator(&unit, basis, NoiseChannel::CriticalCurrent)
        }
        SweepParameter::EL => {
            let vals: Vec<T> = (0..basis.dim_2d())
                .map(|i| {
                    let x = basis.phi_at(i % basis.phi_points);
                    x * x
                })
                .collect();
            Ok(HermitianOperator::diagonal(&vals, BasisTag::ThetaPhi))
        }
        SweepParameter::NgTheta => {
            // -4 E_CΣ (n̂ - n_g) from the kinetic term; the dCJ cross term is
            // linear in n_g as well.
            let de = params.derive_energies()?;
            let four: T = lit(4.0);
            let q = charge_operator(params, basis);
            let mut b = TripletBuilder::new(basis.dim_2d());
            for (r, c, v) in q.entries() {
                b.push(r, c, v.scale(-four * de.ecs));
            }
            let w1 = first_derivative_weights(basis.fd_order);
            let h = basis.dphi();
            let cross = lit::<T>(2.0) * de.ecs * params.dcj / h;
            for it in 0..basis.theta_dim() {
                for j in 0..basis.phi_points {
                    for (k, w) in w1.iter().enumerate().skip(1) {
                        if j + k >= basis.phi_points {
                            break;
                        }
                        let row = basis.index_2d(it, j);
                        b.push_pair(row, row + k, cplx(T::zero(), -cross * lit(*w)));
                    }
                }
            }
            b.build(BasisTag::ThetaPhi)
        }
    }
}

/// Vector in the 3D basis for a 2D state ⊗ Fock state |n>.
pub fn embed_product<T: Real>(psi2d: &[Cplx<T>], n: usize, zeta_dim: usize) -> Vec<Cplx<T>> {
    let mut out = vec![Cplx::new(T::zero(), T::zero()); psi2d.len() * zeta_dim];
    for (i, a) in psi2d.iter().enumerate() {
        out[i * zeta_dim + n] = *a;
    }
    out
}
