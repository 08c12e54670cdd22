//! Effective offset charges seen by the θ, φ and ζ modes when gate
//! capacitances couple external voltages to the circuit nodes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::CircuitParams;
use crate::scalar::{lit, Real};

/// e² / 2h in GHz·F: a capacitance C has charging energy `E_CHARGE_GHZ_F / C`.
pub const E_CHARGE_GHZ_F: f64 = 1.937_025_3e-14;

/// Offset charges C_g V_x / 2e of the linearized modes, before mixing.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BareCharges<T> {
    pub theta: T,
    pub phi: T,
    pub zeta: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveChargeMap<T> {
    /// Gate capacitance in farads, if one was given.
    pub cg: Option<T>,
    /// Gate-renormalized charging energies, GHz.
    pub ec_prime: T,
    pub ecj_prime: T,
    pub ecs_prime: T,
    pub ng_theta_eff: T,
    pub ng_phi_eff: T,
    pub ng_zeta_eff: T,
}

/// Charging energy after adding `cg / 2` to the capacitance behind `e`.
fn renormalized<T: Real>(e: T, cg: Option<T>) -> T {
    match cg {
        None => e,
        Some(cg) => {
            let k: T = lit(E_CHARGE_GHZ_F);
            let c = k / e;
            k / (c + cg * lit(0.5))
        }
    }
}

pub fn effective_offset_charges<T: Real>(bare: BareCharges<T>, params: &CircuitParams<T>) -> Result<EffectiveChargeMap<T>> {
    params.validate()?;
    for (field, v) in [("nbar_theta", bare.theta), ("nbar_phi", bare.phi), ("nbar_zeta", bare.zeta)] {
        if !v.is_finite() {
            return Err(Error::domain(field, "must be finite"));
        }
    }
    let de = params.derive_energies()?;
    let cg = params.gate_capacitance;
    let ec_p = renormalized(params.ec, cg);
    let ecj_p = renormalized(params.ecj, cg);
    let ecs_p = renormalized(de.ecs, cg);
    let half: T = lit(0.5);
    let theta = bare.theta - half * (ecj_p / params.ecj) * params.dcj * bare.phi - half * (ec_p / params.ec) * params.dc * bare.zeta;
    let phi = bare.phi - half * (ecs_p / params.ecj) * params.dcj * bare.theta;
    let zeta = bare.zeta - half * (ecs_p / params.ec) * params.dc * bare.theta;
    Ok(EffectiveChargeMap {
        cg,
        ec_prime: ec_p,
        ecj_prime: ecj_p,
        ecs_prime: ecs_p,
        ng_theta_eff: theta,
        ng_phi_eff: phi,
        ng_zeta_eff: zeta,
    })
}
