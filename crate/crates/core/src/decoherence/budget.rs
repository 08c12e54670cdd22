use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::dephasing::{shot_noise_rate, tphi_1f, ShotNoise};
use super::depolarization::{composite_depolarization, CompositeRates};
use super::purcell::purcell_exact;
use super::spectra::NoiseSpectrum;
use super::thermal::ThermalEnv;
use crate::basis::BasisSpec;
use crate::dispersive::{dispersive_analysis, operator_matrix, DispersiveReport, DEFAULT_LEVELS};
use crate::dressed::{dressed_spectrum_below, fock_edge, DressedSpectrum};
use crate::eigen::{EigenOptions, EigenSolution};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_noise_operator, NoiseChannel, SweepParameter};
use crate::params::CircuitParams;
use crate::scalar::{lit, Real};
use crate::spectrum::{energy_derivatives_around, solve_2d, Derivatives, DEFAULT_HYBRIDIZATION_THRESHOLD};

/// Fock states kept above the thermally occupied range.
pub const DEFAULT_FOCK_MARGIN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    TphiFlux1f,
    TphiIc1f,
    TphiCharge1f,
    TphiShot,
    T1Ic,
    T1Flux1f,
    T1Fluxline,
    T1Purcell,
}

impl Channel {
    pub const ALL: [Channel; 8] = [
        Channel::TphiFlux1f,
        Channel::TphiIc1f,
        Channel::TphiCharge1f,
        Channel::TphiShot,
        Channel::T1Ic,
        Channel::T1Flux1f,
        Channel::T1Fluxline,
        Channel::T1Purcell,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Channel::TphiFlux1f => "Tphi_flux_1f",
            Channel::TphiIc1f => "Tphi_Ic_1f",
            Channel::TphiCharge1f => "Tphi_charge_1f",
            Channel::TphiShot => "Tphi_shot",
            Channel::T1Ic => "T1_Ic",
            Channel::T1Flux1f => "T1_flux_1f",
            Channel::T1Fluxline => "T1_fluxline",
            Channel::T1Purcell => "T1_purcell",
        }
    }

    pub fn is_dephasing(self) -> bool {
        matches!(self, Channel::TphiFlux1f | Channel::TphiIc1f | Channel::TphiCharge1f | Channel::TphiShot)
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubRates<T> {
    pub gamma_1to0: T,
    pub gamma_0up: T,
    pub gamma_1up: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelResult<T> {
    pub channel: Channel,
    /// Seconds; infinite when the channel does not dephase at this order.
    pub tphi: Option<T>,
    /// Seconds; infinite when every transition rate vanishes.
    pub t1: Option<T>,
    pub sub: Option<SubRates<T>>,
    /// Whether the rate enters the combined times.
    pub included: bool,
    pub failed: Option<String>,
}

impl<T: Real> ChannelResult<T> {
    fn failed(channel: Channel, e: &Error) -> Self {
        Self { channel, tphi: None, t1: None, sub: None, included: false, failed: Some(e.to_string()) }
    }

    /// 1/s contribution to the combined dephasing or relaxation rate.
    pub fn rate(&self) -> T {
        let t = if self.channel.is_dephasing() { self.tphi } else { self.t1 };
        match t {
            Some(t) if t.is_infinite() => T::zero(),
            Some(t) => T::one() / t,
            None => T::zero(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BudgetOptions {
    /// 0-π levels in the dispersive sums and the dressed model.
    pub levels: usize,
    /// Add charge-noise dephasing to the combined T_φ.
    pub include_charge: bool,
    /// Evaluate the charge channel at all.
    pub charge_channel: bool,
    pub fock_margin: usize,
    /// Fock cutoff; `None` takes the thermal range plus `fock_margin`.
    pub n_zeta_max: Option<usize>,
    pub hybridization_threshold: f64,
    pub eigen: EigenOptions,
}

impl Default for BudgetOptions {
    fn default() -> Self {
        Self {
            levels: DEFAULT_LEVELS,
            include_charge: false,
            charge_channel: true,
            fock_margin: DEFAULT_FOCK_MARGIN,
            n_zeta_max: None,
            hybridization_threshold: DEFAULT_HYBRIDIZATION_THRESHOLD,
            eigen: EigenOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateBreakdown<T> {
    pub channels: Vec<ChannelResult<T>>,
    /// Combined times, seconds.
    pub tphi: T,
    pub t1: T,
    pub t2: T,
    pub energies: Vec<T>,
    pub dispersive: DispersiveReport<T>,
    pub shot_noise: ShotNoise<T>,
    pub thermal: ThermalEnv<T>,
    pub derivatives: Vec<(SweepParameter, Derivatives)>,
    pub n_zeta_max: usize,
    pub warnings: Vec<String>,
    /// Wall-clock seconds per stage.
    pub timings: Vec<(String, f64)>,
}

impl<T: Real> RateBreakdown<T> {
    pub fn channel(&self, c: Channel) -> Option<&ChannelResult<T>> {
        self.channels.iter().find(|r| r.channel == c)
    }

    pub fn any_failed(&self) -> bool {
        self.channels.iter().any(|c| c.failed.is_some())
    }
}

fn invert<T: Real>(rate: T) -> T {
    if rate == T::zero() {
        T::infinity()
    } else {
        T::one() / rate
    }
}

fn depolarization_channel<T: Real>(channel: Channel, r: Result<CompositeRates<T>>, warnings: &mut Vec<String>) -> ChannelResult<T> {
    match r {
        Ok(c) => {
            warnings.extend(c.warnings.iter().map(|w| format!("{channel}: {w}")));
            ChannelResult {
                channel,
                tphi: None,
                t1: Some(invert(c.gamma1)),
                sub: Some(SubRates { gamma_1to0: c.gamma_1to0, gamma_0up: c.gamma_0up, gamma_1up: c.gamma_1up }),
                included: true,
                failed: None,
            }
        }
        Err(e) => ChannelResult::failed(channel, &e),
    }
}

/// Everything the budget needs from the spectrum at one working point.
pub struct WorkingPoint<T> {
    pub sol2d: EigenSolution<T>,
    pub dispersive: DispersiveReport<T>,
    pub thermal: ThermalEnv<T>,
    pub dressed: Result<DressedSpectrum<T>>,
    pub n_zeta_max: usize,
}

/// Solves the 2D problem, the dispersive shifts and the dressed model.
pub fn working_point<T: Real>(params: &CircuitParams<T>, basis: &BasisSpec<T>, opts: &BudgetOptions) -> Result<WorkingPoint<T>> {
    params.validate()?;
    let levels = opts.levels.max(3);
    let sol2d = solve_2d(params, basis, levels, &opts.eigen)?;
    let dispersive = dispersive_analysis(params, basis, &sol2d, levels)?;
    let de = params.derive_energies()?;
    let thermal = ThermalEnv::new(de.omega_zeta, params.temperature, params.kappa_zeta)?;
    let nz = opts.n_zeta_max.unwrap_or(thermal.n_max() + opts.fock_margin);
    let bare = &sol2d.eigenvalues[..levels];
    let edge = fock_edge(bare, de.omega_zeta, nz);
    let dressed = dressed_spectrum_below(bare, &dispersive.g, de.omega_zeta, nz, opts.hybridization_threshold, edge);
    Ok(WorkingPoint { sol2d, dispersive, thermal, dressed, n_zeta_max: nz })
}

/// Every dephasing and depolarization channel at the working point `params`.
pub fn coherence_budget<T: Real>(params: &CircuitParams<T>, basis: &BasisSpec<T>, opts: &BudgetOptions) -> Result<RateBreakdown<T>> {
    let mut timings = Vec::new();
    let mut lap = |name: &str, t: &mut Instant| {
        timings.push((name.to_string(), t.elapsed().as_secs_f64()));
        *t = Instant::now();
    };
    let mut t = Instant::now();
    let wp = working_point(params, basis, opts)?;
    lap("working_point", &mut t);
    let levels = opts.levels.max(3);
    let mut warnings = wp.dispersive.warnings.clone();
    let mut channels = Vec::new();
    let mut derivatives = Vec::new();

    let deriv = |p: SweepParameter| energy_derivatives_around(params, basis, p, None, &opts.eigen, Some(&wp.sol2d));
    let (flux_d, (ic_d, charge_d)) = rayon::join(
        || deriv(SweepParameter::Flux),
        || rayon::join(|| deriv(SweepParameter::EJ), || opts.charge_channel.then(|| deriv(SweepParameter::NgTheta))),
    );
    lap("derivatives", &mut t);
    let noise = params.noise;
    let cut = params.cutoffs;
    let mut dephasing = |channel: Channel, p: SweepParameter, d: Result<Derivatives>, a: T, included: bool| match d
        .and_then(|d| tphi_1f(lit(d.d1), lit(d.d2), a, &cut).map(|t| (d, t)))
    {
        Ok((d, t)) => {
            derivatives.push((p, d));
            channels.push(ChannelResult { channel, tphi: Some(t), t1: None, sub: None, included, failed: None });
        }
        Err(e) => channels.push(ChannelResult::failed(channel, &e)),
    };
    dephasing(Channel::TphiFlux1f, SweepParameter::Flux, flux_d, noise.a_flux, true);
    dephasing(Channel::TphiIc1f, SweepParameter::EJ, ic_d, noise.a_ic * params.ej, true);
    if let Some(d) = charge_d {
        dephasing(Channel::TphiCharge1f, SweepParameter::NgTheta, d, noise.a_charge, opts.include_charge);
    }

    let shot = shot_noise_rate(wp.dispersive.chi01, params.kappa_zeta, wp.thermal.n_th)?;
    channels.push(ChannelResult {
        channel: Channel::TphiShot,
        tphi: Some(invert(shot.rate)),
        t1: None,
        sub: None,
        included: true,
        failed: None,
    });

    let ops = [NoiseChannel::CriticalCurrent, NoiseChannel::Flux]
        .map(|c| build_noise_operator(params, basis, c).and_then(|op| operator_matrix(&wp.sol2d, &op, levels)));
    let [g_ic, g_flux] = ops;
    let one_f = |a: T| NoiseSpectrum::one_over_f(a, cut.omega_ir, cut.omega_uv);
    let ohmic = NoiseSpectrum::OhmicFluxLine {
        mutual: params.fluxline.mutual,
        resistance: params.fluxline.resistance,
        temperature: params.temperature,
    };
    match &wp.dressed {
        Ok(dressed) => {
            let hybrid = dressed.labels.hybridized().filter(|s| s.l < 2).count();
            if hybrid > 0 {
                warnings.push(format!("{hybrid} dressed states with l < 2 are hybridized"));
            }
            let run = |g: &Result<_>, s: NoiseSpectrum<T>| match g {
                Ok(g) => composite_depolarization(dressed, g, &s, &wp.thermal),
                Err(e) => Err(Error::Internal(e.to_string())),
            };
            let r = run(&g_ic, one_f(noise.a_ic));
            channels.push(depolarization_channel(Channel::T1Ic, r, &mut warnings));
            let r = run(&g_flux, one_f(noise.a_flux));
            channels.push(depolarization_channel(Channel::T1Flux1f, r, &mut warnings));
            let r = run(&g_flux, ohmic);
            channels.push(depolarization_channel(Channel::T1Fluxline, r, &mut warnings));
            let r = purcell_exact(dressed, &wp.thermal);
            channels.push(depolarization_channel(Channel::T1Purcell, r, &mut warnings));
        }
        Err(e) => {
            for c in [Channel::T1Ic, Channel::T1Flux1f, Channel::T1Fluxline, Channel::T1Purcell] {
                channels.push(ChannelResult::failed(c, e));
            }
        }
    }
    lap("depolarization", &mut t);
    for c in &channels {
        if let Some(msg) = &c.failed {
            warnings.push(format!("{} failed: {msg}", c.channel));
        }
    }

    let sum = |deph: bool| {
        channels.iter().filter(|c| c.included && c.channel.is_dephasing() == deph).map(|c| c.rate()).sum::<T>()
    };
    let (gphi, g1) = (sum(true), sum(false));
    let tphi = invert(gphi);
    let t1 = invert(g1);
    let t2 = invert(g1 * lit(0.5) + gphi);
    warnings.sort();
    warnings.dedup();
    Ok(RateBreakdown {
        channels,
        tphi,
        t1,
        t2,
        energies: wp.sol2d.eigenvalues.clone(),
        dispersive: wp.dispersive,
        shot_noise: shot,
        thermal: wp.thermal.clone(),
        derivatives,
        n_zeta_max: wp.n_zeta_max,
        warnings,
        timings,
    })
}
