//! Run configuration: TOML with unit-suffixed keys.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use zeropi_core::basis::{max_dim_from_env, DEFAULT_FD_ORDER};
use zeropi_core::decoherence::{BudgetOptions, DEFAULT_FOCK_MARGIN};
use zeropi_core::eigen::{DEFAULT_SEED, DEFAULT_TOL};
use zeropi_core::params::{FluxLine, NoiseAmplitudes, NoiseCutoffs};
use zeropi_core::spectrum::DEFAULT_HYBRIDIZATION_THRESHOLD;
use zeropi_core::{Basis, EigenOptions, Params, SweepParameter};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Spectrum,
    Sweep,
    Dispersive,
    Coherence,
    Purcell,
    Validate,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Spectrum => "spectrum",
            Task::Sweep => "sweep",
            Task::Dispersive => "dispersive",
            Task::Coherence => "coherence",
            Task::Purcell => "purcell",
            Task::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Task named in the file; the command line takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    /// 0 uses every available core.
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub circuit: CircuitSection,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub basis: BasisSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub output: OutputSection,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSection {
    pub EC_GHz: f64,
    pub ECJ_GHz: f64,
    pub EJ_GHz: f64,
    pub EL_GHz: f64,
    #[serde(default)]
    pub dC: f64,
    #[serde(default)]
    pub dCJ: f64,
    #[serde(default)]
    pub dEJ: f64,
    #[serde(default)]
    pub dEL: f64,
    #[serde(default)]
    pub flux_Phi0: f64,
    /// Cooper pairs.
    #[serde(default)]
    pub ng_theta: f64,
    #[serde(default = "default_temperature")]
    pub temperature_K: f64,
    #[serde(default = "default_kappa")]
    pub kappa_zeta_per_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate_capacitance_F: Option<f64>,
}

fn default_temperature() -> f64 {
    0.015
}

fn default_kappa() -> f64 {
    1e4
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSection {
    pub A_flux_Phi0: f64,
    pub A_charge_2e: f64,
    pub A_Ic_fraction: f64,
    pub fluxline_M_Phi0_per_A: f64,
    pub fluxline_R_ohm: f64,
    pub omega_ir_rad_per_s: f64,
    pub omega_uv_rad_per_s: f64,
    pub t_meas_s: f64,
}

impl Default for NoiseSection {
    fn default() -> Self {
        let a = NoiseAmplitudes::<f64>::standard();
        let f = FluxLine::<f64>::standard();
        let c = NoiseCutoffs::<f64>::standard();
        Self {
            A_flux_Phi0: a.a_flux,
            A_charge_2e: a.a_charge,
            A_Ic_fraction: a.a_ic,
            fluxline_M_Phi0_per_A: f.mutual,
            fluxline_R_ohm: f.resistance,
            omega_ir_rad_per_s: c.omega_ir,
            omega_uv_rad_per_s: c.omega_uv,
            t_meas_s: c.t_meas,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_theta_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_max_rad: Option<f64>,
    /// Fock cutoff of the ζ mode; defaults to the thermal range plus a margin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_zeta_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub levels: usize,
    pub tol: f64,
    pub hybridization_threshold: f64,
    pub fock_margin: usize,
    pub include_charge_noise: bool,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            levels: 15,
            tol: DEFAULT_TOL,
            hybridization_threshold: DEFAULT_HYBRIDIZATION_THRESHOLD,
            fock_margin: DEFAULT_FOCK_MARGIN,
            include_charge_noise: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// flux, ng_theta, EJ or EL
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepSection {
    pub fn parameter(&self) -> Result<SweepParameter, CliError> {
        SweepParameter::from_str(&self.parameter).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn grid(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points).map(|i| if i + 1 == self.points { self.stop } else { self.start + step * i as f64 }).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub directory: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { directory: PathBuf::from("zeropi-out"), formats: vec![Format::Csv, Format::Json] }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn params(&self) -> Params {
        let c = &self.circuit;
        let n = &self.noise;
        let mut p = Params::with_energies(c.EC_GHz, c.ECJ_GHz, c.EJ_GHz, c.EL_GHz, 0.0);
        p.dc = c.dC;
        p.dcj = c.dCJ;
        p.dej = c.dEJ;
        p.del = c.dEL;
        p.flux = c.flux_Phi0;
        p.ng_theta = c.ng_theta;
        p.temperature = c.temperature_K;
        p.kappa_zeta = c.kappa_zeta_per_s;
        p.gate_capacitance = c.gate_capacitance_F;
        p.noise = NoiseAmplitudes { a_flux: n.A_flux_Phi0, a_charge: n.A_charge_2e, a_ic: n.A_Ic_fraction };
        p.fluxline = FluxLine { mutual: n.fluxline_M_Phi0_per_A, resistance: n.fluxline_R_ohm };
        p.cutoffs = NoiseCutoffs { omega_ir: n.omega_ir_rad_per_s, omega_uv: n.omega_uv_rad_per_s, t_meas: n.t_meas_s };
        p
    }

    /// Basis with every unset field filled from the circuit defaults.
    pub fn basis(&self) -> Result<Basis, CliError> {
        let params = self.params();
        params.validate()?;
        let mut b = Basis::for_params(&params);
        let s = &self.basis;
        if let Some(x) = s.phi_max_rad {
            let spacing = b.dphi();
            b.phi_max = x;
            if s.phi_points.is_none() {
                b.phi_points = ((2.0 * x / spacing).ceil() as usize).max(2) + 1;
            }
        }
        b.n_theta_max = s.n_theta_max.unwrap_or(b.n_theta_max);
        b.phi_points = s.phi_points.unwrap_or(b.phi_points);
        b.fd_order = s.fd_order.unwrap_or(DEFAULT_FD_ORDER);
        b.n_zeta_max = match s.n_zeta_max {
            Some(n) => n,
            None => {
                let omega = params.derive_energies()?.omega_zeta;
                let env = zeropi_core::ThermalEnv::new(omega, params.temperature, params.kappa_zeta)?;
                env.n_max() + self.solver.fock_margin
            }
        };
        b.max_dim = max_dim_from_env();
        b.validate()?;
        Ok(b)
    }

    pub fn eigen(&self) -> EigenOptions {
        EigenOptions { tol: self.solver.tol, seed: self.seed, ..EigenOptions::default() }
    }

    pub fn budget_options(&self, basis: &Basis) -> BudgetOptions {
        BudgetOptions {
            levels: self.solver.levels,
            include_charge: self.solver.include_charge_noise,
            charge_channel: true,
            fock_margin: self.solver.fock_margin,
            n_zeta_max: Some(basis.n_zeta_max),
            hybridization_threshold: self.solver.hybridization_threshold,
            eigen: self.eigen(),
        }
    }

    /// Checks everything that can be checked before computing.
    pub fn validate(&self) -> Result<(), CliError> {
        self.params().validate()?;
        self.basis()?;
        let s = &self.solver;
        if s.levels < 3 {
            return Err(CliError::Config(format!("solver.levels must be at least 3, got {}", s.levels)));
        }
        if !(s.tol > 0.0 && s.tol < 1.0) {
            return Err(CliError::Config(format!("solver.tol must lie in (0, 1), got {}", s.tol)));
        }
        if !(s.hybridization_threshold > 0.0 && s.hybridization_threshold <= 1.0) {
            return Err(CliError::Config("solver.hybridization_threshold must lie in (0, 1]".into()));
        }
        if let Some(sw) = &self.sweep {
            let p = sw.parameter()?;
            if sw.points == 0 || !sw.start.is_finite() || !sw.stop.is_finite() {
                return Err(CliError::Config("sweep needs points >= 1 and finite bounds".into()));
            }
            if sw.points > 1 && !(sw.stop > sw.start) {
                return Err(CliError::Config("sweep.stop must exceed sweep.start".into()));
            }
            let params = self.params();
            for x in [sw.start, sw.stop] {
                p.with_value(&params, x).validate()?;
            }
        }
        if self.output.formats.is_empty() {
            return Err(CliError::Config("output.formats must not be empty".into()));
        }
        Ok(())
    }

    /// Copy with every default made explicit, for the manifest echo.
    pub fn resolved(&self) -> Result<Self, CliError> {
        let b = self.basis()?;
        let mut c = self.clone();
        c.basis = BasisSection {
            n_theta_max: Some(b.n_theta_max),
            phi_points: Some(b.phi_points),
            phi_max_rad: Some(b.phi_max),
            n_zeta_max: Some(b.n_zeta_max),
            fd_order: Some(b.fd_order),
        };
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
