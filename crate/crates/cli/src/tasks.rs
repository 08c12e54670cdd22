use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use zeropi_core::decoherence::{
    coherence_budget, purcell_exact, purcell_perturbative, shot_noise_rate, working_point, Channel, CompositeRates,
};
use zeropi_core::dressed::{dressed_spectrum_below, fock_edge};
use zeropi_core::spectrum::{solve_2d, sweep, SweepOptions, MAX_FAILED_FRACTION};
use zeropi_core::{dispersive_analysis, Basis, Budget, EigenSolution, Error, Params, SweepParameter, ThermalEnv};

use crate::config::RunConfig;
use crate::output::{num, opt, Csv};
use crate::CliError;

/// Everything a task produced, before it is written.
#[derive(Debug, Default)]
pub struct Report {
    pub csv: Vec<(String, String)>,
    pub json: Vec<(String, Value)>,
    pub warnings: Vec<String>,
    pub convergence: Value,
    pub stages: Vec<(String, f64)>,
    /// Printed to stdout.
    pub lines: Vec<String>,
    /// Set when results were written but some part failed.
    pub failure: Option<String>,
}

impl Report {
    pub fn stage<R>(&mut self, name: &str, f: impl FnOnce() -> R) -> R {
        let t = Instant::now();
        let r = f();
        self.stages.push((name.to_string(), t.elapsed().as_secs_f64()));
        r
    }
}

/// One sweep coordinate, or the working point when no sweep is configured.
struct Points {
    parameter: SweepParameter,
    grid: Vec<f64>,
    swept: bool,
}

fn points(cfg: &RunConfig, params: &Params) -> Result<Points, CliError> {
    match &cfg.sweep {
        Some(s) => Ok(Points { parameter: s.parameter()?, grid: s.grid(), swept: true }),
        None => Ok(Points { parameter: SweepParameter::Flux, grid: vec![params.flux], swept: false }),
    }
}

fn aborts(e: &Error) -> bool {
    matches!(e, Error::Domain { .. } | Error::Resource { .. } | Error::Usage(_))
}

/// Runs `f` over the grid in parallel. Points that fail for numerical
/// reasons are reported; too many of them abort.
fn over_points<R: Send>(
    pts: &Points,
    params: &Params,
    warnings: &mut Vec<String>,
    f: impl Fn(&Params) -> Result<R, Error> + Sync,
) -> Result<Vec<Option<R>>, CliError> {
    let results: Vec<Result<R, Error>> =
        pts.grid.par_iter().map(|x| f(&pts.parameter.with_value(params, *x))).collect();
    let mut out = Vec::with_capacity(results.len());
    for (x, r) in pts.grid.iter().zip(results) {
        match r {
            Ok(v) => out.push(Some(v)),
            Err(e) if aborts(&e) || !pts.swept => return Err(e.into()),
            Err(e) => {
                warnings.push(format!("{} = {}: {e}", pts.parameter, num(*x)));
                out.push(None);
            }
        }
    }
    let failed = out.iter().filter(|r| r.is_none()).count();
    if failed as f64 > MAX_FAILED_FRACTION * out.len() as f64 {
        return Err(Error::SweepAborted { failed, total: out.len() }.into());
    }
    Ok(out)
}

fn header<'a>(swept: bool, rest: &[&'a str]) -> Vec<&'a str> {
    let mut h = Vec::with_capacity(rest.len() + 1);
    if swept {
        h.push("grid_value");
    }
    h.extend_from_slice(rest);
    h
}

fn with_grid(swept: bool, x: f64, mut cells: Vec<String>) -> Vec<String> {
    if swept {
        cells.insert(0, num(x));
    }
    cells
}

fn solution_report(sol: &EigenSolution<f64>) -> Value {
    let worst = sol.residuals.iter().copied().fold(0.0, f64::max);
    json!({
        "levels": sol.len(),
        "all_converged": sol.all_converged(),
        "max_residual_GHz": worst,
        "matvecs": sol.iterations,
        "norm_estimate_GHz": sol.norm_estimate,
    })
}

fn basis_report(basis: &Basis, params: &Params) -> Value {
    let thermal = params
        .derive_energies()
        .ok()
        .and_then(|d| ThermalEnv::new(d.omega_zeta, params.temperature, params.kappa_zeta).ok());
    json!({
        "n_theta_max": basis.n_theta_max,
        "phi_points": basis.phi_points,
        "phi_max_rad": basis.phi_max,
        "fd_order": basis.fd_order,
        "n_zeta_max": basis.n_zeta_max,
        "dim_2d": basis.dim_2d(),
        "max_dim": basis.max_dim,
        "thermal_n_max": thermal.as_ref().map(|t| t.n_max()),
        "discarded_thermal_weight": thermal.as_ref().map(|t| t.discarded),
        "cutoff_doubling": "run the validate task",
    })
}

pub fn spectrum(cfg: &RunConfig) -> Result<Report, CliError> {
    let params = cfg.params();
    let basis = cfg.basis()?;
    let levels = cfg.solver.levels;
    let mut r = Report::default();
    let sol = r.stage("solve_2d", || solve_2d(&params, &basis, levels, &cfg.eigen()))?;
    let disp = r.stage("coupling", || dispersive_analysis(&params, &basis, &sol, levels))?;
    let omega = params.derive_energies()?.omega_zeta;
    let bare = &sol.eigenvalues[..levels];
    let nz = basis.n_zeta_max;
    let dressed = r.stage("dressed", || {
        dressed_spectrum_below(bare, &disp.g, omega, nz, cfg.solver.hybridization_threshold, fock_edge(bare, omega, nz))
    })?;
    let mut csv = Csv::new(&["grid_value", "level_index", "label_l", "label_n", "energy_GHz", "overlap"]);
    let mut states = dressed.labels.states.clone();
    states.sort_by_key(|s| s.index);
    for s in &states {
        csv.row(&[num(params.flux), s.index.to_string(), s.l.to_string(), s.n.to_string(), num(s.energy), num(s.overlap)]);
    }
    let hybrid: Vec<_> = states.iter().filter(|s| s.hybridized).map(|s| (s.l, s.n)).collect();
    if !hybrid.is_empty() {
        r.warnings.push(format!(
            "{} dressed states hybridized below overlap {}: {:?}",
            hybrid.len(),
            cfg.solver.hybridization_threshold,
            hybrid
        ));
    }
    r.warnings.extend(disp.warnings.iter().cloned());
    r.csv.push(("spectrum.csv".into(), csv.into_string()));
    r.json.push((
        "spectrum.json".into(),
        json!({ "bare_energies_GHz": bare, "omega_zeta_GHz": omega, "labels": dressed.labels, "label_cutoff_GHz": dressed.cutoff }),
    ));
    r.convergence = json!({ "basis": basis_report(&basis, &params), "eigensolver": solution_report(&sol) });
    Ok(r)
}

pub fn sweep_task(cfg: &RunConfig) -> Result<Report, CliError> {
    let params = cfg.params();
    let basis = cfg.basis()?;
    let s = cfg.sweep.as_ref().ok_or_else(|| CliError::Config("the sweep task needs a [sweep] section".into()))?;
    let parameter = s.parameter()?;
    let grid = s.grid();
    let mut r = Report::default();
    let opts = SweepOptions { k: cfg.solver.levels, eigen: cfg.eigen(), derivative_step: None, derivatives: false };
    let curve = r.stage("sweep", || sweep(&params, &basis, parameter, &grid, &opts))?;
    let mut csv = Csv::new(&["grid_value", "level_index", "label_l", "label_n", "energy_GHz", "overlap"]);
    for (i, x) in curve.grid.iter().enumerate() {
        for (level, e) in curve.energies[i].iter().enumerate() {
            let o = curve.overlaps[i].get(level).copied().unwrap_or(f64::NAN);
            csv.row(&[num(*x), level.to_string(), level.to_string(), "0".into(), num(*e), num(o)]);
        }
    }
    r.warnings.extend(curve.warnings.iter().cloned());
    r.csv.push(("spectrum.csv".into(), csv.into_string()));
    r.json.push(("sweep.json".into(), serde_json::to_value(&curve).expect("curve serializes")));
    let worst = curve.solutions.iter().flatten().flat_map(|s| s.residuals.iter().copied()).fold(0.0, f64::max);
    r.convergence = json!({
        "basis": basis_report(&basis, &params),
        "failed_points": curve.failed.iter().filter(|f| **f).count(),
        "max_residual_GHz": worst,
    });
    Ok(r)
}

pub fn dispersive(cfg: &RunConfig) -> Result<Report, CliError> {
    let params = cfg.params();
    let basis = cfg.basis()?;
    let pts = points(cfg, &params)?;
    let levels = cfg.solver.levels;
    let mut r = Report::default();
    let mut warnings = Vec::new();
    let results = r.stage("dispersive", || {
        over_points(&pts, &params, &mut warnings, |p| {
            let sol = solve_2d(p, &basis, levels, &cfg.eigen())?;
            let d = dispersive_analysis(p, &basis, &sol, levels)?;
            let omega = p.derive_energies()?.omega_zeta;
            let env = ThermalEnv::new(omega, p.temperature, p.kappa_zeta)?;
            let sn = shot_noise_rate(d.chi01, p.kappa_zeta, env.n_th)?;
            Ok((d, env, sn))
        })
    })?;
    let mut csv = Csv::new(&header(pts.swept, &["level", "chi_GHz", "Lambda_GHz", "chi01_GHz", "max_g_over_Delta"]));
    let mut sn_csv = Csv::new(&header(
        pts.swept,
        &["chi01_GHz", "n_th", "Gamma_SN_per_s", "Tphi_SN_s", "Tphi_small_chi_s", "Tphi_large_chi_s", "regime"],
    ));
    let inv = |x: f64| if x == 0.0 { f64::INFINITY } else { 1.0 / x };
    let mut json_points = Vec::new();
    for (x, res) in pts.grid.iter().zip(&results) {
        let Some((d, env, sn)) = res else { continue };
        for l in 0..d.chi.len() {
            csv.row(&with_grid(
                pts.swept,
                *x,
                vec![l.to_string(), num(d.chi[l]), num(d.lambda[l]), num(d.chi01), num(d.g_over_delta[l])],
            ));
        }
        sn_csv.row(&with_grid(
            pts.swept,
            *x,
            vec![
                num(d.chi01),
                num(env.n_th),
                num(sn.rate),
                num(inv(sn.rate)),
                num(inv(sn.small_chi)),
                num(inv(sn.large_chi)),
                format!("{:?}", sn.regime),
            ],
        ));
        for w in &d.warnings {
            warnings.push(if pts.swept { format!("{} = {}: {w}", pts.parameter, num(*x)) } else { w.clone() });
        }
        json_points.push(json!({ "grid_value": x, "report": d, "shot_noise": sn }));
    }
    r.warnings = warnings;
    r.csv.push(("dispersive.csv".into(), csv.into_string()));
    r.csv.push(("shot_noise.csv".into(), sn_csv.into_string()));
    r.json.push(("dispersive.json".into(), Value::Array(json_points)));
    r.convergence = json!({ "basis": basis_report(&basis, &params) });
    Ok(r)
}

fn channel_row(c: &zeropi_core::decoherence::ChannelResult<f64>) -> Vec<String> {
    let sub = c.sub;
    let status = match &c.failed {
        Some(_) => "failed",
        None if c.included => "included",
        None => "excluded",
    };
    vec![
        c.channel.name().to_string(),
        opt(c.tphi),
        opt(c.t1),
        String::new(),
        opt(sub.map(|s| s.gamma_1to0)),
        opt(sub.map(|s| s.gamma_0up)),
        opt(sub.map(|s| s.gamma_1up)),
        status.to_string(),
    ]
}

pub fn coherence(cfg: &RunConfig) -> Result<Report, CliError> {
    let params = cfg.params();
    let basis = cfg.basis()?;
    let pts = points(cfg, &params)?;
    let opts = cfg.budget_options(&basis);
    let mut r = Report::default();
    let mut warnings = Vec::new();
    let results: Vec<Option<Budget>> =
        r.stage("coherence", || over_points(&pts, &params, &mut warnings, |p| coherence_budget(p, &basis, &opts)))?;
    let mut csv = Csv::new(&header(
        pts.swept,
        &["channel", "Tphi_s", "T1_s", "T2_s", "Gamma_1to0_per_s", "Gamma_0up_per_s", "Gamma_1up_per_s", "status"],
    ));
    let mut failed = Vec::new();
    let mut json_points = Vec::new();
    for (x, b) in pts.grid.iter().zip(&results) {
        let Some(b) = b else { continue };
        for c in Channel::ALL {
            if let Some(ch) = b.channel(c) {
                csv.row(&with_grid(pts.swept, *x, channel_row(ch)));
                if let Some(msg) = &ch.failed {
                    failed.push(format!("{}: {msg}", c.name()));
                }
            }
        }
        let combined = vec![
            "combined".to_string(),
            num(b.tphi),
            num(b.t1),
            num(b.t2),
            String::new(),
            String::new(),
            String::new(),
            if b.any_failed() { "partial" } else { "ok" }.to_string(),
        ];
        csv.row(&with_grid(pts.swept, *x, combined));
        for w in &b.warnings {
            warnings.push(if pts.swept { format!("{} = {}: {w}", pts.parameter, num(*x)) } else { w.clone() });
        }
        json_points.push(json!({ "grid_value": x, "budget": b }));
    }
    add_substages(&mut r, "coherence", results.iter().flatten().map(|b| &b.timings));
    r.warnings = warnings;
    if !failed.is_empty() {
        r.failure = Some(format!("{} channel evaluations failed: {}", failed.len(), failed.join("; ")));
    }
    r.csv.push(("coherence.csv".into(), csv.into_string()));
    r.json.push(("coherence.json".into(), Value::Array(json_points)));
    r.convergence = json!({ "basis": basis_report(&basis, &params), "n_zeta_max": opts.n_zeta_max });
    Ok(r)
}

/// Sums per-point stage timings into `task/stage` entries.
fn add_substages<'a>(r: &mut Report, task: &str, per_point: impl Iterator<Item = &'a Vec<(String, f64)>>) {
    let mut totals: Vec<(String, f64)> = Vec::new();
    for timings in per_point {
        for (name, t) in timings {
            match totals.iter_mut().find(|(n, _)| n == name) {
                Some((_, acc)) => *acc += t,
                None => totals.push((name.clone(), *t)),
            }
        }
    }
    r.stages.extend(totals.into_iter().map(|(n, t)| (format!("{task}/{n}"), t)));
}

#[derive(Serialize)]
struct PurcellPoint {
    grid_value: f64,
    max_g_over_delta: f64,
    exact: CompositeRates<f64>,
    perturbative: CompositeRates<f64>,
}

pub fn purcell(cfg: &RunConfig) -> Result<Report, CliError> {
    let params = cfg.params();
    let basis = cfg.basis()?;
    let pts = points(cfg, &params)?;
    let opts = cfg.budget_options(&basis);
    let mut r = Report::default();
    let mut warnings = Vec::new();
    let results = r.stage("purcell", || {
        over_points(&pts, &params, &mut warnings, |p| {
            let wp = working_point(p, &basis, &opts)?;
            let dressed = wp.dressed?;
            let exact = purcell_exact(&dressed, &wp.thermal)?;
            let omega = p.derive_energies()?.omega_zeta;
            let pert = purcell_perturbative(&wp.dispersive.g, &dressed.bare_energies, omega, &wp.thermal)?;
            Ok((wp.dispersive.max_g_over_delta, exact, pert))
        })
    })?;
    let mut csv = Csv::new(&header(
        pts.swept,
        &[
            "max_g_over_Delta",
            "Gamma1_exact_per_s",
            "Gamma1_perturbative_per_s",
            "relative_difference",
            "Gamma_1to0_exact_per_s",
            "Gamma_1to0_perturbative_per_s",
            "Gamma_up_exact_per_s",
            "Gamma_up_perturbative_per_s",
        ],
    ));
    let mut json_points = Vec::new();
    for (x, res) in pts.grid.iter().zip(results) {
        let Some((mg, exact, pert)) = res else { continue };
        let rel = (exact.gamma1 - pert.gamma1).abs() / exact.gamma1.abs().max(pert.gamma1.abs());
        csv.row(&with_grid(
            pts.swept,
            *x,
            vec![
                num(mg),
                num(exact.gamma1),
                num(pert.gamma1),
                num(if rel.is_nan() { 0.0 } else { rel }),
                num(exact.gamma_1to0),
                num(pert.gamma_1to0),
                num(exact.gamma_0up + exact.gamma_1up),
                num(pert.gamma_0up + pert.gamma_1up),
            ],
        ));
        warnings.extend(exact.warnings.iter().cloned());
        json_points.push(PurcellPoint { grid_value: *x, max_g_over_delta: mg, exact, perturbative: pert });
    }
    r.warnings = warnings;
    r.csv.push(("purcell.csv".into(), csv.into_string()));
    r.json.push(("purcell.json".into(), serde_json::to_value(&json_points).expect("purcell serializes")));
    r.convergence = json!({ "basis": basis_report(&basis, &params), "n_zeta_max": opts.n_zeta_max });
    Ok(r)
}
