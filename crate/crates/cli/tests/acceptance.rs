//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary so the report is always printed. The process
//! fails when a criterion outside `KNOWN_FAILURES` fails.

use std::path::Path;
use std::time::Instant;

use zeropi_cli::config::RunConfig;
use zeropi_cli::Task;
use zeropi_core::decoherence::{
    coherence_budget, purcell_exact, purcell_perturbative, shot_noise_rate, Channel, NoiseSpectrum, ThermalEnv,
};
use zeropi_core::dressed::{dressed_spectrum_below, fock_edge};
use zeropi_core::eigen::{dense_oracle, lowest_eigenpairs_with};
use zeropi_core::hamiltonian::{build_h_2d, build_h_3d, build_noise_operator, embed_product, NoiseChannel};
use zeropi_core::spectrum::{energy_derivatives, overlap_sq, solve_2d};
use zeropi_core::units::{ghz_to_rad_per_s, HBAR_SI, KB_SI};
use zeropi_core::{dispersive_analysis, Basis, EigenOptions, Params, SweepParameter};

/// Criteria that fail for reasons recorded in the decisions ledger.
const KNOWN_FAILURES: &[&str] = &["4", "6b", "6d", "8f"];

const MHZ: f64 = 1e-3;
const KHZ: f64 = 1e-6;

struct Outcome {
    id: &'static str,
    title: String,
    pass: bool,
    details: Vec<String>,
    seconds: f64,
}

struct Suite {
    outcomes: Vec<Outcome>,
}

impl Suite {
    fn check(&mut self, id: &'static str, title: impl Into<String>, f: impl FnOnce(&mut Vec<String>) -> Result<bool, String>) {
        let t = Instant::now();
        let mut details = Vec::new();
        let pass = match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| f(&mut details))) {
            Ok(Ok(p)) => p,
            Ok(Err(e)) => {
                details.push(format!("error: {e}"));
                false
            }
            Err(_) => {
                details.push("panicked".into());
                false
            }
        };
        let o = Outcome { id, title: title.into(), pass, details, seconds: t.elapsed().as_secs_f64() };
        println!("{} {} {} ({:.1} s)", if o.pass { "PASS" } else { "FAIL" }, o.id, o.title, o.seconds);
        for d in &o.details {
            println!("    {d}");
        }
        self.outcomes.push(o);
    }
}

fn within_rel(x: f64, want: f64, rel: f64) -> bool {
    (x / want - 1.0).abs() <= rel
}

fn within_factor(x: f64, want: f64, factor: f64) -> bool {
    x >= want / factor && x <= want * factor
}

fn bundled(name: &str) -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.config"));
    RunConfig::load(&path).expect("bundled config")
}

fn basis_with(p: &Params, n_theta: usize) -> Basis {
    let mut b = Basis::for_params(p);
    b.n_theta_max = n_theta;
    b
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Shot-noise and Purcell data at one flux point of PS2.
struct FluxPoint {
    flux: f64,
    tphi_sn: f64,
    max_g_over_delta: f64,
    exact: f64,
    perturbative: f64,
}

fn ps2_flux_point(flux: f64, n_theta: usize, cfg: &RunConfig) -> Result<FluxPoint, String> {
    let mut p = cfg.params();
    p.flux = flux;
    let b = basis_with(&p, n_theta);
    let levels = cfg.solver.levels;
    let sol = ok(solve_2d(&p, &b, levels, &cfg.eigen()))?;
    let d = ok(dispersive_analysis(&p, &b, &sol, levels))?;
    let omega = ok(p.derive_energies())?.omega_zeta;
    let env = ok(ThermalEnv::new(omega, p.temperature, p.kappa_zeta))?;
    let sn = ok(shot_noise_rate(d.chi01, p.kappa_zeta, env.n_th))?;
    let nz = env.n_max() + cfg.solver.fock_margin;
    let bare = &sol.eigenvalues[..levels];
    let dressed = ok(dressed_spectrum_below(bare, &d.g, omega, nz, cfg.solver.hybridization_threshold, fock_edge(bare, omega, nz)))?;
    let exact = ok(purcell_exact(&dressed, &env))?;
    let pert = ok(purcell_perturbative(&d.g, bare, omega, &env))?;
    Ok(FluxPoint {
        flux,
        tphi_sn: 1.0 / sn.rate,
        max_g_over_delta: d.max_g_over_delta,
        exact: exact.gamma1,
        perturbative: pert.gamma1,
    })
}

fn main() {
    let started = Instant::now();
    let mut s = Suite { outcomes: Vec::new() };
    let sets = [("PS1", Params::ps1()), ("PS2", Params::ps2()), ("PS3", Params::ps3())];

    s.check("1", "zeta-mode frequencies 36/113/395 MHz within 1%", |out| {
        let want = [36.0, 113.0, 395.0];
        let t = Instant::now();
        let omegas: Vec<f64> = sets.iter().map(|(_, p)| p.derive_energies().map(|d| d.omega_zeta)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        let elapsed = t.elapsed().as_secs_f64();
        let mut pass = elapsed < 1e-3;
        for ((name, _), (w, target)) in sets.iter().zip(omegas.iter().zip(want)) {
            let good = within_rel(w / MHZ, target, 0.01);
            pass &= good;
            out.push(format!("{name}: {:.2} MHz (target {target} MHz)", w / MHZ));
        }
        out.push(format!("evaluation time {:.1} us", elapsed * 1e6));
        Ok(pass)
    });

    s.check("2", "thermal occupations at 15 mK 8.25/2.29/0.39 within 3%", |out| {
        let want = [8.25, 2.29, 0.39];
        let mut pass = true;
        for ((name, p), target) in sets.iter().zip(want) {
            let env = ok(ThermalEnv::new(ok(p.derive_energies())?.omega_zeta, 0.015, p.kappa_zeta))?;
            pass &= within_rel(env.n_th, target, 0.03);
            out.push(format!("{name}: n_th = {:.4} (target {target})", env.n_th));
        }
        Ok(pass)
    });

    s.check("3", "PS1 clean spectrum: E2-E0 = 792 MHz (5%), E1-E0 = 24 kHz (x2), cutoff doubling stable", |out| {
        let cfg = bundled("ps1");
        let mut p = cfg.params();
        p.dc = 0.0;
        p.del = 0.0;
        let b = ok(cfg.basis())?;
        let opts = cfg.eigen();
        let gaps = |b: &Basis| -> Result<(f64, f64), String> {
            let sol = ok(solve_2d(&p, b, 3, &opts))?;
            let e = &sol.eigenvalues;
            Ok((e[1] - e[0], e[2] - e[0]))
        };
        let (g10, g20) = gaps(&b)?;
        let mut pass = within_rel(g20 / MHZ, 792.0, 0.05) && within_factor(g10 / KHZ, 24.0, 2.0);
        out.push(format!(
            "n_theta {} x {} phi points: E1-E0 = {:.3} kHz, E2-E0 = {:.3} MHz",
            b.n_theta_max, b.phi_points, g10 / KHZ, g20 / MHZ
        ));
        let doubled = Basis { n_theta_max: 2 * b.n_theta_max, ..b };
        for (what, nb) in [("n_theta doubled", doubled), ("phi spacing halved", b.refined_phi())] {
            let (h10, h20) = gaps(&nb)?;
            let shift = (h10 - g10).abs().max((h20 - g20).abs());
            let stable = shift < 1e-6;
            pass &= stable;
            out.push(format!(
                "{what}: E1-E0 = {:.3} kHz, E2-E0 = {:.3} MHz, largest shift {:.2e} GHz (limit 1e-6)",
                h10 / KHZ,
                h20 / MHZ,
                shift
            ));
        }
        Ok(pass)
    });

    // One 21-point PS2 flux grid serves criteria 4 and 7.
    let ps2 = bundled("ps2");
    let grid: Vec<f64> = (0..21).map(|i| 0.025 * i as f64).collect();
    let t_grid = Instant::now();
    let points: Vec<Result<FluxPoint, String>> = grid.iter().map(|&f| ps2_flux_point(f, 10, &ps2)).collect();
    let grid_seconds = t_grid.elapsed().as_secs_f64();

    s.check("4", "PS2 shot-noise plateau T_phi^SN = 43 us within 10% away from half flux", |out| {
        let mut pass = true;
        let mut n = 0;
        for pt in points.iter().flatten().filter(|pt| pt.flux <= 0.25 + 1e-12) {
            let good = within_rel(pt.tphi_sn * 1e6, 43.0, 0.10);
            pass &= good;
            n += 1;
            out.push(format!("flux {:.3}: T_phi^SN = {:.2} us{}", pt.flux, pt.tphi_sn * 1e6, if good { "" } else { "  <- outside" }));
        }
        out.push(format!("grid shared with criterion 7 took {grid_seconds:.1} s"));
        Ok(pass && n > 0)
    });

    s.check("5", "PS2 E_L sweep: single T_phi^SN minimum in [0.02, 0.08] GHz, asymptotes within 10% at the ends", |out| {
        let els: Vec<f64> = (0..14).map(|i| 0.005 + 0.015 * i as f64).collect();
        let mut rows = Vec::new();
        for &el in &els {
            let mut p = ps2.params();
            p.el = el;
            let b = basis_with(&p, 10);
            let levels = ps2.solver.levels;
            let sol = ok(solve_2d(&p, &b, levels, &ps2.eigen()))?;
            let d = ok(dispersive_analysis(&p, &b, &sol, levels))?;
            let env = ok(ThermalEnv::new(ok(p.derive_energies())?.omega_zeta, p.temperature, p.kappa_zeta))?;
            let sn = ok(shot_noise_rate(d.chi01, p.kappa_zeta, env.n_th))?;
            rows.push((el, 1.0 / sn.rate, 1.0 / sn.small_chi, 1.0 / sn.large_chi));
        }
        for (el, t, small, large) in &rows {
            out.push(format!("E_L {el:.3}: T_phi^SN {:.3e} s (small chi {:.3e}, large chi {:.3e})", t, small, large));
        }
        let t: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let minima: Vec<usize> = (1..t.len() - 1).filter(|&i| t[i] < t[i - 1] && t[i] < t[i + 1]).collect();
        let mut pass = minima.len() == 1;
        if let [i] = minima[..] {
            // parabola through the three points around the grid minimum
            let (x0, x1, x2) = (els[i - 1], els[i], els[i + 1]);
            let (y0, y1, y2) = (t[i - 1], t[i], t[i + 1]);
            let num = (x1 - x0).powi(2) * (y1 - y2) - (x1 - x2).powi(2) * (y1 - y0);
            let den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
            let x_min = x1 - 0.5 * num / den;
            pass &= (0.02..=0.08).contains(&x_min);
            out.push(format!("minimum at E_L = {x_min:.4} GHz (grid point {x1:.3})"));
        } else {
            out.push(format!("{} interior minima", minima.len()));
        }
        let first = rows.first().unwrap();
        let last = rows.last().unwrap();
        let lo = first.1 / first.2 - 1.0;
        let hi = last.1 / last.3 - 1.0;
        pass &= lo.abs() <= 0.1 && hi.abs() <= 0.1;
        out.push(format!("low end vs small-chi asymptote {:+.2}%, high end vs large-chi asymptote {:+.2}%", 100.0 * lo, 100.0 * hi));
        Ok(pass)
    });

    let budget = |name: &str, n_theta: usize| -> Result<(f64, f64, Vec<String>), String> {
        let mut cfg = bundled(name);
        cfg.basis.n_theta_max = Some(n_theta);
        let p = cfg.params();
        let b = ok(cfg.basis())?;
        let r = ok(coherence_budget(&p, &b, &cfg.budget_options(&b)))?;
        let mut lines = vec![format!("{name} basis n_theta {} x {} phi points, n_zeta_max {}", b.n_theta_max, b.phi_points, b.n_zeta_max)];
        for c in Channel::ALL {
            if let Some(ch) = r.channel(c) {
                let t = if c.is_dephasing() { ch.tphi } else { ch.t1 };
                lines.push(format!("  {c}: {:.3e} s{}", t.unwrap_or(f64::NAN), if ch.included { "" } else { " (not in total)" }));
            }
        }
        if r.any_failed() {
            return Err(format!("{name}: failed channels"));
        }
        Ok((r.tphi, r.t1, lines))
    };
    let budgets = [("PS2", 10, 50e-6, 0.5, 3.0), ("PS3", 10, 200e-6, 40e-3, 3.0), ("PS1", 10, 20e-3, 10.0, 5.0)];
    let ids = [("6a", "6b"), ("6c", "6d"), ("6e", "6f")];
    for ((name, nt, tphi_want, t1_want, factor), (id_phi, id_t1)) in budgets.into_iter().zip(ids) {
        let t = Instant::now();
        let result = budget(&name.to_lowercase(), nt);
        let secs = t.elapsed().as_secs_f64();
        let title_phi = format!("{name} combined T_phi = {} us within x{factor}", tphi_want * 1e6);
        let title_t1 = format!("{name} combined T1 = {} ms within x{factor}", t1_want * 1e3);
        s.check(id_phi, title_phi, |out| {
            let (tphi, _, lines) = result.as_ref().map_err(|e| e.clone())?;
            out.extend(lines.iter().cloned());
            out.push(format!("T_phi = {:.3e} s; budget took {secs:.1} s", tphi));
            Ok(within_factor(*tphi, tphi_want, factor))
        });
        s.check(id_t1, title_t1, |out| {
            let (_, t1, _) = result.as_ref().map_err(|e| e.clone())?;
            out.push(format!("T1 = {:.3e} s", t1));
            Ok(within_factor(*t1, t1_want, factor))
        });
    }

    s.check("7", "PS2 Purcell exact vs perturbative within 20% where max|g/Delta| < 0.1, 21-point flux grid", |out| {
        let mut pass = true;
        let mut compared = 0;
        for pt in &points {
            let pt = pt.as_ref().map_err(|e| e.clone())?;
            let rel = pt.exact / pt.perturbative - 1.0;
            let applies = pt.max_g_over_delta < 0.1;
            if applies {
                compared += 1;
                pass &= rel.abs() <= 0.2;
            }
            out.push(format!(
                "flux {:.3}: max|g/Delta| {:.3}, Gamma1 exact {:.3e}, perturbative {:.3e}, {:+.1}%{}",
                pt.flux,
                pt.max_g_over_delta,
                pt.exact,
                pt.perturbative,
                100.0 * rel,
                if applies { "" } else { " (not dispersive, skipped)" }
            ));
        }
        out.push(format!("{compared} of {} points compared", points.len()));
        Ok(pass && compared > 0)
    });

    s.check("8a", "Hermiticity of every assembled operator (1e-12 relative)", |out| {
        let mut worst = 0.0f64;
        for (name, p) in &sets {
            let mut b = basis_with(p, 3);
            b.phi_points = 101;
            b.n_zeta_max = 4;
            let ops = [
                ok(build_h_2d(p, &b))?,
                ok(build_h_3d(p, &b))?,
                ok(build_noise_operator(p, &b, NoiseChannel::Flux))?,
                ok(build_noise_operator(p, &b, NoiseChannel::CriticalCurrent))?,
            ];
            let w = ops.iter().map(|o| o.hermiticity_defect()).fold(0.0, f64::max);
            out.push(format!("{name}: worst defect {w:.1e}"));
            worst = worst.max(w);
        }
        let p = Params::ps2();
        let full = ok(build_h_2d(&p, &basis_with(&p, 10)))?;
        out.push(format!("PS2 production 2D Hamiltonian (dim {}): defect {:.1e}", full.dim(), full.hermiticity_defect()));
        worst = worst.max(full.hermiticity_defect());
        Ok(worst <= 1e-12)
    });

    s.check("8b", "sparse vs dense eigenvalues within 1e-9 relative (dim <= 2000)", |out| {
        let mut worst = 0.0f64;
        for (name, p) in &sets {
            for (nt, pts) in [(1, 150), (3, 201), (4, 221)] {
                let mut b = basis_with(p, nt);
                b.phi_points = pts;
                let h = ok(build_h_2d(p, &b))?;
                let dense = ok(dense_oracle(&h))?;
                let sparse = ok(lowest_eigenpairs_with(&h, 8, &EigenOptions::default().sparse_only()))?;
                let dev = sparse
                    .eigenvalues
                    .iter()
                    .zip(&dense.eigenvalues)
                    .map(|(a, b)| (a - b).abs() / b.abs().max(1e-12))
                    .fold(0.0, f64::max);
                out.push(format!("{name} dim {}: {dev:.1e}", h.dim()));
                worst = worst.max(dev);
            }
        }
        Ok(worst <= 1e-9)
    });

    s.check("8c", "tensor-sum spectrum identity without capacitive/inductive disorder", |out| {
        let mut worst = 0.0f64;
        for (name, p) in &sets {
            let p = p.without_zeta_coupling();
            let mut b = basis_with(&p, 2);
            b.phi_points = 41;
            b.n_zeta_max = 4;
            let omega = ok(p.derive_energies())?.omega_zeta;
            let e2 = ok(dense_oracle(&ok(build_h_2d(&p, &b))?))?.eigenvalues;
            let e3 = ok(dense_oracle(&ok(build_h_3d(&p, &b))?))?.eigenvalues;
            let mut sums: Vec<f64> = e2.iter().flat_map(|e| (0..=b.n_zeta_max).map(move |n| e + omega * n as f64)).collect();
            sums.sort_by(f64::total_cmp);
            let offset = e3[0] - sums[0];
            let dev = sums.iter().zip(&e3).map(|(s, e)| (s + offset - e).abs() / (1.0 + e.abs())).fold(0.0, f64::max);
            out.push(format!("{name}: {} states, worst deviation {dev:.1e}", e3.len()));
            worst = worst.max(dev);
        }
        Ok(worst <= 1e-9)
    });

    s.check("8d", "chi01 vs dressed-energy second difference within 5% (dispersive regime)", |out| {
        let mut pass = true;
        let mut compared = 0;
        for (name, p) in &sets[1..] {
            let b = basis_with(p, 10);
            let levels = 15;
            let sol = ok(solve_2d(p, &b, levels, &EigenOptions::default()))?;
            let d = ok(dispersive_analysis(p, &b, &sol, levels))?;
            let omega = ok(p.derive_energies())?.omega_zeta;
            let bare = &sol.eigenvalues[..levels];
            let nz = 6;
            let dressed = ok(dressed_spectrum_below(bare, &d.g, omega, nz, 0.5, fock_edge(bare, omega, nz)))?;
            let e = |l, n| dressed.energy(l, n).ok_or(format!("({l}, {n}) not labeled"));
            let second = (e(1, 1)? - e(1, 0)?) - (e(0, 1)? - e(0, 0)?);
            let rel = second / (2.0 * d.chi01) - 1.0;
            let applies = d.max_g_over_delta < 0.1;
            if applies {
                compared += 1;
                pass &= rel.abs() <= 0.05;
            }
            out.push(format!(
                "{name} product basis: second difference {second:.4e} GHz vs 2 chi01 {:.4e} GHz ({:+.2}%), max|g/Delta| {:.3}",
                2.0 * d.chi01,
                100.0 * rel,
                d.max_g_over_delta
            ));
        }
        // grid oracle on a reduced θ–φ–ζ basis
        let p = Params::ps3();
        let mut b = basis_with(&p, 2);
        b.phi_points = 61;
        b.fd_order = 4;
        b.n_zeta_max = 3;
        let sol2d = ok(dense_oracle(&ok(build_h_2d(&p, &b))?))?;
        let d = ok(dispersive_analysis(&p, &b, &sol2d, sol2d.len().min(40)))?;
        let sol3d = ok(dense_oracle(&ok(build_h_3d(&p, &b))?))?;
        let z = b.n_zeta_max + 1;
        let e = |l: usize, n: usize| {
            let bare = embed_product(&sol2d.eigenvectors[l], n, z);
            let (j, _) = sol3d.eigenvectors.iter().take(60).map(|v| overlap_sq(v, &bare)).enumerate().fold((0, -1.0), |a, (j, o)| if o > a.1 { (j, o) } else { a });
            sol3d.eigenvalues[j]
        };
        let second = (e(1, 1) - e(1, 0)) - (e(0, 1) - e(0, 0));
        let rel = second / (2.0 * d.chi01) - 1.0;
        if d.max_g_over_delta < 0.1 {
            compared += 1;
            pass &= rel.abs() <= 0.05;
        }
        out.push(format!("PS3 reduced grid (dim {}): {:+.2}%", sol3d.len(), 100.0 * rel));
        Ok(pass && compared > 0)
    });

    s.check("8e", "flux and charge sweet-spot first derivatives consistent with zero", |out| {
        let mut pass = true;
        let p = Params::ps3();
        let b = basis_with(&p, 10);
        for parameter in [SweepParameter::Flux, SweepParameter::NgTheta] {
            let d = ok(energy_derivatives(&p, &b, parameter, None, &EigenOptions::default()))?;
            let bound = 3.0 * d.err1;
            pass &= d.d1.abs() <= bound;
            out.push(format!("PS3 d omega/d {parameter} = {:.3e} (3 sigma {:.3e})", d.d1, bound));
        }
        Ok(pass)
    });

    s.check("8f", "shot-noise sandwich min(asymptotes) <= full <= 1.05 min for chi/kappa outside [1e-2, 1e2]", |out| {
        let kappa = 1e4;
        let mut below = 0.0f64;
        let mut above = 0.0f64;
        let mut true_bound = 0.0f64;
        for n_th in [0.05, 0.39, 2.29, 8.25] {
            for e in -40..=40 {
                let ratio = 10f64.powf(e as f64 / 10.0);
                let chi = ratio * kappa / ghz_to_rad_per_s(1.0);
                let sn = ok(shot_noise_rate(chi, kappa, n_th))?;
                let floor = sn.small_chi.min(sn.large_chi);
                true_bound = true_bound.max(sn.rate / floor - 1.0);
                if (1e-2..=1e2).contains(&ratio) {
                    continue;
                }
                below = below.max(1.0 - sn.rate / floor);
                above = above.max(sn.rate / floor - 1.05);
            }
        }
        out.push(format!("largest shortfall below min(asymptotes): {:.3}%", 100.0 * below));
        out.push(format!("largest excess over 1.05 min: {:.3}%", 100.0 * above.max(0.0)));
        out.push(format!("full <= min(asymptotes) everywhere: {}", true_bound <= 1e-9));
        Ok(below <= 0.0 && above <= 0.0)
    });

    s.check("8g", "Ohmic detailed balance S(-w)/S(w) = exp(-hbar w / kT)", |out| {
        let mut worst = 0.0f64;
        for temp in [0.005, 0.015, 0.1] {
            let sp = NoiseSpectrum::OhmicFluxLine { mutual: 1e3, resistance: 50.0, temperature: temp };
            for f in [1e5, 1e7, 1e8, 1e9, 1e10] {
                let w = 2.0 * std::f64::consts::PI * f;
                let want = (-HBAR_SI * w / (KB_SI * temp)).exp();
                worst = worst.max((sp.eval(-w) / sp.eval(w) / want - 1.0).abs());
            }
        }
        out.push(format!("worst relative deviation {worst:.1e}"));
        Ok(worst <= 1e-10)
    });

    s.check("8h", "byte-identical outputs across worker counts", |out| {
        let dir = ok(tempfile::tempdir())?;
        let mut cfg = bundled("ps3");
        cfg.basis.n_theta_max = Some(4);
        cfg.solver.levels = 8;
        cfg.sweep = Some(zeropi_cli::config::SweepSection { parameter: "flux".into(), start: 0.0, stop: 0.2, points: 5 });
        let mut bodies = Vec::new();
        for w in [1, 4] {
            let o = dir.path().join(format!("w{w}"));
            let r = ok(zeropi_cli::run(Task::Dispersive, &cfg, Some(&o), Some(w)))?;
            if r.exit_code != 0 {
                return Err(format!("exit code {}", r.exit_code));
            }
            let mut files = Vec::new();
            for f in ["dispersive.csv", "shot_noise.csv"] {
                files.push(ok(std::fs::read(o.join(f)))?);
            }
            bodies.push(files);
        }
        out.push(format!("{} CSV files compared", bodies[0].len()));
        Ok(bodies[0] == bodies[1])
    });

    let failed: Vec<&str> = s.outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    let unexpected: Vec<&str> = failed.iter().copied().filter(|id| !KNOWN_FAILURES.contains(id)).collect();
    let recovered: Vec<&str> = KNOWN_FAILURES.iter().copied().filter(|id| !failed.contains(id)).collect();
    println!();
    println!(
        "{} of {} criteria passed in {:.0} s; failing: [{}]",
        s.outcomes.len() - failed.len(),
        s.outcomes.len(),
        started.elapsed().as_secs_f64(),
        failed.join(", ")
    );
    if !recovered.is_empty() {
        println!("listed as known failures but now passing: [{}]", recovered.join(", "));
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: [{}]", unexpected.join(", "));
        std::process::exit(1);
    }
}
