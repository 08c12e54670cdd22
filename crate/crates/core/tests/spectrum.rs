use proptest::prelude::*;
use zeropi_core::dressed::dressed_spectrum;
use zeropi_core::spectrum::{energy_derivatives, hellmann_feynman, solve_2d, sweep, SweepOptions, TRACKING_THRESHOLD};
use zeropi_core::scalar::cplx;
use zeropi_core::units::ghz_to_rad_per_s;
use zeropi_core::{Basis, CMatrix, EigenOptions, Params, SweepParameter};

fn small_basis(p: &Params) -> Basis {
    let mut b = Basis::for_params(p);
    b.n_theta_max = 6;
    b.phi_points = 121;
    b.fd_order = 6;
    b
}

#[test]
fn finite_differences_match_hellmann_feynman() {
    let mut p = Params::ps3();
    p.flux = 0.2;
    let b = small_basis(&p);
    let opts = EigenOptions::with_tol(1e-11);
    let sol = solve_2d(&p, &b, 3, &opts).unwrap();
    for parameter in [SweepParameter::Flux, SweepParameter::EJ, SweepParameter::EL] {
        let hf = hellmann_feynman(&p, &b, &sol, parameter).unwrap();
        let slope = ghz_to_rad_per_s(hf[1] - hf[0]);
        let d = energy_derivatives(&p, &b, parameter, None, &opts).unwrap();
        let tol = 3.0 * d.err1 + 1e-6 * slope.abs();
        assert!((d.d1 - slope).abs() <= tol, "{parameter}: finite difference {} vs HF {slope} (tol {tol})", d.d1);
    }
}

#[test]
fn charge_sweet_spot_slope_is_zero() {
    let p = Params::ps3();
    let b = small_basis(&p);
    let d = energy_derivatives(&p, &b, SweepParameter::NgTheta, None, &EigenOptions::with_tol(1e-11)).unwrap();
    assert!(d.d1.abs() <= 3.0 * d.err1 + 1e-6, "d omega/d ng = {} +- {}", d.d1, d.err1);
}

#[test]
fn flux_sweet_spot_slope_is_zero() {
    let p = Params::ps3();
    let b = small_basis(&p);
    let d = energy_derivatives(&p, &b, SweepParameter::Flux, None, &EigenOptions::with_tol(1e-11)).unwrap();
    assert!(d.d1.abs() <= 3.0 * d.err1 + 1e-6, "d omega/d flux = {} +- {}", d.d1, d.err1);
}

#[test]
fn smooth_sweep_tracks_levels() {
    let p = Params::ps3();
    let b = small_basis(&p);
    let grid: Vec<f64> = (0..6).map(|i| 0.02 * i as f64).collect();
    let opts = SweepOptions { k: 4, ..SweepOptions::default() };
    let c = sweep(&p, &b, SweepParameter::Flux, &grid, &opts).unwrap();
    for (i, row) in c.overlaps.iter().enumerate() {
        for (l, o) in row.iter().enumerate() {
            if *o < TRACKING_THRESHOLD {
                assert!(c.anticrossings.contains(&(i, l)), "unflagged drop at point {i}, level {l}");
            }
        }
    }
    for row in &c.overlaps {
        assert!(row[0] > TRACKING_THRESHOLD && row[1] > TRACKING_THRESHOLD, "{row:?}");
    }
    for (e, w) in c.energies.iter().zip(&c.omega_ge) {
        assert!((ghz_to_rad_per_s(e[1] - e[0]) - w).abs() <= 1e-9 * w.abs());
    }
}

#[test]
fn sweep_is_deterministic_across_pools() {
    let p = Params::ps3();
    let b = small_basis(&p);
    let grid = [0.0, 0.05, 0.1];
    let opts = SweepOptions { k: 3, ..SweepOptions::default() };
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| sweep(&p, &b, SweepParameter::Flux, &grid, &opts).unwrap().energies)
    };
    let a = run(1);
    let c = run(3);
    for (x, y) in a.iter().flatten().zip(c.iter().flatten()) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Weakly coupled models label every (l, n) exactly once.
    #[test]
    fn weak_coupling_labels_are_a_bijection(
        gaps in proptest::collection::vec(0.3f64..1.0, 3),
        omega in 0.05f64..0.2,
        nz in 1usize..6,
        seeds in proptest::collection::vec(-1.0f64..1.0, 16),
    ) {
        let levels = 4;
        let mut energies = vec![0.0];
        for g in &gaps {
            energies.push(energies.last().unwrap() + g);
        }
        // keep |g| well below every detuning
        let scale = 1e-4;
        let mut g = CMatrix::zeros(levels);
        for i in 0..levels {
            for j in 0..i {
                let v = cplx(scale * seeds[i * levels + j], scale * seeds[j * levels + i]);
                g.set(i, j, v);
                g.set(j, i, v.conj());
            }
        }
        let detuned = energies.iter().enumerate().all(|(i, a)| {
            energies.iter().enumerate().all(|(j, b)| {
                i == j || (0..=nz as i64).all(|k| ((a - b) - k as f64 * omega).abs() > 1e-2 && ((a - b) + k as f64 * omega).abs() > 1e-2)
            })
        });
        prop_assume!(detuned);
        let d = dressed_spectrum(&energies, &g, omega, nz, 0.5).unwrap();
        prop_assert_eq!(d.labels.hybridized().count(), 0);
        prop_assert_eq!(d.labels.len(), levels * (nz + 1));
        for l in 0..levels {
            for n in 0..=nz {
                prop_assert!(d.labels.find(l, n).is_some(), "missing ({}, {})", l, n);
            }
        }
    }
}
