use proptest::prelude::*;
use zeropi_core::eigen::{dense_oracle, lowest_eigenpairs};
use zeropi_core::hamiltonian::{build_h_2d, build_h_3d, build_noise_operator, NoiseChannel};
use zeropi_core::{Basis, Params};

fn small_basis(p: &Params, n_theta: usize, phi_points: usize) -> Basis {
    let mut b = Basis::for_params(p);
    b.n_theta_max = n_theta;
    b.phi_points = phi_points;
    b.fd_order = 4;
    b
}

fn lowest(h: &zeropi_core::Operator, k: usize) -> Vec<f64> {
    lowest_eigenpairs(h, k, 1e-10).unwrap().eigenvalues
}

prop_compose! {
    fn circuit()(
        ec in 0.01f64..0.5, ecj in 1.0f64..30.0, ej in 1.0f64..20.0, el in 0.005f64..0.5,
        dc in -0.1f64..0.1, dcj in -0.1f64..0.1, dej in -0.1f64..0.1, del in -0.1f64..0.1,
        flux in -1.0f64..1.0, ng in -1.0f64..1.0,
    ) -> Params {
        let mut p = Params::with_energies(ec, ecj, ej, el, 0.0);
        p.dc = dc;
        p.dcj = dcj;
        p.dej = dej;
        p.del = del;
        p.flux = flux;
        p.ng_theta = ng;
        p
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn assembled_operators_are_hermitian(p in circuit(), nt in 1usize..4, pts in 5usize..25, nz in 0usize..4) {
        let mut b = small_basis(&p, nt, pts);
        b.n_zeta_max = nz;
        let ops = [
            build_h_2d(&p, &b).unwrap(),
            build_h_3d(&p, &b).unwrap(),
            build_noise_operator(&p, &b, NoiseChannel::Flux).unwrap(),
            build_noise_operator(&p, &b, NoiseChannel::CriticalCurrent).unwrap(),
        ];
        for op in &ops {
            prop_assert!(op.hermiticity_defect() <= 1e-12, "defect {}", op.hermiticity_defect());
        }
    }
}

#[test]
fn flux_period_is_one_flux_quantum() {
    let mut p = Params::ps3();
    let b = small_basis(&p, 6, 121);
    for flux in [0.0, 0.13, 0.37] {
        p.flux = flux;
        let a = lowest(&build_h_2d(&p, &b).unwrap(), 6);
        p.flux = flux + 1.0;
        let c = lowest(&build_h_2d(&p, &b).unwrap(), 6);
        for (x, y) in a.iter().zip(&c) {
            assert!((x - y).abs() < 1e-8, "flux {flux}: {x} vs {y}");
        }
    }
}

#[test]
fn charge_period_is_one_cooper_pair() {
    let mut p = Params::ps3();
    let b = small_basis(&p, 10, 81);
    for ng in [0.0, 0.21] {
        p.ng_theta = ng;
        let a = lowest(&build_h_2d(&p, &b).unwrap(), 6);
        p.ng_theta = ng + 1.0;
        let c = lowest(&build_h_2d(&p, &b).unwrap(), 6);
        for (x, y) in a.iter().zip(&c) {
            assert!((x - y).abs() < 1e-8, "ng {ng}: {x} vs {y}");
        }
    }
}

/// Without capacitive and inductive disorder the 3D spectrum is every sum
/// of a 2D level and a ζ ladder rung.
#[test]
fn tensor_sum_identity_without_zeta_disorder() {
    let p = Params::ps2().without_zeta_coupling();
    let mut b = small_basis(&p, 2, 31);
    b.n_zeta_max = 4;
    let omega = p.derive_energies().unwrap().omega_zeta;
    let e2 = dense_oracle(&build_h_2d(&p, &b).unwrap()).unwrap().eigenvalues;
    let e3 = dense_oracle(&build_h_3d(&p, &b).unwrap()).unwrap().eigenvalues;
    let mut sums: Vec<f64> =
        e2.iter().flat_map(|e| (0..=b.n_zeta_max).map(move |n| e + omega * n as f64)).collect();
    sums.sort_by(f64::total_cmp);
    let offset = e3[0] - sums[0];
    assert!(offset.abs() <= 0.5 * omega + 1e-9, "ground offset {offset}");
    assert_eq!(sums.len(), e3.len());
    for (s, e) in sums.iter().zip(&e3) {
        assert!((s + offset - e).abs() < 1e-9 * (1.0 + e.abs()), "{s} + {offset} vs {e}");
    }
}

#[test]
fn zero_flux_parity_kills_flux_slopes() {
    let mut p = Params::ps3();
    p.dej = 0.0;
    p.dcj = 0.0;
    let b = small_basis(&p, 6, 121);
    let sol = lowest_eigenpairs(&build_h_2d(&p, &b).unwrap(), 4, 1e-10).unwrap();
    let g = build_noise_operator(&p, &b, NoiseChannel::Flux).unwrap();
    for v in &sol.eigenvectors {
        assert!(g.expectation(v).abs() < 1e-7, "<l|G_flux|l> = {}", g.expectation(v));
    }
}

#[test]
fn single_precision_spectrum_tracks_double() {
    use zeropi_core::{solve_2d, BasisSpec, CircuitParams, EigenOptions};
    let p64 = Params::ps3();
    let b64 = small_basis(&p64, 3, 61);
    let p32 = CircuitParams::<f32>::ps3();
    let mut b32 = BasisSpec::<f32>::for_params(&p32);
    b32.n_theta_max = 3;
    b32.phi_points = 61;
    b32.fd_order = 4;
    let opts = EigenOptions::with_tol(1e-5).sparse_only();
    let e32 = solve_2d(&p32, &b32, 4, &opts).unwrap().eigenvalues;
    let e64 = lowest(&build_h_2d(&p64, &b64).unwrap(), 4);
    for (a, b) in e32.iter().zip(&e64) {
        assert!((*a as f64 - b).abs() < 1e-3 * b.abs().max(1.0), "{a} vs {b}");
    }
}
