use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zeropi_core::basis::second_derivative_weights;
use zeropi_core::eigen::{dense_oracle, lowest_eigenpairs, lowest_eigenpairs_with, EigenOptions};
use zeropi_core::operator::{BasisTag, HermitianOperator, TripletBuilder};
use zeropi_core::scalar::cplx;

fn random_sparse(n: usize, per_row: usize, seed: u64) -> HermitianOperator<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = TripletBuilder::new(n);
    for i in 0..n {
        b.push_real(i, i, rng.gen_range(-5.0..5.0));
        for _ in 0..per_row {
            let j = rng.gen_range(0..n);
            if j != i {
                b.push_pair(i, j, cplx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            }
        }
    }
    b.build(BasisTag::ThetaPhi).unwrap()
}

fn oscillator(ec: f64, el: f64, points: usize, xmax: f64) -> HermitianOperator<f64> {
    let h = 2.0 * xmax / (points - 1) as f64;
    let w = second_derivative_weights(10);
    let mut b = TripletBuilder::new(points);
    for j in 0..points {
        let x = -xmax + h * j as f64;
        b.push_real(j, j, el * x * x - 2.0 * ec * w[0] / (h * h));
        for (k, wk) in w.iter().enumerate().skip(1) {
            if j + k < points {
                b.push_pair(j, j + k, cplx(-2.0 * ec * wk / (h * h), 0.0));
            }
        }
    }
    b.build(BasisTag::ZetaOnly).unwrap()
}

#[test]
fn identity_gives_unit_eigenvalues() {
    let h = HermitianOperator::<f64>::identity(50, BasisTag::ZetaOnly);
    let s = lowest_eigenpairs_with(&h, 3, &EigenOptions::default().sparse_only()).unwrap();
    for v in &s.eigenvalues {
        assert!((v - 1.0).abs() < 1e-12);
    }
    assert!(s.max_overlap() < 1e-8);
}

#[test]
fn harmonic_oscillator_gaps() {
    let (ec, el) = (0.5, 2.0);
    let h = oscillator(ec, el, 1201, 12.0);
    let s = lowest_eigenpairs(&h, 6, 1e-12).unwrap();
    let omega = (8.0 * ec * el).sqrt();
    assert!((s.eigenvalues[0] - omega / 2.0).abs() < 1e-7, "{}", s.eigenvalues[0]);
    for w in s.eigenvalues.windows(2) {
        assert!((w[1] - w[0] - omega).abs() < 1e-6, "gap {}", w[1] - w[0]);
    }
}

#[test]
fn random_sparse_matches_dense() {
    let h = random_sparse(500, 4, 7);
    let dense = dense_oracle(&h).unwrap();
    let s = lowest_eigenpairs_with(&h, 10, &EigenOptions::with_tol(1e-11).sparse_only()).unwrap();
    let scale = h.norm_estimate();
    for (a, b) in s.eigenvalues.iter().zip(&dense.eigenvalues) {
        assert!((a - b).abs() <= 1e-9 * b.abs().max(scale), "{a} vs {b}");
    }
    for (r, l) in s.residuals.iter().zip(&s.eigenvalues) {
        assert!(*r <= 1e-11 * scale, "residual {r} at {l}");
    }
    assert!(s.max_overlap() < 1e-8);
}

#[test]
fn exact_degeneracy_beyond_block_size() {
    // three-fold degenerate ground level
    let mut diag: Vec<f64> = (0..400).map(|i| 1.0 + i as f64 * 0.01).collect();
    diag[0] = 0.0;
    diag[1] = 0.0;
    diag[2] = 0.0;
    let d = HermitianOperator::diagonal(&diag, BasisTag::ZetaOnly);
    let h = d.add_scaled(1.0, &HermitianOperator::diagonal(&vec![0.0; 400], BasisTag::ZetaOnly)).unwrap();
    let s = lowest_eigenpairs_with(&h, 4, &EigenOptions::default().sparse_only()).unwrap();
    assert!(s.eigenvalues[..3].iter().all(|v| v.abs() < 1e-10), "{:?}", s.eigenvalues);
    assert!((s.eigenvalues[3] - 1.03).abs() < 1e-10);
}

#[test]
fn solves_are_bit_identical() {
    let h = random_sparse(400, 3, 11);
    let opts = EigenOptions::default().sparse_only();
    let a = lowest_eigenpairs_with(&h, 5, &opts).unwrap();
    let b = lowest_eigenpairs_with(&h, 5, &opts).unwrap();
    assert_eq!(a.eigenvalues, b.eigenvalues);
}

#[test]
fn weyl_bound_under_diagonal_perturbation() {
    let h = random_sparse(120, 3, 3);
    let eps = 1e-3;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pert: Vec<f64> = (0..120).map(|_| rng.gen_range(-eps..eps)).collect();
    let hp = h.add_scaled(1.0, &HermitianOperator::diagonal(&pert, BasisTag::ThetaPhi)).unwrap();
    let a = dense_oracle(&h).unwrap();
    let b = dense_oracle(&hp).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert!((x - y).abs() <= eps + 1e-12);
    }
}

#[test]
fn single_precision_solve() {
    let mut b = TripletBuilder::<f32>::new(400);
    for i in 0..400 {
        b.push_real(i, i, 2.0);
        if i + 1 < 400 {
            b.push_pair(i, i + 1, cplx(-1.0, 0.0));
        }
    }
    let h = b.build(BasisTag::ZetaOnly).unwrap();
    let s = lowest_eigenpairs_with(&h, 3, &EigenOptions::with_tol(1e-5).sparse_only()).unwrap();
    for (j, v) in s.eigenvalues.iter().enumerate() {
        let exact = 2.0 - 2.0 * (std::f64::consts::PI * (j + 1) as f64 / 401.0).cos();
        assert!((*v as f64 - exact).abs() < 1e-4, "{v} vs {exact}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sparse_path_agrees_with_dense(n in 40usize..260, per_row in 1usize..5, seed in any::<u64>(), k in 1usize..8) {
        let h = random_sparse(n, per_row, seed);
        let dense = dense_oracle(&h).unwrap();
        let s = lowest_eigenpairs_with(&h, k, &EigenOptions::with_tol(1e-11).sparse_only()).unwrap();
        let scale = h.norm_estimate();
        for (a, b) in s.eigenvalues.iter().zip(&dense.eigenvalues) {
            prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(scale));
        }
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(s.max_overlap() < 1e-8);
    }
}
