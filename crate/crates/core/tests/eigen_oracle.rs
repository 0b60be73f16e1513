mod common;

use common::{matching_distance, oracle_eigenvalues};
use pt_ssh_lab::eigen::{compare_eigenvalues, eigendecompose, eigenvalues};
use pt_ssh_lab::lattice::{build_real_space, ModelParams, SocPt, Sublattice};
use pt_ssh_lab::{ComplexMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let data = (0..n * n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::from_row_major(n, data)
}

#[test]
fn random_matrices_match_characteristic_polynomial_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=6 {
        for _ in 0..20 {
            let a = random_matrix(&mut rng, n);
            let ours = eigenvalues(&a).unwrap();
            let reference = oracle_eigenvalues(&a);
            let d = matching_distance(&ours, &reference);
            assert!(d <= 1e-8 * (1.0 + a.frobenius_norm()), "n={n}: distance {d}");
        }
    }
}

#[test]
fn small_model_hamiltonians_match_oracle() {
    let models = [
        ModelParams::ssh_a(3, 0.5, 0.7),
        ModelParams::ssh_b(3, 0.5, 0.2, 0.8),
        ModelParams::ssh_c(3, 0.5, -0.4, 1.3, 1, Sublattice::A),
        ModelParams::ssh_c(3, 0.5, 2.0, 2.5, 1, Sublattice::B),
        ModelParams::soc(1, 0.5, 0.3, 0.5, 0.7, SocPt::None),
        ModelParams::soc(1, 0.5, 0.3, 0.5, 0.7, SocPt::C),
    ];
    for p in models {
        let h = build_real_space(&p).unwrap();
        let ours = eigenvalues(&h).unwrap();
        let d = matching_distance(&ours, &oracle_eigenvalues(&h));
        assert!(d <= 1e-8, "{p:?}: distance {d}");
    }
}

#[test]
fn full_and_fast_paths_agree_and_are_sorted() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2, 5, 17, 40] {
        let a = random_matrix(&mut rng, n);
        let spec = eigendecompose(&a).unwrap();
        let fast = eigenvalues(&a).unwrap();
        assert!(matching_distance(&spec.eigenvalues, &fast) <= 1e-9 * a.frobenius_norm());
        assert!(spec.eigenvalues.windows(2).all(|w| compare_eigenvalues(&w[0], &w[1]).is_le()));
        assert!(spec.max_residual() <= 1e-9 * a.frobenius_norm());
        for i in 0..n {
            let v = spec.vector(i);
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn repeated_eigenvalues_of_a_jordan_free_matrix() {
    let d = [C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(-2.0, 0.5), C64::new(-2.0, 0.5)];
    let spec = eigendecompose(&ComplexMatrix::from_diag(&d)).unwrap();
    let mut expected = d.to_vec();
    expected.sort_by(compare_eigenvalues);
    assert_eq!(spec.eigenvalues, expected);
    assert!(spec.max_residual() <= 1e-14);
}
