mod common;

use std::f64::consts::PI;

use common::nearest;
use proptest::prelude::*;
use pt_ssh_lab::analysis::classify_modes;
use pt_ssh_lab::eigen::eigendecompose;
use pt_ssh_lab::lattice::{build_real_space, ModelParams, SocPt, Sublattice};
use pt_ssh_lab::topology::{expects_pt_symmetry, verify_symmetries};

fn spinless() -> impl Strategy<Value = ModelParams> {
    (0usize..3, 4usize..24, 0.1f64..0.9, -PI..PI, 0.0f64..3.0, any::<bool>()).prop_flat_map(|(kind, n_cells, delta, theta, gamma, b)| {
        (1usize..=n_cells / 2).prop_map(move |n| match kind {
            0 => ModelParams::ssh_a(n_cells, delta, theta),
            1 => ModelParams::ssh_b(n_cells, delta, theta, gamma),
            _ => ModelParams::ssh_c(n_cells, delta, theta, gamma, n, if b { Sublattice::B } else { Sublattice::A }),
        })
    })
}

fn spinful() -> impl Strategy<Value = ModelParams> {
    (2usize..10, 0.1f64..0.9, -PI..PI, 0.0f64..1.5, 0.0f64..2.0, 0usize..4).prop_map(|(n_cells, delta, theta, kappa, gamma, pt)| {
        let pt = [SocPt::None, SocPt::A, SocPt::B, SocPt::C][pt];
        ModelParams::soc(n_cells, delta, theta, kappa, if pt == SocPt::None { 0.0 } else { gamma }, pt)
    })
}

fn any_model() -> impl Strategy<Value = ModelParams> {
    prop_oneof![spinless(), spinful()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetry_identities_hold_entrywise(p in any_model()) {
        let h = build_real_space(&p).unwrap();
        let r = verify_symmetries(&h, &p).unwrap();
        prop_assert!(r.pseudo_anti_hermitian_violation <= 1e-12);
        if expects_pt_symmetry(&p) {
            prop_assert!(r.pt_violation <= 1e-12, "{:?}", r);
        }
        if p.gamma == 0.0 {
            prop_assert!(r.chiral_violation <= 1e-12);
        }
    }

    #[test]
    fn residuals_are_small(p in any_model()) {
        let h = build_real_space(&p).unwrap();
        let spec = eigendecompose(&h).unwrap();
        prop_assert!(spec.max_residual() <= 1e-9 * h.frobenius_norm());
    }

    #[test]
    fn spectra_are_closed_under_the_symmetries(p in any_model()) {
        let spec = eigendecompose(&build_real_space(&p).unwrap()).unwrap();
        for e in &spec.eigenvalues {
            // pseudo-anti-Hermiticity pairs E with −E*
            prop_assert!(nearest(&spec.eigenvalues, -e.conj()) <= 1e-8);
            if expects_pt_symmetry(&p) {
                prop_assert!(nearest(&spec.eigenvalues, e.conj()) <= 1e-8);
            }
        }
    }

    #[test]
    fn profiles_are_normalized(p in any_model()) {
        prop_assume!(p.reference_gap() > 1e-6);
        let spec = eigendecompose(&build_real_space(&p).unwrap()).unwrap();
        let modes = classify_modes(&spec, &p).unwrap();
        prop_assert_eq!(modes.len(), p.dim());
        for m in &modes {
            prop_assert!((m.profile.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
            prop_assert!(m.ipr > 0.0 && m.ipr <= 1.0 + 1e-12);
            prop_assert!((0.0..=1.0).contains(&m.boundary_weight));
        }
    }

    #[test]
    fn trace_is_preserved(p in any_model()) {
        let h = build_real_space(&p).unwrap();
        let spec = eigendecompose(&h).unwrap();
        let sum: pt_ssh_lab::C64 = spec.eigenvalues.iter().sum();
        prop_assert!((sum - h.trace()).norm() <= 1e-9 * (1.0 + h.frobenius_norm()));
    }
}
