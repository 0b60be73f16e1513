mod common;

use common::matching_distance;
use pt_ssh_lab::analysis::{full_spectrum, soc_edge_quartet, spectrum_values};
use pt_ssh_lab::eigen::eigenvalues;
use pt_ssh_lab::lattice::{build_bloch, ModelParams, SocPt};
use pt_ssh_lab::topology::{critical_kappa, winding_soc};
use pt_ssh_lab::C64;

fn soc(n_cells: usize, theta: f64, kappa: f64) -> ModelParams {
    ModelParams::soc(n_cells, 0.5, theta, kappa, 0.0, SocPt::None)
}

fn near_zero(params: &ModelParams, tol: f64) -> usize {
    spectrum_values(params).unwrap().iter().filter(|e| e.norm() < tol).count()
}

#[test]
fn zero_coupling_is_two_ssh_copies() {
    for theta in [0.0, 0.7, 2.4] {
        let spin = spectrum_values(&soc(10, theta, 0.0)).unwrap();
        let single = spectrum_values(&ModelParams::ssh_a(10, 0.5, theta)).unwrap();
        let doubled: Vec<C64> = single.iter().flat_map(|e| [*e, *e]).collect();
        assert!(matching_distance(&spin, &doubled) <= 1e-10, "theta = {theta}");
    }
}

#[test]
fn long_chain_has_four_zero_modes() {
    let p = soc(60, 0.0, 0.5);
    assert_eq!(near_zero(&p, 1e-8), 4);
    let spec = full_spectrum(&p).unwrap();
    let quartet = soc_edge_quartet(&spec, &p).unwrap();
    for m in &quartet {
        assert!(m.mode.boundary_weight > 0.99, "{} {}", m.label, m.mode.boundary_weight);
        // A modes on the left half, B modes on the right half
        let left = m.mode.peak_site <= 2 * 60;
        assert_eq!(left, m.label.starts_with('A'), "{} peaks at {}", m.label, m.mode.peak_site);
    }
    // trivial side: no zero modes
    assert_eq!(near_zero(&soc(60, 0.75 * std::f64::consts::PI, 0.5), 1e-4), 0);
}

#[test]
fn bloch_bands_bracket_the_open_chain() {
    let p = soc(60, 0.0, 0.5);
    let (mut low, mut high) = (f64::INFINITY, 0.0f64);
    for m in 0..401 {
        let k = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * m as f64 / 400.0;
        for e in eigenvalues(&build_bloch(&p, k).unwrap()).unwrap() {
            low = low.min(e.norm());
            high = high.max(e.norm());
        }
    }
    assert!(low > 0.5, "bulk gap {low}");
    let mut bulk: Vec<f64> = spectrum_values(&p).unwrap().iter().map(|e| e.norm()).collect();
    bulk.sort_by(f64::total_cmp);
    for e in &bulk[4..] {
        assert!(*e >= low - 1e-9 && *e <= high + 1e-9, "{e} outside [{low}, {high}]");
    }
}

#[test]
fn winding_and_open_chain_agree_on_coupling_strength() {
    // the winding stays at 2 wherever J- < J+, so no transition is bracketed
    let base = soc(60, 0.0, 0.5);
    assert_eq!(critical_kappa(&base, 0.0, 4.0, 1e-6, 512), None);
    for kappa in [0.5, 1.0, 1.5] {
        let p = ModelParams { kappa, ..base };
        let w = winding_soc(&p, 512).unwrap();
        assert!((w - 2.0).abs() < 1e-6);
        assert_eq!(near_zero(&p, 1e-6), 4, "kappa = {kappa}");
    }
    // across θ = π/2 both views switch together
    for (theta, w_expect, zeros) in [(0.4 * std::f64::consts::PI, 2.0, 4), (0.6 * std::f64::consts::PI, 0.0, 0)] {
        let p = soc(60, theta, 0.5);
        assert!((winding_soc(&p, 512).unwrap() - w_expect).abs() < 1e-6);
        assert_eq!(near_zero(&p, 1e-6), zeros);
    }
}
