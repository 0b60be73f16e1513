//! Symmetry identities and winding numbers.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{build_bloch, soc_off_diagonal_block, ssh_off_diagonal, ModelParams, SiteIndex, SocPt, Variant};
use crate::matrix::ComplexMatrix;
use crate::C64;

/// Entrywise tolerance for the symmetry identities.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Minimum number of k points for a winding number.
pub const MIN_K_POINTS: usize = 64;

/// `|q(k)|` (or `|det Q(k)|`) below this counts as a gap closing.
const GAP_CLOSED_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("matrix dimension {got} does not match the parameters (expected {expected})")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("winding number undefined: the gap closes (min |q(k)| = {0:e})")]
    GapClosed(f64),
    #[error("at least {MIN_K_POINTS} k points are required, got {0}")]
    TooFewPoints(usize),
    #[error("winding number requires {0}")]
    Unsupported(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryReport {
    /// `Γ H Γ = −H`.
    pub chiral_ok: bool,
    /// `P conj(H) P⁻¹ = H`.
    pub pt_ok: bool,
    /// `Γ H† Γ = −H`.
    pub pseudo_anti_hermitian_ok: bool,
    pub chiral_violation: f64,
    pub pt_violation: f64,
    pub pseudo_anti_hermitian_violation: f64,
    /// Largest of the three violations.
    pub max_violation: f64,
}

/// Sublattice operator `Γ`: +1 on every A orbital, −1 on every B orbital.
pub fn chiral_operator(params: &ModelParams) -> ComplexMatrix {
    let spinful = params.is_spinful();
    let diag: Vec<C64> = (0..params.dim())
        .map(|i| C64::new(SiteIndex::from_offset(i, spinful).sublattice.sign(), 0.0))
        .collect();
    ComplexMatrix::from_diag(&diag)
}

/// Parity operator `P` (real, `P = P⁻¹`).
///
/// Spinless chains: the mirror `(j, α) → (N+1−j, ᾱ)`, i.e. the
/// anti-diagonal permutation. Spin-orbit chain: the same mirror keeping the
/// spin label, weighted by `σz` (+1 for ↑, −1 for ↓), which is what makes the
/// combined operation with complex conjugation a symmetry of the spin-orbit
/// hopping blocks.
pub fn parity_operator(params: &ModelParams) -> ComplexMatrix {
    let dim = params.dim();
    let n_cells = params.n_cells;
    let spinful = params.is_spinful();
    let mut p = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        let site = SiteIndex::from_offset(i, spinful);
        let image = SiteIndex {
            cell: n_cells + 1 - site.cell,
            sublattice: site.sublattice.other(),
            spin: site.spin,
        };
        let sign = match site.spin {
            Some(crate::lattice::Spin::Down) => -1.0,
            _ => 1.0,
        };
        p[(image.offset(), i)] = C64::new(sign, 0.0);
    }
    p
}

/// Evaluates the chiral, PT and pseudo-anti-Hermitian identities entrywise.
pub fn verify_symmetries(h: &ComplexMatrix, params: &ModelParams) -> Result<SymmetryReport, TopologyError> {
    if h.dim() != params.dim() {
        return Err(TopologyError::DimensionMismatch {
            got: h.dim(),
            expected: params.dim(),
        });
    }
    let gamma = chiral_operator(params);
    let p = parity_operator(params);
    let minus_h = h.scale(C64::new(-1.0, 0.0));

    let chiral = (&(&gamma * h) * &gamma).max_abs_diff(&minus_h);
    let pt = (&(&p * &h.conj()) * &p).max_abs_diff(h);
    let pah = (&(&gamma * &h.adjoint()) * &gamma).max_abs_diff(&minus_h);
    Ok(SymmetryReport {
        chiral_ok: chiral <= SYMMETRY_TOL,
        pt_ok: pt <= SYMMETRY_TOL,
        pseudo_anti_hermitian_ok: pah <= SYMMETRY_TOL,
        chiral_violation: chiral,
        pt_violation: pt,
        pseudo_anti_hermitian_violation: pah,
        max_violation: chiral.max(pt).max(pah),
    })
}

/// Whether the model is expected to satisfy `P conj(H) P⁻¹ = H`.
///
/// The single-spin end potentials of the spin-orbit chain (`soc_pt` a or b)
/// are not mapped onto themselves by the spin-preserving mirror, so those two
/// variants are excluded.
pub fn expects_pt_symmetry(params: &ModelParams) -> bool {
    !(params.variant == Variant::Soc && matches!(params.soc_pt, SocPt::A | SocPt::B))
}

/// `−(1/2π)·Σ Δarg f(k)` over a closed uniform grid on `[−π, π)`, with each
/// increment unwrapped into `(−π, π]`. The sign makes `q = J- + J+ e^{−ik}`
/// with `J- < J+` count as +1.
fn winding_of<F>(k_points: usize, f: F) -> Result<f64, TopologyError>
where
    F: Fn(f64) -> C64,
{
    if k_points < MIN_K_POINTS {
        return Err(TopologyError::TooFewPoints(k_points));
    }
    let values: Vec<C64> = (0..k_points).map(|m| f(-PI + 2.0 * PI * m as f64 / k_points as f64)).collect();
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let min = values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if min <= GAP_CLOSED_TOL * scale {
        return Err(TopologyError::GapClosed(min));
    }
    let mut total = 0.0;
    for m in 0..k_points {
        let a = values[m];
        let b = values[(m + 1) % k_points];
        total += (b / a).arg();
    }
    Ok(-total / (2.0 * PI))
}

/// Winding number of the spinless Bloch off-diagonal `q(k) = J- + J+ e^{−ik}`.
///
/// Only the hoppings enter, so the bulk winding of every spinless variant is
/// available.
pub fn winding_ssh(params: &ModelParams, k_points: usize) -> Result<f64, TopologyError> {
    if params.is_spinful() {
        return Err(TopologyError::Unsupported("a spinless variant"));
    }
    winding_of(k_points, |k| ssh_off_diagonal(params, k))
}

/// Winding number of `det Q(k)` for the spin-orbit chain, where `Q(k)` is the
/// A→B block of the chiral Bloch matrix.
pub fn winding_soc(params: &ModelParams, k_points: usize) -> Result<f64, TopologyError> {
    if params.variant != Variant::Soc || params.soc_pt != SocPt::None {
        return Err(TopologyError::Unsupported("the soc variant with soc_pt = none"));
    }
    winding_of(k_points, |k| {
        let q = soc_off_diagonal_block(params, k);
        q[0][0] * q[1][1] - q[0][1] * q[1][0]
    })
}

/// Smallest positive `|E|` of the Bloch bands over a uniform k grid: half the
/// direct bulk gap of a chiral Hermitian model.
pub fn bloch_gap(params: &ModelParams, k_points: usize) -> Result<f64, crate::lattice::LatticeError> {
    let mut min = f64::INFINITY;
    for m in 0..k_points {
        let k = -PI + 2.0 * PI * m as f64 / k_points as f64;
        let h = build_bloch(params, k)?;
        let h2 = &h * &h;
        // chiral Hermitian blocks: E² are the eigenvalues of Q Q†
        let d = h.dim() / 2;
        let (a, b, c, e) = if d == 1 {
            (h2[(0, 0)], C64::new(0.0, 0.0), C64::new(0.0, 0.0), h2[(0, 0)])
        } else {
            (h2[(0, 0)], h2[(0, 1)], h2[(1, 0)], h2[(1, 1)])
        };
        let tr = a + e;
        let det = a * e - b * c;
        let root = (tr * tr * 0.25 - det).sqrt();
        let low = (tr * 0.5 - root).re.max(0.0).sqrt();
        min = min.min(low);
    }
    Ok(min)
}

/// Locates the spin-orbit strength where the winding number leaves 2, by
/// bisection on `[lo, hi]` with `W(lo) = 2` and `W(hi) ≠ 2`.
/// Returns `None` when the bracket does not straddle a transition.
pub fn critical_kappa(params: &ModelParams, lo: f64, hi: f64, tol: f64, k_points: usize) -> Option<f64> {
    let nontrivial = |kappa: f64| {
        let p = ModelParams { kappa, ..*params };
        matches!(winding_soc(&p, k_points), Ok(w) if (w - 2.0).abs() < 1e-6)
    };
    if !nontrivial(lo) || nontrivial(hi) {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if nontrivial(mid) {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_real_space, Boundary, Sublattice};

    #[test]
    fn ssh_symmetries() {
        let p = ModelParams::ssh_a(7, 0.4, 0.9);
        let r = verify_symmetries(&build_real_space(&p).unwrap(), &p).unwrap();
        assert!(r.chiral_ok && r.pt_ok && r.pseudo_anti_hermitian_ok);
        assert_eq!(r.max_violation, 0.0);

        let p = ModelParams::ssh_b(7, 0.4, 0.9, 0.7);
        let r = verify_symmetries(&build_real_space(&p).unwrap(), &p).unwrap();
        assert!(r.pt_ok && r.pseudo_anti_hermitian_ok);
        assert!(!r.chiral_ok);

        for alpha in [Sublattice::A, Sublattice::B] {
            let p = ModelParams::ssh_c(9, 0.4, -1.2, 0.3, 3, alpha).with_boundary(Boundary::Pbc);
            let r = verify_symmetries(&build_real_space(&p).unwrap(), &p).unwrap();
            assert!(r.pt_ok && r.pseudo_anti_hermitian_ok);
        }
    }

    #[test]
    fn broken_chiral_symmetry_is_detected() {
        let p = ModelParams::ssh_a(5, 0.5, 0.0);
        let mut h = build_real_space(&p).unwrap();
        h[(3, 3)] = C64::new(0.37, 0.0);
        let r = verify_symmetries(&h, &p).unwrap();
        assert!(!r.chiral_ok);
        assert!((r.chiral_violation - 0.74).abs() < 1e-15);
        let err = verify_symmetries(&ComplexMatrix::zeros(3), &p);
        assert!(matches!(err, Err(TopologyError::DimensionMismatch { .. })));
    }

    #[test]
    fn soc_symmetries() {
        for (pt, expect_pt) in [(SocPt::None, true), (SocPt::A, false), (SocPt::B, false), (SocPt::C, true)] {
            let p = ModelParams::soc(5, 0.5, 0.3, 0.5, 1.0, pt);
            assert_eq!(expects_pt_symmetry(&p), expect_pt);
            let r = verify_symmetries(&build_real_space(&p).unwrap(), &p).unwrap();
            assert_eq!(r.pt_ok, expect_pt, "{pt:?}");
            assert!(r.pseudo_anti_hermitian_ok);
        }
    }

    #[test]
    fn ssh_winding() {
        let w = |theta: f64| winding_ssh(&ModelParams::ssh_a(1, 0.5, theta), 256);
        assert!((w(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((w(0.4 * PI).unwrap() - 1.0).abs() < 1e-12);
        assert!(w(0.75 * PI).unwrap().abs() < 1e-12);
        assert!(matches!(w(PI / 2.0), Err(TopologyError::GapClosed(_))));
        assert_eq!(
            winding_ssh(&ModelParams::ssh_a(1, 0.5, 0.0), 10),
            Err(TopologyError::TooFewPoints(10))
        );
    }

    #[test]
    fn soc_winding_and_gap() {
        let p = ModelParams::soc(1, 0.5, 0.0, 0.5, 0.0, SocPt::None);
        assert!((winding_soc(&p, 401).unwrap() - 2.0).abs() < 1e-9);
        let p = p.with_theta(0.75 * PI);
        assert!(winding_soc(&p, 401).unwrap().abs() < 1e-9);
        assert!(bloch_gap(&ModelParams::ssh_a(1, 0.5, 0.0), 400).unwrap() > 0.99);
    }
}
