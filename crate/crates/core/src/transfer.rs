//! Closed-form transfer-matrix results for semi-infinite chains.
//!
//! Away from the ends the amplitudes on one sublattice obey
//! `φ_{j+1} = μ φ_j − φ_{j−1}`, so a localized solution decays with the
//! eigenvalue `λ+` of the bulk transfer matrix (`|λ−| > 1 ≥ |λ+|`). The end
//! sites modify the first step of the recursion; matching that boundary step
//! to the decaying solution gives the conditions checked here.

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{ModelParams, Sublattice, Variant};
use crate::C64;

/// Absolute tolerance on the boundary-matching relations.
pub const CONDITION_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransferError {
    #[error("hopping product J-·J+ vanishes")]
    DegenerateHopping,
    #[error("energy {0} sits on a pole (E = ±iγ) of the boundary coefficients")]
    Pole(C64),
    #[error("gain/loss amplitude γ = 0 is a pole of the closed form")]
    ZeroGamma,
    #[error("closed form requires {0}")]
    Unsupported(&'static str),
}

/// Scalars of the bulk and boundary transfer matrices at energy `E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferCoefficients {
    pub mu: C64,
    pub nu1: C64,
    pub nu2: C64,
    pub xi1: C64,
    pub xi2: C64,
    pub xi3: C64,
    pub xi4: C64,
    pub chi1: C64,
    pub chi2: C64,
    /// Growing root of `λ² − μλ + 1 = 0` (`|λ−| ≥ |λ+|`).
    pub lambda_minus: C64,
    /// Decaying root.
    pub lambda_plus: C64,
}

fn i_gamma(params: &ModelParams) -> C64 {
    C64::new(0.0, params.gamma)
}

fn near(a: C64, b: C64) -> bool {
    (a - b).norm() <= f64::EPSILON * (1.0 + a.norm() + b.norm())
}

/// Principal square root with the branch cut approached from above, so a
/// negative real argument always maps to `+i·√|z|` regardless of the sign
/// of a zero imaginary part.
pub fn principal_sqrt(z: C64) -> C64 {
    let z = if z.im == 0.0 { C64::new(z.re, 0.0) } else { z };
    z.sqrt()
}

/// Roots of `λ² − μλ + 1`, ordered so the first has the larger modulus.
pub fn transfer_eigenvalues(mu: C64) -> (C64, C64) {
    let root = principal_sqrt(mu * mu - 4.0);
    let a = (mu + root) * 0.5;
    let b = (mu - root) * 0.5;
    if a.norm() >= b.norm() {
        (a, b)
    } else {
        (b, a)
    }
}

/// Evaluates every transfer coefficient at energy `e`.
///
/// For `ssh_b` the bulk coefficient includes the uniform gain/loss,
/// `μ = (E² + γ² − J-² − J+²)/(J- J+)`; all other variants use
/// `μ = (E² − J-² − J+²)/(J- J+)`.
pub fn transfer_coefficients(e: C64, params: &ModelParams) -> Result<TransferCoefficients, TransferError> {
    let (jm, jp) = (params.j_minus(), params.j_plus());
    let d = jm * jp;
    if d == 0.0 {
        return Err(TransferError::DegenerateHopping);
    }
    let ig = i_gamma(params);
    if params.gamma > 0.0 && (near(e, ig) || near(e, -ig)) {
        return Err(TransferError::Pole(e));
    }
    let (jm2, jp2) = (jm * jm, jp * jp);
    let e2 = e * e;
    let shift = if params.variant == Variant::SshB {
        params.gamma * params.gamma
    } else {
        0.0
    };
    // E/(E ∓ iγ) → 1 as γ → 0 (and the E = 0, γ = 0 limit)
    let ratio = |den: C64| if params.gamma == 0.0 { C64::new(1.0, 0.0) } else { e / den };
    let r_minus = ratio(e - ig);
    let r_plus = ratio(e + ig);

    let mu = (e2 + shift - jm2 - jp2) / d;
    let (lambda_minus, lambda_plus) = transfer_eigenvalues(mu);
    Ok(TransferCoefficients {
        mu,
        nu1: (e2 - ig * e - jm2) / d,
        nu2: (e2 + ig * e - jm2) / d,
        xi1: (e2 - r_minus * jm2 - jp2) / d,
        xi2: (e2 - r_plus * jm2 - jp2) / d,
        xi3: (e2 - jm2 - r_plus * jp2) / d,
        xi4: (e2 - jm2 - r_minus * jp2) / d,
        chi1: (e2 + ig * e - jm2 - jp2) / d,
        chi2: (e2 - ig * e - jm2 - jp2) / d,
        lambda_minus,
        lambda_plus,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Outcome of the necessary conditions for one candidate energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub lambda_minus_abs: f64,
    /// Named boundary relations and their absolute residuals.
    pub relations: Vec<(&'static str, f64)>,
    pub admitted: bool,
}

impl ConditionCheck {
    fn new(lambda_minus_abs: f64, relations: Vec<(&'static str, f64)>) -> Self {
        let admitted = lambda_minus_abs > 1.0 && relations.iter().all(|(_, r)| *r <= CONDITION_TOL);
        Self {
            lambda_minus_abs,
            relations,
            admitted,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.relations.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticMode {
    pub energy: C64,
    /// End of the chain the mode is attached to.
    pub side: Side,
    pub check: ConditionCheck,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AnalyticModes {
    pub edge: Vec<AnalyticMode>,
    pub bound: Vec<AnalyticMode>,
    /// Candidates that failed their conditions.
    pub rejected: Vec<AnalyticMode>,
    /// Set when the γ → 0 limit value was returned instead of the closed form.
    pub hermitian_limit: bool,
}

impl AnalyticModes {
    pub fn edge_energies(&self) -> Vec<C64> {
        self.edge.iter().map(|m| m.energy).collect()
    }

    pub fn bound_energies(&self) -> Vec<C64> {
        self.bound.iter().map(|m| m.energy).collect()
    }
}

/// Relations for a mode attached to an end site carrying `+iγ` on A (left)
/// or `−iγ` on B (right).
fn check_end_defect_a(e: C64, params: &ModelParams) -> Result<(ConditionCheck, ConditionCheck), TransferError> {
    let t = transfer_coefficients(e, params)?;
    let lm = t.lambda_minus.norm();
    let left = ConditionCheck::new(
        lm,
        vec![
            ("lambda_plus=nu1", (t.lambda_plus - t.nu1).norm()),
            ("lambda_plus=xi1", (t.lambda_plus - t.xi1).norm()),
        ],
    );
    let right = ConditionCheck::new(
        lm,
        vec![
            ("lambda_plus=nu2", (t.lambda_plus - t.nu2).norm()),
            ("lambda_plus=xi2", (t.lambda_plus - t.xi2).norm()),
        ],
    );
    Ok((left, right))
}

/// Relations for a mode near an end carrying `−iγ` on (1,B) (left) or
/// `+iγ` on (N,A) (right).
fn check_end_defect_b(e: C64, params: &ModelParams) -> Result<(ConditionCheck, ConditionCheck), TransferError> {
    let t = transfer_coefficients(e, params)?;
    let ig = i_gamma(params);
    let lm = t.lambda_minus.norm();
    let left = ConditionCheck::new(
        lm,
        vec![
            ("lambda_plus=chi1", (t.lambda_plus - t.chi1).norm()),
            (
                "lambda_plus*nu2=xi3*nu2-E/(E+ig)",
                (t.lambda_plus * t.nu2 - (t.xi3 * t.nu2 - e / (e + ig))).norm(),
            ),
        ],
    );
    let right = ConditionCheck::new(
        lm,
        vec![
            ("lambda_plus=chi2", (t.lambda_plus - t.chi2).norm()),
            (
                "lambda_plus*nu1=xi4*nu1-E/(E-ig)",
                (t.lambda_plus * t.nu1 - (t.xi4 * t.nu1 - e / (e - ig))).norm(),
            ),
        ],
    );
    Ok((left, right))
}

fn require(params: &ModelParams, variant: Variant, what: &'static str) -> Result<(), TransferError> {
    if params.variant != variant {
        return Err(TransferError::Unsupported(what));
    }
    if params.j_minus() * params.j_plus() == 0.0 {
        return Err(TransferError::DegenerateHopping);
    }
    Ok(())
}

fn require_end_defect(params: &ModelParams, alpha: Sublattice, what: &'static str) -> Result<(), TransferError> {
    require(params, Variant::SshC, what)?;
    if params.n != 1 || params.alpha_prime != alpha {
        return Err(TransferError::Unsupported(what));
    }
    Ok(())
}

/// Edge energies `±iγ` of the uniformly gain/loss-modulated chain.
///
/// Each candidate is checked against the shifted bulk recursion: the left
/// mode lives on A with ratio `λ+ = −ξ` per cell, which is decaying only for
/// `J- < J+`.
pub fn edge_energies_case_b(params: &ModelParams) -> Result<AnalyticModes, TransferError> {
    require(params, Variant::SshB, "the ssh_b variant")?;
    let mut out = AnalyticModes::default();
    let minus_xi = C64::new(-params.xi(), 0.0);
    for (side, e) in [
        (Side::Left, C64::new(0.0, params.gamma)),
        (Side::Right, C64::new(0.0, -params.gamma)),
    ] {
        let mu = (e * e + params.gamma * params.gamma - params.j_minus().powi(2) - params.j_plus().powi(2))
            / (params.j_minus() * params.j_plus());
        let (lm, lp) = transfer_eigenvalues(mu);
        let check = ConditionCheck::new(lm.norm(), vec![("lambda_plus=-xi", (lp - minus_xi).norm())]);
        let mode = AnalyticMode { energy: e, side, check };
        if mode.check.admitted {
            out.edge.push(mode);
        } else {
            out.rejected.push(mode);
        }
    }
    Ok(out)
}

/// `(a, s)` with `a = iγ + J+²/(iγ)` and `s = √(a² + 4(J-² − J+²))`.
fn end_defect_roots(params: &ModelParams) -> (C64, C64) {
    let ig = i_gamma(params);
    let (jm, jp) = (params.j_minus(), params.j_plus());
    let a = ig + jp * jp / ig;
    let s = principal_sqrt(a * a + 4.0 * (jm * jm - jp * jp));
    (a, s)
}

/// `(a + s)/2` without cancellation: since `s² − a² = 4(J-² − J+²)`, the
/// small root is evaluated as `2(J-² − J+²)/(s − a)`.
fn half_sum(params: &ModelParams, a: C64, s: C64) -> C64 {
    if (a + s).norm() >= (a - s).norm() {
        (a + s) * 0.5
    } else {
        2.0 * (params.j_minus().powi(2) - params.j_plus().powi(2)) / (s - a)
    }
}

/// Edge energies of the chain with `+iγ` on (1,A) and `−iγ` on (N,B).
pub fn edge_energies_c1(params: &ModelParams) -> Result<AnalyticModes, TransferError> {
    require_end_defect(params, Sublattice::A, "ssh_c with n = 1 and alpha_prime = a")?;
    let mut out = AnalyticModes::default();
    if params.gamma == 0.0 {
        out.hermitian_limit = true;
        for side in [Side::Left, Side::Right] {
            out.edge.push(AnalyticMode {
                energy: C64::new(0.0, 0.0),
                side,
                check: ConditionCheck {
                    lambda_minus_abs: 1.0 / params.xi(),
                    relations: Vec::new(),
                    admitted: params.is_nontrivial_regime(),
                },
            });
        }
        return Ok(out);
    }
    let (a, s) = end_defect_roots(params);
    let e_left = half_sum(params, a, s);
    for (side, e) in [(Side::Left, e_left), (Side::Right, -e_left)] {
        let (l, r) = check_end_defect_a(e, params)?;
        let check = if side == Side::Left { l } else { r };
        let mode = AnalyticMode { energy: e, side, check };
        if mode.check.admitted {
            out.edge.push(mode);
        } else {
            out.rejected.push(mode);
        }
    }
    Ok(out)
}

/// The four bound-state candidates `±(a ± s)/2` of the end-defect chain.
///
/// A candidate is kept when it decays (`|λ−| > 1`) and satisfies the
/// boundary relations of either end.
pub fn bound_energies_c1(params: &ModelParams) -> Result<AnalyticModes, TransferError> {
    require_end_defect(params, Sublattice::A, "ssh_c with n = 1 and alpha_prime = a")?;
    if params.gamma == 0.0 {
        return Err(TransferError::ZeroGamma);
    }
    let (a, s) = end_defect_roots(params);
    let mut out = AnalyticModes::default();
    let plus = half_sum(params, a, s);
    let minus = half_sum(params, a, -s);
    for e in [plus, minus, -plus, -minus] {
        let (l, r) = check_end_defect_a(e, params)?;
        let (side, check) = if l.admitted || (!r.admitted && l.max_residual() <= r.max_residual()) {
            (Side::Left, l)
        } else {
            (Side::Right, r)
        };
        let mode = AnalyticMode { energy: e, side, check };
        if mode.check.admitted {
            out.bound.push(mode);
        } else {
            out.rejected.push(mode);
        }
    }
    Ok(out)
}

/// Roots of the monic cubic `z³ + a z² + b z + c` by Cardano's formula,
/// each refined by one Newton step.
pub fn solve_cubic(a: C64, b: C64, c: C64) -> [C64; 3] {
    let p = b - a * a / 3.0;
    let q = a * a * a * (2.0 / 27.0) - a * b / 3.0 + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let u1 = -q / 2.0 + disc;
    let u2 = -q / 2.0 - disc;
    let u3 = if u1.norm() >= u2.norm() { u1 } else { u2 };
    let u = u3.powf(1.0 / 3.0);
    let omega = C64::new(-0.5, 3f64.sqrt() / 2.0);
    let shift = a / 3.0;
    let mut roots = [C64::new(0.0, 0.0); 3];
    let mut w = C64::new(1.0, 0.0);
    for r in roots.iter_mut() {
        let uk = u * w;
        let t = if uk.norm() == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            uk - p / (3.0 * uk)
        };
        *r = t - shift;
        w *= omega;
    }
    let poly = |z: C64| ((z + a) * z + b) * z + c;
    let deriv = |z: C64| (3.0 * z + 2.0 * a) * z + b;
    for r in roots.iter_mut() {
        let d = deriv(*r);
        if d.norm() > 0.0 {
            let polished = *r - poly(*r) / d;
            if poly(polished).norm() <= poly(*r).norm() {
                *r = polished;
            }
        }
    }
    roots
}

/// Coefficients `(a, b, c)` of the monic left (`Side::Left`) or right cubic
/// for the chain with `−iγ` on (1,B) and `+iγ` on (N,A).
pub fn c2_cubic(params: &ModelParams, side: Side) -> (C64, C64, C64) {
    let ig = i_gamma(params);
    let (jm2, jp2) = (params.j_minus().powi(2), params.j_plus().powi(2));
    let sign = if side == Side::Left { 1.0 } else { -1.0 };
    (ig * sign, C64::new(-(jm2 + jp2), 0.0), sign * jm2 * jp2 / ig)
}

/// Value of the selected cubic at `e`.
pub fn c2_cubic_residual(params: &ModelParams, side: Side, e: C64) -> f64 {
    let (a, b, c) = c2_cubic(params, side);
    (((e + a) * e + b) * e + c).norm()
}

/// Bound states of the chain with `−iγ` on (1,B) and `+iγ` on (N,A): roots of
/// the left and right cubics that pass the boundary relations of their end.
pub fn bound_cubics_c2(params: &ModelParams) -> Result<AnalyticModes, TransferError> {
    require_end_defect(params, Sublattice::B, "ssh_c with n = 1 and alpha_prime = b")?;
    if params.gamma == 0.0 {
        return Err(TransferError::ZeroGamma);
    }
    let mut out = AnalyticModes::default();
    for side in [Side::Left, Side::Right] {
        let (a, b, c) = c2_cubic(params, side);
        for e in solve_cubic(a, b, c) {
            let check = match check_end_defect_b(e, params) {
                Ok((l, r)) => {
                    if side == Side::Left {
                        l
                    } else {
                        r
                    }
                }
                Err(TransferError::Pole(_)) => ConditionCheck {
                    lambda_minus_abs: f64::NAN,
                    relations: vec![("pole", f64::INFINITY)],
                    admitted: false,
                },
                Err(err) => return Err(err),
            };
            let mode = AnalyticMode { energy: e, side, check };
            if mode.check.admitted {
                out.bound.push(mode);
            } else {
                out.rejected.push(mode);
            }
        }
    }
    Ok(out)
}

/// Analytic zero-mode amplitudes on a chain of `length` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroModeProfile {
    /// Amplitudes in flat site order (length `2·length`).
    pub amplitudes: Vec<C64>,
    /// `ξ ≥ 1`: the profile does not decay and is left unnormalized.
    pub delocalized: bool,
}

/// Hermitian zero-mode shape: `(−ξ)^{j−1}` on (j,A) for the left mode,
/// `(−ξ)^{N−j}` on (j,B) for the right mode.
pub fn zero_mode_profile(params: &ModelParams, side: Side, length: usize) -> ZeroModeProfile {
    let ratio = -params.xi();
    let mut amplitudes = vec![C64::new(0.0, 0.0); 2 * length];
    for j in 1..=length {
        match side {
            Side::Left => amplitudes[2 * (j - 1)] = C64::new(ratio.powi(j as i32 - 1), 0.0),
            Side::Right => amplitudes[2 * j - 1] = C64::new(ratio.powi((length - j) as i32), 0.0),
        }
    }
    let delocalized = params.xi() >= 1.0 || !params.xi().is_finite();
    if !delocalized {
        let norm = crate::matrix::vec_norm(&amplitudes);
        for a in amplitudes.iter_mut() {
            *a /= norm;
        }
    }
    ZeroModeProfile { amplitudes, delocalized }
}
