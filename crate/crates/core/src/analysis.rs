//! Mode classification, PT-phase labels, recovery maps, decay fits and
//! threshold scans built on top of the solver and the closed forms.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eigen::{compare_eigenvalues, eigendecompose, eigenvalue_statistics, eigenvalues, EigenError, Spectrum};
use crate::lattice::{build_real_space, LatticeError, ModelParams, SiteIndex, SocPt, Spin, Sublattice, Variant};
use crate::topology::winding_soc;
use crate::transfer::{bound_cubics_c2, bound_energies_c1, edge_energies_c1, edge_energies_case_b, AnalyticModes};
use crate::C64;

/// Thresholds shared by every classification step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// `|Im E|` above this counts as PT-broken.
    pub imag: f64,
    /// Distance for matching a numerical energy to a closed-form one.
    pub matching: f64,
    /// Modes with `|Re E|` below this fraction of the reference gap are in-gap.
    pub in_gap_fraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            imag: 1e-8,
            matching: 1e-3,
            in_gap_fraction: 0.9,
        }
    }
}

/// Real part of an edge-pair splitting at or below this counts as recovered.
pub const MERGE_TOL: f64 = 1e-8;

/// θ resolution of [`merge_boundary`], in units of π.
pub const MERGE_RESOLUTION: f64 = 1e-3;

/// Splittings at or below this are excluded from [`decay_fit`].
pub const DECAY_FLOOR: f64 = 1e-12;

/// Reference gaps at or below this are treated as closed.
const GAPLESS_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("reference gap vanishes at theta = {theta}; classification refused")]
    Gapless { theta: f64 },
    #[error("expected {expected} edge modes, found {found}; in-gap candidates: {candidates:?}")]
    EdgeCount {
        expected: usize,
        found: usize,
        candidates: Vec<C64>,
    },
    #[error("spectrum length {got} does not match the parameters (expected {expected})")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("fit needs at least 3 usable points, got {0}")]
    TooFewPoints(usize),
    #[error("operation requires {0}")]
    Unsupported(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeClass {
    Edge,
    Bound,
    Bulk,
    /// In-gap but neither matched nor localized near a defect.
    Unclassified,
}

impl ModeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeClass::Edge => "edge",
            ModeClass::Bound => "bound",
            ModeClass::Bulk => "bulk",
            ModeClass::Unclassified => "unclassified",
        }
    }
}

/// One eigenstate with its localization metrics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeRecord {
    /// Position in the sorted spectrum.
    pub index: usize,
    pub energy: C64,
    /// `Σ|φ|⁴ / (Σ|φ|²)²`.
    pub ipr: f64,
    /// One-based flat site index of the largest density.
    pub peak_site: usize,
    /// Probability in the boundary cells at both ends (see [`boundary_cells`]).
    pub boundary_weight: f64,
    pub class: ModeClass,
    /// Normalized density `|φ_ĵ|²` in flat site order.
    pub profile: Vec<f64>,
}

/// Width, in unit cells, of the boundary region at each end: one tenth of
/// the chain, at least one cell.
pub fn boundary_cells(n_cells: usize) -> usize {
    n_cells.div_ceil(10).max(1)
}

/// Hermitian bulk gap `2JΔ|cos θ|` used as the in-gap reference.
pub fn reference_gap(params: &ModelParams) -> f64 {
    params.reference_gap()
}

fn is_in_gap(e: C64, gap: f64, tol: &Tolerances) -> bool {
    e.re.abs() < tol.in_gap_fraction * gap || e.im.abs() > tol.imag
}

/// Density metrics of one normalized eigenvector.
pub fn mode_metrics(index: usize, energy: C64, vector: &[C64], params: &ModelParams) -> ModeRecord {
    let total: f64 = vector.iter().map(|z| z.norm_sqr()).sum();
    let profile: Vec<f64> = vector.iter().map(|z| z.norm_sqr() / total).collect();
    let ipr = profile.iter().map(|p| p * p).sum();
    let mut peak = 0;
    for (i, p) in profile.iter().enumerate() {
        if *p > profile[peak] {
            peak = i;
        }
    }
    let width = boundary_cells(params.n_cells);
    let spinful = params.is_spinful();
    let boundary_weight = profile
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let cell = SiteIndex::from_offset(*i, spinful).cell;
            cell <= width || cell + width > params.n_cells
        })
        .map(|(_, p)| p)
        .sum::<f64>()
        .min(1.0);
    ModeRecord {
        index,
        energy,
        ipr,
        peak_site: peak + 1,
        boundary_weight,
        class: ModeClass::Bulk,
        profile,
    }
}

/// Closed-form edge and bound energies available for these parameters.
pub fn analytic_reference(params: &ModelParams) -> AnalyticModes {
    let mut out = AnalyticModes::default();
    match params.variant {
        Variant::SshB => {
            if let Ok(m) = edge_energies_case_b(params) {
                out.edge = m.edge;
            }
        }
        Variant::SshC if params.n == 1 && params.alpha_prime == Sublattice::A => {
            if params.is_nontrivial_regime() {
                if let Ok(m) = edge_energies_c1(params) {
                    out.edge = m.edge;
                    out.hermitian_limit = m.hermitian_limit;
                }
            } else if params.gamma > 0.0 {
                if let Ok(m) = bound_energies_c1(params) {
                    out.bound = m.bound;
                }
            }
        }
        Variant::SshC if params.n == 1 && params.alpha_prime == Sublattice::B && params.gamma > 0.0 => {
            if let Ok(m) = bound_cubics_c2(params) {
                out.bound = m.bound;
            }
        }
        _ => {}
    }
    out
}

/// Number of topological edge modes expected from the bulk.
pub fn expected_edge_count(params: &ModelParams) -> usize {
    if params.is_spinful() {
        let bulk = ModelParams {
            soc_pt: SocPt::None,
            n_cells: 1,
            ..*params
        };
        match winding_soc(&bulk, 256) {
            Ok(w) if (w.abs() - 2.0).abs() < 1e-6 => 4,
            Ok(w) if (w.abs() - 1.0).abs() < 1e-6 => 2,
            _ => 0,
        }
    } else if params.is_nontrivial_regime() {
        2
    } else {
        0
    }
}

/// Assigns nearest unassigned in-gap modes to each target energy.
fn match_targets(values: &[C64], targets: &[C64], in_gap: &[bool], classes: &mut [Option<ModeClass>], class: ModeClass, tol: f64) {
    for t in targets {
        let best = (0..values.len())
            .filter(|&i| in_gap[i] && classes[i].is_none())
            .map(|i| (i, (values[i] - t).norm()))
            .filter(|(_, d)| *d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        if let Some((i, _)) = best {
            classes[i] = Some(class);
        }
    }
}

/// Energy-only part of the classification: matched edge/bound modes, the
/// topological edge count filled by smallest `|E|`, and the in-gap flag.
/// Returns `(classes, in_gap)` where unresolved in-gap entries are
/// `Unclassified`.
pub fn classify_energies(values: &[C64], params: &ModelParams, tol: &Tolerances) -> Result<(Vec<ModeClass>, Vec<bool>), AnalysisError> {
    let gap = reference_gap(params);
    if gap <= GAPLESS_TOL {
        return Err(AnalysisError::Gapless { theta: params.theta });
    }
    let in_gap: Vec<bool> = values.iter().map(|e| is_in_gap(*e, gap, tol)).collect();
    let mut classes: Vec<Option<ModeClass>> = vec![None; values.len()];
    let analytic = analytic_reference(params);
    match_targets(
        values,
        &analytic.edge_energies(),
        &in_gap,
        &mut classes,
        ModeClass::Edge,
        tol.matching,
    );
    match_targets(
        values,
        &analytic.bound_energies(),
        &in_gap,
        &mut classes,
        ModeClass::Bound,
        tol.matching,
    );

    let expected = expected_edge_count(params);
    let mut have = classes.iter().filter(|c| **c == Some(ModeClass::Edge)).count();
    if have < expected {
        let mut pool: Vec<usize> = (0..values.len()).filter(|&i| in_gap[i] && classes[i].is_none()).collect();
        pool.sort_by(|&a, &b| values[a].norm().total_cmp(&values[b].norm()).then(a.cmp(&b)));
        for i in pool {
            if have == expected {
                break;
            }
            classes[i] = Some(ModeClass::Edge);
            have += 1;
        }
    }
    let classes = classes
        .into_iter()
        .zip(&in_gap)
        .map(|(c, g)| c.unwrap_or(if *g { ModeClass::Unclassified } else { ModeClass::Bulk }))
        .collect();
    Ok((classes, in_gap))
}

/// Full classification of every eigenstate.
///
/// In-gap modes are edge modes when they match a closed-form edge energy or
/// fill the edge count implied by the bulk winding (smallest `|E|` first);
/// bound modes when they match a closed-form bound energy, or when they peak
/// within one cell of a defect and hold more than half of their density
/// there; otherwise unclassified. Everything else is bulk.
pub fn classify_modes(spec: &Spectrum, params: &ModelParams) -> Result<Vec<ModeRecord>, AnalysisError> {
    classify_modes_with(spec, params, &Tolerances::default())
}

pub fn classify_modes_with(spec: &Spectrum, params: &ModelParams, tol: &Tolerances) -> Result<Vec<ModeRecord>, AnalysisError> {
    if spec.len() != params.dim() {
        return Err(AnalysisError::DimensionMismatch {
            got: spec.len(),
            expected: params.dim(),
        });
    }
    let (classes, _) = classify_energies(&spec.eigenvalues, params, tol)?;
    let defects = params.defect_cells();
    let spinful = params.is_spinful();
    Ok(classes
        .into_iter()
        .enumerate()
        .map(|(i, class)| {
            let mut rec = mode_metrics(i, spec.eigenvalues[i], &spec.vector(i), params);
            rec.class = class;
            if class == ModeClass::Unclassified {
                let near = |offset: usize| {
                    let cell = SiteIndex::from_offset(offset, spinful).cell;
                    defects.iter().any(|&d| cell.abs_diff(d) <= 1)
                };
                let defect_weight: f64 = rec.profile.iter().enumerate().filter(|(i, _)| near(*i)).map(|(_, p)| p).sum();
                if near(rec.peak_site - 1) && defect_weight > 0.5 {
                    rec.class = ModeClass::Bound;
                }
            }
            rec
        })
        .collect())
}

/// The two edge energies ordered by `(Re, Im)`, from eigenvalues alone.
pub fn edge_pair_from_energies(values: &[C64], params: &ModelParams) -> Result<(C64, C64), AnalysisError> {
    if params.is_spinful() {
        return Err(AnalysisError::Unsupported("a spinless variant"));
    }
    let tol = Tolerances::default();
    let (classes, in_gap) = classify_energies(values, params, &tol)?;
    let mut edges: Vec<C64> = values
        .iter()
        .zip(&classes)
        .filter(|(_, c)| **c == ModeClass::Edge)
        .map(|(e, _)| *e)
        .collect();
    if edges.len() != 2 {
        return Err(AnalysisError::EdgeCount {
            expected: 2,
            found: edges.len(),
            candidates: values.iter().zip(&in_gap).filter(|(_, g)| **g).map(|(e, _)| *e).collect(),
        });
    }
    edges.sort_by(compare_eigenvalues);
    Ok((edges[0], edges[1]))
}

/// `(E_Ã, E_B̃)` of a spinless spectrum.
pub fn edge_pair(spec: &Spectrum, params: &ModelParams) -> Result<(C64, C64), AnalysisError> {
    edge_pair_from_energies(&spec.eigenvalues, params)
}

/// Builds and diagonalizes (eigenvalues only).
pub fn spectrum_values(params: &ModelParams) -> Result<Vec<C64>, AnalysisError> {
    Ok(eigenvalues(&build_real_space(params)?)?)
}

/// Builds and fully diagonalizes.
pub fn full_spectrum(params: &ModelParams) -> Result<Spectrum, AnalysisError> {
    Ok(eigendecompose(&build_real_space(params)?)?)
}

/// `(|Re(E_Ã − E_B̃)|, |Im(E_Ã − E_B̃)|)` for one parameter set.
pub fn edge_splitting(params: &ModelParams) -> Result<(f64, f64), AnalysisError> {
    let (a, b) = edge_pair_from_energies(&spectrum_values(params)?, params)?;
    let d = a - b;
    Ok((d.re.abs(), d.im.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecoveryCell {
    pub n_cells: usize,
    pub gamma: f64,
    pub re_split: f64,
    pub im_split: f64,
    /// False when the edge pair could not be identified (splits are NaN).
    pub valid: bool,
}

/// Edge-pair splittings over an `(N, γ)` grid, row-major with `N` outer.
/// Cells run in parallel; the output order is fixed by the grid.
pub fn recovery_map(params_base: &ModelParams, n_range: &[usize], gamma_range: &[f64]) -> Vec<RecoveryCell> {
    let cells: Vec<(usize, f64)> = n_range.iter().flat_map(|&n| gamma_range.iter().map(move |&g| (n, g))).collect();
    cells
        .par_iter()
        .map(|&(n_cells, gamma)| {
            let params = ModelParams {
                n_cells,
                gamma,
                ..*params_base
            };
            match edge_splitting(&params) {
                Ok((re_split, im_split)) => RecoveryCell {
                    n_cells,
                    gamma,
                    re_split,
                    im_split,
                    valid: true,
                },
                Err(_) => RecoveryCell {
                    n_cells,
                    gamma,
                    re_split: f64::NAN,
                    im_split: f64::NAN,
                    valid: false,
                },
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MergeBoundary {
    /// Boundary θ* in radians; 0 when no merge region exists.
    pub theta_star: f64,
    pub found: bool,
}

/// Whether the edge pair exists and its real parts coincide.
pub fn is_merged(params: &ModelParams) -> bool {
    matches!(edge_splitting(params), Ok((re, _)) if re <= MERGE_TOL)
}

/// Largest θ* in `(0, π/2)` with merged edge energies for every sampled
/// `θ < θ*`: θ is scanned from 0 on a `10⁻³π` grid and θ* is the midpoint
/// between the last merged and the first unmerged sample.
pub fn merge_boundary(params_base: &ModelParams, gamma: f64) -> MergeBoundary {
    let base = ModelParams { gamma, ..*params_base };
    let steps = (0.5 / MERGE_RESOLUTION).round() as usize;
    let merged: Vec<bool> = (0..steps)
        .into_par_iter()
        .map(|m| is_merged(&base.with_theta(m as f64 * MERGE_RESOLUTION * PI)))
        .collect();
    match merged.iter().position(|m| !m) {
        Some(0) => MergeBoundary {
            theta_star: 0.0,
            found: false,
        },
        Some(first) => MergeBoundary {
            theta_star: (first as f64 - 0.5) * MERGE_RESOLUTION * PI,
            found: true,
        },
        None => MergeBoundary {
            theta_star: 0.5 * PI,
            found: true,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub amplitude: f64,
    pub decay_length: f64,
    pub r_squared: f64,
    /// `(n, im_split)` pairs entering the fit.
    pub points: Vec<(f64, f64)>,
}

/// Least-squares fit of `ln y = ln A − x/ℓ` over points with `y > 10⁻¹²`.
pub fn fit_exponential(points: &[(f64, f64)]) -> Result<DecayFit, AnalysisError> {
    let usable: Vec<(f64, f64)> = points.iter().copied().filter(|(_, y)| *y > DECAY_FLOOR && y.is_finite()).collect();
    if usable.len() < 3 {
        return Err(AnalysisError::TooFewPoints(usable.len()));
    }
    let m = usable.len() as f64;
    let (sx, sy) = usable.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y.ln()));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = usable.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|(x, y)| (x - mx) * (y.ln() - my)).sum();
    let syy: f64 = usable.iter().map(|(_, y)| (y.ln() - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(DecayFit {
        amplitude: intercept.exp(),
        decay_length: -1.0 / slope,
        r_squared,
        points: usable,
    })
}

/// `im_split` of the edge pair for each defect cell `n`.
pub fn im_splits(params_base: &ModelParams, n_values: &[usize]) -> Vec<(usize, Result<f64, AnalysisError>)> {
    n_values
        .par_iter()
        .map(|&n| (n, edge_splitting(&ModelParams { n, ..*params_base }).map(|(_, im)| im)))
        .collect()
}

/// Exponential fit of the edge-pair imaginary splitting versus defect cell.
pub fn decay_fit(params_base: &ModelParams, n_values: &[usize]) -> Result<DecayFit, AnalysisError> {
    if params_base.variant != Variant::SshC {
        return Err(AnalysisError::Unsupported("the ssh_c variant"));
    }
    let mut points = Vec::with_capacity(n_values.len());
    for (n, split) in im_splits(params_base, n_values) {
        points.push((n as f64, split?));
    }
    fit_exponential(&points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseLabel {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl PhaseLabel {
    pub const ALL: [PhaseLabel; 6] = [Self::I, Self::II, Self::III, Self::IV, Self::V, Self::VI];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
            Self::IV => "IV",
            Self::V => "V",
            Self::VI => "VI",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub theta: f64,
    pub gamma: f64,
    pub label: PhaseLabel,
    pub n_complex: usize,
    pub has_edge_pair: bool,
    pub edge_pair_real: bool,
}

/// Phase label from a list of eigenvalues.
///
/// Nontrivial regime (`J- < J+`): I = real bulk with an imaginary edge pair,
/// IV = real bulk and real edge pair, V = broken bulk with a real edge pair,
/// VI = broken bulk and broken edge pair. Trivial regime: II = real
/// spectrum, III = broken. When no edge pair can be isolated in the
/// nontrivial regime every mode counts as bulk and the pair is treated as
/// broken.
pub fn pt_phase_from_energies(params: &ModelParams, values: &[C64]) -> Result<PhasePoint, AnalysisError> {
    let tol = Tolerances::default();
    let gap = reference_gap(params);
    if gap <= GAPLESS_TOL {
        return Err(AnalysisError::Gapless { theta: params.theta });
    }
    let n_complex = eigenvalue_statistics(values, tol.imag).n_complex;
    let point = |label, has_edge_pair, edge_pair_real| PhasePoint {
        theta: params.theta,
        gamma: params.gamma,
        label,
        n_complex,
        has_edge_pair,
        edge_pair_real,
    };
    if !params.is_nontrivial_regime() {
        let label = if n_complex == 0 { PhaseLabel::II } else { PhaseLabel::III };
        return Ok(point(label, false, false));
    }
    let (classes, _) = classify_energies(values, params, &tol)?;
    let edges: Vec<C64> = values
        .iter()
        .zip(&classes)
        .filter(|(_, c)| **c == ModeClass::Edge)
        .map(|(e, _)| *e)
        .collect();
    let has_pair = edges.len() == 2;
    if !has_pair {
        let label = if n_complex == 0 { PhaseLabel::IV } else { PhaseLabel::VI };
        return Ok(point(label, false, false));
    }
    let pair_real = edges.iter().all(|e| e.im.abs() <= tol.imag);
    let bulk_real = values
        .iter()
        .zip(&classes)
        .filter(|(_, c)| **c != ModeClass::Edge)
        .all(|(e, _)| e.im.abs() <= tol.imag);
    let label = match (bulk_real, pair_real) {
        (true, false) => PhaseLabel::I,
        (true, true) => PhaseLabel::IV,
        (false, true) => PhaseLabel::V,
        (false, false) => PhaseLabel::VI,
    };
    Ok(point(label, true, pair_real))
}

pub fn pt_phase_classify(params: &ModelParams, spec: &Spectrum) -> Result<PhasePoint, AnalysisError> {
    pt_phase_from_energies(params, &spec.eigenvalues)
}

/// Phase labels over a `(θ, γ)` grid, row-major with θ outer.
pub fn phase_diagram(params_base: &ModelParams, thetas: &[f64], gammas: &[f64]) -> Vec<Result<PhasePoint, AnalysisError>> {
    let cells: Vec<(f64, f64)> = thetas.iter().flat_map(|&t| gammas.iter().map(move |&g| (t, g))).collect();
    cells
        .par_iter()
        .map(|&(theta, gamma)| {
            let p = ModelParams {
                theta,
                gamma,
                ..*params_base
            };
            pt_phase_from_energies(&p, &spectrum_values(&p)?)
        })
        .collect()
}

/// Edge mode of the spin-orbit chain with its boundary/spin label.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledMode {
    pub label: &'static str,
    pub mode: ModeRecord,
}

/// The four edge modes of the spin-orbit chain labelled A1, A2 (left end)
/// and B1, B2 (right end).
///
/// The four in-gap modes with the largest boundary weight are taken; the
/// labels are the assignment that maximizes the summed log-density on the
/// reference sites A1 → (1,A,↑), A2 → (1,A,↓), B1 → (N,B,↑), B2 → (N,B,↓).
/// Under the PT mirror (1,A,σ) ↔ (N,B,σ) this pairs A1 with B1 and A2 with
/// B2 as partners of opposite gain.
pub fn soc_edge_quartet(spec: &Spectrum, params: &ModelParams) -> Result<[LabeledMode; 4], AnalysisError> {
    if params.variant != Variant::Soc {
        return Err(AnalysisError::Unsupported("the soc variant"));
    }
    if spec.len() != params.dim() {
        return Err(AnalysisError::DimensionMismatch {
            got: spec.len(),
            expected: params.dim(),
        });
    }
    let tol = Tolerances::default();
    let gap = reference_gap(params);
    if gap <= GAPLESS_TOL {
        return Err(AnalysisError::Gapless { theta: params.theta });
    }
    let mut records: Vec<ModeRecord> = (0..spec.len())
        .filter(|&i| is_in_gap(spec.eigenvalues[i], gap, &tol))
        .map(|i| {
            let mut r = mode_metrics(i, spec.eigenvalues[i], &spec.vector(i), params);
            r.class = ModeClass::Edge;
            r
        })
        .collect();
    if records.len() < 4 {
        return Err(AnalysisError::EdgeCount {
            expected: 4,
            found: records.len(),
            candidates: records.iter().map(|r| r.energy).collect(),
        });
    }
    records.sort_by(|a, b| b.boundary_weight.total_cmp(&a.boundary_weight).then(a.index.cmp(&b.index)));
    records.truncate(4);

    let n = params.n_cells;
    let sites = [
        SiteIndex::spinful(1, Sublattice::A, Spin::Up),
        SiteIndex::spinful(1, Sublattice::A, Spin::Down),
        SiteIndex::spinful(n, Sublattice::B, Spin::Up),
        SiteIndex::spinful(n, Sublattice::B, Spin::Down),
    ]
    .map(|s| s.offset());
    let score = |perm: &[usize; 4]| -> f64 {
        perm.iter()
            .zip(sites)
            .map(|(&m, site)| records[m].profile[site].max(1e-300).ln())
            .sum()
    };
    let mut best = [0, 1, 2, 3];
    let mut best_score = f64::NEG_INFINITY;
    for perm in permutations4() {
        let s = score(&perm);
        if s > best_score {
            best_score = s;
            best = perm;
        }
    }
    let labels = ["A1", "A2", "B1", "B2"];
    Ok([0, 1, 2, 3].map(|k| LabeledMode {
        label: labels[k],
        mode: records[best[k]].clone(),
    }))
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (0..i).all(|j| p[i] != p[j]));
                    if distinct {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Predicates for the γ thresholds of the chain with end defects on B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdPredicate {
    /// Some eigenvalue is complex at θ = π.
    ComplexAtPi,
    /// Every θ of the grid has a complex eigenvalue.
    BrokenForAllTheta,
    /// Some θ of the grid has a complex mode inside the real gap
    /// (`|Re E| < 2JΔ|cos θ|`).
    InGapComplexMode,
    /// At every θ of the grid all complex eigenvalues have `|Re E| ≤ 10⁻⁶`.
    AllComplexPurelyImaginary,
}

/// Uniform θ grid over `[−π, π]` with `points` samples.
pub fn theta_grid(points: usize) -> Vec<f64> {
    (0..points).map(|m| -PI + 2.0 * PI * m as f64 / (points - 1) as f64).collect()
}

/// Evaluates a threshold predicate at one γ.
pub fn threshold_predicate(
    params_base: &ModelParams,
    predicate: ThresholdPredicate,
    gamma: f64,
    thetas: &[f64],
) -> Result<bool, AnalysisError> {
    let tol = Tolerances::default();
    let base = ModelParams { gamma, ..*params_base };
    let thetas: Vec<f64> = if predicate == ThresholdPredicate::ComplexAtPi {
        vec![PI]
    } else {
        thetas.to_vec()
    };
    let per_theta: Vec<Result<bool, AnalysisError>> = thetas
        .par_iter()
        .map(|&theta| {
            let p = base.with_theta(theta);
            let values = spectrum_values(&p)?;
            let complex = values.iter().filter(|e| e.im.abs() > tol.imag);
            Ok(match predicate {
                ThresholdPredicate::ComplexAtPi | ThresholdPredicate::BrokenForAllTheta => complex.count() > 0,
                ThresholdPredicate::InGapComplexMode => {
                    let gap = p.reference_gap();
                    let mut c = complex;
                    c.any(|e| e.re.abs() < gap)
                }
                ThresholdPredicate::AllComplexPurelyImaginary => {
                    let mut c = complex;
                    c.all(|e| e.re.abs() <= 1e-6)
                }
            })
        })
        .collect();
    let flags = per_theta.into_iter().collect::<Result<Vec<bool>, _>>()?;
    Ok(match predicate {
        ThresholdPredicate::ComplexAtPi | ThresholdPredicate::InGapComplexMode => flags.iter().any(|f| *f),
        ThresholdPredicate::BrokenForAllTheta | ThresholdPredicate::AllComplexPurelyImaginary => flags.iter().all(|f| *f),
    })
}

/// Bisection on γ for the onset of a predicate that is false at `lo` and
/// true at `hi`; returns the bracket midpoint once it is narrower than
/// `resolution`, or `None` if `[lo, hi]` does not bracket a switch.
pub fn locate_threshold(
    params_base: &ModelParams,
    predicate: ThresholdPredicate,
    lo: f64,
    hi: f64,
    resolution: f64,
    thetas: &[f64],
) -> Result<Option<f64>, AnalysisError> {
    let eval = |g: f64| threshold_predicate(params_base, predicate, g, thetas);
    if eval(lo)? || !eval(hi)? {
        return Ok(None);
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > resolution {
        let mid = 0.5 * (a + b);
        if eval(mid)? {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(Some(0.5 * (a + b)))
}
