//! Model parameters and Hamiltonian construction.
//!
//! Spinless chains use the flat ordering `(1,A), (1,B), (2,A), ...`; the
//! spin-orbit-coupled chain uses `(A↑, A↓, B↑, B↓)` inside every cell.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::ComplexMatrix;
use crate::C64;

/// Largest matrix dimension the builders accept.
pub const MAX_DIM: usize = 8192;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("defect cell n = {n} out of range 1..={max} for N = {n_cells}")]
    DefectOutOfRange { n: usize, n_cells: usize, max: usize },
    #[error("spin-orbit field `{0}` set on a spinless variant")]
    SocFieldOnSpinless(&'static str),
    #[error("matrix dimension {0} exceeds the supported maximum {MAX_DIM}")]
    DimensionOverflow(usize),
    #[error("variant {0:?} breaks translation invariance; no Bloch matrix")]
    TranslationBroken(Variant),
    #[error("operation requires the soc variant, got {0:?}")]
    NotSoc(Variant),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Plain SSH chain.
    #[serde(rename = "ssh_a")]
    SshA,
    /// Alternating gain/loss on every site.
    #[serde(rename = "ssh_b")]
    SshB,
    /// One conjugate pair of imaginary defect potentials.
    #[serde(rename = "ssh_c")]
    SshC,
    /// Spin-orbit-coupled chain.
    #[serde(rename = "soc")]
    Soc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sublattice {
    #[serde(rename = "a", alias = "A")]
    A,
    #[serde(rename = "b", alias = "B")]
    B,
}

impl Sublattice {
    pub fn other(self) -> Self {
        match self {
            Sublattice::A => Sublattice::B,
            Sublattice::B => Sublattice::A,
        }
    }

    /// 0 for A, 1 for B.
    pub fn parity(self) -> usize {
        match self {
            Sublattice::A => 0,
            Sublattice::B => 1,
        }
    }

    /// `(-1)^η`: +1 on A, -1 on B.
    pub fn sign(self) -> f64 {
        match self {
            Sublattice::A => 1.0,
            Sublattice::B => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

/// Which non-Hermitian term is added to the spin-orbit-coupled chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SocPt {
    #[serde(rename = "none")]
    None,
    /// `+iγ` on (1,A,↑), `-iγ` on (N,B,↓).
    #[serde(rename = "a")]
    A,
    /// `+iγ` on (1,A,↓), `-iγ` on (N,B,↑).
    #[serde(rename = "b")]
    B,
    /// Spin-staggered pair on both end sites.
    #[serde(rename = "c")]
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Obc,
    Pbc,
}

fn default_j() -> f64 {
    1.0
}
fn default_n() -> usize {
    1
}
fn default_alpha() -> Sublattice {
    Sublattice::A
}
fn default_soc_pt() -> SocPt {
    SocPt::None
}
fn default_boundary() -> Boundary {
    Boundary::Obc
}

/// Full description of one Hamiltonian instance.
///
/// Hopping amplitudes are `J∓ = J(1 ∓ Δ cos θ)`: `J-` inside a cell and `J+`
/// between neighbouring cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub variant: Variant,
    #[serde(default = "default_j")]
    pub j: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default)]
    pub gamma: f64,
    /// Number of unit cells `N`.
    pub n_cells: usize,
    /// Defect cell index (ssh_c only).
    #[serde(default = "default_n")]
    pub n: usize,
    /// Defect sublattice (ssh_c only).
    #[serde(default = "default_alpha")]
    pub alpha_prime: Sublattice,
    #[serde(default)]
    pub kappa: f64,
    #[serde(default = "default_soc_pt")]
    pub soc_pt: SocPt,
    #[serde(default = "default_boundary")]
    pub boundary: Boundary,
}

impl ModelParams {
    pub fn new(variant: Variant, n_cells: usize) -> Self {
        Self {
            variant,
            j: 1.0,
            delta: 0.0,
            theta: 0.0,
            gamma: 0.0,
            n_cells,
            n: 1,
            alpha_prime: Sublattice::A,
            kappa: 0.0,
            soc_pt: SocPt::None,
            boundary: Boundary::Obc,
        }
    }

    pub fn ssh_a(n_cells: usize, delta: f64, theta: f64) -> Self {
        Self::new(Variant::SshA, n_cells).with_delta(delta).with_theta(theta)
    }

    pub fn ssh_b(n_cells: usize, delta: f64, theta: f64, gamma: f64) -> Self {
        Self::new(Variant::SshB, n_cells)
            .with_delta(delta)
            .with_theta(theta)
            .with_gamma(gamma)
    }

    /// Defect pair at `(n, α′)` and its PT partner.
    pub fn ssh_c(n_cells: usize, delta: f64, theta: f64, gamma: f64, n: usize, alpha_prime: Sublattice) -> Self {
        Self {
            n,
            alpha_prime,
            ..Self::ssh_b(n_cells, delta, theta, gamma)
        }
        .with_variant(Variant::SshC)
    }

    pub fn soc(n_cells: usize, delta: f64, theta: f64, kappa: f64, gamma: f64, soc_pt: SocPt) -> Self {
        Self {
            kappa,
            soc_pt,
            ..Self::ssh_b(n_cells, delta, theta, gamma)
        }
        .with_variant(Variant::Soc)
    }

    pub fn with_variant(mut self, v: Variant) -> Self {
        self.variant = v;
        self
    }
    pub fn with_j(mut self, j: f64) -> Self {
        self.j = j;
        self
    }
    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }
    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }
    pub fn with_cells(mut self, n_cells: usize) -> Self {
        self.n_cells = n_cells;
        self
    }
    pub fn with_boundary(mut self, b: Boundary) -> Self {
        self.boundary = b;
        self
    }

    /// Intracell hopping `J(1 - Δ cos θ)`.
    pub fn j_minus(&self) -> f64 {
        self.j * (1.0 - self.delta * self.theta.cos())
    }

    /// Intercell hopping `J(1 + Δ cos θ)`.
    pub fn j_plus(&self) -> f64 {
        self.j * (1.0 + self.delta * self.theta.cos())
    }

    /// `ξ = J-/J+`.
    pub fn xi(&self) -> f64 {
        self.j_minus() / self.j_plus()
    }

    pub fn is_spinful(&self) -> bool {
        self.variant == Variant::Soc
    }

    /// Orbitals per unit cell.
    pub fn cell_size(&self) -> usize {
        if self.is_spinful() {
            4
        } else {
            2
        }
    }

    pub fn dim(&self) -> usize {
        self.cell_size() * self.n_cells
    }

    /// `|θ| < π/2` with `Δ > 0`, i.e. `J- < J+`.
    pub fn is_nontrivial_regime(&self) -> bool {
        self.j_minus() < self.j_plus()
    }

    /// Hermitian bulk gap `2JΔ|cos θ|` of the plain chain.
    pub fn reference_gap(&self) -> f64 {
        2.0 * self.j.abs() * self.delta * self.theta.cos().abs()
    }

    /// Cells hosting the defect potentials (ssh_c), 1-based.
    pub fn defect_cells(&self) -> Vec<usize> {
        match self.variant {
            Variant::SshC => vec![self.n, self.n_cells + 1 - self.n],
            Variant::Soc if self.soc_pt != SocPt::None => vec![1, self.n_cells],
            _ => Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        let finite = [self.j, self.delta, self.theta, self.gamma, self.kappa]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(LatticeError::InvalidParam("non-finite parameter".into()));
        }
        if self.n_cells == 0 {
            return Err(LatticeError::InvalidParam("n_cells must be positive".into()));
        }
        let dim = self
            .n_cells
            .checked_mul(self.cell_size())
            .ok_or(LatticeError::DimensionOverflow(usize::MAX))?;
        if dim > MAX_DIM {
            return Err(LatticeError::DimensionOverflow(dim));
        }
        if !(0.0..1.0).contains(&self.delta) {
            return Err(LatticeError::InvalidParam(format!("delta = {} outside [0, 1)", self.delta)));
        }
        if self.theta.abs() > std::f64::consts::PI + 1e-12 {
            return Err(LatticeError::InvalidParam(format!("theta = {} outside [-pi, pi]", self.theta)));
        }
        if self.gamma < 0.0 {
            return Err(LatticeError::InvalidParam(format!("gamma = {} is negative", self.gamma)));
        }
        if self.j_minus() < 0.0 || self.j_plus() < 0.0 {
            return Err(LatticeError::InvalidParam("negative hopping amplitude".into()));
        }
        if !self.is_spinful() {
            if self.kappa != 0.0 {
                return Err(LatticeError::SocFieldOnSpinless("kappa"));
            }
            if self.soc_pt != SocPt::None {
                return Err(LatticeError::SocFieldOnSpinless("soc_pt"));
            }
        }
        if self.variant == Variant::SshC {
            let max = self.n_cells / 2;
            if self.n == 0 || self.n > max {
                return Err(LatticeError::DefectOutOfRange {
                    n: self.n,
                    n_cells: self.n_cells,
                    max,
                });
            }
        }
        Ok(())
    }
}

/// Position of one orbital: cell `1..=N`, sublattice and optional spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiteIndex {
    pub cell: usize,
    pub sublattice: Sublattice,
    pub spin: Option<Spin>,
}

impl SiteIndex {
    pub fn spinless(cell: usize, sublattice: Sublattice) -> Self {
        Self {
            cell,
            sublattice,
            spin: None,
        }
    }

    pub fn spinful(cell: usize, sublattice: Sublattice, spin: Spin) -> Self {
        Self {
            cell,
            sublattice,
            spin: Some(spin),
        }
    }

    /// Zero-based row/column of this orbital.
    pub fn offset(&self) -> usize {
        match self.spin {
            None => 2 * (self.cell - 1) + self.sublattice.parity(),
            Some(s) => 4 * (self.cell - 1) + 2 * self.sublattice.parity() + s.index(),
        }
    }

    /// One-based flat site label `ĵ` (`2(j-1)+1` for A, `2j` for B).
    pub fn flat(&self) -> usize {
        self.offset() + 1
    }

    /// Inverse of [`SiteIndex::offset`].
    pub fn from_offset(offset: usize, spinful: bool) -> Self {
        if spinful {
            let cell = offset / 4 + 1;
            let sub = if (offset % 4) / 2 == 0 { Sublattice::A } else { Sublattice::B };
            let spin = if offset.is_multiple_of(2) { Spin::Up } else { Spin::Down };
            Self::spinful(cell, sub, spin)
        } else {
            let cell = offset / 2 + 1;
            let sub = if offset.is_multiple_of(2) { Sublattice::A } else { Sublattice::B };
            Self::spinless(cell, sub)
        }
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Real-space single-particle matrix for any variant.
pub fn build_real_space(params: &ModelParams) -> Result<ComplexMatrix, LatticeError> {
    params.validate()?;
    if params.is_spinful() {
        return build_soc(params);
    }
    let n_cells = params.n_cells;
    let (jm, jp) = (params.j_minus(), params.j_plus());
    let mut h = ComplexMatrix::zeros(params.dim());
    let at = |cell, sub| SiteIndex::spinless(cell, sub).offset();

    for j in 1..=n_cells {
        let (a, b) = (at(j, Sublattice::A), at(j, Sublattice::B));
        h[(a, b)] += c(jm, 0.0);
        h[(b, a)] += c(jm, 0.0);
        if j < n_cells {
            let a_next = at(j + 1, Sublattice::A);
            h[(b, a_next)] += c(jp, 0.0);
            h[(a_next, b)] += c(jp, 0.0);
        }
    }
    if params.boundary == Boundary::Pbc {
        let (b_last, a_first) = (at(n_cells, Sublattice::B), at(1, Sublattice::A));
        h[(b_last, a_first)] += c(jp, 0.0);
        h[(a_first, b_last)] += c(jp, 0.0);
    }

    let gain = params.gamma;
    match params.variant {
        Variant::SshA | Variant::Soc => {}
        Variant::SshB => {
            for j in 1..=n_cells {
                for sub in [Sublattice::A, Sublattice::B] {
                    h[(at(j, sub), at(j, sub))] += c(0.0, sub.sign() * gain);
                }
            }
        }
        Variant::SshC => {
            let alpha = params.alpha_prime;
            let site = at(params.n, alpha);
            let partner = at(n_cells + 1 - params.n, alpha.other());
            h[(site, site)] += c(0.0, alpha.sign() * gain);
            h[(partner, partner)] += c(0.0, -alpha.sign() * gain);
        }
    }
    Ok(h)
}

/// Intracell block `i(J- σz + κ σy)` from A to B.
fn soc_intracell(jm: f64, kappa: f64) -> [[C64; 2]; 2] {
    [[c(0.0, jm), c(kappa, 0.0)], [c(-kappa, 0.0), c(0.0, -jm)]]
}

/// Intercell block `J+ I + i κ σy` from B_j to A_{j+1}.
fn soc_intercell(jp: f64, kappa: f64) -> [[C64; 2]; 2] {
    [[c(jp, 0.0), c(kappa, 0.0)], [c(-kappa, 0.0), c(jp, 0.0)]]
}

fn add_block(h: &mut ComplexMatrix, row0: usize, col0: usize, blk: &[[C64; 2]; 2]) {
    for (r, row) in blk.iter().enumerate() {
        for (s, v) in row.iter().enumerate() {
            h[(row0 + r, col0 + s)] += *v;
            h[(col0 + s, row0 + r)] += v.conj();
        }
    }
}

/// Spin-orbit-coupled chain (`4N × 4N`) with the selected end potentials.
pub fn build_soc(params: &ModelParams) -> Result<ComplexMatrix, LatticeError> {
    if params.variant != Variant::Soc {
        return Err(LatticeError::NotSoc(params.variant));
    }
    params.validate()?;
    let n_cells = params.n_cells;
    let intra = soc_intracell(params.j_minus(), params.kappa);
    let inter = soc_intercell(params.j_plus(), params.kappa);
    let base = |cell: usize, sub: Sublattice| SiteIndex::spinful(cell, sub, Spin::Up).offset();

    let mut h = ComplexMatrix::zeros(params.dim());
    for j in 1..=n_cells {
        add_block(&mut h, base(j, Sublattice::A), base(j, Sublattice::B), &intra);
        if j < n_cells {
            add_block(&mut h, base(j, Sublattice::B), base(j + 1, Sublattice::A), &inter);
        }
    }
    if params.boundary == Boundary::Pbc {
        add_block(&mut h, base(n_cells, Sublattice::B), base(1, Sublattice::A), &inter);
    }

    let g = params.gamma;
    let site = |cell, sub, spin| SiteIndex::spinful(cell, sub, spin).offset();
    let left = |spin| site(1, Sublattice::A, spin);
    let right = |spin| site(n_cells, Sublattice::B, spin);
    let mut put = |i: usize, v: f64| h[(i, i)] += c(0.0, v);
    match params.soc_pt {
        SocPt::None => {}
        SocPt::A => {
            put(left(Spin::Up), g);
            put(right(Spin::Down), -g);
        }
        SocPt::B => {
            put(left(Spin::Down), g);
            put(right(Spin::Up), -g);
        }
        SocPt::C => {
            // (-1)^σ̃ with σ̃ = 1 for ↑ and 2 for ↓
            for (spin, sign) in [(Spin::Up, -1.0), (Spin::Down, 1.0)] {
                put(left(spin), sign * g);
                put(right(spin), -sign * g);
            }
        }
    }
    Ok(h)
}

/// Momentum-space matrix at wavenumber `k` (2×2 spinless, 4×4 soc).
///
/// Basis is `(A, B)` or `(A↑, A↓, B↑, B↓)`; intercell terms carry `e^{∓ik}`.
pub fn build_bloch(params: &ModelParams, k: f64) -> Result<ComplexMatrix, LatticeError> {
    params.validate()?;
    match params.variant {
        Variant::SshC => return Err(LatticeError::TranslationBroken(Variant::SshC)),
        Variant::Soc if params.soc_pt != SocPt::None => return Err(LatticeError::TranslationBroken(Variant::Soc)),
        _ => {}
    }
    let phase = C64::from_polar(1.0, -k);
    if params.is_spinful() {
        let q = soc_off_diagonal_block(params, k);
        let mut h = ComplexMatrix::zeros(4);
        for r in 0..2 {
            for s in 0..2 {
                h[(r, 2 + s)] = q[r][s];
                h[(2 + s, r)] = q[r][s].conj();
            }
        }
        return Ok(h);
    }
    let q = c(params.j_minus(), 0.0) + phase * params.j_plus();
    let g = if params.variant == Variant::SshB { params.gamma } else { 0.0 };
    Ok(ComplexMatrix::from_rows(&[vec![c(0.0, g), q], vec![q.conj(), c(0.0, -g)]]))
}

/// Off-diagonal `q(k) = J- + J+ e^{-ik}` of the spinless Bloch matrix.
pub fn ssh_off_diagonal(params: &ModelParams, k: f64) -> C64 {
    c(params.j_minus(), 0.0) + C64::from_polar(params.j_plus(), -k)
}

/// A→B block `Q(k) = R1 + R2† e^{-ik}` of the spin-orbit Bloch matrix.
pub fn soc_off_diagonal_block(params: &ModelParams, k: f64) -> [[C64; 2]; 2] {
    let r1 = soc_intracell(params.j_minus(), params.kappa);
    let r2 = soc_intercell(params.j_plus(), params.kappa);
    let phase = C64::from_polar(1.0, -k);
    let mut q = [[c(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for s in 0..2 {
            // (R2†)[r][s] = conj(R2[s][r])
            q[r][s] = r1[r][s] + r2[s][r].conj() * phase;
        }
    }
    q
}
