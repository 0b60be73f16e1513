//! Dense complex eigensolver for general (non-Hermitian) matrices.
//!
//! Pipeline: diagonal balancing, Householder reduction to upper Hessenberg
//! form, single-shift complex QR with Wilkinson shifts down to a triangular
//! Schur factor, then eigenvectors by back-substitution and
//! back-transformation. Output ordering and eigenvector phases are fixed so
//! that downstream files are reproducible byte for byte.

use std::cmp::Ordering;

use thiserror::Error;

use crate::matrix::{vec_norm, ComplexMatrix};
use crate::C64;

const EPS: f64 = f64::EPSILON;
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Iteration budget per eigenvalue, in multiples of the matrix dimension.
const ITERATIONS_PER_DIM: usize = 30;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error("matrix has dimension zero")]
    Empty,
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("QR iteration did not converge for the eigenvalue block ending at index {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },
}

/// Eigenvalues with unit-norm right eigenvectors, sorted by `(Re, Im)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<C64>,
    /// Column `i` is the eigenvector of `eigenvalues[i]`.
    pub eigenvectors: ComplexMatrix,
    /// `‖H v_i − λ_i v_i‖₂` against the input matrix.
    pub residuals: Vec<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.eigenvectors.column(i)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Counts of real and complex eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumStats {
    pub n_real: usize,
    pub n_complex: usize,
    pub max_abs_imag: f64,
}

/// Full eigendecomposition of a square complex matrix.
pub fn eigendecompose(h: &ComplexMatrix) -> Result<Spectrum, EigenError> {
    check_input(h)?;
    let n = h.dim();
    let (mut t, scale) = balance(h);
    let mut z = hessenberg(&mut t, true);
    schur(&mut t, Some(&mut z))?;
    let x = triangular_eigenvectors(&t);
    let mut vectors = z.matmul(&x);

    for j in 0..n {
        for (i, s) in scale.iter().enumerate() {
            vectors[(i, j)] *= *s;
        }
    }

    let values = t.diagonal();
    let order = sorted_order(&values);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = ComplexMatrix::zeros(n);
    let mut residuals = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let lambda = values[src];
        let mut v = vectors.column(src);
        normalize_with_phase(&mut v);
        let hv = h.matvec(&v);
        let r: f64 = hv.iter().zip(&v).map(|(a, b)| (a - lambda * b).norm_sqr()).sum::<f64>().sqrt();
        for (i, vi) in v.into_iter().enumerate() {
            eigenvectors[(i, dst)] = vi;
        }
        eigenvalues.push(lambda);
        residuals.push(r);
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        residuals,
    })
}

/// Eigenvalues only, sorted like [`eigendecompose`]; skips all vector work.
pub fn eigenvalues(h: &ComplexMatrix) -> Result<Vec<C64>, EigenError> {
    check_input(h)?;
    let (mut t, _) = balance(h);
    hessenberg(&mut t, false);
    schur(&mut t, None)?;
    let values = t.diagonal();
    Ok(sorted_order(&values).into_iter().map(|i| values[i]).collect())
}

pub fn spectrum_statistics(spec: &Spectrum, tol_imag: f64) -> SpectrumStats {
    eigenvalue_statistics(&spec.eigenvalues, tol_imag)
}

/// [`spectrum_statistics`] on a bare list of eigenvalues.
pub fn eigenvalue_statistics(values: &[C64], tol_imag: f64) -> SpectrumStats {
    let n_complex = values.iter().filter(|z| z.im.abs() > tol_imag).count();
    SpectrumStats {
        n_real: values.len() - n_complex,
        n_complex,
        max_abs_imag: values.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
    }
}

/// Total order on eigenvalues: real part, then imaginary part.
pub fn compare_eigenvalues(a: &C64, b: &C64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn check_input(h: &ComplexMatrix) -> Result<(), EigenError> {
    if h.dim() == 0 {
        return Err(EigenError::Empty);
    }
    if !h.is_finite() {
        return Err(EigenError::NonFinite);
    }
    Ok(())
}

fn sorted_order(values: &[C64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| compare_eigenvalues(&values[i], &values[j]).then(i.cmp(&j)));
    order
}

/// Unit 2-norm, largest-magnitude component made real and positive.
fn normalize_with_phase(v: &mut [C64]) {
    let norm = vec_norm(v);
    if norm == 0.0 {
        return;
    }
    let mut best = 0;
    let mut best_abs = -1.0;
    for (i, z) in v.iter().enumerate() {
        // strict comparison keeps the first index among equal magnitudes
        let a = z.norm();
        if a > best_abs * (1.0 + 1e-12) {
            best = i;
            best_abs = a;
        }
    }
    let phase = v[best].conj() / (best_abs * norm);
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[best] = C64::new(v[best].norm(), 0.0);
}

fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity `D⁻¹ H D` with power-of-two entries equalising row
/// and column norms. Returns the scaled matrix and `diag(D)`.
fn balance(h: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>) {
    const RADIX: f64 = 2.0;
    const RADIX2: f64 = RADIX * RADIX;
    let n = h.dim();
    let mut a = h.clone();
    let mut d = vec![1.0; n];
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(a[(j, i)]);
                    r += abs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX2;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX2;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                d[i] *= f;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
    (a, d)
}

/// Householder reduction of `a` to upper Hessenberg form in place.
/// Returns the accumulated unitary `Q` (with `A_in = Q H Q†`) when asked,
/// otherwise the identity.
fn hessenberg(a: &mut ComplexMatrix, accumulate: bool) -> ComplexMatrix {
    let n = a.dim();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return q;
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        let alpha_norm: f64 = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let tail: f64 = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * alpha_norm;
        for i in 0..n {
            v[i] = if i <= k { ZERO } else { a[(i, k)] };
        }
        v[k + 1] -= alpha;
        let vn = vec_norm(&v[k + 1..]);
        for vi in v[k + 1..].iter_mut() {
            *vi /= vn;
        }
        // A ← (I − 2vv†) A
        for j in k..n {
            let s: C64 = (k + 1..n).map(|i| v[i].conj() * a[(i, j)]).sum();
            let s2 = s * 2.0;
            for i in k + 1..n {
                let vi = v[i];
                a[(i, j)] -= vi * s2;
            }
        }
        // A ← A (I − 2vv†)
        for i in 0..n {
            let s: C64 = (k + 1..n).map(|j| a[(i, j)] * v[j]).sum();
            let s2 = s * 2.0;
            for j in k + 1..n {
                let vj = v[j].conj();
                a[(i, j)] -= s2 * vj;
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
        if accumulate {
            for i in 0..n {
                let s: C64 = (k + 1..n).map(|j| q[(i, j)] * v[j]).sum();
                let s2 = s * 2.0;
                for j in k + 1..n {
                    let vj = v[j].conj();
                    q[(i, j)] -= s2 * vj;
                }
            }
        }
    }
    q
}

/// Rotation `G = [[c, s], [−s̄, c]]` with real `c` such that `G·(x, y)ᵀ = (r, 0)ᵀ`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Reduces an upper Hessenberg matrix to upper triangular Schur form.
/// When `z` is given the full triangle is maintained and rotations are
/// accumulated into `z`; otherwise only the active window is updated.
fn schur(h: &mut ComplexMatrix, mut z: Option<&mut ComplexMatrix>) -> Result<(), EigenError> {
    let n = h.dim();
    let full = z.is_some();
    if n == 1 {
        return Ok(());
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    let budget = ITERATIONS_PER_DIM * n;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            if sub <= EPS * (h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm()) || sub < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > budget {
            return Err(EigenError::NoConvergence {
                index: hi,
                iterations: iter - 1,
            });
        }

        let mu = if iter.is_multiple_of(10) {
            // exceptional shift to break cycles
            let e = h[(hi, hi - 1)].norm() + if hi >= 2 { h[(hi - 1, hi - 2)].norm() } else { 0.0 };
            h[(hi, hi)] + C64::new(0.75 * e, 0.5 * e)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        let col_end = if full { n } else { hi + 1 };
        let row_start = if full { 0 } else { lo };
        let mut x = h[(lo, lo)] - mu;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            let (c, s) = givens(x, y);
            let first_col = if k > lo { k - 1 } else { lo };
            for j in first_col..col_end {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + s * b;
                h[(k + 1, j)] = -s.conj() * a + b * c;
            }
            let last_row = (k + 2).min(hi);
            for i in row_start..=last_row {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + s.conj() * b;
                h[(i, k + 1)] = -s * a + b * c;
            }
            if let Some(zm) = z.as_deref_mut() {
                for i in 0..n {
                    let a = zm[(i, k)];
                    let b = zm[(i, k + 1)];
                    zm[(i, k)] = a * c + s.conj() * b;
                    zm[(i, k + 1)] = -s * a + b * c;
                }
            }
            if k > lo {
                h[(k + 1, k - 1)] = ZERO;
            }
            if k + 1 < hi {
                x = h[(k + 1, k)];
                y = h[(k + 2, k)];
            }
        }
    }
    Ok(())
}

/// Eigenvectors of an upper triangular matrix, one per column.
fn triangular_eigenvectors(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.dim();
    let norm = t.frobenius_norm();
    let smin = (EPS * norm).max(f64::MIN_POSITIVE * 1e3);
    let mut x = ComplexMatrix::zeros(n);
    let mut col = vec![ZERO; n];
    for k in 0..n {
        let lambda = t[(k, k)];
        col.iter_mut().for_each(|c| *c = ZERO);
        col[k] = ONE;
        for j in (0..k).rev() {
            let s: C64 = (j + 1..=k).map(|m| t[(j, m)] * col[m]).sum();
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < smin {
                denom = C64::new(smin, 0.0);
            }
            col[j] = -s / denom;
            // keep entries bounded when near-degenerate eigenvalues amplify them
            let big = col[j].norm();
            if big > 1e100 {
                for c in col[j..=k].iter_mut() {
                    *c /= big;
                }
            }
        }
        for i in 0..=k {
            x[(i, k)] = col[i];
        }
    }
    x
}
