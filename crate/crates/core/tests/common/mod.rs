//! Test-only reference computations, independent of the library's solver.

#![allow(dead_code)]

use pt_ssh_lab::{ComplexMatrix, C64};

/// Characteristic polynomial coefficients `c[0] + c[1] λ + … + c[n] λⁿ`
/// (monic) by the Faddeev–LeVerrier recursion.
pub fn characteristic_polynomial(a: &ComplexMatrix) -> Vec<C64> {
    let n = a.dim();
    let mut c = vec![C64::new(0.0, 0.0); n + 1];
    c[n] = C64::new(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(n);
    for k in 1..=n {
        let mut next = a * &m;
        for i in 0..n {
            next[(i, i)] += c[n - k + 1];
        }
        m = next;
        c[n - k] = -(a * &m).trace() / k as f64;
    }
    c
}

/// All roots of a monic polynomial by Durand–Kerner iteration.
pub fn polynomial_roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let radius = 1.0 + coeffs[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..n).map(|k| seed.powu(k as u32) * radius / seed.norm().powi(k as i32)).collect();
    let eval = |z: C64| coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c);
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    roots
}

/// Reference eigenvalues for small matrices (dimension ≤ 6).
pub fn oracle_eigenvalues(a: &ComplexMatrix) -> Vec<C64> {
    assert!(a.dim() <= 6, "oracle is meant for small matrices");
    polynomial_roots(&characteristic_polynomial(a))
}

/// Largest distance from any entry of `a` to its nearest unused entry of `b`.
pub fn matching_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Distance from `target` to the nearest entry of `values`.
pub fn nearest(values: &[C64], target: C64) -> f64 {
    values.iter().map(|e| (e - target).norm()).fold(f64::INFINITY, f64::min)
}
