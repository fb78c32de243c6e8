use serde::{Deserialize, Serialize};

use super::Network;

const OFF_DIAGONAL_TOLERANCE: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Laplacian spectrum and the three parameters the mixing bounds depend on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    /// Ascending; `0 = λ₁ ≤ … ≤ λ_d ≤ 2`.
    pub eigenvalues: Vec<f64>,
    /// Spectral gap `λ₂` (connectivity).
    pub lambda: f64,
    /// `max(|1 − λ₂|, |1 − λ_d|)` (random-walk mixing).
    pub gamma: f64,
    /// `min_i c_i` (accessibility).
    pub beta: f64,
}

impl SpectralSummary {
    pub(super) fn compute(network: &Network) -> Self {
        let d = network.d();
        let c = network.degrees();
        // I − D^{-1/2} C D^{-1/2} is similar to Δ and symmetric
        let mut sym = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                let off = network.weight(i, j) / (c[i] * c[j]).sqrt();
                sym[i * d + j] = if i == j { 1.0 - off } else { -off };
            }
        }
        let eigenvalues = symmetric_eigenvalues(sym, d);
        let lambda = eigenvalues[1];
        let top = eigenvalues[d - 1];
        Self {
            lambda,
            gamma: (1.0 - lambda).abs().max((1.0 - top).abs()),
            beta: c.iter().copied().fold(f64::INFINITY, f64::min),
            eigenvalues,
        }
    }
}

/// Eigenvalues of a symmetric row-major `d × d` matrix by cyclic Jacobi
/// rotations, sorted ascending. Iterates until the off-diagonal Frobenius
/// norm drops below 1e-14.
pub fn symmetric_eigenvalues(mut a: Vec<f64>, d: usize) -> Vec<f64> {
    assert_eq!(a.len(), d * d, "matrix must be d × d");
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a, d) < OFF_DIAGONAL_TOLERANCE {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[p * d + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * d + q] - a[p * d + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, d, p, q, c, s);
            }
        }
    }
    let mut eig: Vec<f64> = (0..d).map(|i| a[i * d + i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// `A ← Jᵀ A J` for the Givens rotation in the `(p, q)` plane.
fn rotate(a: &mut [f64], d: usize, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..d {
        let akp = a[k * d + p];
        let akq = a[k * d + q];
        a[k * d + p] = c * akp - s * akq;
        a[k * d + q] = s * akp + c * akq;
    }
    for k in 0..d {
        let apk = a[p * d + k];
        let aqk = a[q * d + k];
        a[p * d + k] = c * apk - s * aqk;
        a[q * d + k] = s * apk + c * aqk;
    }
}

fn off_diagonal_norm(a: &[f64], d: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += a[i * d + j] * a[i * d + j];
            }
        }
    }
    sum.sqrt()
}
