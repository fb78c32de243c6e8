//! Laplacian spectra of small networks from the characteristic polynomial.
//!
//! The polynomial of `S = I − D^{-1/2} C D^{-1/2}` comes from the
//! Faddeev–LeVerrier recursion. Its roots are real, so they interlace with
//! those of its derivative: roots of `p^{(n)}` bracket the roots of
//! `p^{(n−1)}`, recursively down from the linear derivative. Brackets are
//! refined by bisection; a repeated root shows up as a critical point where
//! the polynomial vanishes to rounding, and is taken as is. This avoids the
//! closed-form cubic and quartic formulas, which lose about two thirds of the
//! digits at a triple root (the complete graph on four vertices has one).

use crate::error::{Error, Result};
use crate::network::Network;

pub const MAX_DIMENSION: usize = 8;

/// Monic characteristic polynomial coefficients, highest degree first:
/// `det(xI − S) = Σ_k coeffs[k] x^{n−k}`.
pub fn characteristic_polynomial(s: &[f64], n: usize) -> Vec<f64> {
    let mut coeffs = vec![1.0];
    let mut m = vec![0.0; n * n];
    let mut prev_c = 1.0;
    for k in 1..=n {
        // M_k = S·M_{k−1} + c_{k−1} I,  c_k = −tr(S·M_k)/k
        let mut next = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += s[i * n + l] * m[l * n + j];
                }
                next[i * n + j] = acc;
            }
            next[i * n + i] += prev_c;
        }
        m = next;
        let mut trace = 0.0;
        for i in 0..n {
            for l in 0..n {
                trace += s[i * n + l] * m[l * n + i];
            }
        }
        prev_c = -trace / k as f64;
        coeffs.push(prev_c);
    }
    coeffs
}

fn eval(coeffs: &[f64], x: f64) -> (f64, f64) {
    // value and a rounding-scale bound Σ|a_k||x|^k
    let mut v = 0.0;
    let mut scale = 0.0;
    for &c in coeffs {
        v = v * x + c;
        scale = scale * x.abs() + c.abs();
    }
    (v, scale)
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len() - 1;
    coeffs[..n]
        .iter()
        .enumerate()
        .map(|(k, &c)| c * (n - k) as f64)
        .collect()
}

/// Real roots (with multiplicity) of a real-rooted polynomial whose roots
/// lie in `[lo, hi]`.
pub fn real_roots(coeffs: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    if degree == 1 {
        return vec![-coeffs[1] / coeffs[0]];
    }
    let critical = real_roots(&derivative(coeffs), lo, hi);
    let mut fences = Vec::with_capacity(degree + 1);
    fences.push(lo);
    fences.extend(critical.iter().map(|c| c.clamp(lo, hi)));
    fences.push(hi);
    fences
        .windows(2)
        .map(|w| bracketed_root(coeffs, w[0], w[1]))
        .collect()
}

fn bracketed_root(coeffs: &[f64], a: f64, b: f64) -> f64 {
    let negligible = |x: f64| {
        let (v, scale) = eval(coeffs, x);
        v.abs() <= 64.0 * f64::EPSILON * scale
    };
    if negligible(a) {
        return a;
    }
    if negligible(b) {
        return b;
    }
    let (mut a, mut b) = (a, b);
    let (fa, fb) = (eval(coeffs, a).0, eval(coeffs, b).0);
    if fa.signum() == fb.signum() {
        // a double root squeezed between rounding noise
        return if fa.abs() < fb.abs() { a } else { b };
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = eval(coeffs, mid).0;
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Laplacian eigenvalues of a connected network with `d ≤ 8`, ascending.
pub fn small_d_eigencheck(network: &Network) -> Result<Vec<f64>> {
    let d = network.d();
    if d > MAX_DIMENSION {
        return Err(Error::Validation(format!(
            "characteristic-polynomial check supports d ≤ {MAX_DIMENSION}, got {d}"
        )));
    }
    if !network.is_connected() {
        return Err(Error::Disconnected);
    }
    let weights = network.weights();
    let degree: Vec<f64> = (0..d)
        .map(|i| weights[i * d..(i + 1) * d].iter().sum())
        .collect();
    let mut s = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            let off = weights[i * d + j] / (degree[i] * degree[j]).sqrt();
            s[i * d + j] = if i == j { 1.0 - off } else { -off };
        }
    }
    let coeffs = characteristic_polynomial(&s, d);
    let mut roots = real_roots(&coeffs, -0.5, 2.5);
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}
