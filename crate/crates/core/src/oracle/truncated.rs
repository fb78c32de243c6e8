//! Truncated-normal reference values by direct integration of
//! `exp(−z²/2)` over the standardized window, with the mass taken from the
//! same quadrature.

use serde::Serialize;

use super::quadrature::adaptive;
use crate::error::{domain, Result};

/// Beyond forty standard deviations the Gaussian weight is below `1e-347`.
const Z_CUTOFF: f64 = 40.0;
const TOL: f64 = 1e-14;

fn weight(z: f64) -> f64 {
    (-0.5 * z * z).exp()
}

fn check(sigma: f64, p: f64) -> Result<(f64, f64)> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(domain("sigma", sigma, "(0, ∞)"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(domain("p", p, "[0, 1]"));
    }
    Ok((
        (-p / sigma).max(-Z_CUTOFF),
        ((1.0 - p) / sigma).min(Z_CUTOFF),
    ))
}

/// `∫ f` over `[lo, hi]`, split at zero where the weight peaks.
fn split_integral<const K: usize>(
    f: &impl Fn(f64) -> [f64; K],
    lo: f64,
    hi: f64,
) -> Result<[f64; K]> {
    let mut out = [0.0; K];
    if lo < 0.0 {
        let l = adaptive(f, lo, hi.min(0.0), TOL)?;
        out.iter_mut().zip(l).for_each(|(o, v)| *o += v);
    }
    if hi > 0.0 {
        let r = adaptive(f, lo.max(0.0), hi, TOL)?;
        out.iter_mut().zip(r).for_each(|(o, v)| *o += v);
    }
    Ok(out)
}

/// Mean and variance of `ε(σ², p)` by quadrature.
pub fn quad_moments(sigma: f64, p: f64) -> Result<(f64, f64)> {
    let (lo, hi) = check(sigma, p)?;
    let [m0, m1] = split_integral(
        &|z| {
            let w = weight(z);
            [w, z * w]
        },
        lo,
        hi,
    )?;
    let center = m1 / m0;
    let [m2] = split_integral(&|z| [(z - center) * (z - center) * weight(z)], lo, hi)?;
    Ok((sigma * center, sigma * sigma * m2 / m0))
}

/// `P(p + ε ≤ x)` by quadrature.
pub fn quad_cdf(sigma: f64, p: f64, x: f64) -> Result<f64> {
    let (lo, hi) = check(sigma, p)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("x", x, "[0, 1]"));
    }
    let [mass] = split_integral(&|z| [weight(z)], lo, hi)?;
    let top = ((x - p) / sigma).clamp(lo, hi);
    let [below] = split_integral(&|z| [weight(z)], lo, top)?;
    Ok((below / mass).clamp(0.0, 1.0))
}

/// Inverse of [`quad_cdf`] by bisection on `[0, 1]`.
pub fn bisection_quantile(sigma: f64, p: f64, u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(domain("u", u, "[0, 1]"));
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if quad_cdf(sigma, p, mid)? < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `min Var(ε(σ², p))/σ²` over `σ ∈ (0, 1]`, `p ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoEstimate {
    pub rho: f64,
    /// Location of the minimum.
    pub sigma: f64,
    pub p: f64,
    /// Coarse grid size per axis.
    pub grid: usize,
    /// Final half-width of the refined cell.
    pub resolution: f64,
}

fn variance_ratio(sigma: f64, p: f64) -> Result<f64> {
    Ok(quad_moments(sigma, p)?.1 / (sigma * sigma))
}

/// Coarse `grid × grid` scan then `refinements` rounds of an 11 × 11 zoom
/// around the running minimum, shrinking the cell fivefold each round.
pub fn estimate_rho_with(grid: usize, refinements: usize) -> Result<RhoEstimate> {
    let grid = grid.max(2);
    let mut best = (f64::INFINITY, 1.0, 0.0);
    for j in 1..=grid {
        let sigma = j as f64 / grid as f64;
        for i in 0..=grid {
            let p = i as f64 / grid as f64;
            let r = variance_ratio(sigma, p)?;
            if r < best.0 {
                best = (r, sigma, p);
            }
        }
    }
    let mut half = 1.0 / grid as f64;
    for _ in 0..refinements {
        let (_, s0, p0) = best;
        for j in 0..=10 {
            let sigma = (s0 - half + 0.2 * half * j as f64).clamp(half * 1e-3, 1.0);
            for i in 0..=10 {
                let p = (p0 - half + 0.2 * half * i as f64).clamp(0.0, 1.0);
                let r = variance_ratio(sigma, p)?;
                if r < best.0 {
                    best = (r, sigma, p);
                }
            }
        }
        half /= 5.0;
    }
    Ok(RhoEstimate {
        rho: best.0,
        sigma: best.1,
        p: best.2,
        grid,
        resolution: half,
    })
}

pub fn estimate_rho() -> Result<RhoEstimate> {
    estimate_rho_with(20, 6)
}
