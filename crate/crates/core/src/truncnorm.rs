//! The law of `p + ε(σ², p)`: a normal with mean `p` and standard deviation
//! `σ`, conditioned to `[0, 1]`.
//!
//! In standard units the window is `[−a, b]` with `a = p/σ`, `b = (1 − p)/σ`.
//! Because `p ∈ [0,1]` the window always contains zero, so its mass splits
//! into two non-negative halves `Φ(0) − Φ(−a)` and `Φ(b) − Φ(0)` that are
//! summed without cancellation. The quantile inverts on whichever side of
//! zero the target falls, always through a lower-tail probability ≤ ½, which
//! keeps the inversion accurate near both walls and makes the reflection
//! `(p, u) ↦ (1 − p, 1 − u)` an exact symmetry of the algorithm.
//!
//! `σ = ∞` is the uniform law on `[0,1]`, used for isolated vertices.

use crate::error::{domain, Result};
use crate::normal;

/// Above this scale the closed-form variance loses digits to cancellation
/// (`1 − …` with the remainder of order `1/(12σ²)`), so moments switch to a
/// power series of the Gaussian weight in `1/(2σ²)`.
const SERIES_SIGMA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedNormal {
    sigma: f64,
    p: f64,
}

impl TruncatedNormal {
    pub fn new(sigma: f64, p: f64) -> Result<Self> {
        if sigma.is_nan() || sigma <= 0.0 {
            return Err(domain("sigma", sigma, "(0, ∞]"));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(domain("p", p, "[0, 1]"));
        }
        Ok(Self { sigma, p })
    }

    /// The `σ = ∞` convention: uniform on `[0,1]` whatever `p` is.
    pub fn uniform(p: f64) -> Result<Self> {
        Self::new(f64::INFINITY, p)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn is_uniform(&self) -> bool {
        self.sigma.is_infinite()
    }

    /// Standard-normal mass of the window, `F((1−p)/σ) + F(p/σ) − 1`; zero in
    /// the uniform case.
    pub fn mass(&self) -> f64 {
        if self.is_uniform() {
            return 0.0;
        }
        let (a, b) = self.window();
        normal::half_mass(a) + normal::half_mass(b)
    }

    /// Density of `p + ε` at `x ∈ [0,1]`.
    pub fn pdf(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        if self.is_uniform() {
            return 1.0;
        }
        normal::pdf((x - self.p) / self.sigma) / (self.sigma * self.mass())
    }

    /// `E ε(σ², p)`.
    pub fn mean(&self) -> f64 {
        if self.is_uniform() {
            return 0.5 - self.p;
        }
        if self.sigma > SERIES_SIGMA {
            return series_moments(self.sigma, self.p).0;
        }
        let (a, b) = self.window();
        self.sigma * (normal::pdf(a) - normal::pdf(b)) / self.mass()
    }

    /// `Var ε(σ², p)`.
    pub fn variance(&self) -> f64 {
        if self.is_uniform() {
            return 1.0 / 12.0;
        }
        if self.sigma > SERIES_SIGMA {
            return series_moments(self.sigma, self.p).1;
        }
        let (a, b) = self.window();
        let mass = self.mass();
        let (fa, fb) = (normal::pdf(a), normal::pdf(b));
        let shift = (fa - fb) / mass;
        let ratio = 1.0 - (a * fa + b * fb) / mass - shift * shift;
        self.sigma * self.sigma * ratio
    }

    /// `P(p + ε ≤ x)` for `x ∈ [0,1]`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(domain("x", x, "[0, 1]"));
        }
        if self.is_uniform() {
            return Ok(x);
        }
        let (a, b) = self.window();
        let z = (x - self.p) / self.sigma;
        let mass = self.mass();
        let value = if z <= 0.0 {
            // Φ(z) − Φ(−a), both lower tails
            (normal::sf(-z) - normal::sf(a)) / mass
        } else {
            1.0 - (normal::sf(z) - normal::sf(b)) / mass
        };
        Ok(value.clamp(0.0, 1.0))
    }

    /// `Γ(p, u)`, the inverse distribution function, for `u ∈ [0,1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        quantile_at(self.sigma, self.p, u)
    }

    /// Inverse-CDF draw from a uniform variate. Sharing `u` across walkers
    /// is what makes the grand coupling order preserving.
    pub fn sample(&self, u: f64) -> f64 {
        self.quantile(u)
    }

    fn window(&self) -> (f64, f64) {
        (self.p / self.sigma, (1.0 - self.p) / self.sigma)
    }
}

/// `Γ(p, u)` without constructing a [`TruncatedNormal`]; inputs are trusted.
/// This is the sampler's hot path.
#[inline]
pub fn quantile_at(sigma: f64, p: f64, u: f64) -> f64 {
    raw_quantile(sigma, p, u).clamp(0.0, 1.0)
}

#[inline]
fn raw_quantile(sigma: f64, p: f64, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    if sigma.is_infinite() {
        return u;
    }
    let a = p / sigma;
    let b = (1.0 - p) / sigma;
    let left = normal::half_mass(a);
    let right = normal::half_mass(b);
    let mass = left + right;
    let below = u * mass;
    let x = if below <= left {
        // Φ(x) = Φ(−a) + u·mass, x ≤ 0
        normal::quantile(normal::sf(a) + below)
    } else {
        // 1 − Φ(x) = 1 − Φ(b) + (1 − u)·mass, x ≥ 0
        -normal::quantile(normal::sf(b) + (1.0 - u) * mass)
    };
    p + sigma * x.clamp(-a, b)
}

/// Mean and variance of `ε` from the series
/// `∫ xᵏ e^{−κx²} dx = Σₙ (−κ)ⁿ/n! ∫ x^{k+2n} dx` over `[−p, 1−p]`, `κ = 1/(2σ²)`.
fn series_moments(sigma: f64, p: f64) -> (f64, f64) {
    let kappa = 0.5 / (sigma * sigma);
    let (lo, hi) = (-p, 1.0 - p);
    let power_integral = |m: i32| (hi.powi(m + 1) - lo.powi(m + 1)) / f64::from(m + 1);
    let mut sums = [0.0_f64; 3];
    let mut coeff = 1.0;
    for n in 0..200 {
        let mut largest = 0.0_f64;
        for (k, sum) in sums.iter_mut().enumerate() {
            let term = coeff * power_integral(k as i32 + 2 * n);
            *sum += term;
            largest = largest.max(term.abs());
        }
        if largest < 1e-20 {
            break;
        }
        coeff *= -kappa / f64::from(n + 1);
    }
    let mean = sums[1] / sums[0];
    (mean, sums[2] / sums[0] - mean * mean)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tn(sigma: f64, p: f64) -> TruncatedNormal {
        TruncatedNormal::new(sigma, p).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(TruncatedNormal::new(0.0, 0.5).is_err());
        assert!(TruncatedNormal::new(-1.0, 0.5).is_err());
        assert!(TruncatedNormal::new(f64::NAN, 0.5).is_err());
        assert!(TruncatedNormal::new(0.1, 1.5).is_err());
        assert!(TruncatedNormal::new(0.1, -0.1).is_err());
        assert!(tn(0.1, 0.5).cdf(1.2).is_err());
        assert!(tn(0.1, 0.5).cdf(-0.2).is_err());
    }

    #[test]
    fn symmetric_center() {
        for sigma in [0.001, 0.1, 1.0, 3.0] {
            let t = tn(sigma, 0.5);
            assert!(t.mean().abs() < 1e-15);
            assert!((t.cdf(0.5).unwrap() - 0.5).abs() < 1e-15);
            assert!((t.quantile(0.5) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn uniform_convention() {
        let t = TruncatedNormal::uniform(0.3).unwrap();
        assert!((t.mean() - 0.2).abs() < 1e-15);
        assert_eq!(t.variance(), 1.0 / 12.0);
        for x in [0.0, 0.25, 0.9, 1.0] {
            assert_eq!(t.cdf(x).unwrap(), x);
            assert_eq!(t.quantile(x), x);
        }
    }

    #[test]
    fn narrow_interior_variance_is_sigma_squared() {
        let v = tn(0.01, 0.5).variance();
        assert!((v - 1e-4).abs() < 1e-8, "{v}");
    }

    #[test]
    fn endpoints_map_to_walls() {
        for (sigma, p) in [(0.01, 0.0), (0.01, 1.0), (0.2, 0.3), (5.0, 0.9)] {
            let t = tn(sigma, p);
            assert_eq!(t.quantile(0.0), 0.0);
            assert_eq!(t.quantile(1.0), 1.0);
            assert!(t.quantile(1e-16) <= t.quantile(1.0 - 1e-16));
            assert_eq!(t.cdf(0.0).unwrap(), 0.0);
            assert!((t.cdf(1.0).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn sample_is_deterministic() {
        let t = tn(0.05, 0.2);
        assert_eq!(t.sample(0.123).to_bits(), t.sample(0.123).to_bits());
        assert_eq!(t.sample(0.123), t.quantile(0.123));
    }

    #[test]
    fn clamping_is_cosmetic() {
        // raw quantile never leaves [0,1] by more than rounding
        for &sigma in &[0.001, 0.005, 0.05, 0.3, 1.0, 4.0] {
            for i in 0..=100 {
                let p = i as f64 / 100.0;
                for j in 0..=200 {
                    let u = j as f64 / 200.0;
                    let raw = raw_quantile(sigma, p, u);
                    let excess = (-raw).max(raw - 1.0).max(0.0);
                    assert!(excess < 1e-12, "sigma={sigma} p={p} u={u} raw={raw}");
                }
            }
        }
    }

    #[test]
    fn series_matches_closed_form_at_switch() {
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            let closed = tn(SERIES_SIGMA, p);
            let (m, v) = series_moments(SERIES_SIGMA, p);
            assert!((closed.mean() - m).abs() < 1e-13, "p={p}");
            assert!((closed.variance() - v).abs() < 1e-13, "p={p}");
        }
    }

    #[test]
    fn large_sigma_approaches_uniform() {
        let t = tn(1e6, 0.3);
        assert!((t.mean() - 0.2).abs() < 1e-9);
        assert!((t.variance() - 1.0 / 12.0).abs() < 1e-9);
    }
}
