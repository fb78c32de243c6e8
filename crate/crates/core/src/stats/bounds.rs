//! The explicit inequalities the experiments are checked against.

/// `5d/(2λA²)`: the long-run Dirichlet energy ceiling.
pub fn energy_bound(d: usize, lambda: f64, a: f64) -> f64 {
    5.0 * d as f64 / (2.0 * lambda * a * a)
}

/// `27kγ/(λA²)`: growth envelope for `E(p̄(k) − ½)²` from the centre.
pub fn barycenter_envelope(k: u64, gamma: f64, lambda: f64, a: f64) -> f64 {
    27.0 * k as f64 * gamma / (lambda * a * a)
}

/// `4dA²/ρ`: ceiling on the mean of `T_δ`.
pub fn hitting_bound(d: usize, a: f64, rho: f64) -> f64 {
    4.0 * d as f64 * a * a / rho
}

/// `13k·exp(−λβδA/(2d))`: probability ceiling for a δ-deviation within `k`
/// steps of a diagonal start.
pub fn deviation_bound(k: u64, lambda: f64, beta: f64, delta: f64, a: f64, d: usize) -> f64 {
    13.0 * k as f64 * (-lambda * beta * delta * a / (2.0 * d as f64)).exp()
}

/// `H = ρ/(2dA²) − (2√2/(A√d))·exp(−δ²βA²)`: the drift floor of `p̄²`.
pub fn drift_floor(rho: f64, d: usize, a: f64, delta: f64, beta: f64) -> f64 {
    let d = d as f64;
    rho / (2.0 * d * a * a)
        - 2.0 * std::f64::consts::SQRT_2 / (a * d.sqrt()) * (-delta * delta * beta * a * a).exp()
}

/// Smallest `A` with `A² ≥ √e·d/(2λβδ³)`, above which the stationary
/// barycenter is anti-concentrated.
pub fn anti_concentration_scale(d: usize, lambda: f64, beta: f64, delta: f64) -> f64 {
    (0.5_f64.exp() * d as f64 / (2.0 * lambda * beta * delta.powi(3))).sqrt()
}

/// `(1 − 2s)/(1 − 2δ)²`: ceiling on the stationary mass of `p̄ ∈ [s, 1 − s]`.
pub fn tail_mass_bound(s: f64, delta: f64) -> f64 {
    (1.0 - 2.0 * s) / ((1.0 - 2.0 * delta) * (1.0 - 2.0 * delta))
}
