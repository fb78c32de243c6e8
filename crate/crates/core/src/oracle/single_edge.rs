//! Stationary laws for the single edge (`d = 2`, `c_01 = ½`) by quadrature.
//!
//! With `m = (p₀ + p₁)/2` and `x = p₀ − p₁` the density is proportional to
//! `exp(−A²x²/2)` on `|x| ≤ 2·min(m, 1 − m)`, so the barycenter has density
//! `g(min(m, 1 − m))` with `g(s) = ∫_{−2s}^{2s} exp(−A²x²/2) dx`, and the
//! energy `x²/2` is governed by the density `(1 − |x|)exp(−A²x²/2)` of `x`.

use super::quadrature::{adaptive, rule};
use crate::error::{domain, Error, Result};

const CELLS: usize = 4096;
const TOL: f64 = 1e-15;

#[derive(Debug, Clone)]
pub struct SingleEdgeOracle {
    a: f64,
    /// Unnormalized barycenter CDF at `k/CELLS`.
    table: Vec<f64>,
    /// `E|m − ½|`.
    mean_abs_deviation: f64,
    /// `∫_{−1}^{1} (1 − |x|) exp(−A²x²/2) dx`.
    energy_mass: f64,
}

impl SingleEdgeOracle {
    pub fn new(a: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(domain("A", a, "[0, ∞)"));
        }
        let a2 = a * a;
        let inner = |s: f64| -> Result<f64> {
            if s <= 0.0 {
                return Ok(0.0);
            }
            Ok(2.0 * adaptive(&|x| [(-0.5 * a2 * x * x).exp()], 0.0, 2.0 * s, TOL)?[0])
        };
        let gl = rule();
        let h = 1.0 / CELLS as f64;
        let mut table = Vec::with_capacity(CELLS + 1);
        table.push(0.0);
        let mut total = 0.0;
        let mut abs_moment = 0.0;
        for k in 0..CELLS {
            let [mass, moment] = gl.integrate(
                &|m| {
                    // a failed inner integral poisons the table with NaN
                    let g = inner(m.min(1.0 - m)).unwrap_or(f64::NAN);
                    [g, (m - 0.5).abs() * g]
                },
                k as f64 * h,
                (k + 1) as f64 * h,
            );
            total += mass;
            abs_moment += moment;
            table.push(total);
        }
        if !total.is_finite() {
            return Err(Error::Oracle { lo: 0.0, hi: 1.0 });
        }
        let [energy_mass] = adaptive(
            &|x: f64| [(1.0 - x) * (-0.5 * a2 * x * x).exp()],
            0.0,
            1.0,
            TOL,
        )?;
        Ok(Self {
            a,
            mean_abs_deviation: abs_moment / total,
            table,
            energy_mass: 2.0 * energy_mass,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `P(p̄ ≤ s)`, interpolated from a 4096-cell table.
    pub fn barycenter_cdf(&self, s: f64) -> f64 {
        let total = self.table[CELLS];
        let s = s.clamp(0.0, 1.0) * CELLS as f64;
        let k = (s.floor() as usize).min(CELLS - 1);
        let frac = s - k as f64;
        (self.table[k] + frac * (self.table[k + 1] - self.table[k])) / total
    }

    /// `E|p̄ − ½|`.
    pub fn mean_abs_deviation(&self) -> f64 {
        self.mean_abs_deviation
    }

    /// `P(⟨p, Δp⟩ ≤ e)`.
    pub fn energy_cdf(&self, e: f64) -> Result<f64> {
        if e <= 0.0 {
            return Ok(0.0);
        }
        let top = (2.0 * e).sqrt().min(1.0);
        let a2 = self.a * self.a;
        let [part] = adaptive(
            &|x: f64| [(1.0 - x) * (-0.5 * a2 * x * x).exp()],
            0.0,
            top,
            TOL,
        )?;
        Ok((2.0 * part / self.energy_mass).min(1.0))
    }
}
