//! Gauss–Legendre rules and a bisecting adaptive integrator.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// The `n`-point rule on `[−1, 1]`, nodes found by Newton's method on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_a^b f` for a vector-valued integrand.
    pub fn integrate<const K: usize>(
        &self,
        f: &impl Fn(f64) -> [f64; K],
        a: f64,
        b: f64,
    ) -> [f64; K] {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = [0.0; K];
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x);
            for k in 0..K {
                acc[k] += w * v[k];
            }
        }
        acc.map(|s| s * half)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// The shared 20-point rule.
pub fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

/// Adaptive integration: a panel is accepted when the rule on the whole and
/// the sum over its halves agree to `tol` in every component.
pub fn adaptive<const K: usize>(
    f: &impl Fn(f64) -> [f64; K],
    a: f64,
    b: f64,
    tol: f64,
) -> Result<[f64; K]> {
    let gl = rule();
    let whole = gl.integrate(f, a, b);
    refine(gl, f, a, b, whole, tol, 0)
}

fn refine<const K: usize>(
    gl: &GaussLegendre,
    f: &impl Fn(f64) -> [f64; K],
    a: f64,
    b: f64,
    whole: [f64; K],
    tol: f64,
    depth: u32,
) -> Result<[f64; K]> {
    let mid = 0.5 * (a + b);
    let left = gl.integrate(f, a, mid);
    let right = gl.integrate(f, mid, b);
    let mut split = [0.0; K];
    let mut err = 0.0_f64;
    for k in 0..K {
        split[k] = left[k] + right[k];
        err = err.max((split[k] - whole[k]).abs());
    }
    if err <= tol {
        return Ok(split);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Oracle { lo: a, hi: b });
    }
    let l = refine(gl, f, a, mid, left, 0.5 * tol, depth + 1)?;
    let r = refine(gl, f, mid, b, right, 0.5 * tol, depth + 1)?;
    let mut out = [0.0; K];
    for k in 0..K {
        out[k] = l[k] + r[k];
    }
    Ok(out)
}
