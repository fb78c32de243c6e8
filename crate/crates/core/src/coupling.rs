//! The grand coupling: walkers driven by the same [`StepNoise`].
//!
//! All walkers update the same coordinate with the same uniform, each through
//! its own truncated normal. Because `Γ(p, u)` is non-decreasing and
//! 1-Lipschitz in `p`, coordinatewise order is preserved and the sup-norm gap
//! between any two walkers never grows.
//!
//! In floating point both statements hold only up to rounding: two walkers a
//! few ulps apart can swap, and a gap can grow by an ulp. Violations are
//! counted exactly and their size is reported so callers can compare it
//! against [`ROUNDING_SLACK`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gibbs::{ChainState, NoiseStream, SamplerParams, StepNoise};
use crate::stats::barycenter_unchecked;

/// Largest order breach or gap growth attributable to rounding.
pub const ROUNDING_SLACK: f64 = 4.0 * f64::EPSILON;

/// `‖p − q‖_∞`.
pub fn max_gap(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// `p ≤ q` coordinatewise.
pub fn is_below(p: &[f64], q: &[f64]) -> bool {
    p.iter().zip(q).all(|(x, y)| x <= y)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledEnsemble {
    states: Vec<ChainState>,
    /// Tagged pairs `(lower, upper)` whose order is tracked.
    ordered: Vec<(usize, usize)>,
}

impl CoupledEnsemble {
    pub fn new(states: Vec<ChainState>) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::Validation("an ensemble needs at least one walker".into()))?;
        let (d, step) = (first.d(), first.step);
        for s in &states {
            if s.d() != d {
                return Err(Error::Dimension {
                    expected: d,
                    got: s.d(),
                });
            }
            if s.step != step {
                return Err(Error::Validation("walkers must share a step count".into()));
            }
        }
        Ok(Self {
            states,
            ordered: Vec::new(),
        })
    }

    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(
            points
                .into_iter()
                .map(ChainState::new)
                .collect::<Result<_>>()?,
        )
    }

    /// Tags `lower ≤ upper`; fails unless the order already holds.
    pub fn with_order(mut self, lower: usize, upper: usize) -> Result<Self> {
        let n = self.states.len();
        if lower >= n || upper >= n {
            return Err(Error::Validation(format!(
                "walker index out of range for {n} walkers"
            )));
        }
        if !is_below(&self.states[lower].p, &self.states[upper].p) {
            return Err(Error::Validation(format!(
                "walker {lower} is not below walker {upper}"
            )));
        }
        self.ordered.push((lower, upper));
        Ok(self)
    }

    pub fn states(&self) -> &[ChainState] {
        &self.states
    }

    pub fn into_states(self) -> Vec<ChainState> {
        self.states
    }

    pub fn step_count(&self) -> u64 {
        self.states[0].step
    }

    pub fn ordered_pairs(&self) -> &[(usize, usize)] {
        &self.ordered
    }

    /// Updates every walker with the same noise. Returns the number of
    /// tagged pairs whose order broke at the updated coordinate.
    pub fn step(&mut self, params: &SamplerParams, noise: StepNoise) -> Result<usize> {
        self.states[0].check(params)?;
        Ok(self.step_unchecked(params, noise))
    }

    #[inline]
    pub(crate) fn step_unchecked(&mut self, params: &SamplerParams, noise: StepNoise) -> usize {
        for s in &mut self.states {
            params.advance(s, noise);
        }
        let i = noise.index;
        self.ordered
            .iter()
            .filter(|&&(lo, hi)| self.states[lo].p[i] > self.states[hi].p[i])
            .count()
    }

    /// Largest `lower_i − upper_i` over tagged pairs, zero when ordered.
    pub fn worst_breach(&self) -> f64 {
        self.ordered
            .iter()
            .flat_map(|&(lo, hi)| {
                self.states[lo]
                    .p
                    .iter()
                    .zip(&self.states[hi].p)
                    .map(|(x, y)| x - y)
            })
            .fold(0.0, f64::max)
    }

    /// Largest sup-norm gap over all walker pairs.
    pub fn diameter(&self) -> f64 {
        let mut widest = 0.0_f64;
        for (a, p) in self.states.iter().enumerate() {
            for q in &self.states[a + 1..] {
                widest = widest.max(max_gap(&p.p, &q.p));
            }
        }
        widest
    }
}

/// One coupled step as a pure function.
pub fn coupled_step(
    ensemble: &CoupledEnsemble,
    params: &SamplerParams,
    noise: StepNoise,
) -> Result<CoupledEnsemble> {
    let mut next = ensemble.clone();
    next.step(params, noise)?;
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichOptions {
    /// Record the gap every this many steps (and at the last step).
    pub record_every: u64,
    /// Threshold for `T′_δ` and δ-coalescence.
    pub delta: Option<f64>,
    /// Stop as soon as `T′_δ` is observed.
    pub stop_at_hit: bool,
}

impl SandwichOptions {
    pub fn for_steps(k: u64) -> Self {
        Self {
            record_every: crate::stats::record_cadence(k),
            delta: None,
            stop_at_hit: false,
        }
    }
}

/// Summary of a run of the walkers started at `0`, `p₀` and `1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichRecord {
    pub steps: Vec<u64>,
    /// `‖p⁽¹⁾(t) − p⁽⁰⁾(t)‖_∞` at each recorded step.
    pub gaps: Vec<f64>,
    /// Barycenter of the `p₀` walker at each recorded step.
    pub barycenters: Vec<f64>,
    /// Steps at which `0-walker ≤ p₀-walker ≤ 1-walker` failed at the
    /// updated coordinate.
    pub order_violations: u64,
    /// Largest amount by which a lower walker overtook an upper one.
    pub worst_order_breach: f64,
    /// Steps at which the sup-norm gap grew.
    pub contraction_violations: u64,
    /// Largest single-step growth of the gap (zero when it never grew).
    pub worst_gap_growth: f64,
    /// First `k` with `1 − p⁽⁰⁾(k) ≤ 2δ` coordinatewise.
    pub t_prime: Option<u64>,
    /// First `k` with gap `≤ δ`.
    pub coalesced_at: Option<u64>,
    pub steps_run: u64,
    pub final_states: [Vec<f64>; 3],
}

/// Runs the sandwich for up to `k` steps from `p0`.
pub fn sandwich_run(
    p0: &[f64],
    params: &SamplerParams,
    k: u64,
    stream: &mut NoiseStream,
    options: SandwichOptions,
) -> Result<SandwichRecord> {
    let d = params.d();
    let mid = ChainState::new(p0.to_vec())?;
    mid.check(params)?;
    if let Some(delta) = options.delta {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(crate::error::domain("delta", delta, "(0, 1)"));
        }
    }
    let network = params.network();
    let cadence = options.record_every.max(1);
    let mut ensemble = CoupledEnsemble::new(vec![
        ChainState::constant(d, 0.0)?,
        mid,
        ChainState::constant(d, 1.0)?,
    ])?
    .with_order(0, 1)?
    .with_order(1, 2)?;

    let mut record = SandwichRecord {
        steps: Vec::new(),
        gaps: Vec::new(),
        barycenters: Vec::new(),
        order_violations: 0,
        worst_order_breach: 0.0,
        contraction_violations: 0,
        worst_gap_growth: 0.0,
        t_prime: None,
        coalesced_at: None,
        steps_run: 0,
        final_states: Default::default(),
    };
    let mut gap = max_gap(&ensemble.states[2].p, &ensemble.states[0].p);
    let push = |record: &mut SandwichRecord, ensemble: &CoupledEnsemble, t: u64, gap: f64| {
        record.steps.push(t);
        record.gaps.push(gap);
        record
            .barycenters
            .push(barycenter_unchecked(network, &ensemble.states[1].p));
    };
    push(&mut record, &ensemble, 0, gap);
    let hit = |p: &[f64], delta: f64| p.iter().all(|&x| 1.0 - x <= 2.0 * delta);
    if let Some(delta) = options.delta {
        if hit(&ensemble.states[0].p, delta) {
            record.t_prime = Some(0);
        }
        if gap <= delta {
            record.coalesced_at = Some(0);
        }
    }

    let mut t = 0;
    while t < k {
        if options.stop_at_hit && record.t_prime.is_some() {
            break;
        }
        let noise = stream.next_noise(d);
        let broken = ensemble.step_unchecked(params, noise);
        t += 1;
        if broken > 0 {
            record.order_violations += 1;
            let [lo, mid, hi] = [0, 1, 2].map(|w| ensemble.states[w].p[noise.index]);
            record.worst_order_breach = record.worst_order_breach.max(lo - mid).max(mid - hi);
        }
        let new_gap = max_gap(&ensemble.states[2].p, &ensemble.states[0].p);
        if new_gap > gap {
            record.contraction_violations += 1;
            record.worst_gap_growth = record.worst_gap_growth.max(new_gap - gap);
        }
        gap = new_gap;
        if let Some(delta) = options.delta {
            if record.t_prime.is_none() && hit(&ensemble.states[0].p, delta) {
                record.t_prime = Some(t);
            }
            if record.coalesced_at.is_none() && gap <= delta {
                record.coalesced_at = Some(t);
            }
        }
        if t % cadence == 0 || t == k {
            push(&mut record, &ensemble, t, gap);
        }
    }
    if record.steps.last() != Some(&t) {
        push(&mut record, &ensemble, t, gap);
    }
    record.steps_run = t;
    let [a, b, c]: [ChainState; 3] = ensemble.into_states().try_into().expect("three walkers");
    record.final_states = [a.p, b.p, c.p];
    Ok(record)
}
