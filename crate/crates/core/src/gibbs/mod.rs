//! The single-site Gibbs kernel `K_{A,C}`.
//!
//! One step picks `I` uniformly, forms the neighbor average `p̂_I` and
//! replaces `p_I` by `Γ(p̂_I, u)` for the truncated normal with
//! `σ_I² = 1/(2A²c_I)`. Every step reads its [`StepNoise`] from a
//! [`NoiseStream`], so a trajectory is a pure function of `(seed, replica)`
//! and coupled walkers are simply walkers fed the same noise.

mod noise;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use noise::{make_noise_stream, NoiseStream, StepNoise, WORDS_PER_STEP};

use crate::error::{domain, Error, Result};
use crate::network::Network;
use crate::truncnorm::quantile_at;

#[derive(Debug, Clone)]
pub struct SamplerParams {
    a: f64,
    network: Arc<Network>,
    sigmas: Vec<f64>,
}

impl SamplerParams {
    pub fn new(network: impl Into<Arc<Network>>, a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(domain("A", a, "(0, ∞)"));
        }
        let network = network.into();
        let sigmas = network
            .degrees()
            .iter()
            .map(|&c| {
                if c == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 / (a * (2.0 * c).sqrt())
                }
            })
            .collect();
        Ok(Self { a, network, sigmas })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn shared_network(&self) -> Arc<Network> {
        Arc::clone(&self.network)
    }

    pub fn d(&self) -> usize {
        self.network.d()
    }

    /// `σ_i = 1/(A√(2c_i))`, infinite for isolated vertices.
    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    /// Applies one kernel step to `p` in place.
    #[inline]
    pub fn update(&self, p: &mut [f64], noise: StepNoise) -> StepOutcome {
        let index = noise.index;
        let previous = p[index];
        let sigma = self.sigmas[index];
        let (average, value) = if sigma.is_infinite() {
            (previous, noise.u)
        } else {
            let average = self.network.average_at(p, index);
            (average, quantile_at(sigma, average, noise.u))
        };
        p[index] = value;
        StepOutcome {
            index,
            previous,
            average,
            value,
        }
    }

    /// Applies one kernel step to `state` in place and advances its step count.
    #[inline]
    pub fn advance(&self, state: &mut ChainState, noise: StepNoise) -> StepOutcome {
        let outcome = self.update(&mut state.p, noise);
        state.step += 1;
        outcome
    }
}

/// What one step did: coordinate `index` moved from `previous` to `value`,
/// drawn around the neighbor average `average`. For an isolated vertex the
/// draw is uniform and `average` repeats `previous`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub index: usize,
    pub previous: f64,
    pub average: f64,
    pub value: f64,
}

impl StepOutcome {
    /// `ε_I = new − p̂_I`.
    pub fn noise_term(&self) -> f64 {
        self.value - self.average
    }

    /// `(Δq)_I = old − p̂_I`.
    pub fn laplacian_term(&self) -> f64 {
        self.previous - self.average
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub p: Vec<f64>,
    pub step: u64,
}

impl ChainState {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if let Some(&x) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(domain("coordinate", x, "[0, 1]"));
        }
        Ok(Self { p, step: 0 })
    }

    /// The diagonal point `t·1`.
    pub fn constant(d: usize, t: f64) -> Result<Self> {
        Self::new(vec![t; d])
    }

    pub fn d(&self) -> usize {
        self.p.len()
    }

    pub(crate) fn check(&self, params: &SamplerParams) -> Result<()> {
        if self.p.len() != params.d() {
            return Err(Error::Dimension {
                expected: params.d(),
                got: self.p.len(),
            });
        }
        Ok(())
    }
}

/// One kernel application as a pure function.
pub fn step(state: &ChainState, params: &SamplerParams, noise: StepNoise) -> ChainState {
    let mut next = state.clone();
    params.advance(&mut next, noise);
    next
}

/// Runs `k` steps in place, calling `observer` after each with the new state.
pub fn run<F>(
    state: &mut ChainState,
    params: &SamplerParams,
    k: u64,
    stream: &mut NoiseStream,
    mut observer: F,
) where
    F: FnMut(&ChainState, &StepOutcome),
{
    let d = params.d();
    for _ in 0..k {
        let noise = stream.next_noise(d);
        let outcome = params.advance(state, noise);
        observer(state, &outcome);
    }
}

/// Lazily yields the initial state followed by the `k` successors.
pub fn trajectory(
    initial: ChainState,
    params: &SamplerParams,
    k: u64,
    stream: NoiseStream,
) -> Trajectory<'_> {
    Trajectory {
        state: initial,
        params,
        stream,
        remaining: k,
        started: false,
    }
}

pub struct Trajectory<'a> {
    state: ChainState,
    params: &'a SamplerParams,
    stream: NoiseStream,
    remaining: u64,
    started: bool,
}

impl Iterator for Trajectory<'_> {
    type Item = ChainState;

    fn next(&mut self) -> Option<ChainState> {
        if !self.started {
            self.started = true;
            return Some(self.state.clone());
        }
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let noise = self.stream.next_noise(self.params.d());
        self.params.advance(&mut self.state, noise);
        Some(self.state.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::complete;

    fn single_edge(a: f64) -> SamplerParams {
        SamplerParams::new(Network::from_edges(2, &[(0, 1, 1.0)]).unwrap(), a).unwrap()
    }

    #[test]
    fn sigmas_match_definition() {
        let params = SamplerParams::new(complete(4).unwrap(), 50.0).unwrap();
        for (&s, &c) in params.sigmas().iter().zip(params.network().degrees()) {
            let want = 1.0 / (2.0 * 50.0 * 50.0 * c);
            assert!((s * s - want).abs() <= 1e-15 * want.max(1.0));
        }
        let isolated = Network::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        let params = SamplerParams::new(isolated, 2.0).unwrap();
        assert!(params.sigmas()[2].is_infinite() && params.sigmas()[0].is_finite());
        assert!(SamplerParams::new(complete(3).unwrap(), 0.0).is_err());
        assert!(SamplerParams::new(complete(3).unwrap(), f64::INFINITY).is_err());
    }

    #[test]
    fn symmetric_median_leaves_center_fixed() {
        let params = SamplerParams::new(complete(5).unwrap(), 10.0).unwrap();
        let state = ChainState::constant(5, 0.5).unwrap();
        for index in 0..5 {
            let next = step(&state, &params, StepNoise { index, u: 0.5 });
            assert_eq!(next.p, state.p);
            assert_eq!(next.step, 1);
        }
    }

    #[test]
    fn single_edge_draws_around_partner() {
        let a = 4.0;
        let params = single_edge(a);
        assert!((params.sigmas()[0] - 1.0 / a).abs() < 1e-15);
        let mut p = vec![0.2, 0.7];
        let out = params.update(&mut p, StepNoise { index: 0, u: 0.3 });
        assert_eq!(out.average, 0.7);
        let want = crate::truncnorm::TruncatedNormal::new(1.0 / a, 0.7)
            .unwrap()
            .quantile(0.3);
        assert_eq!(p, vec![want, 0.7]);
    }

    #[test]
    fn isolated_vertex_is_uniform() {
        let params =
            SamplerParams::new(Network::from_edges(3, &[(0, 1, 1.0)]).unwrap(), 3.0).unwrap();
        let mut p = vec![0.1, 0.2, 0.3];
        let out = params.update(&mut p, StepNoise { index: 2, u: 0.77 });
        assert_eq!(p[2], 0.77);
        assert_eq!(out.average, 0.3);
    }

    #[test]
    fn run_zero_steps_and_determinism() {
        let params = SamplerParams::new(complete(4).unwrap(), 20.0).unwrap();
        let start = ChainState::new(vec![0.1, 0.4, 0.6, 0.9]).unwrap();
        let mut s = start.clone();
        run(&mut s, &params, 0, &mut make_noise_stream(1, 0), |_, _| {});
        assert_eq!(s, start);

        let a: Vec<_> = trajectory(start.clone(), &params, 1000, make_noise_stream(9, 3)).collect();
        let b: Vec<_> = trajectory(start.clone(), &params, 1000, make_noise_stream(9, 3)).collect();
        assert_eq!(a.len(), 1001);
        assert_eq!(a[0], start);
        for (x, y) in a.iter().zip(&b) {
            assert!(x
                .p
                .iter()
                .zip(&y.p)
                .all(|(u, v)| u.to_bits() == v.to_bits()));
        }
        let mut s = start;
        run(
            &mut s,
            &params,
            1000,
            &mut make_noise_stream(9, 3),
            |_, _| {},
        );
        assert_eq!(&s, a.last().unwrap());
    }

    #[test]
    fn diagonal_start_moves_one_coordinate() {
        let params = SamplerParams::new(complete(4).unwrap(), 30.0).unwrap();
        let mut state = ChainState::constant(4, 0.25).unwrap();
        let out = params.advance(&mut state, StepNoise { index: 2, u: 0.9 });
        assert_eq!(out.average, 0.25);
        assert!(state.p[2] > 0.25);
        assert!(state
            .p
            .iter()
            .enumerate()
            .all(|(i, &x)| i == 2 || x == 0.25));
    }

    #[test]
    fn dimension_check() {
        let params = single_edge(1.0);
        assert!(ChainState::constant(3, 0.5)
            .unwrap()
            .check(&params)
            .is_err());
        assert!(ChainState::new(vec![0.5, 1.5]).is_err());
    }
}
