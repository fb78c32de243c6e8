//! Exact i.i.d. draws from `π_{A,C}` by rejection from the uniform law:
//! accept `p` with probability `exp(−A² Σ_{i<j} c_ij (p_i − p_j)²) ≤ 1`.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::gibbs::NoiseStream;
use crate::network::Network;
use crate::parallel::map_replicas;

pub const PILOT_PROPOSALS: u64 = 10_000;
pub const PROPOSAL_BUDGET: u64 = 100_000_000;
pub const MIN_ACCEPTANCE_RATE: f64 = 1e-5;
const BATCH_PROPOSALS: u64 = 65_536;
const BATCHES_PER_ROUND: usize = 16;

/// Stream ids with the top bits set keep oracle noise disjoint from the
/// replica streams of the sampler under the same seed.
const BATCH_STREAM: u64 = 1 << 63;
const PILOT_STREAM: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RejectionSamples {
    pub samples: Vec<Vec<f64>>,
    pub proposals: u64,
    pub pilot_rate: f64,
}

/// `Σ_{i<j} c_ij (p_i − p_j)²`, evaluated here rather than through the
/// network's own energy routines.
fn energy(weights: &[f64], d: usize, p: &[f64]) -> f64 {
    let mut e = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            let diff = p[i] - p[j];
            e += weights[i * d + j] * diff * diff;
        }
    }
    e
}

fn propose(
    weights: &[f64],
    d: usize,
    a2: f64,
    stream: &mut NoiseStream,
    proposals: u64,
    mut accept: impl FnMut(&[f64]),
) {
    let mut p = vec![0.0; d];
    for _ in 0..proposals {
        for x in &mut p {
            *x = stream.next_uniform();
        }
        let u = stream.next_uniform();
        if u < (-a2 * energy(weights, d, &p)).exp() {
            accept(&p);
        }
    }
}

pub fn rejection_sample_stationary(
    network: &Network,
    a: f64,
    count: usize,
    seed: u64,
) -> Result<RejectionSamples> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(domain("A", a, "[0, ∞)"));
    }
    let d = network.d();
    let weights = network.weights();
    let a2 = a * a;

    let mut pilot_accepted = 0u64;
    propose(
        weights,
        d,
        a2,
        &mut NoiseStream::new(seed, PILOT_STREAM),
        PILOT_PROPOSALS,
        |_| pilot_accepted += 1,
    );
    let pilot_rate = pilot_accepted as f64 / PILOT_PROPOSALS as f64;
    if pilot_rate < MIN_ACCEPTANCE_RATE || pilot_rate * (PROPOSAL_BUDGET as f64) < count as f64 {
        return Err(Error::Feasibility {
            rate: pilot_rate,
            requested: count,
        });
    }

    let mut samples = Vec::with_capacity(count);
    let mut batch = 0u64;
    let mut proposals = 0u64;
    while samples.len() < count {
        if proposals >= PROPOSAL_BUDGET {
            return Err(Error::Feasibility {
                rate: samples.len() as f64 / proposals as f64,
                requested: count,
            });
        }
        let round = map_replicas(BATCHES_PER_ROUND, |b| {
            let mut out = Vec::new();
            let mut stream = NoiseStream::new(seed, BATCH_STREAM | (batch + b as u64));
            propose(weights, d, a2, &mut stream, BATCH_PROPOSALS, |p| {
                out.push(p.to_vec())
            });
            out
        });
        batch += BATCHES_PER_ROUND as u64;
        proposals += BATCHES_PER_ROUND as u64 * BATCH_PROPOSALS;
        for chunk in round {
            samples.extend(chunk);
        }
    }
    samples.truncate(count);
    Ok(RejectionSamples {
        samples,
        proposals,
        pilot_rate,
    })
}
