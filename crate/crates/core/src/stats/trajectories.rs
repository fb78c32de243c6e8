use serde::Serialize;

use super::summary::{wilson_interval, RecordedMean};
use super::{barycenter_unchecked, bounds};
use crate::coupling::{sandwich_run, SandwichOptions, SandwichRecord};
use crate::error::{domain, Result};
use crate::gibbs::{ChainState, NoiseStream, SamplerParams};
use crate::parallel::map_replicas;

/// Recording schedule `0, c, 2c, …` plus the final step `k`.
pub fn schedule(k: u64, every: u64) -> Vec<u64> {
    let every = every.max(1);
    let mut steps: Vec<u64> = (0..=k).step_by(every as usize).collect();
    if steps.last() != Some(&k) {
        steps.push(k);
    }
    steps
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyTrajectory {
    pub steps: Vec<u64>,
    /// `⟨p(t), Δp(t)⟩` at each recorded step.
    pub energies: Vec<f64>,
    /// Largest discrepancy between the one-step update identity
    /// `ΔE = c_I(ε_I² − (Δp)_I²)` and direct recomputation.
    pub max_identity_error: f64,
    pub final_state: ChainState,
}

/// Streams Dirichlet energies along one chain and checks the one-step
/// identity on every step.
pub fn energy_trajectory(
    params: &SamplerParams,
    start: &ChainState,
    k: u64,
    stream: &mut NoiseStream,
    record_every: u64,
) -> Result<EnergyTrajectory> {
    start.check(params)?;
    let network = params.network();
    let c = network.degrees();
    let d = params.d();
    let steps = schedule(k, record_every);
    let mut energies = Vec::with_capacity(steps.len());
    let mut state = start.clone();
    let mut energy = network.pairwise_energy_unchecked(&state.p);
    energies.push(energy);
    let mut next_record = 1;
    let mut max_identity_error = 0.0_f64;
    for t in 1..=k {
        let out = params.advance(&mut state, stream.next_noise(d));
        let eps = out.noise_term();
        let lap = out.laplacian_term();
        let predicted = energy + c[out.index] * (eps * eps - lap * lap);
        energy = network.pairwise_energy_unchecked(&state.p);
        max_identity_error = max_identity_error.max((predicted - energy).abs());
        if steps.get(next_record) == Some(&t) {
            energies.push(energy);
            next_record += 1;
        }
    }
    Ok(EnergyTrajectory {
        steps,
        energies,
        max_identity_error,
        final_state: state,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergySummary {
    pub energy: RecordedMean,
    pub max_identity_error: f64,
    /// `5d/(2λA²)` for connected networks.
    pub bound: Option<f64>,
}

/// Energy trajectories from the diagonal point `t·1` over many replicas.
pub fn energy_summary(
    params: &SamplerParams,
    start_value: f64,
    k: u64,
    replicas: usize,
    seed: u64,
    record_every: u64,
) -> Result<EnergySummary> {
    let start = ChainState::constant(params.d(), start_value)?;
    let runs = map_replicas(replicas, |r| {
        energy_trajectory(
            params,
            &start,
            k,
            &mut NoiseStream::new(seed, r as u64),
            record_every,
        )
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<f64>> = runs.iter().map(|r| r.energies.clone()).collect();
    let bound = params
        .network()
        .spectral_summary()
        .ok()
        .map(|s| bounds::energy_bound(params.d(), s.lambda, params.a()));
    Ok(EnergySummary {
        energy: RecordedMean::from_rows(schedule(k, record_every), &rows),
        max_identity_error: runs
            .iter()
            .map(|r| r.max_identity_error)
            .fold(0.0, f64::max),
        bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationFrequency {
    pub events: u64,
    pub replicas: u64,
    pub frequency: f64,
    /// Wilson interval at three standard errors.
    pub interval: (f64, f64),
    /// `13k·exp(−λβδA/(2d))`; may exceed one.
    pub bound: Option<f64>,
}

/// `max_{i,j} |p_i − p̂_j| = max(max p − min p̂, max p̂ − min p)`.
fn spread(params: &SamplerParams, p: &[f64]) -> f64 {
    let network = params.network();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut alo, mut ahi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, &x) in p.iter().enumerate() {
        lo = lo.min(x);
        hi = hi.max(x);
        let a = network.average_at(p, i);
        alo = alo.min(a);
        ahi = ahi.max(a);
    }
    (hi - alo).max(ahi - lo)
}

/// Whether one chain from `t·1` sees `max_{i,j} |p_i − p̂_j| ≥ δ` within `k` steps.
pub fn deviation_event(
    params: &SamplerParams,
    start_value: f64,
    delta: f64,
    k: u64,
    stream: &mut NoiseStream,
) -> Result<bool> {
    if let Some(i) = params.network().isolated_vertices().next() {
        return Err(crate::error::Error::IsolatedVertex(i));
    }
    let mut state = ChainState::constant(params.d(), start_value)?;
    let d = params.d();
    for _ in 0..k {
        params.advance(&mut state, stream.next_noise(d));
        if spread(params, &state.p) >= delta {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn deviation_event_frequency(
    params: &SamplerParams,
    start_value: f64,
    delta: f64,
    k: u64,
    replicas: usize,
    seed: u64,
) -> Result<DeviationFrequency> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(domain("delta", delta, "(0, ∞)"));
    }
    let hits = map_replicas(replicas, |r| {
        deviation_event(
            params,
            start_value,
            delta,
            k,
            &mut NoiseStream::new(seed, r as u64),
        )
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let events = hits.iter().filter(|&&h| h).count() as u64;
    let n = replicas as u64;
    let bound = params
        .network()
        .spectral_summary()
        .ok()
        .map(|s| bounds::deviation_bound(k, s.lambda, s.beta, delta, params.a(), params.d()));
    Ok(DeviationFrequency {
        events,
        replicas: n,
        frequency: events as f64 / n.max(1) as f64,
        interval: wilson_interval(events, n, 3.0),
        bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarycenterMoments {
    /// `(p̄(t) − ½)²` across replicas.
    pub squared: RecordedMean,
    /// `|p̄(t) − ½|` across replicas.
    pub absolute: RecordedMean,
    /// `p̄(t)` across replicas.
    pub barycenter: RecordedMean,
}

/// Barycenter path of one chain from `½·1`, sampled on the schedule.
pub fn barycenter_path(
    params: &SamplerParams,
    k: u64,
    stream: &mut NoiseStream,
    record_every: u64,
) -> Vec<f64> {
    let network = params.network();
    let d = params.d();
    let steps = schedule(k, record_every);
    let mut p = vec![0.5; d];
    let mut out = Vec::with_capacity(steps.len());
    let mut t = 0;
    for &target in &steps {
        while t < target {
            params.update(&mut p, stream.next_noise(d));
            t += 1;
        }
        out.push(barycenter_unchecked(network, &p));
    }
    out
}

pub fn barycenter_moment_trajectory(
    params: &SamplerParams,
    k: u64,
    replicas: usize,
    seed: u64,
    record_every: u64,
) -> BarycenterMoments {
    let paths = map_replicas(replicas, |r| {
        barycenter_path(
            params,
            k,
            &mut NoiseStream::new(seed, r as u64),
            record_every,
        )
    });
    let steps = schedule(k, record_every);
    let map = |f: fn(f64) -> f64| -> Vec<Vec<f64>> {
        paths
            .iter()
            .map(|row| row.iter().map(|&x| f(x)).collect())
            .collect()
    };
    BarycenterMoments {
        squared: RecordedMean::from_rows(steps.clone(), &map(|x| (x - 0.5) * (x - 0.5))),
        absolute: RecordedMean::from_rows(steps.clone(), &map(|x| (x - 0.5).abs())),
        barycenter: RecordedMean::from_rows(steps, &paths),
    }
}

/// Replica-averaged output of many sandwich runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingSummary {
    pub steps: Vec<u64>,
    /// Mean `‖p⁽¹⁾ − p⁽⁰⁾‖_∞`, an upper bound on the `d_∞` distance to
    /// stationarity from any start.
    pub mean_gap: Vec<f64>,
    /// Mean `|p̄ − ½|` of the `p₀` walker.
    pub mean_abs_deviation: Vec<f64>,
    /// Mean `(p̄ − ½)²` of the `p₀` walker.
    pub mean_sq_deviation: Vec<f64>,
    pub replicas: usize,
    pub delta: Option<f64>,
    /// Replicas whose gap never fell to `δ`.
    pub coalescence_censored: usize,
    /// Replicas whose `0`-walker never met the `T′_δ` condition.
    pub t_prime_censored: usize,
    pub order_violations: u64,
    pub worst_order_breach: f64,
    pub contraction_violations: u64,
    pub worst_gap_growth: f64,
}

impl MixingSummary {
    pub fn from_records(records: &[SandwichRecord], delta: Option<f64>) -> Self {
        let steps = records.first().map(|r| r.steps.clone()).unwrap_or_default();
        let column = |f: &dyn Fn(&SandwichRecord, usize) -> f64| -> Vec<f64> {
            let rows: Vec<Vec<f64>> = records
                .iter()
                .map(|r| (0..steps.len()).map(|i| f(r, i)).collect())
                .collect();
            RecordedMean::from_rows(steps.clone(), &rows).mean
        };
        Self {
            mean_gap: column(&|r, i| r.gaps[i]),
            mean_abs_deviation: column(&|r, i| (r.barycenters[i] - 0.5).abs()),
            mean_sq_deviation: column(&|r, i| (r.barycenters[i] - 0.5).powi(2)),
            steps: steps.clone(),
            replicas: records.len(),
            delta,
            coalescence_censored: records.iter().filter(|r| r.coalesced_at.is_none()).count(),
            t_prime_censored: records.iter().filter(|r| r.t_prime.is_none()).count(),
            order_violations: records.iter().map(|r| r.order_violations).sum(),
            worst_order_breach: records
                .iter()
                .map(|r| r.worst_order_breach)
                .fold(0.0, f64::max),
            contraction_violations: records.iter().map(|r| r.contraction_violations).sum(),
            worst_gap_growth: records
                .iter()
                .map(|r| r.worst_gap_growth)
                .fold(0.0, f64::max),
        }
    }
}

/// Sandwich runs for replicas `0..replicas` of `seed`.
pub fn sandwich_replicas(
    params: &SamplerParams,
    p0: &[f64],
    k: u64,
    replicas: usize,
    seed: u64,
    options: SandwichOptions,
) -> Result<Vec<SandwichRecord>> {
    map_replicas(replicas, |r| {
        sandwich_run(
            p0,
            params,
            k,
            &mut NoiseStream::new(seed, r as u64),
            options,
        )
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::complete;
    use crate::gibbs::make_noise_stream;

    fn params(d: usize, a: f64) -> SamplerParams {
        SamplerParams::new(complete(d).unwrap(), a).unwrap()
    }

    #[test]
    fn schedule_includes_endpoints() {
        assert_eq!(schedule(10, 4), vec![0, 4, 8, 10]);
        assert_eq!(schedule(8, 4), vec![0, 4, 8]);
        assert_eq!(schedule(0, 4), vec![0]);
    }

    #[test]
    fn energy_identity_and_diagonal_start() {
        let p = params(4, 20.0);
        let start = ChainState::constant(4, 0.3).unwrap();
        let e = energy_trajectory(&p, &start, 100_000, &mut make_noise_stream(5, 0), 1000).unwrap();
        assert_eq!(e.energies[0], 0.0);
        assert_eq!(e.energies.len(), 101);
        assert!(e.max_identity_error < 1e-10, "{}", e.max_identity_error);
        assert_eq!(e.final_state.step, 100_000);
    }

    #[test]
    fn deviation_trivial_cases() {
        let p = params(4, 20.0);
        let f = deviation_event_frequency(&p, 0.5, 1.0 + 1e-12, 1000, 20, 1).unwrap();
        assert_eq!(f.events, 0);
        let p = params(4, 0.5);
        let f = deviation_event_frequency(&p, 0.5, 0.01, 1000, 20, 1).unwrap();
        assert_eq!(f.events, 20);
        assert!(f.bound.unwrap() > 1.0);
    }

    #[test]
    fn barycenter_moments_start_at_zero() {
        let p = params(4, 10.0);
        let m = barycenter_moment_trajectory(&p, 1000, 16, 3, 100);
        assert_eq!(m.squared.mean[0], 0.0);
        assert_eq!(m.absolute.mean[0], 0.0);
        assert_eq!(m.barycenter.mean[0], 0.5);
        assert_eq!(m.squared.steps.len(), 11);
    }

    #[test]
    fn mixing_summary_from_sandwiches() {
        let p = params(3, 4.0);
        let mut opts = SandwichOptions::for_steps(2000);
        opts.delta = Some(0.05);
        let records = sandwich_replicas(&p, &[0.5; 3], 2000, 8, 1, opts).unwrap();
        let s = MixingSummary::from_records(&records, opts.delta);
        assert_eq!(s.replicas, 8);
        assert_eq!(s.mean_gap[0], 1.0);
        assert!(s.mean_gap.last().unwrap() < &1.0);
        // walkers that have nearly met can swap by an ulp or two
        assert!(s.worst_order_breach <= crate::coupling::ROUNDING_SLACK);
        assert!(s.worst_gap_growth <= crate::coupling::ROUNDING_SLACK);
    }
}
