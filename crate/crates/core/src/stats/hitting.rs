use serde::Serialize;

use super::{barycenter_unchecked, bounds, summary};
use crate::error::{domain, Error, Result};
use crate::gibbs::{NoiseStream, SamplerParams};
use crate::parallel::map_replicas;
use crate::truncnorm::TruncatedNormal;

/// Slack on the barycenter pre-filter; far above the drift of the running sum.
const PREFILTER_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HittingTimeResult {
    /// First hitting step, `None` when censored at `k_max`.
    pub time: Option<u64>,
    pub k_max: u64,
    pub delta: f64,
    pub replica: u64,
}

impl HittingTimeResult {
    pub fn is_censored(&self) -> bool {
        self.time.is_none()
    }

    /// The hitting step, or `k_max` when censored.
    pub fn time_or_censor(&self) -> u64 {
        self.time.unwrap_or(self.k_max)
    }
}

/// `⌈100·d·A²⌉`.
pub fn default_k_max(params: &SamplerParams) -> u64 {
    (100.0 * params.d() as f64 * params.a() * params.a()).ceil() as u64
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(domain("delta", delta, "(0, 1]"));
    }
    Ok(())
}

fn require_connected_support(params: &SamplerParams) -> Result<()> {
    match params.network().isolated_vertices().next() {
        Some(i) => Err(Error::IsolatedVertex(i)),
        None => Ok(()),
    }
}

/// Runs from `0` until `hit` holds, checking it only when the barycenter has
/// reached `level` (a necessary condition for every caller). `before` sees the
/// state and its barycenter ahead of each step.
fn first_hit<H, B>(
    params: &SamplerParams,
    stream: &mut NoiseStream,
    k_max: u64,
    level: f64,
    hit: H,
    mut before: B,
) -> (Option<u64>, Vec<f64>)
where
    H: Fn(&[f64]) -> bool,
    B: FnMut(&[f64], f64),
{
    let network = params.network();
    let d = params.d();
    let c = network.degrees();
    let mut p = vec![0.0; d];
    if hit(&p) {
        return (Some(0), p);
    }
    let mut bary = 0.0;
    for t in 1..=k_max {
        before(&p, bary);
        let out = params.update(&mut p, stream.next_noise(d));
        bary += c[out.index] * (out.value - out.previous);
        if bary >= level - PREFILTER_SLACK {
            bary = barycenter_unchecked(network, &p);
            if hit(&p) {
                return (Some(t), p);
            }
        }
    }
    (None, p)
}

fn averages_within(params: &SamplerParams, p: &[f64], delta: f64) -> bool {
    let network = params.network();
    (0..p.len()).all(|i| 1.0 - network.average_at(p, i) <= delta)
}

/// `T_δ`: first `k` with `max_i (1 − p̂_i(k)) ≤ δ` for the chain started at `0`.
pub fn hitting_time_t(
    params: &SamplerParams,
    delta: f64,
    stream: &mut NoiseStream,
    k_max: u64,
) -> Result<HittingTimeResult> {
    check_delta(delta)?;
    require_connected_support(params)?;
    let (time, _) = first_hit(
        params,
        stream,
        k_max,
        1.0 - delta,
        |p| averages_within(params, p, delta),
        |_, _| {},
    );
    Ok(HittingTimeResult {
        time,
        k_max,
        delta,
        replica: stream.replica(),
    })
}

/// `T′_δ`: first `k` with `1 − p_i(k) ≤ 2δ` for every `i`, chain started at `0`.
pub fn hitting_time_t_prime(
    params: &SamplerParams,
    delta: f64,
    stream: &mut NoiseStream,
    k_max: u64,
) -> Result<HittingTimeResult> {
    check_delta(delta)?;
    let (time, _) = first_hit(
        params,
        stream,
        k_max,
        1.0 - 2.0 * delta,
        |p| p.iter().all(|&x| 1.0 - x <= 2.0 * delta),
        |_, _| {},
    );
    Ok(HittingTimeResult {
        time,
        k_max,
        delta,
        replica: stream.replica(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HittingKind {
    T,
    TPrime,
}

/// Hitting times for replicas `0..replicas` of `seed`.
pub fn hitting_times(
    params: &SamplerParams,
    kind: HittingKind,
    delta: f64,
    replicas: usize,
    seed: u64,
    k_max: u64,
) -> Result<Vec<HittingTimeResult>> {
    map_replicas(replicas, |r| {
        let mut stream = NoiseStream::new(seed, r as u64);
        match kind {
            HittingKind::T => hitting_time_t(params, delta, &mut stream, k_max),
            HittingKind::TPrime => hitting_time_t_prime(params, delta, &mut stream, k_max),
        }
    })
    .into_iter()
    .collect()
}

/// Mean, sample standard deviation and censoring count, with censored runs
/// counted at `k_max` (so the mean is a lower bound when any are censored).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HittingSummary {
    pub mean: f64,
    pub std: f64,
    pub replicas: usize,
    pub censored: usize,
}

impl HittingSummary {
    pub fn from_results(results: &[HittingTimeResult]) -> Self {
        let times: Vec<f64> = results.iter().map(|r| r.time_or_censor() as f64).collect();
        let (mean, std) = summary::mean_std(&times);
        Self {
            mean,
            std,
            replicas: results.len(),
            censored: results.iter().filter(|r| r.is_censored()).count(),
        }
    }

    pub fn std_error(&self) -> f64 {
        self.std / (self.replicas as f64).sqrt()
    }
}

/// One replica's pre-`T_δ` segment of the `p̄²` process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftSample {
    /// `p̄²(T) − p̄²(0)`, the telescoped sum of realized increments.
    pub increment_sum: f64,
    /// `Σ_{j<T} E[p̄²(j+1) − p̄²(j) | p(j)]`, computed exactly.
    pub conditional_sum: f64,
    /// Number of increments in the segment (`T`, or `k_max` if censored).
    pub steps: u64,
    pub hit: Option<u64>,
}

/// `E[p̄'² − p̄² | p] = (1/d) Σ_i [2p̄c_i(m_i − Δp_i) + c_i²((m_i − Δp_i)² + v_i)]`
/// where `m_i, v_i` are the mean and variance of `ε(σ_i², p̂_i)`.
fn conditional_increment(params: &SamplerParams, p: &[f64], bary: f64) -> f64 {
    let network = params.network();
    let c = network.degrees();
    let sigmas = params.sigmas();
    let mut total = 0.0;
    for i in 0..p.len() {
        let avg = network.average_at(p, i);
        let law = TruncatedNormal::new(sigmas[i], avg).expect("valid truncated normal");
        let shift = law.mean() - (p[i] - avg);
        total += 2.0 * bary * c[i] * shift + c[i] * c[i] * (shift * shift + law.variance());
    }
    total / p.len() as f64
}

/// Runs one chain from `0` up to `T_δ` (or `k_max`) and sums the increments
/// of `p̄²`. With `conditional` the exact one-step conditional drift is
/// accumulated too, at the cost of `d` moment evaluations per step.
pub fn drift_diagnostic(
    params: &SamplerParams,
    delta: f64,
    stream: &mut NoiseStream,
    k_max: u64,
    conditional: bool,
) -> Result<DriftSample> {
    check_delta(delta)?;
    require_connected_support(params)?;
    let mut conditional_sum = 0.0;
    let (hit, p) = first_hit(
        params,
        stream,
        k_max,
        1.0 - delta,
        |p| averages_within(params, p, delta),
        |p, bary| {
            if conditional {
                // the running barycenter is exact up to far below the tolerance
                conditional_sum += conditional_increment(params, p, bary);
            }
        },
    );
    let end = barycenter_unchecked(params.network(), &p);
    Ok(DriftSample {
        increment_sum: end * end,
        conditional_sum,
        steps: hit.unwrap_or(k_max),
        hit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftDiagnostic {
    /// The floor `H`.
    pub h: f64,
    pub rho: f64,
    /// Pooled realized increment `Σ_r (p̄²(T_r) − p̄²(0)) / Σ_r T_r`.
    pub empirical_increment: f64,
    /// Standard error of the pooled ratio.
    pub empirical_std_error: f64,
    /// Pooled exact conditional drift over the same states.
    pub conditional_increment: f64,
    pub steps: u64,
    pub replicas: usize,
    pub censored: usize,
}

/// `H` for these parameters, or [`Error::HNotPositive`].
pub fn drift_h(params: &SamplerParams, delta: f64, rho: f64) -> Result<f64> {
    let beta = params
        .network()
        .degrees()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let h = bounds::drift_floor(rho, params.d(), params.a(), delta, beta);
    if h > 0.0 {
        Ok(h)
    } else {
        Err(Error::HNotPositive(h))
    }
}

pub fn drift_summary(
    params: &SamplerParams,
    delta: f64,
    rho: f64,
    replicas: usize,
    seed: u64,
    k_max: u64,
    conditional: bool,
) -> Result<DriftDiagnostic> {
    let h = drift_h(params, delta, rho)?;
    let samples = map_replicas(replicas, |r| {
        drift_diagnostic(
            params,
            delta,
            &mut NoiseStream::new(seed, r as u64),
            k_max,
            conditional,
        )
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let steps: u64 = samples.iter().map(|s| s.steps).sum();
    let n = steps.max(1) as f64;
    let sums: Vec<f64> = samples.iter().map(|s| s.increment_sum).collect();
    let ratio = summary::pairwise_sum(&sums) / n;
    let residuals: Vec<f64> = samples
        .iter()
        .map(|s| (s.increment_sum - ratio * s.steps as f64).powi(2))
        .collect();
    let cond: Vec<f64> = samples.iter().map(|s| s.conditional_sum).collect();
    Ok(DriftDiagnostic {
        h,
        rho,
        empirical_increment: ratio,
        empirical_std_error: summary::pairwise_sum(&residuals).sqrt() / n,
        conditional_increment: if conditional {
            summary::pairwise_sum(&cond) / n
        } else {
            f64::NAN
        },
        steps,
        replicas,
        censored: samples.iter().filter(|s| s.hit.is_none()).count(),
    })
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
    fn trivial_thresholds_hit_at_zero() {
        let p = params(4, 10.0);
        let t = hitting_time_t(&p, 1.0, &mut make_noise_stream(1, 0), 100).unwrap();
        assert_eq!(t.time, Some(0));
        let t = hitting_time_t_prime(&p, 0.5, &mut make_noise_stream(1, 0), 100).unwrap();
        assert_eq!(t.time, Some(0));
        assert!(hitting_time_t(&p, 0.0, &mut make_noise_stream(1, 0), 100).is_err());
    }

    #[test]
    fn censoring_is_reported() {
        let p = params(4, 50.0);
        let t = hitting_time_t(&p, 0.01, &mut make_noise_stream(1, 0), 10).unwrap();
        assert!(t.is_censored());
        assert_eq!(t.time_or_censor(), 10);
    }

    #[test]
    fn prefilter_agrees_with_brute_force() {
        let p = params(3, 4.0);
        let delta = 0.2;
        for replica in 0..20 {
            let fast =
                hitting_time_t(&p, delta, &mut make_noise_stream(11, replica), 100_000).unwrap();
            let mut stream = make_noise_stream(11, replica);
            let mut x = vec![0.0; 3];
            let mut brute = None;
            for t in 1..=100_000u64 {
                p.update(&mut x, stream.next_noise(3));
                if averages_within(&p, &x, delta) {
                    brute = Some(t);
                    break;
                }
            }
            assert_eq!(fast.time, brute);
        }
    }

    #[test]
    fn t_prime_monotone_in_delta() {
        let p = params(4, 8.0);
        for replica in 0..10 {
            let small =
                hitting_time_t_prime(&p, 0.05, &mut make_noise_stream(2, replica), 1_000_000)
                    .unwrap();
            let large =
                hitting_time_t_prime(&p, 0.1, &mut make_noise_stream(2, replica), 1_000_000)
                    .unwrap();
            assert!(small.time_or_censor() >= large.time_or_censor());
        }
    }

    #[test]
    fn isolated_vertices_block_t() {
        let n = crate::network::Network::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        let p = SamplerParams::new(n, 3.0).unwrap();
        assert!(matches!(
            hitting_time_t(&p, 0.1, &mut make_noise_stream(1, 0), 10),
            Err(Error::IsolatedVertex(2))
        ));
    }

    #[test]
    fn small_scale_has_no_positive_floor() {
        assert!(matches!(
            drift_h(&params(4, 2.0), 0.05, 0.07),
            Err(Error::HNotPositive(_))
        ));
        assert!(drift_h(&params(4, 150.0), 0.05, 0.07).unwrap() > 0.0);
    }

    #[test]
    fn drift_increments_telescope() {
        let p = params(3, 5.0);
        let s = drift_diagnostic(&p, 0.2, &mut make_noise_stream(3, 0), 1_000_000, true).unwrap();
        let t = hitting_time_t(&p, 0.2, &mut make_noise_stream(3, 0), 1_000_000).unwrap();
        assert_eq!(s.hit, t.time);
        assert!(s.increment_sum > 0.5);
        assert!(s.conditional_sum.is_finite());
    }
}
