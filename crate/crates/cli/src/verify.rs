//! `verify-bounds`: every explicit inequality checked at one configuration.
//!
//! Monte Carlo checks carry 25% slack (or three standard errors where the
//! statistic is a frequency). A check whose hypotheses fail at the chosen
//! configuration is reported as SKIP with the reason.

use gibbs_lab::coupling::ROUNDING_SLACK;
use gibbs_lab::gibbs::{NoiseStream, SamplerParams};
use gibbs_lab::oracle::{estimate_rho, rejection_sample_stationary};
use gibbs_lab::stats::bounds::{
    anti_concentration_scale, barycenter_envelope, hitting_bound, tail_mass_bound,
};
use gibbs_lab::stats::{
    barycenter, barycenter_moment_trajectory, default_k_max, deviation_event_frequency,
    drift_summary, energy_summary, hitting_times, record_cadence, sandwich_replicas, HittingKind,
    HittingSummary, MixingSummary,
};
use gibbs_lab::truncnorm::quantile_at;
use gibbs_lab::{Error, SandwichOptions, TruncatedNormal};
use serde::Serialize;

use crate::source::{self, check_a, check_delta, check_replicas};
use crate::{output, usage, Failure, VerifyArgs};

const SLACK: f64 = 1.25;

#[derive(Debug, Serialize, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    status: Status,
    detail: String,
}

fn check(name: &'static str, ok: bool, detail: String) -> Check {
    Check {
        name,
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

fn skip(name: &'static str, detail: String) -> Check {
    Check {
        name,
        status: Status::Skip,
        detail,
    }
}

fn spectral_checks(params: &SamplerParams, seed: u64) -> Vec<Check> {
    let net = params.network();
    let Ok(s) = net.spectral_summary() else {
        return vec![skip("spectral", "network is disconnected".into())];
    };
    let top = net.degrees().iter().copied().fold(0.0, f64::max);
    let mut out = vec![check(
        "degree-below-gamma",
        top <= s.gamma + 1e-12,
        format!("max c_i = {top:.6} ≤ γ = {:.6}", s.gamma),
    )];

    let mut stream = NoiseStream::new(seed, 1 << 61);
    let (mut gap_excess, mut hat_excess, mut iterate_excess, mut adjoint) = (
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
        0.0_f64,
    );
    for _ in 0..1000 {
        let p: Vec<f64> = (0..net.d()).map(|_| stream.next_uniform()).collect();
        let q: Vec<f64> = (0..net.d()).map(|_| stream.next_uniform()).collect();
        let lp = net.laplacian_apply(&p).expect("connected");
        let lq = net.laplacian_apply(&q).expect("connected");
        adjoint = adjoint.max(
            (net.weighted_inner(&lp, &q).unwrap() - net.weighted_inner(&p, &lq).unwrap()).abs(),
        );
        iterate_excess = iterate_excess.max(
            s.lambda * net.weighted_inner(&p, &lp).unwrap() - net.weighted_inner(&lp, &lp).unwrap(),
        );

        let m = barycenter(net, &p).unwrap();
        let c: Vec<f64> = p.iter().map(|x| x - m).collect();
        let norm = net.weighted_inner(&c, &c).unwrap();
        let lc = net.laplacian_apply(&c).unwrap();
        gap_excess = gap_excess.max(s.lambda * norm - net.weighted_inner(&c, &lc).unwrap());
        let hat = net.one_step_average(&c).unwrap();
        hat_excess =
            hat_excess.max(net.weighted_inner(&hat, &hat).unwrap() - s.gamma * s.gamma * norm);
    }
    out.push(check(
        "laplacian-inequalities",
        adjoint <= 1e-12 && gap_excess <= 1e-10 && hat_excess <= 1e-10 && iterate_excess <= 1e-10,
        format!(
            "1000 random vectors: self-adjointness {adjoint:.1e}, spectral gap {gap_excess:.1e}, \
             contraction {hat_excess:.1e}, iterate {iterate_excess:.1e} (≤ 0 up to rounding)"
        ),
    ));
    out
}

fn truncnorm_checks(rho: f64) -> Vec<Check> {
    let (mut mean_bad, mut var_bad, mut sym) = (0, 0, 0.0_f64);
    for si in 1..=200 {
        let sigma = si as f64 * 0.005;
        for pi in 0..=50 {
            let p = pi as f64 / 100.0;
            let t = TruncatedNormal::new(sigma, p).unwrap();
            let cap = 2.0 * sigma * (-p * p / (2.0 * sigma * sigma)).exp();
            mean_bad += usize::from(t.mean() < 0.0 || t.mean() > cap);
            let v = t.variance();
            var_bad += usize::from(
                v > sigma * sigma * (1.0 + 1e-12) || v < rho * sigma * sigma * (1.0 - 1e-9),
            );
            let mirror = TruncatedNormal::new(sigma, 1.0 - p).unwrap();
            sym = sym
                .max((t.mean() + mirror.mean()).abs())
                .max((v - mirror.variance()).abs());
        }
    }
    let mut stream = NoiseStream::new(0, 1 << 60);
    let mut coupling_bad = 0;
    for _ in 0..100_000 {
        let sigma = 0.005 + stream.next_uniform();
        let delta = [1e-3, 0.1, 0.5][stream.next_index(3)];
        let q = stream.next_uniform();
        let p = (q + delta * stream.next_uniform()).min(1.0);
        let u = stream.next_uniform();
        let g = quantile_at(sigma, p, u) - quantile_at(sigma, q, u);
        coupling_bad += usize::from(!(0.0..=delta).contains(&g));
    }
    vec![
        check(
            "truncnorm-moments",
            mean_bad == 0 && var_bad == 0 && sym <= 1e-12,
            format!(
                "10200 grid points: {mean_bad} mean-bound and {var_bad} variance-sandwich \
                 violations (ρ̂ = {rho:.4}), reflection error {sym:.1e}"
            ),
        ),
        check(
            "truncnorm-coupling",
            coupling_bad == 0,
            format!("10^5 draws: {coupling_bad} with Γ(p,u) − Γ(q,u) outside [0, δ]"),
        ),
    ]
}

pub fn verify_bounds(args: VerifyArgs) -> Result<(), Failure> {
    let network = source::network(&args.network)?;
    check_a(args.a)?;
    check_delta(args.delta)?;
    check_replicas(args.replicas)?;
    let params = SamplerParams::new(network.clone(), args.a).map_err(|e| usage(format!("{e}")))?;
    let (d, a, delta, n, seed) = (params.d(), args.a, args.delta, args.replicas, args.seed);
    let rho = estimate_rho()?.rho;
    let scale = d as f64 * a * a;

    let mut checks = spectral_checks(&params, seed);
    checks.extend(truncnorm_checks(rho));
    let connected = network.spectral_summary().ok();

    // energy contraction from a diagonal start
    let k = (5.0 * scale).ceil() as u64;
    let e = energy_summary(&params, 0.5, k, n, seed, record_cadence(k))?;
    match e.bound {
        Some(b) => {
            let top = e.energy.mean.iter().copied().fold(0.0, f64::max);
            checks.push(check(
                "energy-ceiling",
                top <= SLACK * b && e.max_identity_error <= 1e-10,
                format!(
                    "k = {k}: max mean energy {top:.3e} ≤ 1.25 × {b:.3e}; step identity error {:.1e}",
                    e.max_identity_error
                ),
            ));
        }
        None => checks.push(skip("energy-ceiling", "network is disconnected".into())),
    }

    if let Some(s) = &connected {
        // deviation from the diagonal within dA² steps
        let k = scale.ceil() as u64;
        let f = deviation_event_frequency(&params, 0.5, delta, k, n, seed)?;
        let b = f.bound.unwrap_or(f64::INFINITY);
        checks.push(if b >= 1.0 {
            skip(
                "diagonal-deviation",
                format!("bound 13k·exp(−λβδA/2d) = {b:.3e} ≥ 1 is vacuous here"),
            )
        } else {
            check(
                "diagonal-deviation",
                f.interval.0 <= b,
                format!(
                    "{} / {} runs deviate by δ within {k} steps; bound {b:.3e}",
                    f.events, f.replicas
                ),
            )
        });

        // barycenter envelope from the centre
        let m = barycenter_moment_trajectory(&params, k, n, seed, record_cadence(k));
        let worst = m
            .squared
            .steps
            .iter()
            .zip(&m.squared.mean)
            .filter(|(&t, _)| t > 0)
            .map(|(&t, &v)| v / barycenter_envelope(t, s.gamma, s.lambda, a))
            .fold(0.0, f64::max);
        checks.push(check(
            "barycenter-envelope",
            worst <= SLACK,
            format!("k ≤ dA²: max E(p̄ − ½)² / (27kγ/(λA²)) = {worst:.3} ≤ 1.25"),
        ));

        // hitting time and drift
        let k_max = default_k_max(&params);
        match drift_summary(&params, delta, rho, n, seed, k_max, false) {
            Ok(drift) => {
                let t = HittingSummary::from_results(&hitting_times(
                    &params,
                    HittingKind::T,
                    delta,
                    n,
                    seed,
                    k_max,
                )?);
                let bound = hitting_bound(d, a, rho);
                checks.push(check(
                    "hitting-time",
                    t.mean <= SLACK * bound,
                    format!(
                        "mean T_δ = {:.0} ≤ 1.25 × {bound:.3e} ({} censored at {k_max})",
                        t.mean, t.censored
                    ),
                ));
                checks.push(check(
                    "barycenter-drift",
                    drift.empirical_increment >= 0.75 * drift.h,
                    format!(
                        "drift {:.3e} ≥ 0.75·H = {:.3e}",
                        drift.empirical_increment,
                        0.75 * drift.h
                    ),
                ));
            }
            Err(Error::HNotPositive(h)) => {
                checks.push(skip(
                    "hitting-time",
                    format!("H = {h:.3e} ≤ 0: A is too small for the bound"),
                ));
                checks.push(skip("barycenter-drift", format!("H = {h:.3e} ≤ 0")));
            }
            Err(e) => return Err(e.into()),
        }

        // anti-concentration at stationarity, when exact sampling is feasible
        let needed = anti_concentration_scale(d, s.lambda, s.beta, delta);
        if a < needed {
            checks.push(skip("anti-concentration", format!("needs A ≥ {needed:.2}")));
        } else {
            match rejection_sample_stationary(&network, a, 100_000, seed) {
                Ok(draws) => {
                    let bary: Vec<f64> = draws
                        .samples
                        .iter()
                        .map(|p| barycenter(&network, p).unwrap())
                        .collect();
                    let n = bary.len() as f64;
                    let mut worst = f64::NEG_INFINITY;
                    for i in 1..=20 {
                        let s = delta + i as f64 * (0.5 - delta) / 20.0;
                        let inside =
                            bary.iter().filter(|&&b| b >= s && b <= 1.0 - s).count() as f64 / n;
                        let slack = 3.0 * (inside * (1.0 - inside) / n).sqrt();
                        worst = worst.max(inside - slack - tail_mass_bound(s, delta));
                    }
                    checks.push(check(
                        "anti-concentration",
                        worst <= 0.0,
                        format!("10^5 exact draws: max excess of π̄([s, 1−s]) over (1−2s)/(1−2δ)² is {worst:.3e}"),
                    ));
                }
                Err(Error::Feasibility { rate, .. }) => checks.push(skip(
                    "anti-concentration",
                    format!("rejection sampling infeasible (acceptance {rate:.1e})"),
                )),
                Err(e) => return Err(e.into()),
            }
        }
    }

    // grand coupling
    let k = (2.0 * scale).ceil() as u64;
    let mut options = SandwichOptions::for_steps(k);
    options.delta = Some(delta);
    let records = sandwich_replicas(&params, &vec![0.5; d], k, n.min(100), seed, options)?;
    let m = MixingSummary::from_records(&records, Some(delta));
    checks.push(check(
        "coupling-order",
        m.worst_order_breach <= ROUNDING_SLACK && m.worst_gap_growth <= ROUNDING_SLACK,
        format!(
            "{} order swaps (max {:.1e}) and {} gap increases (max {:.1e}); allowance {ROUNDING_SLACK:.1e}",
            m.order_violations, m.worst_order_breach, m.contraction_violations, m.worst_gap_growth
        ),
    ));

    let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
    for c in &checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        println!("{tag} {:<22} {}", c.name, c.detail);
    }
    if let Some(out) = &args.out {
        output::write_manifest(
            out,
            "verify-bounds",
            &args,
            Some(&network),
            &[],
            serde_json::json!({ "rho": rho, "checks": checks }),
        )?;
    }
    if failed > 0 {
        return Err(Failure::Runtime(anyhow::anyhow!(
            "{failed} bound check(s) failed"
        )));
    }
    Ok(())
}
