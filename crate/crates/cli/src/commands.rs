use std::path::PathBuf;

use gibbs_lab::coupling::SandwichOptions;
use gibbs_lab::gibbs::{run, ChainState, NoiseStream, SamplerParams};
use gibbs_lab::oracle::rejection_sample_stationary;
use gibbs_lab::parallel::map_replicas;
use gibbs_lab::stats::{
    barycenter, barycenter_moment_trajectory, barycenter_path, default_k_max, hitting_times,
    record_cadence, sandwich_replicas, schedule, HittingKind, HittingSummary, MixingSummary,
};
use gibbs_lab::{Error, Network, TruncatedNormal};
use serde_json::{json, Value};

use crate::output::{self, header, num, Series, Table};
use crate::source::{self, check_a, check_delta, check_replicas};
use crate::{
    usage, Failure, FigHittingArgs, FigVarianceArgs, MixArgs, OracleArgs, SampleArgs, SpectralArgs,
    TruncnormArgs, Which,
};

fn sampler(network: Network, a: f64) -> Result<SamplerParams, Failure> {
    check_a(a)?;
    SamplerParams::new(network, a).map_err(|e| usage(format!("{e}")))
}

pub fn spectral(args: SpectralArgs) -> Result<(), Failure> {
    let network = source::network(&args.network.network)?;
    let parts = network.connected_components();
    let report = match network.spectral_summary() {
        Ok(s) => json!({
            "d": network.d(),
            "connected": true,
            "lambda": s.lambda,
            "gamma": s.gamma,
            "beta": s.beta,
            "eigenvalues": s.eigenvalues,
        }),
        Err(Error::Disconnected) => {
            let components: Vec<_> = parts
                .components
                .iter()
                .map(|c| {
                    let s = c.network.spectral_summary().ok();
                    json!({
                        "vertices": c.vertices,
                        "weight_fraction": c.weight_fraction,
                        "lambda": s.as_ref().map(|s| s.lambda),
                        "gamma": s.as_ref().map(|s| s.gamma),
                        "beta": s.as_ref().map(|s| s.beta),
                        "eigenvalues": s.map(|s| s.eigenvalues),
                    })
                })
                .collect();
            json!({
                "d": network.d(),
                "connected": false,
                "components": components,
                "isolated": parts.isolated,
            })
        }
        Err(e) => return Err(e.into()),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?
    );
    if let Some(out) = &args.out {
        output::write_json(out, &report)?;
    }
    Ok(())
}

pub fn truncnorm(args: TruncnormArgs) -> Result<(), Failure> {
    let t = if args.sigma.is_infinite() && args.sigma > 0.0 {
        TruncatedNormal::uniform(args.p)
    } else {
        TruncatedNormal::new(args.sigma, args.p)
    }
    .map_err(|e| usage(format!("{e}")))?;
    if let Some(u) = args.u.iter().find(|u| !(0.0..=1.0).contains(*u)) {
        return Err(usage(format!("--u {u} is outside [0, 1]")));
    }
    let cdf = args
        .x
        .iter()
        .map(|&x| t.cdf(x).map_err(|e| usage(format!("{e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let report = json!({
        "sigma": if t.is_uniform() { json!("inf") } else { json!(t.sigma()) },
        "p": t.p(),
        "mass": if t.is_uniform() { Value::Null } else { json!(t.mass()) },
        // moments of the displacement ε; quantiles and CDF are of p + ε
        "eps_mean": t.mean(),
        "eps_variance": t.variance(),
        "quantile": args.u.iter().map(|&u| json!({"u": u, "value": t.quantile(u)})).collect::<Vec<_>>(),
        "cdf": args.x.iter().zip(&cdf).map(|(&x, &f)| json!({"x": x, "value": f})).collect::<Vec<_>>(),
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?
    );
    Ok(())
}

pub fn sample(args: SampleArgs) -> Result<(), Failure> {
    let network = source::network(&args.network.network)?;
    check_replicas(args.replicas)?;
    let params = sampler(network.clone(), args.a)?;
    let d = params.d();
    let start =
        ChainState::new(source::start(&args.start, d)?).map_err(|e| usage(format!("{e}")))?;
    if args.dump_every == Some(0) {
        return Err(usage("--dump-every must be positive"));
    }
    let every = args.dump_every.unwrap_or_else(|| record_cadence(args.k));
    let steps = schedule(args.k, every);

    // one row per recorded step: the full state, or (barycenter, energy)
    let rows = map_replicas(args.replicas, |r| {
        let mut stream = NoiseStream::new(args.seed, r as u64);
        let mut state = start.clone();
        let mut out = Vec::with_capacity(steps.len());
        let mut at = 0;
        for &t in &steps {
            run(&mut state, &params, t - at, &mut stream, |_, _| {});
            at = t;
            out.push(state.p.clone());
        }
        out
    });

    let mut names = vec!["replica".to_string(), "step".to_string()];
    if args.dump_every.is_some() {
        names.extend((0..d).map(|i| format!("p{i}")));
    } else {
        names.extend(header(&["barycenter", "energy"]));
    }
    let mut table = Table::create(&args.out, &names)?;
    let mut finals = Vec::new();
    for (r, replica) in rows.iter().enumerate() {
        for (&t, p) in steps.iter().zip(replica) {
            let mut row = vec![r.to_string(), t.to_string()];
            if args.dump_every.is_some() {
                row.extend(p.iter().map(|&x| num(x)));
            } else {
                row.push(num(barycenter(&network, p)?));
                row.push(num(network.dirichlet_energy_pairwise(p)?));
            }
            table.row(&row)?;
        }
        finals.push(barycenter(
            &network,
            replica.last().expect("k ≥ 0 records step 0"),
        )?);
    }
    let csv = table.finish()?;
    output::write_manifest(
        &output::manifest_path(&args.out),
        "sample",
        &args,
        Some(&network),
        &[csv],
        json!({ "record_every": every, "final_barycenters": finals }),
    )?;
    Ok(())
}

pub fn mix_estimate(args: MixArgs) -> Result<(), Failure> {
    let network = source::network(&args.network.network)?;
    check_replicas(args.replicas)?;
    if let Some(delta) = args.delta {
        check_delta(delta)?;
    }
    let params = sampler(network.clone(), args.a)?;
    let p0 = source::start(&args.start, params.d())?;
    let mut options = SandwichOptions::for_steps(args.k);
    options.delta = args.delta;
    let records = sandwich_replicas(&params, &p0, args.k, args.replicas, args.seed, options)?;

    let mut table = Table::create(&args.out, &header(&["replica", "step", "max_gap"]))?;
    for (r, rec) in records.iter().enumerate() {
        for (&t, &g) in rec.steps.iter().zip(&rec.gaps) {
            table.row(&[r.to_string(), t.to_string(), num(g)])?;
        }
    }
    let csv = table.finish()?;
    let summary = MixingSummary::from_records(&records, args.delta);
    let hits: Vec<Option<u64>> = records.iter().map(|r| r.t_prime).collect();
    let coalesced: Vec<Option<u64>> = records.iter().map(|r| r.coalesced_at).collect();
    output::write_manifest(
        &output::manifest_path(&args.out),
        "mix-estimate",
        &args,
        Some(&network),
        &[csv],
        json!({
            "mixing": summary,
            "t_prime": hits,
            "coalesced_at": coalesced,
        }),
    )?;
    Ok(())
}

fn label(a: f64) -> String {
    format!("{a}").replace('.', "p")
}

pub fn fig_variance(args: FigVarianceArgs) -> Result<(), Failure> {
    let network = source::network(&args.network.network)?;
    check_replicas(args.replicas)?;
    output::ensure_dir(&args.out_dir)?;
    let d = network.d();
    let mut outputs = Vec::new();
    let mut plateaus = Vec::new();
    for &a in &args.a {
        let params = sampler(network.clone(), a)?;
        let k = args
            .k
            .unwrap_or_else(|| (22.0 * d as f64 * a * a).ceil() as u64);
        let every = record_cadence(k);
        let m = barycenter_moment_trajectory(&params, k, args.replicas, args.seed, every);
        let sq = &m.squared;

        let path = args.out_dir.join(format!("fig-variance_A{}.csv", label(a)));
        let mut table = Table::create(&path, &header(&["step", "mean", "std", "replicas"]))?;
        for i in 0..sq.steps.len() {
            table.row(&[
                sq.steps[i].to_string(),
                num(sq.mean[i]),
                num(sq.std[i]),
                sq.replicas.to_string(),
            ])?;
        }
        outputs.push(table.finish()?);

        let mut series = vec![Series {
            points: sq
                .steps
                .iter()
                .map(|&t| t as f64)
                .zip(sq.mean.iter().copied())
                .collect(),
            dashed: false,
        }];
        if args.paths > 0 {
            let paths = map_replicas(args.paths, |r| {
                barycenter_path(
                    &params,
                    k,
                    &mut NoiseStream::new(args.seed, r as u64),
                    every,
                )
            });
            let path = args
                .out_dir
                .join(format!("fig-variance_A{}_paths.csv", label(a)));
            let mut table =
                Table::create(&path, &header(&["replica", "step", "squared_deviation"]))?;
            for (r, bary) in paths.iter().enumerate() {
                for (&t, &b) in sq.steps.iter().zip(bary) {
                    table.row(&[r.to_string(), t.to_string(), num((b - 0.5).powi(2))])?;
                }
                series.push(Series {
                    points: sq
                        .steps
                        .iter()
                        .map(|&t| t as f64)
                        .zip(bary.iter().map(|b| (b - 0.5).powi(2)))
                        .collect(),
                    dashed: true,
                });
            }
            outputs.push(table.finish()?);
        }
        if args.svg {
            let path = args.out_dir.join(format!("fig-variance_A{}.svg", label(a)));
            output::line_plot(
                &path,
                &format!("d = {d}, A = {a}"),
                "k",
                "(p̄ − ½)²",
                &series,
            )?;
            outputs.push(path);
        }
        let scale = d as f64 * a * a;
        let tail: Vec<f64> = sq
            .steps
            .iter()
            .zip(&sq.mean)
            .filter(|(&t, _)| t as f64 >= 20.0 * scale)
            .map(|(_, &v)| v)
            .collect();
        plateaus.push(json!({
            "A": a,
            "k": k,
            "plateau": if tail.is_empty() { None } else { Some(tail.iter().sum::<f64>() / tail.len() as f64) },
        }));
    }
    output::write_manifest(
        &args.out_dir.join("fig-variance.manifest.json"),
        "fig-variance",
        &args,
        Some(&network),
        &outputs,
        json!({ "runs": plateaus }),
    )?;
    Ok(())
}

/// Ten geometrically spaced values from 10 to 200, rounded to integers.
pub fn default_a_grid() -> Vec<f64> {
    (0..10)
        .map(|i| (10.0 * 20f64.powf(i as f64 / 9.0)).round())
        .collect()
}

pub fn fig_hitting(args: FigHittingArgs) -> Result<(), Failure> {
    let network = source::network(&args.network.network)?;
    check_replicas(args.replicas)?;
    check_delta(args.delta)?;
    if args.k_max == Some(0) {
        return Err(usage("--k-max must be positive"));
    }
    if matches!(args.which, Which::T) && network.isolated_vertices().next().is_some() {
        return Err(usage("T_δ needs every vertex to have a neighbor"));
    }
    output::ensure_dir(&args.out_dir)?;
    let grid = if args.a.is_empty() {
        default_a_grid()
    } else {
        args.a.clone()
    };
    let (kind, name) = match args.which {
        Which::T => (HittingKind::T, "T"),
        Which::Tprime => (HittingKind::TPrime, "Tprime"),
    };
    let mut rows = Vec::new();
    for &a in &grid {
        let params = sampler(network.clone(), a)?;
        let k_max = args.k_max.unwrap_or_else(|| default_k_max(&params));
        let results = hitting_times(&params, kind, args.delta, args.replicas, args.seed, k_max)?;
        rows.push((a, k_max, HittingSummary::from_results(&results)));
    }
    let path = args.out_dir.join(format!("fig-hitting_{name}.csv"));
    let mut table = Table::create(
        &path,
        &header(&["A", "mean", "std", "replicas", "censored", "k_max"]),
    )?;
    for (a, k_max, s) in &rows {
        table.row(&[
            num(*a),
            num(s.mean),
            num(s.std),
            s.replicas.to_string(),
            s.censored.to_string(),
            k_max.to_string(),
        ])?;
    }
    let mut outputs: Vec<PathBuf> = vec![table.finish()?];
    if args.svg {
        let band = |sign: f64| Series {
            points: rows
                .iter()
                .map(|(a, _, s)| (*a, s.mean + sign * s.std))
                .collect(),
            dashed: true,
        };
        let mean = Series {
            points: rows.iter().map(|(a, _, s)| (*a, s.mean)).collect(),
            dashed: false,
        };
        let path = args.out_dir.join(format!("fig-hitting_{name}.svg"));
        let title = format!("mean {name} at δ = {}", args.delta);
        output::line_plot(&path, &title, "A", "steps", &[band(-1.0), mean, band(1.0)])?;
        outputs.push(path);
    }
    let censored: usize = rows.iter().map(|r| r.2.censored).sum();
    output::write_manifest(
        &args
            .out_dir
            .join(format!("fig-hitting_{name}.manifest.json")),
        "fig-hitting",
        &args,
        Some(&network),
        &outputs,
        json!({ "A": grid, "censored": censored }),
    )?;
    Ok(())
}

pub fn stationary_oracle(args: OracleArgs) -> Result<(), Failure> {
    let network = source::network(&args.network.network)?;
    check_a(args.a)?;
    if args.count == 0 {
        return Err(usage("--count must be positive"));
    }
    let draws = rejection_sample_stationary(&network, args.a, args.count, args.seed)?;
    let d = network.d();
    let mut names: Vec<String> = (0..d).map(|i| format!("p{i}")).collect();
    names.extend(header(&["barycenter", "energy"]));
    let mut table = Table::create(&args.out, &names)?;
    for p in &draws.samples {
        let mut row: Vec<String> = p.iter().map(|&x| num(x)).collect();
        row.push(num(barycenter(&network, p)?));
        row.push(num(network.dirichlet_energy_pairwise(p)?));
        table.row(&row)?;
    }
    let csv = table.finish()?;
    output::write_manifest(
        &output::manifest_path(&args.out),
        "stationary-oracle",
        &args,
        Some(&network),
        &[csv],
        json!({ "proposals": draws.proposals, "pilot_rate": draws.pilot_rate }),
    )?;
    Ok(())
}
