use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use gibbs_lab::builtin::complete;
use gibbs_lab::truncnorm::quantile_at;
use gibbs_lab::{ChainState, CoupledEnsemble, NoiseStream};
use gibbs_lab_bench::complete_params;

fn quantile(c: &mut Criterion) {
    let mut g = c.benchmark_group("quantile");
    // centre of the window, one wall in the far tail, and the near-uniform regime
    for (name, sigma, p) in [
        ("centre", 0.1, 0.5),
        ("wall", 0.005, 0.001),
        ("flat", 5.0, 0.3),
    ] {
        g.bench_function(name, |b| {
            let mut u = 0.0;
            b.iter(|| {
                u = (u + 0.618_033_988_749_895) % 1.0;
                quantile_at(black_box(sigma), black_box(p), u)
            })
        });
    }
    g.finish();
}

fn kernel_step(c: &mut Criterion) {
    const STEPS: u64 = 10_000;
    let mut g = c.benchmark_group("kernel");
    g.throughput(Throughput::Elements(STEPS));
    for (d, a) in [(8, 300.0), (64, 50.0)] {
        let params = complete_params(d, a);
        g.bench_with_input(
            BenchmarkId::new("steps", format!("d{d}_A{a}")),
            &params,
            |b, params| {
                let mut stream = NoiseStream::new(0, 0);
                let mut state = ChainState::constant(d, 0.5).unwrap();
                b.iter(|| {
                    for _ in 0..STEPS {
                        params.advance(&mut state, stream.next_noise(d));
                    }
                    black_box(state.p[0])
                })
            },
        );
    }
    g.finish();
}

fn coupled_step(c: &mut Criterion) {
    const STEPS: u64 = 10_000;
    let d = 8;
    let params = complete_params(d, 300.0);
    let mut g = c.benchmark_group("coupled");
    g.throughput(Throughput::Elements(STEPS));
    g.bench_function("sandwich_d8_A300", |b| {
        let mut stream = NoiseStream::new(0, 0);
        let mut ensemble =
            CoupledEnsemble::from_points(vec![vec![0.0; d], vec![0.5; d], vec![1.0; d]]).unwrap();
        b.iter(|| {
            let mut broken = 0;
            for _ in 0..STEPS {
                broken += ensemble.step(&params, stream.next_noise(d)).unwrap();
            }
            black_box(broken)
        })
    });
    g.finish();
}

fn spectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectral_summary");
    for d in [8, 64] {
        let network = complete(d).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(d), &network, |b, n| {
            b.iter(|| n.spectral_summary().unwrap().lambda)
        });
    }
    g.finish();
}

criterion_group!(benches, quantile, kernel_step, coupled_step, spectrum);
criterion_main!(benches);
