use gibbs_lab::coupling::{is_below, max_gap, CoupledEnsemble, ROUNDING_SLACK};
use gibbs_lab::gibbs::{step, ChainState, SamplerParams, StepNoise};
use gibbs_lab::stats::barycenter;
use gibbs_lab::truncnorm::{quantile_at, TruncatedNormal};
use gibbs_lab::Network;
use proptest::prelude::*;

/// A connected network: a random spanning path plus random extra edges.
fn connected_network() -> impl Strategy<Value = Network> {
    (2usize..=16).prop_flat_map(|d| {
        let pairs = d * (d - 1) / 2;
        (
            Just(d),
            Just(()).prop_perturb(move |_, mut rng| {
                let mut order: Vec<usize> = (0..d).collect();
                for i in (1..d).rev() {
                    order.swap(i, rng.random_range(0..=i));
                }
                order
            }),
            prop::collection::vec(0.05f64..1.0, d - 1),
            prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..1.0], pairs),
        )
            .prop_map(|(d, order, spine, extra)| {
                let mut edges = Vec::new();
                for (w, pair) in spine.iter().zip(order.windows(2)) {
                    edges.push((pair[0], pair[1], *w));
                }
                let mut k = 0;
                for i in 0..d {
                    for j in (i + 1)..d {
                        if extra[k] > 0.0 {
                            edges.push((i, j, extra[k]));
                        }
                        k += 1;
                    }
                }
                Network::from_edges(d, &edges).unwrap()
            })
    })
}

fn with_points(n: usize) -> impl Strategy<Value = (Network, Vec<Vec<f64>>)> {
    connected_network().prop_flat_map(move |net| {
        let d = net.d();
        (
            Just(net),
            prop::collection::vec(prop::collection::vec(0.0f64..=1.0, d), n),
        )
    })
}

fn weighted_center(net: &Network, p: &[f64]) -> Vec<f64> {
    let mean = barycenter(net, p).unwrap();
    p.iter().map(|x| x - mean).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn laplacian_is_self_adjoint((net, pts) in with_points(2)) {
        let (p, q) = (&pts[0], &pts[1]);
        let lhs = net.weighted_inner(&net.laplacian_apply(p).unwrap(), q).unwrap();
        let rhs = net.weighted_inner(p, &net.laplacian_apply(q).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn spectral_inequalities((net, pts) in with_points(1)) {
        let s = net.spectral_summary().unwrap();
        let p = weighted_center(&net, &pts[0]);
        let norm = net.weighted_inner(&p, &p).unwrap();
        let energy = net.weighted_inner(&p, &net.laplacian_apply(&p).unwrap()).unwrap();
        prop_assert!(energy >= s.lambda * norm - 1e-10);

        let hat = net.one_step_average(&p).unwrap();
        let hat_norm = net.weighted_inner(&hat, &hat).unwrap();
        prop_assert!(hat_norm <= s.gamma * s.gamma * norm + 1e-10);

        // holds for any p, centered or not
        let raw = &pts[0];
        let lap = net.laplacian_apply(raw).unwrap();
        let lhs = net.weighted_inner(&lap, &lap).unwrap();
        let rhs = s.lambda * net.weighted_inner(raw, &lap).unwrap();
        prop_assert!(lhs >= rhs - 1e-10);
    }

    #[test]
    fn largest_degree_below_gamma(net in connected_network()) {
        let s = net.spectral_summary().unwrap();
        let top = net.degrees().iter().copied().fold(0.0, f64::max);
        prop_assert!(top <= s.gamma + 1e-12, "max c_i {} vs gamma {}", top, s.gamma);
        let total: f64 = net.degrees().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn truncnorm_reflection(sigma in 0.005f64..1.0, p in 0.0f64..=1.0) {
        let a = TruncatedNormal::new(sigma, p).unwrap();
        let b = TruncatedNormal::new(sigma, 1.0 - p).unwrap();
        prop_assert!((a.mean() + b.mean()).abs() <= 1e-12);
        prop_assert!((a.variance() - b.variance()).abs() <= 1e-12);
    }

    #[test]
    fn truncnorm_mean_and_variance_bounds(sigma in 0.005f64..=1.0, p in 0.0f64..=0.5) {
        let t = TruncatedNormal::new(sigma, p).unwrap();
        let cap = 2.0 * sigma * (-p * p / (2.0 * sigma * sigma)).exp();
        prop_assert!(t.mean() >= -1e-15 && t.mean() <= cap + 1e-15);
        // ρ̂ ≈ 0.078; 0.07 leaves room for the estimate's own resolution
        prop_assert!(t.variance() <= sigma * sigma * (1.0 + 1e-12));
        prop_assert!(t.variance() >= 0.07 * sigma * sigma);
    }

    #[test]
    fn quantile_is_monotone_and_lipschitz(
        sigma in 0.005f64..=1.0,
        q in 0.0f64..=1.0,
        frac in 0.0f64..=1.0,
        u in 0.0f64..=1.0,
        delta in prop_oneof![Just(1e-3), Just(0.1), Just(0.5)],
    ) {
        let p = (q + frac * delta).min(1.0);
        let gap = quantile_at(sigma, p, u) - quantile_at(sigma, q, u);
        prop_assert!(gap >= 0.0, "Γ(p) < Γ(q) by {:e}", -gap);
        prop_assert!(gap <= delta);
    }

    #[test]
    fn step_touches_one_coordinate((net, pts) in with_points(1), seed in any::<(u64, f64)>()) {
        let d = net.d();
        let params = SamplerParams::new(net, 25.0).unwrap();
        let index = (seed.0 % d as u64) as usize;
        let u = seed.1.abs().fract();
        let state = ChainState::new(pts[0].clone()).unwrap();
        let next = step(&state, &params, StepNoise { index, u });
        for i in 0..d {
            prop_assert!((0.0..=1.0).contains(&next.p[i]));
            if i != index {
                prop_assert_eq!(next.p[i].to_bits(), state.p[i].to_bits());
            }
        }
    }

    #[test]
    fn step_commutes_with_reflection((net, pts) in with_points(1), index in 0usize..16, u in 0.0f64..1.0) {
        let d = net.d();
        let index = index % d;
        let params = SamplerParams::new(net, 12.0).unwrap();
        let up = step(&ChainState::new(pts[0].clone()).unwrap(), &params, StepNoise { index, u });
        let flipped: Vec<f64> = pts[0].iter().map(|x| 1.0 - x).collect();
        let down = step(&ChainState::new(flipped).unwrap(), &params, StepNoise { index, u: 1.0 - u });
        prop_assert!((up.p[index] + down.p[index] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn coupled_steps_keep_order((net, pts) in with_points(2), noise in prop::collection::vec((0usize..16, 0.0f64..1.0), 200)) {
        let d = net.d();
        let params = SamplerParams::new(net, 8.0).unwrap();
        let lower: Vec<f64> = pts[0].iter().zip(&pts[1]).map(|(a, b)| a.min(*b)).collect();
        let upper: Vec<f64> = pts[0].iter().zip(&pts[1]).map(|(a, b)| a.max(*b)).collect();
        let mut e = CoupledEnsemble::from_points(vec![lower, upper]).unwrap().with_order(0, 1).unwrap();
        let mut gap = max_gap(&e.states()[0].p, &e.states()[1].p);
        for (i, u) in noise {
            e.step(&params, StepNoise { index: i % d, u }).unwrap();
            let (lo, hi) = (&e.states()[0].p, &e.states()[1].p);
            prop_assert!(e.worst_breach() <= ROUNDING_SLACK);
            let new_gap = max_gap(lo, hi);
            prop_assert!(new_gap <= gap + ROUNDING_SLACK);
            gap = new_gap;
            if is_below(lo, hi) {
                let net = params.network();
                prop_assert!(barycenter(net, lo).unwrap() <= barycenter(net, hi).unwrap());
            }
        }
    }
}
