//! Property-based invariants of the walk, gradient, and configuration layers
//! on randomly generated connected weighted graphs.

use proptest::prelude::*;

use subgauss::config::{parse_config_str, ExperimentConfig};
use subgauss::function::{lp_norm, VertexFunction};
use subgauss::graph::WeightedGraph;
use subgauss::markov::{apply_markov, gradient_length};
use subgauss::riesz::{riesz_ratio, Method, MethodContext};
use subgauss::spectral::spectral_decompose;

/// A connected weighted graph: a random-weight path as the spine plus a
/// handful of random extra edges (including possible self-loops).
fn graph_strategy() -> impl Strategy<Value = WeightedGraph> {
    (2usize..30)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(0.1f64..10.0, n - 1),
                prop::collection::vec((0usize..n * n, 0.1f64..10.0), 0..8),
            )
        })
        .prop_map(|(n, spine, extras)| {
            let mut edges: Vec<(usize, usize, f64)> = spine
                .into_iter()
                .enumerate()
                .map(|(i, w)| (i, i + 1, w))
                .collect();
            let mut seen: std::collections::HashSet<(usize, usize)> =
                edges.iter().map(|&(u, v, _)| (u, v)).collect();
            for (code, w) in extras {
                let (u, v) = (code / n, code % n);
                let key = (u.min(v), u.max(v));
                if seen.insert(key) {
                    edges.push((key.0, key.1, w));
                }
            }
            WeightedGraph::from_edges(n, &edges).unwrap()
        })
}

fn function_on(g: &WeightedGraph, values: &[f64]) -> VertexFunction {
    let vals: Vec<f64> = (0..g.n_vertices())
        .map(|i| values[i % values.len()])
        .collect();
    VertexFunction::new(g, vals).unwrap()
}

proptest! {
    /// P has row sums one: constants are fixed points.
    #[test]
    fn markov_preserves_constants(g in graph_strategy(), c in -5.0f64..5.0) {
        let f = VertexFunction::constant(&g, c);
        let pf = apply_markov(&g, &f).unwrap();
        for &v in pf.values() {
            prop_assert!((v - c).abs() <= 1e-12 * (1.0 + c.abs()));
        }
    }

    /// P is a sup-norm contraction.
    #[test]
    fn markov_sup_contraction(
        g in graph_strategy(),
        values in prop::collection::vec(-10.0f64..10.0, 1..30),
    ) {
        let f = function_on(&g, &values);
        let pf = apply_markov(&g, &f).unwrap();
        let before = lp_norm(&g, &f, f64::INFINITY).unwrap();
        let after = lp_norm(&g, &pf, f64::INFINITY).unwrap();
        prop_assert!(after <= before * (1.0 + 1e-12));
    }

    /// Ball volumes are nondecreasing in the radius and start at m(x).
    #[test]
    fn ball_volume_monotone(g in graph_strategy(), x in 0usize..30) {
        let x = x % g.n_vertices();
        let dist = g.bfs_distances(x);
        let mut prev = 0.0;
        for r in 0..=g.eccentricity(x) {
            let v = g.ball_volume(&dist, r);
            prop_assert!(v >= prev);
            prev = v;
        }
        prop_assert!((g.ball_volume(&dist, 0) - g.measure(x)).abs() <= 1e-12 * g.measure(x));
    }

    /// The local average bound: |grad f(x)| is controlled by the L^1 mean of
    /// |f| on the 1-ball, with the explicit constant sqrt(2) V(x,1) / m_min.
    #[test]
    fn gradient_local_average_bound(
        g in graph_strategy(),
        values in prop::collection::vec(-10.0f64..10.0, 1..30),
    ) {
        let f = function_on(&g, &values);
        let grad = gradient_length(&g, &f).unwrap();
        for x in 0..g.n_vertices() {
            let dist = g.bfs_distances(x);
            let volume = g.ball_volume(&dist, 1);
            let mut m_min = g.measure(x);
            let mut l1 = f.values()[x].abs() * g.measure(x);
            for &(y, _) in g.neighbors(x) {
                if y != x {
                    m_min = m_min.min(g.measure(y));
                    l1 += f.values()[y].abs() * g.measure(y);
                }
            }
            let constant = 2f64.sqrt() * volume / m_min;
            let bound = constant / volume * l1;
            prop_assert!(
                grad.values()[x] <= bound * (1.0 + 1e-12),
                "vertex {}: {} > {}", x, grad.values()[x], bound
            );
        }
    }

    /// The Riesz ratio is exactly scale-invariant in f.
    #[test]
    fn riesz_ratio_homogeneous(
        g in graph_strategy(),
        values in prop::collection::vec(-10.0f64..10.0, 2..30),
        c in prop::sample::select(vec![0.013, 0.7, 3.0, 250.0]),
    ) {
        let f = function_on(&g, &values);
        if f.mean_zero(&g).values().iter().all(|v| v.abs() < 1e-9) {
            return Ok(()); // essentially constant: the ratio is degenerate
        }
        let dec = spectral_decompose(&g, 2000).unwrap();
        let ctx = MethodContext::with_spectral(&dec);
        let a = riesz_ratio(&g, &f, 2.0, 0.4, Method::Spectral, &ctx);
        let b = riesz_ratio(&g, &f.scale(c), 2.0, 0.4, Method::Spectral, &ctx);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() <= 1e-9 * a.abs()),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "one side degenerate: {a:?} vs {b:?}"),
        }
    }

    /// Configs round-trip through their canonical text form.
    #[test]
    fn config_roundtrip(
        level in 1usize..6,
        laziness in 0.0f64..0.9,
        seed in 0u64..1000,
        p_grid in prop::collection::vec(1.5f64..6.0, 1..4),
        gamma_grid in prop::collection::vec(0.05f64..0.95, 1..4),
    ) {
        let text = format!(
            "family = vicsek\nlevel = {level}\nlaziness = {laziness}\nseed = {seed}\n\
             p_grid = {}\ngamma_grid = {}\n",
            p_grid.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            gamma_grid.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        );
        let cfg: ExperimentConfig = parse_config_str(&text).unwrap();
        let normal = cfg.emit();
        let cfg2 = parse_config_str(&normal).unwrap();
        prop_assert_eq!(normal, cfg2.emit());
    }
}
