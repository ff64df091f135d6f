use std::sync::Arc;

use majlab_core::rng::split;
use majlab_core::{
    compute_r_hat, compute_s_sets, next_colors, sample_adjacency, sample_gnp_with, Adjacency, Color, ColoredGraph,
    ColoringScheme, UpdateRule,
};
use proptest::prelude::*;
use rand::Rng;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

/// Replaces every edge touching a vertex of `focal` (other than edges
/// inside `focal`) by a fresh coin flip.
fn rewire(g: &ColoredGraph, focal: &[usize], p: f64, seed: u64) -> ColoredGraph {
    let n = g.n();
    let mut rng = split(seed, 99);
    let mut edges: Vec<(usize, usize)> = g
        .adjacency()
        .edges()
        .into_iter()
        .filter(|&(a, b)| focal.contains(&a) == focal.contains(&b))
        .collect();
    for &f in focal {
        for x in (0..n).filter(|x| !focal.contains(x)) {
            if rng.random_bool(p) {
                edges.push((f.min(x), f.max(x)));
            }
        }
    }
    ColoredGraph::from_edges(n, &edges, g.colors().to_vec()).unwrap()
}

fn toggled(g: &ColoredGraph, w: usize, u: usize, v: usize, to_u: bool, to_v: bool) -> ColoredGraph {
    let mut edges: Vec<(usize, usize)> = g
        .adjacency()
        .edges()
        .into_iter()
        .filter(|&(a, b)| !((a == w || b == w) && (a == u || b == u || a == v || b == v)))
        .collect();
    if to_u {
        edges.push((w.min(u), w.max(u)));
    }
    if to_v {
        edges.push((w.min(v), w.max(v)));
    }
    ColoredGraph::from_edges(g.n(), &edges, g.colors().to_vec()).unwrap()
}

fn color_one_pair(g: &ColoredGraph) -> Option<(usize, usize)> {
    let ones: Vec<usize> = (0..g.n()).filter(|&v| g.color(v) == Color::One).collect();
    (ones.len() >= 2).then(|| (ones[0], ones[1]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn r_hat_ignores_edges_at_w(n in 2usize..40, p in 0.05f64..0.9, seed in any::<u64>(), w_raw in any::<usize>()) {
        let g = sample_gnp_with(n, p, &ColoringScheme::RandomHalf, &mut split(seed, 0)).unwrap();
        let w = w_raw % n;
        let h = rewire(&g, &[w], p, seed);
        prop_assert_eq!(compute_r_hat(&g, w).unwrap(), compute_r_hat(&h, w).unwrap());
    }

    #[test]
    fn s_sets_ignore_edges_at_the_focal_pair(n in 3usize..40, p in 0.05f64..0.9, seed in any::<u64>()) {
        let g = sample_gnp_with(n, p, &ColoringScheme::RandomHalf, &mut split(seed, 0)).unwrap();
        let Some((u, v)) = color_one_pair(&g) else { return Ok(()) };
        let h = rewire(&g, &[u, v], p, seed);
        let a = compute_s_sets(&g, u, v).unwrap();
        let b = compute_s_sets(&h, u, v).unwrap();
        prop_assert_eq!((a.s1, a.s2, a.s_star), (b.s1, b.s2, b.s_star));
    }

    #[test]
    fn membership_predicts_day_one_colors(n in 3usize..25, p in 0.05f64..0.9, seed in any::<u64>()) {
        let g = sample_gnp_with(n, p, &ColoringScheme::RandomHalf, &mut split(seed, 0)).unwrap();
        let Some((u, v)) = color_one_pair(&g) else { return Ok(()) };
        let sets = compute_s_sets(&g, u, v).unwrap();
        for (members, rule) in [
            (&sets.s1, (|a: bool, b: bool| a || b) as fn(bool, bool) -> bool),
            (&sets.s_star, |a, b| a && b),
        ] {
            for &w in members.iter() {
                for (a, b) in [(true, false), (false, true), (true, true), (false, false)] {
                    let day1 = next_colors(&toggled(&g, w, u, v, a, b), UpdateRule::Standard);
                    if a || b || std::ptr::eq(members, &sets.s_star) {
                        prop_assert_eq!(day1[w] == Color::One, rule(a, b));
                    }
                }
            }
        }
        for &w in &sets.s2 {
            for (a, b) in [(true, false), (false, true), (true, true), (false, false)] {
                let day1 = next_colors(&toggled(&g, w, u, v, a, b), UpdateRule::Standard);
                prop_assert_eq!(day1[w], Color::Two);
            }
        }
    }
}

/// With the graph off the focal pair fixed, `I` is Bin(|S*|, p^2) over
/// fresh edges from `u` and `v`.
#[test]
fn double_neighbor_count_is_binomial() {
    let (n, p) = (60usize, 0.3);
    let base = (0..)
        .map(|seed| sample_gnp_with(n, p, &ColoringScheme::fixed_gap(0.0).unwrap(), &mut split(seed, 0)).unwrap())
        .find(|g| {
            let (u, v) = color_one_pair(g).unwrap();
            compute_s_sets(g, u, v).unwrap().s_star.len() >= 6
        })
        .unwrap();
    let (u, v) = color_one_pair(&base).unwrap();
    let m = compute_s_sets(&base, u, v).unwrap().s_star.len() as u64;
    let samples = 10_000u64;
    let mut counts = vec![0u64; m as usize + 1];
    for t in 0..samples {
        let g = rewire(&base, &[u, v], p, t);
        counts[compute_s_sets(&g, u, v).unwrap().i_g] += 1;
    }
    let bin = Binomial::new(p * p, m).unwrap();
    let expected: Vec<f64> = (0..=m).map(|k| bin.pmf(k) * samples as f64).collect();
    // Pool the upper tail so every bin expects at least five draws.
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for k in 0..=m as usize {
        obs += counts[k] as f64;
        exp += expected[k];
        let rest: f64 = expected[k + 1..].iter().sum();
        if exp >= 5.0 && rest >= 5.0 {
            bins.push((obs, exp));
            (obs, exp) = (0.0, 0.0);
        }
    }
    bins.push((obs, exp));
    let stat: f64 = bins.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let df = (bins.len() - 1) as f64;
    let p_value = 1.0 - ChiSquared::new(df).unwrap().cdf(stat);
    assert!(
        p_value > 1e-3,
        "chi-square {stat} on {df} dof, p = {p_value}, bins {bins:?}"
    );
}

#[test]
fn adjacency_from_sampler_is_symmetric() {
    let adj: Adjacency = sample_adjacency(50, 0.4, &mut split(3, 0)).unwrap();
    for u in 0..50 {
        assert!(!adj.has_edge(u, u));
        for v in 0..50 {
            assert_eq!(adj.has_edge(u, v), adj.has_edge(v, u));
        }
    }
    let g = ColoredGraph::new(Arc::new(adj), vec![Color::One; 50]).unwrap();
    assert_eq!(g.counts(), (50, 0));
}
