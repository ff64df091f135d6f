use majlab_core::rng::split;
use majlab_core::{sample_gnp, sample_gnp_with, Color, ColoringScheme, GraphParams};

#[test]
fn every_pair_has_the_right_edge_frequency() {
    let (n, p, samples) = (30usize, 0.3, 10_000u64);
    let mut hits = vec![0u64; n * n];
    for t in 0..samples {
        let g = sample_gnp_with(n, p, &ColoringScheme::RandomHalf, &mut split(11, t)).unwrap();
        for (u, v) in g.adjacency().edges() {
            hits[u * n + v] += 1;
        }
    }
    let se = (p * (1.0 - p) / samples as f64).sqrt();
    for u in 0..n {
        for v in u + 1..n {
            let freq = hits[u * n + v] as f64 / samples as f64;
            assert!((freq - p).abs() <= 4.0 * se, "pair ({u}, {v}) frequency {freq}");
        }
    }
}

#[test]
fn bichromatic_edges_are_double_counted_consistently() {
    for seed in 0..50 {
        let g = sample_gnp(&GraphParams { n: 40, p: 0.2, seed }, &ColoringScheme::RandomHalf).unwrap();
        let from_splits: usize = (0..40)
            .filter(|&v| g.color(v) == Color::Two)
            .map(|v| g.degree_split(v).unwrap().0)
            .sum();
        let direct = g
            .adjacency()
            .edges()
            .iter()
            .filter(|&&(u, v)| g.color(u) != g.color(v))
            .count();
        assert_eq!(from_splits, direct);
    }
}

#[test]
fn fixed_gap_difference_is_twice_delta() {
    for (n, delta) in [(10usize, 0.0), (11, 0.5), (11, 5.5), (100, 17.0), (7, 3.5)] {
        let scheme = ColoringScheme::fixed_gap(delta).unwrap();
        for seed in 0..20 {
            let g = sample_gnp(&GraphParams { n, p: 0.5, seed }, &scheme).unwrap();
            let (c1, c2) = g.counts();
            assert_eq!(c1 as f64 - c2 as f64, 2.0 * delta);
        }
    }
}

#[test]
fn fixed_gap_placement_is_permuted() {
    let scheme = ColoringScheme::fixed_gap(0.0).unwrap();
    let firsts: usize = (0..200)
        .filter(|&seed| {
            let g = sample_gnp(&GraphParams { n: 10, p: 0.5, seed }, &scheme).unwrap();
            g.color(0) == Color::One
        })
        .count();
    assert!(
        (60..140).contains(&firsts),
        "vertex 0 got color 1 in {firsts} of 200 draws"
    );
}
