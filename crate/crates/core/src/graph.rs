//! Colored simple graphs, G(n,p) sampling and initial coloring schemes.
//!
//! Adjacency is stored as `n` rows of packed 64-bit words so that counting
//! the color-1 neighbors of a vertex is a popcount of its row against the
//! color-1 mask.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, StreamRng};

/// One of the two vertex colors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Color {
    One,
    Two,
}

impl Color {
    /// Signed label: `+1` for color 1 and `-1` for color 2.
    pub fn label(self) -> i64 {
        match self {
            Color::One => 1,
            Color::Two => -1,
        }
    }

    /// The opposite color.
    pub fn other(self) -> Color {
        match self {
            Color::One => Color::Two,
            Color::Two => Color::One,
        }
    }

    /// Parses `'1'` or `'2'`.
    pub fn from_digit(c: char) -> Option<Color> {
        match c {
            '1' => Some(Color::One),
            '2' => Some(Color::Two),
            _ => None,
        }
    }
}

impl From<Color> for u8 {
    fn from(c: Color) -> u8 {
        match c {
            Color::One => 1,
            Color::Two => 2,
        }
    }
}

impl TryFrom<u8> for Color {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Color::One),
            2 => Ok(Color::Two),
            other => Err(format!("color must be 1 or 2, got {other}")),
        }
    }
}

/// Parses a color string such as `"1121"`.
pub fn parse_colors(s: &str) -> Result<Vec<Color>> {
    s.chars()
        .map(|c| {
            Color::from_digit(c).ok_or_else(|| Error::InvalidArgument(format!("bad color character {c:?} in {s:?}")))
        })
        .collect()
}

/// Unordered vertex pairs of `K_n` in lexicographic order.
///
/// Bit `i` of an edge mask refers to the `i`-th pair of this list.
pub fn pair_list(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            pairs.push((u, v));
        }
    }
    pairs
}

/// Symmetric, irreflexive adjacency stored as packed bit rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    degree: Vec<u32>,
}

impl Adjacency {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Adjacency {
            n,
            words,
            rows: vec![0; n * words],
            degree: vec![0; n],
        }
    }

    /// The complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut adj = Adjacency::empty(n);
        for (u, v) in pair_list(n) {
            adj.insert(u, v);
        }
        adj
    }

    /// Builds an adjacency from an edge list, rejecting loops and
    /// out-of-range endpoints. Repeated edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = Adjacency::empty(n);
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
            }
            adj.insert(u, v);
        }
        Ok(adj)
    }

    /// Builds the graph whose edges are the set bits of `mask` over
    /// [`pair_list`]`(n)`.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let mut adj = Adjacency::empty(n);
        for (i, (u, v)) in pair_list(n).into_iter().enumerate() {
            if mask >> i & 1 == 1 {
                adj.insert(u, v);
            }
        }
        adj
    }

    fn insert(&mut self, u: usize, v: usize) {
        if self.has_edge(u, v) {
            return;
        }
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
        self.degree[u] += 1;
        self.degree[v] += 1;
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Words per packed row.
    pub fn words_per_row(&self) -> usize {
        self.words
    }

    /// Packed neighbor bits of `v`.
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    /// Whether `u` and `v` are adjacent.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Degree of `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.degree[v] as usize
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(wi, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// Edge list with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.degree.iter().map(|&d| d as usize).sum::<usize>() / 2
    }
}

/// JSON snapshot `{n, edges: [[u,v],...], colors: [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSnapshot {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub colors: Vec<Color>,
}

/// A simple graph together with a two-coloring of its vertices.
///
/// Immutable once built. The adjacency is reference counted so that
/// successive days of the dynamics share it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    adj: Arc<Adjacency>,
    colors: Vec<Color>,
    mask1: Vec<u64>,
    c1: usize,
}

impl ColoredGraph {
    /// Pairs an adjacency with a coloring of the same length.
    pub fn new(adj: Arc<Adjacency>, colors: Vec<Color>) -> Result<Self> {
        if colors.len() != adj.n() {
            return Err(Error::InvalidArgument(format!(
                "{} colors given for {} vertices",
                colors.len(),
                adj.n()
            )));
        }
        let mut mask1 = vec![0u64; adj.words_per_row()];
        let mut c1 = 0;
        for (v, &c) in colors.iter().enumerate() {
            if c == Color::One {
                mask1[v / 64] |= 1 << (v % 64);
                c1 += 1;
            }
        }
        Ok(ColoredGraph { adj, colors, mask1, c1 })
    }

    /// Builds a colored graph from an explicit edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], colors: Vec<Color>) -> Result<Self> {
        ColoredGraph::new(Arc::new(Adjacency::from_edges(n, edges)?), colors)
    }

    /// Same adjacency, new coloring.
    pub fn with_colors(&self, colors: Vec<Color>) -> Result<Self> {
        ColoredGraph::new(Arc::clone(&self.adj), colors)
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.adj.n()
    }

    /// Shared adjacency.
    pub fn adjacency(&self) -> &Arc<Adjacency> {
        &self.adj
    }

    /// Color of `v`.
    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    /// All colors, indexed by vertex.
    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    /// Packed mask of color-1 vertices.
    pub fn color_one_mask(&self) -> &[u64] {
        &self.mask1
    }

    /// `(c1, c2)`.
    pub fn counts(&self) -> (usize, usize) {
        (self.c1, self.n() - self.c1)
    }

    /// The common color if the coloring is monochromatic.
    pub fn unanimous(&self) -> Option<Color> {
        match self.c1 {
            c if c == self.n() => Some(Color::One),
            0 => Some(Color::Two),
            _ => None,
        }
    }

    /// Whether `u` and `v` are adjacent.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.has_edge(u, v)
    }

    /// Degree of `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.adj.degree(v)
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj.neighbors(v)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// Number of color-1 neighbors of `v`; unchecked.
    pub(crate) fn color_one_neighbors(&self, v: usize) -> usize {
        self.adj
            .row(v)
            .iter()
            .zip(&self.mask1)
            .map(|(r, m)| (r & m).count_ones() as usize)
            .sum()
    }

    /// `(d1, d2)` for `v` with vertex `skip` removed from the graph; unchecked.
    pub(crate) fn split_without(&self, v: usize, skip: usize) -> (usize, usize) {
        let (mut d1, mut d2) = (self.color_one_neighbors(v), self.degree(v));
        d2 -= d1;
        if v != skip && self.has_edge(v, skip) {
            match self.colors[skip] {
                Color::One => d1 -= 1,
                Color::Two => d2 -= 1,
            }
        }
        (d1, d2)
    }

    /// Number of neighbors of `v` of each color, `(d1, d2)`.
    pub fn degree_split(&self, v: usize) -> Result<(usize, usize)> {
        self.check_vertex(v)?;
        let d1 = self.color_one_neighbors(v);
        Ok((d1, self.degree(v) - d1))
    }

    /// Serializable snapshot.
    pub fn snapshot(&self) -> GraphSnapshot {
        GraphSnapshot {
            n: self.n(),
            edges: self.adj.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            colors: self.colors.clone(),
        }
    }

    /// Rebuilds a graph from a snapshot.
    pub fn from_snapshot(s: &GraphSnapshot) -> Result<Self> {
        let edges: Vec<(usize, usize)> = s.edges.iter().map(|e| (e[0], e[1])).collect();
        ColoredGraph::from_edges(s.n, &edges, s.colors.clone())
    }

    /// Snapshot as a JSON string.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.snapshot())?)
    }

    /// Parses a JSON snapshot.
    pub fn from_json(s: &str) -> Result<Self> {
        ColoredGraph::from_snapshot(&serde_json::from_str(s)?)
    }
}

/// `(d1, d2)` for vertex `v` of `g`.
pub fn degree_split(g: &ColoredGraph, v: usize) -> Result<(usize, usize)> {
    g.degree_split(v)
}

/// Initial coloring scheme.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColoringScheme {
    /// Exactly `n/2 + delta` vertices of color 1, placed by a seeded
    /// permutation. The gap is stored doubled so it stays integral.
    FixedGap { twice_delta: u64 },
    /// Independent fair labels.
    RandomHalf,
    /// Independent labels, color 1 with probability `q1`.
    RandomBiased { q1: f64 },
}

impl ColoringScheme {
    /// `FixedGap` from a (possibly half-integral) gap.
    pub fn fixed_gap(delta: f64) -> Result<Self> {
        let twice = 2.0 * delta;
        if twice.is_nan() || twice < 0.0 || twice.fract() != 0.0 || twice > u64::MAX as f64 {
            return Err(Error::InvalidArgument(format!(
                "gap {delta} must be a nonnegative multiple of 1/2"
            )));
        }
        Ok(ColoringScheme::FixedGap {
            twice_delta: twice as u64,
        })
    }

    /// The gap for `FixedGap`, `None` otherwise.
    pub fn delta(&self) -> Option<f64> {
        match *self {
            ColoringScheme::FixedGap { twice_delta } => Some(twice_delta as f64 / 2.0),
            _ => None,
        }
    }

    /// Checks the scheme against a vertex count.
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            ColoringScheme::FixedGap { twice_delta } => {
                let parity_ok = (n as u64 + twice_delta) % 2 == 0;
                if !parity_ok || twice_delta > n as u64 {
                    return Err(Error::IncompatibleGap { n, twice_delta });
                }
            }
            ColoringScheme::RandomHalf => {}
            ColoringScheme::RandomBiased { q1 } => {
                if !(0.0..=1.0).contains(&q1) {
                    return Err(Error::InvalidProbability(q1));
                }
            }
        }
        Ok(())
    }

    /// Draws a coloring of `n` vertices.
    pub fn assign(&self, n: usize, rng: &mut StreamRng) -> Result<Vec<Color>> {
        self.validate(n)?;
        Ok(match *self {
            ColoringScheme::FixedGap { twice_delta } => {
                let c1 = (n + twice_delta as usize) / 2;
                let mut colors: Vec<Color> = (0..n).map(|v| if v < c1 { Color::One } else { Color::Two }).collect();
                colors.shuffle(rng);
                colors
            }
            ColoringScheme::RandomHalf => (0..n)
                .map(|_| if rng.random_bool(0.5) { Color::One } else { Color::Two })
                .collect(),
            ColoringScheme::RandomBiased { q1 } => (0..n)
                .map(|_| if rng.random_bool(q1) { Color::One } else { Color::Two })
                .collect(),
        })
    }
}

/// Parameters of one G(n,p) draw.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphParams {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

/// Samples the edge set of G(n,p).
///
/// Pairs are visited in lexicographic order and the gaps between present
/// pairs are drawn from the geometric distribution, so the cost is
/// proportional to the number of edges rather than to `n^2`.
pub fn sample_adjacency(n: usize, p: f64, rng: &mut StreamRng) -> Result<Adjacency> {
    check_probability(p)?;
    if p == 1.0 {
        return Ok(Adjacency::complete(n));
    }
    let mut adj = Adjacency::empty(n);
    let total = (n * n.saturating_sub(1) / 2) as u64;
    if p == 0.0 || total == 0 {
        return Ok(adj);
    }
    let log_q = (-p).ln_1p();
    let (mut row, mut row_start, mut row_end) = (0usize, 0u64, (n - 1) as u64);
    // `cursor` is the first pair index not yet decided.
    let mut cursor: u64 = 0;
    loop {
        let u: f64 = 1.0 - rng.random::<f64>();
        let skip = (u.ln() / log_q).floor();
        if skip >= (total - cursor) as f64 {
            break;
        }
        let pos = cursor + skip as u64;
        while pos >= row_end {
            row += 1;
            row_start = row_end;
            row_end += (n - 1 - row) as u64;
        }
        adj.insert(row, row + 1 + (pos - row_start) as usize);
        cursor = pos + 1;
        if cursor >= total {
            break;
        }
    }
    Ok(adj)
}

/// Samples a colored G(n,p) from an explicit stream: the coloring is drawn
/// first, then the edges.
pub fn sample_gnp_with(n: usize, p: f64, scheme: &ColoringScheme, rng: &mut StreamRng) -> Result<ColoredGraph> {
    check_probability(p)?;
    let colors = scheme.assign(n, rng)?;
    let adj = sample_adjacency(n, p, rng)?;
    ColoredGraph::new(Arc::new(adj), colors)
}

/// Samples a colored G(n,p) from `params.seed`.
pub fn sample_gnp(params: &GraphParams, scheme: &ColoringScheme) -> Result<ColoredGraph> {
    let mut rng = rng::split(params.seed, 0);
    sample_gnp_with(params.n, params.p, scheme, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3(colors: &str) -> ColoredGraph {
        ColoredGraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)], parse_colors(colors).unwrap()).unwrap()
    }

    #[test]
    fn complete_graph_when_p_is_one() {
        let g = sample_gnp(
            &GraphParams { n: 3, p: 1.0, seed: 1 },
            &ColoringScheme::fixed_gap(0.5).unwrap(),
        )
        .unwrap();
        assert_eq!(g.adjacency().edge_count(), 3);
        assert_eq!(g.counts(), (2, 1));
    }

    #[test]
    fn empty_graph_when_p_is_zero() {
        let g = sample_gnp(
            &GraphParams { n: 4, p: 0.0, seed: 1 },
            &ColoringScheme::fixed_gap(2.0).unwrap(),
        )
        .unwrap();
        assert_eq!(g.adjacency().edge_count(), 0);
        assert_eq!(g.counts(), (4, 0));
    }

    #[test]
    fn same_seed_same_graph() {
        let params = GraphParams { n: 5, p: 0.5, seed: 42 };
        let a = sample_gnp(&params, &ColoringScheme::RandomHalf).unwrap();
        let b = sample_gnp(&params, &ColoringScheme::RandomHalf).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_probability_and_gap() {
        let bad_p = GraphParams { n: 4, p: 1.5, seed: 0 };
        assert!(matches!(
            sample_gnp(&bad_p, &ColoringScheme::RandomHalf),
            Err(Error::InvalidProbability(_))
        ));
        let params = GraphParams { n: 4, p: 0.5, seed: 0 };
        for delta in [0.5, 3.0] {
            assert!(matches!(
                sample_gnp(&params, &ColoringScheme::fixed_gap(delta).unwrap()),
                Err(Error::IncompatibleGap { .. })
            ));
        }
        assert!(ColoringScheme::fixed_gap(0.3).is_err());
    }

    #[test]
    fn degree_split_examples() {
        assert_eq!(k3("112").degree_split(2).unwrap(), (2, 0));
        let empty = ColoredGraph::from_edges(3, &[], parse_colors("121").unwrap()).unwrap();
        for v in 0..3 {
            assert_eq!(degree_split(&empty, v).unwrap(), (0, 0));
        }
        let c4 = ColoredGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], parse_colors("1212").unwrap()).unwrap();
        assert_eq!(c4.degree_split(0).unwrap(), (0, 2));
        assert!(matches!(
            c4.degree_split(4),
            Err(Error::VertexOutOfRange { vertex: 4, n: 4 })
        ));
    }

    #[test]
    fn fixed_gap_count_difference_is_exact() {
        for (n, delta) in [(10usize, 0.0), (11, 0.5), (11, 3.5), (100, 50.0)] {
            let g = sample_gnp(
                &GraphParams { n, p: 0.2, seed: 3 },
                &ColoringScheme::fixed_gap(delta).unwrap(),
            )
            .unwrap();
            let (c1, c2) = g.counts();
            assert_eq!(c1 as f64 - c2 as f64, 2.0 * delta);
        }
    }

    #[test]
    fn snapshot_round_trip() {
        let g = sample_gnp(&GraphParams { n: 70, p: 0.1, seed: 8 }, &ColoringScheme::RandomHalf).unwrap();
        let back = ColoredGraph::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn pair_mask_matches_pair_list() {
        let adj = Adjacency::from_pair_mask(4, 0b100101);
        let pairs = pair_list(4);
        assert_eq!(adj.edges(), vec![pairs[0], pairs[2], pairs[5]]);
    }
}
