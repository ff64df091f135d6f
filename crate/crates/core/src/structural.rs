//! Structural vertex sets of a colored graph: the day-1 predictor `R̂_w`,
//! the partition `S1 / S2 / S*` of `V \ {u, v}` for two color-1 focal
//! vertices, and the double-neighbor count `I`.

use serde::{Deserialize, Serialize};

use crate::dynamics::{next_colors, UpdateRule};
use crate::error::{Error, Result};
use crate::graph::{Color, ColoredGraph};

/// Which part of the `u, v` partition a vertex belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SPart {
    /// Color 1 on day 1 as soon as it is adjacent to `u` or `v`.
    S1,
    /// Color 2 on day 1 whatever its edges to `u` and `v`.
    S2,
    /// Color 1 on day 1 exactly when adjacent to both `u` and `v`.
    SStar,
}

/// `R̂_w` for one focal vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RHatSet {
    pub w: usize,
    pub members: Vec<usize>,
}

/// Structural sets for a focal pair `(u, v)` and optionally a focal `w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub u: usize,
    pub v: usize,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub s_star: Vec<usize>,
    pub i_g: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r_hat: Option<RHatSet>,
}

impl StructuralReport {
    /// Adds `R̂_w` to the report.
    pub fn with_r_hat(mut self, g: &ColoredGraph, w: usize) -> Result<Self> {
        self.r_hat = Some(RHatSet {
            w,
            members: compute_r_hat(g, w)?,
        });
        Ok(self)
    }
}

/// Whether `u` lies in `R̂_w`; `u != w`, both in range.
pub(crate) fn in_r_hat(g: &ColoredGraph, w: usize, u: usize) -> bool {
    let (d1, d2) = g.split_without(u, w);
    let shifted = d1 as i64 - d2 as i64 + g.color(w).label();
    match g.color(u) {
        Color::One => shifted >= 0,
        Color::Two => shifted > 0,
    }
}

/// `R̂_w`: the vertices `u != w` that would hold color 1 on day 1 if they
/// were adjacent to `w`. Depends only on the graph with `w` removed.
pub fn compute_r_hat(g: &ColoredGraph, w: usize) -> Result<Vec<usize>> {
    g.check_vertex(w)?;
    Ok((0..g.n()).filter(|&u| u != w && in_r_hat(g, w, u)).collect())
}

/// Color-1 minus color-2 neighbors of `w`, ignoring `u` and `v`.
fn focal_gap(g: &ColoredGraph, w: usize, u: usize, v: usize) -> i64 {
    let d1 = g.color_one_neighbors(w) as i64;
    let d2 = g.degree(w) as i64 - d1;
    d1 - g.has_edge(w, u) as i64 - g.has_edge(w, v) as i64 - d2
}

/// Part of `w` for the focal pair; `u`, `v` already validated.
pub(crate) fn classify(g: &ColoredGraph, w: usize, u: usize, v: usize) -> SPart {
    let gap = focal_gap(g, w, u, v);
    // A color-1 vertex keeps color 1 at a tie, so its thresholds sit one lower.
    let offset = match g.color(w) {
        Color::One => 0,
        Color::Two => 1,
    };
    match gap - offset {
        g if g >= -1 => SPart::S1,
        -2 => SPart::SStar,
        _ => SPart::S2,
    }
}

pub(crate) fn check_focal_pair(g: &ColoredGraph, u: usize, v: usize) -> Result<()> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::SameVertex(u));
    }
    for x in [u, v] {
        if g.color(x) != Color::One {
            return Err(Error::NotColorOne(x));
        }
    }
    Ok(())
}

/// `S1`, `S2`, `S*` and `I` for two distinct color-1 vertices.
pub fn compute_s_sets(g: &ColoredGraph, u: usize, v: usize) -> Result<StructuralReport> {
    check_focal_pair(g, u, v)?;
    let (mut s1, mut s2, mut s_star) = (Vec::new(), Vec::new(), Vec::new());
    for w in (0..g.n()).filter(|&w| w != u && w != v) {
        match classify(g, w, u, v) {
            SPart::S1 => s1.push(w),
            SPart::S2 => s2.push(w),
            SPart::SStar => s_star.push(w),
        }
    }
    let i_g = s_star.iter().filter(|&&w| g.has_edge(w, u) && g.has_edge(w, v)).count();
    Ok(StructuralReport {
        u,
        v,
        s1,
        s2,
        s_star,
        i_g,
        r_hat: None,
    })
}

/// Both sides of the day-2 identity for non-adjacent color-1 `u`, `v`:
/// `|Γ(u) ∩ C_{1,1}| - |Γ(u) ∩ C_{2,1}|` from one standard step, and
/// `|S1 ∩ Γ(u)| - |S2 ∩ Γ(u)| - |S* ∩ (Γ(u) \ Γ(v))| + I` from the sets.
pub fn day2_identity_sides(g: &ColoredGraph, u: usize, v: usize) -> Result<(i64, i64)> {
    check_focal_pair(g, u, v)?;
    if g.has_edge(u, v) {
        return Err(Error::AdjacentFocalPair(u, v));
    }
    let day1 = next_colors(g, UpdateRule::Standard);
    let lhs: i64 = g.neighbors(u).map(|w| day1[w].label()).sum();
    let report = compute_s_sets(g, u, v)?;
    let count = |set: &[usize], keep: &dyn Fn(usize) -> bool| set.iter().filter(|&&w| keep(w)).count() as i64;
    let nu = |w: usize| g.has_edge(u, w);
    let nu_only = |w: usize| g.has_edge(u, w) && !g.has_edge(v, w);
    let rhs = count(&report.s1, &nu) - count(&report.s2, &nu) - count(&report.s_star, &nu_only) + report.i_g as i64;
    Ok((lhs, rhs))
}

/// Whether the day-2 identity holds for the pair.
pub fn check_day2_identity(g: &ColoredGraph, u: usize, v: usize) -> Result<bool> {
    let (lhs, rhs) = day2_identity_sides(g, u, v)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::step;
    use crate::graph::parse_colors;

    fn graph(n: usize, edges: &[(usize, usize)], colors: &str) -> ColoredGraph {
        ColoredGraph::from_edges(n, edges, parse_colors(colors).unwrap()).unwrap()
    }

    #[test]
    fn r_hat_on_empty_graph_is_everyone_else() {
        let g = graph(3, &[], "112");
        assert_eq!(compute_r_hat(&g, 0).unwrap(), vec![1, 2]);
    }

    #[test]
    fn r_hat_excludes_color_two_path() {
        // Path a-b of color 2 plus isolated color-1 w.
        let g = graph(3, &[(0, 1)], "221");
        assert_eq!(compute_r_hat(&g, 2).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn r_hat_out_of_range() {
        let g = graph(3, &[], "112");
        assert!(matches!(compute_r_hat(&g, 3), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn s_sets_on_empty_graph() {
        let g = graph(5, &[], "11121");
        let r = compute_s_sets(&g, 0, 1).unwrap();
        assert_eq!(r.s1, vec![2, 3, 4]);
        assert!(r.s2.is_empty() && r.s_star.is_empty());
        assert_eq!(r.i_g, 0);
    }

    #[test]
    fn color_one_vertex_with_two_color_two_neighbors_is_in_s_star() {
        // w = 2 (color 1) with color-2 neighbors 3 and 4.
        let base = [(2, 3), (2, 4)];
        let g = graph(5, &base, "11122");
        let r = compute_s_sets(&g, 0, 1).unwrap();
        assert!(r.s_star.contains(&2));
        for (to_u, to_v) in [(false, false), (true, false), (false, true), (true, true)] {
            let mut edges = base.to_vec();
            if to_u {
                edges.push((0, 2));
            }
            if to_v {
                edges.push((1, 2));
            }
            let h = graph(5, &edges, "11122");
            let day1 = step(&h, UpdateRule::Standard);
            let expect = if to_u && to_v { Color::One } else { Color::Two };
            assert_eq!(day1.color(2), expect);
        }
    }

    #[test]
    fn s_set_errors() {
        let g = graph(4, &[(0, 1)], "1121");
        assert!(matches!(compute_s_sets(&g, 0, 0), Err(Error::SameVertex(0))));
        assert!(matches!(compute_s_sets(&g, 0, 2), Err(Error::NotColorOne(2))));
        assert!(matches!(
            check_day2_identity(&g, 0, 1),
            Err(Error::AdjacentFocalPair(0, 1))
        ));
    }

    #[test]
    fn day2_identity_on_empty_graph() {
        let g = graph(4, &[], "1122");
        assert_eq!(day2_identity_sides(&g, 0, 1).unwrap(), (0, 0));
    }

    #[test]
    fn day2_identity_with_nonzero_i() {
        // u = 0, v = 1 non-adjacent; w = 2 is in S* and adjacent to both;
        // w = 3 is in S1 and adjacent to u; 4, 5 are color 2.
        let edges = [(0, 2), (1, 2), (2, 4), (2, 5), (0, 3), (3, 4)];
        let g = graph(6, &edges, "111122");
        let r = compute_s_sets(&g, 0, 1).unwrap();
        assert_eq!(r.s_star, vec![2]);
        assert_eq!(r.i_g, 1);
        let (lhs, rhs) = day2_identity_sides(&g, 0, 1).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, 2);
    }

    #[test]
    fn report_json_round_trip() {
        let g = graph(6, &[(0, 2), (1, 2), (2, 4), (2, 5)], "111122");
        let r = compute_s_sets(&g, 0, 1).unwrap().with_r_hat(&g, 2).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: StructuralReport = serde_json::from_str(&text).unwrap();
        assert_eq!(r, back);
    }
}
