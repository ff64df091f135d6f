//! Exhaustive checks of the exact identities over every coloring and every
//! edge configuration of small vertex counts.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{next_colors, UpdateRule};
use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::fourier::{check_fourier_exact, FourierCheck, MAX_EXACT_VERTICES};
use crate::graph::{Adjacency, Color, ColoredGraph};
use crate::oracle::MAX_ORACLE_N;
use crate::structural::{compute_r_hat, compute_s_sets, day2_identity_sides};
use crate::theory::{compute_mu_exact, keep_signs};

/// Checks and violations of the structural identities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub max_n: usize,
    /// Colored graphs visited.
    pub graphs: u64,
    /// `C_{1,1} ∩ Γ(w) = R̂_w ∩ Γ(w)`, one check per `(graph, w)`.
    pub r_hat_checks: u64,
    pub r_hat_violations: u64,
    /// `S1, S2, S*` partition `V \ {u, v}` and predict day-1 colors, one
    /// check per `(graph, u, v)`.
    pub partition_checks: u64,
    pub partition_violations: u64,
    /// Day-2 identity, one check per non-adjacent focal pair.
    pub day2_checks: u64,
    pub day2_violations: u64,
    /// `Z_v + μ_v ∈ {-1, 1}`, one check per `(graph, v, rule)`.
    pub z_checks: u64,
    pub z_violations: u64,
}

impl IdentityReport {
    fn merge(mut self, o: IdentityReport) -> IdentityReport {
        self.graphs += o.graphs;
        self.r_hat_checks += o.r_hat_checks;
        self.r_hat_violations += o.r_hat_violations;
        self.partition_checks += o.partition_checks;
        self.partition_violations += o.partition_violations;
        self.day2_checks += o.day2_checks;
        self.day2_violations += o.day2_violations;
        self.z_checks += o.z_checks;
        self.z_violations += o.z_violations;
        self
    }

    pub fn total_violations(&self) -> u64 {
        self.r_hat_violations + self.partition_violations + self.day2_violations + self.z_violations
    }
}

/// Colors of `n` vertices encoded by the bits of `code` (bit set = color 1).
pub fn coloring_from_code(n: usize, code: u64) -> Vec<Color> {
    (0..n)
        .map(|v| if code >> v & 1 == 1 { Color::One } else { Color::Two })
        .collect()
}

fn check_graph(g: &ColoredGraph, mu: &[(UpdateRule, Option<(Q, Q)>)]) -> Result<IdentityReport> {
    let n = g.n();
    let mut r = IdentityReport {
        graphs: 1,
        ..IdentityReport::default()
    };
    let day1 = next_colors(g, UpdateRule::Standard);
    for w in 0..n {
        let r_hat = compute_r_hat(g, w)?;
        let predicted: Vec<usize> = r_hat.into_iter().filter(|&u| g.has_edge(u, w)).collect();
        let actual: Vec<usize> = g.neighbors(w).filter(|&u| day1[u] == Color::One).collect();
        r.r_hat_checks += 1;
        r.r_hat_violations += (predicted != actual) as u64;
    }
    let ones: Vec<usize> = (0..n).filter(|&v| g.color(v) == Color::One).collect();
    for (i, &u) in ones.iter().enumerate() {
        for &v in &ones[i + 1..] {
            let sets = compute_s_sets(g, u, v)?;
            let mut seen = vec![0u8; n];
            for &w in sets.s1.iter().chain(&sets.s2).chain(&sets.s_star) {
                seen[w] += 1;
            }
            let partition = (0..n).all(|w| seen[w] == u8::from(w != u && w != v));
            let touched = |w: usize| g.has_edge(w, u) || g.has_edge(w, v);
            let both = |w: usize| g.has_edge(w, u) && g.has_edge(w, v);
            let predicts = sets.s1.iter().all(|&w| !touched(w) || day1[w] == Color::One)
                && sets.s2.iter().all(|&w| day1[w] == Color::Two)
                && sets.s_star.iter().all(|&w| (day1[w] == Color::One) == both(w));
            r.partition_checks += 1;
            r.partition_violations += !(partition && predicts) as u64;
            if !g.has_edge(u, v) {
                let (lhs, rhs) = day2_identity_sides(g, u, v)?;
                r.day2_checks += 1;
                r.day2_violations += (lhs != rhs) as u64;
            }
        }
    }
    for (rule, mus) in mu {
        let Some((mu1, mu2)) = mus else { continue };
        for (v, s) in keep_signs(g, *rule).into_iter().enumerate() {
            let mu_v = if g.color(v) == Color::One { mu1 } else { mu2 };
            let z = exact::q_int(s) - mu_v;
            let back = &z + mu_v;
            r.z_checks += 1;
            r.z_violations += !(back == exact::q_int(1) || back == exact::q_int(-1)) as u64;
        }
    }
    Ok(r)
}

/// Runs the structural identities on every coloring and edge configuration
/// with `1 <= n <= max_n`. `p` only enters through `μ`.
pub fn verify_identities(max_n: usize, p: &Q) -> Result<IdentityReport> {
    if max_n > MAX_ORACLE_N {
        return Err(Error::TooLarge {
            n: max_n,
            max: MAX_ORACLE_N,
        });
    }
    let mut total = IdentityReport {
        max_n,
        ..IdentityReport::default()
    };
    for n in 1..=max_n {
        let edges = n * (n - 1) / 2;
        let part = (0..1u64 << n)
            .into_par_iter()
            .map(|code| -> Result<IdentityReport> {
                let colors = coloring_from_code(n, code);
                let c1 = colors.iter().filter(|&&c| c == Color::One).count();
                let c2 = n - c1;
                let mu: Vec<(UpdateRule, Option<(Q, Q)>)> = [UpdateRule::Standard, UpdateRule::Biased]
                    .into_iter()
                    .map(|rule| {
                        let m = (c1 >= 1 && c2 >= 1)
                            .then(|| compute_mu_exact(rule, c1, c2, p))
                            .transpose()?;
                        Ok((rule, m))
                    })
                    .collect::<Result<_>>()?;
                let mut acc = IdentityReport::default();
                for mask in 0..1u64 << edges {
                    let g = ColoredGraph::new(Arc::new(Adjacency::from_pair_mask(n, mask)), colors.clone())?;
                    acc = acc.merge(check_graph(&g, &mu)?);
                }
                Ok(acc)
            })
            .try_reduce(IdentityReport::default, |a, b| Ok(a.merge(b)))?;
        total = total.merge(part);
    }
    Ok(total)
}

/// Aggregated Fourier identity checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierSuiteReport {
    pub max_m: usize,
    /// `(m, coloring, v, rule)` combinations checked.
    pub cases: u64,
    pub totals: FourierCheck,
}

impl FourierSuiteReport {
    pub fn total_violations(&self) -> usize {
        self.totals.total_violations()
    }
}

fn add_check(mut a: FourierCheck, b: &FourierCheck) -> FourierCheck {
    a.sets_checked += b.sets_checked;
    a.empty_nonzero += b.empty_nonzero;
    a.outside_star_nonzero += b.outside_star_nonzero;
    a.parseval_mismatch += b.parseval_mismatch;
    a.power_bound_violations += b.power_bound_violations;
    a.reconstruction_mismatch += b.reconstruction_mismatch;
    a
}

/// Runs the exact Fourier identities for every `2 <= m <= max_m`, every
/// coloring with both colors present, every focal vertex and both rules.
pub fn verify_fourier_suite(max_m: usize, p: &Q) -> Result<FourierSuiteReport> {
    if max_m > MAX_EXACT_VERTICES {
        return Err(Error::TooLarge {
            n: max_m,
            max: MAX_EXACT_VERTICES,
        });
    }
    let mut jobs = Vec::new();
    for m in 2..=max_m {
        for code in 1..(1u64 << m) - 1 {
            for v in 0..m {
                for rule in [UpdateRule::Standard, UpdateRule::Biased] {
                    jobs.push((m, code, v, rule));
                }
            }
        }
    }
    let totals = jobs
        .par_iter()
        .map(|&(m, code, v, rule)| check_fourier_exact(m, &coloring_from_code(m, code), v, p, rule))
        .try_fold(FourierCheck::default, |acc, c| c.map(|c| add_check(acc, &c)))
        .try_reduce(FourierCheck::default, |a, b| Ok(add_check(a, &b)))?;
    Ok(FourierSuiteReport {
        max_m,
        cases: jobs.len() as u64,
        totals,
    })
}
