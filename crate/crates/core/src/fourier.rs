//! p-biased Fourier analysis of the centered day-1 indicator `Z_v` as a
//! function of the edge indicators of a graph on `m` labeled vertices.
//!
//! Edge `i` is the `i`-th pair of [`pair_list`]; a configuration is a bit
//! mask with bit `i` set when edge `i` is present (`x_i = +1`, probability
//! `p`). Coefficients are stored unnormalized as `E[f Ψ_S]` with
//! `Ψ_S = Π_{e∈S}(x_e + 1 - 2p)`, so that `f̂(S) = E[f Ψ_S] / (2σ)^{|S|}`
//! with `σ = sqrt(p(1-p))` and `f̂(S)^2` is rational for rational `p`.

use num_traits::{Num, One, Zero};
use serde::{Deserialize, Serialize};

use crate::dynamics::UpdateRule;
use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::graph::{pair_list, Color};
use crate::theory::{compute_mu_exact, compute_mu_for};

/// Largest vertex count accepted by the enumeration.
pub const MAX_FOURIER_VERTICES: usize = 7;
/// Largest vertex count handled in exact arithmetic by default.
pub const MAX_EXACT_VERTICES: usize = 5;

fn check_size(m: usize, colors: &[Color], v: usize) -> Result<()> {
    if m > MAX_FOURIER_VERTICES {
        return Err(Error::TooLarge {
            n: m,
            max: MAX_FOURIER_VERTICES,
        });
    }
    if colors.len() != m {
        return Err(Error::InvalidArgument(format!(
            "{} colors given for {m} vertices",
            colors.len()
        )));
    }
    if v >= m {
        return Err(Error::VertexOutOfRange { vertex: v, n: m });
    }
    Ok(())
}

/// In-place transform from values on `{-1, 1}^E` to `E[f Ψ_S]` under the
/// p-biased product measure.
pub fn forward_transform<T: Num + Clone>(values: &mut [T], p: &T) {
    let q = T::one() - p.clone();
    let two = T::one() + T::one();
    let two_pq = two * p.clone() * q.clone();
    let mut half = 1;
    while half < values.len() {
        for block in values.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let mean = q.clone() * a.clone() + p.clone() * b.clone();
                let slope = two_pq.clone() * (b.clone() - a.clone());
                *a = mean;
                *b = slope;
            }
        }
        half *= 2;
    }
}

/// Inverse of [`forward_transform`]: `f(x) = Σ_S E[f Ψ_S] Ψ_S(x) / (4pq)^{|S|}`.
pub fn inverse_transform<T: Num + Clone>(coeffs: &mut [T], p: &T) {
    let q = T::one() - p.clone();
    let two = T::one() + T::one();
    let mut half = 1;
    while half < coeffs.len() {
        for block in coeffs.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (c0, c1) in lo.iter_mut().zip(hi.iter_mut()) {
                let absent = c0.clone() - c1.clone() / (two.clone() * q.clone());
                let present = c0.clone() + c1.clone() / (two.clone() * p.clone());
                *c0 = absent;
                *c1 = present;
            }
        }
        half *= 2;
    }
}

/// Indices of the edges incident to `v`.
pub fn star_edges(m: usize, v: usize) -> Vec<usize> {
    pair_list(m)
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| a == v || b == v)
        .map(|(i, _)| i)
        .collect()
}

/// Bit mask of the edges incident to `v`.
pub fn star_mask(m: usize, v: usize) -> u64 {
    star_edges(m, v).iter().fold(0, |acc, &i| acc | (1u64 << i))
}

/// `+1` when `v` keeps its color on day 1, `-1` otherwise, for every edge
/// configuration.
pub fn keep_sign_table(m: usize, colors: &[Color], v: usize, rule: UpdateRule) -> Result<Vec<i8>> {
    check_size(m, colors, v)?;
    let pairs = pair_list(m);
    let star: Vec<(usize, Color)> = star_edges(m, v)
        .into_iter()
        .map(|i| {
            let (a, b) = pairs[i];
            (i, colors[if a == v { b } else { a }])
        })
        .collect();
    let own = colors[v];
    Ok((0..1u64 << pairs.len())
        .map(|mask| {
            let (mut d1, mut d2) = (0, 0);
            for &(i, c) in &star {
                if mask >> i & 1 == 1 {
                    match c {
                        Color::One => d1 += 1,
                        Color::Two => d2 += 1,
                    }
                }
            }
            if rule.next_color(own, d1, d2) == own {
                1
            } else {
                -1
            }
        })
        .collect())
}

fn class_sizes(colors: &[Color]) -> (usize, usize) {
    let c1 = colors.iter().filter(|&&c| c == Color::One).count();
    (c1, colors.len() - c1)
}

/// Exact coefficient table of `Z_v^power`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactFourierTable {
    pub m: usize,
    pub v: usize,
    pub p: Q,
    pub mu_v: Q,
    pub power: u32,
    /// `E[Z_v^power Ψ_S]`, indexed by the subset mask of `S`.
    pub scaled: Vec<Q>,
}

impl ExactFourierTable {
    /// `f̂(S)^2 = E[f Ψ_S]^2 / (4pq)^{|S|}`.
    pub fn coefficient_sq(&self, set: u64) -> Q {
        let c = &self.scaled[set as usize];
        let four_pq = exact::q_int(4) * &self.p * (Q::one() - &self.p);
        c * c / exact::pow(&four_pq, set.count_ones())
    }

    /// `f̂(S)` rounded to `f64`.
    pub fn coefficient(&self, set: u64) -> f64 {
        let s = exact::to_f64(&self.scaled[set as usize]);
        let sigma2 = 2.0 * (exact::to_f64(&self.p) * (1.0 - exact::to_f64(&self.p))).sqrt();
        s / sigma2.powi(set.count_ones() as i32)
    }

    /// `Σ_S f̂(S)^2`.
    pub fn parseval_sum(&self) -> Q {
        (0..self.scaled.len() as u64).map(|s| self.coefficient_sq(s)).sum()
    }
}

/// Float coefficient table of `Z_v`.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatFourierTable {
    pub m: usize,
    pub v: usize,
    pub p: f64,
    pub mu_v: f64,
    pub scaled: Vec<f64>,
}

impl FloatFourierTable {
    /// `f̂(S)`.
    pub fn coefficient(&self, set: u64) -> f64 {
        let two_sigma = 2.0 * (self.p * (1.0 - self.p)).sqrt();
        self.scaled[set as usize] / two_sigma.powi(set.count_ones() as i32)
    }

    /// `Σ_S f̂(S)^2`.
    pub fn parseval_sum(&self) -> f64 {
        (0..self.scaled.len() as u64)
            .map(|s| self.coefficient(s).powi(2))
            .collect::<crate::prob::CompensatedSum>()
            .value()
    }
}

/// Exact values of `Z_v = s_v - μ_v` on every configuration.
pub fn z_values_exact(m: usize, colors: &[Color], v: usize, p: &Q, rule: UpdateRule) -> Result<(Q, Vec<Q>)> {
    let signs = keep_sign_table(m, colors, v, rule)?;
    let (c1, c2) = class_sizes(colors);
    let (mu1, mu2) = compute_mu_exact(rule, c1, c2, p)?;
    let mu = if colors[v] == Color::One { mu1 } else { mu2 };
    let values = signs.iter().map(|&s| exact::q_int(s as i64) - &mu).collect();
    Ok((mu, values))
}

/// Exact table of `Z_v^power` for `m <= 7` vertices (practical for `m <= 5`).
pub fn fourier_exact(
    m: usize,
    colors: &[Color],
    v: usize,
    p: &Q,
    rule: UpdateRule,
    power: u32,
) -> Result<ExactFourierTable> {
    if !exact::is_probability(p) || p.is_zero() || p.is_one() {
        return Err(Error::InvalidArgument(format!("p = {p} must lie in (0, 1)")));
    }
    let (mu_v, values) = z_values_exact(m, colors, v, p, rule)?;
    let mut scaled: Vec<Q> = values.iter().map(|z| exact::pow(z, power)).collect();
    forward_transform(&mut scaled, p);
    Ok(ExactFourierTable {
        m,
        v,
        p: p.clone(),
        mu_v,
        power,
        scaled,
    })
}

/// Float table of `Z_v` for `m <= 7` vertices.
pub fn fourier_float(m: usize, colors: &[Color], v: usize, p: f64, rule: UpdateRule) -> Result<FloatFourierTable> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    let signs = keep_sign_table(m, colors, v, rule)?;
    let (c1, c2) = class_sizes(colors);
    let (mu1, mu2) = compute_mu_for(rule, c1, c2, p)?;
    let mu_v = if colors[v] == Color::One { mu1 } else { mu2 };
    let mut scaled: Vec<f64> = signs.iter().map(|&s| s as f64 - mu_v).collect();
    forward_transform(&mut scaled, &p);
    Ok(FloatFourierTable { m, v, p, mu_v, scaled })
}

/// One nonzero coefficient, for export.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierEntry {
    pub set: Vec<(usize, usize)>,
    pub value: f64,
    /// Exact `f̂(S)^2` as `num/den`, when available.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub square: Option<String>,
}

/// Coefficient table of `Z_v`, exact when `m <= 5`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierTable {
    pub m: usize,
    pub v: usize,
    pub p: f64,
    pub exact: bool,
    pub mu_v: f64,
    pub parseval_sum: f64,
    pub entries: Vec<FourierEntry>,
}

fn set_edges(pairs: &[(usize, usize)], set: u64) -> Vec<(usize, usize)> {
    (0..pairs.len())
        .filter(|i| set >> i & 1 == 1)
        .map(|i| pairs[i])
        .collect()
}

/// Nonzero coefficients of `Z_v` on sets of size at most `max_set_size`.
/// `p_exact` switches on rational arithmetic; it is required for `m <= 5`
/// to be exact and ignored above that.
pub fn fourier_coefficients(
    m: usize,
    colors: &[Color],
    v: usize,
    p: f64,
    p_exact: Option<&Q>,
    rule: UpdateRule,
    max_set_size: u32,
) -> Result<FourierTable> {
    let pairs = pair_list(m);
    if max_set_size as usize > pairs.len() {
        return Err(Error::InvalidArgument(format!(
            "max set size {max_set_size} exceeds the {} edges",
            pairs.len()
        )));
    }
    let keep = |s: u64| s.count_ones() <= max_set_size;
    match p_exact {
        Some(pq) if m <= MAX_EXACT_VERTICES => {
            let t = fourier_exact(m, colors, v, pq, rule, 1)?;
            let entries = (0..t.scaled.len() as u64)
                .filter(|&s| keep(s) && !t.scaled[s as usize].is_zero())
                .map(|s| FourierEntry {
                    set: set_edges(&pairs, s),
                    value: t.coefficient(s),
                    square: Some(exact::format_rational(&t.coefficient_sq(s))),
                })
                .collect();
            Ok(FourierTable {
                m,
                v,
                p: exact::to_f64(pq),
                exact: true,
                mu_v: exact::to_f64(&t.mu_v),
                parseval_sum: exact::to_f64(&t.parseval_sum()),
                entries,
            })
        }
        _ => {
            let t = fourier_float(m, colors, v, p, rule)?;
            let entries = (0..t.scaled.len() as u64)
                .filter(|&s| keep(s) && t.scaled[s as usize].abs() > 1e-15)
                .map(|s| FourierEntry {
                    set: set_edges(&pairs, s),
                    value: t.coefficient(s),
                    square: None,
                })
                .collect();
            Ok(FourierTable {
                m,
                v,
                p,
                exact: false,
                mu_v: t.mu_v,
                parseval_sum: t.parseval_sum(),
                entries,
            })
        }
    }
}

/// Whether `{Ψ_S / (2σ)^{|S|}}` is orthonormal on `edges` coordinates,
/// checked exactly by transforming every basis function with `|S| <= max_size`.
pub fn check_orthonormality(edges: usize, p: &Q, max_size: u32) -> bool {
    let q = Q::one() - p;
    let psi = [-exact::q_int(2) * p, exact::q_int(2) * &q];
    let four_pq = exact::q_int(4) * p * &q;
    let size = 1u64 << edges;
    (0..size).filter(|t| t.count_ones() <= max_size).all(|t| {
        let mut values: Vec<Q> = (0..size)
            .map(|x| {
                (0..edges)
                    .filter(|i| t >> i & 1 == 1)
                    .map(|i| psi[(x >> i & 1) as usize].clone())
                    .product()
            })
            .collect();
        forward_transform(&mut values, p);
        values.iter().enumerate().all(|(s, c)| {
            if s as u64 == t {
                *c == exact::pow(&four_pq, t.count_ones())
            } else {
                c.is_zero()
            }
        })
    })
}

/// Violation counts of the exact Fourier identities for one `(colors, v)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierCheck {
    pub sets_checked: usize,
    /// `Ẑ_v(∅) != 0`.
    pub empty_nonzero: usize,
    /// `Ẑ_v(S) != 0` for some `S` not inside the star of `v`.
    pub outside_star_nonzero: usize,
    /// `Σ_S Ẑ_v(S)^2 != 1 - μ_v^2`.
    pub parseval_mismatch: usize,
    /// `|Ẑ_v^L(S)| > 2^L |Ẑ_v(S)|` for some `S != ∅`, `L <= 3`.
    pub power_bound_violations: usize,
    /// Configurations where the expansion does not reproduce `Z_v`.
    pub reconstruction_mismatch: usize,
}

impl FourierCheck {
    pub fn total_violations(&self) -> usize {
        self.empty_nonzero
            + self.outside_star_nonzero
            + self.parseval_mismatch
            + self.power_bound_violations
            + self.reconstruction_mismatch
    }
}

/// Runs every exact identity for one coloring and focal vertex.
pub fn check_fourier_exact(m: usize, colors: &[Color], v: usize, p: &Q, rule: UpdateRule) -> Result<FourierCheck> {
    let base = fourier_exact(m, colors, v, p, rule, 1)?;
    let star = star_mask(m, v);
    let mut check = FourierCheck {
        sets_checked: base.scaled.len(),
        ..FourierCheck::default()
    };
    if !base.scaled[0].is_zero() {
        check.empty_nonzero += 1;
    }
    check.outside_star_nonzero = (0..base.scaled.len() as u64)
        .filter(|s| s & !star != 0 && !base.scaled[*s as usize].is_zero())
        .count();
    if base.parseval_sum() != Q::one() - &base.mu_v * &base.mu_v {
        check.parseval_mismatch += 1;
    }
    for power in 1..=3u32 {
        let higher = fourier_exact(m, colors, v, p, rule, power)?;
        let factor = exact::pow(&exact::q_int(4), power);
        check.power_bound_violations += (1..base.scaled.len())
            .filter(|&s| {
                let lhs = &higher.scaled[s] * &higher.scaled[s];
                let rhs = &factor * &base.scaled[s] * &base.scaled[s];
                lhs > rhs
            })
            .count();
    }
    let (_, values) = z_values_exact(m, colors, v, p, rule)?;
    let mut rebuilt = base.scaled.clone();
    inverse_transform(&mut rebuilt, p);
    check.reconstruction_mismatch = rebuilt.iter().zip(&values).filter(|(a, b)| a != b).count();
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::graph::parse_colors;

    #[test]
    fn transform_round_trip() {
        let p = q(1, 3);
        let original: Vec<Q> = (0..8).map(|i| exact::q_int(i * i - 3)).collect();
        let mut v = original.clone();
        forward_transform(&mut v, &p);
        inverse_transform(&mut v, &p);
        assert_eq!(v, original);
    }

    #[test]
    fn basis_is_orthonormal() {
        assert!(check_orthonormality(4, &q(1, 4), 4));
        assert!(check_orthonormality(3, &q(2, 3), 3));
    }

    #[test]
    fn identities_hold_for_a_small_coloring() {
        let colors = parse_colors("1122").unwrap();
        for v in 0..4 {
            let c = check_fourier_exact(4, &colors, v, &q(1, 3), UpdateRule::Biased).unwrap();
            assert_eq!(c.total_violations(), 0, "{c:?}");
        }
    }

    #[test]
    fn float_matches_exact() {
        let colors = parse_colors("11212").unwrap();
        let e = fourier_exact(5, &colors, 1, &q(1, 4), UpdateRule::Biased, 1).unwrap();
        let f = fourier_float(5, &colors, 1, 0.25, UpdateRule::Biased).unwrap();
        for s in 0..e.scaled.len() as u64 {
            assert!((e.coefficient(s) - f.coefficient(s)).abs() < 1e-12);
        }
        assert!((f.parseval_sum() - (1.0 - f.mu_v * f.mu_v)).abs() < 1e-9);
    }

    #[test]
    fn table_lists_only_star_sets() {
        let colors = parse_colors("1212").unwrap();
        let t = fourier_coefficients(4, &colors, 0, 0.5, Some(&q(1, 2)), UpdateRule::Standard, 6).unwrap();
        assert!(t.exact);
        for e in &t.entries {
            assert!(e.set.iter().all(|&(a, b)| a == 0 || b == 0));
        }
        assert!(fourier_coefficients(
            8,
            &parse_colors("11112222").unwrap(),
            0,
            0.5,
            None,
            UpdateRule::Standard,
            1
        )
        .is_err());
    }
}
