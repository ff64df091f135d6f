//! Threshold function for the gap, centering constants `μ1, μ2`, the
//! centered day-1 indicators `Z_v` and Monte Carlo moments of
//! `Z = Σ L(v) Z_v`.

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{next_colors, UpdateRule};
use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::graph::{check_probability, sample_gnp_with, Color, ColoredGraph, ColoringScheme};
use crate::prob::{bindiff_ge, CompensatedSum};
use crate::rng;

/// Constants of the two branches of the gap threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdParams {
    pub a: f64,
    pub b: f64,
}

impl Default for ThresholdParams {
    /// `A = B = 1`. These are placeholders: the constants are not fixed.
    fn default() -> Self {
        ThresholdParams { a: 1.0, b: 1.0 }
    }
}

/// Which branch of the threshold is larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdBranch {
    /// `p^{-1/2} exp(A sqrt(ln(1/p)))`.
    Exponential,
    /// `B p^{-3/2} n^{-1/2}`.
    Polynomial,
}

/// Value of the gap threshold and both of its branches.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub value: f64,
    pub branch: ThresholdBranch,
    pub exponential: f64,
    pub polynomial: f64,
}

/// `max{ p^{-1/2} exp(A sqrt(ln(1/p))), B p^{-3/2} n^{-1/2} }`.
pub fn delta_threshold(n: f64, p: f64, params: ThresholdParams) -> Result<Threshold> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    if !(params.a > 0.0 && params.b > 0.0) {
        return Err(Error::InvalidArgument("threshold constants must be positive".into()));
    }
    let exponential = p.powf(-0.5) * (params.a * (1.0 / p).ln().sqrt()).exp();
    let polynomial = params.b * p.powf(-1.5) / n.sqrt();
    let (value, branch) = if exponential >= polynomial {
        (exponential, ThresholdBranch::Exponential)
    } else {
        (polynomial, ThresholdBranch::Polynomial)
    };
    Ok(Threshold {
        value,
        branch,
        exponential,
        polynomial,
    })
}

/// Differences `d` such that a vertex keeps its color iff
/// `Bin(own - 1, p) - Bin(other, p) >= d`, for color 1 and color 2.
fn keep_offsets(rule: UpdateRule) -> (i64, i64) {
    match rule {
        UpdateRule::Standard => (0, 0),
        UpdateRule::Biased => (-1, 1),
    }
}

fn check_sizes(c1: usize, c2: usize) -> Result<()> {
    if c1 == 0 || c2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "centering constants need both classes nonempty (c1 = {c1}, c2 = {c2})"
        )));
    }
    Ok(())
}

/// Probabilities that a color-1 and a color-2 vertex keep their day-0
/// color on day 1.
pub fn keep_probabilities(rule: UpdateRule, c1: usize, c2: usize, p: f64) -> Result<(f64, f64)> {
    check_sizes(c1, c2)?;
    check_probability(p)?;
    let (d1, d2) = keep_offsets(rule);
    Ok((
        bindiff_ge(c1 as u64 - 1, c2 as u64, p, d1),
        bindiff_ge(c2 as u64 - 1, c1 as u64, p, d2),
    ))
}

/// `(μ1, μ2)` for `rule`: twice the keep probability minus one.
pub fn compute_mu_for(rule: UpdateRule, c1: usize, c2: usize, p: f64) -> Result<(f64, f64)> {
    let (k1, k2) = keep_probabilities(rule, c1, c2, p)?;
    Ok((2.0 * k1 - 1.0, 2.0 * k2 - 1.0))
}

/// `(μ1, μ2)` for the biased rule.
pub fn compute_mu(c1: usize, c2: usize, p: f64) -> Result<(f64, f64)> {
    compute_mu_for(UpdateRule::Biased, c1, c2, p)
}

/// Exact `(μ1, μ2)` for a rational `p`.
pub fn compute_mu_exact(rule: UpdateRule, c1: usize, c2: usize, p: &Q) -> Result<(Q, Q)> {
    check_sizes(c1, c2)?;
    if !exact::is_probability(p) {
        return Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")));
    }
    let (d1, d2) = keep_offsets(rule);
    let two = exact::q_int(2);
    let k1 = exact::bindiff_ge_exact(c1 as u64 - 1, c2 as u64, p, d1);
    let k2 = exact::bindiff_ge_exact(c2 as u64 - 1, c1 as u64, p, d2);
    Ok((&two * k1 - Q::one(), &two * k2 - Q::one()))
}

/// `μ1, μ2`, per-vertex `Z_v` and `Z = Σ L(v) Z_v` for one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenteredIndicators {
    pub mu1: f64,
    pub mu2: f64,
    pub z_values: Vec<f64>,
    pub z: f64,
}

/// `+1` for each vertex keeping its day-0 color on day 1, `-1` otherwise.
pub fn keep_signs(g: &ColoredGraph, rule: UpdateRule) -> Vec<i64> {
    next_colors(g, rule)
        .iter()
        .zip(g.colors())
        .map(|(a, b)| if a == b { 1 } else { -1 })
        .collect()
}

/// `Z_v = ±1 - μ_v` (plus sign when `v` keeps its color) with the given
/// centering constants.
pub fn centered_indicators_with(g: &ColoredGraph, rule: UpdateRule, mu1: f64, mu2: f64) -> CenteredIndicators {
    let signs = keep_signs(g, rule);
    let z_values: Vec<f64> = signs
        .iter()
        .zip(g.colors())
        .map(|(&s, &c)| s as f64 - if c == Color::One { mu1 } else { mu2 })
        .collect();
    let z = z_values
        .iter()
        .zip(g.colors())
        .map(|(&zv, &c)| c.label() as f64 * zv)
        .collect::<CompensatedSum>()
        .value();
    CenteredIndicators { mu1, mu2, z_values, z }
}

/// Centered indicators with `μ` computed for the graph's color counts.
pub fn centered_indicators(g: &ColoredGraph, rule: UpdateRule, p: f64) -> Result<CenteredIndicators> {
    let (c1, c2) = g.counts();
    let (mu1, mu2) = compute_mu_for(rule, c1, c2, p)?;
    Ok(centered_indicators_with(g, rule, mu1, mu2))
}

/// `(k - 1)!!` for even `k`, with `(-1)!! = 1`.
pub fn double_factorial_below(k: u32) -> f64 {
    let mut acc = 1.0;
    let mut j = k as i64 - 1;
    while j > 1 {
        acc *= j as f64;
        j -= 2;
    }
    acc
}

/// Monte Carlo estimate of `E[Z^k]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub k: u32,
    pub k_even: bool,
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
    /// `(k - 1)!! n^{k/2}`.
    pub normalizer: f64,
    /// `mean / normalizer`.
    pub ratio: f64,
}

/// Mean and standard error of a sample.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().copied().collect::<CompensatedSum>().value() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss = xs
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .collect::<CompensatedSum>()
        .value();
    (mean, (ss / (n - 1.0) / n).sqrt())
}

/// Estimates `E[Z^k]` over `trials` fixed-gap graphs, with `μ` computed
/// exactly for the class sizes. Odd `k` is allowed but flagged.
pub fn moment_estimate(
    n: usize,
    p: f64,
    delta: f64,
    k: u32,
    trials: u64,
    seed: u64,
    rule: UpdateRule,
) -> Result<MomentEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let scheme = ColoringScheme::fixed_gap(delta)?;
    scheme.validate(n)?;
    let c1 = (n as f64 / 2.0 + delta) as usize;
    let (mu1, mu2) = compute_mu_for(rule, c1, n - c1, p)?;
    let normalizer = double_factorial_below(k) * (n as f64).powf(k as f64 / 2.0);
    if k == 0 {
        return Ok(MomentEstimate {
            k,
            k_even: true,
            trials,
            mean: 1.0,
            stderr: 0.0,
            normalizer,
            ratio: 1.0 / normalizer,
        });
    }
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::split(seed, t);
            let g = sample_gnp_with(n, p, &scheme, &mut r).expect("validated parameters");
            centered_indicators_with(&g, rule, mu1, mu2).z.powi(k as i32)
        })
        .collect();
    let (mean, stderr) = mean_stderr(&samples);
    Ok(MomentEstimate {
        k,
        k_even: k % 2 == 0,
        trials,
        mean,
        stderr,
        normalizer,
        ratio: mean / normalizer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::graph::parse_colors;

    #[test]
    fn threshold_examples() {
        let p = (-2.0f64).exp();
        let t = delta_threshold(1e6, p, ThresholdParams { a: 0.7, b: 1.0 }).unwrap();
        let expect = std::f64::consts::E * (0.7 * 2f64.sqrt()).exp();
        assert!((t.exponential - expect).abs() < 1e-12);

        let t = delta_threshold(1e6, 0.25, ThresholdParams::default()).unwrap();
        assert_eq!(t.branch, ThresholdBranch::Exponential);
        assert!((t.value - 6.491_912_705_409_512).abs() < 1e-12);
        assert!((t.polynomial - 0.008).abs() < 1e-15);
        assert!(delta_threshold(10.0, 1.0, ThresholdParams::default()).is_err());
    }

    #[test]
    fn mu_for_single_vertex_classes() {
        let (mu1, mu2) = compute_mu(1, 1, 0.37).unwrap();
        assert!((mu1 - 1.0).abs() < 1e-15);
        // A lone color-2 vertex with one color-1 neighbor never keeps color 2.
        assert!((mu2 + 1.0).abs() < 1e-15);
        let (s1, s2) = compute_mu_for(UpdateRule::Standard, 4, 4, 0.3).unwrap();
        assert!((s1 - s2).abs() < 1e-15);
        assert!(compute_mu(0, 3, 0.5).is_err());
    }

    #[test]
    fn exact_and_float_mu_agree() {
        for rule in [UpdateRule::Standard, UpdateRule::Biased] {
            let (e1, e2) = compute_mu_exact(rule, 5, 3, &q(1, 3)).unwrap();
            let (f1, f2) = compute_mu_for(rule, 5, 3, 1.0 / 3.0).unwrap();
            assert!((exact::to_f64(&e1) - f1).abs() < 1e-14);
            assert!((exact::to_f64(&e2) - f2).abs() < 1e-14);
        }
    }

    #[test]
    fn z_plus_mu_is_plus_or_minus_one() {
        let g = ColoredGraph::from_edges(
            5,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)],
            parse_colors("11212").unwrap(),
        )
        .unwrap();
        let ci = centered_indicators(&g, UpdateRule::Biased, 0.4).unwrap();
        for (v, &zv) in ci.z_values.iter().enumerate() {
            let mu = if g.color(v) == Color::One { ci.mu1 } else { ci.mu2 };
            let s = zv + mu;
            assert!((s - 1.0).abs() < 1e-15 || (s + 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn moment_zero_is_one() {
        let m = moment_estimate(20, 0.3, 1.0, 0, 5, 1, UpdateRule::Biased).unwrap();
        assert_eq!(m.mean, 1.0);
        let odd = moment_estimate(20, 0.3, 1.0, 3, 5, 1, UpdateRule::Biased).unwrap();
        assert!(!odd.k_even);
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial_below(2), 1.0);
        assert_eq!(double_factorial_below(4), 3.0);
        assert_eq!(double_factorial_below(6), 15.0);
    }
}
