//! Exhaustive ground truth for `n <= 6`: every statistic is integrated over
//! all `2^{C(n,2)}` edge configurations (lexicographic pair order) with
//! weights `p^e (1-p)^{C(n,2)-e}`, in exact rationals when `p` is given as
//! a rational.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{Num, One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{next_colors, run, step, Termination, UpdateRule};
use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::fourier::{fourier_exact, fourier_float};
use crate::graph::{pair_list, sample_adjacency, Adjacency, Color, ColoredGraph};
use crate::prob::CompensatedSum;
use crate::rng;
use crate::structural::{check_focal_pair, compute_r_hat, compute_s_sets};
use crate::theory::{compute_mu_exact, compute_mu_for, keep_signs, mean_stderr};

/// Largest vertex count the oracle enumerates.
pub const MAX_ORACLE_N: usize = 6;

/// Edge probability, exact or floating point.
#[derive(Clone, Debug, PartialEq)]
pub enum OracleP {
    Exact(Q),
    Float(f64),
}

impl OracleP {
    /// Parses `"a/b"` or a decimal as an exact rational, or as a float
    /// when `float` is set.
    pub fn parse(s: &str, float: bool) -> Result<Self> {
        if float {
            let p: f64 = s
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("cannot parse {s:?} as a probability")))?;
            return Ok(OracleP::Float(p));
        }
        Ok(OracleP::Exact(exact::parse_rational(s)?))
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            OracleP::Exact(q) => exact::to_f64(q),
            OracleP::Float(p) => *p,
        }
    }
}

/// Which structural set a [`Statistic::SetStat`] measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    S1,
    S2,
    SStar,
    /// `I`, the members of `S*` adjacent to both focal vertices.
    IG,
    /// `|R̂_w|`.
    RHat,
}

impl std::str::FromStr for SetKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(SetKind::S1),
            "s2" => Ok(SetKind::S2),
            "sstar" | "s_star" | "s*" => Ok(SetKind::SStar),
            "ig" | "i_g" | "i" => Ok(SetKind::IG),
            "rhat" | "r_hat" => Ok(SetKind::RHat),
            other => Err(Error::InvalidArgument(format!("unknown set {other:?}"))),
        }
    }
}

fn biased() -> UpdateRule {
    UpdateRule::Biased
}

/// Statistic evaluated by the oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Statistic {
    /// Probability that `color` wins within `cap` days (default `2^n`).
    WinProb {
        color: Color,
        #[serde(default)]
        rule: UpdateRule,
        #[serde(default)]
        cap: Option<u32>,
    },
    /// Expected number of vertices holding `color` on `day`.
    ExpectedCount {
        day: u32,
        color: Color,
        #[serde(default)]
        rule: UpdateRule,
    },
    /// Variance of that number.
    VarCount {
        day: u32,
        color: Color,
        #[serde(default)]
        rule: UpdateRule,
    },
    /// `E[Z^k]` with exact centering constants.
    MomentZ {
        k: u32,
        #[serde(default = "biased")]
        rule: UpdateRule,
    },
    /// Mean (`moment = 1`) or variance (`moment = 2`) of a set size.
    /// The focal pair defaults to the first two color-1 vertices and `w`
    /// to the first focal vertex.
    SetStat {
        which: SetKind,
        moment: u32,
        #[serde(default)]
        focal: Option<(usize, usize)>,
        #[serde(default)]
        w: Option<usize>,
    },
    /// `Ẑ_v(S)`.
    FourierCoeff {
        v: usize,
        set: Vec<(usize, usize)>,
        #[serde(default = "biased")]
        rule: UpdateRule,
    },
}

/// Fully specified oracle query.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleQuery {
    pub n: usize,
    pub p: OracleP,
    pub colors: Vec<Color>,
    pub statistic: Statistic,
}

/// Probability mass of each way a run can end.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeMass {
    pub win1: f64,
    pub win2: f64,
    pub cycle: f64,
    pub cap_reached: f64,
}

/// Oracle result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleAnswer {
    pub value: f64,
    /// Exact value as `num/den`, when `p` is rational.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// Exact `Ẑ_v(S)^2` for Fourier queries (`Ẑ_v(S)` itself may be irrational).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_square: Option<String>,
    /// Bound on the floating point error in float mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<OutcomeMass>,
    #[serde(skip)]
    pub exact_value: Option<Q>,
}

/// Integer-valued per-configuration quantities from which statistics are
/// assembled; cached per oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum RawKind {
    /// Termination class (0 win 1, 1 win 2, 2 cycle) plus four times the
    /// detection day of a run with cap `2^n`.
    Run(UpdateRule),
    Count {
        day: u32,
        color: Color,
        rule: UpdateRule,
    },
    /// `Σ_v L(v) s_v` with `s_v = ±1` the keep sign.
    SignedKeep(UpdateRule),
    Set {
        which: SetKind,
        u: usize,
        v: usize,
        w: usize,
    },
}

fn termination_class(t: &Termination) -> i64 {
    match t {
        Termination::Unanimity { winner: Color::One, .. } => 0,
        Termination::Unanimity { winner: Color::Two, .. } => 1,
        Termination::TwoCycle { .. } => 2,
        Termination::CapReached { .. } => 3,
    }
}

fn count_on_day(g: &ColoredGraph, day: u32, color: Color, rule: UpdateRule) -> i64 {
    let mut state = g.clone();
    for _ in 0..day {
        state = step(&state, rule);
    }
    state.colors().iter().filter(|&&c| c == color).count() as i64
}

fn signed_keep(g: &ColoredGraph, rule: UpdateRule) -> i64 {
    keep_signs(g, rule)
        .iter()
        .zip(g.colors())
        .map(|(s, c)| s * c.label())
        .sum()
}

fn set_size(g: &ColoredGraph, which: SetKind, u: usize, v: usize, w: usize) -> i64 {
    if which == SetKind::RHat {
        return compute_r_hat(g, w).expect("validated").len() as i64;
    }
    let r = compute_s_sets(g, u, v).expect("validated");
    (match which {
        SetKind::S1 => r.s1.len(),
        SetKind::S2 => r.s2.len(),
        SetKind::SStar => r.s_star.len(),
        SetKind::IG => r.i_g,
        SetKind::RHat => unreachable!(),
    }) as i64
}

fn raw_value(kind: RawKind, g: &ColoredGraph) -> i64 {
    match kind {
        RawKind::Run(rule) => {
            let trace = run(g, rule, 1u32 << g.n());
            termination_class(&trace.termination) + 4 * trace.last_day() as i64
        }
        RawKind::Count { day, color, rule } => count_on_day(g, day, color, rule),
        RawKind::SignedKeep(rule) => signed_keep(g, rule),
        RawKind::Set { which, u, v, w } => set_size(g, which, u, v, w),
    }
}

/// Numbers the oracle can integrate with.
trait Scalar: Num + Clone + PartialOrd + Send + Sync {
    fn from_i64(v: i64) -> Self;
    fn mu(rule: UpdateRule, c1: usize, c2: usize, p: &Self) -> Result<(Self, Self)>;
}

impl Scalar for Q {
    fn from_i64(v: i64) -> Self {
        exact::q_int(v)
    }
    fn mu(rule: UpdateRule, c1: usize, c2: usize, p: &Self) -> Result<(Self, Self)> {
        compute_mu_exact(rule, c1, c2, p)
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn mu(rule: UpdateRule, c1: usize, c2: usize, p: &Self) -> Result<(Self, Self)> {
        compute_mu_for(rule, c1, c2, *p)
    }
}

/// `counts[e]` configurations with `e` edges share each value.
type Histogram = BTreeMap<i64, Vec<u64>>;

/// Distribution of a raw quantity under weights indexed by edge count.
fn distribution<T: Scalar>(hist: &Histogram, weights: &[T]) -> Vec<(i64, T)> {
    hist.iter()
        .map(|(&value, counts)| {
            let mass = counts
                .iter()
                .zip(weights)
                .filter(|(&c, _)| c > 0)
                .fold(T::zero(), |acc, (&c, w)| acc + T::from_i64(c as i64) * w.clone());
            (value, mass)
        })
        .collect()
}

fn expectation<T: Scalar>(dist: &[(i64, T)], f: impl Fn(i64) -> T) -> T {
    dist.iter().fold(T::zero(), |acc, (v, m)| acc + m.clone() * f(*v))
}

fn mean_and_variance<T: Scalar>(dist: &[(i64, T)]) -> (T, T) {
    let mean = expectation(dist, T::from_i64);
    let second = expectation(dist, |v| T::from_i64(v) * T::from_i64(v));
    let var = second - mean.clone() * mean.clone();
    (mean, var)
}

fn pow_t<T: Scalar>(x: T, k: u32) -> T {
    (0..k).fold(T::one(), |acc, _| acc * x.clone())
}

/// Exhaustive enumerator for one `(n, coloring)`, caching per-configuration
/// quantities across statistics.
pub struct Oracle {
    n: usize,
    colors: Vec<Color>,
    edges: usize,
    cache: Mutex<HashMap<RawKind, Arc<Histogram>>>,
}

impl Oracle {
    pub fn new(n: usize, colors: Vec<Color>) -> Result<Self> {
        if n > MAX_ORACLE_N {
            return Err(Error::TooLarge { n, max: MAX_ORACLE_N });
        }
        if colors.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{} colors given for n = {n}",
                colors.len()
            )));
        }
        Ok(Oracle {
            n,
            edges: n * n.saturating_sub(1) / 2,
            colors,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    /// Number of edge configurations.
    pub fn configurations(&self) -> u64 {
        1u64 << self.edges
    }

    fn graph(&self, mask: u64) -> ColoredGraph {
        let adj = Adjacency::from_pair_mask(self.n, mask);
        ColoredGraph::new(Arc::new(adj), self.colors.clone()).expect("length checked")
    }

    fn histogram(&self, kind: RawKind) -> Arc<Histogram> {
        if let Some(h) = self.cache.lock().expect("cache lock").get(&kind) {
            return Arc::clone(h);
        }
        let values: Vec<(u32, i64)> = (0..self.configurations())
            .into_par_iter()
            .map(|mask| (mask.count_ones(), raw_value(kind, &self.graph(mask))))
            .collect();
        let mut hist = Histogram::new();
        for (e, v) in values {
            hist.entry(v).or_insert_with(|| vec![0; self.edges + 1])[e as usize] += 1;
        }
        let hist = Arc::new(hist);
        self.cache.lock().expect("cache lock").insert(kind, Arc::clone(&hist));
        hist
    }

    /// Default focal pair: the first two color-1 vertices.
    fn focal_pair(&self, focal: Option<(usize, usize)>) -> Result<(usize, usize)> {
        if let Some(pair) = focal {
            return Ok(pair);
        }
        let mut ones = (0..self.n).filter(|&v| self.colors[v] == Color::One);
        match (ones.next(), ones.next()) {
            (Some(u), Some(v)) => Ok((u, v)),
            _ => Err(Error::InvalidArgument(
                "set statistics need two color-1 vertices".into(),
            )),
        }
    }

    fn class_sizes(&self) -> (usize, usize) {
        let c1 = self.colors.iter().filter(|&&c| c == Color::One).count();
        (c1, self.n - c1)
    }

    fn weights<T: Scalar>(&self, p: &T) -> Vec<T> {
        let q = T::one() - p.clone();
        (0..=self.edges)
            .map(|e| pow_t(p.clone(), e as u32) * pow_t(q.clone(), (self.edges - e) as u32))
            .collect()
    }

    /// Raw quantity backing a non-Fourier statistic.
    fn raw_kind(&self, stat: &Statistic) -> Result<RawKind> {
        Ok(match *stat {
            Statistic::WinProb { rule, .. } => RawKind::Run(rule),
            Statistic::ExpectedCount { day, color, rule } | Statistic::VarCount { day, color, rule } => {
                RawKind::Count { day, color, rule }
            }
            Statistic::MomentZ { rule, .. } => RawKind::SignedKeep(rule),
            Statistic::SetStat {
                which,
                moment,
                focal,
                w,
            } => {
                if !(1..=2).contains(&moment) {
                    return Err(Error::InvalidArgument(format!(
                        "moment must be 1 (mean) or 2 (variance), got {moment}"
                    )));
                }
                let g = self.graph(0);
                let (u, v) = self.focal_pair(focal)?;
                let w = w.unwrap_or(u);
                if which == SetKind::RHat {
                    g.check_vertex(w)?;
                } else {
                    check_focal_pair(&g, u, v)?;
                }
                RawKind::Set { which, u, v, w }
            }
            Statistic::FourierCoeff { .. } => {
                return Err(Error::InvalidArgument("Fourier queries have no raw quantity".into()))
            }
        })
    }

    fn evaluate<T: Scalar>(&self, stat: &Statistic, p: &T) -> Result<(T, Option<[T; 4]>)> {
        let hist = self.histogram(self.raw_kind(stat)?);
        let dist = distribution(&hist, &self.weights(p));
        Ok(match *stat {
            Statistic::WinProb { color, cap, .. } => {
                let cap = cap.unwrap_or(1u32 << self.n) as i64;
                let mut mass: [T; 4] = [T::zero(), T::zero(), T::zero(), T::zero()];
                for (raw, m) in &dist {
                    let (class, day) = (raw % 4, raw / 4);
                    let slot = if day > cap { 3 } else { class as usize };
                    mass[slot] = mass[slot].clone() + m.clone();
                }
                let win = match color {
                    Color::One => mass[0].clone(),
                    Color::Two => mass[1].clone(),
                };
                (win, Some(mass))
            }
            Statistic::ExpectedCount { .. } => (mean_and_variance(&dist).0, None),
            Statistic::VarCount { .. } => (mean_and_variance(&dist).1, None),
            Statistic::MomentZ { k, rule } => {
                let (c1, c2) = self.class_sizes();
                let (mu1, mu2) = T::mu(rule, c1, c2, p)?;
                let center = T::from_i64(c1 as i64) * mu1 - T::from_i64(c2 as i64) * mu2;
                (expectation(&dist, |v| pow_t(T::from_i64(v) - center.clone(), k)), None)
            }
            Statistic::SetStat { moment, .. } => {
                let (mean, var) = mean_and_variance(&dist);
                (if moment == 1 { mean } else { var }, None)
            }
            Statistic::FourierCoeff { .. } => unreachable!("handled by the caller"),
        })
    }

    fn fourier(&self, v: usize, set: &[(usize, usize)], rule: UpdateRule, p: &OracleP) -> Result<OracleAnswer> {
        let pairs = pair_list(self.n);
        let mut mask = 0u64;
        for &(a, b) in set {
            let key = (a.min(b), a.max(b));
            let i = pairs
                .iter()
                .position(|&e| e == key)
                .ok_or_else(|| Error::InvalidArgument(format!("({a}, {b}) is not an edge slot")))?;
            mask |= 1 << i;
        }
        Ok(match p {
            OracleP::Exact(pq) => {
                let t = fourier_exact(self.n, &self.colors, v, pq, rule, 1)?;
                OracleAnswer {
                    value: t.coefficient(mask),
                    exact: None,
                    exact_square: Some(exact::format_rational(&t.coefficient_sq(mask))),
                    error_bound: None,
                    outcomes: None,
                    exact_value: None,
                }
            }
            OracleP::Float(pf) => {
                let t = fourier_float(self.n, &self.colors, v, *pf, rule)?;
                OracleAnswer {
                    value: t.coefficient(mask),
                    exact: None,
                    exact_square: None,
                    error_bound: Some(float_error_bound(self.edges, 1.0)),
                    outcomes: None,
                    exact_value: None,
                }
            }
        })
    }

    /// Evaluates one statistic.
    pub fn eval(&self, p: &OracleP, stat: &Statistic) -> Result<OracleAnswer> {
        match p {
            OracleP::Exact(q) if !exact::is_probability(q) => {
                return Err(Error::InvalidArgument(format!("p = {q} outside [0, 1]")))
            }
            OracleP::Float(f) if !(0.0..=1.0).contains(f) => return Err(Error::InvalidProbability(*f)),
            _ => {}
        }
        if let Statistic::FourierCoeff { v, ref set, rule } = *stat {
            return self.fourier(v, set, rule, p);
        }
        let outcomes = |mass: Option<[f64; 4]>| {
            mass.map(|m| OutcomeMass {
                win1: m[0],
                win2: m[1],
                cycle: m[2],
                cap_reached: m[3],
            })
        };
        Ok(match p {
            OracleP::Exact(pq) => {
                let (value, mass) = self.evaluate(stat, pq)?;
                OracleAnswer {
                    value: exact::to_f64(&value),
                    exact: Some(exact::format_rational(&value)),
                    exact_square: None,
                    error_bound: None,
                    outcomes: outcomes(mass.map(|m| m.map(|x| exact::to_f64(&x)))),
                    exact_value: Some(value),
                }
            }
            OracleP::Float(pf) => {
                let (value, mass) = self.evaluate(stat, pf)?;
                let magnitude = match stat {
                    Statistic::MomentZ { k, .. } => (2.0 * self.n as f64).powi(*k as i32),
                    _ => (self.n * self.n) as f64,
                };
                OracleAnswer {
                    value,
                    exact: None,
                    exact_square: None,
                    error_bound: Some(float_error_bound(self.edges, magnitude)),
                    outcomes: outcomes(mass),
                    exact_value: None,
                }
            }
        })
    }

    /// Sum of all configuration weights; one exactly in rational mode.
    pub fn total_weight(&self, p: &Q) -> Q {
        let w = self.weights(p);
        (0..=self.edges)
            .map(|e| Q::from_integer(exact::binomial(self.edges as u64, e as u64)) * &w[e])
            .sum()
    }

    /// Sample value of `stat` on one graph, matching what the oracle
    /// integrates (for `VarCount` and variance set statistics, the
    /// underlying quantity whose variance is taken).
    pub fn sample_value(&self, stat: &Statistic, g: &ColoredGraph, p: f64) -> Result<f64> {
        Ok(match *stat {
            Statistic::WinProb { color, rule, cap } => {
                let trace = run(g, rule, cap.unwrap_or(1u32 << self.n));
                matches!(trace.termination, Termination::Unanimity { winner, .. } if winner == color) as u8 as f64
            }
            Statistic::MomentZ { k, rule } => {
                let (c1, c2) = self.class_sizes();
                let (mu1, mu2) = compute_mu_for(rule, c1, c2, p)?;
                let center = c1 as f64 * mu1 - c2 as f64 * mu2;
                (signed_keep(g, rule) as f64 - center).powi(k as i32)
            }
            Statistic::FourierCoeff { v, ref set, rule } => {
                let (c1, c2) = self.class_sizes();
                let (mu1, mu2) = compute_mu_for(rule, c1, c2, p)?;
                let mu = if self.colors[v] == Color::One { mu1 } else { mu2 };
                let s = if next_colors(g, rule)[v] == self.colors[v] {
                    1.0
                } else {
                    -1.0
                };
                let two_sigma = 2.0 * (p * (1.0 - p)).sqrt();
                let phi: f64 = set
                    .iter()
                    .map(|&(a, b)| (if g.has_edge(a, b) { 1.0 } else { -1.0 } + 1.0 - 2.0 * p) / two_sigma)
                    .product();
                (s - mu) * phi
            }
            _ => raw_value(self.raw_kind(stat)?, g) as f64,
        })
    }
}

/// Rounding bound for a float evaluation summing `2^edges` weighted terms
/// of magnitude at most `magnitude`.
fn float_error_bound(edges: usize, magnitude: f64) -> f64 {
    4.0 * (edges as f64 + 2.0) * f64::EPSILON * magnitude
}

/// Evaluates one query.
pub fn oracle_eval(q: &OracleQuery) -> Result<OracleAnswer> {
    if q.n != q.colors.len() {
        return Err(Error::InvalidArgument(format!(
            "{} colors given for n = {}",
            q.colors.len(),
            q.n
        )));
    }
    Oracle::new(q.n, q.colors.clone())?.eval(&q.p, &q.statistic)
}

/// Oracle value next to a Monte Carlo estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgreementRecord {
    pub n: usize,
    pub p: f64,
    pub colors: String,
    pub statistic: Statistic,
    pub oracle: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub trials: u64,
    /// `|oracle - estimate| / stderr`.
    pub z_score: f64,
    pub agree: bool,
}

fn is_variance(stat: &Statistic) -> bool {
    matches!(stat, Statistic::VarCount { .. } | Statistic::SetStat { moment: 2, .. })
}

/// Sample variance and its standard error `sqrt((m4 - s^4) / N)`.
pub fn variance_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().copied().collect::<CompensatedSum>().value() / n;
    let central = |k: i32| {
        xs.iter()
            .map(|x| (x - mean).powi(k))
            .collect::<CompensatedSum>()
            .value()
            / n
    };
    let m2 = central(2);
    let m4 = central(4);
    let s2 = m2 * n / (n - 1.0);
    (s2, ((m4 - m2 * m2).max(0.0) / n).sqrt())
}

/// Compares the oracle with a Monte Carlo estimate over `trials` graphs
/// drawn with the query's coloring; agreement means within 4 standard errors.
pub fn oracle_vs_mc(q: &OracleQuery, trials: u64, seed: u64) -> Result<AgreementRecord> {
    if trials < 2 {
        return Err(Error::InvalidArgument("at least two trials are needed".into()));
    }
    let oracle = Oracle::new(q.n, q.colors.clone())?;
    let answer = oracle.eval(&q.p, &q.statistic)?;
    let p = q.p.as_f64();
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::split(seed, t);
            let adj = sample_adjacency(q.n, p, &mut r)?;
            let g = ColoredGraph::new(Arc::new(adj), q.colors.clone())?;
            oracle.sample_value(&q.statistic, &g, p)
        })
        .collect::<Result<_>>()?;
    let (estimate, stderr) = if is_variance(&q.statistic) {
        variance_stderr(&samples)
    } else {
        mean_stderr(&samples)
    };
    let diff = (answer.value - estimate).abs();
    let agree = if stderr > 0.0 {
        diff <= 4.0 * stderr
    } else {
        diff <= 1e-12
    };
    Ok(AgreementRecord {
        n: q.n,
        p,
        colors: q.colors.iter().map(|&c| u8::from(c).to_string()).collect(),
        statistic: q.statistic.clone(),
        oracle: answer.value,
        estimate,
        stderr,
        trials,
        z_score: if stderr > 0.0 { diff / stderr } else { 0.0 },
        agree,
    })
}

/// Whether the answer is exactly zero.
pub fn is_exact_zero(a: &OracleAnswer) -> bool {
    a.exact_value.as_ref().is_some_and(Zero::is_zero)
}

/// Whether the answer is exactly one.
pub fn is_exact_one(a: &OracleAnswer) -> bool {
    a.exact_value.as_ref().is_some_and(One::is_one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::graph::parse_colors;

    fn exact(n: usize, colors: &str, p: Q, statistic: Statistic) -> OracleAnswer {
        oracle_eval(&OracleQuery {
            n,
            p: OracleP::Exact(p),
            colors: parse_colors(colors).unwrap(),
            statistic,
        })
        .unwrap()
    }

    #[test]
    fn two_vertices_never_reach_unanimity() {
        let a = exact(
            2,
            "12",
            q(1, 2),
            Statistic::WinProb {
                color: Color::One,
                rule: UpdateRule::Standard,
                cap: Some(5),
            },
        );
        assert!(is_exact_zero(&a));
        let m = a.outcomes.unwrap();
        assert_eq!(m.cycle, 1.0);
    }

    #[test]
    fn triangle_count_at_p_one() {
        let stat = Statistic::ExpectedCount {
            day: 1,
            color: Color::One,
            rule: UpdateRule::Standard,
        };
        assert_eq!(exact(3, "112", q(1, 1), stat.clone()).exact.unwrap(), "3");
        // By hand: day-1 color-1 count over the 8 graphs on 3 vertices.
        let a = exact(3, "112", q(1, 2), stat);
        assert_eq!(a.exact.unwrap(), "9/4");
    }

    #[test]
    fn weights_sum_to_one() {
        for n in 0..=MAX_ORACLE_N {
            let o = Oracle::new(n, vec![Color::One; n]).unwrap();
            assert!(o.total_weight(&q(2, 7)).is_one());
        }
    }

    #[test]
    fn mean_of_z_is_zero() {
        let a = exact(
            4,
            "1122",
            q(1, 3),
            Statistic::MomentZ {
                k: 1,
                rule: UpdateRule::Biased,
            },
        );
        assert!(is_exact_zero(&a));
    }

    #[test]
    fn float_mode_reports_bound() {
        let a = oracle_eval(&OracleQuery {
            n: 3,
            p: OracleP::Float(0.5),
            colors: parse_colors("112").unwrap(),
            statistic: Statistic::ExpectedCount {
                day: 1,
                color: Color::One,
                rule: UpdateRule::Standard,
            },
        })
        .unwrap();
        assert!((a.value - 2.25).abs() <= a.error_bound.unwrap());
    }

    #[test]
    fn too_large_is_rejected() {
        assert!(matches!(
            Oracle::new(7, vec![Color::One; 7]),
            Err(Error::TooLarge { .. })
        ));
    }
}
