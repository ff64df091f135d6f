//! Binomial and binomial-difference probabilities, and the standard normal
//! distribution.
//!
//! Point masses of `Bin(n, p)` use Loader's saddle-point expansion, which
//! evaluates the mass in log space without forming `ln n!` directly and so
//! keeps relative error near machine precision for `n` in the millions.

use libm::erfc;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::check_probability;

/// The Berry-Esseen constant used by the inequality checks.
pub const C_BE: f64 = 0.56;

/// Total trial counts above which difference masses are summed only over
/// a window of +-12 standard deviations.
const WINDOW_MIN_N: u64 = 10_000;
const WINDOW_SDS: f64 = 12.0;

/// Neumaier compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln k! - ((k + 1/2) ln k - k + ln sqrt(2 pi))` for integer `k`.
fn stirling_error(k: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if k == 0 {
        return 0.0;
    }
    let x = k as f64;
    if k <= 15 {
        let ln_fact: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
        return ln_fact - (x + 0.5) * x.ln() + x - LN_SQRT_2PI;
    }
    let xx = x * x;
    if k > 500 {
        (S0 - S1 / xx) / x
    } else if k > 80 {
        (S0 - (S1 - S2 / xx) / xx) / x
    } else if k > 35 {
        (S0 - (S1 - (S2 - S3 / xx) / xx) / xx) / x
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / xx) / xx) / xx) / xx) / x
    }
}

/// Deviance term `x ln(x / m) + m - x`, evaluated stably near `x = m`.
fn deviance(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1.. {
            ej *= v2;
            let next = s + ej / (2 * j + 1) as f64;
            if next == s {
                return s;
            }
            s = next;
        }
    }
    x * (x / m).ln() + m - x
}

fn binom_mass(n: u64, p: f64, k: u64) -> f64 {
    let q = 1.0 - p;
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    if k == 0 {
        if n == 0 {
            return 1.0;
        }
        let lc = if p < 0.1 {
            -deviance(nf, nf * q) - nf * p
        } else {
            nf * q.ln()
        };
        return lc.exp();
    }
    if k == n {
        let lc = if q < 0.1 {
            -deviance(nf, nf * p) - nf * q
        } else {
            nf * p.ln()
        };
        return lc.exp();
    }
    let kf = k as f64;
    let lc = stirling_error(n)
        - stirling_error(k)
        - stirling_error(n - k)
        - deviance(kf, nf * p)
        - deviance(nf - kf, nf * q);
    let lf = 2.0 * LN_SQRT_2PI + kf.ln() + (-kf / nf).ln_1p();
    (lc - 0.5 * lf).exp()
}

/// `P(Bin(n, p) = k)`.
pub fn binom_pmf(n: u64, p: f64, k: u64) -> Result<f64> {
    check_probability(p)?;
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    Ok(binom_mass(n, p, k))
}

/// The full mass vector of `Bin(n, p)`.
pub fn binom_pmf_vec(n: u64, p: f64) -> Result<Vec<f64>> {
    check_probability(p)?;
    Ok((0..=n).map(|k| binom_mass(n, p, k)).collect())
}

/// Inclusive range of `k` carrying all but a negligible tail of `Bin(n, p)`.
fn support_window(n: u64, p: f64, total_n: u64) -> (i64, i64) {
    if total_n <= WINDOW_MIN_N {
        return (0, n as i64);
    }
    let mean = n as f64 * p;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    let lo = (mean - WINDOW_SDS * sd - 1.0).floor().max(0.0) as i64;
    let hi = (mean + WINDOW_SDS * sd + 1.0).ceil().min(n as f64) as i64;
    (lo, hi)
}

/// `P(X1 - X2 = d)` for independent `X1 ~ Bin(n1, p)`, `X2 ~ Bin(n2, p)`.
pub fn bindiff_pmf(n1: u64, n2: u64, p: f64, d: i64) -> f64 {
    let total = n1 + n2;
    let (lo1, hi1) = support_window(n1, p, total);
    let (lo2, hi2) = support_window(n2, p, total);
    let lo = lo2.max(lo1 - d);
    let hi = hi2.min(hi1 - d);
    (lo..=hi)
        .map(|k| binom_mass(n1, p, (k + d) as u64) * binom_mass(n2, p, k as u64))
        .collect::<CompensatedSum>()
        .value()
}

/// Tail function of `Bin(n, p)` on its window: `lower[k] = P(X <= lo + k)`
/// or `upper[k] = P(X >= lo + k)`.
fn tail_table(n: u64, p: f64, lo: i64, hi: i64, upper: bool) -> Vec<f64> {
    let masses: Vec<f64> = (lo..=hi).map(|k| binom_mass(n, p, k as u64)).collect();
    let mut out = vec![0.0; masses.len()];
    let mut acc = CompensatedSum::new();
    if upper {
        for i in (0..masses.len()).rev() {
            acc.add(masses[i]);
            out[i] = acc.value();
        }
    } else {
        for (i, &m) in masses.iter().enumerate() {
            acc.add(m);
            out[i] = acc.value();
        }
    }
    out
}

/// `P(X1 - X2 <= d)`.
pub fn bindiff_cdf(n1: u64, n2: u64, p: f64, d: i64) -> f64 {
    let total = n1 + n2;
    let (lo1, hi1) = support_window(n1, p, total);
    let (lo2, hi2) = support_window(n2, p, total);
    let lower = tail_table(n1, p, lo1, hi1, false);
    (lo2..=hi2)
        .map(|k| {
            let t = k + d;
            let f1 = if t < lo1 {
                0.0
            } else if t >= hi1 {
                1.0
            } else {
                lower[(t - lo1) as usize]
            };
            f1 * binom_mass(n2, p, k as u64)
        })
        .collect::<CompensatedSum>()
        .value()
}

/// `P(X1 - X2 >= d)`, summed from the upper tail.
pub fn bindiff_ge(n1: u64, n2: u64, p: f64, d: i64) -> f64 {
    let total = n1 + n2;
    let (lo1, hi1) = support_window(n1, p, total);
    let (lo2, hi2) = support_window(n2, p, total);
    let upper = tail_table(n1, p, lo1, hi1, true);
    (lo2..=hi2)
        .map(|k| {
            let t = k + d;
            let s1 = if t <= lo1 {
                1.0
            } else if t > hi1 {
                0.0
            } else {
                upper[(t - lo1) as usize]
            };
            s1 * binom_mass(n2, p, k as u64)
        })
        .collect::<CompensatedSum>()
        .value()
}

/// Exact table of `X1 - X2` over the support `[-n2, n1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinDiffDist {
    pub n1: u64,
    pub n2: u64,
    pub p: f64,
    /// `pmf[i]` is the mass at `d = i - n2`.
    pub pmf: Vec<f64>,
}

impl BinDiffDist {
    /// Full convolution table, `O(n1 * n2)`.
    pub fn new(n1: u64, n2: u64, p: f64) -> Result<Self> {
        let a = binom_pmf_vec(n1, p)?;
        let b = binom_pmf_vec(n2, p)?;
        let len = (n1 + n2 + 1) as usize;
        let mut acc = vec![CompensatedSum::new(); len];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0.0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                acc[i + n2 as usize - j].add(ai * bj);
            }
        }
        Ok(BinDiffDist {
            n1,
            n2,
            p,
            pmf: acc.iter().map(CompensatedSum::value).collect(),
        })
    }

    /// Smallest support point, `-n2`.
    pub fn min(&self) -> i64 {
        -(self.n2 as i64)
    }

    /// Largest support point, `n1`.
    pub fn max(&self) -> i64 {
        self.n1 as i64
    }

    /// Mass at `d`; zero off the support.
    pub fn pmf(&self, d: i64) -> f64 {
        if d < self.min() || d > self.max() {
            0.0
        } else {
            self.pmf[(d - self.min()) as usize]
        }
    }

    /// `P(X1 - X2 <= d)`.
    pub fn cdf(&self, d: i64) -> f64 {
        if d < self.min() {
            return 0.0;
        }
        let end = ((d - self.min()) as usize).min(self.pmf.len() - 1);
        self.pmf[..=end].iter().copied().collect::<CompensatedSum>().value()
    }

    /// Mean `(n1 - n2) p`.
    pub fn mean(&self) -> f64 {
        (self.n1 as f64 - self.n2 as f64) * self.p
    }

    /// Sum of the table.
    pub fn total_mass(&self) -> f64 {
        self.pmf.iter().copied().collect::<CompensatedSum>().value()
    }

    /// Support points paired with their masses.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.pmf
            .iter()
            .enumerate()
            .map(move |(i, &m)| (i as i64 + self.min(), m))
    }
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x - LN_SQRT_2PI).exp()
}

/// Standard normal distribution function.
pub fn normal_cdf(a: f64) -> f64 {
    0.5 * erfc(-a / std::f64::consts::SQRT_2)
}

/// `Φ(a) - 1/2`.
pub fn normal_cdf0(a: f64) -> f64 {
    normal_cdf(a) - 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_small_values() {
        assert!((binom_pmf(2, 0.5, 1).unwrap() - 0.5).abs() < 1e-15);
        let p: f64 = 0.37;
        assert!((binom_pmf(9, p, 0).unwrap() - (1.0 - p).powi(9)).abs() < 1e-15);
        assert!((binom_pmf(10, 0.3, 3).unwrap() - 0.266_827_932_0).abs() < 1e-10);
        assert!(binom_pmf(3, 0.5, 4).is_err());
        assert!(binom_pmf(3, -0.1, 1).is_err());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s: CompensatedSum = [1.0, 1e-16, 1e-16, -1.0].into_iter().collect();
        assert!((s.value() - 2e-16).abs() < 1e-30);
    }

    #[test]
    fn bindiff_basics() {
        assert!((bindiff_pmf(1, 1, 0.5, 0) - 0.5).abs() < 1e-15);
        let dist = BinDiffDist::new(7, 4, 0.3).unwrap();
        assert!((dist.total_mass() - 1.0).abs() < 1e-12);
        for d in -5..=8 {
            assert!((dist.pmf(d) - bindiff_pmf(7, 4, 0.3, d)).abs() < 1e-15);
            assert!((dist.cdf(d) - bindiff_cdf(7, 4, 0.3, d)).abs() < 1e-14);
            assert!((1.0 - dist.cdf(d - 1) - bindiff_ge(7, 4, 0.3, d)).abs() < 1e-14);
        }
    }

    #[test]
    fn normal_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(8.0) - 1.0).abs() < 1e-12);
        for a in [0.1, 0.7, 1.9, 3.3, 6.0] {
            assert!((normal_cdf(-a) - (1.0 - normal_cdf(a))).abs() < 1e-14);
        }
        assert!((normal_cdf0(0.0)).abs() < 1e-18);
    }
}
