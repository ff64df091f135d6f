//! Exact rational arithmetic helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational.
pub type Q = BigRational;

/// Integer as a rational.
pub fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// `num / den` as a rational.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest `f64`.
pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"a/b"`, an integer, or a plain decimal such as `"0.25"`
/// (scientific notation allowed) into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::InvalidArgument(format!("cannot parse {s:?} as an exact rational"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|_| bad())?;
        let den: BigInt = b.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let mut value = Q::from_integer(all);
    let scale = exponent - frac_part.len() as i32;
    let ten = Q::from_integer(BigInt::from(10));
    for _ in 0..scale.unsigned_abs() {
        value = if scale > 0 { value * &ten } else { value / &ten };
    }
    Ok(if negative { -value } else { value })
}

/// `x^k` for a nonnegative integer exponent.
pub fn pow(x: &Q, k: u32) -> Q {
    num_traits::pow(x.clone(), k as usize)
}

/// Formats as `num/den` (or just `num` for integers).
pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact mass vector of `Bin(n, p)`.
pub fn binom_pmf_exact(n: u64, p: &Q) -> Vec<Q> {
    let one_minus = Q::one() - p;
    (0..=n)
        .map(|k| Q::from_integer(binomial(n, k)) * pow(p, k as u32) * pow(&one_minus, (n - k) as u32))
        .collect()
}

/// Exact `P(X1 - X2 >= d)` for independent `Bin(n1, p)` and `Bin(n2, p)`.
pub fn bindiff_ge_exact(n1: u64, n2: u64, p: &Q, d: i64) -> Q {
    let a = binom_pmf_exact(n1, p);
    let b = binom_pmf_exact(n2, p);
    let mut total = Q::zero();
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            if i as i64 - j as i64 >= d {
                total += ai * bj;
            }
        }
    }
    total
}

/// Whether `x` lies in `[0, 1]`.
pub fn is_probability(x: &Q) -> bool {
    !x.is_negative() && *x <= Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("0.5").unwrap(), q(1, 2));
        assert_eq!(parse_rational("1/3").unwrap(), q(1, 3));
        assert_eq!(parse_rational("-2.25").unwrap(), q(-9, 4));
        assert_eq!(parse_rational("3").unwrap(), q_int(3));
        assert_eq!(parse_rational("1e-2").unwrap(), q(1, 100));
        assert_eq!(parse_rational(".125").unwrap(), q(1, 8));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn formats_fractions() {
        assert_eq!(format_rational(&q(6, 8)), "3/4");
        assert_eq!(format_rational(&q_int(2)), "2");
    }

    #[test]
    fn exact_binomial_sums_to_one() {
        let pmf = binom_pmf_exact(9, &q(2, 7));
        let total: Q = pmf.iter().cloned().sum();
        assert_eq!(total, Q::one());
        assert_eq!(binomial(10, 3), BigInt::from(120));
    }
}
