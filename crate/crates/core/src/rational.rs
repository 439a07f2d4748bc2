//! Exact rational scalars and the helpers shared by every module.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn recip(value: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(value))
}

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

pub fn binomial_rat(n: u64, k: u64) -> Rational {
    Rational::from_integer(binomial(n, k))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// Round-to-nearest conversion to `f64`.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p/q`, an integer, or a decimal literal such as `-0.125` or `3e-2`.
/// Decimal literals are converted exactly, never through binary floating point.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let all: String = format!("{whole}{frac}");
    let mut value = Rational::from_integer(BigInt::from_str(&all).ok()?);
    let scale = exponent - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= pow(&ten, scale as u32);
    } else {
        value /= pow(&ten, scale.unsigned_abs());
    }
    Some(if negative { -value } else { value })
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Renders a double with four significant digits, e.g. `0.009852` or `4.833`.
pub fn sig4(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-6..=6).contains(&magnitude) {
        return format!("{x:.3e}");
    }
    let decimals = (3 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `p/q (decimal)` rendering used by the text tables.
pub fn display_with_decimal(value: &Rational) -> String {
    if value.is_integer() {
        return value.to_string();
    }
    format!("{value} ({})", sig4(to_f64(value)))
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}

/// JSON rendering of an exact value: `{ "num": "..", "den": "..", "approx": .. }`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactJson {
    pub num: String,
    pub den: String,
    pub approx: f64,
}

impl From<&Rational> for ExactJson {
    fn from(value: &Rational) -> Self {
        ExactJson {
            num: value.numer().to_string(),
            den: value.denom().to_string(),
            approx: to_f64(value),
        }
    }
}

/// `serialize_with` adapters for the report structs.
pub mod exact {
    use super::*;

    pub fn one<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExactJson::from(value).serialize(s)
    }

    pub fn seq<S: Serializer>(values: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(ExactJson::from))
    }

    pub fn matrix<S: Serializer>(
        rows: &[Vec<Rational>],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(rows.iter().flatten().map(ExactJson::from))
    }

    pub fn option<S: Serializer>(
        value: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        value.as_ref().map(ExactJson::from).serialize(s)
    }
}
