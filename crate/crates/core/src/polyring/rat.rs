use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Parses `[-]digits[/digits]`. Anything else, including a zero
/// denominator, whitespace or a leading `+`, is rejected.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::InvalidRational(s.to_string());
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (num_s, den_s) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(num_s) || !den_s.map_or(true, digits) {
        return Err(bad());
    }
    let mut num: BigInt = num_s.parse().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let den: BigInt = match den_s {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// Canonical `p/q` rendering; integers keep their `/1`.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
