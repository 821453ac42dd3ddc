//! Output-only decimal rendering of exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::polyring::Rat;

fn pow10(e: usize) -> BigInt {
    num_traits::pow(BigInt::from(10), e)
}

/// `x` rounded half away from zero to `sig` significant digits, in plain
/// positional notation with trailing zeros dropped.
pub fn render_decimal(x: &Rat, sig: usize) -> String {
    let sig = sig.max(1);
    if x.is_zero() {
        return "0".into();
    }
    let a = x.abs();
    let (n, d) = (a.numer(), a.denom());
    // 10^e <= a < 10^(e+1)
    let mut e = n.to_string().len() as i64 - d.to_string().len() as i64;
    let ge_pow = |e: i64| {
        if e >= 0 {
            n >= &(d * pow10(e as usize))
        } else {
            n * pow10((-e) as usize) >= *d
        }
    };
    while !ge_pow(e) {
        e -= 1;
    }
    while ge_pow(e + 1) {
        e += 1;
    }
    let shift = sig as i64 - 1 - e;
    let (num, den) = if shift >= 0 {
        (n * pow10(shift as usize), d.clone())
    } else {
        (n.clone(), d * pow10((-shift) as usize))
    };
    let (q, r) = num.div_rem(&den);
    let mut digits = if r * 2 >= den { q + 1 } else { q };
    if digits >= pow10(sig) {
        digits /= 10;
        e += 1;
    }
    let digits = digits.to_string();
    let mut out = String::new();
    if x.is_negative() {
        out.push('-');
    }
    if e >= 0 {
        let int_len = e as usize + 1;
        if int_len >= digits.len() {
            out.push_str(&digits);
            out.push_str(&"0".repeat(int_len - digits.len()));
            return out;
        }
        let frac = digits[int_len..].trim_end_matches('0');
        out.push_str(&digits[..int_len]);
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    } else {
        out.push_str("0.");
        out.push_str(&"0".repeat((-e - 1) as usize));
        out.push_str(digits.trim_end_matches('0'));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

    #[test]
    fn examples() {
        assert_eq!(render_decimal(&rat(1, 1), 17), "1");
        assert_eq!(render_decimal(&rat(0, 1), 17), "0");
        assert_eq!(render_decimal(&rat(-1, 2), 17), "-0.5");
        assert_eq!(render_decimal(&rat(1, 3), 5), "0.33333");
        assert_eq!(render_decimal(&rat(2, 3), 5), "0.66667");
        assert_eq!(render_decimal(&rat(1, 3000), 3), "0.000333");
        assert_eq!(render_decimal(&rat(123456, 1), 3), "123000");
        assert_eq!(render_decimal(&rat(9999, 1000), 3), "10");
        assert_eq!(render_decimal(&rat(-998, 1000), 17), "-0.998");
        assert_eq!(render_decimal(&rat(25, 4), 2), "6.3");
    }

    #[test]
    fn agrees_with_float_formatting() {
        for (p, q) in [(1i64, 7i64), (22, 7), (-355, 113), (1, 97), (100000, 3)] {
            let s = render_decimal(&rat(p, q), 15);
            let f: f64 = s.parse().unwrap();
            assert!((f - p as f64 / q as f64).abs() <= 1e-13 * (p as f64 / q as f64).abs());
        }
    }
}
