use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rat::{format_rat, parse_rat, Rat};
use crate::error::{Error, Result};

/// Dense univariate polynomial in `z` with exact rational coefficients.
///
/// `coeffs[k]` is the coefficient of `z^k`. Trailing zeros are always
/// trimmed, so the zero polynomial has no coefficients at all and two equal
/// polynomials have identical coefficient vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(Rat::one(), 1)
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rat, power: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rat::zero(); power + 1];
        coeffs[power] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Integer coefficients, lowest power first.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    /// Integer coefficients over a common denominator, lowest power first.
    pub fn from_i64_over(coeffs: &[i64], den: i64) -> Self {
        let den = BigInt::from(den);
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| Rat::new(c.into(), den.clone()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    /// Coefficient of `z^k`; zero past the degree.
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial. `Option`'s ordering puts `None` below
    /// every `Some`, which is the usual `-inf` convention.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// The antiderivative `F` with `F(-1) = 0`.
    pub fn antiderivative_from_minus1(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rat::zero());
        // F(-1) = sum c_k (-1)^(k+1) / (k+1); subtracting it pins the constant.
        let mut at_minus_one = Rat::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let term = c / BigInt::from(k + 1);
            if k % 2 == 0 {
                at_minus_one -= &term;
            } else {
                at_minus_one += &term;
            }
            coeffs.push(term);
        }
        coeffs[0] = -at_minus_one;
        Poly::from_coeffs(coeffs)
    }

    /// Writes `self = ints / den` with `den > 0` the lcm of the coefficient
    /// denominators.
    pub(crate) fn to_scaled_ints(&self) -> (Vec<BigInt>, BigInt) {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            if !c.denom().is_one() {
                den = den.lcm(c.denom());
            }
        }
        let ints = self
            .coeffs
            .iter()
            .map(|c| {
                if c.denom() == &den {
                    c.numer().clone()
                } else {
                    c.numer() * (&den / c.denom())
                }
            })
            .collect();
        (ints, den)
    }

    pub(crate) fn from_scaled_ints(ints: Vec<BigInt>, den: &BigInt) -> Poly {
        if den.is_one() {
            return Poly::from_coeffs(ints.into_iter().map(Rat::from_integer).collect());
        }
        Poly::from_coeffs(
            ints.into_iter()
                .map(|n| Rat::new(n, den.clone()))
                .collect(),
        )
    }

    /// Exact value at `x`, via a homogeneous integer Horner pass so that only
    /// one rational reduction happens.
    pub fn evaluate(&self, x: &Rat) -> Rat {
        let (num, den) = self.eval_fraction(x);
        Rat::new(num, den)
    }

    /// Sign of `self(x)` as -1, 0 or 1.
    pub fn sign_at(&self, x: &Rat) -> i8 {
        let (num, _) = self.eval_fraction(x);
        match num.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// Unreduced `(num, den)` with `den > 0`.
    fn eval_fraction(&self, x: &Rat) -> (BigInt, BigInt) {
        if self.is_zero() {
            return (BigInt::zero(), BigInt::one());
        }
        let (ints, den) = self.to_scaled_ints();
        let (a, b) = (x.numer(), x.denom());
        let mut iter = ints.iter().rev();
        let mut acc = iter.next().cloned().unwrap_or_default();
        let mut bpow = BigInt::one();
        for c in iter {
            bpow *= b;
            acc = acc * a + c * &bpow;
        }
        (acc, den * bpow)
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let dd = divisor
            .degree()
            .ok_or(Error::DivisionByZero("polynomial"))?;
        let Some(nd) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if nd < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let inv_lead = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &inv_lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Quotient of an exact division; a nonzero remainder is an error.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotPolynomial)
        }
    }

    /// Integer primitive part with a positive leading coefficient.
    pub(crate) fn primitive_ints(&self) -> Vec<BigInt> {
        let (ints, _) = self.to_scaled_ints();
        primitive(ints)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let (mut a, mut b) = (self.primitive_ints(), other.primitive_ints());
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = primitive(int_prem(&a, &b));
            a = b;
            b = r;
        }
        Poly::from_coeffs(a.into_iter().map(Rat::from_integer).collect()).monic()
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) if !l.is_one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }
}

/// Divides out the content and fixes the sign of the leading coefficient.
pub(crate) fn primitive(mut ints: Vec<BigInt>) -> Vec<BigInt> {
    while ints.last().is_some_and(Zero::is_zero) {
        ints.pop();
    }
    let Some(last) = ints.last() else {
        return ints;
    };
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if last.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for c in &mut ints {
            *c = &*c / &g;
        }
    }
    ints
}

/// Pseudo-remainder of integer polynomials: `lc(b)^k a mod b`.
pub(crate) fn int_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let lr = r.last().cloned().unwrap_or_default();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                r[shift + j] -= &lr * bj;
            }
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, Rat::zero());
        for (c, s) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= s;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if self.is_constant() {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.is_constant() {
            return self.scale(&rhs.coeffs[0]);
        }
        // Convolve over a common integer denominator: one reduction per
        // output coefficient instead of one per partial product.
        let (a, da) = self.to_scaled_ints();
        let (b, db) = rhs.to_scaled_ints();
        Poly::from_scaled_ints(convolve(&a, &b), &(da * db))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly { (&self).$m(rhs) }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl From<Rat> for Poly {
    fn from(c: Rat) -> Self {
        Poly::constant(c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match k {
                0 => {}
                1 => f.write_str("z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(format_rat))
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(Poly::from_coeffs(coeffs))
    }
}
