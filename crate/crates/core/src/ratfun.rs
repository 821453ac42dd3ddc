//! Reduced rational functions over [`Poly`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{format_rat, Poly, Rat};

/// `num / den` kept canonical: `gcd(num, den) = 1`, `den` monic, zero is
/// `0/1`. Equality is therefore plain coefficient equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("rational function denominator"));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (
                    num.div_exact(&g).expect("gcd divides numerator"),
                    den.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        let lead = den.leading().expect("nonzero denominator").clone();
        if lead.is_one() {
            RatFun { num, den }
        } else {
            let inv = lead.recip();
            RatFun {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from(Poly::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn scale(&self, c: &Rat) -> RatFun {
        if c.is_zero() {
            return Self::zero();
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Division; a zero divisor is an invalid recursion input.
    pub fn checked_div(&self, rhs: &RatFun) -> Result<RatFun> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero("rational function"));
        }
        Ok(Self::reduce(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn derivative(&self) -> RatFun {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduce(num, &self.den * &self.den)
    }

    pub fn evaluate(&self, x: &Rat) -> Result<Rat> {
        let d = self.den.evaluate(x);
        if d.is_zero() {
            return Err(Error::Pole(format_rat(x)));
        }
        Ok(self.num.evaluate(x) / d)
    }

    /// The polynomial this function equals, or `NotPolynomial`.
    pub fn as_polynomial(&self) -> Result<Poly> {
        if self.den.is_constant() {
            // Canonical form makes a constant denominator exactly 1.
            return Ok(self.num.clone());
        }
        Err(Error::NotPolynomial)
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::reduce(&self.num + &rhs.num, self.den.clone());
        }
        RatFun::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add for RatFun {
    type Output = RatFun;
    fn add(self, rhs: RatFun) -> RatFun {
        &self + &rhs
    }
}

impl Sub for RatFun {
    type Output = RatFun;
    fn sub(self, rhs: RatFun) -> RatFun {
        &self - &rhs
    }
}

impl Mul for RatFun {
    type Output = RatFun;
    fn mul(self, rhs: RatFun) -> RatFun {
        &self * &rhs
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[derive(Deserialize)]
struct RawRatFun {
    num: Poly,
    den: Poly,
}

impl<'de> Deserialize<'de> for RatFun {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawRatFun::deserialize(d)?;
        RatFun::new(raw.num, raw.den).map_err(serde::de::Error::custom)
    }
}
