//! Exact scalars: big rationals, optionally carrying an integer power of π.
//!
//! Invariants:
//! - the rational part of a [`PiRational`] is always reduced (BigRational normalizes);
//! - addition is only defined for equal π powers, multiplication adds them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shorthand for `a/b` as a big rational.
pub fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub fn int(a: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(a))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial coefficient `C(x, k)` for rational `x`.
pub fn binomial_rat(x: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * (x - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    // numerator and denominator can both overflow f64 individually
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = r.numer().bits().max(r.denom().bits()) as i64 - 900;
            let shift = shift.max(0) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// A rational number times `π^pi_power`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiRational {
    pub value: BigRational,
    pub pi_power: u32,
}

impl PiRational {
    pub fn new(value: BigRational, pi_power: u32) -> Self {
        PiRational { value, pi_power }
    }

    pub fn rational(value: BigRational) -> Self {
        PiRational { value, pi_power: 0 }
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn pi() -> Self {
        PiRational::new(BigRational::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Sum of two values with equal π power. Zero is accepted at any power.
    pub fn try_add(&self, other: &PiRational) -> Result<PiRational> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_power != other.pi_power {
            return Err(Error::PiPowerMismatch {
                left: self.pi_power,
                right: other.pi_power,
            });
        }
        Ok(PiRational::new(&self.value + &other.value, self.pi_power))
    }

    pub fn try_sub(&self, other: &PiRational) -> Result<PiRational> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> PiRational {
        PiRational::new(-&self.value, self.pi_power)
    }

    pub fn mul(&self, other: &PiRational) -> PiRational {
        PiRational::new(&self.value * &other.value, self.pi_power + other.pi_power)
    }

    /// Quotient; fails if the divisor is zero or carries more π than the dividend.
    pub fn try_div(&self, other: &PiRational) -> Result<PiRational> {
        if other.is_zero() {
            return Err(Error::NonUnitConstant("division by zero".into()));
        }
        if other.pi_power > self.pi_power {
            return Err(Error::PiPowerMismatch {
                left: self.pi_power,
                right: other.pi_power,
            });
        }
        Ok(PiRational::new(
            &self.value / &other.value,
            self.pi_power - other.pi_power,
        ))
    }

    pub fn scale(&self, r: &BigRational) -> PiRational {
        PiRational::new(&self.value * r, self.pi_power)
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.value) * std::f64::consts::PI.powi(self.pi_power as i32)
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            0 => write!(f, "{}", self.value),
            1 => write!(f, "{}*pi", self.value),
            p => write!(f, "{}*pi^{}", self.value, p),
        }
    }
}

/// Serialized form `{numerator, denominator, pi_power}` with decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiRationalJson {
    pub numerator: String,
    pub denominator: String,
    pub pi_power: u32,
}

impl From<&PiRational> for PiRationalJson {
    fn from(p: &PiRational) -> Self {
        PiRationalJson {
            numerator: p.value.numer().to_string(),
            denominator: p.value.denom().to_string(),
            pi_power: p.pi_power,
        }
    }
}

impl TryFrom<&PiRationalJson> for PiRational {
    type Error = Error;
    fn try_from(j: &PiRationalJson) -> Result<Self> {
        let n: BigInt = j
            .numerator
            .parse()
            .map_err(|_| Error::Invalid(format!("numerator `{}`", j.numerator)))?;
        let d: BigInt = j
            .denominator
            .parse()
            .map_err(|_| Error::Invalid(format!("denominator `{}`", j.denominator)))?;
        if d.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        Ok(PiRational::new(BigRational::new(n, d), j.pi_power))
    }
}

/// Parse `p`, `p/q` or a finite decimal like `-0.5` into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational: `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let digits = format!("{ip}{fp}");
        let n: BigInt = if digits.is_empty() {
            return Err(bad());
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = BigRational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Absolute value helper used in reporting.
pub fn abs(r: &BigRational) -> BigRational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_power_rules() {
        let a = PiRational::pi();
        let b = a.mul(&a);
        assert_eq!(b.pi_power, 2);
        assert!(a.try_add(&b).is_err());
        assert_eq!(a.try_add(&a).unwrap(), PiRational::new(int(2), 1));
        assert_eq!(b.try_div(&a).unwrap(), PiRational::pi());
        assert!(a.try_div(&b).is_err());
    }

    #[test]
    fn lowest_terms() {
        let p = PiRational::new(rat(6, 4), 1);
        assert_eq!(p.value, rat(3, 2));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial_rat(&rat(-1, 2), 2), rat(3, 8));
        assert_eq!(factorial(6), BigInt::from(720));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = PiRational::new(rat(-7, 3), 2);
        let j = PiRationalJson::from(&p);
        assert_eq!(PiRational::try_from(&j).unwrap(), p);
    }

    #[test]
    fn huge_to_f64() {
        let big = BigRational::new(factorial(400), factorial(399));
        assert!((rat_to_f64(&big) - 400.0).abs() < 1e-9);
    }
}
