//! Exact scalar fields: the rationals and the Gaussian rationals.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which exact field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Field {
    /// The rationals.
    #[default]
    #[serde(rename = "Q")]
    Rational,
    /// The Gaussian rationals `a + bi` with `a, b` rational.
    #[serde(rename = "Qi")]
    Gaussian,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("Q"),
            Field::Gaussian => f.write_str("Qi"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Q" => Ok(Field::Rational),
            "Qi" => Ok(Field::Gaussian),
            other => Err(Error::Field(format!("unknown field {other:?}"))),
        }
    }
}

/// An exact field element with a conjugation.
///
/// Equality is exact and structural: every implementor keeps its values in
/// a canonical reduced form.
pub trait Scalar:
    Clone
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    const FIELD: Field;

    fn conj(&self) -> Self;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Builds `re + im·i`; fails over the rationals when `im` is nonzero.
    fn from_parts(re: BigRational, im: BigRational) -> Result<Self>;

    /// Parses the `"p/q"` / `"p/q+r/si"` string form.
    fn parse(s: &str) -> Result<Self>;

    fn to_complex_f64(&self) -> Complex64;

    /// `|z|²`, always a nonnegative rational.
    fn norm_sqr(&self) -> BigRational;
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let err = || Error::ParseScalar(s.to_string());
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    if t.is_empty() {
        return Err(err());
    }
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| err())?;
    let d: BigInt = d.trim().parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(n, d))
}

impl Scalar for BigRational {
    const FIELD: Field = Field::Rational;

    fn conj(&self) -> Self {
        self.clone()
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(numer.into(), denom.into())
    }

    fn from_parts(re: BigRational, im: BigRational) -> Result<Self> {
        if im.is_zero() {
            Ok(re)
        } else {
            Err(Error::Field(
                "imaginary entry encountered over the rationals".into(),
            ))
        }
    }

    fn parse(s: &str) -> Result<Self> {
        let g = GaussianRational::parse(s)?;
        Self::from_parts(g.re, g.im)
    }

    fn to_complex_f64(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn norm_sqr(&self) -> BigRational {
        self * self
    }
}

/// A Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    fn inv(&self) -> Self {
        let n = self.norm_sqr();
        Self::new(&self.re / &n, -(&self.im / &n))
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl Neg for GaussianRational {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl<'a> Add<&'a GaussianRational> for GaussianRational {
    type Output = Self;

    fn add(self, rhs: &'a Self) -> Self {
        Self::new(self.re + &rhs.re, self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for GaussianRational {
    type Output = Self;

    fn sub(self, rhs: &'a Self) -> Self {
        Self::new(self.re - &rhs.re, self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for GaussianRational {
    type Output = Self;

    fn mul(self, rhs: &'a Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self::new(self.re * &rhs.re, BigRational::zero());
        }
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Self::new(re, im)
    }
}

impl<'a> Div<&'a GaussianRational> for GaussianRational {
    type Output = Self;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &'a Self) -> Self {
        if rhs.im.is_zero() {
            return Self::new(self.re / &rhs.re, self.im / &rhs.re);
        }
        self * &rhs.inv()
    }
}

macro_rules! forward_by_value {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<GaussianRational> for GaussianRational {
            type Output = Self;

            fn $m(self, rhs: Self) -> Self {
                $tr::$m(self, &rhs)
            }
        }
    )*};
}

forward_by_value!(Add::add, Sub::sub, Mul::mul, Div::div);

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        <Self as Scalar>::parse(s)
    }
}

impl Scalar for GaussianRational {
    const FIELD: Field = Field::Gaussian;

    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::new(BigRational::from_ratio(numer, denom), BigRational::zero())
    }

    fn from_parts(re: BigRational, im: BigRational) -> Result<Self> {
        Ok(Self::new(re, im))
    }

    fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Self::new(parse_rational(&t)?, BigRational::zero()));
        };
        // Split at the last sign that is not the leading sign of the
        // imaginary coefficient itself ("1/2+-3/4i").
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'+' | b'-'));
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im.strip_prefix('+').unwrap_or(im) {
            "" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other).map_err(|_| Error::ParseScalar(s.to_string()))?,
        };
        let re = parse_rational(re).map_err(|_| Error::ParseScalar(s.to_string()))?;
        Ok(Self::new(re, im))
    }

    fn to_complex_f64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}
