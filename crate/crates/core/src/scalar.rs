//! The scalar tower and the deformation parameter.
//!
//! Two carriers implement [`Scalar`]: [`Rational`] (exact mode, arbitrary precision,
//! never rounds) and `f64` (float mode). Algorithms elsewhere in the crate are generic
//! over the trait so that every identity can be checked bit-exactly and every
//! asymptotic experiment can run fast on the same code path.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use malachite_base::num::arithmetic::traits::Abs;
use malachite_base::num::conversion::traits::RoundingFrom;
use malachite_base::rounding_modes::RoundingMode;
use malachite_q::Rational;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Float-mode comparison tolerance used when a caller does not supply one.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            _ => Err(Error::Parse {
                what: "mode",
                input: s.to_string(),
            }),
        }
    }
}

/// A field element in one of the two evaluation modes.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
    + for<'a> AddAssign<&'a Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;

    /// `num / den`; `den` must be non-zero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;

    /// Exact equality in exact mode, `|a - b| <= tol * max(1, |a|, |b|)` in float mode.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    /// Parses `"p/r"`, integers and plain decimals.
    fn parse_scalar(s: &str) -> Result<Self>;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn recip(&self) -> Self {
        Self::one() / self
    }

    /// Integer power by repeated squaring; negative exponents go through the reciprocal.
    fn powi(&self, exp: i64) -> Self {
        let mut base = if exp < 0 { self.recip() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Rational::from(0)
    }

    fn one() -> Self {
        Rational::from(1)
    }

    fn from_i64(n: i64) -> Self {
        Rational::from(n)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::from_signeds(num, den)
    }

    fn to_f64(&self) -> f64 {
        f64::rounding_from(self, RoundingMode::Nearest).0
    }

    fn abs(&self) -> Self {
        Abs::abs(self)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn parse_scalar(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = || Error::Parse {
            what: "exact scalar",
            input: s.to_string(),
        };
        if let Some((int, frac)) = s.split_once('.') {
            let negative = int.starts_with('-');
            let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
            if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
                return Err(err());
            }
            let num = Rational::from_str(&digits).map_err(|_| err())?;
            let den = Rational::from(10u32).powi(frac.len() as i64);
            let value = num / den;
            return Ok(if negative { -value } else { value });
        }
        let value = Rational::from_str(s).map_err(|_| err())?;
        Ok(value)
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = 1f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= tol * scale
    }

    fn parse_scalar(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = || Error::Parse {
            what: "float scalar",
            input: s.to_string(),
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let n: f64 = n.trim().parse().map_err(|_| err())?;
                let d: f64 = d.trim().parse().map_err(|_| err())?;
                Ok(n / d)
            }
            None => s.parse().map_err(|_| err()),
        }
    }
}

/// The deformation parameter `q`, restricted to the open interval `(0, 1)`.
///
/// The mode is carried by the type: `QParam<Rational>` is exact, `QParam<f64>` is float.
#[derive(Debug, Clone, PartialEq)]
pub struct QParam<S> {
    value: S,
}

impl<S: Scalar> QParam<S> {
    pub fn new(value: S) -> Result<Self> {
        if value <= S::zero() || value >= S::one() {
            return Err(Error::domain(format!("q must lie in (0, 1), got {value}")));
        }
        Ok(Self { value })
    }

    /// Parses `"p/r"` or a decimal into the mode of `S`.
    pub fn parse(s: &str) -> Result<Self> {
        Self::new(S::parse_scalar(s)?)
    }

    pub fn value(&self) -> &S {
        &self.value
    }

    pub fn mode(&self) -> Mode {
        S::MODE
    }

    /// `q^e` for any integer `e`.
    pub fn pow(&self, e: i64) -> S {
        self.value.powi(e)
    }

    pub fn inv(&self) -> S {
        self.value.recip()
    }

    pub fn to_float(&self) -> QParam<f64> {
        QParam {
            value: self.value.to_f64(),
        }
    }
}

impl QParam<Rational> {
    /// Exact `q = num / den`.
    pub fn exact(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("zero denominator in q"));
        }
        Self::new(Rational::from_ratio(num, den))
    }
}

impl QParam<f64> {
    pub fn float(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::domain("q must be finite"));
        }
        Self::new(value)
    }
}

impl<S: Scalar> fmt::Display for QParam<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A value computed from a truncated infinite product, with the truncation surfaced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Truncated<S> {
    pub value: S,
    pub terms: usize,
}
