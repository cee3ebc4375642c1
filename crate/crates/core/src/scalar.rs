use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Number type an analysis runs in: exact rationals or binary floats.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// `true` when arithmetic is exact and tolerances are ignored.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn ratio(numer: i64, denom: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    fn from_f64(v: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn to_rational(&self) -> Rational;

    /// Exact zero test in exact mode, `|self| <= tol * scale` otherwise.
    fn negligible(&self, scale: f64, tol: f64) -> bool;

    /// Lossless text form: `"p/q"` (or `"p"`) for rationals, shortest
    /// round-trip decimal for floats.
    fn encode(&self) -> String;

    fn decode(s: &str) -> Result<Self>;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn ratio(numer: i64, denom: i64) -> Self {
        Rational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn negligible(&self, _scale: f64, _tol: f64) -> bool {
        self.is_zero()
    }

    fn encode(&self) -> String {
        self.to_string()
    }

    fn decode(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn from_rational(r: &Rational) -> Self {
        Scalar::to_f64(r)
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Rational {
        <Rational as FromPrimitive>::from_f64(*self).expect("finite float")
    }

    fn negligible(&self, scale: f64, tol: f64) -> bool {
        self.abs() <= tol * scale
    }

    fn encode(&self) -> String {
        format!("{}", self)
    }

    fn decode(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('/') {
            return Ok(Scalar::to_f64(&parse_rational(s)?));
        }
        let v: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("not a number: {s:?}")))?;
        if !v.is_finite() {
            return Err(Error::Parse(format!("non-finite value: {s:?}")));
        }
        Ok(v)
    }
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-1.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator: {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = match int {
            "" | "-" | "+" => BigInt::zero(),
            _ => int.parse().map_err(|_| bad())?,
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = int_part.abs() * &scale + frac_part;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(numer, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Largest absolute entry as `f64`, at least 1; used to scale float tolerances.
pub fn scale_of<S: Scalar>(values: &[S]) -> f64 {
    values
        .iter()
        .map(|v| v.to_f64().abs())
        .fold(1.0_f64, f64::max)
}
