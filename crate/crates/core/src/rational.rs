//! Exact rational numbers and the literal parser used for every weight and
//! threshold that enters the toolkit.
//!
//! Accepted literal forms:
//!
//! * decimal: `[+-]digits[.digits][(e|E)[+-]digits]`, e.g. `0.25`, `8.47e8`, `.5`
//! * fraction: `[+-]digits/digits`, e.g. `1/3`
//!
//! Decimals are converted exactly (`0.1` is `1/10`); binary floating point is
//! never involved.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest decimal exponent magnitude accepted by the parser.
const MAX_EXPONENT: u32 = 4096;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    /// Builds `numer / denom`. Panics if `denom` is zero.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_big(value: BigRational) -> Self {
        Rational(value)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Nearest integer, halves rounded away from zero.
    pub fn round(&self) -> BigInt {
        self.0.round().to_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// Lossy conversion, for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering rounded half away from zero to `places` digits.
    pub fn to_decimal_string(&self, places: usize) -> String {
        let scale = BigInt::from(10u32).pow(places as u32);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let rounded = scaled.round().to_integer();
        let negative = rounded.is_negative();
        let (int_part, frac_part) = rounded.abs().div_rem(&scale);
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if places > 0 {
            let frac = frac_part.to_string();
            out.push('.');
            out.extend(std::iter::repeat('0').take(places - frac.len()));
            out.push_str(&frac);
        }
        out
    }

    /// Parses a decimal or `p/q` literal exactly.
    pub fn parse(text: &str) -> Result<Self> {
        parse_literal(text)
    }
}

/// Parses a non-negative weight literal.
pub fn parse_weight(text: &str) -> Result<Rational> {
    let value = parse_literal(text)?;
    if value.is_negative() {
        return Err(Error::InvalidNumber {
            text: text.to_string(),
            reason: "weights must be non-negative",
        });
    }
    Ok(value)
}

fn invalid(text: &str, reason: &'static str) -> Error {
    Error::InvalidNumber {
        text: text.to_string(),
        reason,
    }
}

fn split_sign(s: &str) -> (bool, &str) {
    match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    }
}

fn all_digits(s: &str) -> bool {
    s.bytes().all(|b| b.is_ascii_digit())
}

fn parse_literal(original: &str) -> Result<Rational> {
    let text = original.trim();
    if text.is_empty() {
        return Err(invalid(original, "empty literal"));
    }
    let (negative, body) = split_sign(text);

    let magnitude = if let Some((num, den)) = body.split_once('/') {
        if num.is_empty() || den.is_empty() || !all_digits(num) || !all_digits(den) {
            return Err(invalid(original, "expected p/q with decimal integers"));
        }
        let num: BigInt = num.parse().map_err(|_| invalid(original, "bad numerator"))?;
        let den: BigInt = den.parse().map_err(|_| invalid(original, "bad denominator"))?;
        if den.is_zero() {
            return Err(invalid(original, "zero denominator"));
        }
        BigRational::new(num, den)
    } else {
        let (mantissa, exponent) = match body.find(['e', 'E']) {
            Some(pos) => (&body[..pos], Some(&body[pos + 1..])),
            None => (body, None),
        };
        let (int_digits, frac_digits) = match mantissa.split_once('.') {
            Some((i, f)) => (i, f),
            None => (mantissa, ""),
        };
        if int_digits.is_empty() && frac_digits.is_empty() {
            return Err(invalid(original, "no digits"));
        }
        if !all_digits(int_digits) || !all_digits(frac_digits) {
            return Err(invalid(original, "unexpected character"));
        }
        let mut exp: i64 = 0;
        if let Some(e) = exponent {
            let (exp_negative, exp_digits) = split_sign(e);
            if exp_digits.is_empty() || !all_digits(exp_digits) {
                return Err(invalid(original, "malformed exponent"));
            }
            let value: u32 = exp_digits
                .parse()
                .ok()
                .filter(|v| *v <= MAX_EXPONENT)
                .ok_or_else(|| invalid(original, "exponent out of range"))?;
            exp = if exp_negative { -(value as i64) } else { value as i64 };
        }
        let digits = format!("{int_digits}{frac_digits}");
        let mantissa: BigInt = digits.parse().map_err(|_| invalid(original, "bad digits"))?;
        exp -= frac_digits.len() as i64;
        let ten = BigInt::from(10u32);
        if exp >= 0 {
            BigRational::from_integer(mantissa * ten.pow(exp as u32))
        } else {
            BigRational::new(mantissa, ten.pow((-exp) as u32))
        }
    };

    Ok(Rational(if negative { -magnitude } else { magnitude }))
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_literal(s)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_literal(&text).map_err(serde::de::Error::custom)
    }
}

impl From<u64> for Rational {
    fn from(value: u64) -> Self {
        Rational::from_integer(value)
    }
}

impl From<BigUint> for Rational {
    fn from(value: BigUint) -> Self {
        Rational::from_integer(BigInt::from_biguint(Sign::Plus, value))
    }
}

impl From<BigInt> for Rational {
    fn from(value: BigInt) -> Self {
        Rational::from_integer(value)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        Rational(iter.fold(BigRational::zero(), |acc, x| acc + &x.0))
    }
}

/// Compares `a / b` with `c / d` for non-negative integers with `b, d > 0`.
pub(crate) fn cmp_fractions(a: &BigUint, b: &BigUint, c: &BigUint, d: &BigUint) -> Ordering {
    (a * d).cmp(&(c * b))
}
