//! Exact rational function values.
//!
//! Every vertex value, diagram coordinate and distance in the crate is a
//! [`Value`]. Inputs are parsed from decimal strings (or `p/q` fractions) and
//! all arithmetic stays exact, so diagram equality and matching types are never
//! disturbed by rounding.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An exact rational number.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Value(Ratio<i128>);

impl Value {
    pub const ZERO: Value = Value(Ratio::new_raw(0, 1));
    pub const ONE: Value = Value(Ratio::new_raw(1, 1));

    pub fn new(numer: i128, denom: i128) -> Value {
        Value(Ratio::new(numer, denom))
    }

    pub fn from_int(n: i128) -> Value {
        Value(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn abs(self) -> Value {
        Value(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn max(self, other: Value) -> Value {
        std::cmp::max(self, other)
    }

    pub fn min(self, other: Value) -> Value {
        std::cmp::min(self, other)
    }

    /// Midpoint `(a + b) / 2`.
    pub fn midpoint(self, other: Value) -> Value {
        (self + other) / Value::from_int(2)
    }

    pub fn half(self) -> Value {
        self / Value::from_int(2)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// True when the value has a finite decimal expansion.
    pub fn is_decimal(&self) -> bool {
        let mut d = self.denom();
        while d % 2 == 0 {
            d /= 2;
        }
        while d % 5 == 0 {
            d /= 5;
        }
        d == 1
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Shortest exact decimal when one exists, `p/q` otherwise.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_decimal() {
            return write!(f, "{}/{}", self.numer(), self.denom());
        }
        let neg = self.numer() < 0;
        let mut num = self.numer().unsigned_abs();
        let den = self.denom().unsigned_abs();
        // scale to a power of ten denominator
        let mut scale = 0u32;
        let mut d = den;
        while d != 1 {
            if d.is_multiple_of(10) {
                d /= 10;
            } else if d.is_multiple_of(2) {
                d /= 2;
                num *= 5;
            } else {
                d /= 5;
                num *= 2;
            }
            scale += 1;
        }
        let pow = 10u128.pow(scale);
        let int = num / pow;
        let frac = num % pow;
        if neg && (int != 0 || frac != 0) {
            write!(f, "-")?;
        }
        if scale == 0 || frac == 0 {
            write!(f, "{int}")
        } else {
            let digits = format!("{:0width$}", frac, width = scale as usize);
            write!(f, "{int}.{}", digits.trim_end_matches('0'))
        }
    }
}

impl FromStr for Value {
    type Err = Error;

    fn from_str(s: &str) -> Result<Value, Error> {
        let bad = || Error::BadValue(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((p, q)) = t.split_once('/') {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            return Ok(Value::new(p, q));
        }
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let all_digits = |x: &str| x.chars().all(|c| c.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) || frac_part.len() > 30 {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut numer: i128 = if digits.is_empty() {
            0
        } else {
            digits.parse().map_err(|_| bad())?
        };
        if neg {
            numer = -numer;
        }
        let denom = 10i128
            .checked_pow(frac_part.len() as u32)
            .ok_or_else(bad)?;
        Ok(Value::new(numer, denom))
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Value, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(i) => Ok(Value::from_int(i as i128)),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Value {
            type Output = Value;
            fn $m(self, rhs: Value) -> Value {
                Value(self.0.$m(rhs.0))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value(-self.0)
    }
}

impl Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        iter.fold(Value::ZERO, |a, b| a + b)
    }
}

impl From<i32> for Value {
    fn from(n: i32) -> Value {
        Value::from_int(n as i128)
    }
}

/// Least common multiple of denominators, useful for grid sampling.
pub fn common_denominator(values: impl IntoIterator<Item = Value>) -> i128 {
    values.into_iter().fold(1i128, |acc, v| acc.lcm(&v.denom()))
}

/// Shorthand used heavily in tests: `v("1.5")`.
pub fn v(s: &str) -> Value {
    s.parse().expect("valid value literal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_and_prints_decimals() {
        for s in ["0", "3", "-2", "1.5", "0.05", "-0.125", "1/3", "-7/22"] {
            assert_eq!(v(s).to_string(), s);
        }
        assert_eq!(v("1.50").to_string(), "1.5");
        assert_eq!(v(".5"), v("0.5"));
        assert_eq!(v("-0.0").to_string(), "0");
        assert_eq!(v("2/4").to_string(), "0.5");
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1.2.3", "1/0", "--1", "1e5"] {
            assert!(s.parse::<Value>().is_err(), "{s}");
        }
    }

    #[test]
    fn arithmetic_is_exact() {
        assert_eq!(v("0.1") + v("0.2"), v("0.3"));
        assert_eq!(v("1").midpoint(v("2")), v("1.5"));
        assert_eq!((v("1") / v("3")) * v("3"), v("1"));
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(n in -1_000_000i64..1_000_000, k in 0u32..7, q in 1i64..50) {
            let a = Value::new(n as i128, 10i128.pow(k));
            prop_assert_eq!(a.to_string().parse::<Value>().unwrap(), a);
            let b = Value::new(n as i128, q as i128);
            prop_assert_eq!(b.to_string().parse::<Value>().unwrap(), b);
        }
    }
}
