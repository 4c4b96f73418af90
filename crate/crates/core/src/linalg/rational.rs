//! Arbitrary-precision integers and rationals, plus their `"p/q"` text form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{KronError, Result};

pub type Int = BigInt;
pub type Rational = BigRational;

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(n.into())
}

/// Parses `"p/q"` or `"p"`; the result is canonical (`q > 0`, coprime).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = |m: &str| KronError::parse("rational", format!("{m}: {text:?}"));
    if t.is_empty() {
        return Err(bad("empty rational"));
    }
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad("bad numerator"))?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad("bad denominator"))?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        None => BigInt::from_str(t)
            .map(BigRational::from_integer)
            .map_err(|_| bad("bad integer")),
    }
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Representative of `r` modulo 1 in `[0, 1)`.
pub fn frac_mod1(r: &Rational) -> Rational {
    r - r.floor()
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Int {
    values
        .into_iter()
        .fold(Int::one(), |acc, v| acc.lcm(v.denom()))
}

/// Positive generator `g` of the subgroup `ℤ·r_1 + … + ℤ·r_k` of ℚ, or zero
/// when every `r_i` vanishes. Folds the two-element identity
/// `gcd(a/b, c/d) = gcd(ad, cb)/(bd)`.
pub fn rational_span_generator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |g, v| {
        if v.is_zero() {
            return g;
        }
        if g.is_zero() {
            return v.abs();
        }
        let num = (g.numer() * v.denom()).gcd(&(v.numer() * g.denom()));
        BigRational::new(num, g.denom() * v.denom())
    })
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter for a single rational as `"p/q"`.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` as a list of `"p/q"` strings.
pub mod serde_rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Integers go out as JSON numbers when they fit in an `i64`, else as strings.
pub fn int_to_json(v: &Int) -> serde_json::Value {
    use num_traits::ToPrimitive;
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::String(v.to_string()),
    }
}

pub fn int_from_json(v: &serde_json::Value, field: &str) -> Result<Int> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| KronError::parse(field, format!("expected integer, got {n}"))),
        serde_json::Value::String(s) => BigInt::from_str(s.trim())
            .map_err(|_| KronError::parse(field, format!("expected integer, got {s:?}"))),
        other => Err(KronError::parse(field, format!("expected integer, got {other}"))),
    }
}
