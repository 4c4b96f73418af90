//! Points of a truncated torus `𝕋^N`. Exact points store `θ̌_j ∈ [0, 1)` with
//! angle `Θ_j = 2π θ̌_j`; float points store `Θ_j ∈ [0, 2π)` directly.

use std::f64::consts::TAU;

use serde_json::{json, Value};

use crate::error::{KronError, Result};
use crate::linalg::rational::{format_rational, frac_mod1, parse_rational, to_f64};
use crate::linalg::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum TorusPoint {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl TorusPoint {
    /// Reduces every entry mod 1.
    pub fn exact(values: Vec<Rational>) -> Self {
        TorusPoint::Exact(values.iter().map(frac_mod1).collect())
    }

    /// Reduces every angle mod 2π.
    pub fn float(values: Vec<f64>) -> Self {
        TorusPoint::Float(values.into_iter().map(wrap_angle).collect())
    }

    pub fn origin(depth: usize) -> Self {
        TorusPoint::Exact(vec![Rational::from_integer(0.into()); depth])
    }

    pub fn depth(&self) -> usize {
        match self {
            TorusPoint::Exact(v) => v.len(),
            TorusPoint::Float(v) => v.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, TorusPoint::Exact(_))
    }

    pub fn exact_values(&self) -> Option<&[Rational]> {
        match self {
            TorusPoint::Exact(v) => Some(v),
            TorusPoint::Float(_) => None,
        }
    }

    /// Angles `Θ_j ∈ [0, 2π)`.
    pub fn angles(&self) -> Vec<f64> {
        match self {
            TorusPoint::Exact(v) => v.iter().map(|x| wrap_angle(TAU * to_f64(x))).collect(),
            TorusPoint::Float(v) => v.clone(),
        }
    }

    /// Turns `θ̌_j = Θ_j / 2π ∈ [0, 1)` as floats.
    pub fn turns(&self) -> Vec<f64> {
        match self {
            TorusPoint::Exact(v) => v.iter().map(to_f64).collect(),
            TorusPoint::Float(v) => v.iter().map(|x| x / TAU).collect(),
        }
    }

    /// First `n` coordinates.
    pub fn truncated(&self, n: usize) -> Self {
        match self {
            TorusPoint::Exact(v) => TorusPoint::Exact(v[..n.min(v.len())].to_vec()),
            TorusPoint::Float(v) => TorusPoint::Float(v[..n.min(v.len())].to_vec()),
        }
    }

    /// Exact points as `["p/q", …]` turns; float points as a list of angles.
    pub fn to_json(&self) -> Value {
        match self {
            TorusPoint::Exact(v) => json!(v.iter().map(format_rational).collect::<Vec<_>>()),
            TorusPoint::Float(v) => json!(v),
        }
    }

    /// Strings are exact turns, numbers are float angles; no mixing.
    pub fn from_json(v: &Value, field: &str) -> Result<Self> {
        let items = v
            .as_array()
            .ok_or_else(|| KronError::parse(field, "expected a list of angles"))?;
        if items.iter().all(Value::is_string) {
            let values = items
                .iter()
                .map(|x| parse_rational(x.as_str().expect("string")).map_err(|e| KronError::parse(field, e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            Ok(TorusPoint::exact(values))
        } else if items.iter().all(Value::is_number) {
            Ok(TorusPoint::float(items.iter().map(|x| x.as_f64().expect("number")).collect()))
        } else {
            Err(KronError::parse(
                field,
                "a point is either all exact (\"p/q\" strings) or all float (numbers)",
            ))
        }
    }
}
