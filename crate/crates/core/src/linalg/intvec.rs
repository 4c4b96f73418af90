use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::rational::{int_from_json, int_to_json, Int, Rational};
use crate::error::{KronError, Result};

/// Finitely supported integer vector in ℤ^(ℕ). Indices start at 1 and only
/// nonzero entries are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVecFin {
    entries: BTreeMap<usize, Int>,
}

impl IntVecFin {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Standard basis vector `e_i`.
    pub fn unit(i: usize) -> Self {
        let mut v = Self::zero();
        v.set(i, BigInt::from(1));
        v
    }

    /// Builds from a dense slice; `values[0]` lands at index 1.
    pub fn from_dense<T: Into<Int> + Clone>(values: &[T]) -> Self {
        let mut v = Self::zero();
        for (k, x) in values.iter().enumerate() {
            v.set(k + 1, x.clone().into());
        }
        v
    }

    pub fn get(&self, i: usize) -> Int {
        self.entries.get(&i).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, value: Int) {
        assert!(i >= 1, "IntVecFin indices start at 1");
        if value.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, value);
        }
    }

    /// `self[i] += value`
    pub fn add_at(&mut self, i: usize, value: &Int) {
        let v = self.get(i) + value;
        self.set(i, v);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn max_index(&self) -> usize {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Int)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    /// Dense copy of entries `1..=n`.
    pub fn to_dense(&self, n: usize) -> Vec<Int> {
        (1..=n).map(|i| self.get(i)).collect()
    }

    pub fn neg(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, v) in other.iter() {
            out.add_at(i, v);
        }
        out
    }

    pub fn scale(&self, c: &Int) -> Self {
        let mut out = Self::zero();
        for (i, v) in self.iter() {
            out.set(i, v * c);
        }
        out
    }

    /// Shifts every index up by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        Self {
            entries: self.entries.iter().map(|(i, v)| (i + offset, v.clone())).collect(),
        }
    }

    /// `Σ ν_j x_j` with `x` 1-indexed through `values[j-1]`; indices past the
    /// slice contribute zero.
    pub fn dot_rational(&self, values: &[Rational]) -> Rational {
        self.iter()
            .filter(|(i, _)| *i <= values.len())
            .fold(Rational::zero(), |acc, (i, v)| {
                acc + &values[i - 1] * Rational::from_integer(v.clone())
            })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .entries
            .iter()
            .map(|(i, v)| (i.to_string(), int_to_json(v)))
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn from_json(value: &serde_json::Value, field: &str) -> Result<Self> {
        let mut v = Self::zero();
        match value {
            serde_json::Value::Object(map) => {
                for (k, x) in map {
                    let i: usize = k
                        .parse()
                        .ok()
                        .filter(|i| *i >= 1)
                        .ok_or_else(|| KronError::parse(field, format!("bad index {k:?}")))?;
                    v.set(i, int_from_json(x, field)?);
                }
            }
            serde_json::Value::Array(items) => {
                for (k, x) in items.iter().enumerate() {
                    v.set(k + 1, int_from_json(x, field)?);
                }
            }
            other => {
                return Err(KronError::parse(
                    field,
                    format!("expected integer list or sparse map, got {other}"),
                ))
            }
        }
        Ok(v)
    }
}

impl Serialize for IntVecFin {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for IntVecFin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_dense(self.max_index()).iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// gcd of the entries; zero exactly for the zero vector.
pub fn gcd_of_vector(v: &IntVecFin) -> Int {
    v.iter().fold(Int::zero(), |g, (_, x)| g.gcd(x)).abs()
}
