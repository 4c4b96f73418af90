//! Supernatural numbers `∏_p p^{Λ_p}` with exponents in ℕ ∪ {∞}.
//!
//! Only finitely describable exponent maps are representable: a default
//! exponent for the odd-indexed primes (`p_1 = 2, p_3 = 5, …`), a default for
//! the even-indexed primes, and finitely many exceptions. Every input built
//! from prime sets `{finite, all, odd_indexed, even_indexed, cofinite}` with
//! first-match precedence normalizes into this form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::error::{KronError, Result};
use crate::primes::{has_odd_index, is_prime};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u64),
    Infinite,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent::Finite(0);

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    pub fn plus(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a + b),
            _ => Exponent::Infinite,
        }
    }

    fn to_json(self) -> Value {
        match self {
            Exponent::Finite(e) => json!(e),
            Exponent::Infinite => json!("inf"),
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_u64()
                .map(Exponent::Finite)
                .ok_or_else(|| KronError::parse("lambda.exp", format!("bad exponent {n}"))),
            Value::String(s) if s == "inf" => Ok(Exponent::Infinite),
            other => Err(KronError::parse(
                "lambda.exp",
                format!("expected a count or \"inf\", got {other}"),
            )),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => write!(f, "{e}"),
            Exponent::Infinite => write!(f, "∞"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeSet {
    Finite(BTreeSet<u64>),
    All,
    OddIndexed,
    EvenIndexed,
    /// Every prime except the listed ones.
    Cofinite(BTreeSet<u64>),
}

impl PrimeSet {
    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSet::Finite(s) => s.contains(&p),
            PrimeSet::All => true,
            PrimeSet::OddIndexed => has_odd_index(p),
            PrimeSet::EvenIndexed => !has_odd_index(p),
            PrimeSet::Cofinite(s) => !s.contains(&p),
        }
    }

    /// Whether the set contains all but finitely many primes of the given
    /// index parity.
    fn covers_class(&self, odd: bool) -> bool {
        match self {
            PrimeSet::Finite(_) => false,
            PrimeSet::All | PrimeSet::Cofinite(_) => true,
            PrimeSet::OddIndexed => odd,
            PrimeSet::EvenIndexed => !odd,
        }
    }

    fn mentioned(&self) -> impl Iterator<Item = u64> + '_ {
        let s = match self {
            PrimeSet::Finite(s) | PrimeSet::Cofinite(s) => Some(s.iter().copied()),
            _ => None,
        };
        s.into_iter().flatten()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupernaturalNumber {
    odd_default: Exponent,
    even_default: Exponent,
    /// Primes whose exponent differs from their class default.
    exceptions: BTreeMap<u64, Exponent>,
}

impl SupernaturalNumber {
    /// The supernatural number 1.
    pub fn one() -> Self {
        Self::uniform(Exponent::ZERO)
    }

    pub fn uniform(e: Exponent) -> Self {
        Self::with_defaults(e, e)
    }

    pub fn with_defaults(odd_default: Exponent, even_default: Exponent) -> Self {
        SupernaturalNumber {
            odd_default,
            even_default,
            exceptions: BTreeMap::new(),
        }
    }

    /// Λ_p = e on the given primes, 0 elsewhere.
    pub fn on_primes(primes: impl IntoIterator<Item = u64>, e: Exponent) -> Self {
        let mut s = Self::one();
        for p in primes {
            s.set(p, e);
        }
        s
    }

    /// Finite supernatural number from the factorization of a positive integer.
    pub fn from_factorization(factors: &[(u64, u32)]) -> Self {
        let mut s = Self::one();
        for &(p, e) in factors {
            s.set(p, s.exponent(p).plus(Exponent::Finite(e as u64)));
        }
        s
    }

    fn class_default(&self, p: u64) -> Exponent {
        if has_odd_index(p) {
            self.odd_default
        } else {
            self.even_default
        }
    }

    pub fn set(&mut self, p: u64, e: Exponent) {
        assert!(is_prime(p), "{p} is not prime");
        if e == self.class_default(p) {
            self.exceptions.remove(&p);
        } else {
            self.exceptions.insert(p, e);
        }
    }

    pub fn exponent(&self, p: u64) -> Exponent {
        self.exceptions
            .get(&p)
            .copied()
            .unwrap_or_else(|| self.class_default(p))
    }

    pub fn odd_default(&self) -> Exponent {
        self.odd_default
    }

    pub fn even_default(&self) -> Exponent {
        self.even_default
    }

    pub fn exceptions(&self) -> &BTreeMap<u64, Exponent> {
        &self.exceptions
    }

    /// Exponent-wise sum.
    pub fn plus(&self, other: &Self) -> Self {
        let mut out = Self::with_defaults(
            self.odd_default.plus(other.odd_default),
            self.even_default.plus(other.even_default),
        );
        let primes: BTreeSet<u64> = self
            .exceptions
            .keys()
            .chain(other.exceptions.keys())
            .copied()
            .collect();
        for p in primes {
            out.set(p, self.exponent(p).plus(other.exponent(p)));
        }
        out
    }

    /// True iff `∏ p^{Λ_p}` is a natural number: all exponents finite and
    /// only finitely many nonzero.
    pub fn is_finite_product(&self) -> bool {
        self.odd_default.is_zero()
            && self.even_default.is_zero()
            && self.exceptions.values().all(|e| e.is_finite())
    }

    pub fn finite_value(&self) -> Option<BigInt> {
        if !self.is_finite_product() {
            return None;
        }
        Some(self.exceptions.iter().fold(BigInt::one(), |acc, (p, e)| match e {
            Exponent::Finite(k) => acc * BigInt::from(*p).pow(*k as u32),
            Exponent::Infinite => unreachable!(),
        }))
    }

    /// Baer's criterion: exponents agree at all but finitely many primes, and
    /// every disagreement is between two finite values.
    pub fn almost_equal(&self, other: &Self) -> bool {
        if self.odd_default != other.odd_default || self.even_default != other.even_default {
            return false;
        }
        self.exceptions
            .keys()
            .chain(other.exceptions.keys())
            .all(|&p| {
                let (a, b) = (self.exponent(p), other.exponent(p));
                a == b || (a.is_finite() && b.is_finite())
            })
    }

    /// Whether infinitely many primes carry a positive exponent.
    pub fn has_infinite_support(&self) -> bool {
        !self.odd_default.is_zero() || !self.even_default.is_zero()
    }

    /// Builds from first-match `(prime set, exponent)` pairs; primes matched
    /// by no pair get exponent 0.
    pub fn from_pairs(pairs: &[(PrimeSet, Exponent)]) -> Result<Self> {
        for (set, _) in pairs {
            if let Some(p) = set.mentioned().find(|&p| !is_prime(p)) {
                return Err(KronError::validation("lambda.primes", format!("{p} is not prime")));
            }
        }
        let default_for = |odd: bool| {
            pairs
                .iter()
                .find(|(s, _)| s.covers_class(odd))
                .map_or(Exponent::ZERO, |(_, e)| *e)
        };
        let mut out = Self::with_defaults(default_for(true), default_for(false));
        let mentioned: BTreeSet<u64> = pairs.iter().flat_map(|(s, _)| s.mentioned()).collect();
        for p in mentioned {
            let e = pairs
                .iter()
                .find(|(s, _)| s.contains(p))
                .map_or(Exponent::ZERO, |(_, e)| *e);
            out.set(p, e);
        }
        Ok(out)
    }

    /// Canonical pair list: exceptions grouped by exponent, then class
    /// defaults. Zero defaults are implicit.
    pub fn to_pairs(&self) -> Vec<(PrimeSet, Exponent)> {
        let mut by_exp: BTreeMap<Exponent, BTreeSet<u64>> = BTreeMap::new();
        for (&p, &e) in &self.exceptions {
            by_exp.entry(e).or_default().insert(p);
        }
        let mut pairs: Vec<(PrimeSet, Exponent)> = by_exp
            .into_iter()
            .map(|(e, ps)| (PrimeSet::Finite(ps), e))
            .collect();
        if self.odd_default == self.even_default {
            if !self.odd_default.is_zero() {
                pairs.push((PrimeSet::All, self.odd_default));
            }
        } else {
            if !self.odd_default.is_zero() {
                pairs.push((PrimeSet::OddIndexed, self.odd_default));
            }
            if !self.even_default.is_zero() {
                pairs.push((PrimeSet::EvenIndexed, self.even_default));
            }
        }
        pairs
    }

    pub fn to_json(&self) -> Value {
        let pairs: Vec<Value> = self
            .to_pairs()
            .into_iter()
            .map(|(set, e)| {
                let primes = match set {
                    PrimeSet::Finite(s) => json!(s.into_iter().collect::<Vec<_>>()),
                    PrimeSet::All => json!("all"),
                    PrimeSet::OddIndexed => json!("odd_indexed"),
                    PrimeSet::EvenIndexed => json!("even_indexed"),
                    PrimeSet::Cofinite(s) => json!({ "except": s.into_iter().collect::<Vec<_>>() }),
                };
                json!({ "primes": primes, "exp": e.to_json() })
            })
            .collect();
        json!({ "pairs": pairs })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let pairs = v
            .get("pairs")
            .and_then(Value::as_array)
            .ok_or_else(|| KronError::parse("lambda.pairs", "expected a list of pairs"))?;
        let parse_list = |v: &Value| -> Result<BTreeSet<u64>> {
            v.as_array()
                .ok_or_else(|| KronError::parse("lambda.primes", "expected a list of primes"))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .ok_or_else(|| KronError::parse("lambda.primes", format!("bad prime {x}")))
                })
                .collect()
        };
        let mut out = Vec::new();
        for pair in pairs {
            let primes = pair
                .get("primes")
                .ok_or_else(|| KronError::parse("lambda.primes", "missing"))?;
            let set = match primes {
                Value::String(s) if s == "all" => PrimeSet::All,
                Value::String(s) if s == "odd_indexed" => PrimeSet::OddIndexed,
                Value::String(s) if s == "even_indexed" => PrimeSet::EvenIndexed,
                Value::Array(_) => PrimeSet::Finite(parse_list(primes)?),
                Value::Object(m) if m.contains_key("except") => {
                    PrimeSet::Cofinite(parse_list(&m["except"])?)
                }
                other => {
                    return Err(KronError::parse(
                        "lambda.primes",
                        format!("unknown prime set {other}"),
                    ))
                }
            };
            let e = Exponent::from_json(
                pair.get("exp")
                    .ok_or_else(|| KronError::parse("lambda.exp", "missing"))?,
            )?;
            out.push((set, e));
        }
        Self::from_pairs(&out)
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = self.to_pairs();
        if pairs.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = pairs
            .iter()
            .map(|(s, e)| match s {
                PrimeSet::Finite(ps) => ps
                    .iter()
                    .map(|p| format!("{p}^{e}"))
                    .collect::<Vec<_>>()
                    .join("·"),
                PrimeSet::All => format!("(all p)^{e}"),
                PrimeSet::OddIndexed => format!("(odd-indexed p)^{e}"),
                PrimeSet::EvenIndexed => format!("(even-indexed p)^{e}"),
                PrimeSet::Cofinite(_) => unreachable!("canonical form has no cofinite pairs"),
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Exponent::*;

    #[test]
    fn first_match_precedence() {
        let s = SupernaturalNumber::from_pairs(&[
            (PrimeSet::Finite([3].into()), Finite(5)),
            (PrimeSet::All, Infinite),
        ])
        .unwrap();
        assert_eq!(s.exponent(3), Finite(5));
        assert_eq!(s.exponent(2), Infinite);
        assert_eq!(s.exponent(101), Infinite);
        // 3 = p_2 is even-indexed; the exception survives canonicalization.
        assert_eq!(s.to_pairs().len(), 2);
    }

    #[test]
    fn cofinite_sets_normalize() {
        let s = SupernaturalNumber::from_pairs(&[(PrimeSet::Cofinite([2, 3].into()), Finite(1))])
            .unwrap();
        assert_eq!(s.exponent(2), Finite(0));
        assert_eq!(s.exponent(5), Finite(1));
        assert_eq!(s.odd_default(), Finite(1));
        let back = SupernaturalNumber::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn shadowed_pairs_are_dropped() {
        let s = SupernaturalNumber::from_pairs(&[
            (PrimeSet::All, Infinite),
            (PrimeSet::Finite([2].into()), Finite(1)),
        ])
        .unwrap();
        assert_eq!(s.to_pairs(), vec![(PrimeSet::All, Infinite)]);
    }

    #[test]
    fn finite_products() {
        let s = SupernaturalNumber::on_primes([2], Finite(3));
        assert!(s.is_finite_product());
        assert_eq!(s.finite_value(), Some(BigInt::from(8)));
        assert!(!SupernaturalNumber::on_primes([2], Infinite).is_finite_product());
        assert!(!SupernaturalNumber::with_defaults(Finite(1), Finite(0)).is_finite_product());
    }

    #[test]
    fn baer_criterion() {
        let all = SupernaturalNumber::uniform(Infinite);
        let odd = SupernaturalNumber::with_defaults(Finite(1), Finite(0));
        assert!(!all.almost_equal(&odd));
        let a = SupernaturalNumber::from_pairs(&[
            (PrimeSet::Finite([2].into()), Infinite),
            (PrimeSet::Finite([3].into()), Finite(5)),
        ])
        .unwrap();
        let mut b = a.clone();
        b.set(3, Finite(7));
        assert!(a.almost_equal(&b));
        b.set(3, Infinite);
        assert!(!a.almost_equal(&b));
    }

    #[test]
    fn json_shape() {
        let s = SupernaturalNumber::on_primes([2], Infinite);
        assert_eq!(s.to_json().to_string(), r#"{"pairs":[{"exp":"inf","primes":[2]}]}"#);
        let odd = SupernaturalNumber::with_defaults(Finite(1), Finite(0));
        assert_eq!(
            odd.to_json().to_string(),
            r#"{"pairs":[{"exp":1,"primes":"odd_indexed"}]}"#
        );
        assert!(SupernaturalNumber::from_json(&json!({"pairs":[{"primes":[4],"exp":1}]})).is_err());
    }

    #[test]
    fn sum_adds_exponents() {
        let a = SupernaturalNumber::on_primes([2], Finite(1));
        let b = SupernaturalNumber::with_defaults(Finite(1), Finite(0));
        let c = a.plus(&b);
        assert_eq!(c.exponent(2), Finite(2));
        assert_eq!(c.exponent(5), Finite(1));
        assert_eq!(c.exponent(3), Finite(0));
    }
}
