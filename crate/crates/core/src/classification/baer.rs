//! Baer types `S(i, Λ)` of nontrivial subgroups of ℚ and the conversions
//! between Σ-sequence presentations `Q(a)` and supernatural numbers.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::supernatural::{Exponent, SupernaturalNumber};
use crate::error::{KronError, Result};
use crate::frequency::sigma::{SigmaSequence, SigmaTail};
use crate::linalg::rational::{format_rational, int_from_json, int_to_json, parse_rational, rational_span_generator};
use crate::linalg::Rational;
use crate::primes::{factorize, factorize_u64};

/// `S(i, Λ) = { n·i / ∏ p^{λ_p} : n ∈ ℤ, λ finitely supported, λ_p ≤ Λ_p }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaerType {
    i: BigInt,
    lambda: SupernaturalNumber,
}

impl BaerType {
    pub fn new(i: BigInt, lambda: SupernaturalNumber) -> Result<Self> {
        if !i.is_positive() {
            return Err(KronError::validation("baer.i", format!("{i} must be positive")));
        }
        for (p, _) in factorize(&i)? {
            if !lambda.exponent(p).is_zero() {
                return Err(KronError::validation(
                    "baer.i",
                    format!("{i} is divisible by {p}, which has a positive exponent"),
                ));
            }
        }
        Ok(BaerType { i, lambda })
    }

    /// `S(1, Λ)`.
    pub fn with_lambda(lambda: SupernaturalNumber) -> Self {
        BaerType {
            i: BigInt::one(),
            lambda,
        }
    }

    /// Type of the cyclic group `gℤ`, `g ≠ 0`.
    pub fn cyclic(g: &Rational) -> Result<Self> {
        if g.is_zero() {
            return Err(KronError::Domain("the zero group has no Baer type".into()));
        }
        let lambda = SupernaturalNumber::from_factorization(&factorize(g.denom())?);
        Self::new(g.numer().abs(), lambda)
    }

    pub fn i(&self) -> &BigInt {
        &self.i
    }

    pub fn lambda(&self) -> &SupernaturalNumber {
        &self.lambda
    }

    /// For free types, the positive generator `i / ∏ p^{Λ_p}`.
    pub fn free_generator(&self) -> Option<Rational> {
        self.lambda
            .finite_value()
            .map(|d| Rational::new(self.i.clone(), d))
    }

    pub fn to_json(&self) -> Value {
        json!({ "i": int_to_json(&self.i), "lambda": self.lambda.to_json() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let i = match v.get("i") {
            Some(x) => int_from_json(x, "baer.i")?,
            None => BigInt::one(),
        };
        let lambda = SupernaturalNumber::from_json(
            v.get("lambda")
                .ok_or_else(|| KronError::parse("baer.lambda", "missing"))?,
        )?;
        Self::new(i, lambda)
    }
}

impl fmt::Display for BaerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({}, {})", self.i, self.lambda)
    }
}

/// True iff `∏ p^{Λ_p}` is finite, i.e. the group is cyclic.
pub fn is_free(t: &BaerType) -> bool {
    t.lambda.is_finite_product()
}

/// Baer's isomorphism criterion. The multiplier `i` plays no role.
pub fn baer_isomorphic(t1: &BaerType, t2: &BaerType) -> bool {
    t1.lambda.almost_equal(&t2.lambda)
}

/// Λ of `Q(a)`: `Λ_p = Σ_k v_p(a_k)`, with tails resolved exactly.
pub fn qa_to_baer(a: &SigmaSequence) -> Result<BaerType> {
    let mut lambda = SupernaturalNumber::one();
    for &ak in a.prefix() {
        lambda = lambda.plus(&SupernaturalNumber::from_factorization(&factorize_u64(ak)));
    }
    let infinite_on = |values: &[u64]| {
        let primes: BTreeSet<u64> = values
            .iter()
            .flat_map(|&v| factorize_u64(v).into_iter().map(|(p, _)| p))
            .collect();
        SupernaturalNumber::on_primes(primes, Exponent::Infinite)
    };
    let tail = match a.tail() {
        SigmaTail::Constant(c) => infinite_on(&[*c]),
        SigmaTail::Periodic(period) => infinite_on(period),
        SigmaTail::Increment => SupernaturalNumber::uniform(Exponent::Infinite),
        SigmaTail::OddIndexedPrimes => {
            SupernaturalNumber::with_defaults(Exponent::Finite(1), Exponent::ZERO)
        }
        SigmaTail::PrimePowers(l) => l.clone(),
    };
    Ok(BaerType::with_lambda(lambda.plus(&tail)))
}

/// A Σ-sequence `a` with `Q(a) ≅ S(i, Λ)`, for non-free types.
pub fn baer_to_qa(t: &BaerType) -> Result<SigmaSequence> {
    if is_free(t) {
        return Err(KronError::Domain(format!(
            "{t} is free; its orbit-closure factor is a circle"
        )));
    }
    let l = t.lambda();
    if !l.has_infinite_support() && l.exceptions().len() == 1 {
        let (&p, _) = l.exceptions().iter().next().expect("one exception");
        return Ok(SigmaSequence::constant(p));
    }
    SigmaSequence::new(vec![1], SigmaTail::PrimePowers(l.clone()))
}

/// Type of the subgroup of ℚ generated by finitely many explicit rationals
/// together with an infinite family whose denominators are unbounded exactly
/// at `unbounded_primes`. Returns `None` for the zero group.
///
/// A finite family spans the cyclic group `gℤ` and gets its exact type. For an
/// infinite family the type `Λ_p = sup v_p(denominator)` is that of `G + ℤ`,
/// which differs from `G` by finite index and so is isomorphic to it.
pub fn generated_type(
    explicit: &[Rational],
    unbounded_primes: &BTreeSet<u64>,
) -> Result<Option<BaerType>> {
    if unbounded_primes.is_empty() {
        let g = rational_span_generator(explicit);
        if g.is_zero() {
            return Ok(None);
        }
        return BaerType::cyclic(&g).map(Some);
    }
    let mut lambda = SupernaturalNumber::on_primes(unbounded_primes.iter().copied(), Exponent::Infinite);
    for x in explicit.iter().filter(|x| !x.is_zero()) {
        for (p, e) in factorize(x.denom())? {
            if lambda.exponent(p) < Exponent::Finite(e as u64) {
                lambda.set(p, Exponent::Finite(e as u64));
            }
        }
    }
    Ok(Some(BaerType::with_lambda(lambda)))
}

/// A subgroup of ℚ given either as a cyclic group or as `Q(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupOfQ {
    /// `gℤ` with `g > 0`.
    Cyclic(Rational),
    /// `Q(a) = { m / ∏_{k≤N} a_k }`.
    Sequence(SigmaSequence),
}

impl SubgroupOfQ {
    pub fn integers() -> Self {
        SubgroupOfQ::Cyclic(Rational::one())
    }

    pub fn baer_type(&self) -> Result<BaerType> {
        match self {
            SubgroupOfQ::Cyclic(g) => BaerType::cyclic(g),
            SubgroupOfQ::Sequence(a) => qa_to_baer(a),
        }
    }

    pub fn from_baer(t: &BaerType) -> Result<Self> {
        match t.free_generator() {
            Some(g) => Ok(SubgroupOfQ::Cyclic(g)),
            None => baer_to_qa(t).map(SubgroupOfQ::Sequence),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            SubgroupOfQ::Cyclic(g) => json!({ "cyclic": format_rational(g) }),
            SubgroupOfQ::Sequence(a) => json!({ "a": a.to_json() }),
        }
    }

    /// Accepts `{"cyclic": "p/q"}`, `{"a": sequence}`, `{"baer": {i, lambda}}`
    /// or the shorthands `"Z"` and `"Z[1/p]"`.
    pub fn from_json(v: &Value, field: &str) -> Result<Self> {
        match v {
            Value::String(s) if s == "Z" => Ok(Self::integers()),
            Value::String(s) if s.starts_with("Z[1/") && s.ends_with(']') => {
                let p: u64 = s[4..s.len() - 1]
                    .parse()
                    .map_err(|_| KronError::parse(field, format!("bad localization {s:?}")))?;
                if !crate::primes::is_prime(p) {
                    return Err(KronError::validation(field, format!("{p} is not prime")));
                }
                Ok(SubgroupOfQ::Sequence(SigmaSequence::constant(p)))
            }
            Value::Object(m) if m.contains_key("cyclic") => {
                let text = m["cyclic"]
                    .as_str()
                    .ok_or_else(|| KronError::parse(format!("{field}.cyclic"), "expected \"p/q\""))?;
                let g = parse_rational(text)
                    .map_err(|e| KronError::parse(format!("{field}.cyclic"), e.to_string()))?;
                if !g.is_positive() {
                    return Err(KronError::validation(
                        format!("{field}.cyclic"),
                        "generator must be positive",
                    ));
                }
                Ok(SubgroupOfQ::Cyclic(g))
            }
            Value::Object(m) if m.contains_key("a") => Ok(SubgroupOfQ::Sequence(
                SigmaSequence::from_json(&m["a"], &format!("{field}.a"))?,
            )),
            Value::Object(m) if m.contains_key("baer") => Self::from_baer(&BaerType::from_json(&m["baer"])?),
            other => Err(KronError::parse(field, format!("unrecognized group {other}"))),
        }
    }

    /// Whether `x` lies in the group.
    pub fn contains(&self, x: &Rational, depth: usize) -> bool {
        match self {
            SubgroupOfQ::Cyclic(g) => (x / g).is_integer(),
            SubgroupOfQ::Sequence(a) => a
                .partial_products(depth)
                .last()
                .is_some_and(|d| (x * Rational::from_integer(d.clone())).is_integer()),
        }
    }
}
