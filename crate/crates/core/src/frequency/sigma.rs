//! Σ-sequences: `a_1 = 1` and `a_j > 1` for `j > 1`, given as a finite prefix
//! plus a rule for the tail.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::classification::supernatural::{Exponent, SupernaturalNumber};
use crate::error::{KronError, Result};
use crate::primes::{is_prime, nth_prime};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaTail {
    /// `a_j = c`.
    Constant(u64),
    /// Cycles through the list.
    Periodic(Vec<u64>),
    /// `a_j = j` (absolute index), so `∏_{k≤j} a_k = j!` with prefix `[1]`.
    Increment,
    /// The m-th tail term is `p_{2m-1}`: with prefix `[1]` this is
    /// `(1, p_1, p_3, p_5, …)`.
    OddIndexedPrimes,
    /// The prime-power enumeration of a non-free supernatural number Λ: the
    /// m-th tail term is the prime `p` of the m-th smallest `k = p^λ` with
    /// `1 ≤ λ ≤ Λ_p`.
    PrimePowers(SupernaturalNumber),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaSequence {
    prefix: Vec<u64>,
    tail: SigmaTail,
}

impl SigmaSequence {
    pub fn new(prefix: Vec<u64>, tail: SigmaTail) -> Result<Self> {
        match prefix.first() {
            Some(1) => {}
            Some(a1) => {
                return Err(KronError::validation(
                    "a.prefix",
                    format!("a_1 must be 1, got {a1}"),
                ))
            }
            None => return Err(KronError::validation("a.prefix", "prefix must start with a_1 = 1")),
        }
        if let Some((j, a)) = prefix.iter().enumerate().skip(1).find(|(_, a)| **a <= 1) {
            return Err(KronError::validation(
                "a.prefix",
                format!("a_{} = {a} must exceed 1", j + 1),
            ));
        }
        match &tail {
            SigmaTail::Constant(c) if *c <= 1 => {
                return Err(KronError::validation("a.tail.constant", format!("{c} must exceed 1")))
            }
            SigmaTail::Periodic(p) if p.is_empty() || p.iter().any(|x| *x <= 1) => {
                return Err(KronError::validation(
                    "a.tail.periodic",
                    "period must be nonempty with entries > 1",
                ))
            }
            SigmaTail::PrimePowers(l) if l.is_finite_product() => {
                return Err(KronError::validation(
                    "a.tail.prime_powers",
                    "a finite supernatural number has a finite prime-power enumeration",
                ))
            }
            _ => {}
        }
        Ok(SigmaSequence { prefix, tail })
    }

    /// `(1, c, c, c, …)`
    pub fn constant(c: u64) -> Self {
        Self::new(vec![1], SigmaTail::Constant(c)).expect("constant tail > 1")
    }

    /// `(1, 2, 3, 4, …)`
    pub fn increment() -> Self {
        Self::new(vec![1], SigmaTail::Increment).expect("valid")
    }

    /// `(1, p_1, p_3, p_5, …)`
    pub fn odd_indexed_primes() -> Self {
        Self::new(vec![1], SigmaTail::OddIndexedPrimes).expect("valid")
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> &SigmaTail {
        &self.tail
    }

    /// First `n` terms `a_1..a_n`.
    pub fn terms(&self, n: usize) -> Vec<u64> {
        let mut out: Vec<u64> = self.prefix.iter().take(n).copied().collect();
        let need = n.saturating_sub(out.len());
        if need == 0 {
            return out;
        }
        let start = self.prefix.len();
        match &self.tail {
            SigmaTail::Constant(c) => out.extend(std::iter::repeat_n(*c, need)),
            SigmaTail::Periodic(p) => out.extend(p.iter().cycle().take(need)),
            SigmaTail::Increment => out.extend((start + 1..=start + need).map(|j| j as u64)),
            SigmaTail::OddIndexedPrimes => out.extend((1..=need).map(|m| nth_prime(2 * m - 1))),
            SigmaTail::PrimePowers(l) => out.extend(prime_power_enumeration(l, need)),
        }
        out
    }

    pub fn term(&self, j: usize) -> u64 {
        assert!(j >= 1);
        self.terms(j)[j - 1]
    }

    /// `∏_{k≤j} a_k` for `j = 1..=n`.
    pub fn partial_products(&self, n: usize) -> Vec<BigInt> {
        let mut acc = BigInt::one();
        self.terms(n)
            .into_iter()
            .map(|a| {
                acc *= a;
                acc.clone()
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let tail = match &self.tail {
            SigmaTail::Constant(c) => json!({ "constant": c }),
            SigmaTail::Periodic(p) => json!({ "periodic": p }),
            SigmaTail::Increment => json!("increment"),
            SigmaTail::OddIndexedPrimes => json!("odd_indexed_primes"),
            SigmaTail::PrimePowers(l) => json!({ "prime_powers": l.to_json() }),
        };
        json!({ "prefix": self.prefix, "tail": tail })
    }

    pub fn from_json(v: &Value, field: &str) -> Result<Self> {
        let prefix_field = format!("{field}.prefix");
        let prefix = v
            .get("prefix")
            .and_then(Value::as_array)
            .ok_or_else(|| KronError::parse(&prefix_field, "expected a list of integers"))?
            .iter()
            .map(|x| {
                x.as_u64()
                    .ok_or_else(|| KronError::parse(&prefix_field, format!("bad entry {x}")))
            })
            .collect::<Result<Vec<u64>>>()?;
        let tail_field = format!("{field}.tail");
        let tail = match v.get("tail") {
            Some(Value::String(s)) if s == "increment" => SigmaTail::Increment,
            Some(Value::String(s)) if s == "odd_indexed_primes" => SigmaTail::OddIndexedPrimes,
            Some(Value::Object(m)) if m.contains_key("constant") => SigmaTail::Constant(
                m["constant"]
                    .as_u64()
                    .ok_or_else(|| KronError::parse(&tail_field, "constant must be an integer"))?,
            ),
            Some(Value::Object(m)) if m.contains_key("periodic") => SigmaTail::Periodic(
                m["periodic"]
                    .as_array()
                    .ok_or_else(|| KronError::parse(&tail_field, "periodic must be a list"))?
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .ok_or_else(|| KronError::parse(&tail_field, format!("bad entry {x}")))
                    })
                    .collect::<Result<_>>()?,
            ),
            Some(Value::Object(m)) if m.contains_key("prime_powers") => {
                SigmaTail::PrimePowers(SupernaturalNumber::from_json(&m["prime_powers"])?)
            }
            Some(other) => {
                return Err(KronError::parse(&tail_field, format!("unknown tail rule {other}")))
            }
            None => return Err(KronError::parse(&tail_field, "missing tail rule")),
        };
        Self::new(prefix, tail).map_err(|e| match e {
            KronError::Validation { field: f, message } => {
                KronError::validation(f.replacen('a', field, 1), message)
            }
            other => other,
        })
    }
}

/// First `count` terms of the prime-power enumeration of Λ (non-free).
fn prime_power_enumeration(lambda: &SupernaturalNumber, count: usize) -> Vec<u64> {
    // Min-heap of (k = p^λ, p, λ). Primes enter the heap lazily in ascending
    // order, so k's come out ascending.
    let allowed = |p: u64| !lambda.exponent(p).is_zero();
    let within = |p: u64, l: u64| match lambda.exponent(p) {
        Exponent::Infinite => true,
        Exponent::Finite(e) => l <= e,
    };
    let mut candidates: Box<dyn Iterator<Item = u64>> = if lambda.has_infinite_support() {
        Box::new(primal::Primes::all().map(|p| p as u64).filter(move |&p| allowed(p)))
    } else {
        let finite: Vec<u64> = lambda
            .exceptions()
            .iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(p, _)| *p)
            .collect();
        Box::new(finite.into_iter())
    };
    let mut heap: BinaryHeap<Reverse<(u128, u64, u64)>> = BinaryHeap::new();
    let mut next = candidates.next();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if let Some(p) = next {
            if heap.peek().is_none_or(|Reverse((k, _, _))| (p as u128) < *k) {
                heap.push(Reverse((p as u128, p, 1)));
                next = candidates.next();
                continue;
            }
        }
        let Some(Reverse((k, p, l))) = heap.pop() else {
            break;
        };
        out.push(p);
        if within(p, l + 1) {
            heap.push(Reverse((k.saturating_mul(p as u128), p, l + 1)));
        }
    }
    debug_assert!(out.iter().all(|p| is_prime(*p)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::supernatural::PrimeSet;

    #[test]
    fn rules() {
        assert_eq!(SigmaSequence::constant(2).terms(4), vec![1, 2, 2, 2]);
        assert_eq!(SigmaSequence::increment().terms(5), vec![1, 2, 3, 4, 5]);
        assert_eq!(SigmaSequence::odd_indexed_primes().terms(5), vec![1, 2, 5, 11, 17]);
        let p = SigmaSequence::new(vec![1, 3], SigmaTail::Periodic(vec![2, 5])).unwrap();
        assert_eq!(p.terms(6), vec![1, 3, 2, 5, 2, 5]);
        assert_eq!(
            SigmaSequence::increment().partial_products(5),
            [1, 2, 6, 24, 120].map(BigInt::from).to_vec()
        );
    }

    #[test]
    fn validation() {
        assert!(SigmaSequence::new(vec![2], SigmaTail::Increment).is_err());
        assert!(SigmaSequence::new(vec![], SigmaTail::Increment).is_err());
        assert!(SigmaSequence::new(vec![1, 1], SigmaTail::Increment).is_err());
        assert!(SigmaSequence::new(vec![1], SigmaTail::Constant(1)).is_err());
        assert!(SigmaSequence::new(vec![1], SigmaTail::Periodic(vec![])).is_err());
        let free = SupernaturalNumber::on_primes([2, 5], Exponent::Finite(1));
        assert!(SigmaSequence::new(vec![1], SigmaTail::PrimePowers(free)).is_err());
    }

    #[test]
    fn prime_power_enumerations() {
        let all = SupernaturalNumber::uniform(Exponent::Infinite);
        // k = 2,3,4,5,7,8,9,11,13,16
        assert_eq!(prime_power_enumeration(&all, 10), vec![2, 3, 2, 5, 7, 2, 3, 11, 13, 2]);
        let two = SupernaturalNumber::on_primes([2], Exponent::Infinite);
        assert_eq!(prime_power_enumeration(&two, 70), vec![2; 70]);
        let odd = SupernaturalNumber::from_pairs(&[(PrimeSet::OddIndexed, Exponent::Finite(1))]).unwrap();
        assert_eq!(prime_power_enumeration(&odd, 4), vec![2, 5, 11, 17]);
        let mixed = SupernaturalNumber::from_pairs(&[
            (PrimeSet::Finite([2].into()), Exponent::Finite(2)),
            (PrimeSet::Finite([3].into()), Exponent::Infinite),
        ])
        .unwrap();
        // k = 2,3,4,9,27,81
        assert_eq!(prime_power_enumeration(&mixed, 6), vec![2, 3, 2, 3, 3, 3]);
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let s = SigmaSequence::new(vec![1, 2], SigmaTail::Constant(2)).unwrap();
        assert_eq!(SigmaSequence::from_json(&s.to_json(), "a").unwrap(), s);
        let e = SigmaSequence::from_json(&json!({"prefix":[3],"tail":"increment"}), "a").unwrap_err();
        assert!(matches!(e, KronError::Validation { .. }), "{e}");
        let e = SigmaSequence::from_json(&json!({"prefix":[1],"tail":"wobble"}), "a").unwrap_err();
        assert!(e.to_string().contains("a.tail"), "{e}");
    }
}
