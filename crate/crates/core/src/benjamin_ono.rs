//! Benjamin–Ono frequencies `ω_j = j² − 2 Σ_k min(j,k) γ_k` for actions
//! `γ_k = β s_k` with rational `s_k`, and the classification of their module.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::classification::baer::{generated_type, BaerType};
use crate::classification::module::{decompose_module, ClosureDescriptor};
use crate::error::{KronError, Result};
use crate::frequency::generator::GeneratorTable;
use crate::frequency::{FrequencyVector, Generator};
use crate::linalg::rational::{format_rational, parse_rational, rat_int};
use crate::linalg::Rational;
use crate::primes::factorize;

/// `s_k = c·r^k` for every `k` past the prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricTail {
    pub c: Rational,
    pub r: Rational,
}

/// Nonnegative rationals `s_1, s_2, …`: a finite prefix, then an optional
/// geometric tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoSequence {
    prefix: Vec<Rational>,
    tail: Option<GeometricTail>,
}

impl BoSequence {
    pub fn new(prefix: Vec<Rational>, tail: Option<GeometricTail>) -> Result<Self> {
        if let Some(k) = prefix.iter().position(Rational::is_negative) {
            return Err(KronError::validation(format!("s.prefix[{k}]"), "actions must be nonnegative"));
        }
        let tail = match tail {
            Some(t) if t.c.is_negative() => {
                return Err(KronError::validation("s.tail.c", "must be nonnegative"))
            }
            Some(t) if !(t.r.is_positive() && t.r < Rational::one()) => {
                return Err(KronError::validation("s.tail.r", "must lie in (0, 1)"))
            }
            Some(t) if t.c.is_zero() => None,
            t => t,
        };
        Ok(BoSequence { prefix, tail })
    }

    /// `s_k = c·r^k` for all `k ≥ 1`.
    pub fn geometric(c: Rational, r: Rational) -> Result<Self> {
        Self::new(Vec::new(), Some(GeometricTail { c, r }))
    }

    pub fn zero() -> Self {
        BoSequence {
            prefix: Vec::new(),
            tail: None,
        }
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn tail(&self) -> Option<&GeometricTail> {
        self.tail.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.tail.is_none() && self.prefix.iter().all(Zero::is_zero)
    }

    /// Every `s_k` positive.
    pub fn has_full_support(&self) -> bool {
        self.tail.is_some() && self.prefix.iter().all(Signed::is_positive)
    }

    pub fn has_infinite_support(&self) -> bool {
        self.tail.is_some()
    }

    pub fn term(&self, k: usize) -> Rational {
        assert!(k >= 1);
        if k <= self.prefix.len() {
            return self.prefix[k - 1].clone();
        }
        match &self.tail {
            Some(t) => &t.c * pow(&t.r, k),
            None => Rational::zero(),
        }
    }

    /// `Σ_{k>n} s_k`.
    pub fn tail_sum(&self, n: usize) -> Rational {
        let l = self.prefix.len();
        let mut acc: Rational = self.prefix.iter().skip(n).sum();
        if let Some(t) = &self.tail {
            let m = n.max(l);
            acc += &t.c * pow(&t.r, m + 1) / (Rational::one() - &t.r);
        }
        acc
    }

    /// `σ_j = Σ_k min(j,k) s_k = Σ_{k≤j} k s_k + j Σ_{k>j} s_k`.
    pub fn sigma(&self, j: usize) -> Rational {
        let head: Rational = (1..=j).map(|k| rat_int(k) * self.term(k)).sum();
        head + rat_int(j) * self.tail_sum(j)
    }

    /// Type of the group generated by `scale·σ_j`, `j ≥ 1`, which equals the
    /// group generated by `scale·g_n`, `n ≥ 0`, with `g_n = Σ_{k>n} s_k`.
    /// `None` when every `σ_j` vanishes.
    ///
    /// Past the prefix `g_n = c·r^{n+1}/(1−r)`: denominators are unbounded
    /// exactly at the primes of `den(r)`, and at any other prime the
    /// valuation of `g_n` is nondecreasing in `n`, so `g_0..g_L` already
    /// attain the supremum.
    pub fn generated_type(&self, scale: &Rational) -> Result<Option<BaerType>> {
        let l = self.prefix.len();
        let explicit: Vec<Rational> = (0..=l).map(|n| scale * self.tail_sum(n)).collect();
        let unbounded: BTreeSet<u64> = match &self.tail {
            Some(t) => factorize(t.r.denom())?.into_iter().map(|(p, _)| p).collect(),
            None => BTreeSet::new(),
        };
        generated_type(&explicit, &unbounded)
    }

    pub fn to_json(&self) -> Value {
        let prefix: Vec<String> = self.prefix.iter().map(format_rational).collect();
        match &self.tail {
            Some(t) => json!({
                "prefix": prefix,
                "tail": { "c": format_rational(&t.c), "r": format_rational(&t.r) },
            }),
            None => json!({ "prefix": prefix }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rational = |x: &Value, field: &str| -> Result<Rational> {
            match x {
                Value::String(s) => parse_rational(s).map_err(|e| KronError::parse(field, e.to_string())),
                Value::Number(n) if n.is_i64() => Ok(rat_int(n.as_i64().expect("i64"))),
                other => Err(KronError::parse(field, format!("expected \"p/q\", got {other}"))),
            }
        };
        let prefix = match v.get("prefix") {
            None => Vec::new(),
            Some(Value::Array(items)) => items
                .iter()
                .enumerate()
                .map(|(k, x)| rational(x, &format!("s.prefix[{k}]")))
                .collect::<Result<_>>()?,
            Some(other) => return Err(KronError::parse("s.prefix", format!("expected a list, got {other}"))),
        };
        let tail = match v.get("tail") {
            None | Some(Value::Null) => None,
            Some(t @ Value::Object(_)) => Some(GeometricTail {
                c: rational(t.get("c").ok_or_else(|| KronError::parse("s.tail.c", "missing"))?, "s.tail.c")?,
                r: rational(t.get("r").ok_or_else(|| KronError::parse("s.tail.r", "missing"))?, "s.tail.r")?,
            }),
            Some(other) => return Err(KronError::parse("s.tail", format!("expected {{c, r}}, got {other}"))),
        };
        Self::new(prefix, tail)
    }
}

fn pow(r: &Rational, k: usize) -> Rational {
    num_traits::pow(r.clone(), k)
}

/// Actions `γ_k = β s_k` with `β` irrational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoActionSpec {
    pub beta: Generator,
    pub s: BoSequence,
}

impl BoActionSpec {
    pub fn new(beta: Generator, s: BoSequence) -> Result<Self> {
        if beta.is_rational_unit() {
            return Err(KronError::validation("beta", "β must be irrational"));
        }
        Ok(BoActionSpec { beta, s })
    }

    pub fn to_json(&self) -> Value {
        json!({ "beta": self.beta.name(), "s": self.s.to_json() })
    }

    pub fn from_json(v: &Value, table: &GeneratorTable) -> Result<Self> {
        let beta_name = v
            .get("beta")
            .and_then(Value::as_str)
            .ok_or_else(|| KronError::parse("beta", "expected a generator name"))?;
        let beta = table.resolve(beta_name, "beta")?;
        let s = BoSequence::from_json(v.get("s").ok_or_else(|| KronError::parse("s", "missing"))?)?;
        Self::new(beta, s)
    }
}

/// `ω_1..ω_N` over the generators `{1, β}`.
pub fn bo_frequencies(spec: &BoActionSpec, depth: usize) -> FrequencyVector {
    FrequencyVector::Bo(spec.clone()).truncate(depth)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoModuleReport {
    /// `σ_1..σ_N`
    pub sigma_values: Vec<Rational>,
    /// `g_0..g_N`
    pub tail_sums: Vec<Rational>,
    /// Type of `R = span{σ_j}`; `None` when `R = 0`.
    pub r_type: Option<BaerType>,
    /// Type of the `1`-component, `ℤ`.
    pub integer_type: BaerType,
    pub closure: ClosureDescriptor,
    /// Some `s_k` vanish, so the actions fall outside `βℚ∖{0}`.
    pub partial_support: bool,
}

impl BoModuleReport {
    pub fn to_json(&self) -> Value {
        json!({
            "sigma": self.sigma_values.iter().map(format_rational).collect::<Vec<_>>(),
            "tail_sums": self.tail_sums.iter().map(format_rational).collect::<Vec<_>>(),
            "integer_component": self.integer_type.to_json(),
            "r_type": self.r_type.as_ref().map_or(Value::Null, BaerType::to_json),
            "closure": self.closure.to_json(),
            "partial_support": self.partial_support,
        })
    }
}

/// `𝓜_ω ≅ ℤ ⊕ R`, with the type of `R` read off the tail sums.
pub fn bo_tail_module(spec: &BoActionSpec, depth: usize) -> Result<BoModuleReport> {
    let sigma_values: Vec<Rational> = (1..=depth).map(|j| spec.s.sigma(j)).collect();
    let tail_sums: Vec<Rational> = (0..=depth).map(|n| spec.s.tail_sum(n)).collect();
    let r_type = spec
        .s
        .generated_type(&Rational::one())
        .map_err(|e| match e {
            KronError::Unsupported { message, .. } => KronError::unsupported("s.tail", message),
            other => other,
        })?;
    let integer_type = BaerType::cyclic(&Rational::one())?;
    let closure = ClosureDescriptor::from_types(std::iter::once(&integer_type).chain(r_type.as_ref()));
    Ok(BoModuleReport {
        sigma_values,
        tail_sums,
        r_type,
        integer_type,
        closure,
        partial_support: !spec.s.has_full_support(),
    })
}

pub fn bo_orbit_closure(spec: &BoActionSpec, depth: usize) -> Result<ClosureDescriptor> {
    Ok(bo_tail_module(spec, depth)?.closure)
}

/// Report for the command line: module report plus the generic classification
/// of the same frequency vector.
pub fn bo_report(spec: &BoActionSpec, depth: usize) -> Result<Value> {
    let report = bo_tail_module(spec, depth)?;
    let fv = FrequencyVector::Bo(spec.clone());
    let classification = crate::classification::module::classification_report(&fv, depth)?;
    let md = decompose_module(&fv, depth)?;
    let mut v = report.to_json();
    v["classification"] = classification;
    v["rank"] = json!(md.components.len());
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::module::ClosureFactor;
    use crate::classification::supernatural::{Exponent, SupernaturalNumber};
    use crate::linalg::rational::rat;

    fn beta() -> Generator {
        Generator::opaque("beta", "0.5772156649015328606065120900824024").unwrap()
    }

    fn dyadic() -> BoActionSpec {
        BoActionSpec::new(beta(), BoSequence::geometric(rat(1, 1), rat(1, 2)).unwrap()).unwrap()
    }

    #[test]
    fn dyadic_sigma() {
        let s = &dyadic().s;
        assert_eq!(s.sigma(1), rat(1, 1));
        assert_eq!(s.sigma(2), rat(3, 2));
        for j in 1..20 {
            assert_eq!(s.sigma(j), rat(2, 1) - pow(&rat(1, 2), j - 1));
        }
        let fv = FrequencyVector::Bo(dyadic());
        let c = fv.coordinates(2);
        assert_eq!(c[&Generator::one()], rat(4, 1));
        assert_eq!(c[&beta()], rat(-3, 1));
    }

    #[test]
    fn finite_prefix() {
        let s = BoSequence::new(vec![rat(1, 3)], None).unwrap();
        for j in 1..6 {
            assert_eq!(s.sigma(j), rat(1, 3));
        }
        let spec = BoActionSpec::new(beta(), s).unwrap();
        let r = bo_tail_module(&spec, 8).unwrap();
        assert_eq!(r.closure.factors(), &[ClosureFactor::Circle, ClosureFactor::Circle]);
        assert!(r.partial_support);
    }

    #[test]
    fn zero_actions() {
        let spec = BoActionSpec::new(beta(), BoSequence::zero()).unwrap();
        let fv = bo_frequencies(&spec, 3);
        assert_eq!(fv, FrequencyVector::from_rationals(&[rat(1, 1), rat(4, 1), rat(9, 1)]));
        let r = bo_tail_module(&spec, 5).unwrap();
        assert!(r.r_type.is_none());
        assert_eq!(r.closure.factors(), &[ClosureFactor::Circle]);
    }

    #[test]
    fn dyadic_closure() {
        let r = bo_tail_module(&dyadic(), 10).unwrap();
        assert_eq!(
            r.closure.factors(),
            &[
                ClosureFactor::Circle,
                ClosureFactor::Solenoid(SupernaturalNumber::on_primes([2], Exponent::Infinite))
            ]
        );
        assert!(!r.partial_support);
    }

    #[test]
    fn triadic_tail_sums() {
        let s = BoSequence::geometric(rat(2, 1), rat(1, 3)).unwrap();
        for n in 0..10 {
            assert_eq!(s.tail_sum(n), pow(&rat(1, 3), n));
        }
        let t = s.generated_type(&Rational::one()).unwrap().unwrap();
        assert_eq!(t.lambda(), &SupernaturalNumber::on_primes([3], Exponent::Infinite));
    }

    #[test]
    fn validation() {
        assert!(BoSequence::new(vec![rat(-1, 2)], None).is_err());
        assert!(BoSequence::geometric(rat(1, 1), rat(1, 1)).is_err());
        assert!(BoSequence::geometric(rat(-1, 1), rat(1, 2)).is_err());
        assert!(BoActionSpec::new(Generator::one(), BoSequence::zero()).is_err());
        let v = json!({"prefix": ["1/3"], "tail": {"c": "1/2", "r": "1/2"}});
        let s = BoSequence::from_json(&v).unwrap();
        assert_eq!(BoSequence::from_json(&s.to_json()).unwrap(), s);
        assert_eq!(s.term(1), rat(1, 3));
        assert_eq!(s.term(2), rat(1, 8));
    }
}
