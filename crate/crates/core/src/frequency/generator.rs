//! Named real generators. Distinct generators are taken to be rationally
//! independent; the built-in kinds (1, √p for distinct primes p, π^k) are.

use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{KronError, Result};
use crate::precision::BigEval;
use crate::primes::is_prime;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    RationalUnit,
    SqrtPrime(u64),
    PiPower(u32),
    /// User-supplied value, given as a decimal string.
    Opaque(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    name: String,
    kind: GeneratorKind,
}

impl Ord for Generator {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Generator {
    pub fn one() -> Self {
        Generator {
            name: "1".into(),
            kind: GeneratorKind::RationalUnit,
        }
    }

    pub fn sqrt_prime(p: u64) -> Self {
        assert!(is_prime(p), "{p} is not prime");
        Generator {
            name: format!("sqrt({p})"),
            kind: GeneratorKind::SqrtPrime(p),
        }
    }

    pub fn pi_power(k: u32) -> Self {
        assert!(k >= 1);
        Generator {
            name: if k == 1 { "pi".into() } else { format!("pi^{k}") },
            kind: GeneratorKind::PiPower(k),
        }
    }

    pub fn opaque(name: &str, value: &str) -> Result<Self> {
        let field = format!("generators.{name}");
        if name.is_empty() || Self::builtin(name).is_some() {
            return Err(KronError::validation(field, "opaque generators need a fresh name"));
        }
        if BigEval::new(Default::default()).decimal(value).is_none() {
            return Err(KronError::parse(field, format!("bad decimal value {value:?}")));
        }
        Ok(Generator {
            name: name.into(),
            kind: GeneratorKind::Opaque(value.trim().into()),
        })
    }

    /// Recognizes `1`, `sqrt(p)`, `pi` and `pi^k`.
    pub fn builtin(name: &str) -> Option<Self> {
        let name = name.trim();
        if name == "1" {
            return Some(Self::one());
        }
        if name == "pi" {
            return Some(Self::pi_power(1));
        }
        if let Some(k) = name.strip_prefix("pi^").and_then(|k| k.parse::<u32>().ok()) {
            return (k >= 1).then(|| Self::pi_power(k));
        }
        let p = name
            .strip_prefix("sqrt(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|p| p.parse::<u64>().ok())?;
        is_prime(p).then(|| Self::sqrt_prime(p))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &GeneratorKind {
        &self.kind
    }

    pub fn is_rational_unit(&self) -> bool {
        self.kind == GeneratorKind::RationalUnit
    }

    /// `1` first, then square roots by prime, powers of π by exponent,
    /// opaque generators by name.
    fn sort_key(&self) -> (u8, u64, &str) {
        match &self.kind {
            GeneratorKind::RationalUnit => (0, 0, ""),
            GeneratorKind::SqrtPrime(p) => (1, *p, ""),
            GeneratorKind::PiPower(k) => (2, *k as u64, ""),
            GeneratorKind::Opaque(_) => (3, 0, &self.name),
        }
    }

    pub fn value(&self, eval: &mut BigEval) -> astro_float::BigFloat {
        match &self.kind {
            GeneratorKind::RationalUnit => eval.one(),
            GeneratorKind::SqrtPrime(p) => eval.sqrt_u64(*p),
            GeneratorKind::PiPower(k) => eval.pi_power(*k),
            GeneratorKind::Opaque(v) => eval.decimal(v).expect("validated at construction"),
        }
    }

    /// Declaration record `{name, kind, param}`.
    pub fn to_json(&self) -> Value {
        match &self.kind {
            GeneratorKind::RationalUnit => json!({ "name": self.name, "kind": "rational_unit" }),
            GeneratorKind::SqrtPrime(p) => json!({ "name": self.name, "kind": "sqrt_prime", "param": p }),
            GeneratorKind::PiPower(k) => json!({ "name": self.name, "kind": "pi_power", "param": k }),
            GeneratorKind::Opaque(v) => json!({ "name": self.name, "kind": "opaque", "param": v }),
        }
    }

    pub fn from_json(v: &Value, field: &str) -> Result<Self> {
        let name = v
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| KronError::parse(format!("{field}.name"), "expected a string"))?;
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| KronError::parse(format!("{field}.kind"), "expected a string"))?;
        let param = v.get("param");
        let int_param = || {
            param
                .and_then(Value::as_u64)
                .ok_or_else(|| KronError::parse(format!("{field}.param"), "expected a positive integer"))
        };
        let g = match kind {
            "rational_unit" => Self::one(),
            "sqrt_prime" => {
                let p = int_param()?;
                if !is_prime(p) {
                    return Err(KronError::validation(format!("{field}.param"), format!("{p} is not prime")));
                }
                Self::sqrt_prime(p)
            }
            "pi_power" => {
                let k = int_param()?;
                if k == 0 || k > u32::MAX as u64 {
                    return Err(KronError::validation(format!("{field}.param"), "exponent must be positive"));
                }
                Self::pi_power(k as u32)
            }
            "opaque" => {
                let text = match param {
                    Some(Value::String(s)) => s.clone(),
                    Some(Value::Number(n)) => n.to_string(),
                    _ => return Err(KronError::parse(format!("{field}.param"), "expected a decimal value")),
                };
                return Self::opaque(name, &text);
            }
            other => {
                return Err(KronError::parse(format!("{field}.kind"), format!("unknown kind {other:?}")))
            }
        };
        if g.name != name {
            return Err(KronError::validation(
                format!("{field}.name"),
                format!("built-in generator of kind {kind} is named {:?}", g.name),
            ));
        }
        Ok(g)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Generator table used while parsing: built-ins plus declared opaque names.
#[derive(Clone, Debug, Default)]
pub struct GeneratorTable {
    declared: Vec<Generator>,
}

impl GeneratorTable {
    pub fn from_json(v: Option<&Value>) -> Result<Self> {
        let mut table = GeneratorTable::default();
        let Some(v) = v else { return Ok(table) };
        let list = v
            .as_array()
            .ok_or_else(|| KronError::parse("generators", "expected a list"))?;
        for (i, g) in list.iter().enumerate() {
            let g = Generator::from_json(g, &format!("generators[{i}]"))?;
            if table.declared.iter().any(|h| h.name == g.name) {
                return Err(KronError::validation(
                    format!("generators[{i}].name"),
                    format!("duplicate generator {:?}", g.name),
                ));
            }
            table.declared.push(g);
        }
        Ok(table)
    }

    pub fn resolve(&self, name: &str, field: &str) -> Result<Generator> {
        if let Some(g) = self.declared.iter().find(|g| g.name == name) {
            return Ok(g.clone());
        }
        Generator::builtin(name)
            .ok_or_else(|| KronError::parse(field, format!("unknown generator {name:?}")))
    }
}
