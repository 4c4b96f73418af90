//! JSON frequency specifications.

use serde_json::Value;

use super::generator::GeneratorTable;
use super::sigma::SigmaSequence;
use super::vector::{product_construction, Coordinates, FrequencyRule, FrequencyVector};
use crate::benjamin_ono::BoActionSpec;
use crate::classification::baer::SubgroupOfQ;
use crate::error::{KronError, Result};
use crate::linalg::rational::{parse_rational, rat_int};
use crate::linalg::Rational;

fn rational_field(v: &Value, field: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| KronError::parse(field, e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(rat_int(n.as_i64().expect("i64"))),
        other => Err(KronError::parse(field, format!("expected \"p/q\", got {other}"))),
    }
}

fn parse_terms(v: Option<&Value>, table: &GeneratorTable) -> Result<Vec<Coordinates>> {
    let items = v
        .and_then(Value::as_array)
        .ok_or_else(|| KronError::parse("terms", "expected a list of coordinate maps"))?;
    if items.is_empty() {
        return Err(KronError::validation("terms", "at least one frequency is required"));
    }
    items
        .iter()
        .enumerate()
        .map(|(j, item)| {
            let field = format!("terms[{j}]");
            let map = item
                .as_object()
                .ok_or_else(|| KronError::parse(&field, "expected {generator: \"p/q\"}"))?;
            let mut coords = Coordinates::new();
            for (name, c) in map {
                let sub = format!("{field}.{name}");
                let g = table.resolve(name, &sub)?;
                let c = rational_field(c, &sub)?;
                if !num_traits::Zero::is_zero(&c) {
                    coords.insert(g, c);
                }
            }
            Ok(coords)
        })
        .collect()
}

fn generator_field(v: &Value, table: &GeneratorTable) -> Result<super::Generator> {
    match v.get("generator") {
        None => Ok(super::Generator::one()),
        Some(Value::String(name)) => table.resolve(name, "generator"),
        Some(other) => Err(KronError::parse("generator", format!("expected a name, got {other}"))),
    }
}

/// Parses `{"kind": "finite"|"solenoid"|"bo"|"product"|"rule", ...}`.
pub fn parse_frequency_spec(document: &Value) -> Result<FrequencyVector> {
    let kind = document
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| KronError::parse("kind", "expected one of finite, solenoid, bo, product, rule"))?;
    let table = GeneratorTable::from_json(document.get("generators"))?;
    match kind {
        "finite" => Ok(FrequencyVector::Finite(parse_terms(document.get("terms"), &table)?)),
        "solenoid" => {
            let a = document.get("a").ok_or_else(|| KronError::parse("a", "missing sequence"))?;
            Ok(FrequencyVector::Solenoid {
                generator: generator_field(document, &table)?,
                a: SigmaSequence::from_json(a, "a")?,
            })
        }
        "bo" => Ok(FrequencyVector::Bo(BoActionSpec::from_json(document, &table)?)),
        "product" => {
            let groups = document
                .get("groups")
                .and_then(Value::as_array)
                .ok_or_else(|| KronError::parse("groups", "expected a list of groups"))?
                .iter()
                .enumerate()
                .map(|(n, g)| SubgroupOfQ::from_json(g, &format!("groups[{n}]")))
                .collect::<Result<Vec<_>>>()?;
            if groups.is_empty() {
                return Err(KronError::validation("groups", "at least one group is required"));
            }
            product_construction(&groups)
        }
        "rule" => {
            let name = document
                .get("rule")
                .and_then(Value::as_str)
                .ok_or_else(|| KronError::parse("rule", "expected reciprocal or prime_ratio"))?;
            let rule = FrequencyRule::from_name(name)
                .ok_or_else(|| KronError::parse("rule", format!("unknown rule {name:?}")))?;
            Ok(FrequencyVector::Rule {
                generator: generator_field(document, &table)?,
                rule,
            })
        }
        other => Err(KronError::parse("kind", format!("unknown kind {other:?}"))),
    }
}

pub fn parse_frequency_text(text: &str) -> Result<FrequencyVector> {
    let v: Value = serde_json::from_str(text).map_err(|e| KronError::parse("document", e.to_string()))?;
    parse_frequency_spec(&v)
}
