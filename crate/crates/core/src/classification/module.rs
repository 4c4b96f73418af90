//! Frequency modules as direct sums of rank-one groups, one per generator,
//! and the orbit closures they determine.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};

use super::baer::{baer_isomorphic, generated_type, is_free, qa_to_baer, BaerType, SubgroupOfQ};
use super::supernatural::{Exponent, SupernaturalNumber};
use crate::error::{KronError, Result};
use crate::frequency::vector::{product_construction, FrequencyRule};
use crate::frequency::{FrequencyVector, Generator};
use crate::linalg::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureFactor {
    Circle,
    Solenoid(SupernaturalNumber),
}

/// Formal product of circles and solenoids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosureDescriptor {
    factors: Vec<ClosureFactor>,
}

impl ClosureDescriptor {
    pub fn from_types<'a>(types: impl IntoIterator<Item = &'a BaerType>) -> Self {
        ClosureDescriptor {
            factors: types
                .into_iter()
                .map(|t| {
                    if is_free(t) {
                        ClosureFactor::Circle
                    } else {
                        ClosureFactor::Solenoid(t.lambda().clone())
                    }
                })
                .collect(),
        }
    }

    pub fn factors(&self) -> &[ClosureFactor] {
        &self.factors
    }

    pub fn circle_count(&self) -> usize {
        self.factors.iter().filter(|f| **f == ClosureFactor::Circle).count()
    }

    pub fn solenoids(&self) -> Vec<&SupernaturalNumber> {
        self.factors
            .iter()
            .filter_map(|f| match f {
                ClosureFactor::Solenoid(l) => Some(l),
                ClosureFactor::Circle => None,
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.factors
                .iter()
                .map(|f| match f {
                    ClosureFactor::Circle => json!("circle"),
                    ClosureFactor::Solenoid(l) => json!({ "solenoid": l.to_json() }),
                })
                .collect(),
        )
    }
}

impl fmt::Display for ClosureDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "point");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| match x {
                ClosureFactor::Circle => "circle".to_string(),
                ClosureFactor::Solenoid(l) => format!("solenoid[{l}]"),
            })
            .collect();
        write!(f, "{}", parts.join(" × "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleComponent {
    pub generator: Generator,
    pub baer: BaerType,
}

/// `𝓜_ω ≅ ⊕_g R_g`, where `R_g ⊆ ℚ` is generated by the `g`-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDescriptor {
    pub components: Vec<ModuleComponent>,
    pub free_rank: usize,
}

impl ModuleDescriptor {
    fn new(components: Vec<ModuleComponent>) -> Self {
        let free_rank = components.iter().filter(|c| is_free(&c.baer)).count();
        ModuleDescriptor {
            components,
            free_rank,
        }
    }

    pub fn is_free(&self) -> bool {
        self.free_rank == self.components.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "components": self
                .components
                .iter()
                .map(|c| json!({ "generator": c.generator.name(), "baer": c.baer.to_json() }))
                .collect::<Vec<_>>(),
        })
    }
}

fn unsupported_for(g: &Generator, e: KronError) -> KronError {
    match e {
        KronError::Unsupported { message, .. } => {
            KronError::unsupported(format!("generator {}", g.name()), message)
        }
        other => other,
    }
}

/// Splits the frequency module into one rank-one group per generator.
pub fn decompose_module(fv: &FrequencyVector, depth: usize) -> Result<ModuleDescriptor> {
    let component = |g: &Generator, t: Result<Option<BaerType>>| -> Result<Option<ModuleComponent>> {
        Ok(t.map_err(|e| unsupported_for(g, e))?.map(|baer| ModuleComponent {
            generator: g.clone(),
            baer,
        }))
    };
    let mut out = Vec::new();
    match fv {
        FrequencyVector::Finite(_) => {
            let (gens, rows) = fv.coordinate_matrix(fv.effective_depth(depth));
            for (g, row) in gens.iter().zip(&rows) {
                out.extend(component(g, generated_type(row, &BTreeSet::new()))?);
            }
        }
        FrequencyVector::Solenoid { generator, a } => {
            out.extend(component(generator, qa_to_baer(a).map(Some))?);
        }
        FrequencyVector::Rule { generator, rule } => {
            let lambda = match rule {
                FrequencyRule::Reciprocal => SupernaturalNumber::uniform(Exponent::Infinite),
                FrequencyRule::PrimeRatio => {
                    SupernaturalNumber::with_defaults(Exponent::Finite(1), Exponent::ZERO)
                }
            };
            out.push(ModuleComponent {
                generator: generator.clone(),
                baer: BaerType::with_lambda(lambda),
            });
        }
        FrequencyVector::Bo(spec) => {
            let one = Generator::one();
            out.extend(component(&one, BaerType::cyclic(&Rational::from_integer(1.into())).map(Some))?);
            let scale = Rational::from_integer((-2).into());
            out.extend(component(&spec.beta, spec.s.generated_type(&scale))?);
        }
        FrequencyVector::Product(components) => {
            for c in components {
                out.extend(component(&c.generator, c.group.baer_type().map(Some))?);
            }
        }
    }
    Ok(ModuleDescriptor::new(out))
}

/// Rank of `⊕ R_g`: one per component.
pub fn module_rank(md: &ModuleDescriptor) -> usize {
    md.components.len()
}

/// Circle for each free component, solenoid for each non-free one.
pub fn orbit_closure(fv: &FrequencyVector, depth: usize) -> Result<ClosureDescriptor> {
    let md = decompose_module(fv, depth)?;
    Ok(ClosureDescriptor::from_types(md.components.iter().map(|c| &c.baer)))
}

/// Equal free ranks and a pairing of non-free components by Baer type.
pub fn modules_isomorphic(m1: &ModuleDescriptor, m2: &ModuleDescriptor) -> bool {
    if m1.free_rank != m2.free_rank || m1.components.len() != m2.components.len() {
        return false;
    }
    let non_free = |m: &ModuleDescriptor| -> Vec<BaerType> {
        m.components
            .iter()
            .filter(|c| !is_free(&c.baer))
            .map(|c| c.baer.clone())
            .collect()
    };
    // Baer isomorphism is an equivalence relation, so greedy pairing is exact.
    let mut remaining = non_free(m2);
    for t in non_free(m1) {
        match remaining.iter().position(|u| baer_isomorphic(&t, u)) {
            Some(k) => {
                remaining.swap_remove(k);
            }
            None => return false,
        }
    }
    remaining.is_empty()
}

pub fn closures_homeomorphic(fv1: &FrequencyVector, fv2: &FrequencyVector, depth: usize) -> Result<bool> {
    Ok(modules_isomorphic(
        &decompose_module(fv1, depth)?,
        &decompose_module(fv2, depth)?,
    ))
}

pub fn build_frequency_from_groups(groups: &[SubgroupOfQ]) -> Result<FrequencyVector> {
    product_construction(groups)
}

/// `{module, closure, rank, free}`.
pub fn classification_report(fv: &FrequencyVector, depth: usize) -> Result<Value> {
    let md = decompose_module(fv, depth)?;
    let closure = ClosureDescriptor::from_types(md.components.iter().map(|c| &c.baer));
    Ok(json!({
        "module": md.to_json(),
        "closure": closure.to_json(),
        "rank": module_rank(&md),
        "free": md.is_free(),
    }))
}
