use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::generator::Generator;
use super::sigma::SigmaSequence;
use crate::benjamin_ono::BoActionSpec;
use crate::classification::baer::SubgroupOfQ;
use crate::error::{KronError, Result};
use crate::linalg::rational::{format_rational, rat_int};
use crate::linalg::{IntVecFin, Rational};
use crate::precision::{BigEval, Precision};
use crate::primes::nth_prime;

/// Coordinates of one frequency over the generators; zero entries omitted.
pub type Coordinates = BTreeMap<Generator, Rational>;

/// Closed-form infinite families not covered by the Σ-sequence variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrequencyRule {
    /// `ω_j = α / j`
    Reciprocal,
    /// `ω_j = α · p_{2j} / p_{2j-1}`
    PrimeRatio,
}

impl FrequencyRule {
    pub fn name(self) -> &'static str {
        match self {
            FrequencyRule::Reciprocal => "reciprocal",
            FrequencyRule::PrimeRatio => "prime_ratio",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "reciprocal" => Some(FrequencyRule::Reciprocal),
            "prime_ratio" => Some(FrequencyRule::PrimeRatio),
            _ => None,
        }
    }

    pub fn coefficient(self, j: usize) -> Rational {
        match self {
            FrequencyRule::Reciprocal => Rational::new(1.into(), j.into()),
            FrequencyRule::PrimeRatio => Rational::new(nth_prime(2 * j).into(), nth_prime(2 * j - 1).into()),
        }
    }
}

/// Where a product component puts its entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Placement {
    /// Entry `1/∏_{k≤N} a_k` at index `p^N` for every `N ≥ 1`.
    PrimePowers(u64),
    /// A single entry equal to the group's generator.
    Index(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductComponent {
    pub generator: Generator,
    pub group: SubgroupOfQ,
    pub placement: Placement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrequencyVector {
    /// `ω_1, …, ω_n`; the torus is `𝕋^n`.
    Finite(Vec<Coordinates>),
    /// `ω_j = α / ∏_{k≤j} a_k`.
    Solenoid { generator: Generator, a: SigmaSequence },
    /// `ω_j = j² − 2β σ_j`.
    Bo(BoActionSpec),
    /// One generator per subgroup of ℚ, entries at disjoint index sets.
    Product(Vec<ProductComponent>),
    Rule { generator: Generator, rule: FrequencyRule },
}

fn single(g: &Generator, c: Rational) -> Coordinates {
    let mut m = Coordinates::new();
    if !c.is_zero() {
        m.insert(g.clone(), c);
    }
    m
}

/// `e` with `n = p^e`, if any.
fn prime_power_exponent(mut n: u64, p: u64) -> Option<u32> {
    let mut e = 0;
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    (n == 1 && e >= 1).then_some(e)
}

impl FrequencyVector {
    pub fn from_rationals(values: &[Rational]) -> Self {
        let one = Generator::one();
        FrequencyVector::Finite(values.iter().map(|v| single(&one, v.clone())).collect())
    }

    /// Number of frequencies for finite vectors.
    pub fn len(&self) -> Option<usize> {
        match self {
            FrequencyVector::Finite(terms) => Some(terms.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Depth actually available: finite vectors cap the request at their length.
    pub fn effective_depth(&self, depth: usize) -> usize {
        self.len().map_or(depth, |n| n.min(depth))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            FrequencyVector::Finite(_) => "finite",
            FrequencyVector::Solenoid { .. } => "solenoid",
            FrequencyVector::Bo(_) => "bo",
            FrequencyVector::Product(_) => "product",
            FrequencyVector::Rule { .. } => "rule",
        }
    }

    /// Exact coordinates of `ω_j`.
    pub fn coordinates(&self, j: usize) -> Coordinates {
        assert!(j >= 1, "frequencies are indexed from 1");
        match self {
            FrequencyVector::Finite(terms) => terms.get(j - 1).cloned().unwrap_or_default(),
            FrequencyVector::Solenoid { generator, a } => {
                let prod = a.partial_products(j).pop().expect("j >= 1");
                single(generator, Rational::new(One::one(), prod))
            }
            FrequencyVector::Bo(spec) => {
                let mut m = single(&Generator::one(), rat_int(j * j));
                let b = -spec.s.sigma(j) * rat_int(2);
                if !b.is_zero() {
                    m.insert(spec.beta.clone(), b);
                }
                m
            }
            FrequencyVector::Product(components) => {
                for c in components {
                    match (&c.placement, &c.group) {
                        (Placement::PrimePowers(p), SubgroupOfQ::Sequence(a)) => {
                            if let Some(n) = prime_power_exponent(j as u64, *p) {
                                let prod = a.partial_products(n as usize).pop().expect("n >= 1");
                                return single(&c.generator, Rational::new(One::one(), prod));
                            }
                        }
                        (Placement::Index(i), SubgroupOfQ::Cyclic(g)) if *i == j => {
                            return single(&c.generator, g.clone());
                        }
                        _ => {}
                    }
                }
                Coordinates::new()
            }
            FrequencyVector::Rule { generator, rule } => single(generator, rule.coefficient(j)),
        }
    }

    /// Generators with a nonzero coordinate somewhere (for finite vectors) or
    /// by construction (for rules).
    pub fn generators(&self) -> Vec<Generator> {
        let mut out: Vec<Generator> = match self {
            FrequencyVector::Finite(terms) => terms.iter().flat_map(|m| m.keys().cloned()).collect(),
            FrequencyVector::Solenoid { generator, .. } | FrequencyVector::Rule { generator, .. } => {
                vec![generator.clone()]
            }
            FrequencyVector::Bo(spec) => {
                let mut g = vec![Generator::one()];
                if !spec.s.is_zero() {
                    g.push(spec.beta.clone());
                }
                g
            }
            FrequencyVector::Product(c) => c.iter().map(|c| c.generator.clone()).collect(),
        };
        out.sort();
        out.dedup();
        out
    }

    /// First `n` frequencies as a finite vector.
    pub fn truncate(&self, n: usize) -> FrequencyVector {
        assert!(n >= 1, "truncation depth must be positive");
        FrequencyVector::Finite((1..=self.effective_depth(n)).map(|j| self.coordinates(j)).collect())
    }

    /// Generators appearing in `ω_1..ω_n` and the matrix `M[g][j] =`
    /// coordinate of `ω_{j+1}` on generator `g`.
    pub fn coordinate_matrix(&self, n: usize) -> (Vec<Generator>, Vec<Vec<Rational>>) {
        let coords: Vec<Coordinates> = (1..=n).map(|j| self.coordinates(j)).collect();
        let mut gens: Vec<Generator> = coords.iter().flat_map(|m| m.keys().cloned()).collect();
        gens.sort();
        gens.dedup();
        let rows = gens
            .iter()
            .map(|g| {
                coords
                    .iter()
                    .map(|m| m.get(g).cloned().unwrap_or_else(Rational::zero))
                    .collect()
            })
            .collect();
        (gens, rows)
    }

    /// Exact coordinates of `ν·ω`.
    pub fn dot(&self, nu: &IntVecFin) -> Coordinates {
        let mut out = Coordinates::new();
        for (j, v) in nu.iter() {
            for (g, c) in self.coordinates(j) {
                let e = out.entry(g).or_insert_with(Rational::zero);
                *e += c * Rational::from_integer(v.clone());
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn evaluate_float(&self, j: usize, precision: Precision) -> f64 {
        evaluate_coordinates(&self.coordinates(j), &mut BigEval::new(precision))
    }

    pub fn evaluate_all(&self, n: usize, precision: Precision) -> Vec<f64> {
        let mut eval = BigEval::new(precision);
        (1..=self.effective_depth(n))
            .map(|j| evaluate_coordinates(&self.coordinates(j), &mut eval))
            .collect()
    }

    /// `ν·ω` in floating point, summed exactly per generator first.
    pub fn dot_float(&self, nu: &IntVecFin, precision: Precision) -> f64 {
        evaluate_coordinates(&self.dot(nu), &mut BigEval::new(precision))
    }

    /// When all of `ω_1..ω_n` are rational multiples of one generator, that
    /// generator and the multiples.
    pub fn single_generator(&self, n: usize) -> Option<(Generator, Vec<Rational>)> {
        let (gens, mut rows) = self.coordinate_matrix(n);
        match gens.len() {
            0 => Some((Generator::one(), vec![Rational::zero(); n])),
            1 => Some((gens[0].clone(), rows.pop().expect("one row"))),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let coords_json = |m: &Coordinates| -> Value {
            Value::Object(
                m.iter()
                    .map(|(g, c)| (g.name().to_string(), json!(format_rational(c))))
                    .collect(),
            )
        };
        let opaque = |gs: Vec<Generator>| -> Value {
            Value::Array(
                gs.into_iter()
                    .filter(|g| matches!(g.kind(), super::generator::GeneratorKind::Opaque(_)))
                    .map(|g| g.to_json())
                    .collect(),
            )
        };
        match self {
            FrequencyVector::Finite(terms) => json!({
                "kind": "finite",
                "generators": opaque(self.generators()),
                "terms": terms.iter().map(coords_json).collect::<Vec<_>>(),
            }),
            FrequencyVector::Solenoid { generator, a } => json!({
                "kind": "solenoid",
                "generators": opaque(self.generators()),
                "generator": generator.name(),
                "a": a.to_json(),
            }),
            FrequencyVector::Bo(spec) => {
                let mut v = spec.to_json();
                v["kind"] = json!("bo");
                v["generators"] = opaque(vec![spec.beta.clone()]);
                v
            }
            FrequencyVector::Product(components) => json!({
                "kind": "product",
                "groups": components.iter().map(|c| c.group.to_json()).collect::<Vec<_>>(),
            }),
            FrequencyVector::Rule { generator, rule } => json!({
                "kind": "rule",
                "generators": opaque(self.generators()),
                "generator": generator.name(),
                "rule": rule.name(),
            }),
        }
    }
}

pub fn evaluate_coordinates(coords: &Coordinates, eval: &mut BigEval) -> f64 {
    let mut acc = eval.zero();
    for (g, c) in coords {
        let r = eval.rational(c);
        let v = g.value(eval);
        acc = eval.add(&acc, &eval.mul(&r, &v));
    }
    eval.to_f64(&acc)
}

/// Product construction for a list of subgroups of ℚ: the n-th non-cyclic
/// group `Q(a)` sits on generator `√p_n` at indices `p_n^N` with entries
/// `1/∏_{k≤N} a_k`; the n-th cyclic group `gℤ` sits on generator `π^n` at the
/// first index not used by any prime-power family, in list order.
pub fn product_construction(groups: &[SubgroupOfQ]) -> Result<FrequencyVector> {
    if groups.is_empty() {
        return Err(KronError::Domain("the product construction needs at least one group".into()));
    }
    let primes: Vec<u64> = groups
        .iter()
        .enumerate()
        .filter(|(_, g)| matches!(g, SubgroupOfQ::Sequence(_)))
        .map(|(n, _)| nth_prime(n + 1))
        .collect();
    let reserved = |j: usize| primes.iter().any(|&p| prime_power_exponent(j as u64, p).is_some());
    let mut next_free = 1usize;
    let mut components = Vec::with_capacity(groups.len());
    for (n, group) in groups.iter().enumerate() {
        let (generator, placement) = match group {
            SubgroupOfQ::Sequence(_) => {
                let p = nth_prime(n + 1);
                (Generator::sqrt_prime(p), Placement::PrimePowers(p))
            }
            SubgroupOfQ::Cyclic(g) => {
                if !g.is_positive() {
                    return Err(KronError::validation(
                        format!("groups[{n}].cyclic"),
                        "generator must be positive",
                    ));
                }
                while reserved(next_free) {
                    next_free += 1;
                }
                let placement = Placement::Index(next_free);
                next_free += 1;
                (Generator::pi_power(n as u32 + 1), placement)
            }
        };
        components.push(ProductComponent {
            generator,
            group: group.clone(),
            placement,
        });
    }
    Ok(FrequencyVector::Product(components))
}
