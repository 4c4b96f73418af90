//! Resonance modules, the reduction of an integer vector to `(g, 0, 0, …)` by
//! explicit automorphisms of ℤ^(ℕ), and the conjugation of a resonant flow to
//! one with a zero block followed by a non-resonant block.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{KronError, Result};
use crate::frequency::{Coordinates, FrequencyVector};
use crate::linalg::rational::{format_rational, frac_mod1, int_to_json};
use crate::linalg::{integer_kernel, Int, IntVecFin, Rational, RowFiniteIntMatrix};
use crate::torus::{wrap_angle, TorusPoint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonanceBasis {
    pub vectors: Vec<IntVecFin>,
    pub depth: usize,
}

impl ResonanceBasis {
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "depth": self.depth,
            "rank": self.rank(),
            "basis": self.vectors.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Basis of `{ν ∈ ℤ^N : ν·(ω_1..ω_N) = 0}`, the integer kernel of the
/// coordinate matrix of `ω_1..ω_N` over the generators.
pub fn resonance_basis(fv: &FrequencyVector, depth: usize) -> ResonanceBasis {
    assert!(depth >= 1, "depth must be positive");
    let n = fv.effective_depth(depth);
    let (_, rows) = fv.coordinate_matrix(n);
    ResonanceBasis {
        vectors: if n == 0 { Vec::new() } else { integer_kernel(&rows, n) },
        depth: n,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionOp {
    /// `(Pν)_k = ν_{order[k-1]}`: nonzero entries first, ascending by
    /// absolute value, ties in index order.
    Permute { order: Vec<usize> },
    SignFlip { indices: Vec<usize> },
    /// `ν_j ← ν_j − ν_1` for each listed `j`.
    SubtractFirst { targets: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub pass: usize,
    pub op: ReductionOp,
}

impl ReductionStep {
    fn to_json(&self) -> Value {
        match &self.op {
            ReductionOp::Permute { order } => json!({"pass": self.pass, "op": "permute", "order": order}),
            ReductionOp::SignFlip { indices } => json!({"pass": self.pass, "op": "sign_flip", "indices": indices}),
            ReductionOp::SubtractFirst { targets } => {
                json!({"pass": self.pass, "op": "subtract_first", "targets": targets})
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionCertificate {
    pub input: IntVecFin,
    /// `B` with `B·input = result`.
    pub transform: RowFiniteIntMatrix,
    pub result: IntVecFin,
    pub steps: Vec<ReductionStep>,
    /// Entry sums `S¹ > S² > …` after each pass.
    pub pass_sums: Vec<Int>,
}

impl ReductionCertificate {
    pub fn gcd(&self) -> Int {
        self.result.get(1)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "input": self.input.to_json(),
            "result": self.result.to_json(),
            "gcd": int_to_json(&self.gcd()),
            "transform": self.transform.to_json(),
            "steps": self.steps.iter().map(ReductionStep::to_json).collect::<Vec<_>>(),
            "pass_sums": self.pass_sums.iter().map(int_to_json).collect::<Vec<_>>(),
        })
    }
}

/// Reduces `ν ≠ 0` to `(g, 0, 0, …)` with `g = gcd(ν) > 0`.
///
/// Each pass sorts the nonzero entries to the front by absolute value (stable),
/// makes them nonnegative, then subtracts the smallest from the others. Every
/// subtraction pass strictly lowers the entry sum.
pub fn reduce_vector(nu: &IntVecFin) -> Result<ReductionCertificate> {
    if nu.is_zero() {
        return Err(KronError::Domain("cannot reduce the zero vector".into()));
    }
    let n = nu.max_index();
    let mut w = nu.to_dense(n);
    let mut b = RowFiniteIntMatrix::identity(n);
    let mut steps = Vec::new();
    let mut pass_sums = Vec::new();
    let mut pass = 1;
    loop {
        let mut order: Vec<usize> = (1..=n).filter(|&j| !w[j - 1].is_zero()).collect();
        order.sort_by(|&i, &j| w[i - 1].abs().cmp(&w[j - 1].abs()));
        order.extend((1..=n).filter(|&j| w[j - 1].is_zero()));
        if order.iter().enumerate().any(|(k, &j)| j != k + 1) {
            let p = RowFiniteIntMatrix::permutation(&order);
            w = order.iter().map(|&j| w[j - 1].clone()).collect();
            b = p.compose(&b);
            steps.push(ReductionStep {
                pass,
                op: ReductionOp::Permute { order },
            });
        }
        let negatives: Vec<usize> = (1..=n).filter(|&j| w[j - 1].is_negative()).collect();
        if !negatives.is_empty() {
            for &j in &negatives {
                w[j - 1] = -&w[j - 1];
            }
            b = RowFiniteIntMatrix::sign_flip(n, &negatives).compose(&b);
            steps.push(ReductionStep {
                pass,
                op: ReductionOp::SignFlip { indices: negatives },
            });
        }
        let support = w.iter().take_while(|x| !x.is_zero()).count();
        if pass == 1 {
            pass_sums.push(w.iter().sum());
        }
        if support == 1 {
            break;
        }
        let first = w[0].clone();
        let targets: Vec<usize> = (2..=support).collect();
        let mut step = RowFiniteIntMatrix::identity(n);
        for &j in &targets {
            w[j - 1] -= &first;
            step = RowFiniteIntMatrix::add_row(n, j, 1, &BigInt::from(-1)).compose(&step);
        }
        b = step.compose(&b);
        steps.push(ReductionStep {
            pass,
            op: ReductionOp::SubtractFirst { targets },
        });
        pass_sums.push(w.iter().sum());
        pass += 1;
    }
    let result = IntVecFin::from_dense(&w);
    debug_assert_eq!(b.apply(nu), result);
    Ok(ReductionCertificate {
        input: nu.clone(),
        transform: b,
        result,
        steps,
        pass_sums,
    })
}

/// `A` conjugating `Φ_ω` to `Φ_ω̃` with `ω̃ = Aω = (0_d, ω̄)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedFlow {
    pub transform: RowFiniteIntMatrix,
    pub reduced: FrequencyVector,
    pub zero_block: usize,
    pub depth: usize,
    /// Resonance vectors eliminated, each in the coordinates of the block it
    /// was found in (`zero_block` offset applied).
    pub eliminated: Vec<IntVecFin>,
    /// `ω̄` has trivial resonance module among its first `depth − d` entries.
    pub independent_at_depth: bool,
    /// The depth covers the whole vector, so the certificate is global.
    pub certified_globally: bool,
}

impl ReducedFlow {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = (1..=self.depth)
            .map(|j| coords_json(&self.reduced.coordinates(j)))
            .collect();
        json!({
            "depth": self.depth,
            "zero_block": self.zero_block,
            "transform": self.transform.to_json(),
            "reduced": terms,
            "eliminated": self.eliminated.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
            "independent_at_depth": self.independent_at_depth,
            "certified_globally": self.certified_globally,
        })
    }
}

fn coords_json(c: &Coordinates) -> Value {
    Value::Object(
        c.iter()
            .map(|(g, r)| (g.name().to_string(), json!(format_rational(r))))
            .collect(),
    )
}

/// Iterates: find a resonance among the entries past the zero block, reduce it
/// to `(g, 0, …)` by `B`, and conjugate by `(B⁻¹)ᵀ`, which zeroes the first
/// entry of the block.
pub fn reduce_flow(fv: &FrequencyVector, depth: usize) -> ReducedFlow {
    assert!(depth >= 1, "depth must be positive");
    let n = fv.effective_depth(depth);
    let (gens, mut rows) = fv.coordinate_matrix(n);
    let mut a = RowFiniteIntMatrix::identity(n);
    let mut d = 0;
    let mut eliminated = Vec::new();
    while d < n {
        let block: Vec<Vec<Rational>> = rows.iter().map(|r| r[d..].to_vec()).collect();
        let kernel = integer_kernel(&block, n - d);
        let Some(nu) = kernel.first() else { break };
        let cert = reduce_vector(nu).expect("kernel vectors are nonzero");
        let step = cert.transform.inverse().transpose().extended(n - d).shifted(d);
        for r in rows.iter_mut() {
            *r = step.apply_rational(r).expect("block covers the row");
        }
        a = step.compose(&a);
        eliminated.push(nu.shifted(d));
        d += 1;
    }
    let reduced = FrequencyVector::Finite(
        (0..n)
            .map(|j| {
                gens.iter()
                    .zip(&rows)
                    .filter(|(_, r)| !r[j].is_zero())
                    .map(|(g, r)| (g.clone(), r[j].clone()))
                    .collect()
            })
            .collect(),
    );
    ReducedFlow {
        transform: a,
        reduced,
        zero_block: d,
        depth: n,
        eliminated,
        independent_at_depth: true,
        certified_globally: fv.len() == Some(n),
    }
}

/// `θ ↦ Aθ`: component `i` is `Σ_j a_ij θ_j` mod 1 (exact) or mod 2π (float).
pub fn apply_automorphism(a: &RowFiniteIntMatrix, theta: &TorusPoint) -> Result<TorusPoint> {
    match theta {
        TorusPoint::Exact(v) => {
            let out = a.apply_rational(v)?;
            Ok(TorusPoint::Exact(out.iter().map(frac_mod1).collect()))
        }
        TorusPoint::Float(v) => {
            let out = a.apply_generic(v, |c, x| {
                use num_traits::ToPrimitive;
                c.to_f64().expect("small matrix entry") * x
            })?;
            Ok(TorusPoint::Float(out.into_iter().map(wrap_angle).collect()))
        }
    }
}

/// `ν·ω = 0` exactly.
pub fn is_resonance(fv: &FrequencyVector, nu: &IntVecFin) -> bool {
    fv.dot(nu).is_empty()
}
