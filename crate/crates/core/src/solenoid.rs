//! Exact geometry of the solenoid `σ_a = {θ : θ̌_j ≡ a_{j+1} θ̌_{j+1} mod 1}`:
//! membership, the bijection with `[0,1) × ∏ {0..a_j−1}`, approximating times
//! along the orbit of `ω(a)`, the local chart, and the weighted product metric.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{KronError, Result};
use crate::frequency::SigmaSequence;
use crate::linalg::rational::{format_rational, frac_mod1, parse_rational, to_f64};
use crate::linalg::Rational;
use crate::torus::TorusPoint;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolenoidCoords {
    /// `θ̌_1 ∈ [0, 1)`.
    pub tau: Rational,
    /// `n_2..n_N` with `0 ≤ n_j < a_j`.
    pub digits: Vec<u64>,
}

impl SolenoidCoords {
    pub fn depth(&self) -> usize {
        self.digits.len() + 1
    }

    pub fn to_json(&self) -> Value {
        json!({ "tau": format_rational(&self.tau), "digits": self.digits })
    }

    pub fn from_json(v: &Value, field: &str) -> Result<Self> {
        let tau = v
            .get("tau")
            .and_then(Value::as_str)
            .ok_or_else(|| KronError::parse(format!("{field}.tau"), "expected \"p/q\""))
            .and_then(|s| parse_rational(s).map_err(|e| KronError::parse(format!("{field}.tau"), e.to_string())))?;
        let digits_field = format!("{field}.digits");
        let digits = v
            .get("digits")
            .and_then(Value::as_array)
            .ok_or_else(|| KronError::parse(&digits_field, "expected a list of integers"))?
            .iter()
            .map(|x| {
                x.as_u64()
                    .ok_or_else(|| KronError::parse(&digits_field, format!("bad digit {x}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SolenoidCoords { tau, digits })
    }
}

fn exact_point<'a>(theta: &'a TorusPoint, what: &str) -> Result<&'a [Rational]> {
    theta
        .exact_values()
        .ok_or_else(|| KronError::Domain(format!("{what} needs an exact point")))
}

/// `P_j = ∏_{k≤j} a_k = 1/ω_j(a)` for `j = 1..=n`.
fn products(a: &SigmaSequence, n: usize) -> Vec<Rational> {
    a.partial_products(n).into_iter().map(Rational::from_integer).collect()
}

/// Checks `θ̌_j ≡ a_{j+1} θ̌_{j+1} (mod 1)` for `j < N`; this certifies
/// membership at depth `N` only.
pub fn is_member(a: &SigmaSequence, theta: &TorusPoint) -> Result<bool> {
    let th = exact_point(theta, "membership")?;
    if th.len() < 2 {
        return Err(KronError::Domain("membership needs depth at least 2".into()));
    }
    let terms = a.terms(th.len());
    Ok((1..th.len()).all(|j| {
        let lifted = &th[j] * Rational::from_integer(terms[j].into());
        frac_mod1(&(lifted - &th[j - 1])).is_zero()
    }))
}

/// `τ = θ̌_1`, `n_j = a_j θ̌_j − θ̌_{j−1}`.
pub fn to_coordinates(a: &SigmaSequence, theta: &TorusPoint) -> Result<SolenoidCoords> {
    if !is_member(a, theta)? {
        return Err(KronError::Domain("point is not on the solenoid".into()));
    }
    let th = exact_point(theta, "coordinates")?;
    let terms = a.terms(th.len());
    let digits = (1..th.len())
        .map(|j| {
            let n = &th[j] * Rational::from_integer(terms[j].into()) - &th[j - 1];
            debug_assert!(n.is_integer());
            n.to_integer().to_u64().expect("digit in 0..a_j")
        })
        .collect();
    Ok(SolenoidCoords {
        tau: th[0].clone(),
        digits,
    })
}

fn check_coords(a: &SigmaSequence, c: &SolenoidCoords) -> Result<Vec<u64>> {
    if c.tau < Rational::zero() || c.tau >= Rational::one() {
        return Err(KronError::Domain(format!("tau = {} is outside [0, 1)", format_rational(&c.tau))));
    }
    let terms = a.terms(c.depth());
    for (k, n) in c.digits.iter().enumerate() {
        let j = k + 2;
        if *n >= terms[j - 1] {
            return Err(KronError::Domain(format!(
                "digit n_{j} = {n} is outside 0..{}",
                terms[j - 1]
            )));
        }
    }
    Ok(terms)
}

/// `t_k = τ + Σ_{m=2}^k n_m P_{m−1}` in turns, for `k = 1..=N`.
pub fn approximating_times(a: &SigmaSequence, c: &SolenoidCoords) -> Result<Vec<Rational>> {
    check_coords(a, c)?;
    let p = products(a, c.depth());
    let mut t = c.tau.clone();
    let mut out = vec![t.clone()];
    for (k, n) in c.digits.iter().enumerate() {
        t += &p[k] * Rational::from_integer((*n).into());
        out.push(t.clone());
    }
    Ok(out)
}

/// `θ̌_j = ω_j(a) t_j`, which already lies in `[0, 1)`.
pub fn from_coordinates(a: &SigmaSequence, c: &SolenoidCoords) -> Result<TorusPoint> {
    let times = approximating_times(a, c)?;
    let p = products(a, c.depth());
    let values: Vec<Rational> = times.iter().zip(&p).map(|(t, pj)| t / pj).collect();
    debug_assert!(values.iter().all(|x| *x >= Rational::zero() && *x < Rational::one()));
    Ok(TorusPoint::Exact(values))
}

/// Point of the orbit of `ω(a)` from the origin at time `t` (turns).
pub fn orbit_point(a: &SigmaSequence, t: &Rational, depth: usize) -> TorusPoint {
    TorusPoint::Exact(products(a, depth).iter().map(|p| frac_mod1(&(t / p))).collect())
}

/// `(θ̌_1, (n_j))` on the chart that excludes the slice `θ̌_1 = 0`.
pub fn local_chart(a: &SigmaSequence, theta: &TorusPoint) -> Result<(Rational, Vec<u64>)> {
    let th = exact_point(theta, "the local chart")?;
    if th.first().is_some_and(Zero::is_zero) {
        return Err(KronError::Domain("outside the chart: first angle is 0".into()));
    }
    let c = to_coordinates(a, theta)?;
    Ok((c.tau, c.digits))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    /// `ρ_k = r^k`.
    Geometric(f64),
    /// `ρ_1, ρ_2, …` with `ρ_k = 0` past the list.
    Explicit(Vec<f64>),
}

impl Weights {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            Weights::Geometric(r) => *r > 0.0 && *r < 1.0,
            Weights::Explicit(w) => w.iter().all(|x| x.is_finite() && *x > 0.0),
        };
        if ok {
            Ok(())
        } else {
            Err(KronError::Domain(format!("weights {self:?} are not positive and summable")))
        }
    }

    pub fn weight(&self, k: usize) -> f64 {
        match self {
            Weights::Geometric(r) => r.powi(k as i32),
            Weights::Explicit(w) => w.get(k - 1).copied().unwrap_or(0.0),
        }
    }

    /// `Σ_{k>n} ρ_k`.
    pub fn tail(&self, n: usize) -> f64 {
        match self {
            Weights::Geometric(r) => r.powi(n as i32 + 1) / (1.0 - r),
            Weights::Explicit(w) => w.iter().skip(n).sum(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricValue {
    pub value: f64,
    /// Bound on the contribution of coordinates past the truncation depth.
    pub tail_bound: f64,
}

/// Circle distance in turns, in `[0, 1/2]`.
fn arc(x: &Rational, y: &Rational) -> f64 {
    let d = to_f64(&frac_mod1(&(x - y)));
    d.min(1.0 - d)
}

fn arc_float(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// `Σ_k ρ_k d_𝕋(θ_k, φ_k)` with `d_𝕋` the arc length in turns.
pub fn product_metric(weights: &Weights, theta: &TorusPoint, phi: &TorusPoint) -> Result<MetricValue> {
    weights.validate()?;
    if theta.depth() != phi.depth() {
        return Err(KronError::Domain(format!(
            "depth mismatch: {} vs {}",
            theta.depth(),
            phi.depth()
        )));
    }
    let arcs: Vec<f64> = match (theta, phi) {
        (TorusPoint::Exact(x), TorusPoint::Exact(y)) => x.iter().zip(y).map(|(a, b)| arc(a, b)).collect(),
        _ => theta
            .turns()
            .into_iter()
            .zip(phi.turns())
            .map(|(a, b)| arc_float(a, b))
            .collect(),
    };
    let value = arcs.iter().enumerate().map(|(k, d)| weights.weight(k + 1) * d).sum();
    Ok(MetricValue {
        value,
        tail_bound: weights.tail(theta.depth()),
    })
}

/// `∏_{k<j} a_k`, the jump in approximating time from the digit `n_j`.
pub fn time_step(a: &SigmaSequence, j: usize) -> BigInt {
    assert!(j >= 2);
    a.partial_products(j - 1).pop().expect("j >= 2")
}
