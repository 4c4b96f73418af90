//! Haar averages, closed-form and sampled time averages, and the decay report
//! `|(1/T)∫₀ᵀ e^{iν·Θ(t)} dt| ≤ 2/(T|ω·ν|)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::flow::FloatFlow;
use super::trig::{complex_f64, TrigPolynomial};
use crate::error::{KronError, Result};
use crate::frequency::FrequencyVector;
use crate::linalg::rational::{frac_mod1, to_f64};
use crate::linalg::{IntVecFin, Rational};
use crate::precision::Precision;
use crate::torus::TorusPoint;

/// Below this `|ω·ν|` the decay bound is reported as uninformative.
pub const NEAR_RESONANCE: f64 = 1e-9;

/// Slack allowed on the decay bound.
pub const BOUND_SLACK: f64 = 1e-12;

/// Constant term `a_0`.
pub fn haar_average(p: &TrigPolynomial) -> Rational {
    p.coefficient(&IntVecFin::zero()).re
}

/// `(1/T)∫₀ᵀ e^{iλt} dt = sinc(λT/2)·e^{iλT/2}`.
pub fn monomial_average(lambda: f64, t: f64) -> Complex64 {
    let x = 0.5 * lambda * t;
    let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
    Complex64::from_polar(sinc, x)
}

/// `e^{iν·Θ0}`, with the phase reduced exactly first for exact points.
fn initial_phase(nu: &IntVecFin, theta0: &TorusPoint) -> f64 {
    match theta0 {
        TorusPoint::Exact(v) => TAU * to_f64(&frac_mod1(&nu.dot_rational(v))),
        TorusPoint::Float(v) => nu
            .iter()
            .map(|(j, c)| c.to_f64().unwrap_or(f64::NAN) * v[j - 1])
            .sum(),
    }
}

fn check_support(fv: &FrequencyVector, max_index: usize, theta0: &TorusPoint) -> Result<()> {
    if let Some(n) = fv.len() {
        if max_index > n {
            return Err(KronError::Domain(format!(
                "observable uses coordinate {max_index} but the frequency vector has {n}"
            )));
        }
    }
    if max_index > theta0.depth() {
        return Err(KronError::Domain(format!(
            "observable uses coordinate {max_index} but the initial point has depth {}",
            theta0.depth()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeAverage {
    pub value: f64,
    /// Imaginary residue; zero up to rounding for real polynomials.
    pub imaginary: f64,
    pub resonant_terms: Vec<IntVecFin>,
    pub near_resonant_terms: Vec<IntVecFin>,
}

impl TimeAverage {
    pub fn to_json(&self) -> Value {
        json!({
            "value": self.value,
            "imaginary": self.imaginary,
            "resonant_terms": self.resonant_terms.iter().map(IntVecFin::to_json).collect::<Vec<_>>(),
            "near_resonant_terms": self.near_resonant_terms.iter().map(IntVecFin::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Closed form of `(1/T)∫₀ᵀ p(Φ^t θ0) dt`: resonant monomials keep their
/// initial value, the others pick up `monomial_average(ω·ν, T)`.
pub fn time_average(
    fv: &FrequencyVector,
    p: &TrigPolynomial,
    theta0: &TorusPoint,
    t: f64,
    precision: Precision,
) -> Result<TimeAverage> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(KronError::Domain(format!("averaging time must be positive, got {t}")));
    }
    check_support(fv, p.max_index(), theta0)?;
    let mut total = Complex64::new(0.0, 0.0);
    let mut resonant = Vec::new();
    let mut near = Vec::new();
    for (nu, c) in p.coefficients() {
        let start = complex_f64(c) * Complex64::from_polar(1.0, initial_phase(nu, theta0));
        if nu.is_zero() {
            total += start;
        } else if fv.dot(nu).is_empty() {
            resonant.push(nu.clone());
            total += start;
        } else {
            let lambda = fv.dot_float(nu, precision);
            if lambda.abs() < NEAR_RESONANCE {
                near.push(nu.clone());
            }
            total += start * monomial_average(lambda, t);
        }
    }
    Ok(TimeAverage {
        value: total.re,
        imaginary: total.im,
        resonant_terms: resonant,
        near_resonant_terms: near,
    })
}

/// Trapezoid rule for `(1/T)∫₀ᵀ f(Φ^t θ0) dt` on `steps` intervals.
pub fn sampled_time_average(
    fv: &FrequencyVector,
    f: impl Fn(&[f64]) -> f64,
    theta0: &TorusPoint,
    depth: usize,
    t: f64,
    steps: usize,
    precision: Precision,
) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) || steps == 0 {
        return Err(KronError::Domain("sampling needs T > 0 and at least one step".into()));
    }
    let flow = FloatFlow::new(fv, theta0, depth, precision)?;
    let h = t / steps as f64;
    let inner: f64 = (1..steps).map(|k| f(&flow.at(h * k as f64))).sum();
    let ends = 0.5 * (f(&flow.at(0.0)) + f(&flow.at(t)));
    Ok((inner + ends) * h / t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AverageRow {
    pub t: f64,
    pub value: f64,
    /// `a_0` plus the resonant monomials at `θ0`, the limit as `T → ∞`.
    pub limit: f64,
    /// `Σ_{ν non-resonant} 2|a_ν| / (T|ω·ν|)`.
    pub bound: f64,
    pub pass: bool,
    pub average: TimeAverage,
}

impl AverageRow {
    pub fn to_json(&self) -> Value {
        json!({
            "T": self.t,
            "value": self.value,
            "limit": self.limit,
            "bound": self.bound,
            "pass": self.pass,
            "imaginary": self.average.imaginary,
            "resonant_terms": self.average.resonant_terms.iter().map(IntVecFin::to_json).collect::<Vec<_>>(),
            "near_resonant_terms": self.average.near_resonant_terms.iter().map(IntVecFin::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Time averages of `p` at each `T`, checked against the decay envelope
/// around their limit.
pub fn average_report(
    fv: &FrequencyVector,
    p: &TrigPolynomial,
    theta0: &TorusPoint,
    times: &[f64],
    precision: Precision,
) -> Result<Vec<AverageRow>> {
    check_support(fv, p.max_index(), theta0)?;
    let mut limit = Complex64::new(0.0, 0.0);
    let mut rate = 0.0;
    for (nu, c) in p.coefficients() {
        let start = complex_f64(c) * Complex64::from_polar(1.0, initial_phase(nu, theta0));
        if nu.is_zero() || fv.dot(nu).is_empty() {
            limit += start;
        } else {
            rate += 2.0 * start.norm() / fv.dot_float(nu, precision).abs();
        }
    }
    times
        .iter()
        .map(|&t| {
            let average = time_average(fv, p, theta0, t, precision)?;
            let bound = rate / t;
            Ok(AverageRow {
                t,
                value: average.value,
                limit: limit.re,
                bound,
                pass: (average.value - limit.re).abs() <= bound + BOUND_SLACK,
                average,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum RowStatus {
    Checked { value: f64, bound: f64, pass: bool, near_resonant: bool },
    ZeroVector,
    Resonant { value: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquidistributionRow {
    pub nu: IntVecFin,
    pub t: f64,
    pub omega_dot_nu: f64,
    pub status: RowStatus,
}

impl EquidistributionRow {
    pub fn passed(&self) -> Option<bool> {
        match self.status {
            RowStatus::Checked { pass, .. } => Some(pass),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut row = json!({ "nu": self.nu.to_json(), "T": self.t, "omega_dot_nu": self.omega_dot_nu });
        let extra = match &self.status {
            RowStatus::Checked { value, bound, pass, near_resonant } => json!({
                "value": value,
                "bound": bound,
                "pass": pass,
                "flag": if *near_resonant { json!("near_resonant") } else { Value::Null },
            }),
            RowStatus::ZeroVector => json!({ "value": 1.0, "bound": null, "pass": null, "flag": "zero_vector" }),
            RowStatus::Resonant { value } => json!({ "value": value, "bound": null, "pass": null, "flag": "resonant" }),
        };
        for (k, v) in extra.as_object().expect("object") {
            row[k] = v.clone();
        }
        row
    }
}

/// One row per `(ν, T)`: `|time average of e^{iν·Θ}|` against `2/(T|ω·ν|)`.
pub fn equidistribution_report(
    fv: &FrequencyVector,
    nus: &[IntVecFin],
    times: &[f64],
    theta0: &TorusPoint,
    precision: Precision,
) -> Result<Vec<EquidistributionRow>> {
    let mut rows = Vec::new();
    for nu in nus {
        check_support(fv, nu.max_index(), theta0)?;
        let lambda = fv.dot_float(nu, precision);
        let resonant = fv.dot(nu).is_empty();
        for &t in times {
            if !(t > 0.0 && t.is_finite()) {
                return Err(KronError::Domain(format!("averaging time must be positive, got {t}")));
            }
            let status = if nu.is_zero() {
                RowStatus::ZeroVector
            } else if resonant {
                RowStatus::Resonant { value: 1.0 }
            } else {
                let phase = Complex64::from_polar(1.0, initial_phase(nu, theta0));
                let value = (phase * monomial_average(lambda, t)).norm();
                let bound = 2.0 / (t * lambda.abs());
                RowStatus::Checked {
                    value,
                    bound,
                    pass: value <= bound + BOUND_SLACK,
                    near_resonant: lambda.abs() < NEAR_RESONANCE,
                }
            };
            rows.push(EquidistributionRow {
                nu: nu.clone(),
                t,
                omega_dot_nu: lambda,
                status,
            });
        }
    }
    Ok(rows)
}
