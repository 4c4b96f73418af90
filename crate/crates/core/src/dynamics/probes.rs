//! Numeric witnesses for density of non-resonant orbits and for the
//! confinement of resonant ones.

use serde_json::{json, Value};

use super::flow::FloatFlow;
use crate::error::{KronError, Result};
use crate::frequency::{Coordinates, FrequencyVector, Generator};
use crate::linalg::rational::{format_rational, frac_mod1};
use crate::linalg::{IntVecFin, Rational};
use crate::precision::Precision;
use crate::resonance::{is_resonance, resonance_basis};
use crate::solenoid::Weights;
use crate::torus::TorusPoint;

#[derive(Clone, Debug, PartialEq)]
pub enum ProbeOutcome {
    Hit { t: f64, distance: f64, samples: u64 },
    Timeout { best_t: f64, best_distance: f64, samples: u64 },
}

impl ProbeOutcome {
    pub fn hit_time(&self) -> Option<f64> {
        match self {
            ProbeOutcome::Hit { t, .. } => Some(*t),
            ProbeOutcome::Timeout { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ProbeOutcome::Hit { t, distance, samples } => {
                json!({"verdict": "hit", "t": t, "distance": distance, "samples": samples})
            }
            ProbeOutcome::Timeout { best_t, best_distance, samples } => json!({
                "verdict": "timeout",
                "best_t": best_t,
                "best_distance": best_distance,
                "samples": samples,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeConfig {
    pub epsilon: f64,
    pub t_max: f64,
    /// Grid step; `ε / (4 max_j |ω_j|)` when absent.
    pub step: Option<f64>,
}

/// First grid time `t ≤ T_max` with `d_ρ(Φ^t(0), target) < ε`, `ρ_k = 2^{−k}`.
/// Requires the truncation to be non-resonant.
pub fn minimality_probe(
    fv: &FrequencyVector,
    target: &TorusPoint,
    depth: usize,
    config: &ProbeConfig,
    precision: Precision,
) -> Result<ProbeOutcome> {
    let n = fv.effective_depth(depth);
    if target.depth() < n {
        return Err(KronError::Domain(format!(
            "target has depth {} but the probe needs {n}",
            target.depth()
        )));
    }
    let rank = resonance_basis(fv, n).rank();
    if rank > 0 {
        return Err(KronError::Precondition(format!(
            "frequencies are resonant at depth {n} (rank {rank}); minimality holds only for rationally independent frequencies"
        )));
    }
    if !(config.epsilon > 0.0 && config.t_max >= 0.0 && config.t_max.is_finite()) {
        return Err(KronError::Domain("probe needs ε > 0 and a finite T_max ≥ 0".into()));
    }
    let flow = FloatFlow::new(fv, &TorusPoint::origin(n), n, precision)?;
    let max_omega = flow.omega.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    let step = config.step.unwrap_or(config.epsilon / (4.0 * max_omega));
    if !(step > 0.0 && step.is_finite()) {
        return Err(KronError::Domain(format!("bad probe step {step}")));
    }
    let target = target.truncated(n).turns();
    let weights: Vec<f64> = (1..=n).map(|k| Weights::Geometric(0.5).weight(k)).collect();
    let turn_rates: Vec<f64> = flow.omega.iter().map(|w| w / std::f64::consts::TAU).collect();
    let mut best = (0.0, f64::INFINITY);
    let mut k: u64 = 0;
    loop {
        let t = step * k as f64;
        if t > config.t_max {
            return Ok(ProbeOutcome::Timeout {
                best_t: best.0,
                best_distance: best.1,
                samples: k,
            });
        }
        let d: f64 = turn_rates
            .iter()
            .zip(&target)
            .zip(&weights)
            .map(|((w, x), r)| {
                let diff = (w * t - x).rem_euclid(1.0);
                r * diff.min(1.0 - diff)
            })
            .sum();
        if d < config.epsilon {
            return Ok(ProbeOutcome::Hit {
                t,
                distance: d,
                samples: k + 1,
            });
        }
        if d < best.1 {
            best = (t, d);
        }
        k += 1;
    }
}

/// `θ̌_j(t) = θ̌0_j + t ω_j`, kept symbolic over the generators with the
/// rational part reduced mod 1.
fn symbolic_angle(theta0: &Rational, omega: &Coordinates, t: &Rational) -> Coordinates {
    let mut out: Coordinates = omega.iter().map(|(g, c)| (g.clone(), c * t)).collect();
    let one = out.entry(Generator::one()).or_default();
    *one = frac_mod1(&(&*one + theta0));
    out.retain(|_, c| *c != Rational::default());
    out
}

fn combine(nu: &IntVecFin, angles: &[Coordinates]) -> Coordinates {
    let mut out = Coordinates::new();
    for (j, v) in nu.iter() {
        for (g, c) in &angles[j - 1] {
            let e = out.entry(g.clone()).or_default();
            *e += c * Rational::from_integer(v.clone());
        }
    }
    if let Some(one) = out.get_mut(&Generator::one()) {
        *one = frac_mod1(one);
    }
    out.retain(|_, c| *c != Rational::default());
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    pub constant: bool,
    /// `ν·θ̌0 mod 1`.
    pub invariant: Rational,
    pub samples: usize,
}

impl WitnessReport {
    pub fn to_json(&self) -> Value {
        json!({
            "constant": self.constant,
            "invariant": format_rational(&self.invariant),
            "samples": self.samples,
        })
    }
}

/// Checks exactly that `ν·θ̌(t) mod 1` equals `ν·θ̌0 mod 1` at every sampled
/// time (turns), for `ν` a resonance.
pub fn resonance_witness(
    fv: &FrequencyVector,
    nu: &IntVecFin,
    theta0: &TorusPoint,
    times: &[Rational],
) -> Result<WitnessReport> {
    if nu.is_zero() || !is_resonance(fv, nu) {
        return Err(KronError::Domain(format!("{nu} is not a nonzero resonance of ω")));
    }
    let th = theta0
        .exact_values()
        .ok_or_else(|| KronError::Domain("the witness needs an exact initial point".into()))?;
    let n = nu.max_index();
    if th.len() < n {
        return Err(KronError::Domain(format!("initial point has depth {} below {n}", th.len())));
    }
    let omega: Vec<Coordinates> = (1..=n).map(|j| fv.coordinates(j)).collect();
    let invariant = frac_mod1(&nu.dot_rational(&th[..n]));
    let expected: Coordinates = if invariant == Rational::default() {
        Coordinates::new()
    } else {
        [(Generator::one(), invariant.clone())].into_iter().collect()
    };
    let constant = times.iter().all(|t| {
        let angles: Vec<Coordinates> = th[..n].iter().zip(&omega).map(|(a, w)| symbolic_angle(a, w, t)).collect();
        combine(nu, &angles) == expected
    });
    Ok(WitnessReport {
        constant,
        invariant,
        samples: times.len(),
    })
}
