//! The flow `Θ_j(t) = Θ0_j + ω_j t mod 2π` and sampled trajectories.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::error::{KronError, Result};
use crate::frequency::FrequencyVector;
use crate::linalg::rational::{frac_mod1, to_f64};
use crate::linalg::Rational;
use crate::precision::Precision;
use crate::torus::{wrap_angle, TorusPoint};

/// A time either in turns (`t = 2π·r`) or as a plain real number.
#[derive(Clone, Debug, PartialEq)]
pub enum Time {
    Turns(Rational),
    Real(f64),
}

impl Time {
    pub fn real(&self) -> f64 {
        match self {
            Time::Turns(r) => TAU * to_f64(r),
            Time::Real(t) => *t,
        }
    }
}

/// Rational multiples of the unit generator for `ω_1..ω_n`, if that is what they are.
pub(crate) fn rational_frequencies(fv: &FrequencyVector, n: usize) -> Option<Vec<Rational>> {
    fv.single_generator(n)
        .filter(|(g, _)| g.is_rational_unit())
        .map(|(_, v)| v)
}

fn checked_depth(fv: &FrequencyVector, theta0: &TorusPoint, depth: usize) -> Result<usize> {
    if depth == 0 {
        return Err(KronError::Domain("depth must be positive".into()));
    }
    let n = fv.effective_depth(depth);
    if theta0.depth() < n {
        return Err(KronError::Domain(format!(
            "initial point has depth {} but the flow needs {n}",
            theta0.depth()
        )));
    }
    Ok(n)
}

/// Float form of the flow with `ω` evaluated once.
#[derive(Clone, Debug)]
pub struct FloatFlow {
    pub omega: Vec<f64>,
    pub theta0: Vec<f64>,
}

impl FloatFlow {
    pub fn new(fv: &FrequencyVector, theta0: &TorusPoint, depth: usize, precision: Precision) -> Result<Self> {
        let n = checked_depth(fv, theta0, depth)?;
        Ok(FloatFlow {
            omega: fv.evaluate_all(n, precision),
            theta0: theta0.truncated(n).angles(),
        })
    }

    pub fn at(&self, t: f64) -> Vec<f64> {
        self.theta0
            .iter()
            .zip(&self.omega)
            .map(|(a, w)| wrap_angle(a + w * t))
            .collect()
    }
}

/// `Φ^t_ω(θ0)` on the first `depth` coordinates. Exact when `θ0` is exact, `t`
/// is in turns and every `ω_j` is rational; float otherwise.
pub fn flow(fv: &FrequencyVector, theta0: &TorusPoint, t: &Time, depth: usize, precision: Precision) -> Result<TorusPoint> {
    let n = checked_depth(fv, theta0, depth)?;
    if let (TorusPoint::Exact(th), Time::Turns(s)) = (theta0, t) {
        if let Some(omega) = rational_frequencies(fv, n) {
            return Ok(TorusPoint::Exact(
                th.iter().zip(&omega).map(|(a, w)| frac_mod1(&(a + w * s))).collect(),
            ));
        }
    }
    let f = FloatFlow::new(fv, theta0, n, precision)?;
    Ok(TorusPoint::Float(f.at(t.real())))
}

/// `steps + 1` equally spaced samples on `[t0, t1]`.
pub fn trajectory(
    fv: &FrequencyVector,
    theta0: &TorusPoint,
    t0: f64,
    t1: f64,
    steps: usize,
    depth: usize,
    precision: Precision,
) -> Result<Vec<(f64, Vec<f64>)>> {
    if !(t0.is_finite() && t1.is_finite()) || t1 < t0 {
        return Err(KronError::Domain(format!("bad time interval [{t0}, {t1}]")));
    }
    let f = FloatFlow::new(fv, theta0, depth, precision)?;
    let h = if steps == 0 { 0.0 } else { (t1 - t0) / steps as f64 };
    Ok((0..=steps)
        .map(|k| {
            let t = if k == steps { t1 } else { t0 + h * k as f64 };
            (t, f.at(t))
        })
        .collect())
}

/// `t,theta_1,…,theta_N` followed by one line per sample.
pub fn trajectory_csv(rows: &[(f64, Vec<f64>)]) -> String {
    let n = rows.first().map_or(0, |r| r.1.len());
    let mut out = String::from("t");
    for j in 1..=n {
        write!(out, ",theta_{j}").expect("string write");
    }
    out.push('\n');
    for (t, angles) in rows {
        write!(out, "{t}").expect("string write");
        for a in angles {
            write!(out, ",{a}").expect("string write");
        }
        out.push('\n');
    }
    out
}
