//! Browser bindings for three views: a two-angle torus orbit, points along a
//! solenoid orbit, and the decay of a time average toward its limit.

use kronecker::dynamics::{average_report, FloatFlow, TrigPolynomial};
use kronecker::frequency::{parse_frequency_text, SigmaSequence};
use kronecker::linalg::{parse_rational, Rational};
use kronecker::precision::Precision;
use kronecker::solenoid::orbit_point;
use kronecker::torus::TorusPoint;
use wasm_bindgen::prelude::*;

const TURN: f64 = std::f64::consts::TAU;

/// `steps + 1` samples of the first two angles (in turns) of `Φ^t(0)` for
/// `t ∈ [0, t_max]`, flattened as `x0, y0, x1, y1, …`.
pub fn torus_orbit_points(spec: &str, t_max: f64, steps: u32) -> Result<Vec<f64>, String> {
    if !(t_max > 0.0 && t_max.is_finite()) || steps == 0 {
        return Err("need t_max > 0 and steps > 0".into());
    }
    let fv = parse_frequency_text(spec).map_err(|e| e.to_string())?;
    let n = fv.effective_depth(2);
    if n < 2 {
        return Err("the orbit view needs at least two frequencies".into());
    }
    let flow = FloatFlow::new(&fv, &TorusPoint::origin(2), 2, Precision::default()).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * (steps as usize + 1));
    for k in 0..=steps {
        let t = t_max * f64::from(k) / f64::from(steps);
        out.extend(flow.at(t).iter().map(|a| a / TURN));
    }
    Ok(out)
}

/// First `depth` coordinates (in turns) of the solenoid orbit at the exact
/// times `k·step`, `k = 0..count`, flattened row by row.
pub fn solenoid_orbit_points(a: &str, step: &str, count: u32, depth: u32) -> Result<Vec<f64>, String> {
    let value: serde_json::Value = serde_json::from_str(a).map_err(|e| format!("a: {e}"))?;
    let a = SigmaSequence::from_json(&value, "a").map_err(|e| e.to_string())?;
    let step = parse_rational(step).map_err(|e| e.to_string())?;
    if depth == 0 {
        return Err("depth must be positive".into());
    }
    let mut out = Vec::with_capacity((count * depth) as usize);
    for k in 0..count {
        let t = &step * Rational::from_integer(k.into());
        out.extend(orbit_point(&a, &t, depth as usize).turns());
    }
    Ok(out)
}

/// Rows `T, |value − limit|, bound` of the time average of `poly` along the
/// orbit of the origin.
pub fn average_decay_rows(spec: &str, poly: &str, times: &[f64]) -> Result<Vec<f64>, String> {
    let fv = parse_frequency_text(spec).map_err(|e| e.to_string())?;
    let value: serde_json::Value = serde_json::from_str(poly).map_err(|e| format!("poly: {e}"))?;
    let p = TrigPolynomial::from_json(&value).map_err(|e| e.to_string())?;
    let origin = TorusPoint::origin(p.max_index().max(1));
    let rows = average_report(&fv, &p, &origin, times, Precision::default()).map_err(|e| e.to_string())?;
    Ok(rows
        .iter()
        .flat_map(|r| [r.t, (r.value - r.limit).abs(), r.bound])
        .collect())
}

#[wasm_bindgen]
pub fn torus_orbit(spec: &str, t_max: f64, steps: u32) -> Result<Vec<f64>, JsValue> {
    torus_orbit_points(spec, t_max, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn solenoid_points(a: &str, step: &str, count: u32, depth: u32) -> Result<Vec<f64>, JsValue> {
    solenoid_orbit_points(a, step, count, depth).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn average_decay(spec: &str, poly: &str, times: Vec<f64>) -> Result<Vec<f64>, JsValue> {
    average_decay_rows(spec, poly, &times).map_err(|e| JsValue::from_str(&e))
}
