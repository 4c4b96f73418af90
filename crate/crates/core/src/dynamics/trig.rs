//! Real trigonometric polynomials `Σ a_ν e^{iν·Θ}` with exact complex
//! rational coefficients satisfying `a_{−ν} = conj(a_ν)`.

use std::collections::BTreeMap;

use num_complex::{Complex, Complex64};
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{KronError, Result};
use crate::linalg::rational::{format_rational, parse_rational, rat, to_f64};
use crate::linalg::{IntVecFin, Rational, RowFiniteIntMatrix};

pub type ExactComplex = Complex<Rational>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrigPolynomial {
    coefficients: BTreeMap<IntVecFin, ExactComplex>,
}

fn conj(z: &ExactComplex) -> ExactComplex {
    Complex::new(z.re.clone(), -z.im.clone())
}

impl TrigPolynomial {
    /// Drops zero coefficients and rejects maps violating `a_{−ν} = conj(a_ν)`.
    pub fn new(coefficients: BTreeMap<IntVecFin, ExactComplex>) -> Result<Self> {
        let coefficients: BTreeMap<_, _> = coefficients.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        for (nu, c) in &coefficients {
            let mirror = coefficients.get(&nu.neg()).cloned().unwrap_or_else(ExactComplex::zero);
            if mirror != conj(c) {
                return Err(KronError::validation(
                    "poly",
                    format!("coefficient of {nu} has no conjugate partner at its negative"),
                ));
            }
        }
        Ok(TrigPolynomial { coefficients })
    }

    pub fn constant(c: Rational) -> Self {
        Self::new([(IntVecFin::zero(), Complex::new(c, Rational::zero()))].into()).expect("real constant")
    }

    /// `c·cos(ν·Θ)`.
    pub fn cosine(nu: &IntVecFin, c: Rational) -> Self {
        let half = Complex::new(c * rat(1, 2), Rational::zero());
        Self::from_pair(nu, half)
    }

    /// `c·sin(ν·Θ)`.
    pub fn sine(nu: &IntVecFin, c: Rational) -> Self {
        let coef = Complex::new(Rational::zero(), -c * rat(1, 2));
        Self::from_pair(nu, coef)
    }

    fn from_pair(nu: &IntVecFin, c: ExactComplex) -> Self {
        let mut out = TrigPolynomial::default();
        out.add_term(nu, &c);
        out.add_term(&nu.neg(), &conj(&c));
        out
    }

    fn add_term(&mut self, nu: &IntVecFin, c: &ExactComplex) {
        let e = self.coefficients.entry(nu.clone()).or_insert_with(ExactComplex::zero);
        *e = &*e + c;
        if e.is_zero() {
            self.coefficients.remove(nu);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (nu, c) in &other.coefficients {
            out.add_term(nu, c);
        }
        out
    }

    pub fn coefficients(&self) -> &BTreeMap<IntVecFin, ExactComplex> {
        &self.coefficients
    }

    pub fn coefficient(&self, nu: &IntVecFin) -> ExactComplex {
        self.coefficients.get(nu).cloned().unwrap_or_else(ExactComplex::zero)
    }

    /// Largest coordinate index any monomial touches.
    pub fn max_index(&self) -> usize {
        self.coefficients.keys().map(IntVecFin::max_index).max().unwrap_or(0)
    }

    pub fn evaluate_complex(&self, angles: &[f64]) -> Complex64 {
        self.coefficients
            .iter()
            .map(|(nu, c)| {
                let phase: f64 = nu.iter().map(|(j, v)| v.to_f64().unwrap_or(f64::NAN) * angles[j - 1]).sum();
                complex_f64(c) * Complex64::from_polar(1.0, phase)
            })
            .sum()
    }

    pub fn evaluate(&self, angles: &[f64]) -> f64 {
        self.evaluate_complex(angles).re
    }

    /// `p ∘ A`, i.e. `ν ↦ Aᵀν` on monomials.
    pub fn pullback(&self, a: &RowFiniteIntMatrix) -> Self {
        let at = a.transpose();
        let mut out = TrigPolynomial::default();
        for (nu, c) in &self.coefficients {
            out.add_term(&at.apply(nu), c);
        }
        out
    }

    /// `{"terms": [...]}` where each term is one of `{"const": c}`,
    /// `{"cos": ν, "c": c}`, `{"sin": ν, "c": c}` or `{"nu": ν, "re": x, "im": y}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let items = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| KronError::parse("poly.terms", "expected a list of terms"))?;
        let mut out = TrigPolynomial::default();
        let mut raw = BTreeMap::new();
        for (k, item) in items.iter().enumerate() {
            let field = format!("poly.terms[{k}]");
            let num = |key: &str| -> Result<Rational> {
                match item.get(key) {
                    None => Ok(Rational::zero()),
                    Some(Value::String(s)) => {
                        parse_rational(s).map_err(|e| KronError::parse(format!("{field}.{key}"), e.to_string()))
                    }
                    Some(Value::Number(n)) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("i64").into())),
                    Some(other) => Err(KronError::parse(format!("{field}.{key}"), format!("expected \"p/q\", got {other}"))),
                }
            };
            let vec = |key: &str| IntVecFin::from_json(&item[key], &format!("{field}.{key}"));
            if item.get("const").is_some() {
                out = out.add(&Self::constant(num("const")?));
            } else if item.get("cos").is_some() {
                out = out.add(&Self::cosine(&vec("cos")?, num("c")?));
            } else if item.get("sin").is_some() {
                out = out.add(&Self::sine(&vec("sin")?, num("c")?));
            } else if item.get("nu").is_some() {
                let nu = vec("nu")?;
                let c = Complex::new(num("re")?, num("im")?);
                let e: &mut ExactComplex = raw.entry(nu).or_insert_with(ExactComplex::zero);
                *e = &*e + &c;
            } else {
                return Err(KronError::parse(&field, "expected one of const, cos, sin, nu"));
            }
        }
        let explicit = Self::new(raw)?;
        Ok(out.add(&explicit))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "terms": self
                .coefficients
                .iter()
                .map(|(nu, c)| json!({
                    "nu": nu.to_json(),
                    "re": format_rational(&c.re),
                    "im": format_rational(&c.im),
                }))
                .collect::<Vec<_>>(),
        })
    }
}

pub fn complex_f64(c: &ExactComplex) -> Complex64 {
    Complex64::new(to_f64(&c.re), to_f64(&c.im))
}
