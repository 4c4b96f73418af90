//! Row-finite invertible integer matrices with a tracked inverse.
//!
//! A matrix is stored on a finite active block `1..=dimension`; outside the
//! block it acts as the identity. Every constructor either builds the inverse
//! by hand (elementary matrices) or checks `A·A⁻¹ = A⁻¹·A = I` exactly.

use std::ops::AddAssign;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::intvec::IntVecFin;
use super::rational::{Int, Rational};
use crate::error::{KronError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowFiniteIntMatrix {
    dimension: usize,
    rows: Vec<IntVecFin>,
    inverse_rows: Vec<IntVecFin>,
}

fn identity_rows(n: usize) -> Vec<IntVecFin> {
    (1..=n).map(IntVecFin::unit).collect()
}

/// Row-major product on an `n`-block: `(AB)_i = Σ_j a_ij · B_j`.
fn mul_rows(a: &[IntVecFin], b: &[IntVecFin]) -> Vec<IntVecFin> {
    a.iter()
        .map(|row| {
            let mut out = IntVecFin::zero();
            for (j, aij) in row.iter() {
                for (k, bjk) in b[j - 1].iter() {
                    out.add_at(k, &(aij * bjk));
                }
            }
            out
        })
        .collect()
}

fn is_identity_rows(rows: &[IntVecFin]) -> bool {
    rows.iter()
        .enumerate()
        .all(|(k, r)| *r == IntVecFin::unit(k + 1))
}

fn transpose_rows(rows: &[IntVecFin]) -> Vec<IntVecFin> {
    let mut out = vec![IntVecFin::zero(); rows.len()];
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter() {
            out[j - 1].set(i + 1, v.clone());
        }
    }
    out
}

impl RowFiniteIntMatrix {
    pub fn identity(dimension: usize) -> Self {
        Self {
            dimension,
            rows: identity_rows(dimension),
            inverse_rows: identity_rows(dimension),
        }
    }

    /// Builds from explicit rows and claimed inverse rows, verifying both
    /// products are the identity on the block.
    pub fn from_parts(
        dimension: usize,
        rows: Vec<IntVecFin>,
        inverse_rows: Vec<IntVecFin>,
    ) -> Result<Self> {
        if rows.len() != dimension || inverse_rows.len() != dimension {
            return Err(KronError::Domain(format!(
                "expected {dimension} rows and {dimension} inverse rows, got {} and {}",
                rows.len(),
                inverse_rows.len()
            )));
        }
        if rows
            .iter()
            .chain(inverse_rows.iter())
            .any(|r| r.max_index() > dimension)
        {
            return Err(KronError::Domain(
                "row support leaves the active block".to_string(),
            ));
        }
        let m = Self {
            dimension,
            rows,
            inverse_rows,
        };
        if !m.verify_inverse() {
            return Err(KronError::Domain(
                "claimed inverse does not invert the matrix".to_string(),
            ));
        }
        Ok(m)
    }

    /// Transposition of coordinates `i` and `j`.
    pub fn swap(dimension: usize, i: usize, j: usize) -> Self {
        let mut rows = identity_rows(dimension);
        rows.swap(i - 1, j - 1);
        Self {
            dimension,
            inverse_rows: rows.clone(),
            rows,
        }
    }

    /// `I + c·e_target·e_sourceᵀ`: adds `c` times coordinate `source` into
    /// coordinate `target`.
    pub fn add_row(dimension: usize, target: usize, source: usize, c: &Int) -> Self {
        assert_ne!(target, source, "add_row needs distinct indices");
        let mut rows = identity_rows(dimension);
        let mut inverse_rows = identity_rows(dimension);
        rows[target - 1].set(source, c.clone());
        inverse_rows[target - 1].set(source, -c);
        Self {
            dimension,
            rows,
            inverse_rows,
        }
    }

    /// Diagonal `±1` matrix flipping the listed coordinates.
    pub fn sign_flip(dimension: usize, indices: &[usize]) -> Self {
        let mut rows = identity_rows(dimension);
        for &i in indices {
            rows[i - 1].set(i, BigInt::from(-1));
        }
        Self {
            dimension,
            inverse_rows: rows.clone(),
            rows,
        }
    }

    /// Permutation with `(Pν)_k = ν_{source[k-1]}`.
    pub fn permutation(source: &[usize]) -> Self {
        let dimension = source.len();
        let rows: Vec<IntVecFin> = source.iter().map(|&s| IntVecFin::unit(s)).collect();
        let inverse_rows = transpose_rows(&rows);
        Self {
            dimension,
            rows,
            inverse_rows,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn row(&self, i: usize) -> IntVecFin {
        if i <= self.dimension {
            self.rows[i - 1].clone()
        } else {
            IntVecFin::unit(i)
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Int {
        if i <= self.dimension {
            self.rows[i - 1].get(j)
        } else if i == j {
            Int::one()
        } else {
            Int::zero()
        }
    }

    pub fn rows(&self) -> &[IntVecFin] {
        &self.rows
    }

    pub fn inverse(&self) -> Self {
        Self {
            dimension: self.dimension,
            rows: self.inverse_rows.clone(),
            inverse_rows: self.rows.clone(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            dimension: self.dimension,
            rows: transpose_rows(&self.rows),
            inverse_rows: transpose_rows(&self.inverse_rows),
        }
    }

    /// Same matrix on a larger block (identity on the new coordinates).
    pub fn extended(&self, dimension: usize) -> Self {
        if dimension <= self.dimension {
            return self.clone();
        }
        let mut out = self.clone();
        for i in self.dimension + 1..=dimension {
            out.rows.push(IntVecFin::unit(i));
            out.inverse_rows.push(IntVecFin::unit(i));
        }
        out.dimension = dimension;
        out
    }

    /// Embeds the matrix so that it acts on coordinates `offset+1..`, with
    /// the identity on `1..=offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        let shift = |rows: &[IntVecFin]| {
            let mut out = identity_rows(offset);
            out.extend(rows.iter().map(|r| r.shifted(offset)));
            out
        };
        Self {
            dimension: self.dimension + offset,
            rows: shift(&self.rows),
            inverse_rows: shift(&self.inverse_rows),
        }
    }

    /// Product `self · other`, with inverse `other⁻¹ · self⁻¹`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.dimension.max(other.dimension);
        let a = self.extended(n);
        let b = other.extended(n);
        Self {
            dimension: n,
            rows: mul_rows(&a.rows, &b.rows),
            inverse_rows: mul_rows(&b.inverse_rows, &a.inverse_rows),
        }
    }

    pub fn is_identity(&self) -> bool {
        is_identity_rows(&self.rows)
    }

    /// `A·A⁻¹ = I` and `A⁻¹·A = I` on the active block, exactly.
    pub fn verify_inverse(&self) -> bool {
        is_identity_rows(&mul_rows(&self.rows, &self.inverse_rows))
            && is_identity_rows(&mul_rows(&self.inverse_rows, &self.rows))
    }

    pub fn apply(&self, v: &IntVecFin) -> IntVecFin {
        let mut out = IntVecFin::zero();
        for (j, x) in v.iter().filter(|(j, _)| *j > self.dimension) {
            out.set(j, x.clone());
        }
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = Int::zero();
            for (j, aij) in row.iter() {
                acc += aij * v.get(j);
            }
            out.set(i + 1, acc);
        }
        out
    }

    /// `A·x` for a column of values indexed `1..=x.len()`, which must cover
    /// the active block. Works for any additive type scaled by integers.
    pub fn apply_generic<T>(&self, x: &[T], scale: impl Fn(&Int, &T) -> T) -> Result<Vec<T>>
    where
        T: Clone + Zero + for<'a> AddAssign<&'a T>,
    {
        if x.len() < self.dimension {
            return Err(KronError::Domain(format!(
                "vector of depth {} does not cover the matrix block of size {}",
                x.len(),
                self.dimension
            )));
        }
        let mut out = x.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = T::zero();
            for (j, aij) in row.iter() {
                acc += &scale(aij, &x[j - 1]);
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn apply_rational(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.apply_generic(x, |a, v| Rational::from_integer(a.clone()) * v)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows_json = |rows: &[IntVecFin]| {
            let map: serde_json::Map<String, serde_json::Value> = rows
                .iter()
                .enumerate()
                .map(|(i, r)| ((i + 1).to_string(), r.to_json()))
                .collect();
            serde_json::Value::Object(map)
        };
        serde_json::json!({
            "dimension": self.dimension,
            "rows": rows_json(&self.rows),
            "inverse_rows": rows_json(&self.inverse_rows),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let dimension = value
            .get("dimension")
            .and_then(|d| d.as_u64())
            .ok_or_else(|| KronError::parse("dimension", "missing or not a count"))?
            as usize;
        let read = |key: &str| -> Result<Vec<IntVecFin>> {
            let obj = value
                .get(key)
                .and_then(|r| r.as_object())
                .ok_or_else(|| KronError::parse(key, "missing sparse row map"))?;
            let mut rows = identity_rows(dimension);
            for (k, r) in obj {
                let i: usize = k
                    .parse()
                    .ok()
                    .filter(|i| (1..=dimension).contains(i))
                    .ok_or_else(|| KronError::parse(key, format!("bad row index {k:?}")))?;
                rows[i - 1] = IntVecFin::from_json(r, key)?;
            }
            Ok(rows)
        };
        Self::from_parts(dimension, read("rows")?, read("inverse_rows")?)
    }
}

impl Serialize for RowFiniteIntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// `compose` as a free function, matching the operation name used elsewhere.
pub fn unimodular_compose(a: &RowFiniteIntMatrix, b: &RowFiniteIntMatrix) -> RowFiniteIntMatrix {
    a.compose(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::int;

    fn arbitrary() -> RowFiniteIntMatrix {
        RowFiniteIntMatrix::add_row(3, 3, 1, &int(4))
            .compose(&RowFiniteIntMatrix::swap(3, 1, 2))
            .compose(&RowFiniteIntMatrix::sign_flip(3, &[2]))
    }

    #[test]
    fn identity_law() {
        let b = arbitrary();
        let c = unimodular_compose(&RowFiniteIntMatrix::identity(3), &b);
        assert_eq!(c, b);
    }

    #[test]
    fn swap_is_involution() {
        let s = RowFiniteIntMatrix::swap(2, 1, 2);
        assert!(s.compose(&s).is_identity());
    }

    #[test]
    fn elementary_inverse_pair() {
        let a = RowFiniteIntMatrix::add_row(2, 2, 1, &int(-1));
        let b = RowFiniteIntMatrix::add_row(2, 2, 1, &int(1));
        let c = a.compose(&b);
        assert!(c.is_identity());
        assert!(c.verify_inverse());
    }

    #[test]
    fn compose_tracks_inverse() {
        let m = arbitrary().compose(&RowFiniteIntMatrix::add_row(5, 1, 5, &int(-7)));
        assert_eq!(m.dimension(), 5);
        assert!(m.verify_inverse());
        assert!(m.compose(&m.inverse()).is_identity());
        assert!(m.transpose().verify_inverse());
    }

    #[test]
    fn permutation_moves_entries() {
        let p = RowFiniteIntMatrix::permutation(&[3, 1, 2]);
        let v = IntVecFin::from_dense(&[10, 20, 30]);
        assert_eq!(p.apply(&v), IntVecFin::from_dense(&[30, 10, 20]));
        assert!(p.verify_inverse());
    }

    #[test]
    fn acts_as_identity_outside_block() {
        let s = RowFiniteIntMatrix::swap(2, 1, 2);
        let v = IntVecFin::from_dense(&[1, 2, 3, 4]);
        assert_eq!(s.apply(&v), IntVecFin::from_dense(&[2, 1, 3, 4]));
        assert_eq!(s.entry(4, 4), int(1));
    }

    #[test]
    fn shifted_embedding() {
        let s = RowFiniteIntMatrix::swap(2, 1, 2).shifted(1);
        let v = IntVecFin::from_dense(&[7, 8, 9]);
        assert_eq!(s.apply(&v), IntVecFin::from_dense(&[7, 9, 8]));
    }

    #[test]
    fn bad_inverse_rejected() {
        let rows = vec![IntVecFin::from_dense(&[1, 1]), IntVecFin::unit(2)];
        let inv = rows.clone();
        assert!(RowFiniteIntMatrix::from_parts(2, rows, inv).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let m = arbitrary();
        let back = RowFiniteIntMatrix::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
    }
}
