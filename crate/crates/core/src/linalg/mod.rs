//! Exact integer and rational linear algebra.

pub mod intvec;
pub mod kernel;
pub mod matrix;
pub mod rational;

pub use intvec::{gcd_of_vector, IntVecFin};
pub use kernel::{echelonize, hermite_normal_form, integer_kernel};
pub use matrix::{unimodular_compose, RowFiniteIntMatrix};
pub use rational::{format_rational, frac_mod1, parse_rational, Int, Rational};
