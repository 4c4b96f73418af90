pub mod benjamin_ono;
pub mod classification;
pub mod dynamics;
pub mod error;
pub mod frequency;
pub mod linalg;
pub mod precision;
pub mod primes;
pub mod resonance;
pub mod solenoid;
pub mod torus;

pub use error::{KronError, Result};
