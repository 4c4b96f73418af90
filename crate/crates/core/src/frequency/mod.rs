//! Exact frequency vectors over named, rationally independent generators.

pub mod generator;
pub mod sigma;
pub mod spec;
pub mod vector;

pub use generator::{Generator, GeneratorKind};
pub use sigma::{SigmaSequence, SigmaTail};
pub use spec::{parse_frequency_spec, parse_frequency_text};
pub use vector::{Coordinates, FrequencyRule, FrequencyVector};
