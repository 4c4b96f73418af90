//! Flow evaluation, averages of trigonometric polynomials along orbits, and
//! numeric witnesses for density and confinement.

pub mod averages;
pub mod flow;
pub mod probes;
pub mod trig;

pub use averages::{
    average_report, equidistribution_report, haar_average, monomial_average, sampled_time_average, time_average,
    AverageRow, EquidistributionRow, RowStatus, TimeAverage,
};
pub use flow::{flow, trajectory, trajectory_csv, FloatFlow, Time};
pub use probes::{minimality_probe, resonance_witness, ProbeConfig, ProbeOutcome, WitnessReport};
pub use trig::TrigPolynomial;
