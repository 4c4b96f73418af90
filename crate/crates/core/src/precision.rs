//! Extended-precision evaluation of generator values and exact coordinates.
//!
//! Frequencies are exact rationals over named generators; floats only appear
//! when a generator value (√p, π^k, or a user-given decimal) is multiplied in.
//! Those products are summed at `bits` of mantissa and only then rounded to
//! `f64`, so cancellation between coordinates of the same generator is exact.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::linalg::Rational;

pub const DEFAULT_PRECISION_BITS: usize = 128;
pub const MIN_PRECISION_BITS: usize = 53;

const RM: RoundingMode = RoundingMode::ToEven;

/// Mantissa width used for extended-precision sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision(usize);

impl Precision {
    pub fn bits(self) -> usize {
        self.0
    }

    /// Clamps to at least 53 bits.
    pub fn new(bits: usize) -> Self {
        Precision(bits.max(MIN_PRECISION_BITS))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_PRECISION_BITS)
    }
}

/// Working precision: requested bits plus guard words.
fn working(p: Precision) -> usize {
    p.bits() + 64
}

pub struct BigEval {
    bits: usize,
    consts: Consts,
}

impl BigEval {
    pub fn new(p: Precision) -> Self {
        BigEval {
            bits: working(p),
            consts: Consts::new().expect("astro-float constant cache"),
        }
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_word(0, self.bits)
    }

    pub fn one(&self) -> BigFloat {
        BigFloat::from_word(1, self.bits)
    }

    pub fn rational(&mut self, r: &Rational) -> BigFloat {
        let n = BigFloat::parse(&r.numer().to_string(), Radix::Dec, self.bits, RM, &mut self.consts);
        let d = BigFloat::parse(&r.denom().to_string(), Radix::Dec, self.bits, RM, &mut self.consts);
        n.div(&d, self.bits, RM)
    }

    pub fn sqrt_u64(&mut self, p: u64) -> BigFloat {
        BigFloat::from_u64(p, self.bits).sqrt(self.bits, RM)
    }

    pub fn pi_power(&mut self, k: u32) -> BigFloat {
        let pi = self.consts.pi(self.bits, RM);
        pi.powi(k as usize, self.bits, RM)
    }

    pub fn decimal(&mut self, text: &str) -> Option<BigFloat> {
        let v = BigFloat::parse(text.trim(), Radix::Dec, self.bits, RM, &mut self.consts);
        (!v.is_nan()).then_some(v)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn to_f64(&mut self, x: &BigFloat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        x.format(Radix::Dec, RM, &mut self.consts)
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
            .unwrap_or(f64::NAN)
    }

    /// Decimal rendering at the working precision.
    pub fn to_decimal_string(&mut self, x: &BigFloat) -> String {
        x.format(Radix::Dec, RM, &mut self.consts)
            .unwrap_or_else(|_| "NaN".into())
    }
}
