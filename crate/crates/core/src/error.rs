use num_bigint::BigInt;
use thiserror::Error;

use crate::colors::Color;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("pochhammer index must be nonnegative, got {0}")]
    NegativePochhammer(i64),

    #[error("denominator constant term {0} is not a unit")]
    NonUnitDenominator(BigInt),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("color {color} is not valid for {algebra}")]
    ColorOutOfRange { color: Color, algebra: String },

    #[error("weight has {got} coordinates, expected {expected}")]
    WeightLength { expected: usize, got: usize },

    #[error("initial condition {0} is not compatible with the algebra")]
    IncompatibleVariant(String),

    #[error("exponent underflow: factor would get exponent {0}")]
    ExponentUnderflow(i64),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("path is empty")]
    EmptyPath,

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: i64, max: i64 },

    #[error("monomial is not admissible: {0}")]
    NotAdmissible(String),

    #[error("tilde pair not adjacent after sorting in {0}")]
    TildePairBroken(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
