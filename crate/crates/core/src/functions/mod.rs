//! Variable exponents and `C¹` test functions.

mod exponent;
mod test_function;

pub use exponent::{Region, VariableExponent};
pub use test_function::{smoothstep, smoothstep_derivative, Grad, Monomial, TestFunction, TrigTerm};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionError {
    #[error("exponent must be finite and at least 1, got {0}")]
    ExponentBelowOne(f64),
    #[error("radial profile needs knots starting at radius 0, strictly increasing in radius and value")]
    InvalidProfile,
    #[error("half-space region needs a non-zero normal of the right length")]
    InvalidRegion,
    #[error("bump width must lie in (0, 1), got {0}")]
    AlphaOutOfRange(f64),
    #[error("smoothstep order must be at least 2, got {0}")]
    SmoothstepOrder(u32),
    #[error("scaling factor must lie in (0, 1], got {0}")]
    LambdaOutOfRange(f64),
    #[error("wave and phase vectors differ in length")]
    WaveMismatch,
    #[error("coefficients must be finite")]
    NonFinite,
}
