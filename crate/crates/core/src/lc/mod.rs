//! Truncated generalized Laurent series in one infinitesimal ε: exact
//! arithmetic, order-of-magnitude grading, and the non-Archimedean total
//! order.

mod coeff;
mod number;
mod text;

pub use coeff::{format_float, format_rational, int, ratio, rational_to_f64, Coefficient, Mode, Rational};
pub use number::{Grade, LcNumber, Valuation, DEFAULT_WINDOW};
pub use text::parse_rational;

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LcError {
    #[error("mixed exact and float coefficients")]
    ModeMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("eps exponent must be at least 1, got {0}")]
    InvalidExponent(i64),
    #[error("window must be positive, got {0}")]
    InvalidWindow(u32),
    #[error("float comparison is indeterminate within 2^-40 relative")]
    IndeterminateComparison,
    #[error("value is not finite")]
    NonFinite,
    #[error("at byte {position}: expected {expected}, found {found:?}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },
}
