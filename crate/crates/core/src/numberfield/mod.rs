//! Exact arithmetic in a number field given by a nice basis and its integer
//! structure constants.

mod bareiss;
mod element;
mod poly;
mod spec;
mod table;

pub use bareiss::{solve_integer, solve_rational};
pub use element::{IntElement, RatElement};
pub use poly::MinimalPolynomial;
pub use spec::{BasisSpec, SpecError};
pub use table::{CheckOutcome, StructureTable, ValidationReport, EMBEDDING_TOLERANCE, ROOT_TOLERANCE};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("minimal polynomial must be monic")]
    NotMonic,
    #[error("minimal polynomial must have degree at least 1")]
    DegreeTooSmall,
    #[error("{alpha} is not a root of the polynomial (residual {residual:e})")]
    NotARoot { alpha: f64, residual: f64 },
    #[error("structure table is empty")]
    EmptyTable,
    #[error("malformed structure table: {0}")]
    MalformedTable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("nonzero element has no inverse: the table does not describe a field")]
    NotAField,
}
