//! Exact Taylor-table algebra over ℚ(√3, √5).
//!
//! Modal coefficients of a smooth solution are written as formal series in
//! the derivatives of `u` at the cell centre. Feeding those series through a
//! coefficient update stencil yields the modified equation that the
//! coefficient actually follows, with every coefficient kept exact.

mod basis;
mod modified;
mod qf;
mod series;

pub use basis::{
    basis_moments, basis_moments_with_order, exact_basis, mass_diagonal, monomial_integral,
    ExactPoly,
};
pub use modified::{
    as_modified_pde, correction_series, correction_series_with_order, derivative_name,
    modified_equation, modified_pde, term_at_h_power, time_rate_name, InterfaceMode,
    ModifiedPde, PdeTerm, StencilSpec, MIN_ORDER,
};
pub use num::BigRational;
pub use qf::{format_rational, rat, Qf};
pub use series::{combine, DerivativeSeries, DEFAULT_ORDER};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TaylorError {
    #[error("truncation order {order} exhausted (needed order {requested}); raise the order")]
    TruncationExhausted { requested: usize, order: usize },
    #[error("shift offset {0} outside [-1, 1] cells")]
    OffsetOutOfRange(String),
    #[error("series h-bookkeeping mismatch: {0} vs {1}")]
    ShiftMismatch(i32, i32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a single-term element; only monomial division is supported")]
    NotMonomial(String),
    #[error("derivation failure: coefficient of derivative {derivative} is irrational ({value})")]
    IrrationalCoefficient { derivative: usize, value: String },
    #[error("unsupported basis degree {0}")]
    UnsupportedDegree(usize),
    #[error("empty linear combination")]
    EmptyCombination,
}
