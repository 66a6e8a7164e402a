use thiserror::Error;

use crate::exact_taylor::TaylorError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mesh needs at least one cell")]
    EmptyMesh,
    #[error("unsupported basis degree {0} (supported: 0, 1, 2)")]
    UnsupportedDegree(usize),
    #[error("degree mismatch: field has degree {field}, operator expects {expected}")]
    DegreeMismatch { field: usize, expected: usize },
    #[error("mesh mismatch: {0} cells vs {1} cells")]
    MeshMismatch(usize, usize),
    #[error("non-finite function sample in cell {cell} at x = {x}")]
    NonFiniteSample { cell: usize, x: f64 },
    #[error("point {0} lies outside [0, 1]")]
    OutOfDomain(f64),
    #[error("cell index {index} out of range for {cells} cells")]
    CellIndex { index: usize, cells: usize },
    #[error("the matrix form only encodes the upwind flux")]
    MatrixPathNeedsUpwind,
    #[error("non-finite state after step {step}")]
    NonFiniteState { step: usize },
    #[error("invalid time step {0}")]
    InvalidTimeStep(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Taylor(#[from] TaylorError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
