//! Discontinuous Galerkin and finite-volume schemes for periodic 1D linear
//! advection, together with an exact Taylor-table engine that derives the
//! equations each modal coefficient actually evolves under.

pub mod analysis;
pub mod dg_operator;
pub mod error;
pub mod exact_taylor;
pub mod fv_reference;
pub mod mesh_basis;
pub mod time_integrator;

pub use error::{Error, Result};
