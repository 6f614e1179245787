//! Exact arithmetic for h-deformed noncommutative binary forms.
//!
//! The base algebra has generators `x_i, y_i` for integer indices, with the
//! commutation rules of a braided module algebra over the quantum group
//! `U_h(sl(2))`. On top of the normal-form engine the crate builds brackets,
//! forms and their coefficients, polarization, the symbolic method, twisted
//! localization, radical extensions, differentials and an Abel-type identity
//! pipeline. Every comparison is exact.

pub mod abel;
pub mod acceptance;
pub mod action;
pub mod bracket;
pub mod constants;
pub mod diff;
pub mod error;
pub mod ext;
pub mod forms;
pub mod linsolve;
pub mod localization;
pub mod oracle;
pub mod parse;
pub mod pbw;
pub mod report;
pub mod polarize;
pub mod ring;
pub mod scalar;
pub mod solvers;
pub mod symbolic;

pub use error::{Error, Result};
pub use pbw::{Generator, Index, Kind, Monomial, PBWPoly, Slot};
pub use scalar::{CycRat, Scalar};
