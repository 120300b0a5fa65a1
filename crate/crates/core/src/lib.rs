//! Generalized Levin-Wen string-net models for multiplicity-free unitary
//! fusion categories.
//!
//! The crate covers the whole pipeline: category data and its consistency
//! checks ([`category`]), honeycomb geometry ([`lattice`]), vertex and
//! plaquette operators with sparse assembly ([`hamiltonian`]), closed string
//! operators ([`string_op`]), eigen-solving ([`spectrum`]) and operator
//! certificates ([`certify`]). Every numerical property check returns a
//! [`ValidationReport`].

pub mod category;
pub mod certify;
pub mod error;
pub mod hamiltonian;
pub mod lattice;
pub mod par;
pub mod report;
pub mod spectrum;
pub mod string_op;

pub use category::{Category, FKey, FSymbolTable, FusionRing, Label, QuantumDims};
pub use error::{Error, Result};
pub use par::Exec;
pub use report::{ValidationReport, Violation};

/// Default absolute tolerance for residual checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Entries of magnitude below this are dropped from sparse operators.
pub const DROP_TOL: f64 = 1e-14;
