//! Exact and floating-point generalized inverses of square complex matrices
//! constrained to a subspace, with the classical Moore-Penrose and Drazin
//! inverses, oblique projectors, representation cross-checks, and solvers for
//! restricted linear systems.
//!
//! The crate is generic over the scalar backend: [`scalar::GaussQ`] keeps all
//! arithmetic in exact Gaussian rationals, [`scalar::C64`] runs the same
//! algorithms in complex doubles under a relative tolerance.

pub mod bdd;
pub mod error;
pub mod geninv;
pub mod instances;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod report;
pub mod samples;
pub mod scalar;
pub mod solver;
pub mod subspace;
pub mod suites;

pub use error::{Error, Result};
pub use matrix::{IndexSet, Matrix};
pub use scalar::{C64, GaussQ, Scalar};
pub use subspace::Subspace;
