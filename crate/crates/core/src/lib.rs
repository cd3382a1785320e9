//! Exact-arithmetic toolkit for cosymplectic geometry on Lie algebras and
//! mapping tori: structure verification, Reeb and Hamiltonian solvers,
//! type I/II deformations, Wang-sequence Betti numbers, fibration
//! criteria, and toric momentum models.
//!
//! All core computations run over arbitrary-precision rationals, optionally
//! extended by a declared ℚ-linearly-independent symbol set; the single
//! floating-point operation in the crate is the finite-difference residual
//! check for the momentum identity on complex projective space.

pub mod cosymplectic;
pub mod error;
pub mod exterior;
pub mod linalg;
pub mod model;
pub mod scalar;
pub mod scenario;
pub mod topology;
pub mod toric;

pub use error::{Error, Result};
pub use exterior::{Form, JacobiVerdict, LieAlgebra, Vector};
pub use scalar::{Rational, SymbolBasis, SymbolicReal};
