//! Exact computations on affine-Virasoro Lie algebras 𝔏(g).
//!
//! The crate builds a finite-dimensional simple Lie algebra g from its Cartan
//! matrix (Chevalley basis, integer structure constants, Killing form),
//! assembles 𝔏(g) = g⊗ℂ[t, t⁻¹] ⊕ ℂK₁ ⊕ ℂK₂ ⊕ ⨁ ℂd_m on a finite window of
//! degrees, and solves for derivations, biderivations and commutative post-Lie
//! products by exact linear algebra over ℚ.

pub mod affine;
pub mod biderivation;
pub mod cli;
pub mod derivation;
pub mod error;
pub mod finite;
pub mod lie;
pub mod linalg;
pub mod par;
pub mod postlie;

pub use error::{Error, Result};
pub use linalg::{Rational, SparseMatrix, SparseRow, Subspace};
