//! Exact linear algebra over ℚ: scalars, sparse rows and matrices, elimination
//! and canonical subspaces.

mod echelon;
mod rational;
mod sparse;
mod subspace;

pub use echelon::{kernel_basis, kernel_by_classes, kernel_by_keys, kernel_of_rows, rank, rref, ClassedKernel, EchelonBuilder};
pub use rational::Rational;
pub use sparse::{canonicalize, dot_dense, get, scale, sub_scaled, SparseMatrix, SparseRow};
pub use subspace::Subspace;
