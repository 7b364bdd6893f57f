//! Exact-arithmetic toolkit for finite-dimensional real graded division
//! algebras: constructions, validation, invariants, and classification into
//! the thirteen weak-isomorphism types, plus endomorphism algebras over a
//! graded division algebra with a dimension function.

pub mod abgroup;
pub mod classify;
pub mod algebra;
pub mod construct;
pub mod division;
pub mod format;
pub mod frames;
pub mod isomap;
pub mod linalg;
pub mod scalar;
pub mod selftest;
pub mod snf;

pub use abgroup::{AbelianGroup, GroupElement, GroupHom};
pub use algebra::{AlgebraError, GradedAlgebra, Subalgebra};
pub use division::{DivisionReport, DivisionType, SigReport};
pub use scalar::Scalar;
