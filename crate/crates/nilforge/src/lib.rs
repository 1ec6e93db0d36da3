//! Exact computer algebra for commutative nilpotent algebras.
//!
//! The crate covers structure-constant algebras and their pointings, the
//! symmetric form on the unital extension, nil-polynomials, the D-invariant
//! monoid with tube-class counting, normal-form tube equations, matrix
//! realizations of maximal abelian nilpotent subalgebras, and affine
//! homogeneity witnesses. All arithmetic is exact.

pub mod algebra;
pub mod dinv;
pub mod error;
pub mod homog;
pub mod forms;
pub mod interval;
pub mod iso;
pub mod linalg;
pub mod matrix;
pub mod nilpoly;
pub mod poly;
pub mod scalar;
pub mod tube;

pub use error::{Error, Result};
pub use scalar::{FieldTag, Scalar};
