//! Exact arithmetic: Gaussian rationals, dense matrices over them, and
//! canonical PGL₂(Q) elements.

pub mod dense;
pub mod pgl2;
pub mod random;
pub mod scalar;

pub use dense::DenseMatrix;
pub use pgl2::{smith_divisors, ElementaryDivisorIndex, MatrixJson, ProjectiveMatrix};
pub use scalar::{format_rational, parse_rational, CQJson, CQ};
