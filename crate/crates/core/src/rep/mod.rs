//! Operator-coefficient series over finite models: the representation S,
//! its compression by a subrepresentation, expectations, traces, and the
//! structural identities relating them to classical Hecke operators.

mod checks;
mod ops;
mod phi;
mod series;
mod wandering;

pub use checks::*;
pub use ops::*;
pub use phi::*;
pub use series::OperatorSeries;
pub use wandering::{SubrepProjection, WanderingDecomposition};

#[cfg(test)]
mod tests;
