//! Coset decompositions of double cosets, Hecke structure constants, and
//! the Hecke action on finite windows of Γ\G.

mod double;
mod pair;

pub use double::{
    coset_closure, hecke_matrix, hecke_product, hecke_product_with, unimodularity_check, CosetWindow, DoubleCoset,
    HeckeMatrix, HeckeProduct, ProductTerm, Side, DEFAULT_CAP,
};
pub use pair::{HeckePair, ModularClass, ModularPair};

#[cfg(test)]
mod tests;
