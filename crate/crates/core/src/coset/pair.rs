use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use serde::Serialize;

use crate::exact::ProjectiveMatrix;

/// A group G with a distinguished subgroup Γ, given through coset labels.
///
/// Labels are canonical: two elements get the same right label iff they
/// span the same coset Γx, the same left label iff xΓ agrees, and the same
/// class iff ΓxΓ agrees.
pub trait HeckePair: Clone + Send + Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;
    type Class: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn identity(&self) -> Self::Elem;
    /// A generating set of Γ, closed under inverses.
    fn gamma_generators(&self) -> Vec<Self::Elem>;
    /// Canonical label of Γx.
    fn right_label(&self, x: &Self::Elem) -> Self::Elem;
    /// Canonical label of xΓ.
    fn left_label(&self, x: &Self::Elem) -> Self::Elem;
    fn class_of(&self, x: &Self::Elem) -> Self::Class;
}

/// Γ = PSL₂(Z) inside PGL₂(Q).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ModularPair;

/// Double-coset key for PGL₂(Q): Smith ratio plus determinant sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ModularClass {
    pub index: BigInt,
    pub det_sign: i8,
}

impl HeckePair for ModularPair {
    type Elem = ProjectiveMatrix;
    type Class = ModularClass;

    fn mul(&self, a: &ProjectiveMatrix, b: &ProjectiveMatrix) -> ProjectiveMatrix {
        a.multiply(b)
    }

    fn inv(&self, a: &ProjectiveMatrix) -> ProjectiveMatrix {
        a.inverse()
    }

    fn identity(&self) -> ProjectiveMatrix {
        ProjectiveMatrix::identity()
    }

    fn gamma_generators(&self) -> Vec<ProjectiveMatrix> {
        ProjectiveMatrix::gamma_generators()
    }

    fn right_label(&self, x: &ProjectiveMatrix) -> ProjectiveMatrix {
        x.hnf_rep_right()
    }

    fn left_label(&self, x: &ProjectiveMatrix) -> ProjectiveMatrix {
        x.hnf_rep_left()
    }

    fn class_of(&self, x: &ProjectiveMatrix) -> ModularClass {
        ModularClass { index: x.divisor_index().0, det_sign: x.det_sign() }
    }
}
