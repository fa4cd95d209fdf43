use std::collections::BTreeMap;

use crate::coset::HeckePair;
use crate::error::{HeckeError, Result};
use crate::exact::{DenseMatrix, CQ};

/// Finitely supported Σ ρ(g)⊗A_g with square coefficient blocks.
///
/// Multiplication follows ρ(a)ρ(b) = ρ(ba).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSeries<K: Ord = usize> {
    block_dim: usize,
    terms: BTreeMap<K, DenseMatrix>,
}

impl<K: Ord + Clone + std::fmt::Debug> OperatorSeries<K> {
    pub fn zero(block_dim: usize) -> Self {
        OperatorSeries { block_dim, terms: BTreeMap::new() }
    }

    /// ρ(e)⊗A.
    pub fn scalar(identity: K, block: DenseMatrix) -> Self {
        let mut s = Self::zero(block.rows());
        s.add_term(identity, &block);
        s
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn terms(&self) -> &BTreeMap<K, DenseMatrix> {
        &self.terms
    }

    pub fn block(&self, g: &K) -> Option<&DenseMatrix> {
        self.terms.get(g)
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds ρ(g)⊗A, dropping the term if it cancels.
    pub fn add_term(&mut self, g: K, a: &DenseMatrix) {
        assert_eq!(a.rows(), self.block_dim, "block dimension");
        if a.is_zero() {
            return;
        }
        match self.terms.get_mut(&g) {
            Some(b) => {
                *b = &*b + a;
                if b.is_zero() {
                    self.terms.remove(&g);
                }
            }
            None => {
                self.terms.insert(g, a.clone());
            }
        }
    }

    fn check_dim(&self, o: &Self) -> Result<()> {
        if self.block_dim != o.block_dim {
            return Err(HeckeError::BlockDimMismatch { left: self.block_dim, right: o.block_dim });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_dim(o)?;
        let mut out = self.clone();
        for (g, a) in &o.terms {
            out.add_term(g.clone(), a);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&CQ::from_int(-1)))
    }

    pub fn scale(&self, s: &CQ) -> Self {
        let mut out = Self::zero(self.block_dim);
        for (g, a) in &self.terms {
            out.add_term(g.clone(), &a.scale(s));
        }
        out
    }

    /// Σ_g A_g: the character ρ(g) ↦ 1.
    pub fn epsilon_tilde(&self) -> DenseMatrix {
        self.terms.values().fold(DenseMatrix::zeros(self.block_dim, self.block_dim), |acc, a| &acc + a)
    }

    /// Restriction of the support to elements satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(&K) -> bool) -> Self {
        OperatorSeries {
            block_dim: self.block_dim,
            terms: self.terms.iter().filter(|(g, _)| keep(g)).map(|(g, a)| (g.clone(), a.clone())).collect(),
        }
    }
}

impl<K: Ord + Clone + std::fmt::Debug + std::hash::Hash + Eq + Send + Sync> OperatorSeries<K> {
    pub fn multiply<P: HeckePair<Elem = K>>(&self, pair: &P, o: &Self) -> Result<Self> {
        self.check_dim(o)?;
        let mut out = Self::zero(self.block_dim);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(pair.mul(b, a), &(x * y));
            }
        }
        Ok(out)
    }

    /// Block at g is the conjugate transpose of the block at g⁻¹.
    pub fn adjoint<P: HeckePair<Elem = K>>(&self, pair: &P) -> Self {
        OperatorSeries {
            block_dim: self.block_dim,
            terms: self.terms.iter().map(|(g, a)| (pair.inv(g), a.adjoint())).collect(),
        }
    }

    /// Conditional expectation onto the Γ-supported part.
    pub fn cond_expect_gamma<P: HeckePair<Elem = K>>(&self, pair: &P) -> Self {
        let e = pair.identity();
        self.restrict(|g| pair.right_label(g) == pair.right_label(&e))
    }

    /// Trace of the identity block, divided by the block dimension when `normalized`.
    pub fn trace<P: HeckePair<Elem = K>>(&self, pair: &P, normalized: bool) -> CQ {
        let t = self.block(&pair.identity()).map_or_else(CQ::zero, DenseMatrix::trace);
        if normalized {
            t.scale(&num_rational::BigRational::new(1.into(), (self.block_dim as i64).into()))
        } else {
            t
        }
    }
}
