use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{HeckeError, Result};
use crate::exact::{DenseMatrix, CQ};
use crate::finite::{FiniteModel, FinitePair};

/// A finite G-set X on which Γ acts freely, with a transversal F of the
/// Γ-orbits. L is spanned by the point masses on F.
#[derive(Clone, Debug)]
pub struct WanderingDecomposition {
    pair: FinitePair,
    /// `action[g][x]` = g·x.
    action: Arc<Vec<Vec<usize>>>,
    fundamental: Vec<usize>,
    slot: Vec<Option<usize>>,
}

impl WanderingDecomposition {
    /// X = G with left translation and F = the coset transversal of Γ\G.
    pub fn regular(model: &FiniteModel) -> Self {
        let action = model.elements().map(|g| model.elements().map(|x| model.mul(g, x)).collect()).collect();
        Self::koopman(model, model.order(), action, model.reps().to_vec()).expect("regular model is valid")
    }

    /// Koopman model of an action on `points` points; validates that F
    /// meets every Γ-orbit exactly once and that |X| = |F|·|Γ|.
    pub fn koopman(model: &FiniteModel, points: usize, action: Vec<Vec<usize>>, fundamental: Vec<usize>) -> Result<Self> {
        let bad = |s: String| HeckeError::InvalidModel(s);
        if action.len() != model.order() || action.iter().any(|r| r.len() != points || r.iter().any(|&y| y >= points)) {
            return Err(bad("action table must be |G| × |X| with entries in X".into()));
        }
        for g in model.elements() {
            for h in model.elements() {
                let gh = model.mul(g, h);
                if (0..points).any(|x| action[gh][x] != action[g][action[h][x]]) {
                    return Err(bad(format!("not an action at ({g}, {h})")));
                }
            }
        }
        if (0..points).any(|x| action[model.identity()][x] != x) {
            return Err(bad("identity must act trivially".into()));
        }
        let mut orbit_seen = vec![false; points];
        for x in 0..points {
            if orbit_seen[x] {
                continue;
            }
            let orbit: BTreeSet<usize> = model.gamma().iter().map(|&g| action[g][x]).collect();
            let hits = fundamental.iter().filter(|f| orbit.contains(f)).count();
            if hits != 1 {
                return Err(HeckeError::NotFundamentalDomain { orbit: orbit.into_iter().collect(), hits });
            }
            for &y in &orbit {
                orbit_seen[y] = true;
            }
        }
        if fundamental.len() * model.gamma().len() != points {
            return Err(bad(format!("|F|·|Γ| = {} but |X| = {points}", fundamental.len() * model.gamma().len())));
        }
        let mut slot = vec![None; points];
        for (i, &f) in fundamental.iter().enumerate() {
            slot[f] = Some(i);
        }
        Ok(WanderingDecomposition { pair: FinitePair::new(model.clone()), action: Arc::new(action), fundamental, slot })
    }

    pub fn pair(&self) -> &FinitePair {
        &self.pair
    }

    pub fn model(&self) -> &FiniteModel {
        self.pair.model()
    }

    pub fn points(&self) -> usize {
        self.slot.len()
    }

    pub fn fundamental(&self) -> &[usize] {
        &self.fundamental
    }

    pub fn dim(&self) -> usize {
        self.fundamental.len()
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    /// Position of x in F, if x ∈ F.
    pub fn slot(&self, x: usize) -> Option<usize> {
        self.slot[x]
    }

    /// π(g) as a permutation matrix on C^X.
    pub fn pi(&self, g: usize) -> DenseMatrix {
        let n = self.points();
        let mut m = DenseMatrix::zeros(n, n);
        for x in 0..n {
            m.set(self.act(g, x), x, CQ::one());
        }
        m
    }

    /// P_L as a matrix on C^X.
    pub fn projection_l(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.points(), self.points(), |x, y| {
            if x == y && self.slot[x].is_some() {
                CQ::one()
            } else {
                CQ::zero()
            }
        })
    }

    /// Exact checks that π(γ)L ⊥ L for γ ≠ e and Σ_γ π(γ)P_Lπ(γ)⁻¹ = 1.
    pub fn verify(&self) -> bool {
        let model = self.model();
        let orthogonal = model
            .gamma()
            .iter()
            .filter(|&&g| g != model.identity())
            .all(|&g| self.fundamental.iter().all(|&f| self.slot[self.act(g, f)].is_none()));
        let mut cover = vec![0usize; self.points()];
        for &g in model.gamma() {
            for &f in &self.fundamental {
                cover[self.act(g, f)] += 1;
            }
        }
        orthogonal && cover.iter().all(|&c| c == 1)
    }
}

/// Orthogonal projection p on C^X commuting with π(G). `None` stands for
/// the identity so that large Koopman models never store a dense identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubrepProjection {
    matrix: Option<DenseMatrix>,
    pub commutes_with_g: bool,
}

impl SubrepProjection {
    pub fn identity() -> Self {
        SubrepProjection { matrix: None, commutes_with_g: true }
    }

    /// Validated projection: p² = p = p* and pπ(g) = π(g)p for all g.
    pub fn from_matrix(wd: &WanderingDecomposition, p: DenseMatrix) -> Result<Self> {
        if p.rows() != wd.points() || !p.is_square() {
            return Err(HeckeError::Precondition("projection must act on C^X".into()));
        }
        if &p * &p != p || p.adjoint() != p {
            return Err(HeckeError::Precondition("p must be an orthogonal projection".into()));
        }
        for g in wd.model().elements() {
            let pi = wd.pi(g);
            if &pi * &p != &p * &pi {
                return Err(HeckeError::Precondition(format!("p does not commute with π({g})")));
            }
        }
        Ok(SubrepProjection { matrix: Some(p), commutes_with_g: true })
    }

    /// (1/|K|) Σ_{k∈K} χ(k)·R_k on the regular model, where R_k δ_h = δ_{hk}
    /// and χ is a ±1 character of K given per element (all +1 if `None`).
    pub fn right_average(wd: &WanderingDecomposition, k: &[usize], character: Option<&[i64]>) -> Result<Self> {
        let model = wd.model();
        if wd.points() != model.order() {
            return Err(HeckeError::Precondition("right averages need the regular model".into()));
        }
        let w = BigRational::new(1.into(), (k.len() as i64).into());
        let mut p = DenseMatrix::zeros(model.order(), model.order());
        for (idx, &kk) in k.iter().enumerate() {
            let c = CQ::real(&w * BigRational::from_integer(character.map_or(1, |c| c[idx]).into()));
            for h in model.elements() {
                p.add_at(model.mul(h, kk), h, &c);
            }
        }
        Self::from_matrix(wd, p)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_none()
    }

    pub fn matrix(&self) -> Option<&DenseMatrix> {
        self.matrix.as_ref()
    }

    /// Entry p[x][y].
    pub fn entry(&self, x: usize, y: usize) -> CQ {
        match &self.matrix {
            Some(m) => m.get(x, y).clone(),
            None if x == y => CQ::one(),
            None => CQ::zero(),
        }
    }

    pub fn dense(&self, n: usize) -> DenseMatrix {
        self.matrix.clone().unwrap_or_else(|| DenseMatrix::identity(n))
    }

    /// Compressed block B_p(θ) = P_L π(θ) p P_L on the basis F.
    pub fn block(&self, wd: &WanderingDecomposition, theta: usize) -> DenseMatrix {
        let inv = wd.model().inv(theta);
        let f = wd.fundamental();
        DenseMatrix::from_fn(f.len(), f.len(), |i, j| self.entry(wd.act(inv, f[i]), f[j]))
    }
}
