use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::Rng;

use crate::coset::{DoubleCoset, HeckePair};
use crate::error::{HeckeError, Result};
use crate::exact::{DenseMatrix, CQ};

use super::series::OperatorSeries;
use super::wandering::{SubrepProjection, WanderingDecomposition};

/// S_p(A) = Σ_{θ∈A} ρ(θ⁻¹)⊗B_p(θ); with the identity projection this is S(A).
pub fn build_s(wd: &WanderingDecomposition, sp: &SubrepProjection, set: &[usize]) -> OperatorSeries {
    let model = wd.model();
    let mut out = OperatorSeries::zero(wd.dim());
    for &theta in set {
        out.add_term(model.inv(theta), &sp.block(wd, theta));
    }
    out
}

/// Σ_γ ρ(γ)⊗P_Lπ₀(γ⁻¹)P_L, i.e. S_p(Γ).
pub fn build_p_series(wd: &WanderingDecomposition, sp: &SubrepProjection) -> OperatorSeries {
    build_s(wd, sp, wd.model().gamma())
}

/// Σ_{θ∈A} P_Lπ(θ)pP_L, which is ε̃(S_p(A)).
pub fn gram_a(wd: &WanderingDecomposition, sp: &SubrepProjection, set: &[usize]) -> DenseMatrix {
    set.iter().fold(DenseMatrix::zeros(wd.dim(), wd.dim()), |acc, &t| &acc + &sp.block(wd, t))
}

/// Exact test that Y commutes with π(γ) for all γ ∈ Γ.
pub fn commutes_with_gamma(wd: &WanderingDecomposition, y: &DenseMatrix) -> bool {
    let n = wd.points();
    wd.model().gamma().iter().all(|&g| (0..n).all(|x| (0..n).all(|z| y.get(wd.act(g, x), wd.act(g, z)) == y.get(x, z))))
}

/// Y ↦ Σ_γ ρ(γ⁻¹)⊗P_Lπ(γ)YP_L, the identification of π(Γ)' with R(Γ)⊗B(L).
pub fn operator_to_series(wd: &WanderingDecomposition, y: &DenseMatrix) -> OperatorSeries {
    let model = wd.model();
    let f = wd.fundamental();
    let mut out = OperatorSeries::zero(wd.dim());
    for &g in model.gamma() {
        let gi = model.inv(g);
        let block = DenseMatrix::from_fn(f.len(), f.len(), |i, j| y.get(wd.act(gi, f[i]), f[j]).clone());
        out.add_term(gi, &block);
    }
    out
}

/// Inverse of `operator_to_series` on Γ-supported series.
pub fn series_to_operator(wd: &WanderingDecomposition, x: &OperatorSeries) -> Result<DenseMatrix> {
    let model = wd.model();
    let f = wd.fundamental();
    let mut y = DenseMatrix::zeros(wd.points(), wd.points());
    for (&g, block) in x.terms() {
        if !model.in_gamma(g) {
            return Err(HeckeError::Precondition("series must be supported in Γ".into()));
        }
        for &eta in model.gamma() {
            for i in 0..f.len() {
                for j in 0..f.len() {
                    let row = wd.act(eta, wd.act(g, f[i]));
                    y.set(row, wd.act(eta, f[j]), block.get(i, j).clone());
                }
            }
        }
    }
    Ok(y)
}

/// Ψ_A(Y) = Σ_{vΓ ⊆ A} π(v)Yπ(v)⁻¹ for Y in the commutant of π(Γ).
pub fn psi_adjoint_action(wd: &WanderingDecomposition, dc_rep: usize, y: &DenseMatrix) -> Result<DenseMatrix> {
    if !commutes_with_gamma(wd, y) {
        return Err(HeckeError::Precondition("X does not commute with π(Γ)".into()));
    }
    let dc = DoubleCoset::in_pair(wd.pair().clone(), dc_rep);
    let n = wd.points();
    let mut out = DenseMatrix::zeros(n, n);
    for &v in dc.right_reps()? {
        for x in 0..n {
            for z in 0..n {
                out.add_at(wd.act(v, x), wd.act(v, z), y.get(x, z));
            }
        }
    }
    Ok(out)
}

/// p(Σ_γ π(γ)Yπ(γ)⁻¹)p for a random Gaussian-integer Y with entries in [−2, 2].
pub fn random_commutant<R: Rng + ?Sized>(wd: &WanderingDecomposition, sp: &SubrepProjection, rng: &mut R) -> DenseMatrix {
    let n = wd.points();
    let y = DenseMatrix::from_fn(n, n, |_, _| {
        CQ::new(BigRational::from_integer(rng.gen_range(-2..=2).into()), BigRational::from_integer(rng.gen_range(-2..=2).into()))
    });
    let mut avg = DenseMatrix::zeros(n, n);
    for &g in wd.model().gamma() {
        for x in 0..n {
            for z in 0..n {
                avg.add_at(wd.act(g, x), wd.act(g, z), y.get(x, z));
            }
        }
    }
    match sp.matrix() {
        Some(p) => &(p * &avg) * p,
        None => avg,
    }
}

/// E(a·x·b) computed term by term, keeping only products that land in Γ.
pub fn expect_product3<P: HeckePair<Elem = usize>>(
    pair: &P,
    a: &OperatorSeries,
    x: &OperatorSeries,
    b: &OperatorSeries,
) -> Result<OperatorSeries> {
    if a.block_dim() != x.block_dim() || x.block_dim() != b.block_dim() {
        return Err(HeckeError::BlockDimMismatch { left: a.block_dim(), right: b.block_dim() });
    }
    let e = pair.right_label(&pair.identity());
    let mut out = OperatorSeries::zero(a.block_dim());
    for (g1, ba) in a.terms() {
        for (g2, bx) in x.terms() {
            let g21 = pair.mul(g2, g1);
            let mut ax: Option<DenseMatrix> = None;
            for (g3, bb) in b.terms() {
                let g = pair.mul(g3, &g21);
                if pair.right_label(&g) != e {
                    continue;
                }
                let ax = ax.get_or_insert_with(|| ba * bx);
                out.add_term(g, &(&*ax * bb));
            }
        }
    }
    Ok(out)
}

/// pΣ_γπ(γ)l for l ∈ L given in the basis F; a Γ-invariant vector of C^X.
pub fn invariant_lift(wd: &WanderingDecomposition, sp: &SubrepProjection, l: &[CQ]) -> Vec<CQ> {
    let n = wd.points();
    let mut v = vec![CQ::zero(); n];
    for &g in wd.model().gamma() {
        for (i, c) in l.iter().enumerate() {
            v[wd.act(g, wd.fundamental()[i])] += c;
        }
    }
    match sp.matrix() {
        Some(p) => p.mul_vec(&v),
        None => v,
    }
}

/// Classical Hecke operator Σ_{vΓ ⊆ A} π(v) on vectors of C^X.
pub fn hecke_on_vector(wd: &WanderingDecomposition, dc_rep: usize, v: &[CQ]) -> Result<Vec<CQ>> {
    let dc = DoubleCoset::in_pair(wd.pair().clone(), dc_rep);
    let mut out = vec![CQ::zero(); v.len()];
    for &s in dc.right_reps()? {
        for (x, c) in v.iter().enumerate() {
            out[wd.act(s, x)] += c;
        }
    }
    Ok(out)
}

/// Σ_{θ ∈ σ₃Γσ₁ ∩ σ₄Γσ₂} P_Lπ(θ)pP_L.
pub fn cosets_scalar_product(wd: &WanderingDecomposition, sp: &SubrepProjection, sigma: [usize; 4]) -> DenseMatrix {
    let model = wd.model();
    let a: BTreeSet<usize> = model.sandwich(sigma[2], model.gamma(), sigma[0]).into_iter().collect();
    let b: BTreeSet<usize> = model.sandwich(sigma[3], model.gamma(), sigma[1]).into_iter().collect();
    let both: Vec<usize> = a.intersection(&b).copied().collect();
    gram_a(wd, sp, &both)
}

/// Block Gram matrix [Σ_{θ∈a_i⁻¹Γa_j} B_p(θ)]_{ij} over a family of elements.
pub fn coset_gram(wd: &WanderingDecomposition, sp: &SubrepProjection, family: &[usize]) -> DenseMatrix {
    let model = wd.model();
    let m = wd.dim();
    let blocks: Vec<Vec<DenseMatrix>> = family
        .iter()
        .map(|&ai| family.iter().map(|&aj| gram_a(wd, sp, &model.sandwich(model.inv(ai), model.gamma(), aj))).collect())
        .collect();
    DenseMatrix::from_fn(family.len() * m, family.len() * m, |r, c| blocks[r / m][c / m].get(r % m, c % m).clone())
}
