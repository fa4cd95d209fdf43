use nalgebra::{Complex, DMatrix};

use crate::coset::HeckePair;
use crate::error::{HeckeError, Result};
use crate::exact::DenseMatrix;
use crate::finite::FiniteModel;

use super::series::OperatorSeries;

pub const INVERTIBILITY_TOL: f64 = 1e-9;
pub const MULTIPLICATIVITY_TOL: f64 = 1e-8;

type C64 = Complex<f64>;

/// Floating group-algebra element Σ c_g ρ(g) of a finite group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAlgebraElement {
    pub coeffs: Vec<C64>,
}

impl GroupAlgebraElement {
    /// Right-regular matrix Σ c_g R_g with R_g δ_h = δ_{hg}, so that products
    /// of matrices follow ρ(a)ρ(b) = ρ(ba).
    pub fn matrix(&self, model: &FiniteModel) -> DMatrix<C64> {
        let n = model.order();
        let mut m = DMatrix::zeros(n, n);
        for (g, c) in self.coeffs.iter().enumerate() {
            if *c != C64::new(0.0, 0.0) {
                for h in 0..n {
                    m[(model.mul(h, g), h)] += c;
                }
            }
        }
        m
    }

    pub fn from_matrix(model: &FiniteModel, m: &DMatrix<C64>) -> Self {
        let e = model.identity();
        GroupAlgebraElement { coeffs: (0..model.order()).map(|g| m[(model.mul(e, g), e)]).collect() }
    }

    pub fn multiply(&self, model: &FiniteModel, o: &Self) -> Self {
        Self::from_matrix(model, &(self.matrix(model) * o.matrix(model)))
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// E_N(x) = Σ_g ρ(g)·Tr(A_g), raw block trace.
pub fn expectation_n(model: &FiniteModel, x: &OperatorSeries) -> GroupAlgebraElement {
    let mut coeffs = vec![C64::new(0.0, 0.0); model.order()];
    for (&g, a) in x.terms() {
        let (re, im) = a.trace().to_f64();
        coeffs[g] += C64::new(re, im);
    }
    GroupAlgebraElement { coeffs }
}

/// Φ(pmp) = ζ^{−1/2}E_N(pmp)ζ^{−1/2} with ζ = E_N(p).
#[derive(Clone, Debug)]
pub struct PhiCompression {
    model: FiniteModel,
    inv_sqrt: DMatrix<C64>,
    pub min_eigenvalue: f64,
}

impl PhiCompression {
    pub fn new(model: &FiniteModel, p_series: &OperatorSeries) -> Result<Self> {
        let zeta = expectation_n(model, p_series).matrix(model);
        let herm = (&zeta + zeta.adjoint()) * C64::new(0.5, 0.0);
        let eig = herm.symmetric_eigen();
        let min_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eigenvalue <= INVERTIBILITY_TOL {
            return Err(HeckeError::ExpectationNotInvertible);
        }
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(1.0 / l.sqrt(), 0.0)));
        let inv_sqrt = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
        Ok(PhiCompression { model: model.clone(), inv_sqrt, min_eigenvalue })
    }

    pub fn apply(&self, x: &OperatorSeries) -> GroupAlgebraElement {
        let e = expectation_n(&self.model, x).matrix(&self.model);
        GroupAlgebraElement::from_matrix(&self.model, &(&self.inv_sqrt * e * &self.inv_sqrt))
    }

    /// ζ^{−1/2}·g·ζ^{−1/2} for a group-algebra element g.
    pub fn conjugate(&self, g: &GroupAlgebraElement) -> GroupAlgebraElement {
        GroupAlgebraElement::from_matrix(&self.model, &(&self.inv_sqrt * g.matrix(&self.model) * &self.inv_sqrt))
    }

    /// max |Φ(a)Φ(b) − Φ(ab)| over coefficients.
    pub fn multiplicativity_defect<P: HeckePair<Elem = usize>>(
        &self,
        pair: &P,
        a: &OperatorSeries,
        b: &OperatorSeries,
    ) -> Result<f64> {
        let ab = a.multiply(pair, b)?;
        Ok(self.apply(a).multiply(&self.model, &self.apply(b)).max_abs_diff(&self.apply(&ab)))
    }
}

/// Σ λ_i U_i p U_i* for unitary series U_i and positive weights λ_i summing to one.
pub fn convex_average<P: HeckePair<Elem = usize>>(
    pair: &P,
    p_series: &OperatorSeries,
    unitaries: &[OperatorSeries],
    weights: &[f64],
) -> Result<OperatorSeries> {
    if unitaries.len() != weights.len() || weights.iter().any(|&w| w <= 0.0) {
        return Err(HeckeError::Precondition("one positive weight per unitary".into()));
    }
    let total: f64 = weights.iter().sum();
    let mut out = OperatorSeries::zero(p_series.block_dim());
    for (u, &w) in unitaries.iter().zip(weights) {
        let term = u.multiply(pair, p_series)?.multiply(pair, &u.adjoint(pair))?;
        let ratio = num_rational::BigRational::from_float(w / total)
            .ok_or_else(|| HeckeError::Precondition("weights must be finite".into()))?;
        out = out.add(&term.scale(&crate::exact::CQ::real(ratio)))?;
    }
    Ok(out)
}

/// Σ_{θ∈A} ρ(θ)·Tr(B_p(θ)), the scalar shadow of S_p(A).
pub fn trace_series(model: &FiniteModel, blocks: impl IntoIterator<Item = (usize, DenseMatrix)>) -> GroupAlgebraElement {
    let mut coeffs = vec![C64::new(0.0, 0.0); model.order()];
    for (theta, b) in blocks {
        let (re, im) = b.trace().to_f64();
        coeffs[theta] += C64::new(re, im);
    }
    GroupAlgebraElement { coeffs }
}
