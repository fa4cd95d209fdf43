use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::coset::{DoubleCoset, HeckePair, ModularClass, ModularPair};
use crate::exact::{ProjectiveMatrix, CQ, CQJson};
use crate::par::{self, Execution};
use crate::{HeckeError, Result};

use super::tree::kesten_moment;

pub const SUPPORT_CAP: usize = 100_000;

/// A finitely supported function on PGL₂(Q) with Q(i) values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupportedGroupElement {
    terms: BTreeMap<ProjectiveMatrix, CQ>,
}

impl SupportedGroupElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn delta(g: ProjectiveMatrix) -> Self {
        Self::from_terms([(g, CQ::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ProjectiveMatrix, CQ)>) -> Self {
        let mut x = Self::zero();
        for (g, c) in terms {
            x.add_term(g, &c);
        }
        x
    }

    pub fn terms(&self) -> &BTreeMap<ProjectiveMatrix, CQ> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &ProjectiveMatrix) -> CQ {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn identity_coeff(&self) -> CQ {
        self.coeff(&ProjectiveMatrix::identity())
    }

    pub fn add_term(&mut self, g: ProjectiveMatrix, c: &CQ) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(g) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c.clone());
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (g, c) in &o.terms {
            r.add_term(g.clone(), c);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&CQ::from_int(-1)))
    }

    pub fn scale(&self, c: &CQ) -> Self {
        Self::from_terms(self.terms.iter().map(|(g, v)| (g.clone(), v * c)))
    }

    /// X*(g) = conj X(g⁻¹).
    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(g, v)| (g.inverse(), v.conj())))
    }

    pub fn is_self_adjoint(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn restrict(&self, keep: impl Fn(&ProjectiveMatrix) -> bool) -> Self {
        SupportedGroupElement {
            terms: self.terms.iter().filter(|(g, _)| keep(g)).map(|(g, c)| (g.clone(), c.clone())).collect(),
        }
    }

    pub fn multiply(&self, o: &Self) -> Result<Self> {
        self.multiply_with(o, SUPPORT_CAP, Execution::default())
    }

    /// Convolution (X·Y)(g) = Σ_{ab=g} X(a)Y(b).
    pub fn multiply_with(&self, o: &Self, cap: usize, exec: Execution) -> Result<Self> {
        let left: Vec<(&ProjectiveMatrix, &CQ)> = self.terms.iter().collect();
        let partials = par::map(exec, &left, |(a, x)| {
            o.terms.iter().map(|(b, y)| (a.multiply(b), *x * y)).collect::<Vec<_>>()
        });
        let mut r = Self::zero();
        for part in partials {
            for (g, c) in part {
                r.add_term(g, &c);
            }
            if r.len() > cap {
                return Err(HeckeError::SupportCapExceeded { cap, trajectory: vec![self.len(), o.len(), r.len()] });
            }
        }
        Ok(r)
    }

    /// Pairing τ(X·Y) = Σ_g X(g)Y(g⁻¹).
    pub fn trace_pairing(&self, o: &Self) -> CQ {
        let mut s = CQ::zero();
        for (g, c) in &self.terms {
            if let Some(d) = o.terms.get(&g.inverse()) {
                s += &(c * d);
            }
        }
        s
    }

    pub fn to_json(&self) -> Vec<SupportTermJson> {
        self.terms
            .iter()
            .map(|(g, c)| SupportTermJson { matrix: g.to_string(), coeff: CQJson::from(c) })
            .collect()
    }

    pub fn from_json(items: &[SupportTermJson]) -> Result<Self> {
        let mut x = Self::zero();
        for t in items {
            let g: ProjectiveMatrix = t.matrix.parse()?;
            x.add_term(g, &CQ::try_from(&t.coeff)?);
        }
        Ok(x)
    }
}

/// One entry of the X file: `{"matrix": "a b c d", "coeff": {"re": "p/q", "im": "r/s"}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SupportTermJson {
    pub matrix: String,
    pub coeff: CQJson,
}

/// τ(Xⁿ), the identity coefficient of the n-th convolution power.
pub fn moment_of_x(x: &SupportedGroupElement, n: u32) -> Result<CQ> {
    moment_of_x_with(x, n, SUPPORT_CAP, Execution::default())
}

pub fn moment_of_x_with(x: &SupportedGroupElement, n: u32, cap: usize, exec: Execution) -> Result<CQ> {
    let powers = powers_up_to(x, n.div_ceil(2), cap, exec)?;
    let (a, b) = (n.div_ceil(2) as usize, (n / 2) as usize);
    Ok(powers[a].trace_pairing(&powers[b]))
}

/// [X⁰, X¹, …, X^k] with the support cap enforced.
pub fn powers_up_to(x: &SupportedGroupElement, k: u32, cap: usize, exec: Execution) -> Result<Vec<SupportedGroupElement>> {
    let mut out = vec![SupportedGroupElement::delta(ProjectiveMatrix::identity())];
    let mut trajectory = vec![1];
    for _ in 0..k {
        let next = out.last().unwrap().multiply_with(x, cap, exec).map_err(|e| match e {
            HeckeError::SupportCapExceeded { cap, trajectory: t } => {
                let mut full = trajectory.clone();
                full.push(*t.last().unwrap());
                HeckeError::SupportCapExceeded { cap, trajectory: full }
            }
            other => other,
        })?;
        trajectory.push(next.len());
        out.push(next);
    }
    Ok(out)
}

/// Support class of X, which must lie in one double coset of prime index.
pub fn support_class(x: &SupportedGroupElement) -> Result<(ModularClass, u64)> {
    let pair = ModularPair;
    let mut class: Option<ModularClass> = None;
    for g in x.terms.keys() {
        let c = pair.class_of(g);
        match &class {
            None => class = Some(c),
            Some(k) if *k != c => {
                return Err(HeckeError::Precondition("support is not inside one double coset".into()));
            }
            _ => {}
        }
    }
    let class = class.ok_or_else(|| HeckeError::Precondition("empty support".into()))?;
    let p = class
        .index
        .to_u64()
        .filter(|&p| p >= 2 && is_prime_u64(p))
        .ok_or_else(|| HeckeError::Precondition(format!("double coset index {} is not prime", class.index)))?;
    Ok((class, p))
}

pub fn is_prime_u64(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentRow {
    pub n: u32,
    pub moment: CQJson,
    pub kesten: String,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub p: u64,
    pub tree_degree: u32,
    pub rows: Vec<MomentRow>,
    pub extends: bool,
    pub first_failure: Option<u32>,
    /// X is a finite truncation; the criterion is checked only on the moments listed.
    pub note: String,
}

/// Compares τ(Xⁿ) with the closed-walk counts of the (p+1)-regular tree for n ≤ n_max.
pub fn criterion_check(x: &SupportedGroupElement, n_max: u32) -> Result<CriterionReport> {
    criterion_check_with(x, n_max, Execution::default())
}

pub fn criterion_check_with(x: &SupportedGroupElement, n_max: u32, exec: Execution) -> Result<CriterionReport> {
    if !x.is_self_adjoint() {
        return Err(HeckeError::Precondition("X is not self-adjoint".into()));
    }
    let (_, p) = support_class(x)?;
    let d = (p + 1) as u32;
    let powers = powers_up_to(x, n_max.div_ceil(2), SUPPORT_CAP, exec)?;
    let mut rows = Vec::new();
    let mut first_failure = None;
    for n in 0..=n_max {
        let (a, b) = (n.div_ceil(2) as usize, (n / 2) as usize);
        let m = powers[a].trace_pairing(&powers[b]);
        let k = kesten_moment(d, n);
        let equal = m == CQ::real(BigRational::from_integer(k.clone()));
        if !equal && first_failure.is_none() {
            first_failure = Some(n);
        }
        rows.push(MomentRow { n, moment: CQJson::from(&m), kesten: k.to_string(), equal });
    }
    Ok(CriterionReport {
        p,
        tree_degree: d,
        rows,
        extends: first_failure.is_none(),
        first_failure,
        note: format!("finite support of {} elements; moments checked up to n = {n_max}", x.len()),
    })
}

/// Which part of the support to keep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportLabel {
    /// The coset Γσ.
    GammaCoset(ProjectiveMatrix),
    /// The coset σΓ.
    CosetGamma(ProjectiveMatrix),
    DoubleCoset(ModularClass),
}

pub fn support_projection(x: &SupportedGroupElement, label: &SupportLabel) -> SupportedGroupElement {
    match label {
        SupportLabel::GammaCoset(s) => {
            let l = s.hnf_rep_right();
            x.restrict(|g| g.hnf_rep_right() == l)
        }
        SupportLabel::CosetGamma(s) => {
            let l = s.hnf_rep_left();
            x.restrict(|g| g.hnf_rep_left() == l)
        }
        SupportLabel::DoubleCoset(c) => x.restrict(|g| ModularPair.class_of(g) == *c),
    }
}

/// Projections onto several labels, summed.
pub fn support_projections(x: &SupportedGroupElement, labels: &[SupportLabel]) -> SupportedGroupElement {
    labels.iter().fold(SupportedGroupElement::zero(), |acc, l| acc.add(&support_projection(x, l)))
}

/// The family X_{Γs}: the part of X^e on the coset Γs, where the double coset of s has index p^e.
pub struct CosetFamily<'a> {
    x: &'a SupportedGroupElement,
    p: u64,
    powers: HashMap<u32, SupportedGroupElement>,
}

impl<'a> CosetFamily<'a> {
    pub fn new(x: &'a SupportedGroupElement) -> Result<Self> {
        let (_, p) = support_class(x)?;
        Ok(CosetFamily { x, p, powers: HashMap::new() })
    }

    fn level(&self, s: &ProjectiveMatrix) -> Result<u32> {
        let mut idx = s.divisor_index().0;
        let p = BigInt::from(self.p);
        let mut e = 0;
        while idx > BigInt::one() {
            if !(&idx % &p).is_zero() {
                return Err(HeckeError::Precondition(format!("{s} is not in a double coset of index a power of {}", self.p)));
            }
            idx /= &p;
            e += 1;
        }
        Ok(e)
    }

    fn power(&mut self, e: u32) -> Result<&SupportedGroupElement> {
        if !self.powers.contains_key(&e) {
            let mut y = SupportedGroupElement::delta(ProjectiveMatrix::identity());
            for _ in 0..e {
                y = y.multiply(self.x)?;
            }
            self.powers.insert(e, y);
        }
        Ok(&self.powers[&e])
    }

    /// X_{ΓsΓ}: the part of X^e on the double coset of s.
    pub fn double_coset_part(&mut self, s: &ProjectiveMatrix) -> Result<SupportedGroupElement> {
        let e = self.level(s)?;
        let c = ModularPair.class_of(s);
        Ok(support_projection(self.power(e)?, &SupportLabel::DoubleCoset(c)))
    }

    /// X_{Γs}.
    pub fn coset_part(&mut self, s: &ProjectiveMatrix) -> Result<SupportedGroupElement> {
        let e = self.level(s)?;
        Ok(support_projection(self.power(e)?, &SupportLabel::GammaCoset(s.clone())))
    }
}

/// X_{Γσ₁Γ}·X_{Γσ₂} = Σ_j X_{Γσ₁r_jσ₂} over ΓσΓ = ⊔ Γσ₁r_j.
pub fn multiplicativity_check_part3(
    x: &SupportedGroupElement,
    s1: &ProjectiveMatrix,
    s2: &ProjectiveMatrix,
) -> Result<bool> {
    let mut fam = CosetFamily::new(x)?;
    let lhs = fam.double_coset_part(s1)?.multiply(&fam.coset_part(s2)?)?;
    let mut rhs = SupportedGroupElement::zero();
    for r in DoubleCoset::new(s1.clone()).left_reps()? {
        rhs = rhs.add(&fam.coset_part(&r.multiply(s2))?);
    }
    Ok(lhs == rhs)
}

/// A transversal of the p+1 cosets Γx in the double coset of index p that is closed under inversion.
pub fn inverse_closed_transversal(p: u64) -> Result<Vec<ProjectiveMatrix>> {
    if !is_prime_u64(p) {
        return Err(HeckeError::NotPrime(p));
    }
    let dc = DoubleCoset::of_index(p as i64);
    let labels: Vec<ProjectiveMatrix> = dc.left_reps()?.to_vec();
    // Candidates γh with γ in a small ball, sorted by size so the choice is canonical.
    let mut ball = vec![ProjectiveMatrix::identity()];
    let mut frontier = ball.clone();
    for _ in 0..4 {
        let mut next = Vec::new();
        for g in &frontier {
            for m in ProjectiveMatrix::gamma_generators() {
                let h = m.multiply(g);
                if !ball.contains(&h) {
                    ball.push(h.clone());
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    let mut candidates: Vec<ProjectiveMatrix> =
        labels.iter().flat_map(|h| ball.iter().map(move |g| g.multiply(h))).collect();
    candidates.sort_by_key(|g| (g.max_abs_entry(), g.clone()));
    candidates.dedup();
    let mut chosen: BTreeMap<ProjectiveMatrix, ProjectiveMatrix> = BTreeMap::new();
    // Involutions first, then inverse pairs.
    for g in &candidates {
        let l = g.hnf_rep_right();
        if !chosen.contains_key(&l) && g.multiply(g).is_identity() {
            chosen.insert(l, g.clone());
            break;
        }
    }
    for g in &candidates {
        let (l, li) = (g.hnf_rep_right(), g.inverse().hnf_rep_right());
        if l != li && !chosen.contains_key(&l) && !chosen.contains_key(&li) {
            chosen.insert(l, g.clone());
            chosen.insert(li, g.inverse());
        }
    }
    for g in &candidates {
        let l = g.hnf_rep_right();
        if !chosen.contains_key(&l) && g.multiply(g).is_identity() {
            chosen.insert(l, g.clone());
        }
    }
    if chosen.len() != labels.len() {
        return Err(HeckeError::Internal(format!(
            "found {} of {} coset representatives closed under inversion",
            chosen.len(),
            labels.len()
        )));
    }
    Ok(chosen.into_values().collect())
}

/// Σ δ_s over an inverse-closed transversal of the double coset of index p.
pub fn self_adjoint_coset_sum(p: u64) -> Result<SupportedGroupElement> {
    Ok(SupportedGroupElement::from_terms(inverse_closed_transversal(p)?.into_iter().map(|g| (g, CQ::one()))))
}
