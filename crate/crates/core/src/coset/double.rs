use std::collections::{BTreeMap, HashSet, VecDeque};
use std::sync::OnceLock;

use crate::error::{HeckeError, Result};
use crate::exact::ProjectiveMatrix;
use crate::par::{self, Execution};

use super::pair::{HeckePair, ModularClass, ModularPair};

pub const DEFAULT_CAP: usize = 1_000_000;

/// Which coset family of ΓσΓ to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Cosets Γx (labels from `right_label`).
    Left,
    /// Cosets xΓ (labels from `left_label`).
    Right,
}

/// BFS orbit closure of the label of σ under Γ acting on the free side.
pub fn coset_closure<P: HeckePair>(pair: &P, sigma: &P::Elem, side: Side, cap: usize) -> Result<Vec<P::Elem>> {
    let class = pair.class_of(sigma);
    let gens = pair.gamma_generators();
    let label = |x: &P::Elem| match side {
        Side::Left => pair.right_label(x),
        Side::Right => pair.left_label(x),
    };
    let start = label(sigma);
    let mut seen: HashSet<P::Elem> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = match side {
                Side::Left => pair.mul(&x, g),
                Side::Right => pair.mul(g, &x),
            };
            let y = label(&y);
            if seen.contains(&y) {
                continue;
            }
            if pair.class_of(&y) != class {
                return Err(HeckeError::Internal(format!("label {y:?} left its double coset")));
            }
            if seen.len() >= cap {
                return Err(HeckeError::CapExceeded { what: "coset labels", cap });
            }
            seen.insert(y.clone());
            queue.push_back(y);
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// ΓσΓ with lazily filled, internally synchronized decompositions.
pub struct DoubleCoset<P: HeckePair = ModularPair> {
    pair: P,
    base: P::Elem,
    class: P::Class,
    cap: usize,
    left: OnceLock<Result<Vec<P::Elem>>>,
    right: OnceLock<Result<Vec<P::Elem>>>,
}

impl<P: HeckePair> Clone for DoubleCoset<P> {
    fn clone(&self) -> Self {
        DoubleCoset {
            pair: self.pair.clone(),
            base: self.base.clone(),
            class: self.class.clone(),
            cap: self.cap,
            left: self.left.clone(),
            right: self.right.clone(),
        }
    }
}

impl<P: HeckePair> std::fmt::Debug for DoubleCoset<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DoubleCoset").field("base", &self.base).field("class", &self.class).finish()
    }
}

impl<P: HeckePair> DoubleCoset<P> {
    pub fn in_pair(pair: P, base: P::Elem) -> Self {
        let class = pair.class_of(&base);
        DoubleCoset { pair, base, class, cap: DEFAULT_CAP, left: OnceLock::new(), right: OnceLock::new() }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self.left = OnceLock::new();
        self.right = OnceLock::new();
        self
    }

    pub fn pair(&self) -> &P {
        &self.pair
    }

    pub fn base(&self) -> &P::Elem {
        &self.base
    }

    pub fn class(&self) -> &P::Class {
        &self.class
    }

    pub fn contains(&self, x: &P::Elem) -> bool {
        self.pair.class_of(x) == self.class
    }

    /// Labels of the cosets Γx contained in ΓσΓ, sorted.
    pub fn left_reps(&self) -> Result<&[P::Elem]> {
        self.left
            .get_or_init(|| coset_closure(&self.pair, &self.base, Side::Left, self.cap))
            .as_deref()
            .map_err(Clone::clone)
    }

    /// Labels of the cosets xΓ contained in ΓσΓ, sorted.
    pub fn right_reps(&self) -> Result<&[P::Elem]> {
        self.right
            .get_or_init(|| coset_closure(&self.pair, &self.base, Side::Right, self.cap))
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn decompose(&self, side: Side) -> Result<&[P::Elem]> {
        match side {
            Side::Left => self.left_reps(),
            Side::Right => self.right_reps(),
        }
    }

    /// Equal numbers of left and right cosets.
    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.left_reps()?.len() == self.right_reps()?.len())
    }
}

impl DoubleCoset<ModularPair> {
    pub fn new(sigma: ProjectiveMatrix) -> Self {
        Self::in_pair(ModularPair, sigma)
    }

    /// Γ·diag(1, n)·Γ.
    pub fn of_index(n: i64) -> Self {
        Self::new(ProjectiveMatrix::diag(1, n))
    }

    pub fn index(&self) -> crate::exact::ElementaryDivisorIndex {
        self.base.divisor_index()
    }
}

pub fn unimodularity_check(sigma: &ProjectiveMatrix) -> Result<bool> {
    DoubleCoset::new(sigma.clone()).is_unimodular()
}

/// One class in a product of double cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTerm<P: HeckePair> {
    pub class: P::Class,
    pub representative: P::Elem,
    /// Number of pairs (i, j) with Γ s_i t_j inside the class.
    pub hits: usize,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeProduct<P: HeckePair> {
    pub terms: Vec<ProductTerm<P>>,
}

impl<P: HeckePair> HeckeProduct<P> {
    /// Classes in the set product, without multiplicities.
    pub fn support(&self) -> Vec<P::Class> {
        self.terms.iter().map(|t| t.class.clone()).collect()
    }

    pub fn multiplicity(&self, class: &P::Class) -> usize {
        self.terms.iter().find(|t| &t.class == class).map_or(0, |t| t.multiplicity)
    }
}

impl HeckeProduct<ModularPair> {
    /// Multiplicity of the positive-determinant class with the given index.
    pub fn multiplicity_of_index(&self, n: u64) -> usize {
        self.multiplicity(&ModularClass { index: n.into(), det_sign: 1 })
    }
}

pub fn hecke_product<P: HeckePair>(a: &DoubleCoset<P>, b: &DoubleCoset<P>) -> Result<HeckeProduct<P>> {
    hecke_product_with(a, b, Execution::default())
}

/// Structure constants of [ΓaΓ]·[ΓbΓ] from all products of left representatives.
pub fn hecke_product_with<P: HeckePair>(a: &DoubleCoset<P>, b: &DoubleCoset<P>, exec: Execution) -> Result<HeckeProduct<P>> {
    let pair = a.pair();
    let s = a.left_reps()?;
    let t = b.left_reps()?;
    let products = par::map_range(exec, s.len() * t.len(), |k| {
        let x = pair.mul(&s[k / t.len()], &t[k % t.len()]);
        (pair.class_of(&x), x)
    });
    let mut hits: BTreeMap<P::Class, (P::Elem, usize)> = BTreeMap::new();
    for (c, x) in products {
        hits.entry(c).or_insert((x, 0)).1 += 1;
    }
    let mut terms = Vec::with_capacity(hits.len());
    for (class, (representative, count)) in hits {
        let size = DoubleCoset::in_pair(pair.clone(), representative.clone()).left_reps()?.len();
        if count % size != 0 {
            return Err(HeckeError::Internal(format!(
                "{count} products land in {class:?} which has {size} cosets"
            )));
        }
        terms.push(ProductTerm { class, representative, hits: count, multiplicity: count / size });
    }
    Ok(HeckeProduct { terms })
}

/// Finite ordered set of right-coset labels of Γ\G.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetWindow<E> {
    labels: Vec<E>,
}

impl<E: Clone + Eq + std::hash::Hash + std::fmt::Debug> CosetWindow<E> {
    pub fn new(labels: Vec<E>) -> Result<Self> {
        let distinct: HashSet<_> = labels.iter().collect();
        if labels.is_empty() || distinct.len() != labels.len() {
            return Err(HeckeError::Precondition("window labels must be nonempty and distinct".into()));
        }
        Ok(CosetWindow { labels })
    }

    /// Breadth-first closure of `start` under x ↦ label(m·x), up to `depth` moves.
    pub fn closure<P: HeckePair<Elem = E>>(pair: &P, start: &[E], moves: &[E], depth: usize) -> Result<Self> {
        let mut labels: Vec<E> = Vec::new();
        let mut seen = HashSet::new();
        for s in start {
            let l = pair.right_label(s);
            if seen.insert(l.clone()) {
                labels.push(l);
            }
        }
        let mut frontier = labels.clone();
        for _ in 0..depth {
            let mut next = Vec::new();
            for x in &frontier {
                for m in moves {
                    let y = pair.right_label(&pair.mul(m, x));
                    if seen.insert(y.clone()) {
                        next.push(y.clone());
                        labels.push(y);
                    }
                }
            }
            frontier = next;
        }
        Self::new(labels)
    }

    pub fn labels(&self) -> &[E] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, e: &E) -> Option<usize> {
        self.labels.iter().position(|l| l == e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeMatrix {
    /// `entries[i][j]`: representatives s with Γ s·w_j = Γ w_i.
    pub entries: Vec<Vec<u64>>,
    /// Per column, representatives whose image falls outside the window.
    pub overflow: Vec<u64>,
}

/// Classical double-coset operator restricted to a window: column j counts
/// the cosets Γ s_k w_j over left representatives s_k of the double coset.
pub fn hecke_matrix<P: HeckePair>(dc: &DoubleCoset<P>, window: &CosetWindow<P::Elem>) -> Result<HeckeMatrix> {
    let pair = dc.pair();
    let reps = dc.left_reps()?;
    let n = window.len();
    let mut entries = vec![vec![0u64; n]; n];
    let mut overflow = vec![0u64; n];
    for (j, w) in window.labels().iter().enumerate() {
        for s in reps {
            match window.position(&pair.right_label(&pair.mul(s, w))) {
                Some(i) => entries[i][j] += 1,
                None => overflow[j] += 1,
            }
        }
    }
    Ok(HeckeMatrix { entries, overflow })
}
