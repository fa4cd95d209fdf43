//! Explicit finite groups with a subgroup Γ, given by multiplication table.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coset::HeckePair;
use crate::error::{HeckeError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    name: String,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
    gamma: Vec<usize>,
    gamma_mask: Vec<bool>,
    reps: Vec<usize>,
    right_label: Vec<usize>,
    left_label: Vec<usize>,
    class: Vec<usize>,
    perms: Vec<Vec<usize>>,
}

/// Wire format: `{"order": n, "mul": [[…]], "gamma": […], "reps": […]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteModelJson {
    #[serde(default)]
    pub name: Option<String>,
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    pub gamma: Vec<usize>,
    pub reps: Vec<usize>,
}

type Perm = Vec<usize>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&x| a[x]).collect()
}

fn perm_closure(gens: &[Perm], degree: usize) -> Vec<Perm> {
    let id: Perm = (0..degree).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = compose(g, &x);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

fn cycle(degree: usize, cycles: &[&[usize]]) -> Perm {
    let mut p: Perm = (0..degree).collect();
    for c in cycles {
        for k in 0..c.len() {
            p[c[k]] = c[(k + 1) % c.len()];
        }
    }
    p
}

impl FiniteModel {
    /// Build from permutation generators of G and of Γ ≤ G. Elements are
    /// numbered in lexicographic order of their images, so 0 is the identity.
    pub fn from_permutations(name: &str, degree: usize, g_gens: &[Perm], gamma_gens: &[Perm]) -> Result<Self> {
        let elems = perm_closure(g_gens, degree);
        let index: HashMap<&Perm, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mul = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&compose(a, b)]).collect())
            .collect();
        let mut gamma = Vec::new();
        for p in perm_closure(gamma_gens, degree) {
            gamma.push(*index.get(&p).ok_or_else(|| HeckeError::InvalidModel("Γ not inside G".into()))?);
        }
        let mut m = Self::assemble(name.to_string(), mul, gamma, None)?;
        m.perms = elems;
        Ok(m)
    }

    pub fn from_json(j: &FiniteModelJson) -> Result<Self> {
        if j.mul.len() != j.order || j.mul.iter().any(|r| r.len() != j.order) {
            return Err(HeckeError::InvalidModel("mul must be order × order".into()));
        }
        if j.mul.iter().flatten().any(|&x| x >= j.order) {
            return Err(HeckeError::InvalidModel("mul entry out of range".into()));
        }
        let name = j.name.clone().unwrap_or_else(|| format!("order-{}", j.order));
        Self::assemble(name, j.mul.clone(), j.gamma.clone(), Some(j.reps.clone()))
    }

    pub fn to_json(&self) -> FiniteModelJson {
        FiniteModelJson {
            name: Some(self.name.clone()),
            order: self.order(),
            mul: self.mul.clone(),
            gamma: self.gamma.clone(),
            reps: self.reps.clone(),
        }
    }

    fn assemble(name: String, mul: Vec<Vec<usize>>, gamma: Vec<usize>, reps: Option<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        let bad = |s: &str| HeckeError::InvalidModel(s.to_string());
        let identity = (0..n).find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x)).ok_or_else(|| bad("no identity"))?;
        for a in 0..n {
            let row: BTreeSet<_> = mul[a].iter().collect();
            if row.len() != n {
                return Err(bad("table is not a Latin square"));
            }
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(bad("multiplication is not associative"));
                    }
                }
            }
        }
        let inv: Vec<usize> = (0..n).map(|a| (0..n).find(|&b| mul[a][b] == identity).unwrap()).collect();
        let mut gamma_mask = vec![false; n];
        for &g in &gamma {
            if g >= n {
                return Err(bad("Γ element out of range"));
            }
            gamma_mask[g] = true;
        }
        let mut gamma: Vec<usize> = (0..n).filter(|&g| gamma_mask[g]).collect();
        gamma.sort_unstable();
        if !gamma_mask[identity] || gamma.iter().any(|&a| !gamma_mask[inv[a]] || gamma.iter().any(|&b| !gamma_mask[mul[a][b]])) {
            return Err(bad("Γ is not a subgroup"));
        }
        let right_label: Vec<usize> = (0..n).map(|x| gamma.iter().map(|&g| mul[g][x]).min().unwrap()).collect();
        let left_label: Vec<usize> = (0..n).map(|x| gamma.iter().map(|&g| mul[x][g]).min().unwrap()).collect();
        let class: Vec<usize> = (0..n).map(|x| gamma.iter().map(|&g| left_label[mul[g][x]]).min().unwrap()).collect();
        let canonical: Vec<usize> = (0..n).filter(|&x| right_label[x] == x).collect();
        let reps = match reps {
            None => canonical,
            Some(r) => {
                let hit: BTreeSet<usize> = r.iter().map(|&x| right_label.get(x).copied().unwrap_or(usize::MAX)).collect();
                if r.len() != canonical.len() || hit.len() != r.len() || hit.iter().any(|x| !canonical.contains(x)) {
                    return Err(bad("reps must hit every right coset exactly once"));
                }
                r
            }
        };
        Ok(FiniteModel { name, mul, inv, identity, gamma, gamma_mask, reps, right_label, left_label, class, perms: Vec::new() })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn gamma(&self) -> &[usize] {
        &self.gamma
    }

    pub fn in_gamma(&self, a: usize) -> bool {
        self.gamma_mask[a]
    }

    /// Transversal of Γ\G; its size is the wandering dimension.
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn wandering_dim(&self) -> usize {
        self.reps.len()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn right_label(&self, x: usize) -> usize {
        self.right_label[x]
    }

    pub fn left_label(&self, x: usize) -> usize {
        self.left_label[x]
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class[x]
    }

    /// Element id of a permutation, for models built from permutations.
    pub fn element_of_perm(&self, p: &[usize]) -> Option<usize> {
        self.perms.iter().position(|q| q == p)
    }

    /// Subgroup generated by the given elements, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul[g][x];
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Elements of ΓxΓ, sorted.
    pub fn double_coset(&self, x: usize) -> Vec<usize> {
        let c = self.class[x];
        self.elements().filter(|&y| self.class[y] == c).collect()
    }

    /// Elements of Γx.
    pub fn right_coset(&self, x: usize) -> Vec<usize> {
        self.gamma.iter().map(|&g| self.mul[g][x]).collect()
    }

    /// Elements of xΓ.
    pub fn left_coset(&self, x: usize) -> Vec<usize> {
        self.gamma.iter().map(|&g| self.mul[x][g]).collect()
    }

    /// Sorted product set a·B·c for a subset B.
    pub fn sandwich(&self, a: usize, set: &[usize], c: usize) -> Vec<usize> {
        let s: BTreeSet<usize> = set.iter().map(|&b| self.mul[self.mul[a][b]][c]).collect();
        s.into_iter().collect()
    }

    /// Distinct double-coset classes, each given by its smallest element.
    pub fn classes(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.class.iter().copied().collect();
        s.into_iter().collect()
    }
}

/// The standard test models, all with |G| ≤ 48.
pub mod standard {
    use super::*;

    /// S₃ with Γ = A₃.
    pub fn s3_a3() -> FiniteModel {
        let g = [cycle(3, &[&[0, 1]]), cycle(3, &[&[0, 1, 2]])];
        FiniteModel::from_permutations("S3/A3", 3, &g, &[cycle(3, &[&[0, 1, 2]])]).unwrap()
    }

    /// S₃ with Γ = ⟨(12)⟩.
    pub fn s3_c2() -> FiniteModel {
        let g = [cycle(3, &[&[0, 1]]), cycle(3, &[&[0, 1, 2]])];
        FiniteModel::from_permutations("S3/C2", 3, &g, &[cycle(3, &[&[0, 1]])]).unwrap()
    }

    /// S₄ with Γ = S₃, the stabilizer of a point.
    pub fn s4_s3() -> FiniteModel {
        let g = [cycle(4, &[&[0, 1]]), cycle(4, &[&[0, 1, 2, 3]])];
        let h = [cycle(4, &[&[0, 1]]), cycle(4, &[&[1, 2]])];
        FiniteModel::from_permutations("S4/S3", 4, &g, &h).unwrap()
    }

    /// Dihedral group of the square with Γ generated by a diagonal reflection.
    pub fn d4_c2() -> FiniteModel {
        let r = cycle(4, &[&[0, 1, 2, 3]]);
        let s = cycle(4, &[&[1, 3]]);
        FiniteModel::from_permutations("D4/C2", 4, &[r, s.clone()], &[s]).unwrap()
    }

    pub fn all() -> Vec<FiniteModel> {
        vec![s3_a3(), s3_c2(), s4_s3(), d4_c2()]
    }

    pub fn by_name(name: &str) -> Option<FiniteModel> {
        all().into_iter().find(|m| m.name().eq_ignore_ascii_case(name))
    }

    /// Permutation of the given degree written as disjoint cycles.
    pub fn perm(degree: usize, cycles: &[&[usize]]) -> Vec<usize> {
        cycle(degree, cycles)
    }
}

/// `HeckePair` view of a finite model; every class key is the smallest
/// element of the double coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePair(pub Arc<FiniteModel>);

impl FinitePair {
    pub fn new(model: FiniteModel) -> Self {
        FinitePair(Arc::new(model))
    }

    pub fn model(&self) -> &FiniteModel {
        &self.0
    }
}

impl HeckePair for FinitePair {
    type Elem = usize;
    type Class = usize;

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.0.mul(*a, *b)
    }

    fn inv(&self, a: &usize) -> usize {
        self.0.inv(*a)
    }

    fn identity(&self) -> usize {
        self.0.identity()
    }

    fn gamma_generators(&self) -> Vec<usize> {
        self.0.gamma().to_vec()
    }

    fn right_label(&self, x: &usize) -> usize {
        self.0.right_label(*x)
    }

    fn left_label(&self, x: &usize) -> usize {
        self.0.left_label(*x)
    }

    fn class_of(&self, x: &usize) -> usize {
        self.0.class_of(*x)
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;
    use crate::coset::{hecke_product, DoubleCoset};

    #[test]
    fn standard_models_have_expected_shape() {
        let shapes: Vec<_> = all().iter().map(|m| (m.order(), m.gamma().len(), m.wandering_dim())).collect();
        assert_eq!(shapes, vec![(6, 3, 2), (6, 2, 3), (24, 6, 4), (8, 2, 4)]);
        for m in all() {
            assert_eq!(m.identity(), 0);
            assert_eq!(m.reps().iter().map(|&r| m.right_coset(r).len()).sum::<usize>(), m.order());
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let m = s3_c2();
        let j = m.to_json();
        let back = FiniteModel::from_json(&j).unwrap();
        assert_eq!(back.to_json().mul, m.to_json().mul);
        assert_eq!(back.reps(), m.reps());
        let mut bad = j.clone();
        bad.reps = vec![bad.reps[0], bad.reps[0], bad.reps[1]];
        assert!(FiniteModel::from_json(&bad).is_err());
        let mut bad = j.clone();
        bad.gamma = vec![0, 1, 2];
        assert!(FiniteModel::from_json(&bad).is_err());
        let mut bad = j;
        bad.mul[1].swap(0, 1);
        assert!(FiniteModel::from_json(&bad).is_err());
    }

    #[test]
    fn finite_pair_products_are_integral() {
        for m in all() {
            let pair = FinitePair::new(m.clone());
            let classes = m.classes();
            for &a in &classes {
                for &b in &classes {
                    let pa = DoubleCoset::in_pair(pair.clone(), a);
                    let pb = DoubleCoset::in_pair(pair.clone(), b);
                    assert_eq!(pa.left_reps().unwrap().len() * m.gamma().len(), m.double_coset(a).len());
                    let prod = hecke_product(&pa, &pb).unwrap();
                    // Degrees multiply.
                    let deg: usize = prod
                        .terms
                        .iter()
                        .map(|t| t.multiplicity * m.double_coset(t.class).len() / m.gamma().len())
                        .sum();
                    assert_eq!(deg, pa.left_reps().unwrap().len() * pb.left_reps().unwrap().len());
                }
            }
        }
    }
}
