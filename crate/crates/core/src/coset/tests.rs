use std::collections::BTreeSet;

use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::exact::random::{random_gamma, random_matrix};
use crate::exact::ProjectiveMatrix;
use crate::par::Execution;

fn m(e: [i64; 4]) -> ProjectiveMatrix {
    ProjectiveMatrix::from_i64(e)
}

/// Primitive upper-triangular matrices of determinant n in reduced form.
fn classical_reps(n: i64) -> BTreeSet<ProjectiveMatrix> {
    let mut out = BTreeSet::new();
    for a in 1..=n {
        if n % a != 0 {
            continue;
        }
        let d = n / a;
        for b in 0..d {
            if a.gcd(&b).gcd(&d) == 1 {
                out.insert(m([a, b, 0, d]));
            }
        }
    }
    out
}

#[test]
fn index_two_decomposition() {
    let dc = DoubleCoset::of_index(2);
    let reps: Vec<_> = dc.left_reps().unwrap().to_vec();
    let want: Vec<_> = vec![m([1, 0, 0, 2]), m([1, 1, 0, 2]), m([2, 0, 0, 1])];
    let got: BTreeSet<_> = reps.into_iter().collect();
    assert_eq!(got, want.into_iter().collect());
    assert_eq!(DoubleCoset::of_index(1).left_reps().unwrap(), &[ProjectiveMatrix::identity()]);
}

#[test]
fn left_reps_match_classical_list() {
    for n in [2, 3, 4, 5, 6, 8, 9, 12, 25] {
        let dc = DoubleCoset::of_index(n);
        let got: BTreeSet<_> = dc.left_reps().unwrap().iter().cloned().collect();
        assert_eq!(got, classical_reps(n), "n = {n}");
        assert_eq!(dc.right_reps().unwrap().len(), got.len());
    }
}

#[test]
fn prime_counts() {
    for p in [2, 3, 5, 7, 11] {
        let dc = DoubleCoset::of_index(p);
        assert_eq!(dc.left_reps().unwrap().len(), p as usize + 1);
        assert_eq!(dc.right_reps().unwrap().len(), p as usize + 1);
    }
}

#[test]
fn sampled_elements_land_in_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sigma = m([1, 1, 0, 4]);
    let dc = DoubleCoset::new(sigma.clone());
    let left: BTreeSet<_> = dc.left_reps().unwrap().iter().cloned().collect();
    let right: BTreeSet<_> = dc.right_reps().unwrap().iter().cloned().collect();
    for _ in 0..200 {
        let x = random_gamma(&mut rng, 10).multiply(&sigma).multiply(&random_gamma(&mut rng, 10));
        assert!(left.contains(&x.hnf_rep_right()));
        assert!(right.contains(&x.hnf_rep_left()));
    }
}

#[test]
fn negative_determinant_class() {
    let dc = DoubleCoset::new(m([1, 0, 0, -2]));
    assert_eq!(dc.left_reps().unwrap().len(), 3);
    assert!(dc.left_reps().unwrap().iter().all(|r| r.det_sign() == -1));
    assert_ne!(dc.class(), DoubleCoset::of_index(2).class());
}

#[test]
fn unimodular_on_random_sigma() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        assert!(unimodularity_check(&random_matrix(&mut rng, 12)).unwrap());
    }
}

#[test]
fn cap_is_enforced() {
    let dc = DoubleCoset::of_index(7).with_cap(4);
    assert!(matches!(dc.left_reps(), Err(crate::error::HeckeError::CapExceeded { .. })));
}

#[test]
fn product_examples() {
    let t2 = DoubleCoset::of_index(2);
    let sq = hecke_product(&t2, &t2).unwrap();
    assert_eq!(sq.terms.len(), 2);
    assert_eq!(sq.multiplicity_of_index(4), 1);
    assert_eq!(sq.multiplicity_of_index(1), 3);
    let t4 = DoubleCoset::of_index(4);
    let p = hecke_product(&t2, &t4).unwrap();
    assert_eq!(p.multiplicity_of_index(8), 1);
    assert_eq!(p.multiplicity_of_index(2), 2);
    assert_eq!(p.terms.len(), 2);
    let e = DoubleCoset::of_index(1);
    let p = hecke_product(&e, &t4).unwrap();
    assert_eq!(p.terms.len(), 1);
    assert_eq!(p.multiplicity_of_index(4), 1);
    // T₂·T₃ = T₆ for coprime indices.
    let p = hecke_product(&t2, &DoubleCoset::of_index(3)).unwrap();
    assert_eq!(p.support().len(), 1);
    assert_eq!(p.multiplicity_of_index(6), 1);
}

#[test]
fn product_is_execution_independent() {
    let a = DoubleCoset::of_index(3);
    let b = DoubleCoset::of_index(9);
    assert_eq!(
        hecke_product_with(&a, &b, Execution::Parallel).unwrap(),
        hecke_product_with(&a, &b, Execution::Sequential).unwrap()
    );
}

#[test]
fn product_is_associative() {
    for p in [2i64, 3] {
        let classes: Vec<i64> = vec![1, p, p * p, p * p * p];
        for &x in &classes[1..3] {
            for &y in &classes[1..3] {
                for &z in &classes[1..2] {
                    let (dx, dy, dz) = (DoubleCoset::of_index(x), DoubleCoset::of_index(y), DoubleCoset::of_index(z));
                    let expand = |left: &HeckeProduct<ModularPair>, right_first: bool| {
                        let mut acc = std::collections::BTreeMap::new();
                        for t in &left.terms {
                            let mid = DoubleCoset::new(t.representative.clone());
                            let prod = if right_first { hecke_product(&dx, &mid) } else { hecke_product(&mid, &dz) };
                            for u in prod.unwrap().terms {
                                *acc.entry(u.class).or_insert(0) += u.multiplicity * t.multiplicity;
                            }
                        }
                        acc
                    };
                    let lhs = expand(&hecke_product(&dx, &dy).unwrap(), false);
                    let rhs = expand(&hecke_product(&dy, &dz).unwrap(), true);
                    assert_eq!(lhs, rhs, "({x}·{y})·{z}");
                }
            }
        }
    }
}

#[test]
fn identity_class_acts_trivially_on_window() {
    let pair = ModularPair;
    let t2 = DoubleCoset::of_index(2);
    let window = CosetWindow::closure(&pair, &[ProjectiveMatrix::identity()], t2.left_reps().unwrap(), 2).unwrap();
    let h = hecke_matrix(&DoubleCoset::of_index(1), &window).unwrap();
    for i in 0..window.len() {
        for j in 0..window.len() {
            assert_eq!(h.entries[i][j], u64::from(i == j));
        }
    }
    assert!(h.overflow.iter().all(|&o| o == 0));
}

#[test]
fn window_matrix_matches_direct_relabeling() {
    let pair = ModularPair;
    let t2 = DoubleCoset::of_index(2);
    let window = CosetWindow::closure(&pair, &[ProjectiveMatrix::identity()], t2.left_reps().unwrap(), 2).unwrap();
    // depth 0: e; depth 1: 3 cosets of index 2; depth 2 adds index 4 (4 of them) and e again.
    assert_eq!(window.len(), 1 + 3 + 6);
    let h = hecke_matrix(&t2, &window).unwrap();
    let classical: Vec<_> = classical_reps(2).into_iter().collect();
    for (j, w) in window.labels().iter().enumerate() {
        let mut col = vec![0u64; window.len()];
        let mut out = 0;
        for s in &classical {
            match window.labels().iter().position(|l| *l == s.multiply(w).hnf_rep_right()) {
                Some(i) => col[i] += 1,
                None => out += 1,
            }
        }
        for i in 0..window.len() {
            assert_eq!(h.entries[i][j], col[i]);
        }
        assert_eq!(h.overflow[j], out);
        assert_eq!(col.iter().sum::<u64>() + out, 3);
    }
}
