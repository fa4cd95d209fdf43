use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::coset::{DoubleCoset, HeckePair};
use crate::error::HeckeError;
use crate::exact::{DenseMatrix, CQ};
use crate::finite::standard::{self, perm};
use crate::finite::FiniteModel;

fn random_series(model: &FiniteModel, dim: usize, rng: &mut ChaCha8Rng) -> OperatorSeries {
    let mut s = OperatorSeries::zero(dim);
    for _ in 0..4 {
        let g = rng.gen_range(0..model.order());
        let b = DenseMatrix::from_fn(dim, dim, |_, _| CQ::from_int(rng.gen_range(-3..=3)));
        s.add_term(g, &b);
    }
    s
}

#[test]
fn s_of_gamma_is_unit() {
    for m in standard::all() {
        let wd = WanderingDecomposition::regular(&m);
        let s = build_s(&wd, &SubrepProjection::identity(), m.gamma());
        assert_eq!(s, OperatorSeries::scalar(m.identity(), DenseMatrix::identity(wd.dim())));
        assert_eq!(build_p_series(&wd, &SubrepProjection::identity()), s);
    }
}

#[test]
fn s3_transposition_coset_gives_swap() {
    let m = standard::s3_a3();
    let wd = WanderingDecomposition::regular(&m);
    let t = m.element_of_perm(&perm(3, &[&[0, 1]])).unwrap();
    let eps = build_s(&wd, &SubrepProjection::identity(), &m.right_coset(t)).epsilon_tilde();
    // Two cosets Γ and Γ(01); multiplying by anything in Γ(01) swaps them.
    assert_eq!(eps, DenseMatrix::from_i64(&[vec![0, 1], vec![1, 0]]));
}

#[test]
fn series_axioms() {
    let m = standard::s4_s3();
    let pair = crate::finite::FinitePair::new(m.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let unit = OperatorSeries::scalar(m.identity(), DenseMatrix::identity(3));
    for _ in 0..20 {
        let x = random_series(&m, 3, &mut rng);
        let y = random_series(&m, 3, &mut rng);
        let z = random_series(&m, 3, &mut rng);
        assert_eq!(x.multiply(&pair, &unit).unwrap(), x);
        assert_eq!(x.adjoint(&pair).adjoint(&pair), x);
        let xy = x.multiply(&pair, &y).unwrap();
        assert_eq!(xy.adjoint(&pair), y.adjoint(&pair).multiply(&pair, &x.adjoint(&pair)).unwrap());
        assert_eq!(xy.multiply(&pair, &z).unwrap(), x.multiply(&pair, &y.multiply(&pair, &z).unwrap()).unwrap());
        assert_eq!(xy.trace(&pair, false), y.multiply(&pair, &x).unwrap().trace(&pair, false));
        assert_eq!(xy.epsilon_tilde(), &x.epsilon_tilde() * &y.epsilon_tilde());
    }
    assert!(matches!(
        OperatorSeries::<usize>::zero(2).multiply(&pair, &OperatorSeries::zero(3)),
        Err(HeckeError::BlockDimMismatch { .. })
    ));
    assert_eq!(unit.trace(&pair, true), CQ::one());
    assert_eq!(unit.trace(&pair, false), CQ::from_int(3));
}

#[test]
fn conditional_expectation_properties() {
    let m = standard::s4_s3();
    let pair = crate::finite::FinitePair::new(m.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let x = random_series(&m, 2, &mut rng);
        let e = x.cond_expect_gamma(&pair);
        assert_eq!(e.cond_expect_gamma(&pair), e);
        assert_eq!(e.trace(&pair, false), x.trace(&pair, false));
        let a = random_series(&m, 2, &mut rng).cond_expect_gamma(&pair);
        let b = random_series(&m, 2, &mut rng).cond_expect_gamma(&pair);
        let axb = a.multiply(&pair, &x).unwrap().multiply(&pair, &b).unwrap();
        assert_eq!(axb.cond_expect_gamma(&pair), a.multiply(&pair, &e).unwrap().multiply(&pair, &b).unwrap());
    }
    let wd = WanderingDecomposition::regular(&m);
    let other = m.classes().into_iter().find(|&c| !m.in_gamma(c)).unwrap();
    let s = build_s(&wd, &SubrepProjection::identity(), &m.double_coset(other));
    assert!(s.cond_expect_gamma(&pair).is_zero());
    assert!(s.trace(&pair, false).is_zero());
}

#[test]
fn psi_of_identity_counts_cosets() {
    for m in standard::all() {
        let wd = WanderingDecomposition::regular(&m);
        let n = wd.points();
        for c in m.classes() {
            let k = DoubleCoset::in_pair(wd.pair().clone(), c).right_reps().unwrap().len();
            let psi = psi_adjoint_action(&wd, c, &DenseMatrix::identity(n)).unwrap();
            assert_eq!(psi, DenseMatrix::identity(n).scale(&CQ::from_int(k as i64)));
            // The theorem with X = 1.
            let one = operator_to_series(&wd, &DenseMatrix::identity(n));
            let case = verify_theorem_expectation(&wd, &SubrepProjection::identity(), c, &one).unwrap();
            assert!(case.adjointed);
        }
        let not_commuting = DenseMatrix::from_fn(n, n, |i, j| CQ::from_int(i64::from(i == 0 && j == 1)));
        assert!(psi_adjoint_action(&wd, m.identity(), &not_commuting).is_err());
    }
}

#[test]
fn theorem_on_identity_class_returns_x() {
    let m = standard::s3_c2();
    let wd = WanderingDecomposition::regular(&m);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (_, sp) in projection_catalogue(&wd) {
        let x = operator_to_series(&wd, &random_commutant(&wd, &sp, &mut rng));
        let s = build_s(&wd, &sp, m.gamma());
        let lhs = expect_product3(wd.pair(), &s, &x, &s.adjoint(wd.pair())).unwrap();
        assert_eq!(lhs, x);
    }
}

#[test]
fn theorem_rejects_non_commutant() {
    let m = standard::s3_a3();
    let wd = WanderingDecomposition::regular(&m);
    let t = m.element_of_perm(&perm(3, &[&[0, 1]])).unwrap();
    let off_gamma = OperatorSeries::scalar(t, DenseMatrix::identity(wd.dim()));
    let r = verify_theorem_expectation(&wd, &SubrepProjection::identity(), m.identity(), &off_gamma);
    assert!(matches!(r, Err(HeckeError::Precondition(_))));
}

#[test]
fn operator_series_round_trip() {
    for m in standard::all() {
        let wd = WanderingDecomposition::regular(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let y = random_commutant(&wd, &SubrepProjection::identity(), &mut rng);
        let x = operator_to_series(&wd, &y);
        assert_eq!(series_to_operator(&wd, &x).unwrap(), y);
        let y2 = random_commutant(&wd, &SubrepProjection::identity(), &mut rng);
        let x2 = operator_to_series(&wd, &y2);
        assert_eq!(x.multiply(wd.pair(), &x2).unwrap(), operator_to_series(&wd, &(&y * &y2)));
    }
}

#[test]
fn koopman_validation() {
    let m = standard::s3_a3();
    let action: Vec<Vec<usize>> = m.elements().map(|g| m.elements().map(|x| m.mul(g, x)).collect()).collect();
    let g0 = m.gamma()[1];
    let dup = vec![m.identity(), g0];
    match WanderingDecomposition::koopman(&m, m.order(), action.clone(), dup) {
        Err(HeckeError::NotFundamentalDomain { orbit, hits }) => {
            assert_eq!(hits, 2);
            assert_eq!(orbit, m.gamma().to_vec());
        }
        other => panic!("expected rejection, got {other:?}"),
    }
    let wd = WanderingDecomposition::koopman(&m, m.order(), action, m.reps().to_vec()).unwrap();
    assert_eq!(wd.dim() * m.gamma().len(), wd.points());
    assert!(wd.verify());
}

#[test]
fn projections_are_valid_subrepresentations() {
    for m in standard::all() {
        let wd = WanderingDecomposition::regular(&m);
        let unit = unit_trace_projections(&wd);
        assert!(!unit.is_empty(), "{}", m.name());
        for (_, sp) in projection_catalogue(&wd) {
            assert!(sp.commutes_with_g);
        }
    }
    let m = standard::s3_a3();
    let wd = WanderingDecomposition::regular(&m);
    let bad = DenseMatrix::from_fn(6, 6, |i, j| CQ::from_int(i64::from(i == 0 && j == 0)));
    assert!(SubrepProjection::from_matrix(&wd, bad).is_err());
}

#[test]
fn singular_expectation_is_reported() {
    let m = standard::s3_a3();
    let wd = WanderingDecomposition::regular(&m);
    let all: Vec<usize> = m.elements().collect();
    let trivial = SubrepProjection::right_average(&wd, &all, None).unwrap();
    let err = PhiCompression::new(&m, &build_p_series(&wd, &trivial)).unwrap_err();
    assert_eq!(err.to_string(), "expectation not invertible; apply convex averaging");
    let p = build_p_series(&wd, &trivial);
    let unit = OperatorSeries::scalar(m.identity(), DenseMatrix::identity(wd.dim()));
    assert_eq!(convex_average(wd.pair(), &p, &[unit.clone(), unit], &[0.25, 0.75]).unwrap(), p);
}

#[test]
fn compression_is_not_multiplicative_for_nonabelian_gamma() {
    let m = standard::s4_s3();
    assert!(!gamma_is_abelian(&m));
    let wd = WanderingDecomposition::regular(&m);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (_, sp) = unit_trace_projections(&wd).remove(0);
    let phi = PhiCompression::new(&m, &build_p_series(&wd, &sp)).unwrap();
    let a = operator_to_series(&wd, &random_commutant(&wd, &sp, &mut rng));
    let b = operator_to_series(&wd, &random_commutant(&wd, &sp, &mut rng));
    assert!(phi.multiplicativity_defect(wd.pair(), &a, &b).unwrap() > 1.0);
}

#[test]
fn scalar_product_examples() {
    for m in [standard::s3_a3(), standard::s3_c2()] {
        let wd = WanderingDecomposition::regular(&m);
        let e = m.identity();
        let family: Vec<usize> = [vec![], vec![0, 1], vec![0, 2], vec![]]
            .iter()
            .enumerate()
            .map(|(k, c)| match k {
                0 => e,
                3 => m.element_of_perm(&perm(3, &[&[0, 1, 2]])).unwrap(),
                _ => m.element_of_perm(&perm(3, &[c.as_slice()])).unwrap(),
            })
            .collect();
        for (_, sp) in projection_catalogue(&wd) {
            assert_eq!(cosets_scalar_product(&wd, &sp, [e; 4]), gram_a(&wd, &sp, m.gamma()));
            let g = coset_gram(&wd, &sp, &family);
            assert_eq!(g.rows(), 4 * wd.dim());
            assert!(g.is_psd());
        }
    }
}

#[test]
fn lifted_vectors_are_invariant() {
    let m = standard::d4_c2();
    let wd = WanderingDecomposition::regular(&m);
    for (_, sp) in projection_catalogue(&wd) {
        let l: Vec<CQ> = (0..wd.dim()).map(|i| CQ::from_int(i as i64 + 1)).collect();
        let v = invariant_lift(&wd, &sp, &l);
        for &g in m.gamma() {
            assert!((0..v.len()).all(|x| v[wd.act(g, x)] == v[x]));
        }
    }
}

#[test]
fn full_suites_pass_on_small_models() {
    for m in [standard::s3_a3(), standard::d4_c2()] {
        for r in verify_model(&m, 8, 0, crate::par::Execution::Sequential).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
    }
    let _ = crate::finite::FinitePair::new(standard::s3_a3()).identity();
}
