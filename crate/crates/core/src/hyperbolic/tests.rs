use std::collections::HashSet;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::coset::DoubleCoset;
use crate::exact::random::{random_gamma, random_matrix, random_of_determinant};
use crate::exact::ProjectiveMatrix;

/// μ-uniform sample of F: x uniform, u = 1/y uniform under the arc.
fn sample_f(rng: &mut impl Rng) -> HPoint {
    let umax = 2.0 / 3f64.sqrt();
    loop {
        let x = rng.gen_range(-0.5..0.5);
        let u: f64 = rng.gen_range(0.0..umax);
        if u > 0.0 && u * u * (1.0 - x * x) <= 1.0 {
            return HPoint::new(x, 1.0 / u);
        }
    }
}

#[test]
fn fundamental_area_matches_quadrature() {
    let q = fundamental_area_by_quadrature(2000);
    let f = HyperbolicPolygon::fundamental_domain();
    assert!((f.area() - q).abs() < 1e-9, "{} vs {}", f.area(), q);
    assert!((fundamental_area() - q).abs() < 1e-9);
}

#[test]
fn clip_to_half_of_fundamental_domain() {
    let f = HyperbolicPolygon::fundamental_domain();
    let left = f.clip(&HalfPlane::LeftOf(0.0));
    assert_eq!(left.vertices().len(), 3);
    assert!(left.vertices().iter().any(|v| v.approx_eq(&HPoint::i())));
    assert!((left.area() - PI / 6.0).abs() < 1e-12);
    let right = f.clip(&HalfPlane::RightOf(0.0));
    assert!((right.area() - PI / 6.0).abs() < 1e-12);
    assert_eq!(f.clip(&HalfPlane::LeftOf(-1.0)).area(), 0.0);
}

#[test]
fn ideal_triangle_area_is_pi() {
    let t = HyperbolicPolygon::new(vec![HPoint::Ideal(-1.0), HPoint::Infinity, HPoint::Ideal(1.0)]);
    assert!((t.area() - PI).abs() < 1e-12);
    let t = HyperbolicPolygon::new(vec![HPoint::Ideal(0.0), HPoint::Ideal(0.5), HPoint::Ideal(1.0)]);
    assert!((t.area() - PI).abs() < 1e-12);
}

#[test]
fn images_of_fundamental_domain_keep_area() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = HyperbolicPolygon::fundamental_domain();
    for k in 0..200 {
        let g = if k % 3 == 0 {
            random_gamma(&mut rng, 12)
        } else if k % 3 == 1 {
            random_matrix(&mut rng, 9)
        } else {
            random_of_determinant(&mut rng, [2i64, 3, 5, 6, 7][k % 5], 6)
        };
        let a = f.image(&g).area();
        assert!((a - PI / 3.0).abs() < 1e-8, "{g:?}: {a}");
    }
}

#[test]
fn reduction_lands_in_fundamental_domain() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let z = HPoint::new(rng.gen_range(-50.0..50.0), rng.gen_range(1e-3..5.0));
        let (w, g) = reduce_to_fundamental(z).unwrap();
        assert!(g.is_in_gamma());
        assert!(in_fundamental_domain(w, 1e-9), "{w:?}");
        assert!(mobius_apply(&g, z).approx_eq(&w) || {
            let v = mobius_apply(&g, z);
            (v.x().unwrap() - w.x().unwrap()).abs() < 1e-8 && (v.y() - w.y()).abs() < 1e-8
        });
    }
    assert!(reduce_to_fundamental(HPoint::Infinity).is_err());
}

#[test]
fn anti_holomorphic_action_stays_in_upper_half_plane() {
    let g = ProjectiveMatrix::from_i64([0, 1, 1, 0]);
    let z = mobius_apply(&g, HPoint::new(0.3, 2.0));
    // z ↦ 1/z̄
    let d = 0.09 + 4.0;
    assert!(z.approx_eq(&HPoint::new(0.3 / d, 2.0 / d)));
}

#[test]
fn phi0_on_modular_group() {
    assert_eq!(phi0(&ProjectiveMatrix::identity()), 1.0);
    assert_eq!(phi0(&ProjectiveMatrix::gen_s()), 0.0);
    assert_eq!(phi0(&ProjectiveMatrix::gen_t()), 0.0);
}

#[test]
fn phi0_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let cases = [
        ProjectiveMatrix::diag(1, 2),
        ProjectiveMatrix::from_i64([1, 1, 0, 2]),
        ProjectiveMatrix::from_i64([2, 1, 1, 3]),
        ProjectiveMatrix::from_i64([1, 0, 1, -2]),
    ];
    let n = 200_000;
    for g in &cases {
        let ginv = g.inverse();
        let hits = (0..n).filter(|_| in_fundamental_domain(mobius_apply(&ginv, sample_f(&mut rng)), 0.0)).count();
        let p = hits as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt().max(1e-4);
        let v = phi0(g);
        assert!((v - p).abs() < 4.0 * se, "{g:?}: clip {v} vs mc {p}");
    }
}

#[test]
fn phi0_is_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..100 {
        let g = random_of_determinant(&mut rng, (k % 7 + 2) as i64, 4);
        assert!((phi0(&g) - phi0(&g.inverse())).abs() < 1e-9);
    }
}

/// All elements within word length `depth` in S, T, T⁻¹.
fn ball(depth: usize) -> HashSet<ProjectiveMatrix> {
    let moves = [ProjectiveMatrix::gen_s(), ProjectiveMatrix::gen_t(), ProjectiveMatrix::gen_t_inv()];
    let mut all = HashSet::from([ProjectiveMatrix::identity()]);
    let mut frontier = vec![ProjectiveMatrix::identity()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for g in &frontier {
            for m in &moves {
                let h = g.multiply(m);
                if all.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    all
}

#[test]
fn tiles_match_ball_scan() {
    let f = HyperbolicPolygon::fundamental_domain();
    let region = f.image(&ProjectiveMatrix::diag(2, 1));
    let planes = region.half_planes();
    let scan: Vec<ProjectiveMatrix> = {
        let mut v: Vec<_> = ball(9)
            .into_iter()
            .filter(|g| f.image(g).clip_all(planes.iter()).area() >= AREA_FLOOR)
            .collect();
        v.sort();
        v
    };
    let found: Vec<ProjectiveMatrix> = tiles_meeting(&region).unwrap().into_iter().map(|t| t.element).collect();
    assert_eq!(found, scan);
}

#[test]
fn tiles_partition_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = HyperbolicPolygon::fundamental_domain();
    for k in 0..10 {
        let g = random_of_determinant(&mut rng, (k % 8 + 2) as i64, 5);
        let hits = tiles_meeting(&f.image(&g)).unwrap();
        let total: f64 = hits.iter().map(|t| t.area).sum();
        assert!((total - PI / 3.0).abs() < 1e-6 * PI, "{g:?}: {total}");
    }
}

#[test]
fn psi0_basic_values() {
    let e = ProjectiveMatrix::identity();
    let v = psi0(&e, &e).unwrap();
    assert!((v.value - 1.0).abs() < 1e-9);
    assert_eq!(v.terms.len(), 1);

    for s in [ProjectiveMatrix::diag(1, 2), ProjectiveMatrix::from_i64([2, 1, 1, 2])] {
        let sum = psi0(&s, &s.inverse()).unwrap();
        let termwise: f64 = sum.terms.iter().map(|t| phi0(&s.multiply(&t.gamma).multiply(&s.inverse()))).sum();
        assert!((sum.value - termwise).abs() < 1e-8, "{} vs {}", sum.value, termwise);
        for t in &sum.terms {
            let direct = phi0(&s.multiply(&t.gamma).multiply(&s.inverse()));
            assert!((t.value - direct).abs() < 1e-8);
        }
    }
}

#[test]
fn double_coset_sum_orders_agree() {
    for p in [2u64, 3] {
        let dc = DoubleCoset::of_index(p as i64);
        let s = double_coset_phi0_sum(&dc).unwrap();
        assert!((s.via_gamma_x - s.via_x_gamma).abs() < 1e-6, "{s:?}");
        assert!((s.via_gamma_x - (p + 1) as f64).abs() < 1e-6, "{s:?}");
    }
}

#[test]
fn gram_matrices_are_psd() {
    let els = vec![
        ProjectiveMatrix::identity(),
        ProjectiveMatrix::diag(1, 2),
        ProjectiveMatrix::diag(2, 1),
        ProjectiveMatrix::from_i64([1, 1, 0, 2]),
        ProjectiveMatrix::from_i64([2, 1, 1, 1]),
    ];
    let r = phi0_gram(&els).unwrap();
    assert!(r.psd, "{}", r.min_eigenvalue);
    let dc = DoubleCoset::of_index(2);
    let mut fam = vec![ProjectiveMatrix::identity()];
    fam.extend(dc.left_reps().unwrap().iter().cloned());
    let r = psi0_gram(&fam).unwrap();
    assert!(r.psd, "{}", r.min_eigenvalue);
}
