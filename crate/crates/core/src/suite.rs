//! The eight acceptance checks, shared by the `verify-all` command and the acceptance tests.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coset::{hecke_product_with, unimodularity_check, DoubleCoset, ModularClass};
use crate::exact::random::{random_matrix, random_of_determinant};
use crate::exact::{ProjectiveMatrix, CQ};
use crate::finite::standard;
use crate::hyperbolic::{
    double_coset_phi0_sum, fundamental_area_by_quadrature, phi0, phi0_gram, psi0_gram, tiles_meeting,
    HyperbolicPolygon, GRAM_TOL,
};
use crate::par::Execution;
use crate::qexp::{delta_qexp, eigenvalue_of, hecke_tp, Eigen};
use crate::radial::{
    closed_walks_by_enumeration, criterion_check_with, kesten_moment, self_adjoint_coset_sum, SupportedGroupElement,
};
use crate::rep::verify_model;
use crate::Result;

pub const AREA_TOL: f64 = 1e-9;
pub const PARTITION_REL_TOL: f64 = 1e-6;
pub const SUMMATION_ORDER_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub seconds: f64,
    pub time_limit_seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!(
            "[{status}] criterion {}: {} ({} checks, {:.2}s of {:.0}s)",
            self.id, self.name, self.checks, self.seconds, self.time_limit_seconds
        );
        for f in &self.failures {
            s.push_str("\n        failed: ");
            s.push_str(f);
        }
        for n in &self.notes {
            s.push_str("\n        ");
            s.push_str(n);
        }
        s
    }
}

struct Tally {
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, id: u8, name: &'static str, start: Instant, limit: Duration) -> Outcome {
        let elapsed = start.elapsed();
        let mut failures = self.failures;
        if elapsed > limit {
            failures.push(format!("took {:.2}s, limit {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64()));
        }
        Outcome {
            id,
            name,
            passed: failures.is_empty(),
            checks: self.checks,
            failures,
            notes: self.notes,
            seconds: elapsed.as_secs_f64(),
            time_limit_seconds: limit.as_secs_f64(),
        }
    }
}

fn err_string(e: crate::HeckeError) -> String {
    e.to_string()
}

/// Coset counts p+1 on both sides for p ∈ {2,3,5,7,11}, each under one second.
pub fn coset_counts() -> Outcome {
    let start = Instant::now();
    let mut t = Tally::new();
    for p in [2i64, 3, 5, 7, 11] {
        let s = Instant::now();
        let dc = DoubleCoset::of_index(p);
        let (l, r) = (dc.left_reps().map(<[_]>::len), dc.right_reps().map(<[_]>::len));
        let expect = (p + 1) as usize;
        t.check(l == Ok(expect) && r == Ok(expect), || format!("p={p}: counts {l:?} / {r:?}, expected {expect}"));
        let el = s.elapsed();
        t.check(el < Duration::from_secs(1), || format!("p={p}: took {:.2}s", el.as_secs_f64()));
    }
    t.finish(1, "coset counts", start, Duration::from_secs(5))
}

fn product_terms(a: i64, b: i64, exec: Execution) -> Result<BTreeMap<BigInt, usize>> {
    let prod = hecke_product_with(&DoubleCoset::of_index(a), &DoubleCoset::of_index(b), exec)?;
    Ok(prod.terms.iter().map(|t| (t.class.index.clone(), t.multiplicity)).collect())
}

/// T_p·T_p = T_{p²} + (p+1)·1 and T_p·T_{p^n} = T_{p^{n+1}} + p·T_{p^{n−1}}, n = 2, 3.
pub fn structure_constants(exec: Execution) -> Outcome {
    let start = Instant::now();
    let mut t = Tally::new();
    for p in [2i64, 3, 5] {
        let expect: BTreeMap<BigInt, usize> = [(BigInt::from(p * p), 1), (BigInt::from(1), (p + 1) as usize)].into();
        let got = product_terms(p, p, exec);
        t.check(got.as_ref() == Ok(&expect), || format!("T_{p}·T_{p}: {got:?}"));
        for n in 2..=3u32 {
            let expect: BTreeMap<BigInt, usize> =
                [(BigInt::from(p.pow(n + 1)), 1), (BigInt::from(p.pow(n - 1)), p as usize)].into();
            let got = product_terms(p, p.pow(n), exec);
            t.check(got.as_ref() == Ok(&expect), || format!("T_{p}·T_{p}^{n}: {got:?}"));
        }
    }
    t.finish(2, "Hecke structure constants", start, Duration::from_secs(10))
}

/// Equal left and right coset counts for 100 random σ with entries in [−50, 50].
pub fn unimodularity(seed: u64) -> Outcome {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let s = random_matrix(&mut rng, 50);
        let r = unimodularity_check(&s);
        t.check(r == Ok(true), || format!("σ = {s}: {r:?}"));
    }
    t.finish(3, "unimodularity", start, Duration::from_secs(60))
}

/// Identity-class coefficients of (T_p)ⁿ, expanded in double cosets.
pub fn identity_coefficients_of_powers(p: i64, n_max: u32, exec: Execution) -> Result<Vec<BigInt>> {
    let tp = DoubleCoset::of_index(p);
    let mut element: BTreeMap<ModularClass, (ProjectiveMatrix, BigInt)> = BTreeMap::new();
    let e = ProjectiveMatrix::identity();
    element.insert(ModularClass { index: 1.into(), det_sign: 1 }, (e, BigInt::from(1)));
    let mut out = vec![BigInt::from(1)];
    for _ in 0..n_max {
        let mut next: BTreeMap<ModularClass, (ProjectiveMatrix, BigInt)> = BTreeMap::new();
        for (rep, coeff) in element.values() {
            for term in hecke_product_with(&DoubleCoset::new(rep.clone()), &tp, exec)?.terms {
                let entry = next.entry(term.class.clone()).or_insert_with(|| (term.representative.clone(), BigInt::from(0)));
                entry.1 += coeff * BigInt::from(term.multiplicity);
            }
        }
        element = next;
        let id = element.get(&ModularClass { index: 1.into(), det_sign: 1 }).map_or(BigInt::from(0), |v| v.1.clone());
        out.push(id);
    }
    Ok(out)
}

/// Hecke powers against tree moments, and tree moments against walk enumeration.
pub fn radial_cross_check(exec: Execution) -> Outcome {
    let start = Instant::now();
    let mut t = Tally::new();
    for p in [2i64, 3] {
        match identity_coefficients_of_powers(p, 6, exec) {
            Ok(coeffs) => {
                for (n, c) in coeffs.iter().enumerate() {
                    let k = kesten_moment((p + 1) as u32, n as u32);
                    t.check(*c == k, || format!("p={p} n={n}: identity coefficient {c}, tree moment {k}"));
                }
            }
            Err(e) => t.check(false, || format!("p={p}: {}", err_string(e))),
        }
    }
    for d in 3..=6u32 {
        for n in 0..=10 {
            let (k, w) = (kesten_moment(d, n), closed_walks_by_enumeration(d, n));
            t.check(k == BigInt::from(w), || format!("d={d} n={n}: recursion {k}, enumeration {w}"));
        }
    }
    t.finish(4, "radial cross-check", start, Duration::from_secs(60))
}

/// Every finite-model identity on the four standard models, 100 random commutant cases each.
pub fn finite_models(seed: u64, exec: Execution) -> Outcome {
    let start = Instant::now();
    let mut t = Tally::new();
    for model in standard::all() {
        match verify_model(&model, 100, seed, exec) {
            Ok(reports) => {
                for r in reports {
                    t.check(r.passed(), || {
                        let defect = match (r.max_defect, r.tolerance) {
                            (Some(d), Some(tol)) => format!(", max defect {d:.6e} (tolerance {tol:e})"),
                            _ => String::new(),
                        };
                        let note = r.note.as_ref().map(|n| format!("; {n}")).unwrap_or_default();
                        format!("{} / {}: {} of {} cases failed{defect}{note}", r.model, r.check, r.failures, r.cases)
                    });
                }
            }
            Err(e) => t.check(false, || format!("{}: {}", model.name(), err_string(e))),
        }
    }
    t.finish(5, "finite-model identities", start, Duration::from_secs(60))
}

fn random_index_at_most_9(rng: &mut ChaCha8Rng) -> ProjectiveMatrix {
    let det = rng.gen_range(2..=9);
    let g = random_of_determinant(rng, det, 4);
    if rng.gen_bool(0.5) {
        g.multiply(&ProjectiveMatrix::from_i64([1, 0, 0, -1]))
    } else {
        g
    }
}

/// Areas, φ₀ values, tiling partition, Gram positivity and the two summation orders.
pub fn hyperbolic(seed: u64) -> Outcome {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = HyperbolicPolygon::fundamental_domain();
    let raw = f.area();
    let quad = fundamental_area_by_quadrature(4000);
    t.check((raw - quad).abs() <= AREA_TOL, || format!("raw area {raw} vs quadrature {quad}"));
    t.check((raw / (PI / 3.0) - 1.0).abs() <= AREA_TOL, || format!("normalized area {}", raw / (PI / 3.0)));

    let e = phi0(&ProjectiveMatrix::identity());
    let tt = phi0(&ProjectiveMatrix::gen_t());
    let ss = phi0(&ProjectiveMatrix::gen_s());
    t.check(e == 1.0 && tt == 0.0 && ss == 0.0, || format!("φ₀(e), φ₀(T), φ₀(S) = {e}, {tt}, {ss}"));

    for _ in 0..25 {
        let g = random_index_at_most_9(&mut rng);
        match tiles_meeting(&f.image(&g)) {
            Ok(hits) => {
                let total: f64 = hits.iter().map(|h| h.area).sum();
                t.check((total - raw).abs() <= PARTITION_REL_TOL * raw, || format!("g = {g}: tiles cover {total}"));
            }
            Err(e) => t.check(false, || format!("g = {g}: {}", err_string(e))),
        }
    }

    for _ in 0..30 {
        let els: Vec<ProjectiveMatrix> = (0..5).map(|_| random_matrix(&mut rng, 4)).collect();
        match phi0_gram(&els) {
            Ok(r) => t.check(r.psd, || format!("φ₀ Gram min eigenvalue {} (tolerance {GRAM_TOL})", r.min_eigenvalue)),
            Err(e) => t.check(false, || err_string(e)),
        }
    }

    for p in [2i64, 3, 5] {
        match double_coset_phi0_sum(&DoubleCoset::of_index(p)) {
            Ok(s) => t.check((s.via_gamma_x - s.via_x_gamma).abs() <= SUMMATION_ORDER_TOL, || {
                format!("p={p}: orders give {} and {}", s.via_gamma_x, s.via_x_gamma)
            }),
            Err(e) => t.check(false, || err_string(e)),
        }
    }

    for p in [2i64, 3] {
        let dc = DoubleCoset::of_index(p);
        let mut fam = vec![ProjectiveMatrix::identity()];
        match dc.left_reps() {
            Ok(reps) => fam.extend(reps.iter().cloned()),
            Err(e) => t.check(false, || err_string(e)),
        }
        match psi0_gram(&fam) {
            Ok(r) => t.check(r.psd, || format!("ψ₀ Gram (p={p}) min eigenvalue {}", r.min_eigenvalue)),
            Err(e) => t.check(false, || err_string(e)),
        }
    }
    t.finish(6, "hyperbolic suite", start, Duration::from_secs(300))
}

/// Eigenvalues of Δ at precision 50 and the p² relation.
pub fn qexp_suite() -> Outcome {
    let start = Instant::now();
    let mut t = Tally::new();
    let delta = delta_qexp(50).expect("positive precision");
    for (p, l) in [(2u64, -24i64), (3, 252), (5, 4830)] {
        let got = eigenvalue_of(&delta, p);
        let want = Eigen::Eigenvalue { eigenvalue: BigInt::from(l), checked_up_to: 50 / p as usize };
        t.check(got.as_ref() == Ok(&want), || format!("p={p}: {got:?}"));
    }
    for p in [2u64, 3] {
        let ok = (|| -> Result<bool> {
            let Eigen::Eigenvalue { eigenvalue: lp, .. } = eigenvalue_of(&delta, p)? else { return Ok(false) };
            let pk = BigInt::from(p).pow(11);
            let tpp = hecke_tp(&hecke_tp(&delta, p)?, p)?;
            let lp2 = tpp.a(1) - &pk * delta.a(1);
            let exact = (1..=tpp.precision()).all(|n| tpp.a(n) - &pk * delta.a(n) == &lp2 * delta.a(n));
            Ok(exact && &lp * &lp == lp2 + pk)
        })();
        t.check(ok == Ok(true), || format!("p={p}: Hecke relation {ok:?}"));
    }
    t.finish(7, "q-expansion suite", start, Duration::from_secs(1))
}

/// The normalized self-adjoint coset sum for p = 2 passes to n = 6; scaled and perturbed variants fail.
pub fn moment_criterion(exec: Execution) -> Outcome {
    let start = Instant::now();
    let mut t = Tally::new();
    let run = || -> Result<Vec<(String, bool, Option<u32>)>> {
        let x = self_adjoint_coset_sum(2)?;
        let involution = x.terms().keys().find(|g| g.multiply(g).is_identity()).cloned();
        let mut perturbed = x.clone();
        if let Some(b) = involution {
            perturbed.add_term(b, &CQ::one());
        }
        let s = ProjectiveMatrix::diag(1, 2);
        let pair = SupportedGroupElement::from_terms([(s.inverse(), CQ::one()), (s, CQ::one())]);
        let mut rows = Vec::new();
        for (name, el) in [
            ("coset sum", x.clone()),
            ("scaled by 2", x.scale(&CQ::from_int(2))),
            ("one coefficient raised", perturbed),
            ("σ plus σ⁻¹", pair),
        ] {
            let r = criterion_check_with(&el, 6, exec)?;
            rows.push((name.to_string(), r.extends, r.first_failure));
        }
        Ok(rows)
    };
    match run() {
        Ok(rows) => {
            for (k, (name, extends, first)) in rows.into_iter().enumerate() {
                if let Some(n) = first {
                    t.notes.push(format!("{name}: first failing n = {n}"));
                }
                if k == 0 {
                    t.check(extends, || format!("{name}: fails at n = {first:?}"));
                } else {
                    t.check(!extends && first.is_some(), || format!("{name}: expected a failing n, got {first:?}"));
                }
            }
        }
        Err(e) => t.check(false, || err_string(e)),
    }
    t.finish(8, "moment criterion", start, Duration::from_secs(30))
}

pub fn run_all(seed: u64, exec: Execution) -> Vec<Outcome> {
    vec![
        coset_counts(),
        structure_constants(exec),
        unimodularity(seed),
        radial_cross_check(exec),
        finite_models(seed, exec),
        hyperbolic(seed),
        qexp_suite(),
        moment_criterion(exec),
    ]
}
