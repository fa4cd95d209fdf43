use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coset::{hecke_matrix, hecke_product, CosetWindow, DoubleCoset};
use crate::error::Result;
use crate::exact::{DenseMatrix, CQ};
use crate::finite::{standard, FiniteModel};
use crate::par::{self, Execution};

use super::ops::*;
use super::phi::*;
use super::series::OperatorSeries;
use super::wandering::{SubrepProjection, WanderingDecomposition};

/// Outcome of one verification suite on one model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub model: String,
    pub cases: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    fn new(check: &str, model: &FiniteModel) -> Self {
        CheckReport { check: check.into(), model: model.name().into(), cases: 0, failures: 0, max_defect: None, tolerance: None, note: None }
    }

    fn record(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn record_defect(&mut self, defect: f64, tol: f64) {
        self.tolerance = Some(tol);
        self.max_defect = Some(self.max_defect.unwrap_or(0.0).max(defect));
        self.record(defect <= tol);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Named subrepresentation projections of the regular model.
pub fn projection_catalogue(wd: &WanderingDecomposition) -> Vec<(String, SubrepProjection)> {
    let model = wd.model();
    let perm = |d: usize, c: &[&[usize]]| model.element_of_perm(&standard::perm(d, c));
    let mut out = vec![("identity".to_string(), SubrepProjection::identity())];
    let mut push = |name: &str, gens: Vec<Option<usize>>, sign_of: Option<usize>| {
        let Some(gens) = gens.into_iter().collect::<Option<Vec<_>>>() else { return };
        let k = model.generated(&gens);
        let chars: Option<Vec<i64>> = sign_of.map(|g| {
            // ±1 character trivial on the subgroup generated by the other generators
            // and by g², negative on g.
            let others: Vec<usize> = gens.iter().copied().filter(|&x| x != g).chain([model.mul(g, g)]).collect();
            let kernel = model.generated(&others);
            k.iter().map(|x| if kernel.contains(x) { 1 } else { -1 }).collect()
        });
        if let Ok(p) = SubrepProjection::right_average(wd, &k, chars.as_deref()) {
            out.push((name.to_string(), p));
        }
    };
    match model.name() {
        "S3/A3" => {
            let t = perm(3, &[&[0, 1]]);
            push("avg<(01)>", vec![t], None);
            push("sign<(01)>", vec![t], t);
        }
        "S3/C2" => push("avg<(012)>", vec![perm(3, &[&[0, 1, 2]])], None),
        "S4/S3" => {
            let a = perm(4, &[&[0, 1], &[2, 3]]);
            let b = perm(4, &[&[0, 2], &[1, 3]]);
            push("avg<V4>", vec![a, b], None);
            push("sign<V4>", vec![a, b], a);
            let c = perm(4, &[&[0, 1, 2, 3]]);
            push("avg<C4>", vec![c], None);
            push("sign<C4>", vec![c], c);
        }
        "D4/C2" => {
            let r = perm(4, &[&[0, 1, 2, 3]]);
            push("avg<r>", vec![r], None);
            push("sign<r>", vec![r], r);
        }
        _ => {}
    }
    out
}

/// Projections with Tr(P_L p) = 1, where Φ is meant to be an isomorphism.
pub fn unit_trace_projections(wd: &WanderingDecomposition) -> Vec<(String, SubrepProjection)> {
    projection_catalogue(wd)
        .into_iter()
        .filter(|(_, p)| gram_a(wd, p, &[wd.model().identity()]).trace() == CQ::one())
        .collect()
}

fn left_coset_labels(model: &FiniteModel) -> Vec<usize> {
    let mut v: Vec<usize> = model.elements().map(|x| model.left_label(x)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn right_coset_labels(model: &FiniteModel) -> Vec<usize> {
    let mut v: Vec<usize> = model.elements().map(|x| model.right_label(x)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// S(aΓ)S(Γb) = S(aΓb) and S(Γa)*S(Γb) = S(a⁻¹Γb) over all coset pairs and projections.
pub fn check_s_multiplicativity(wd: &WanderingDecomposition) -> Result<CheckReport> {
    let model = wd.model();
    let pair = wd.pair();
    let mut rep = CheckReport::new("s_multiplicativity", model);
    for (_, sp) in projection_catalogue(wd) {
        for &a in &left_coset_labels(model) {
            for &b in &right_coset_labels(model) {
                let lhs = build_s(wd, &sp, &model.left_coset(a)).multiply(pair, &build_s(wd, &sp, &model.right_coset(b)))?;
                rep.record(lhs == build_s(wd, &sp, &model.sandwich(a, model.gamma(), b)));
            }
        }
        for &a in &right_coset_labels(model) {
            for &b in &right_coset_labels(model) {
                let lhs = build_s(wd, &sp, &model.right_coset(a)).adjoint(pair).multiply(pair, &build_s(wd, &sp, &model.right_coset(b)))?;
                rep.record(lhs == build_s(wd, &sp, &model.sandwich(model.inv(a), model.gamma(), b)));
            }
        }
    }
    Ok(rep)
}

/// ε̃(S(ΓσΓ)) against the classical double-coset operator and the coset engine.
pub fn check_koopman_hecke(wd: &WanderingDecomposition) -> Result<CheckReport> {
    let model = wd.model();
    let mut rep = CheckReport::new("koopman_hecke", model);
    let f = wd.fundamental();
    let window = CosetWindow::new(f.iter().map(|&x| model.right_label(x)).collect())?;
    for c in model.classes() {
        let dc_set = model.double_coset(c);
        let eps = build_s(wd, &SubrepProjection::identity(), &dc_set).epsilon_tilde();
        let classical = DenseMatrix::from_fn(f.len(), f.len(), |i, j| {
            CQ::from_int(i64::from(model.class_of(model.mul(f[i], model.inv(f[j]))) == c))
        });
        let h = hecke_matrix(&DoubleCoset::in_pair(wd.pair().clone(), c), &window)?;
        let engine = DenseMatrix::from_fn(f.len(), f.len(), |i, j| CQ::from_int(h.entries[i][j] as i64));
        rep.record(eps == classical && eps == engine && h.overflow.iter().all(|&o| o == 0));
    }
    Ok(rep)
}

/// The p-series is an idempotent, commutes with every S(ΓσΓ), and ε̃ of it is idempotent.
pub fn check_p_series(wd: &WanderingDecomposition) -> Result<CheckReport> {
    let model = wd.model();
    let pair = wd.pair();
    let mut rep = CheckReport::new("p_series", model);
    for (_, sp) in projection_catalogue(wd) {
        let p = build_p_series(wd, &sp);
        rep.record(p.multiply(pair, &p)? == p);
        let a = p.epsilon_tilde();
        rep.record(&a * &a == a);
        for c in model.classes() {
            let s = build_s(wd, &SubrepProjection::identity(), &model.double_coset(c));
            let ps = p.multiply(pair, &s)?;
            rep.record(ps == s.multiply(pair, &p)? && ps == build_s(wd, &sp, &model.double_coset(c)));
        }
    }
    Ok(rep)
}

/// Per-case outcome of the expectation theorem.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TheoremCase {
    /// E(S_p X S_p*) = Ψ(X).
    pub adjointed: bool,
    /// E(S_p X S_p) = Ψ(X); `None` when the double coset is not self-inverse.
    pub plain: Option<bool>,
}

pub fn verify_theorem_expectation(
    wd: &WanderingDecomposition,
    sp: &SubrepProjection,
    dc_rep: usize,
    x: &OperatorSeries,
) -> Result<TheoremCase> {
    let model = wd.model();
    let pair = wd.pair();
    let y = series_to_operator(wd, x)?;
    let p = build_p_series(wd, sp);
    if p.multiply(pair, x)? != *x || x.multiply(pair, &p)? != *x || !commutes_with_gamma(wd, &y) {
        return Err(crate::error::HeckeError::Precondition("X is not in p(R(Γ)⊗B(L))p".into()));
    }
    let dc = model.double_coset(dc_rep);
    let s = build_s(wd, sp, &dc);
    let rhs = operator_to_series(wd, &psi_adjoint_action(wd, dc_rep, &y)?);
    let adjointed = expect_product3(pair, &s, x, &s.adjoint(pair))? == rhs;
    let self_inverse = model.class_of(model.inv(dc_rep)) == model.class_of(dc_rep);
    let plain = if self_inverse { Some(expect_product3(pair, &s, x, &s)? == rhs) } else { None };
    Ok(TheoremCase { adjointed, plain })
}

/// `cases` random commutant elements, each checked against every double coset.
/// Returns the adjointed and plain reports.
pub fn check_theorem(wd: &WanderingDecomposition, cases: usize, seed: u64, exec: Execution) -> Result<(CheckReport, CheckReport)> {
    let model = wd.model();
    let projections = projection_catalogue(wd);
    let classes = model.classes();
    let outcomes = par::map_range(exec, cases, |k| -> Result<Vec<TheoremCase>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
        let sp = &projections[k % projections.len()].1;
        let x = operator_to_series(wd, &random_commutant(wd, sp, &mut rng));
        classes.iter().map(|&c| verify_theorem_expectation(wd, sp, c, &x)).collect()
    });
    let mut adj = CheckReport::new("theorem_expectation_adjointed", model);
    let mut plain = CheckReport::new("theorem_expectation_plain", model);
    for o in outcomes {
        for case in o? {
            adj.record(case.adjointed);
            if let Some(ok) = case.plain {
                plain.record(ok);
            }
        }
    }
    Ok((adj, plain))
}

/// Ψ_A∘Ψ_B = Σ_C m_C Ψ_C with the structure constants of `hecke_product`.
pub fn check_psi_composition(wd: &WanderingDecomposition, samples: usize, seed: u64) -> Result<CheckReport> {
    let model = wd.model();
    let pair = wd.pair();
    let mut rep = CheckReport::new("psi_composition", model);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = model.classes();
    for _ in 0..samples {
        let y = random_commutant(wd, &SubrepProjection::identity(), &mut rng);
        for &a in &classes {
            for &b in &classes {
                let lhs = psi_adjoint_action(wd, a, &psi_adjoint_action(wd, b, &y)?)?;
                let prod = hecke_product(&DoubleCoset::in_pair(pair.clone(), a), &DoubleCoset::in_pair(pair.clone(), b))?;
                let mut rhs = DenseMatrix::zeros(wd.points(), wd.points());
                for t in &prod.terms {
                    rhs = &rhs + &psi_adjoint_action(wd, t.class, &y)?.scale(&CQ::from_int(t.multiplicity as i64));
                }
                rep.record(lhs == rhs);
            }
        }
    }
    Ok(rep)
}

/// Koopman model on G×G with the diagonal action: its ε̃∘S acts on commutant
/// elements exactly as Ψ.
pub fn check_tensor_model(wd: &WanderingDecomposition, samples: usize, seed: u64) -> Result<CheckReport> {
    let model = wd.model();
    let n = model.order();
    let action: Vec<Vec<usize>> =
        model.elements().map(|g| (0..n * n).map(|xy| model.mul(g, xy / n) * n + model.mul(g, xy % n)).collect()).collect();
    let fundamental: Vec<usize> = model.reps().iter().flat_map(|&r| (0..n).map(move |y| r * n + y)).collect();
    let tensor = WanderingDecomposition::koopman(model, n * n, action, fundamental)?;
    let mut rep = CheckReport::new("tensor_model", model);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ys: Vec<DenseMatrix> = (0..samples).map(|_| random_commutant(wd, &SubrepProjection::identity(), &mut rng)).collect();
    for c in model.classes() {
        let eps = gram_a(&tensor, &SubrepProjection::identity(), &model.double_coset(c));
        for y in &ys {
            let restricted: Vec<CQ> = tensor.fundamental().iter().map(|&xy| y.get(xy / n, xy % n).clone()).collect();
            let psi = psi_adjoint_action(wd, c, y)?;
            let want: Vec<CQ> = tensor.fundamental().iter().map(|&xy| psi.get(xy / n, xy % n).clone()).collect();
            rep.record(eps.mul_vec(&restricted) == want);
        }
    }
    Ok(rep)
}

/// Φ(a)Φ(b) = Φ(ab) on random a, b ∈ p(R(Γ)⊗B(L))p, and the trace formula
/// for Φ(S_p(ΓσΓ)) on self-inverse classes.
pub fn check_phi(wd: &WanderingDecomposition, samples: usize, seed: u64) -> Result<(CheckReport, CheckReport)> {
    let model = wd.model();
    let pair = wd.pair();
    let mut mult = CheckReport::new("phi_multiplicativity", model);
    let mut ep = CheckReport::new("phi_trace_formula", model);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if !gamma_is_abelian(model) {
        mult.note = Some("R(Γ) is noncommutative; the partial-trace compression can fail to be multiplicative".into());
    }
    for (_, sp) in unit_trace_projections(wd) {
        let phi = PhiCompression::new(model, &build_p_series(wd, &sp))?;
        for _ in 0..samples {
            let a = operator_to_series(wd, &random_commutant(wd, &sp, &mut rng));
            let b = operator_to_series(wd, &random_commutant(wd, &sp, &mut rng));
            mult.record_defect(phi.multiplicativity_defect(pair, &a, &b)?, MULTIPLICATIVITY_TOL);
        }
        for c in model.classes() {
            if model.class_of(model.inv(c)) != c {
                continue;
            }
            let dc = model.double_coset(c);
            let lhs = phi.apply(&build_s(wd, &sp, &dc));
            let rhs = phi.conjugate(&trace_series(model, dc.iter().map(|&t| (t, sp.block(wd, t)))));
            ep.record_defect(lhs.max_abs_diff(&rhs), MULTIPLICATIVITY_TOL);
        }
    }
    Ok((mult, ep))
}

pub fn gamma_is_abelian(model: &FiniteModel) -> bool {
    let g = model.gamma();
    g.iter().all(|&a| g.iter().all(|&b| model.mul(a, b) == model.mul(b, a)))
}

/// Γ-invariance of lifts, Φ*Φ = A(Γ), A(Γ)² = A(Γ), TΦ = ΦA(ΓσΓ), and
/// Tr(T on the lifted invariants) = Tr A(ΓσΓ).
pub fn check_invariant_lift(wd: &WanderingDecomposition) -> Result<CheckReport> {
    let model = wd.model();
    let mut rep = CheckReport::new("invariant_lift", model);
    let m = wd.dim();
    let f = wd.fundamental();
    for (_, sp) in projection_catalogue(wd) {
        let lifts: Vec<Vec<CQ>> = (0..m)
            .map(|j| invariant_lift(wd, &sp, &(0..m).map(|i| CQ::from_int(i64::from(i == j))).collect::<Vec<_>>()))
            .collect();
        for v in &lifts {
            rep.record(model.gamma().iter().all(|&g| (0..v.len()).all(|x| v[wd.act(g, x)] == v[x])));
        }
        let phi_star_phi = DenseMatrix::from_fn(m, m, |i, j| {
            f.iter().fold(CQ::zero(), |acc, &x| &acc + &(&lifts[j][x] * &lifts[i][x].conj()))
        });
        let a_gamma = gram_a(wd, &sp, model.gamma());
        rep.record(phi_star_phi == a_gamma);
        rep.record(&a_gamma * &a_gamma == a_gamma);
        let basis = DenseMatrix::from_fn(wd.points(), m, |x, j| lifts[j][x].clone());
        let (_, piv) = basis.rref();
        let b = DenseMatrix::from_fn(wd.points(), piv.len(), |x, k| lifts[piv[k]][x].clone());
        for c in model.classes() {
            let a = gram_a(wd, &sp, &model.double_coset(c));
            let mut intertwines = true;
            let mut images = Vec::new();
            for (j, lift) in lifts.iter().enumerate() {
                let t = hecke_on_vector(wd, c, lift)?;
                let phi_a = invariant_lift(wd, &sp, &a.column(j));
                intertwines &= t == phi_a;
                images.push(t);
            }
            rep.record(intertwines);
            // Coordinates of T applied to the basis of im Φ.
            let rhs = DenseMatrix::from_fn(wd.points(), piv.len(), |x, k| images[piv[k]][x].clone());
            rep.record(solve_trace(&b, &rhs).is_some_and(|t| t == a.trace()));
        }
    }
    Ok(rep)
}

/// Trace of the matrix C with B·C = R, for B of full column rank.
fn solve_trace(b: &DenseMatrix, r: &DenseMatrix) -> Option<CQ> {
    let k = b.cols();
    let aug = DenseMatrix::from_fn(b.rows(), k + r.cols(), |i, j| if j < k { b.get(i, j).clone() } else { r.get(i, j - k).clone() });
    let (red, piv) = aug.rref();
    if piv.len() != k || piv.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some((0..k).fold(CQ::zero(), |acc, i| &acc + red.get(i, k + i)))
}

/// Scalar-product properties over all element quadruples, and PSD of the
/// coset Gram matrix over the whole group.
pub fn check_cosets_scalar_product(wd: &WanderingDecomposition) -> Result<CheckReport> {
    let model = wd.model();
    let mut rep = CheckReport::new("cosets_scalar_product", model);
    let e = model.identity();
    let gamma = model.gamma();
    for (_, sp) in projection_catalogue(wd) {
        rep.record(cosets_scalar_product(wd, &sp, [e; 4]) == gram_a(wd, &sp, gamma));
        for s1 in model.elements() {
            for s2 in model.elements() {
                let csp = cosets_scalar_product(wd, &sp, [s2, s2, s1, s1]);
                let t_left = gram_a(wd, &sp, &model.left_coset(s1));
                let t_right = gram_a(wd, &sp, &model.right_coset(s2));
                let t_inv = gram_a(wd, &sp, &model.right_coset(model.inv(s1)));
                rep.record(csp == &t_left * &t_right && csp == &t_inv.adjoint() * &t_right);
            }
        }
        // Invariance under σ₁ → γσ₁, σ₂ → γ′σ₂, σ₃ → σ₃γ″, σ₄ → σ₄γ‴.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        use rand::Rng;
        for _ in 0..50 {
            let s: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..model.order()));
            let g: [usize; 4] = std::array::from_fn(|_| gamma[rng.gen_range(0..gamma.len())]);
            let moved = [model.mul(g[0], s[0]), model.mul(g[1], s[1]), model.mul(s[2], g[2]), model.mul(s[3], g[3])];
            let value = cosets_scalar_product(wd, &sp, s);
            rep.record(value == cosets_scalar_product(wd, &sp, moved));
            // Support: σ₃Γσ₁ ∩ σ₄Γσ₂ = ∅ forces the value 0.
            let a = model.sandwich(s[2], gamma, s[0]);
            let b = model.sandwich(s[3], gamma, s[1]);
            if a.iter().all(|x| !b.contains(x)) {
                rep.record(value.is_zero());
            }
        }
        if let Some(t) = model.elements().find(|&t| !model.in_gamma(t)) {
            rep.record(cosets_scalar_product(wd, &sp, [e, e, e, t]).is_zero());
        }
        let family: Vec<usize> = model.elements().collect();
        rep.record(coset_gram(wd, &sp, &family).is_psd());
    }
    Ok(rep)
}

/// Every suite on one model.
pub fn verify_model(model: &FiniteModel, theorem_cases: usize, seed: u64, exec: Execution) -> Result<Vec<CheckReport>> {
    let wd = WanderingDecomposition::regular(model);
    let mut wandering = CheckReport::new("wandering", model);
    wandering.record(wd.verify());
    let (adj, plain) = check_theorem(&wd, theorem_cases, seed, exec)?;
    let (mult, ep) = check_phi(&wd, 10, seed)?;
    Ok(vec![
        wandering,
        check_s_multiplicativity(&wd)?,
        check_koopman_hecke(&wd)?,
        check_p_series(&wd)?,
        adj,
        plain,
        check_psi_composition(&wd, 2, seed)?,
        check_tensor_model(&wd, 3, seed)?,
        mult,
        ep,
        check_invariant_lift(&wd)?,
        check_cosets_scalar_product(&wd)?,
    ])
}
