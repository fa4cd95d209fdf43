use std::collections::{HashMap, HashSet, VecDeque};
use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::coset::DoubleCoset;
use crate::exact::ProjectiveMatrix;
use crate::par::{self, Execution};
use crate::{HeckeError, Result};

use super::geom::{mobius_apply, HPoint};
use super::polygon::HyperbolicPolygon;

pub const REDUCTION_CAP: usize = 10_000;
pub const TILE_CAP: usize = 100_000;
/// Areas below this are treated as zero (boundary contact).
pub const AREA_FLOOR: f64 = 1e-11;

pub fn fundamental_area() -> f64 {
    PI / 3.0
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|k| f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// ∫∫_F dx dy / y² by nested Simpson quadrature, with u = 1/y on the inner integral.
pub fn fundamental_area_by_quadrature(panels: usize) -> f64 {
    let inner = |x: f64| simpson(|_u| 1.0, 0.0, 1.0 / (1.0 - x * x).sqrt(), 2);
    simpson(inner, -0.5, 0.5, panels)
}

pub fn in_fundamental_domain(z: HPoint, tol: f64) -> bool {
    match z {
        HPoint::Infinity => true,
        _ => {
            let (x, y) = (z.x().unwrap(), z.y());
            x.abs() <= 0.5 + tol && x * x + y * y >= 1.0 - tol
        }
    }
}

/// Returns (w, γ) with w = γ·z in the fundamental domain and γ in the modular group.
pub fn reduce_to_fundamental(z: HPoint) -> Result<(HPoint, ProjectiveMatrix)> {
    let HPoint::Interior { .. } = z else {
        return Err(HeckeError::Precondition("reduction needs an interior point".into()));
    };
    let mut w = z;
    let mut g = ProjectiveMatrix::identity();
    for _ in 0..REDUCTION_CAP {
        let x = w.x().unwrap();
        let n = x.round();
        if n != 0.0 {
            let t = ProjectiveMatrix::from_i64([1, -(n as i64), 0, 1]);
            w = mobius_apply(&t, w);
            g = t.multiply(&g);
        }
        let (x, y) = (w.x().unwrap(), w.y());
        if x * x + y * y < 1.0 - 1e-14 {
            let s = ProjectiveMatrix::gen_s();
            w = mobius_apply(&s, w);
            g = s.multiply(&g);
        } else {
            return Ok((w, g));
        }
    }
    Err(HeckeError::CapExceeded { what: "fundamental domain reduction", cap: REDUCTION_CAP })
}

/// area(F ∩ g F) / area(F).
pub fn phi0(g: &ProjectiveMatrix) -> f64 {
    if g.is_in_gamma() {
        return if g.is_identity() { 1.0 } else { 0.0 };
    }
    let img = HyperbolicPolygon::fundamental_domain().image(g);
    img.clip_all(HyperbolicPolygon::fundamental_half_planes().iter()).area() / fundamental_area()
}

/// A modular group element η with the area of ηF ∩ region.
#[derive(Clone, Debug, Serialize)]
pub struct TileHit {
    pub element: ProjectiveMatrix,
    pub area: f64,
}

fn tile_area(eta: &ProjectiveMatrix, region_planes: &[super::geom::HalfPlane]) -> f64 {
    let a = HyperbolicPolygon::fundamental_domain().image(eta).clip_all(region_planes.iter()).area();
    if a < AREA_FLOOR {
        0.0
    } else {
        a
    }
}

/// All η in the modular group with area(ηF ∩ region) > 0, found by seeded
/// breadth-first search over edge-adjacent tiles.
pub fn tiles_meeting(region: &HyperbolicPolygon) -> Result<Vec<TileHit>> {
    let planes = region.half_planes();
    if planes.is_empty() {
        return Ok(Vec::new());
    }
    let moves = [ProjectiveMatrix::gen_s(), ProjectiveMatrix::gen_t(), ProjectiveMatrix::gen_t_inv()];
    let mut seen: HashSet<ProjectiveMatrix> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut hits = Vec::new();
    for z in region.sample_points(64) {
        let (_, g) = reduce_to_fundamental(z)?;
        let eta = g.inverse();
        if seen.insert(eta.clone()) {
            queue.push_back(eta);
        }
    }
    while let Some(eta) = queue.pop_front() {
        let a = tile_area(&eta, &planes);
        if a == 0.0 {
            continue;
        }
        hits.push(TileHit { element: eta.clone(), area: a });
        for m in &moves {
            let next = eta.multiply(m);
            if seen.insert(next.clone()) {
                if seen.len() > TILE_CAP {
                    return Err(HeckeError::CapExceeded { what: "tile search", cap: TILE_CAP });
                }
                queue.push_back(next);
            }
        }
    }
    hits.sort_by(|a, b| a.element.cmp(&b.element));
    Ok(hits)
}

/// Per-γ term of the coset overlap sum.
#[derive(Clone, Debug, Serialize)]
pub struct OverlapTerm {
    pub gamma: ProjectiveMatrix,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OverlapSum {
    pub value: f64,
    pub terms: Vec<OverlapTerm>,
}

/// Σ_γ area(σ₁γσ₂F ∩ F)/area(F), with the nonzero per-γ terms.
pub fn psi0(s1: &ProjectiveMatrix, s2: &ProjectiveMatrix) -> Result<OverlapSum> {
    psi0_with(s1, s2, Execution::default())
}

pub fn psi0_with(s1: &ProjectiveMatrix, s2: &ProjectiveMatrix, exec: Execution) -> Result<OverlapSum> {
    let f = HyperbolicPolygon::fundamental_domain();
    // Pieces of σ₂F pulled back into F.
    let s2f = f.image(s2);
    let pieces: Vec<(ProjectiveMatrix, HyperbolicPolygon)> = tiles_meeting(&s2f)?
        .into_iter()
        .map(|t| {
            let inv = t.element.inverse();
            let q = s2f.clip_all(f.image(&t.element).half_planes().iter()).image(&inv);
            (t.element, q)
        })
        .collect();
    let region = f.image(&s1.inverse());
    let etas: Vec<ProjectiveMatrix> = tiles_meeting(&region)?.into_iter().map(|t| t.element).collect();
    let planes = region.half_planes();
    let pairs: Vec<(usize, usize)> =
        (0..pieces.len()).flat_map(|i| (0..etas.len()).map(move |j| (i, j))).collect();
    let vals = par::map(exec, &pairs, |&(i, j)| {
        let a = pieces[i].1.image(&etas[j]).clip_all(planes.iter()).area();
        if a < AREA_FLOOR {
            0.0
        } else {
            a / fundamental_area()
        }
    });
    let mut by_gamma: HashMap<ProjectiveMatrix, f64> = HashMap::new();
    for (&(i, j), v) in pairs.iter().zip(vals) {
        if v > 0.0 {
            let gamma = etas[j].multiply(&pieces[i].0.inverse());
            *by_gamma.entry(gamma).or_default() += v;
        }
    }
    let mut terms: Vec<OverlapTerm> = by_gamma.into_iter().map(|(gamma, value)| OverlapTerm { gamma, value }).collect();
    terms.sort_by(|a, b| a.gamma.cmp(&b.gamma));
    let value = terms.iter().map(|t| t.value).sum();
    Ok(OverlapSum { value, terms })
}

/// Σ_{θ ∈ double coset} phi0(θ), summed two ways.
#[derive(Clone, Debug, Serialize)]
pub struct DoubleCosetSum {
    /// θ enumerated as η⁻¹u over cosets Γu, one phi0 clip per θ.
    pub via_gamma_x: f64,
    /// Σ over cosets vΓ of psi0(v, e).
    pub via_x_gamma: f64,
    pub terms: usize,
}

pub fn double_coset_phi0_sum(dc: &DoubleCoset) -> Result<DoubleCosetSum> {
    let f = HyperbolicPolygon::fundamental_domain();
    let mut by_right = 0.0;
    let mut terms = 0;
    for u in dc.left_reps()? {
        for t in tiles_meeting(&f.image(u))? {
            let theta = t.element.inverse().multiply(u);
            by_right += phi0(&theta);
            terms += 1;
        }
    }
    let e = ProjectiveMatrix::identity();
    let mut by_left = 0.0;
    for v in dc.right_reps()? {
        by_left += psi0(v, &e)?.value;
    }
    Ok(DoubleCosetSum { via_gamma_x: by_right, via_x_gamma: by_left, terms })
}

#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub matrix: Vec<Vec<f64>>,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub psd: bool,
}

pub const GRAM_TOL: f64 = 1e-8;

fn gram_report(n: usize, mut entry: impl FnMut(usize, usize) -> Result<f64>) -> Result<GramReport> {
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = entry(i, j)?;
        }
    }
    let dm = DMatrix::from_fn(n, n, |i, j| 0.5 * (m[i][j] + m[j][i]));
    let min = if n == 0 { 0.0 } else { dm.symmetric_eigen().eigenvalues.min() };
    Ok(GramReport { matrix: m, min_eigenvalue: min, tolerance: GRAM_TOL, psd: min >= -GRAM_TOL })
}

/// Gram matrix [phi0(g_i⁻¹ g_j)].
pub fn phi0_gram(elements: &[ProjectiveMatrix]) -> Result<GramReport> {
    gram_report(elements.len(), |i, j| Ok(phi0(&elements[i].inverse().multiply(&elements[j]))))
}

/// Gram matrix [psi0(a_i⁻¹, a_j)] for cosets Γa_i.
pub fn psi0_gram(cosets: &[ProjectiveMatrix]) -> Result<GramReport> {
    gram_report(cosets.len(), |i, j| Ok(psi0(&cosets[i].inverse(), &cosets[j])?.value))
}
