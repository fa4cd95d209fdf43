use std::f64::consts::PI;

use crate::exact::ProjectiveMatrix;

use super::geom::{mobius_apply, Geodesic, HPoint, HalfPlane, EPS};

/// A convex geodesic polygon, vertices in cyclic order, possibly ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperbolicPolygon {
    vertices: Vec<HPoint>,
}

impl HyperbolicPolygon {
    pub fn new(vertices: Vec<HPoint>) -> Self {
        let mut p = HyperbolicPolygon { vertices };
        p.dedup();
        p
    }

    /// The standard fundamental domain with vertices ρ², ∞, ρ.
    pub fn fundamental_domain() -> Self {
        let h = 3f64.sqrt() / 2.0;
        HyperbolicPolygon::new(vec![HPoint::new(-0.5, h), HPoint::Infinity, HPoint::new(0.5, h)])
    }

    /// Bounding half-planes of the fundamental domain.
    pub fn fundamental_half_planes() -> [HalfPlane; 3] {
        [
            HalfPlane::RightOf(-0.5),
            HalfPlane::LeftOf(0.5),
            HalfPlane::OutsideCircle { center: 0.0, radius: 1.0 },
        ]
    }

    pub fn vertices(&self) -> &[HPoint] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    fn dedup(&mut self) {
        let mut out: Vec<HPoint> = Vec::with_capacity(self.vertices.len());
        for v in self.vertices.drain(..) {
            if out.last().is_none_or(|l| !l.approx_eq(&v)) {
                out.push(v);
            }
        }
        while out.len() > 1 && out[0].approx_eq(out.last().unwrap()) {
            out.pop();
        }
        self.vertices = out;
    }

    pub fn image(&self, g: &ProjectiveMatrix) -> Self {
        HyperbolicPolygon::new(self.vertices.iter().map(|&v| mobius_apply(g, v)).collect())
    }

    pub fn edges(&self) -> Vec<Geodesic> {
        let n = self.vertices.len();
        (0..n).map(|k| Geodesic::through(self.vertices[k], self.vertices[(k + 1) % n])).collect()
    }

    /// A point in the interior, from the vertex centroid in the Klein model.
    pub fn interior_point(&self) -> Option<HPoint> {
        if self.is_degenerate() {
            return None;
        }
        let n = self.vertices.len() as f64;
        let (sx, sy) = self.vertices.iter().map(|&v| to_klein(v)).fold((0.0, 0.0), |a, k| (a.0 + k.0, a.1 + k.1));
        Some(from_klein((sx / n, sy / n)))
    }

    pub fn half_planes(&self) -> Vec<HalfPlane> {
        let Some(c) = self.interior_point() else {
            return Vec::new();
        };
        self.edges().into_iter().map(|g| HalfPlane::containing(g, c)).collect()
    }

    /// Sutherland–Hodgman clip against one half-plane.
    pub fn clip(&self, h: &HalfPlane) -> Self {
        let n = self.vertices.len();
        if n == 0 {
            return self.clone();
        }
        let tol = EPS * h.scale();
        let sides: Vec<f64> = self.vertices.iter().map(|&v| h.side(v)).collect();
        let mut out = Vec::with_capacity(n + 2);
        for k in 0..n {
            let (u, v) = (self.vertices[k], self.vertices[(k + 1) % n]);
            let (su, sv) = (sides[k], sides[(k + 1) % n]);
            if su >= -tol {
                out.push(u);
            }
            if (su > tol && sv < -tol) || (su < -tol && sv > tol) {
                if let Some(p) = Geodesic::through(u, v).intersect(&h.boundary()) {
                    out.push(p);
                }
            }
        }
        HyperbolicPolygon::new(out)
    }

    pub fn clip_all<'a>(&self, hs: impl IntoIterator<Item = &'a HalfPlane>) -> Self {
        let mut p = self.clone();
        for h in hs {
            if p.is_degenerate() {
                break;
            }
            p = p.clip(h);
        }
        p
    }

    pub fn intersect(&self, other: &HyperbolicPolygon) -> Self {
        self.clip_all(other.half_planes().iter())
    }

    /// Interior angle at vertex `k`; zero at ideal vertices.
    pub fn angle(&self, k: usize) -> f64 {
        let n = self.vertices.len();
        let v = self.vertices[k];
        if v.is_ideal() {
            return 0.0;
        }
        let (prev, next) = (self.vertices[(k + n - 1) % n], self.vertices[(k + 1) % n]);
        let t1 = Geodesic::through(v, prev).tangent_toward(v, prev);
        let t2 = Geodesic::through(v, next).tangent_toward(v, next);
        (t1.0 * t2.0 + t1.1 * t2.1).clamp(-1.0, 1.0).acos()
    }

    /// Hyperbolic area by Gauss–Bonnet.
    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let s: f64 = (0..n).map(|k| self.angle(k)).sum();
        ((n as f64 - 2.0) * PI - s).max(0.0)
    }

    /// Deterministic points spread over the interior (Halton barycentrics on a Klein fan).
    pub fn sample_points(&self, count: usize) -> Vec<HPoint> {
        if self.is_degenerate() {
            return Vec::new();
        }
        let ks: Vec<(f64, f64)> = self.vertices.iter().map(|&v| to_klein(v)).collect();
        let tris = ks.len() - 2;
        let mut pts = Vec::with_capacity(count);
        for i in 0..count {
            let t = i % tris;
            let (mut a, mut b) = (halton(i as u64 + 1, 2), halton(i as u64 + 1, 3));
            if a + b > 1.0 {
                a = 1.0 - a;
                b = 1.0 - b;
            }
            // Keep away from the edges so ideal corners stay in the open disc.
            let (a, b) = (0.005 + 0.99 * a, 0.005 + 0.99 * b);
            let c = 1.0 - a - b;
            let (p0, p1, p2) = (ks[0], ks[t + 1], ks[t + 2]);
            let k = (c * p0.0 + a * p1.0 + b * p2.0, c * p0.1 + a * p1.1 + b * p2.1);
            pts.push(from_klein(k));
        }
        pts
    }
}

fn halton(mut i: u64, base: u64) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Upper half-plane to Klein disc (via the Cayley map to the Poincaré disc).
pub fn to_klein(z: HPoint) -> (f64, f64) {
    match z {
        HPoint::Infinity => (1.0, 0.0),
        _ => {
            let (x, y) = (z.x().unwrap(), z.y());
            // w = (z − i)/(z + i)
            let den = x * x + (y + 1.0).powi(2);
            let wr = (x * x + y * y - 1.0) / den;
            let wi = -2.0 * x / den;
            let s = 1.0 + wr * wr + wi * wi;
            (2.0 * wr / s, 2.0 * wi / s)
        }
    }
}

pub fn from_klein(k: (f64, f64)) -> HPoint {
    let r2 = (k.0 * k.0 + k.1 * k.1).min(1.0);
    let f = 1.0 / (1.0 + (1.0 - r2).sqrt());
    let (wr, wi) = (k.0 * f, k.1 * f);
    // z = i(1 + w)/(1 − w)
    let (dr, di) = (1.0 - wr, -wi);
    let den = dr * dr + di * di;
    let (nr, ni) = (1.0 + wr, wi);
    let re = (nr * dr + ni * di) / den;
    let im = (ni * dr - nr * di) / den;
    HPoint::Interior { x: -im, y: re.max(f64::MIN_POSITIVE) }
}
