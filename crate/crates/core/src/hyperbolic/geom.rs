use crate::exact::ProjectiveMatrix;

/// Relative tolerance for point and sidedness comparisons.
pub const EPS: f64 = 1e-12;

/// A point of the closed upper half-plane H ∪ R ∪ {∞}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HPoint {
    Interior { x: f64, y: f64 },
    Ideal(f64),
    Infinity,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Self {
        assert!(y > 0.0, "interior points need y > 0");
        HPoint::Interior { x, y }
    }

    pub fn i() -> Self {
        HPoint::Interior { x: 0.0, y: 1.0 }
    }

    pub fn is_ideal(&self) -> bool {
        !matches!(self, HPoint::Interior { .. })
    }

    /// Real part; `None` at ∞.
    pub fn x(&self) -> Option<f64> {
        match *self {
            HPoint::Interior { x, .. } | HPoint::Ideal(x) => Some(x),
            HPoint::Infinity => None,
        }
    }

    /// Imaginary part, zero on the real line and infinite at ∞.
    pub fn y(&self) -> f64 {
        match *self {
            HPoint::Interior { y, .. } => y,
            HPoint::Ideal(_) => 0.0,
            HPoint::Infinity => f64::INFINITY,
        }
    }

    pub fn approx_eq(&self, o: &HPoint) -> bool {
        match (self, o) {
            (HPoint::Infinity, HPoint::Infinity) => true,
            (HPoint::Infinity, _) | (_, HPoint::Infinity) => false,
            _ => {
                let (x1, x2) = (self.x().unwrap(), o.x().unwrap());
                let (y1, y2) = (self.y(), o.y());
                let scale = 1.0 + x1.abs().max(x2.abs()).max(y1).max(y2);
                (x1 - x2).abs() <= 1e-11 * scale && (y1 - y2).abs() <= 1e-11 * scale
            }
        }
    }

    pub fn hyperbolic_distance(&self, o: &HPoint) -> f64 {
        match (*self, *o) {
            (HPoint::Interior { x: x1, y: y1 }, HPoint::Interior { x: x2, y: y2 }) => {
                let d2 = (x1 - x2).powi(2) + (y1 - y2).powi(2);
                (1.0 + d2 / (2.0 * y1 * y2)).acosh()
            }
            _ => f64::INFINITY,
        }
    }
}

/// Möbius action of [[a,b],[c,d]] with real entries; anti-holomorphic when ad − bc < 0.
pub fn mobius_apply_f64(m: [f64; 4], z: HPoint) -> HPoint {
    let [a, b, c, d] = m;
    let det = a * d - b * c;
    match z {
        HPoint::Infinity => {
            if c == 0.0 {
                HPoint::Infinity
            } else {
                HPoint::Ideal(a / c)
            }
        }
        HPoint::Ideal(x) => {
            let den = c * x + d;
            if den == 0.0 {
                HPoint::Infinity
            } else {
                HPoint::Ideal((a * x + b) / den)
            }
        }
        HPoint::Interior { x, y } => {
            // Use z̄ for negative determinant so the image stays in H.
            let y = if det < 0.0 { -y } else { y };
            let (nr, ni) = (a * x + b, a * y);
            let (dr, di) = (c * x + d, c * y);
            let den = dr * dr + di * di;
            let re = (nr * dr + ni * di) / den;
            let im = (ni * dr - nr * di) / den;
            HPoint::Interior { x: re, y: im.abs().max(f64::MIN_POSITIVE) }
        }
    }
}

pub fn mobius_apply(g: &ProjectiveMatrix, z: HPoint) -> HPoint {
    mobius_apply_f64(g.to_f64(), z)
}

/// A complete geodesic of H.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Geodesic {
    Vertical(f64),
    Circle { center: f64, radius: f64 },
}

impl Geodesic {
    /// The geodesic through two distinct points.
    pub fn through(u: HPoint, v: HPoint) -> Geodesic {
        match (u, v) {
            (HPoint::Infinity, w) | (w, HPoint::Infinity) => Geodesic::Vertical(w.x().expect("distinct points")),
            _ => {
                let (x1, y1, x2, y2) = (u.x().unwrap(), u.y(), v.x().unwrap(), v.y());
                let scale = 1.0 + x1.abs().max(x2.abs()).max(y1).max(y2);
                if (x1 - x2).abs() <= EPS * scale {
                    Geodesic::Vertical(0.5 * (x1 + x2))
                } else {
                    let center = (x1 * x1 + y1 * y1 - x2 * x2 - y2 * y2) / (2.0 * (x1 - x2));
                    let radius = ((x1 - center).powi(2) + y1 * y1).sqrt();
                    Geodesic::Circle { center, radius }
                }
            }
        }
    }

    /// The common point of two distinct geodesics in the closed half-plane, if any.
    pub fn intersect(&self, o: &Geodesic) -> Option<HPoint> {
        match (*self, *o) {
            (Geodesic::Vertical(a), Geodesic::Vertical(b)) => {
                if a == b {
                    None
                } else {
                    Some(HPoint::Infinity)
                }
            }
            (Geodesic::Vertical(a), Geodesic::Circle { center, radius })
            | (Geodesic::Circle { center, radius }, Geodesic::Vertical(a)) => {
                let h = radius * radius - (a - center).powi(2);
                point_or_ideal(a, h, radius)
            }
            (Geodesic::Circle { center: c1, radius: r1 }, Geodesic::Circle { center: c2, radius: r2 }) => {
                if c1 == c2 {
                    return None;
                }
                let x = (r1 * r1 - r2 * r2 + c2 * c2 - c1 * c1) / (2.0 * (c2 - c1));
                let h = r1 * r1 - (x - c1).powi(2);
                point_or_ideal(x, h, r1.max(r2))
            }
        }
    }

    /// Unit tangent at an interior point `z` of the geodesic, pointing toward `w`.
    pub fn tangent_toward(&self, z: HPoint, w: HPoint) -> (f64, f64) {
        let (x, y) = (z.x().unwrap(), z.y());
        match *self {
            Geodesic::Vertical(_) => {
                if w.y() > y {
                    (0.0, 1.0)
                } else {
                    (0.0, -1.0)
                }
            }
            Geodesic::Circle { center, radius } => {
                let (tx, ty) = (-y / radius, (x - center) / radius);
                let toward = w.x().map_or(0.0, |wx| wx - x);
                if tx * toward > 0.0 {
                    (tx, ty)
                } else {
                    (-tx, -ty)
                }
            }
        }
    }
}

fn point_or_ideal(x: f64, h: f64, scale: f64) -> Option<HPoint> {
    let tol = 1e-12 * scale * scale.max(1.0);
    if h < -tol {
        None
    } else if h <= tol {
        Some(HPoint::Ideal(x))
    } else {
        Some(HPoint::Interior { x, y: h.sqrt() })
    }
}

/// A closed geodesic half-plane, described by a side function that is
/// nonnegative exactly on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HalfPlane {
    /// Re z ≤ a.
    LeftOf(f64),
    /// Re z ≥ a.
    RightOf(f64),
    /// |z − c| ≤ r.
    InsideCircle { center: f64, radius: f64 },
    /// |z − c| ≥ r.
    OutsideCircle { center: f64, radius: f64 },
}

impl HalfPlane {
    pub fn boundary(&self) -> Geodesic {
        match *self {
            HalfPlane::LeftOf(a) | HalfPlane::RightOf(a) => Geodesic::Vertical(a),
            HalfPlane::InsideCircle { center, radius } | HalfPlane::OutsideCircle { center, radius } => {
                Geodesic::Circle { center, radius }
            }
        }
    }

    pub fn complement(&self) -> HalfPlane {
        match *self {
            HalfPlane::LeftOf(a) => HalfPlane::RightOf(a),
            HalfPlane::RightOf(a) => HalfPlane::LeftOf(a),
            HalfPlane::InsideCircle { center, radius } => HalfPlane::OutsideCircle { center, radius },
            HalfPlane::OutsideCircle { center, radius } => HalfPlane::InsideCircle { center, radius },
        }
    }

    /// Side of the geodesic `g` that contains the interior point `z`.
    pub fn containing(g: Geodesic, z: HPoint) -> HalfPlane {
        let h = match g {
            Geodesic::Vertical(a) => HalfPlane::LeftOf(a),
            Geodesic::Circle { center, radius } => HalfPlane::InsideCircle { center, radius },
        };
        if h.side(z) >= 0.0 {
            h
        } else {
            h.complement()
        }
    }

    pub fn side(&self, z: HPoint) -> f64 {
        let dist2 = |c: f64| match z {
            HPoint::Infinity => f64::INFINITY,
            _ => (z.x().unwrap() - c).powi(2) + z.y().powi(2),
        };
        match *self {
            HalfPlane::LeftOf(a) => z.x().map_or(0.0, |x| a - x),
            HalfPlane::RightOf(a) => z.x().map_or(0.0, |x| x - a),
            HalfPlane::InsideCircle { center, radius } => radius * radius - dist2(center),
            HalfPlane::OutsideCircle { center, radius } => dist2(center) - radius * radius,
        }
    }

    /// Scale of the side function, for relative tolerances.
    pub fn scale(&self) -> f64 {
        match *self {
            HalfPlane::LeftOf(a) | HalfPlane::RightOf(a) => 1.0 + a.abs(),
            HalfPlane::InsideCircle { center, radius } | HalfPlane::OutsideCircle { center, radius } => {
                (radius + center.abs()).powi(2).max(radius * radius).max(1e-300)
            }
        }
    }

    pub fn contains(&self, z: HPoint) -> bool {
        self.side(z) >= -EPS * self.scale()
    }
}
