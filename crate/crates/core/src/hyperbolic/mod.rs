//! Fundamental-domain geometry for the modular group acting on the upper half-plane.

mod domain;
mod geom;
mod polygon;
#[cfg(test)]
mod tests;

pub use domain::{
    double_coset_phi0_sum, fundamental_area, fundamental_area_by_quadrature, in_fundamental_domain, phi0, phi0_gram, psi0, psi0_gram, psi0_with,
    reduce_to_fundamental, tiles_meeting, DoubleCosetSum, GramReport, OverlapSum, OverlapTerm, TileHit, AREA_FLOOR,
    GRAM_TOL, REDUCTION_CAP, TILE_CAP,
};
pub use geom::{mobius_apply, mobius_apply_f64, Geodesic, HPoint, HalfPlane};
pub use polygon::{from_klein, to_klein, HyperbolicPolygon};
