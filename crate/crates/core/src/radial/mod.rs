//! Radial algebra of the regular tree and the moment criterion for candidate elements.

mod supported;
mod tree;

pub use supported::{
    criterion_check, criterion_check_with, inverse_closed_transversal, is_prime_u64, moment_of_x, moment_of_x_with,
    multiplicativity_check_part3, powers_up_to, self_adjoint_coset_sum, support_class, support_projection,
    support_projections, CosetFamily, CriterionReport, MomentRow, SupportLabel, SupportTermJson,
    SupportedGroupElement, SUPPORT_CAP,
};
pub use tree::{closed_walks_by_enumeration, kesten_moment, kesten_table, radial_multiply, KestenRow, RadialElement};
