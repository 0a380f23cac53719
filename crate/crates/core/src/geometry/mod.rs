//! Bounded 4D domains, quadrature rules and check reports.

mod domain;
mod quadrature;
mod report;

pub use domain::Domain;
pub use quadrature::{
    boundary_integral, eps_sphere_integral, gauss_legendre, hyperspherical, reduce,
    reduce_with_mass, singular_split_radius, singular_volume_integral, unit_sphere_rule,
    volume_integral, Compensated, QuadNode, QuadratureRule, RuleKind,
};
pub use report::{CheckReport, REL_FLOOR};
