//! Numerical quaternionic analysis: Fueter and Cullen operators, the
//! Cauchy–Fueter kernel, 4D quadrature, and executable checks of the integral
//! identities relating them.

mod error;

pub mod fields;
pub mod geometry;
pub mod identities;
pub mod kernel;
pub mod operators;
pub mod quat;
pub mod sampling;

pub use error::{Error, Result};
pub use fields::{QuaternionField, TestFunction};
pub use geometry::{CheckReport, Domain, QuadratureRule};
pub use operators::FdConfig;
pub use quat::Quaternion;
