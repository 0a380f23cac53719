use crate::quat::Quaternion;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("inverse of the zero quaternion")]
    ZeroInverse,
    #[error("kernel evaluated at coincident points {0}")]
    CoincidentPoints(Quaternion),
    #[error("non-finite value of {what} at node {point}")]
    NonFinite { what: String, point: Quaternion },
    #[error("point {point} lies on the real axis (r = {r:e})")]
    DegenerateSlice { point: Quaternion, r: f64 },
    #[error("point {point} is too close to the axis plane t + zk")]
    AxisProximity { point: Quaternion },
    #[error("quadrature rule kind {found} where {expected} is required")]
    RuleKind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
