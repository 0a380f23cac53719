use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::quat::Quaternion;

/// Floor for the relative-error denominator.
pub const REL_FLOOR: f64 = 1e-300;

/// Outcome of one identity verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub parameters: BTreeMap<String, String>,
    pub lhs: Quaternion,
    pub rhs: Quaternion,
    pub abs_err: f64,
    pub rel_err: f64,
    pub node_counts: Vec<usize>,
    pub elapsed_seconds: f64,
    pub pass: bool,
}

impl CheckReport {
    /// Compares `lhs` against `rhs`; `pass` starts false until [`judge`](Self::judge) is called.
    pub fn new(check_name: impl Into<String>, lhs: Quaternion, rhs: Quaternion) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = abs_err / lhs.norm().max(rhs.norm()).max(REL_FLOOR);
        Self {
            check_name: check_name.into(),
            parameters: BTreeMap::new(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            node_counts: Vec::new(),
            elapsed_seconds: 0.0,
            pass: false,
        }
    }

    pub fn param(mut self, key: &str, value: impl Display) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn nodes(mut self, counts: impl IntoIterator<Item = usize>) -> Self {
        self.node_counts.extend(counts);
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_seconds = start.elapsed().as_secs_f64();
        self
    }

    /// Passes iff `abs_err < tol·scale`.
    pub fn judge(mut self, tol: f64, scale: f64) -> Self {
        self.pass = self.abs_err < tol * scale.max(REL_FLOOR);
        self.param("tolerance", format!("{tol:e}"))
            .param("scale", format!("{scale:e}"))
    }

    /// Passes iff `rel_err < tol`.
    pub fn judge_relative(self, tol: f64) -> Self {
        let scale = self.lhs.norm().max(self.rhs.norm());
        self.judge(tol, scale)
    }
}
