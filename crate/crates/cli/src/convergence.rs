use std::time::Instant;

use fueter_core::identities::loglog_slope;
use serde::{Deserialize, Serialize};

use crate::checks::{run_check, FLOOR_RTOL};
use crate::config::{Check, RunConfig};
use crate::error::{CliError, CliResult};
use crate::spec::ResolutionInput;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub resolution: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub elapsed_seconds: f64,
}

/// Errors of one check over a range of resolutions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub check: String,
    /// `eps` for the sphere limit, else the varied resolution family.
    pub variable: String,
    /// Ascending in `resolution`.
    pub rows: Vec<ConvergenceRow>,
    /// Decay order of the error: `−slope` against node counts, `+slope` against `ε`.
    /// `None` when fewer than two rows sit above the rounding floor.
    pub empirical_order: Option<f64>,
    /// The order to four decimals, or `floor`.
    pub order: String,
}

impl ConvergenceTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "check,variable,resolution,abs_err,rel_err,elapsed_seconds,empirical_order\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:e},{:e},{},{}\n",
                self.check,
                self.variable,
                r.resolution,
                r.abs_err,
                r.rel_err,
                r.elapsed_seconds,
                self.order
            ));
        }
        out
    }
}

/// Run `cfg` once per entry of `resolutions`. For the sphere limit the entries are the radii `ε`;
/// otherwise they are node counts applied to `family` (`all` or a single rule family).
pub fn run_convergence(
    cfg: &RunConfig,
    resolutions: &[f64],
    family: &str,
) -> CliResult<ConvergenceTable> {
    if resolutions.len() < 3 {
        return Err(CliError::usage(format!(
            "a convergence study needs at least 3 resolutions, got {}",
            resolutions.len()
        )));
    }
    let check = cfg.check()?;
    let sphere = check == Check::SphereLimit;
    let mut values = resolutions.to_vec();
    values.sort_by(f64::total_cmp);
    let mut rows = Vec::with_capacity(values.len());
    let mut floors = Vec::with_capacity(values.len());
    for &v in &values {
        let mut run = cfg.clone();
        if sphere {
            if v.is_nan() || v <= 0.0 {
                return Err(CliError::usage(format!(
                    "sphere radii must be positive, got {v}"
                )));
            }
            run.eps = vec![v];
        } else {
            if v.fract() != 0.0 || v < 1.0 {
                return Err(CliError::usage(format!(
                    "resolutions must be positive integers, got {v}"
                )));
            }
            let base = cfg
                .resolution
                .unwrap_or(ResolutionInput::Partial(Default::default()));
            run.resolution = Some(base.with_family(family, v as usize)?);
        }
        let start = Instant::now();
        let report = run_check(&run)?;
        floors
            .push(report.abs_err <= FLOOR_RTOL * report.lhs.norm().max(report.rhs.norm()).max(1.0));
        rows.push(ConvergenceRow {
            resolution: v,
            abs_err: report.abs_err,
            rel_err: report.rel_err,
            elapsed_seconds: start.elapsed().as_secs_f64(),
        });
    }
    let (xs, es): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .zip(&floors)
        .filter(|(_, floor)| !**floor)
        .map(|(r, _)| (r.resolution, r.abs_err))
        .unzip();
    let empirical_order = loglog_slope(&xs, &es).map(|s| if sphere { s } else { -s });
    Ok(ConvergenceTable {
        check: check.name().to_string(),
        variable: if sphere {
            "eps".into()
        } else {
            family.to_string()
        },
        rows,
        empirical_order,
        order: empirical_order.map_or("floor".to_string(), |o| format!("{o:.4}")),
    })
}
