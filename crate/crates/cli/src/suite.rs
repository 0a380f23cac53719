use std::path::Path;

use fueter_core::CheckReport;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checks::run_check;
use crate::config::{json_error, read, RunConfig};
use crate::error::{CliError, CliResult, EXIT_FAIL, EXIT_NUMERICAL, EXIT_PASS};

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteFile {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    checks: Vec<RunConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub name: String,
    pub check: String,
    /// Whether the outcome matched the expectation.
    pub pass: bool,
    pub expect_failure: bool,
    pub report: Option<CheckReport>,
    /// Set when the check could not be evaluated.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errored: usize,
    pub pass: bool,
    /// Sorted by name.
    pub checks: Vec<SuiteEntry>,
}

impl SuiteSummary {
    pub fn exit_code(&self) -> i32 {
        if self.errored > 0 {
            EXIT_NUMERICAL
        } else if self.failed > 0 {
            EXIT_FAIL
        } else {
            EXIT_PASS
        }
    }
}

/// Parse a suite document, validating every entry's check name.
pub fn parse_suite(text: &str) -> CliResult<(Option<String>, Vec<RunConfig>)> {
    let file: SuiteFile = serde_json::from_str(text).map_err(|e| json_error("suite", &e))?;
    for (i, c) in file.checks.iter().enumerate() {
        c.check()
            .map_err(|e| CliError::usage(format!("suite entry {i}: {e}")))?;
    }
    Ok((file.name, file.checks))
}

pub fn run_suite_configs(name: &str, configs: &[RunConfig]) -> CliResult<SuiteSummary> {
    let outcomes: Vec<CliResult<CheckReport>> = configs.par_iter().map(run_check).collect();
    let mut checks = Vec::with_capacity(configs.len());
    for (cfg, outcome) in configs.iter().zip(outcomes) {
        let check = cfg.check()?.name().to_string();
        let entry = match outcome {
            Ok(report) => SuiteEntry {
                name: cfg.label(),
                check,
                pass: cfg.satisfied_by(&report),
                expect_failure: cfg.expect_failure,
                report: Some(report),
                error: None,
            },
            Err(e @ CliError::Numerical(fueter_core::Error::Precondition(_)))
            | Err(e @ CliError::Usage(_)) => {
                return Err(CliError::usage(format!(
                    "suite entry {:?}: {e}",
                    cfg.label()
                )))
            }
            Err(e) => SuiteEntry {
                name: cfg.label(),
                check,
                pass: false,
                expect_failure: cfg.expect_failure,
                report: None,
                error: Some(e.to_string()),
            },
        };
        checks.push(entry);
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let errored = checks.iter().filter(|c| c.error.is_some()).count();
    let passed = checks.iter().filter(|c| c.pass).count();
    Ok(SuiteSummary {
        suite: name.to_string(),
        total: checks.len(),
        passed,
        failed: checks.len() - passed - errored,
        errored,
        pass: passed == checks.len(),
        checks,
    })
}

/// Run every check listed in the suite file at `path`.
pub fn run_suite(path: &Path) -> CliResult<SuiteSummary> {
    let text = read(path)?;
    let (name, configs) =
        parse_suite(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let name = name.unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    run_suite_configs(&name, &configs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suite_passes() {
        let (_, configs) = parse_suite(r#"{"checks": []}"#).unwrap();
        let s = run_suite_configs("empty", &configs).unwrap();
        assert_eq!((s.total, s.pass, s.exit_code()), (0, true, 0));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err =
            parse_suite("{\n  \"checks\": [\n    {\"check\": \"gauss\",}\n  ]\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(parse_suite(r#"{"checks": [{"check": "foo"}]}"#).is_err());
    }

    #[test]
    fn summary_is_sorted_and_counts_failures() {
        let (_, configs) = parse_suite(
            r#"{"checks": [
                {"name": "z-kernel", "check": "kernel-identities", "samples": 100},
                {"name": "a-negative", "check": "classical-probe", "fields": ["identity"], "rhs_field": "const:0"}
            ]}"#,
        )
        .unwrap();
        let s = run_suite_configs("t", &configs).unwrap();
        let names: Vec<_> = s.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["a-negative", "z-kernel"]);
        assert_eq!((s.passed, s.failed, s.exit_code()), (1, 1, EXIT_FAIL));
    }
}
