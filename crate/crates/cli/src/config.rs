use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fueter_core::Quaternion;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::spec::{DomainInput, ResolutionInput};

/// The registered identity checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Gauss,
    Green,
    SphereLimit,
    KernelIdentities,
    KernelRegularity,
    TestfnKernel,
    NewtonPotential,
    Cauchy,
    Weak,
    WeakInhom,
    SemiweakCullen,
    CullenRepresent,
    ClassicalProbe,
}

impl Check {
    pub const ALL: [Check; 13] = [
        Check::Gauss,
        Check::Green,
        Check::SphereLimit,
        Check::KernelIdentities,
        Check::KernelRegularity,
        Check::TestfnKernel,
        Check::NewtonPotential,
        Check::Cauchy,
        Check::Weak,
        Check::WeakInhom,
        Check::SemiweakCullen,
        Check::CullenRepresent,
        Check::ClassicalProbe,
    ];

    /// Subcommand name.
    pub fn name(self) -> &'static str {
        match self {
            Check::Gauss => "gauss",
            Check::Green => "green",
            Check::SphereLimit => "sphere-limit",
            Check::KernelIdentities => "kernel-identities",
            Check::KernelRegularity => "kernel-regularity",
            Check::TestfnKernel => "testfn-kernel",
            Check::NewtonPotential => "newton-potential",
            Check::Cauchy => "cauchy",
            Check::Weak => "weak",
            Check::WeakInhom => "weak-inhom",
            Check::SemiweakCullen => "semiweak-cullen",
            Check::CullenRepresent => "cullen-represent",
            Check::ClassicalProbe => "classical-probe",
        }
    }

    fn aliases(self) -> &'static [&'static str] {
        match self {
            Check::Gauss => &["gauss-check"],
            Check::Green => &["green-check"],
            Check::SphereLimit => &["sphere-limit-check"],
            Check::KernelIdentities => &["kernel-identities-check"],
            Check::KernelRegularity => &["kernel-regularity-check"],
            Check::TestfnKernel => &["test-function-kernel", "test-function-kernel-check"],
            Check::NewtonPotential => &[],
            Check::Cauchy => &["cauchy-represent"],
            Check::Weak => &["weak-residual"],
            Check::WeakInhom => &["inhomogeneous-weak-residual"],
            Check::SemiweakCullen => &["semiweak-cullen-residual"],
            Check::CullenRepresent => &[],
            Check::ClassicalProbe => &["classical-from-weak-probe"],
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = CliError;

    /// Accepts subcommand names and the underscore spellings of the operations.
    fn from_str(text: &str) -> CliResult<Self> {
        let key = text.trim().to_ascii_lowercase().replace('_', "-");
        Check::ALL
            .into_iter()
            .find(|c| c.name() == key || c.aliases().contains(&key.as_str()))
            .ok_or_else(|| {
                let known: Vec<_> = Check::ALL.iter().map(|c| c.name()).collect();
                CliError::usage(format!(
                    "unknown check {text:?}; known checks: {}",
                    known.join(", ")
                ))
            })
    }
}

/// Everything needed to run one check. Unset fields take the check's defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub check: Option<String>,
    /// Label used in suite summaries; defaults to the check name.
    pub name: Option<String>,
    pub domain: Option<DomainInput>,
    pub fields: Vec<String>,
    pub rhs_field: Option<String>,
    pub test_fn: Option<String>,
    pub point: Option<Quaternion>,
    pub probes: Vec<Quaternion>,
    pub eps: Vec<f64>,
    pub resolution: Option<ResolutionInput>,
    pub fd_step: Option<f64>,
    pub fd_levels: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub quaternion_test_functions: bool,
    /// Negative control: the run succeeds when the check fails.
    pub expect_failure: bool,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn for_check(check: Check) -> Self {
        Self {
            check: Some(check.name().to_string()),
            ..Self::default()
        }
    }

    pub fn check(&self) -> CliResult<Check> {
        self.check
            .as_deref()
            .ok_or_else(|| CliError::usage("no check named in the configuration"))?
            .parse()
    }

    pub fn label(&self) -> String {
        self.name
            .clone()
            .or_else(|| self.check.clone())
            .unwrap_or_default()
    }

    /// Whether `report` meets this configuration's expectation.
    pub fn satisfied_by(&self, report: &fueter_core::CheckReport) -> bool {
        report.pass != self.expect_failure
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| json_error("configuration", &e))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = read(path)?;
        Self::from_json(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    /// `overrides` wins wherever it sets a value.
    pub fn merged(self, overrides: RunConfig) -> Self {
        fn pick<T>(over: Vec<T>, base: Vec<T>) -> Vec<T> {
            if over.is_empty() {
                base
            } else {
                over
            }
        }
        Self {
            check: overrides.check.or(self.check),
            name: overrides.name.or(self.name),
            domain: overrides.domain.or(self.domain),
            fields: pick(overrides.fields, self.fields),
            rhs_field: overrides.rhs_field.or(self.rhs_field),
            test_fn: overrides.test_fn.or(self.test_fn),
            point: overrides.point.or(self.point),
            probes: pick(overrides.probes, self.probes),
            eps: pick(overrides.eps, self.eps),
            resolution: overrides.resolution.or(self.resolution),
            fd_step: overrides.fd_step.or(self.fd_step),
            fd_levels: overrides.fd_levels.or(self.fd_levels),
            tol: overrides.tol.or(self.tol),
            seed: overrides.seed.or(self.seed),
            samples: overrides.samples.or(self.samples),
            quaternion_test_functions: overrides.quaternion_test_functions
                || self.quaternion_test_functions,
            expect_failure: overrides.expect_failure || self.expect_failure,
            out: overrides.out.or(self.out),
        }
    }
}

pub(crate) fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn json_error(what: &str, e: &serde_json::Error) -> CliError {
    CliError::usage(format!(
        "{what} parse error at line {}, column {}: {e}",
        e.line(),
        e.column()
    ))
}
