//! Argument parsing and process-level behavior of the `fueter` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fueter_core::{CheckReport, Quaternion};
use serde::Serialize;

use crate::checks::run_check;
use crate::config::{Check, RunConfig};
use crate::convergence::run_convergence;
use crate::error::{CliError, CliResult, EXIT_FAIL, EXIT_PASS};
use crate::spec::{parse_quaternion, DomainInput, ResolutionInput};
use crate::suite::run_suite;

#[derive(Parser, Debug)]
#[command(
    name = "fueter",
    version,
    about = "Numerical checks of quaternionic integral identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Divergence theorem for four scalar-weighted components.
    Gauss(CheckArgs),
    /// Green's identity for a pair of fields.
    Green(CheckArgs),
    /// Shrinking-sphere limit of the kernel-weighted surface integral.
    SphereLimit(CheckArgs),
    /// Antisymmetry and norm law of the kernel over random pairs.
    KernelIdentities(CheckArgs),
    /// Left and right regularity of the kernel by finite differences.
    KernelRegularity(CheckArgs),
    /// Kernel against the right derivative of a test function.
    TestfnKernel(CheckArgs),
    /// Finite-difference Fueter derivative of the Newton potential.
    NewtonPotential(CheckArgs),
    /// Cauchy representation from boundary values.
    Cauchy(CheckArgs),
    /// Weak regularity residual.
    Weak(CheckArgs),
    /// Weak residual of the inhomogeneous equation.
    WeakInhom(CheckArgs),
    /// Semiweak Cullen residual.
    SemiweakCullen(CheckArgs),
    /// Representation formula for Cullen-regular fields.
    CullenRepresent(CheckArgs),
    /// Pointwise Fueter residual at probe points.
    ClassicalProbe(CheckArgs),
    /// Run one check at several resolutions and fit the error decay.
    Convergence(ConvergenceArgs),
    /// Run every check listed in a suite file.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Default)]
struct CheckArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// ball:w,x,y,z,R, box:w0,x0,y0,z0,w1,x1,y1,z1 or unit-ball.
    #[arg(long)]
    domain: Option<String>,
    /// Field spec; repeat for checks taking several fields.
    #[arg(long = "field")]
    fields: Vec<String>,
    #[arg(long)]
    rhs_field: Option<String>,
    /// bump:w,x,y,z,r[,a0,a1,a2,a3].
    #[arg(long)]
    test_fn: Option<String>,
    /// w,x,y,z.
    #[arg(long, value_parser = parse_quaternion_arg)]
    point: Option<Quaternion>,
    /// Probe point w,x,y,z; repeatable.
    #[arg(long = "probe", value_parser = parse_quaternion_arg)]
    probes: Vec<Quaternion>,
    /// Comma-separated sphere radii.
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    /// Node count for every rule family, or family=n pairs.
    #[arg(long)]
    resolution: Option<String>,
    #[arg(long)]
    fd_step: Option<f64>,
    #[arg(long)]
    fd_levels: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random samples or probes.
    #[arg(long)]
    samples: Option<usize>,
    /// Allow test functions with quaternion amplitude.
    #[arg(long)]
    quaternion_test_functions: bool,
    /// Treat a failing check as success, for negative controls.
    #[arg(long)]
    expect_failure: bool,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct ConvergenceArgs {
    /// Check to study.
    check: String,
    /// Comma-separated resolutions (sphere radii for sphere-limit).
    #[arg(long, value_delimiter = ',', required = true)]
    resolutions: Vec<f64>,
    /// Rule family to vary: all, volume, boundary, eps_sphere, singular_radial,
    /// singular_angular or support_radial.
    #[arg(long, default_value = "all")]
    vary: String,
    #[command(flatten)]
    args: CheckArgs,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    path: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_quaternion_arg(s: &str) -> Result<Quaternion, String> {
    parse_quaternion(s).map_err(|e| e.to_string())
}

impl CheckArgs {
    fn into_config(self, check: Option<&str>) -> CliResult<(RunConfig, Format)> {
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            check: check.map(str::to_string),
            name: None,
            domain: self.domain.map(DomainInput::Text),
            fields: self.fields,
            rhs_field: self.rhs_field,
            test_fn: self.test_fn,
            point: self.point,
            probes: self.probes,
            eps: self.eps,
            resolution: self
                .resolution
                .map(|r| r.parse::<ResolutionInput>())
                .transpose()?,
            fd_step: self.fd_step,
            fd_levels: self.fd_levels,
            tol: self.tol,
            seed: self.seed,
            samples: self.samples,
            quaternion_test_functions: self.quaternion_test_functions,
            expect_failure: self.expect_failure,
            out: self.out,
        };
        Ok((base.merged(flags), self.format))
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// One-row CSV of a report; parameters are omitted.
pub fn report_csv(r: &CheckReport) -> String {
    let q = |q: Quaternion| format!("{},{},{},{}", q.w, q.x, q.y, q.z);
    format!(
        "check_name,lhs_w,lhs_x,lhs_y,lhs_z,rhs_w,rhs_x,rhs_y,rhs_z,abs_err,rel_err,elapsed_seconds,pass\n\
         {},{},{},{:e},{:e},{},{}\n",
        r.check_name,
        q(r.lhs),
        q(r.rhs),
        r.abs_err,
        r.rel_err,
        r.elapsed_seconds,
        r.pass
    )
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    if let Some(path) = out {
        std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = stdout.write_all(text.as_bytes());
    Ok(())
}

fn execute(command: Command) -> CliResult<i32> {
    let code = |pass: bool| if pass { EXIT_PASS } else { EXIT_FAIL };
    match command {
        Command::Convergence(c) => {
            let check: Check = c.check.parse()?;
            let (cfg, format) = c.args.into_config(Some(check.name()))?;
            let table = run_convergence(&cfg, &c.resolutions, &c.vary)?;
            let text = match format {
                Format::Json => json(&table),
                Format::Csv => table.to_csv(),
            };
            emit(&text, cfg.out.as_deref())?;
            Ok(EXIT_PASS)
        }
        Command::Suite(s) => {
            let summary = run_suite(&s.path)?;
            emit(&json(&summary), s.out.as_deref())?;
            Ok(summary.exit_code())
        }
        other => {
            let (check, args) = match other {
                Command::Gauss(a) => (Check::Gauss, a),
                Command::Green(a) => (Check::Green, a),
                Command::SphereLimit(a) => (Check::SphereLimit, a),
                Command::KernelIdentities(a) => (Check::KernelIdentities, a),
                Command::KernelRegularity(a) => (Check::KernelRegularity, a),
                Command::TestfnKernel(a) => (Check::TestfnKernel, a),
                Command::NewtonPotential(a) => (Check::NewtonPotential, a),
                Command::Cauchy(a) => (Check::Cauchy, a),
                Command::Weak(a) => (Check::Weak, a),
                Command::WeakInhom(a) => (Check::WeakInhom, a),
                Command::SemiweakCullen(a) => (Check::SemiweakCullen, a),
                Command::CullenRepresent(a) => (Check::CullenRepresent, a),
                Command::ClassicalProbe(a) => (Check::ClassicalProbe, a),
                Command::Convergence(_) | Command::Suite(_) => unreachable!("handled above"),
            };
            let (cfg, format) = args.into_config(Some(check.name()))?;
            let report = run_check(&cfg)?;
            let text = match format {
                Format::Json => json(&report),
                Format::Csv => report_csv(&report),
            };
            emit(&text, cfg.out.as_deref())?;
            Ok(code(cfg.satisfied_by(&report)))
        }
    }
}

/// Parse `args` and run; returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["fueter", "bogus"]), 2);
        assert_eq!(run(["fueter", "cauchy", "--point", "1,2"]), 2);
        assert_eq!(run(["fueter", "cauchy", "--point", "3,0,0,0"]), 2);
        assert_eq!(
            run(["fueter", "convergence", "foo", "--resolutions", "1,2,3"]),
            2
        );
        assert_eq!(
            run(["fueter", "convergence", "cauchy", "--resolutions", "4,8"]),
            2
        );
    }

    #[test]
    fn tolerance_zero_fails() {
        assert_eq!(
            run([
                "fueter",
                "kernel-identities",
                "--samples",
                "10",
                "--tol",
                "0"
            ]),
            1
        );
        assert_eq!(run(["fueter", "kernel-identities", "--samples", "10"]), 0);
    }

    #[test]
    fn csv_report_shape() {
        let r = CheckReport::new("x", Quaternion::ONE, Quaternion::ONE).judge(1.0, 1.0);
        let csv = report_csv(&r);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
    }
}
