//! Resolving a [`RunConfig`] into a core check and its report.

use std::time::Instant;

use fueter_core::identities::{self, Resolutions, WeakOptions, WeakResidual};
use fueter_core::kernel::{kernel_identities_check, kernel_regularity_check};
use fueter_core::sampling::Sampler;
use fueter_core::{
    CheckReport, Domain, FdConfig, QuadratureRule, Quaternion, QuaternionField, TestFunction,
};

use crate::config::{Check, RunConfig};
use crate::error::{CliError, CliResult};
use crate::spec::{parse_domain, parse_test_function, FieldSpec, ResolutionInput};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Absolute deviations at or below this multiple of the target magnitude are rounding noise.
pub const FLOOR_RTOL: f64 = 1e-13;

const OFF_AXIS_BALL: &str = "ball:2,2,2,0,0.8";

struct Defaults {
    domain: &'static str,
    fields: &'static [&'static str],
    rhs_field: Option<&'static str>,
    test_fn: Option<&'static str>,
    point: Option<[f64; 4]>,
    resolution: Option<&'static str>,
    tol: f64,
}

fn defaults(check: Check) -> Defaults {
    let base = Defaults {
        domain: "unit-ball",
        fields: &[],
        rhs_field: None,
        test_fn: None,
        point: None,
        resolution: None,
        tol: 1e-6,
    };
    match check {
        Check::Gauss => Defaults {
            fields: &["coord:0", "coord:1", "coord:2", "coord:3"],
            ..base
        },
        Check::Green => Defaults {
            fields: &["bump:0.1,0,0.2,0,0.5", "kernel:2.2,0,0,0"],
            tol: 1e-4,
            ..base
        },
        Check::SphereLimit => Defaults {
            fields: &["const:1,-2,0.5,3"],
            point: Some([0.5, 0.1, -0.2, 0.3]),
            tol: 1e-10,
            ..base
        },
        Check::KernelIdentities => Defaults { tol: 1e-12, ..base },
        Check::KernelRegularity => Defaults { tol: 1e-7, ..base },
        Check::TestfnKernel => Defaults {
            test_fn: Some("bump:0.1,-0.1,0,0.2,0.5"),
            tol: 1e-3,
            ..base
        },
        Check::NewtonPotential => Defaults {
            rhs_field: Some("const:-2"),
            resolution: Some("singular_radial=16,singular_angular=12"),
            tol: 1e-2,
            ..base
        },
        Check::Cauchy => Defaults {
            fields: &["kernel:2.5,0,0,0"],
            point: Some([0.2, 0.1, -0.3, 0.1]),
            tol: 1e-4,
            ..base
        },
        Check::Weak => Defaults {
            fields: &["kernel:2.2,0,0,0"],
            test_fn: Some("bump:0.1,0,0.2,0,0.5"),
            tol: 1e-4,
            ..base
        },
        Check::WeakInhom => Defaults {
            fields: &["identity"],
            rhs_field: Some("const:-2"),
            test_fn: Some("bump:0.1,0,0.2,0,0.5"),
            tol: 1e-3,
            ..base
        },
        Check::SemiweakCullen => Defaults {
            domain: OFF_AXIS_BALL,
            fields: &["power:2"],
            test_fn: Some("bump:2,2.1,2,0.1,0.6"),
            tol: 1e-3,
            ..base
        },
        Check::CullenRepresent => Defaults {
            domain: OFF_AXIS_BALL,
            fields: &["power:2"],
            point: Some([2.1, 1.8, 2.15, 0.3]),
            tol: 1e-3,
            ..base
        },
        Check::ClassicalProbe => Defaults {
            fields: &["kernel:2.5,0,0,0"],
            rhs_field: Some("const:0"),
            tol: 1e-7,
            ..base
        },
    }
}

/// A configuration with every default filled in.
struct Resolved {
    check: Check,
    domain: Domain,
    res: Resolutions,
    fd: FdConfig,
    tol: f64,
    seed: u64,
    cfg: RunConfig,
    defaults: Defaults,
}

impl Resolved {
    fn new(cfg: &RunConfig) -> CliResult<Self> {
        let check = cfg.check()?;
        let defaults = defaults(check);
        let domain = match &cfg.domain {
            Some(d) => d.resolve()?,
            None => parse_domain(defaults.domain)?,
        };
        let res = match (&cfg.resolution, defaults.resolution) {
            (Some(r), _) => r.resolve()?,
            (None, Some(text)) => text.parse::<ResolutionInput>()?.resolve()?,
            (None, None) => Resolutions::default(),
        };
        let base = FdConfig::default();
        let fd = FdConfig::new(
            cfg.fd_step.unwrap_or(base.step),
            cfg.fd_levels.unwrap_or(base.richardson_levels),
        )?;
        let tol = cfg.tol.unwrap_or(defaults.tol);
        if tol.is_nan() || tol < 0.0 {
            return Err(CliError::usage(format!(
                "tolerance must be non-negative, got {tol}"
            )));
        }
        Ok(Self {
            check,
            domain,
            res,
            fd,
            tol,
            seed: cfg.seed.unwrap_or(DEFAULT_SEED),
            cfg: cfg.clone(),
            defaults,
        })
    }

    fn rhs(&self) -> CliResult<Option<QuaternionField>> {
        let spec = self.cfg.rhs_field.as_deref().or(self.defaults.rhs_field);
        spec.map(|s| s.parse::<FieldSpec>()?.build(&self.domain, None, &self.res))
            .transpose()
    }

    fn rhs_required(&self) -> CliResult<QuaternionField> {
        self.rhs()?
            .ok_or_else(|| CliError::usage(format!("{} needs --rhs-field", self.check)))
    }

    fn fields(&self, count: usize) -> CliResult<Vec<QuaternionField>> {
        let specs: Vec<&str> = if self.cfg.fields.is_empty() {
            self.defaults.fields.to_vec()
        } else {
            self.cfg.fields.iter().map(String::as_str).collect()
        };
        if specs.len() != count {
            return Err(CliError::usage(format!(
                "{} takes {count} field(s), got {}",
                self.check,
                specs.len()
            )));
        }
        let rhs = self.rhs()?;
        specs
            .into_iter()
            .map(|s| {
                s.parse::<FieldSpec>()?
                    .build(&self.domain, rhs.as_ref(), &self.res)
            })
            .collect()
    }

    fn field(&self) -> CliResult<QuaternionField> {
        Ok(self.fields(1)?.remove(0))
    }

    fn test_fn(&self) -> CliResult<TestFunction> {
        let spec = self
            .cfg
            .test_fn
            .as_deref()
            .or(self.defaults.test_fn)
            .ok_or_else(|| CliError::usage(format!("{} needs --test-fn", self.check)))?;
        parse_test_function(spec)
    }

    fn point(&self) -> CliResult<Quaternion> {
        self.cfg
            .point
            .or(self
                .defaults
                .point
                .map(|[w, x, y, z]| Quaternion::new(w, x, y, z)))
            .ok_or_else(|| CliError::usage(format!("{} needs --point", self.check)))
    }

    fn weak_options(&self) -> WeakOptions {
        WeakOptions {
            quaternion_test_functions: self.cfg.quaternion_test_functions,
        }
    }

    /// Explicit probes, else `--point`, else seeded interior samples.
    fn probes(&self) -> Vec<Quaternion> {
        if !self.cfg.probes.is_empty() {
            return self.cfg.probes.clone();
        }
        if let Some(p) = self.cfg.point {
            return vec![p];
        }
        interior_samples(&self.domain, self.cfg.samples.unwrap_or(10), self.seed)
    }
}

/// Seeded points inside the central 80% of the domain.
pub fn interior_samples(d: &Domain, n: usize, seed: u64) -> Vec<Quaternion> {
    let mut s = Sampler::new(seed);
    (0..n)
        .map(|_| match *d {
            Domain::Ball4 { center, radius } => s.in_ball(center, 0.8 * radius),
            Domain::Box4 {
                min_corner,
                max_corner,
            } => {
                let (lo, hi) = (min_corner.to_array(), max_corner.to_array());
                let c: Vec<f64> = (0..4)
                    .map(|m| {
                        let pad = 0.1 * (hi[m] - lo[m]);
                        s.uniform(lo[m] + pad, hi[m] - pad)
                    })
                    .collect();
                Quaternion::new(c[0], c[1], c[2], c[3])
            }
        })
        .collect()
}

fn weak_report(name: &str, w: WeakResidual, tol: f64, start: Instant) -> CheckReport {
    CheckReport::new(name, w.value, Quaternion::ZERO)
        .param("test_function", &w.test_function)
        .param(
            "estimated_quadrature_error",
            format!("{:e}", w.estimated_quadrature_error),
        )
        .judge(tol, w.scale)
        .timed(start)
}

fn sphere_limit(r: &Resolved) -> CliResult<CheckReport> {
    let start = Instant::now();
    let f = r.field()?;
    let p = r.point()?;
    let eps = if r.cfg.eps.is_empty() {
        vec![0.2, 0.1, 0.05]
    } else {
        r.cfg.eps.clone()
    };
    let reports = identities::sphere_limit_check(p, &f, &eps, r.res.eps_sphere, r.tol)?;
    let target = reports[0].rhs;
    let floor = FLOOR_RTOL * target.norm().max(1.0);
    let mut order: Vec<(f64, &CheckReport)> = eps.iter().copied().zip(&reports).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    let monotone = order
        .windows(2)
        .all(|w| w[1].1.abs_err <= w[0].1.abs_err || w[1].1.abs_err <= floor);
    let smallest = order.last().expect("eps list is non-empty").1;
    let above: Vec<_> = order
        .iter()
        .filter(|(_, rep)| rep.abs_err > floor)
        .collect();
    let slope = identities::loglog_slope(
        &above.iter().map(|(e, _)| *e).collect::<Vec<_>>(),
        &above.iter().map(|(_, rep)| rep.abs_err).collect::<Vec<_>>(),
    );
    let mut report = CheckReport::new("sphere_limit", smallest.lhs, target)
        .param("field", f.name())
        .param("point", p)
        .param("monotone", monotone)
        .param(
            "empirical_order",
            slope.map_or("floor".to_string(), |s| format!("{s:.4}")),
        )
        .nodes(
            reports
                .iter()
                .flat_map(|rep| rep.node_counts.iter().copied()),
        );
    for (e, rep) in &order {
        report = report.param(&format!("deviation[eps={e}]"), format!("{:e}", rep.abs_err));
    }
    let all_within = reports.iter().all(|rep| rep.pass);
    let mut report = report.judge(r.tol, 1.0).timed(start);
    report.pass = all_within && monotone;
    Ok(report)
}

/// Run the check named in `cfg`.
pub fn run_check(cfg: &RunConfig) -> CliResult<CheckReport> {
    let r = Resolved::new(cfg)?;
    let start = Instant::now();
    let report = match r.check {
        Check::Gauss => {
            let f: [QuaternionField; 4] = r.fields(4)?.try_into().expect("four fields");
            identities::gauss_check(&r.domain, &f, &r.res, &r.fd, r.tol)?
        }
        Check::Green => {
            let f = r.fields(2)?;
            identities::green_check(&r.domain, &f[0], &f[1], &r.res, &r.fd, r.tol)?
        }
        Check::SphereLimit => sphere_limit(&r)?,
        Check::KernelIdentities => {
            kernel_identities_check(r.cfg.samples.unwrap_or(10_000), r.seed, r.tol)?
        }
        Check::KernelRegularity => {
            let pairs = Sampler::new(r.seed).pairs(r.cfg.samples.unwrap_or(100), 0.5, 2.0);
            kernel_regularity_check(&pairs, &r.fd, r.tol)?.param("seed", r.seed)
        }
        Check::TestfnKernel => {
            let phi = r.test_fn()?;
            let p = r.cfg.point.unwrap_or(phi.center);
            identities::test_function_kernel_check(&r.domain, &phi, p, &r.res, r.tol)?
        }
        Check::NewtonPotential => {
            let h = r.rhs_required()?;
            let g = identities::newton_potential_field(&r.domain, &h, &r.res);
            let probes = r.probes();
            let at = identities::newton_potential(&r.domain, &h, probes[0], &r.res)?;
            let mut rep =
                identities::classical_from_weak_probe(&r.domain, &g, &h, &probes, &r.fd, r.tol)?
                    .param("potential_at_first_probe", at);
            rep.check_name = "newton_potential".into();
            rep
        }
        Check::Cauchy => {
            let f = r.field()?;
            let p = r.point()?;
            let rec = identities::cauchy_represent(&r.domain, &f, p, &r.res)?;
            CheckReport::new("cauchy", rec, f.eval(p)?)
                .param("field", f.name())
                .param("point", p)
                .nodes([QuadratureRule::boundary(&r.domain, r.res.boundary)?.len()])
                .judge_relative(r.tol)
                .timed(start)
        }
        Check::Weak => {
            let f = r.field()?;
            let w =
                identities::weak_residual(&r.domain, &f, &r.test_fn()?, &r.res, &r.weak_options())?;
            weak_report("weak", w, r.tol, start).param("field", f.name())
        }
        Check::WeakInhom => {
            let (f, h) = (r.field()?, r.rhs_required()?);
            let w = identities::inhomogeneous_weak_residual(
                &r.domain,
                &f,
                &h,
                &r.test_fn()?,
                &r.res,
                &r.weak_options(),
            )?;
            weak_report("weak_inhom", w, r.tol, start)
                .param("field", f.name())
                .param("rhs_field", h.name())
        }
        Check::SemiweakCullen => {
            let f = r.field()?;
            let w = identities::semiweak_cullen_residual(
                &r.domain,
                &f,
                &r.test_fn()?,
                &r.res,
                &r.fd,
                &r.weak_options(),
            )?;
            weak_report("semiweak_cullen", w, r.tol, start).param("field", f.name())
        }
        Check::CullenRepresent => {
            let f = r.field()?;
            let p = r.point()?;
            let rec = identities::cullen_represent(&r.domain, &f, p, &r.res, &r.fd)?;
            CheckReport::new("cullen_represent", rec, f.eval(p)?)
                .param("field", f.name())
                .param("point", p)
                .nodes([
                    QuadratureRule::singular_volume(
                        &r.domain,
                        p,
                        r.res.singular_radial,
                        r.res.singular_angular,
                    )?
                    .len(),
                    QuadratureRule::boundary(&r.domain, r.res.boundary)?.len(),
                ])
                .judge_relative(r.tol)
                .timed(start)
        }
        Check::ClassicalProbe => {
            let (f, h) = (r.field()?, r.rhs_required()?);
            identities::classical_from_weak_probe(&r.domain, &f, &h, &r.probes(), &r.fd, r.tol)?
        }
    };
    Ok(report
        .param("domain", domain_text(&r.domain))
        .param("resolution", resolution_text(&r.res)))
}

fn domain_text(d: &Domain) -> String {
    match *d {
        Domain::Ball4 { center, radius } => format!("ball:{center},{radius}"),
        Domain::Box4 {
            min_corner,
            max_corner,
        } => format!("box:{min_corner},{max_corner}"),
    }
}

fn resolution_text(r: &Resolutions) -> String {
    format!(
        "volume={},boundary={},eps_sphere={},singular_radial={},singular_angular={},support_radial={}",
        r.volume, r.boundary, r.eps_sphere, r.singular_radial, r.singular_angular, r.support_radial
    )
}
