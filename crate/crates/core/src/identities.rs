//! Integral identities of quaternionic analysis as executable checks.
//!
//! Product orders follow the displayed formulas exactly: `(D_r φ)·f`, `φ·h`,
//! `E·n·f`, `u·n·v` and `E·(2v/r)`. Weak formulations integrate over the
//! support ball of the test function, which lies inside the domain, so the
//! integrand is smooth up to the edge of the integration region.

use std::time::Instant;

use crate::fields::{QuaternionField, TestFunction};
use crate::geometry::{
    boundary_integral, eps_sphere_integral, reduce_with_mass, singular_volume_integral,
    volume_integral, CheckReport, Domain, QuadratureRule,
};
use crate::kernel::eval_kernel;
use crate::operators::{cullen_v, fueter_left, fueter_right, gradient, FdConfig, AXIS_THRESHOLD};
use crate::quat::Quaternion;
use crate::{Error, Result};

/// Node counts per rule family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Resolutions {
    pub volume: usize,
    pub boundary: usize,
    pub eps_sphere: usize,
    pub singular_radial: usize,
    pub singular_angular: usize,
    /// Radial nodes for integrals over the support ball of a bump, whose
    /// steep profile needs more radial than angular resolution.
    pub support_radial: usize,
}

impl Default for Resolutions {
    fn default() -> Self {
        Self {
            volume: 24,
            boundary: 32,
            eps_sphere: 24,
            singular_radial: 32,
            singular_angular: 24,
            support_radial: 48,
        }
    }
}

impl Resolutions {
    /// Resolution `n` everywhere except `2n` support radial nodes.
    pub fn uniform(n: usize) -> Self {
        Self {
            volume: n,
            boundary: n,
            eps_sphere: n,
            singular_radial: n,
            singular_angular: n,
            support_radial: 2 * n,
        }
    }

    fn coarse(&self) -> Self {
        let half = |n: usize| n.div_ceil(2).max(4);
        Self {
            volume: half(self.volume),
            boundary: half(self.boundary),
            eps_sphere: half(self.eps_sphere),
            singular_radial: half(self.singular_radial),
            singular_angular: half(self.singular_angular),
            support_radial: half(self.support_radial),
        }
    }
}

/// Options for weak-formulation checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WeakOptions {
    /// Permit bumps with non-real amplitude. The two product orders `φ·h` and
    /// `h·φ` then differ and only the displayed order is evaluated.
    pub quaternion_test_functions: bool,
}

/// Value of a weak-formulation functional.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakResidual {
    pub value: Quaternion,
    pub test_function: String,
    /// `|I(n) − I(n/2)|` between the requested and a half-resolution rule.
    pub estimated_quadrature_error: f64,
    /// Integral of the summed magnitudes of the integrand terms.
    pub scale: f64,
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}

fn require_interior(d: &Domain, p: Quaternion) -> Result<()> {
    require(d.contains(p), || {
        format!("point {p} is not interior to the domain")
    })
}

fn require_test_function(d: &Domain, phi: &TestFunction, opts: &WeakOptions) -> Result<()> {
    require(phi.support().ball_strictly_inside(d), || {
        format!(
            "support of {} is not strictly inside the domain",
            phi.name()
        )
    })?;
    require(phi.is_real() || opts.quaternion_test_functions, || {
        format!(
            "{} has a non-real amplitude; enable quaternion test functions to use it",
            phi.name()
        )
    })
}

/// `∫_∂Ω Σ f_m n_m dS` against `∫_Ω Σ ∂f_m/∂x_m dV`; passes on relative agreement within `tol`.
pub fn gauss_check(
    d: &Domain,
    fields: &[QuaternionField; 4],
    res: &Resolutions,
    cfg: &FdConfig,
    tol: f64,
) -> Result<CheckReport> {
    let start = Instant::now();
    let brule = QuadratureRule::boundary(d, res.boundary)?;
    let vrule = QuadratureRule::volume(d, res.volume)?;
    let lhs = boundary_integral(
        d,
        |q, n| {
            let mut acc = Quaternion::ZERO;
            for (m, f) in fields.iter().enumerate() {
                acc += f.eval(q)? * n.component(m);
            }
            Ok(acc)
        },
        &brule,
    )?;
    let rhs = volume_integral(
        d,
        |q| {
            let mut acc = Quaternion::ZERO;
            for (m, f) in fields.iter().enumerate() {
                acc += gradient(f, q, cfg)?[m];
            }
            Ok(acc)
        },
        &vrule,
    )?;
    let names: Vec<_> = fields.iter().map(|f| f.name().to_string()).collect();
    Ok(CheckReport::new("gauss", lhs, rhs)
        .param("domain", format!("{d:?}"))
        .param("fields", names.join(";"))
        .nodes([brule.len(), vrule.len()])
        .judge_relative(tol)
        .timed(start))
}

/// `∫_Ω (D_r u)·v + u·(D_l v) dV` against `∫_∂Ω u·n·v dS`.
///
/// The scale for the pass test is `max(|lhs|, |rhs|, ∫_Ω |u||v| dV)`.
pub fn green_check(
    d: &Domain,
    u: &QuaternionField,
    v: &QuaternionField,
    res: &Resolutions,
    cfg: &FdConfig,
    tol: f64,
) -> Result<CheckReport> {
    let start = Instant::now();
    // When either factor is supported in a ball inside the domain, both integrands vanish
    // outside that ball and on the boundary.
    let inner = [u.support(), v.support()]
        .into_iter()
        .flatten()
        .find(|s| s.ball_strictly_inside(d));
    let region = inner.unwrap_or(*d);
    let vrule = match inner {
        Some(ball) => QuadratureRule::ball_volume(&ball, res.support_radial, res.volume)?,
        None => QuadratureRule::volume(d, res.volume)?,
    };
    let lhs = volume_integral(
        &region,
        |q| Ok(fueter_right(u, q, cfg)? * v.eval(q)? + u.eval(q)? * fueter_left(v, q, cfg)?),
        &vrule,
    )?;
    let brule = QuadratureRule::boundary(d, res.boundary)?;
    let rhs = boundary_integral(d, |q, n| Ok(u.eval(q)? * n * v.eval(q)?), &brule)?;
    let mass = volume_integral(
        &region,
        |q| Ok(Quaternion::real(u.eval(q)?.norm() * v.eval(q)?.norm())),
        &vrule,
    )?
    .w;
    let scale = lhs.norm().max(rhs.norm()).max(mass);
    Ok(CheckReport::new("green", lhs, rhs)
        .param("domain", format!("{d:?}"))
        .param("u", u.name())
        .param("v", v.name())
        .param("mass_scale", format!("{mass:e}"))
        .param("volume_region", format!("{region:?}"))
        .nodes([vrule.len(), brule.len()])
        .judge(tol, scale)
        .timed(start))
}

/// `∫_{|q−p|=ε} E(q,p)·n(q)·f(q) dS` against `f(p)` for each `ε`, with `n` pointing away
/// from `p`. Each report passes when the deviation is below `tol` (absolute).
pub fn sphere_limit_check(
    p: Quaternion,
    f: &QuaternionField,
    eps_list: &[f64],
    sphere_resolution: usize,
    tol: f64,
) -> Result<Vec<CheckReport>> {
    let rule = QuadratureRule::eps_sphere(sphere_resolution)?;
    let target = f.eval(p)?;
    eps_list
        .iter()
        .map(|&eps| {
            let start = Instant::now();
            let lhs = eps_sphere_integral(
                p,
                eps,
                |q, n| Ok(eval_kernel(q, p)? * n * f.eval(q)?),
                &rule,
            )?;
            Ok(CheckReport::new("sphere_limit", lhs, target)
                .param("eps", eps)
                .param("field", f.name())
                .param("point", p)
                .nodes([rule.len()])
                .judge(tol, 1.0)
                .timed(start))
        })
        .collect()
}

fn kernel_weighted_test_integral(
    phi: &TestFunction,
    p: Quaternion,
    res: &Resolutions,
) -> Result<(Quaternion, usize)> {
    let support = phi.support();
    let integrand = |q: Quaternion| Ok(phi.fueter_right(q) * eval_kernel(q, p)?);
    if support.contains(p) {
        let rule = QuadratureRule::singular_volume(
            &support,
            p,
            res.singular_radial,
            res.singular_angular,
        )?;
        Ok((
            singular_volume_integral(&support, p, integrand, &rule)?,
            rule.len(),
        ))
    } else {
        let rule = QuadratureRule::ball_volume(&support, res.support_radial, res.volume)?;
        Ok((volume_integral(&support, integrand, &rule)?, rule.len()))
    }
}

/// `∫_Ω (D_r φ)(q)·E(q,p) dV_q` against `−φ(p)`.
///
/// When `φ(p) = 0` the scale for the pass test is the bump peak, otherwise the
/// larger of the two magnitudes.
pub fn test_function_kernel_check(
    d: &Domain,
    phi: &TestFunction,
    p: Quaternion,
    res: &Resolutions,
    tol: f64,
) -> Result<CheckReport> {
    let start = Instant::now();
    require_interior(d, p)?;
    require(phi.support().ball_strictly_inside(d), || {
        format!(
            "support of {} is not strictly inside the domain",
            phi.name()
        )
    })?;
    let (lhs, nodes) = kernel_weighted_test_integral(phi, p, res)?;
    let rhs = -phi.value(p);
    let scale = if rhs == Quaternion::ZERO {
        phi.peak()
    } else {
        lhs.norm().max(rhs.norm())
    };
    Ok(CheckReport::new("testfn_kernel", lhs, rhs)
        .param("test_function", phi.name())
        .param("point", p)
        .nodes([nodes])
        .judge(tol, scale)
        .timed(start))
}

/// `g(p) = −∫_Ω E(q,p)·h(q) dV_q`.
pub fn newton_potential(
    d: &Domain,
    h: &QuaternionField,
    p: Quaternion,
    res: &Resolutions,
) -> Result<Quaternion> {
    require_interior(d, p)?;
    let rule = QuadratureRule::singular_volume(d, p, res.singular_radial, res.singular_angular)?;
    Ok(-singular_volume_integral(
        d,
        p,
        |q| Ok(eval_kernel(q, p)? * h.eval(q)?),
        &rule,
    )?)
}

/// The potential `p ↦ g(p)` as a field; evaluating it runs the singular quadrature.
pub fn newton_potential_field(
    d: &Domain,
    h: &QuaternionField,
    res: &Resolutions,
) -> QuaternionField {
    let (d, h, res) = (*d, h.clone(), *res);
    QuaternionField::new(format!("newton[{}]", h.name()), move |p| {
        newton_potential(&d, &h, p, &res)
    })
}

/// `∫_∂Ω E(q,p)·n(q)·f(q) dS_q`, which reproduces `f(p)` for left-regular `f`.
pub fn cauchy_represent(
    d: &Domain,
    f: &QuaternionField,
    p: Quaternion,
    res: &Resolutions,
) -> Result<Quaternion> {
    require_interior(d, p)?;
    let rule = QuadratureRule::boundary(d, res.boundary)?;
    boundary_integral(d, |q, n| Ok(eval_kernel(q, p)? * n * f.eval(q)?), &rule)
}

fn support_integral<F>(phi: &TestFunction, res: &Resolutions, integrand: F) -> Result<WeakResidual>
where
    F: Fn(Quaternion) -> Result<[Quaternion; 2]> + Sync,
{
    let support = phi.support();
    let run = |res: Resolutions| -> Result<(Quaternion, f64)> {
        let rule = QuadratureRule::ball_volume(&support, res.support_radial, res.volume)?;
        reduce_with_mass(rule.nodes(), |node| {
            let [a, b] = integrand(node.point)?;
            Ok((a + b, a.norm() + b.norm()))
        })
    };
    let (value, scale) = run(*res)?;
    let (coarse, _) = run(res.coarse())?;
    Ok(WeakResidual {
        value,
        test_function: phi.name(),
        estimated_quadrature_error: (value - coarse).norm(),
        scale,
    })
}

/// `∫_Ω (D_r φ)·f dV`; zero for weakly left-regular `f`.
pub fn weak_residual(
    d: &Domain,
    f: &QuaternionField,
    phi: &TestFunction,
    res: &Resolutions,
    opts: &WeakOptions,
) -> Result<WeakResidual> {
    require_test_function(d, phi, opts)?;
    support_integral(phi, res, |q| {
        Ok([phi.fueter_right(q) * f.eval(q)?, Quaternion::ZERO])
    })
}

/// `∫_Ω (D_r φ)·f + φ·h dV`; zero when `f` weakly solves `D_l f = h`.
pub fn inhomogeneous_weak_residual(
    d: &Domain,
    f: &QuaternionField,
    h: &QuaternionField,
    phi: &TestFunction,
    res: &Resolutions,
    opts: &WeakOptions,
) -> Result<WeakResidual> {
    require_test_function(d, phi, opts)?;
    support_integral(phi, res, |q| {
        Ok([phi.fueter_right(q) * f.eval(q)?, phi.value(q) * h.eval(q)?])
    })
}

/// `∫_Ω (D_r φ)·f dV − ∫_Ω 2·v·φ/r dV` with `v = ½ ∂f/∂ι`; zero for semiweakly C-regular `f`.
pub fn semiweak_cullen_residual(
    d: &Domain,
    f: &QuaternionField,
    phi: &TestFunction,
    res: &Resolutions,
    cfg: &FdConfig,
    opts: &WeakOptions,
) -> Result<WeakResidual> {
    require_test_function(d, phi, opts)?;
    require(phi.support().clears_axis_tube(AXIS_THRESHOLD), || {
        format!(
            "support of {} meets the axis tube around t + zk",
            phi.name()
        )
    })?;
    support_integral(phi, res, |q| {
        let r = q.vector().norm();
        let v = cullen_v(f, q, cfg)?;
        Ok([
            phi.fueter_right(q) * f.eval(q)?,
            -(v * phi.value(q) * (2.0 / r)),
        ])
    })
}

/// `∫_Ω E(q,p)·(2v/r) dV + ∫_∂Ω E(q,p)·n·f dS`, which reproduces `f(p)` for C-regular `f`.
pub fn cullen_represent(
    d: &Domain,
    f: &QuaternionField,
    p: Quaternion,
    res: &Resolutions,
    cfg: &FdConfig,
) -> Result<Quaternion> {
    require_interior(d, p)?;
    require(d.clears_axis_tube(AXIS_THRESHOLD), || {
        "domain meets the axis tube around t + zk".to_string()
    })?;
    let rule = QuadratureRule::singular_volume(d, p, res.singular_radial, res.singular_angular)?;
    let volume = singular_volume_integral(
        d,
        p,
        |q| {
            let r = q.vector().norm();
            Ok(eval_kernel(q, p)? * (cullen_v(f, q, cfg)? * (2.0 / r)))
        },
        &rule,
    )?;
    Ok(volume + cauchy_represent(d, f, p, res)?)
}

/// Largest `|D_l f − h|` over interior probes, judged against `tol·max(|h|, 1)` at the worst probe.
pub fn classical_from_weak_probe(
    d: &Domain,
    f: &QuaternionField,
    h: &QuaternionField,
    probes: &[Quaternion],
    cfg: &FdConfig,
    tol: f64,
) -> Result<CheckReport> {
    let start = Instant::now();
    require(!probes.is_empty(), || {
        "at least one probe is required".to_string()
    })?;
    let mut worst: Option<(f64, Quaternion, Quaternion, Quaternion)> = None;
    for &q in probes {
        require_interior(d, q)?;
        let lhs = fueter_left(f, q, cfg)?;
        let rhs = h.eval(q)?;
        let e = (lhs - rhs).norm();
        if worst.is_none_or(|w| e > w.0) {
            worst = Some((e, lhs, rhs, q));
        }
    }
    let (_, lhs, rhs, at) = worst.expect("probes are non-empty");
    Ok(CheckReport::new("classical_probe", lhs, rhs)
        .param("field", f.name())
        .param("rhs_field", h.name())
        .param("probes", probes.len())
        .param("worst_probe", at)
        .nodes([probes.len()])
        .judge(tol, rhs.norm().max(1.0))
        .timed(start))
}

/// Least-squares slope of `ln(err)` against `ln(x)`; `None` with fewer than two positive points.
pub fn loglog_slope(xs: &[f64], errs: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(errs)
        .filter(|(x, e)| **x > 0.0 && **e > 0.0 && e.is_finite())
        .map(|(x, e)| (x.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
