//! The Cauchy–Fueter fundamental solution `E(q, p) = (q − p)⁻¹ / (2π²|q − p|²)`.

use std::f64::consts::PI;
use std::time::Instant;

use crate::fields::make_kernel_section;
use crate::geometry::CheckReport;
use crate::operators::{fueter_left, fueter_right, FdConfig};
use crate::quat::Quaternion;
use crate::sampling::Sampler;
use crate::{Error, Result};

/// `1/(2π²)`, the reciprocal area of the unit 3-sphere.
pub const KERNEL_SCALE: f64 = 1.0 / (2.0 * PI * PI);

/// Minimum `|q − p|` accepted by [`kernel_regularity_check`].
pub const REGULARITY_MIN_DISTANCE: f64 = 0.25;

/// `E(q, p)`, evaluated as `conj(q − p)/(2π²|q − p|⁴)`.
pub fn eval_kernel(q: Quaternion, p: Quaternion) -> Result<Quaternion> {
    let d = q - p;
    let n2 = d.norm_sqr();
    if n2 == 0.0 {
        return Err(Error::CoincidentPoints(q));
    }
    Ok(d.conj() * (KERNEL_SCALE / (n2 * n2)))
}

/// Closed-form partials of `q ↦ E(q, p)`:
/// `∂_m E = (conj(e_m) − 4 d_m conj(d)/|d|²)/(2π²|d|⁴)` with `d = q − p`.
pub fn kernel_partials(q: Quaternion, p: Quaternion) -> Result<[Quaternion; 4]> {
    let d = q - p;
    let n2 = d.norm_sqr();
    if n2 == 0.0 {
        return Err(Error::CoincidentPoints(q));
    }
    let c = KERNEL_SCALE / (n2 * n2);
    let dc = d.conj();
    let da = d.to_array();
    Ok(std::array::from_fn(|m| {
        (Quaternion::BASIS[m].conj() - dc * (4.0 * da[m] / n2)) * c
    }))
}

/// Antisymmetry `E(q,p) = −E(p,q)` and the norm law `|E(q,p)| = 1/(2π²|q−p|³)` over
/// `samples` seeded random pairs with `0.1 ≤ |q − p| ≤ 10`. `lhs` carries the worst
/// deviation as a real quaternion; passes iff it is below `tol`.
pub fn kernel_identities_check(samples: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    if samples == 0 {
        return Err(Error::Precondition(
            "kernel identity check needs at least one sample".into(),
        ));
    }
    let start = Instant::now();
    let pairs = Sampler::new(seed).pairs(samples, 0.1, 10.0);
    let mut antisym = 0.0f64;
    let mut norm_law = 0.0f64;
    for &(q, p) in &pairs {
        let e = eval_kernel(q, p)?;
        antisym = antisym.max((e + eval_kernel(p, q)?).norm());
        norm_law = norm_law.max((e.norm() - KERNEL_SCALE / (q - p).norm().powi(3)).abs());
    }
    let worst = antisym.max(norm_law);
    Ok(CheckReport::new(
        "kernel_identities",
        Quaternion::real(worst),
        Quaternion::ZERO,
    )
    .param("samples", samples)
    .param("seed", seed)
    .param("max_antisymmetry_err", format!("{antisym:e}"))
    .param("max_norm_law_err", format!("{norm_law:e}"))
    .nodes([samples])
    .judge(tol, 1.0)
    .timed(start))
}

/// Largest of `|D_l E|` and `|D_r E|` over the given `(q, p)` pairs, by finite
/// differences of the kernel section. Passes iff below `tol`.
pub fn kernel_regularity_check(
    points: &[(Quaternion, Quaternion)],
    cfg: &FdConfig,
    tol: f64,
) -> Result<CheckReport> {
    if points.is_empty() {
        return Err(Error::Precondition(
            "kernel regularity check needs at least one pair".into(),
        ));
    }
    let start = Instant::now();
    let mut worst = (0.0f64, Quaternion::ZERO, Quaternion::ZERO);
    let mut left_max = 0.0f64;
    let mut right_max = 0.0f64;
    for &(q, p) in points {
        let dist = (q - p).norm();
        if dist < REGULARITY_MIN_DISTANCE {
            return Err(Error::Precondition(format!(
                "pair at distance {dist} is closer than {REGULARITY_MIN_DISTANCE} to the singularity"
            )));
        }
        let section = make_kernel_section(p).without_partials();
        let l = fueter_left(&section, q, cfg)?;
        let r = fueter_right(&section, q, cfg)?;
        left_max = left_max.max(l.norm());
        right_max = right_max.max(r.norm());
        for v in [l, r] {
            if v.norm() > worst.0 {
                worst = (v.norm(), v, q);
            }
        }
    }
    Ok(
        CheckReport::new("kernel_regularity", worst.1, Quaternion::ZERO)
            .param("pairs", points.len())
            .param("max_left_residual", format!("{left_max:e}"))
            .param("max_right_residual", format!("{right_max:e}"))
            .param("worst_point", worst.2)
            .param("fd_step", cfg.step)
            .param("richardson_levels", cfg.richardson_levels)
            .nodes([points.len()])
            .judge(tol, 1.0)
            .timed(start),
    )
}
