//! Fueter and Cullen operators.
//!
//! Cartesian convention: `D_l f = ∂_t f + i·∂_x f + j·∂_y f + k·∂_z f` and
//! `D_r f = ∂_t f + ∂_x f·i + ∂_y f·j + ∂_z f·k`. With this choice `D_l q = −2`
//! and the Cauchy–Fueter kernel is annihilated from both sides.
//!
//! Cartesian partials come from a field's closed form when it has one; the slice
//! operators ([`cullen`], [`d_iota`]) always differentiate along the slice chart
//! by finite differences, which keeps the spherical decomposition of `D_l` an
//! independent check on the Cartesian route.

use crate::fields::QuaternionField;
use crate::quat::{
    iota_from_angles, iota_tangents, recompose, to_slice, Quaternion, SphericalAngles,
};
use crate::{Error, Result};

/// Points with `√(x² + y²) < AXIS_THRESHOLD·r` are too close to the plane `t + zk` for `∂/∂ι`.
pub const AXIS_THRESHOLD: f64 = 1e-4;

/// Points with `r ≤ SLICE_TOL·max(1, |q|)` count as lying on the real axis.
pub const SLICE_TOL: f64 = 1e-8;

/// Central differences with Richardson extrapolation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdConfig {
    /// Base step; the step used at `q` is `step·max(1, |q|)`.
    pub step: f64,
    /// Number of halvings combined; the order of accuracy is `2·richardson_levels`.
    pub richardson_levels: usize,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self {
            step: 1e-4,
            richardson_levels: 2,
        }
    }
}

impl FdConfig {
    pub fn new(step: f64, richardson_levels: usize) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) || richardson_levels == 0 {
            return Err(Error::Precondition(format!(
                "finite-difference step must be positive and levels ≥ 1, got {step} and {richardson_levels}"
            )));
        }
        Ok(Self {
            step,
            richardson_levels,
        })
    }

    pub fn step_at(&self, q: Quaternion) -> f64 {
        self.step * q.norm().max(1.0)
    }
}

/// Derivative at `s = 0` of `g` from central differences at `h, h/2, …`
/// combined in a Richardson tableau.
pub fn richardson_derivative<G>(g: G, h: f64, levels: usize) -> Result<Quaternion>
where
    G: Fn(f64) -> Result<Quaternion>,
{
    let levels = levels.max(1);
    let mut prev: Vec<Quaternion> = Vec::with_capacity(levels);
    let mut step = h;
    for k in 0..levels {
        let mut row = Vec::with_capacity(k + 1);
        row.push((g(step)? - g(-step)?) / (2.0 * step));
        let mut factor = 4.0;
        for j in 1..=k {
            let v = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0);
            row.push(v);
            factor *= 4.0;
        }
        prev = row;
        step *= 0.5;
    }
    Ok(prev[levels - 1])
}

/// `∂f/∂x_m` at `q` by finite differences, ignoring any closed form.
pub fn partial_fd(
    f: &QuaternionField,
    q: Quaternion,
    m: usize,
    cfg: &FdConfig,
) -> Result<Quaternion> {
    let e = Quaternion::BASIS[m];
    richardson_derivative(|s| f.eval(q + e * s), cfg.step_at(q), cfg.richardson_levels)
}

/// All four Cartesian partials, closed form when available.
pub fn gradient(f: &QuaternionField, q: Quaternion, cfg: &FdConfig) -> Result<[Quaternion; 4]> {
    if let Some(p) = f.closed_form_partials(q) {
        return p;
    }
    let mut out = [Quaternion::ZERO; 4];
    for (m, slot) in out.iter_mut().enumerate() {
        *slot = partial_fd(f, q, m, cfg)?;
    }
    Ok(out)
}

pub fn fueter_left(f: &QuaternionField, q: Quaternion, cfg: &FdConfig) -> Result<Quaternion> {
    let g = gradient(f, q, cfg)?;
    Ok((0..4).map(|m| Quaternion::BASIS[m] * g[m]).sum())
}

pub fn fueter_right(f: &QuaternionField, q: Quaternion, cfg: &FdConfig) -> Result<Quaternion> {
    let g = gradient(f, q, cfg)?;
    Ok((0..4).map(|m| g[m] * Quaternion::BASIS[m]).sum())
}

fn slice_checked(q: Quaternion) -> Result<crate::quat::SliceCoords> {
    let s = to_slice(q);
    if s.degenerate || s.r <= SLICE_TOL * q.norm().max(1.0) {
        return Err(Error::DegenerateSlice { point: q, r: s.r });
    }
    Ok(s)
}

/// `(∂/∂t + ι·∂/∂r) f` with `∂/∂r` taken along the ray of fixed `ι`.
pub fn cullen(f: &QuaternionField, q: Quaternion, cfg: &FdConfig) -> Result<Quaternion> {
    let s = slice_checked(q)?;
    let h = cfg.step_at(q);
    let dt = richardson_derivative(
        |u| f.eval(q + Quaternion::real(u)),
        h,
        cfg.richardson_levels,
    )?;
    let dr = richardson_derivative(|u| f.eval(q + s.iota * u), h, cfg.richardson_levels)?;
    Ok(dt + s.iota * dr)
}

/// `∂f/∂ι = (ι_α)⁻¹·∂f/∂α + (ι_β)⁻¹·∂f/∂β` at fixed `(t, r)`.
pub fn d_iota(f: &QuaternionField, q: Quaternion, cfg: &FdConfig) -> Result<Quaternion> {
    let s = slice_checked(q)?;
    if q.x.hypot(q.y) < AXIS_THRESHOLD * s.r {
        return Err(Error::AxisProximity { point: q });
    }
    let angles = SphericalAngles::of_iota(s.iota);
    let h = cfg.step_at(q);
    let at = |alpha: f64, beta: f64| {
        f.eval(recompose(
            s.t,
            s.r,
            iota_from_angles(SphericalAngles::new(alpha, beta)),
        ))
    };
    let d_alpha = richardson_derivative(
        |u| at(angles.alpha + u, angles.beta),
        h,
        cfg.richardson_levels,
    )?;
    let d_beta = richardson_derivative(
        |u| at(angles.alpha, angles.beta + u),
        h,
        cfg.richardson_levels,
    )?;
    let (i_alpha, i_beta) = iota_tangents(angles);
    Ok(i_alpha.inv()? * d_alpha + i_beta.inv()? * d_beta)
}

/// `D_l = ∂/∂t + ι ∂/∂r − (1/r) ∂/∂ι`, valid off the plane `t + zk`.
pub fn fueter_left_spherical(
    f: &QuaternionField,
    q: Quaternion,
    cfg: &FdConfig,
) -> Result<Quaternion> {
    let r = q.vector().norm();
    let di = d_iota(f, q, cfg)?;
    Ok(cullen(f, q, cfg)? - di / r)
}

/// `v = ½ ∂f/∂ι`.
pub fn cullen_v(f: &QuaternionField, q: Quaternion, cfg: &FdConfig) -> Result<Quaternion> {
    Ok(d_iota(f, q, cfg)? * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{
        make_conjugate, make_constant, make_identity, make_kernel_section, make_power,
    };
    use crate::sampling::Sampler;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn iota_field() -> QuaternionField {
        QuaternionField::from_fn("iota", |q| to_slice(q).iota)
    }

    #[test]
    fn richardson_order_on_monomials() {
        // error of level L scales like h^(2L): halving h divides it by 4^L
        for levels in 1..=3usize {
            let p = 2 * levels as i32 + 1;
            let g = |s: f64| Ok(Quaternion::real((1.0 + s).powi(p) + (0.3 * s).exp()));
            let exact = p as f64 + 0.3;
            let e1 = (richardson_derivative(g, 0.1, levels).unwrap().w - exact).abs();
            let e2 = (richardson_derivative(g, 0.05, levels).unwrap().w - exact).abs();
            let observed = (e1 / e2).log2();
            assert!(
                (observed - 2.0 * levels as f64).abs() < 0.3,
                "levels {levels}: order {observed}"
            );
        }
    }

    #[test]
    fn fueter_examples() {
        let cfg = FdConfig::default();
        let q = Quaternion::new(0.4, -1.0, 0.7, 0.2);
        for f in [make_identity(), make_identity().without_partials()] {
            assert!(close(
                fueter_left(&f, q, &cfg).unwrap(),
                Quaternion::real(-2.0),
                1e-9
            ));
            assert!(close(
                fueter_right(&f, q, &cfg).unwrap(),
                Quaternion::real(-2.0),
                1e-9
            ));
        }
        let c = make_constant(Quaternion::new(1.0, 2.0, 3.0, 4.0)).without_partials();
        assert_eq!(fueter_left(&c, q, &cfg).unwrap(), Quaternion::ZERO);
        let k = make_kernel_section(Quaternion::new(1.0, 0.0, 0.0, 1.0)).without_partials();
        assert!(fueter_left(&k, q, &cfg).unwrap().norm() < 1e-9);
        assert!(fueter_right(&k, q, &cfg).unwrap().norm() < 1e-9);
    }

    #[test]
    fn reality_commutation_is_exact() {
        let cfg = FdConfig::default();
        let f = QuaternionField::from_fn("real", |q| {
            Quaternion::real((q.w * q.x).sin() + q.y * q.z * q.z)
        });
        let mut s = Sampler::new(21);
        for _ in 0..20 {
            let q = s.in_ball(Quaternion::ZERO, 2.0);
            assert_eq!(
                fueter_left(&f, q, &cfg).unwrap(),
                fueter_right(&f, q, &cfg).unwrap()
            );
        }
    }

    #[test]
    fn cullen_examples() {
        let cfg = FdConfig::default();
        let q = Quaternion::new(0.5, 0.3, -0.8, 1.1);
        assert!(cullen(&make_identity(), q, &cfg).unwrap().norm() < 1e-10);
        assert!(cullen(&make_power(2), q, &cfg).unwrap().norm() < 1e-10);
        assert!(close(
            cullen(&make_conjugate(), q, &cfg).unwrap(),
            Quaternion::real(2.0),
            1e-10
        ));
        let err = cullen(&make_identity(), Quaternion::real(3.0), &cfg);
        assert!(matches!(err, Err(Error::DegenerateSlice { .. })));
    }

    #[test]
    fn d_iota_examples() {
        let cfg = FdConfig::default();
        let q = Quaternion::new(0.5, 0.3, -0.8, 1.1);
        let r = q.vector().norm();
        assert!(close(
            d_iota(&make_identity(), q, &cfg).unwrap(),
            Quaternion::real(2.0 * r),
            1e-9
        ));
        assert!(
            d_iota(&make_constant(Quaternion::J), q, &cfg)
                .unwrap()
                .norm()
                < 1e-12
        );
        assert!(close(
            d_iota(&iota_field(), q, &cfg).unwrap(),
            Quaternion::real(2.0),
            1e-9
        ));
        assert!(close(
            cullen_v(&make_identity(), q, &cfg).unwrap(),
            Quaternion::real(r),
            1e-9
        ));
        assert!(close(
            cullen_v(&iota_field(), q, &cfg).unwrap(),
            Quaternion::ONE,
            1e-9
        ));
        assert!(
            cullen_v(&make_constant(Quaternion::ONE), q, &cfg)
                .unwrap()
                .norm()
                < 1e-12
        );
    }

    #[test]
    fn d_iota_rejects_axis_plane() {
        let cfg = FdConfig::default();
        let q = Quaternion::new(1.0, 1e-6, 0.0, 1.0);
        assert!(matches!(
            d_iota(&make_identity(), q, &cfg),
            Err(Error::AxisProximity { .. })
        ));
        assert!(matches!(
            d_iota(&make_identity(), Quaternion::real(1.0), &cfg),
            Err(Error::DegenerateSlice { .. })
        ));
    }

    #[test]
    fn spherical_examples() {
        let cfg = FdConfig::default();
        let q = Quaternion::new(-0.2, 0.9, 0.4, -0.3);
        assert!(close(
            fueter_left_spherical(&make_identity(), q, &cfg).unwrap(),
            Quaternion::real(-2.0),
            1e-8
        ));
        assert!(
            fueter_left_spherical(&make_constant(Quaternion::K), q, &cfg)
                .unwrap()
                .norm()
                < 1e-12
        );
        let k = make_kernel_section(Quaternion::new(2.0, 0.0, 1.0, 0.0));
        assert!(fueter_left_spherical(&k, q, &cfg).unwrap().norm() < 1e-8);
        // q² has D_l q² = −4t
        let sq = fueter_left_spherical(&make_power(2), q, &cfg).unwrap();
        assert!(close(sq, Quaternion::real(-4.0 * q.w), 1e-8));
    }

    #[test]
    fn decomposition_agrees_with_cartesian() {
        let cfg = FdConfig::default();
        let mut s = Sampler::new(4);
        let fields = [
            make_identity(),
            make_conjugate(),
            make_power(3),
            make_kernel_section(Quaternion::new(3.0, 0.0, 0.0, 0.0)),
            QuaternionField::from_fn("mixed", |q| {
                q * Quaternion::J * q + Quaternion::real(q.x * q.y)
            }),
        ];
        for f in &fields {
            for _ in 0..25 {
                let q = s.off_axis(2.0);
                let a = fueter_left(f, q, &cfg).unwrap();
                let b = fueter_left_spherical(f, q, &cfg).unwrap();
                assert!(close(a, b, 1e-6), "{}: {a} vs {b} at {q}", f.name());
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(FdConfig::new(0.0, 2).is_err());
        assert!(FdConfig::new(1e-4, 0).is_err());
        assert_eq!(FdConfig::new(1e-4, 2).unwrap(), FdConfig::default());
    }
}
