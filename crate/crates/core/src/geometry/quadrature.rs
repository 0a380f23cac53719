//! Tensor-product quadrature on 4-balls, 4-boxes and their boundaries, plus a
//! singularity-centered rule for integrands growing like `|q − p|⁻³`.
//!
//! Every reduction sums fixed-size chunks in parallel and then combines the
//! chunk totals sequentially with compensated summation, so results do not
//! depend on the thread count.

use std::f64::consts::PI;
use std::fmt;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;

use super::Domain;
use crate::quat::Quaternion;
use crate::{Error, Result};

const CHUNK: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    Volume,
    Boundary,
    EpsSphere,
    SingularVolume,
}

impl RuleKind {
    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Volume => "volume",
            RuleKind::Boundary => "boundary",
            RuleKind::EpsSphere => "eps_sphere",
            RuleKind::SingularVolume => "singular_volume",
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One quadrature node. `normal` is the outward unit normal for boundary and
/// sphere rules and zero for volume rules.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadNode {
    pub point: Quaternion,
    pub normal: Quaternion,
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    kind: RuleKind,
    resolution: Vec<usize>,
    domain: Option<Domain>,
    singular_point: Option<Quaternion>,
    nodes: Vec<QuadNode>,
}

/// Gauss–Legendre nodes and weights mapped to `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n).expect("Gauss-Legendre rule needs at least one node");
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    GaussLegendre::new(n)
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect()
}

/// Hyperspherical direction `(cos ψ, sin ψ cos θ, sin ψ sin θ cos φ, sin ψ sin θ sin φ)`.
pub fn hyperspherical(psi: f64, theta: f64, phi: f64) -> Quaternion {
    let (sp, cp) = psi.sin_cos();
    let (st, ct) = theta.sin_cos();
    let (sf, cf) = phi.sin_cos();
    Quaternion::new(cp, sp * ct, sp * st * cf, sp * st * sf)
}

/// Directions and weights of the product rule on the unit 3-sphere:
/// Gauss–Legendre in `ψ` and `θ` (`n` nodes each), periodic trapezoid in `φ` (`2n`).
pub fn unit_sphere_rule(n: usize) -> Vec<(Quaternion, f64)> {
    let psi = gauss_legendre(n, 0.0, PI);
    let theta = gauss_legendre(n, 0.0, PI);
    let m = 2 * n;
    let dphi = 2.0 * PI / m as f64;
    let mut out = Vec::with_capacity(n * n * m);
    for &(a, wa) in &psi {
        let sa = a.sin();
        for &(b, wb) in &theta {
            let w = wa * wb * dphi * sa * sa * b.sin();
            for k in 0..m {
                out.push((hyperspherical(a, b, k as f64 * dphi), w));
            }
        }
    }
    out
}

fn ball_nodes(center: Quaternion, radius: f64, radial: usize, angular: usize) -> Vec<QuadNode> {
    let radial = gauss_legendre(radial, 0.0, radius);
    let sphere = unit_sphere_rule(angular);
    let mut nodes = Vec::with_capacity(radial.len() * sphere.len());
    for &(rho, wr) in &radial {
        let jac = wr * rho.powi(3);
        nodes.extend(sphere.iter().map(|&(dir, w)| QuadNode {
            point: center + dir * rho,
            normal: Quaternion::ZERO,
            weight: w * jac,
        }));
    }
    nodes
}

fn check_resolution(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition(format!(
            "{what} resolution must be positive"
        )));
    }
    Ok(())
}

/// Radius of the inner ball used by the singular rule around `p`.
pub fn singular_split_radius(d: &Domain, p: Quaternion) -> f64 {
    (0.5 * d.distance_to_boundary(p)).min(0.25 * d.diameter())
}

impl QuadratureRule {
    /// Volume rule. Balls: `n` radial Gauss nodes times [`unit_sphere_rule`]`(n)`;
    /// boxes: `n⁴` product Gauss–Legendre.
    pub fn volume(d: &Domain, n: usize) -> Result<Self> {
        check_resolution(n, "volume")?;
        let nodes = match *d {
            Domain::Ball4 { center, radius } => ball_nodes(center, radius, n, n),
            Domain::Box4 {
                min_corner,
                max_corner,
            } => {
                let (lo, hi) = (min_corner.to_array(), max_corner.to_array());
                let axes: Vec<_> = (0..4).map(|m| gauss_legendre(n, lo[m], hi[m])).collect();
                let mut nodes = Vec::with_capacity(n.pow(4));
                for &(t, wt) in &axes[0] {
                    for &(x, wx) in &axes[1] {
                        for &(y, wy) in &axes[2] {
                            for &(z, wz) in &axes[3] {
                                nodes.push(QuadNode {
                                    point: Quaternion::new(t, x, y, z),
                                    normal: Quaternion::ZERO,
                                    weight: wt * wx * wy * wz,
                                });
                            }
                        }
                    }
                }
                nodes
            }
        };
        Ok(Self {
            kind: RuleKind::Volume,
            resolution: vec![n],
            domain: Some(*d),
            singular_point: None,
            nodes,
        })
    }

    /// Ball volume rule with `radial` Gauss nodes in the radius times
    /// [`unit_sphere_rule`]`(angular)`.
    pub fn ball_volume(d: &Domain, radial: usize, angular: usize) -> Result<Self> {
        check_resolution(radial, "radial")?;
        check_resolution(angular, "angular")?;
        let Domain::Ball4 { center, radius } = *d else {
            return Err(Error::Precondition(
                "ball volume rule on a box domain".into(),
            ));
        };
        Ok(Self {
            kind: RuleKind::Volume,
            resolution: vec![radial, angular],
            domain: Some(*d),
            singular_point: None,
            nodes: ball_nodes(center, radius, radial, angular),
        })
    }

    /// Boundary rule. Balls: [`unit_sphere_rule`]`(n)` scaled to the sphere;
    /// boxes: an `n³` product Gauss–Legendre rule on each of the 8 faces.
    pub fn boundary(d: &Domain, n: usize) -> Result<Self> {
        check_resolution(n, "boundary")?;
        let nodes = match *d {
            Domain::Ball4 { center, radius } => {
                let r3 = radius.powi(3);
                unit_sphere_rule(n)
                    .into_iter()
                    .map(|(dir, w)| QuadNode {
                        point: center + dir * radius,
                        normal: dir,
                        weight: w * r3,
                    })
                    .collect()
            }
            Domain::Box4 {
                min_corner,
                max_corner,
            } => {
                let (lo, hi) = (min_corner.to_array(), max_corner.to_array());
                let axes: Vec<_> = (0..4).map(|m| gauss_legendre(n, lo[m], hi[m])).collect();
                let mut nodes = Vec::with_capacity(8 * n.pow(3));
                for m in 0..4 {
                    for (value, sign) in [(lo[m], -1.0), (hi[m], 1.0)] {
                        let normal = Quaternion::BASIS[m] * sign;
                        face_nodes(&axes, m, value, |point, w| {
                            nodes.push(QuadNode {
                                point,
                                normal,
                                weight: w,
                            })
                        });
                    }
                }
                nodes
            }
        };
        Ok(Self {
            kind: RuleKind::Boundary,
            resolution: vec![n],
            domain: Some(*d),
            singular_point: None,
            nodes,
        })
    }

    /// Directions on the unit 3-sphere; [`eps_sphere_integral`] maps them to the
    /// sphere of radius `ε` about a chosen center.
    pub fn eps_sphere(n: usize) -> Result<Self> {
        check_resolution(n, "eps-sphere")?;
        let nodes = unit_sphere_rule(n)
            .into_iter()
            .map(|(dir, w)| QuadNode {
                point: dir,
                normal: dir,
                weight: w,
            })
            .collect();
        Ok(Self {
            kind: RuleKind::EpsSphere,
            resolution: vec![n],
            domain: None,
            singular_point: None,
            nodes,
        })
    }

    /// Volume rule on `d` centered at the interior point `p`.
    ///
    /// Polar coordinates about `p` split at `ρ₀` ([`singular_split_radius`]), each
    /// radial piece with `radial` Gauss nodes, so the `ρ³` Jacobian absorbs a
    /// `|q − p|⁻³` singularity. For a ball every ray is clipped at its exit
    /// distance. For a box the region is cut into 8 pyramids with apex `p`, one per
    /// face, each parametrized as `p + s(y − p)` with `y` on an `angular³` face grid.
    pub fn singular_volume(
        d: &Domain,
        p: Quaternion,
        radial: usize,
        angular: usize,
    ) -> Result<Self> {
        check_resolution(radial, "singular radial")?;
        check_resolution(angular, "singular angular")?;
        if !d.contains(p) {
            return Err(Error::Precondition(format!(
                "singular point {p} is not interior to the domain"
            )));
        }
        let rho0 = singular_split_radius(d, p);
        let mut nodes = Vec::new();
        let unit = gauss_legendre(radial, 0.0, 1.0);
        match *d {
            Domain::Ball4 { .. } => {
                let sphere = unit_sphere_rule(angular);
                nodes.reserve(2 * radial * sphere.len());
                for &(dir, w) in &sphere {
                    let rho_max = d.exit_distance(p, dir);
                    for (a, b) in [(0.0, rho0), (rho0, rho_max)] {
                        for &(s, ws) in &unit {
                            let rho = a + (b - a) * s;
                            nodes.push(QuadNode {
                                point: p + dir * rho,
                                normal: Quaternion::ZERO,
                                weight: w * ws * (b - a) * rho.powi(3),
                            });
                        }
                    }
                }
            }
            Domain::Box4 {
                min_corner,
                max_corner,
            } => {
                let (lo, hi, pa) = (min_corner.to_array(), max_corner.to_array(), p.to_array());
                let axes: Vec<_> = (0..4)
                    .map(|m| gauss_legendre(angular, lo[m], hi[m]))
                    .collect();
                nodes.reserve(16 * radial * angular.pow(3));
                for m in 0..4 {
                    for value in [lo[m], hi[m]] {
                        let height = (value - pa[m]).abs();
                        face_nodes(&axes, m, value, |y, wy| {
                            let delta = y - p;
                            let s0 = rho0 / delta.norm();
                            for (a, b) in [(0.0, s0), (s0, 1.0)] {
                                for &(u, wu) in &unit {
                                    let s = a + (b - a) * u;
                                    nodes.push(QuadNode {
                                        point: p + delta * s,
                                        normal: Quaternion::ZERO,
                                        weight: height * wy * wu * (b - a) * s.powi(3),
                                    });
                                }
                            }
                        });
                    }
                }
            }
        }
        Ok(Self {
            kind: RuleKind::SingularVolume,
            resolution: vec![radial, angular],
            domain: Some(*d),
            singular_point: Some(p),
            nodes,
        })
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn resolution(&self) -> &[usize] {
        &self.resolution
    }

    pub fn nodes(&self) -> &[QuadNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn singular_point(&self) -> Option<Quaternion> {
        self.singular_point
    }

    pub fn total_weight(&self) -> f64 {
        let mut acc = Compensated::default();
        for n in &self.nodes {
            acc.add(Quaternion::real(n.weight));
        }
        acc.value().w
    }

    fn expect(&self, kind: RuleKind, d: Option<&Domain>) -> Result<()> {
        if self.kind != kind {
            return Err(Error::RuleKind {
                expected: kind.name(),
                found: self.kind.name(),
            });
        }
        if let (Some(d), Some(own)) = (d, self.domain.as_ref()) {
            if d != own {
                return Err(Error::Precondition(
                    "quadrature rule was built for a different domain".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Calls `push(point, weight)` for the product grid on the face `coord[m] = value`.
fn face_nodes(
    axes: &[Vec<(f64, f64)>],
    m: usize,
    value: f64,
    mut push: impl FnMut(Quaternion, f64),
) {
    let others: Vec<usize> = (0..4).filter(|&k| k != m).collect();
    for &(a, wa) in &axes[others[0]] {
        for &(b, wb) in &axes[others[1]] {
            for &(c, wc) in &axes[others[2]] {
                let mut coords = [0.0; 4];
                coords[m] = value;
                coords[others[0]] = a;
                coords[others[1]] = b;
                coords[others[2]] = c;
                push(Quaternion::from(coords), wa * wb * wc);
            }
        }
    }
}

/// Neumaier compensated sum of quaternions.
#[derive(Clone, Copy, Debug, Default)]
pub struct Compensated {
    sum: [f64; 4],
    comp: [f64; 4],
}

impl Compensated {
    pub fn add(&mut self, q: Quaternion) {
        for (m, v) in q.to_array().into_iter().enumerate() {
            let s = self.sum[m];
            let t = s + v;
            self.comp[m] += if s.abs() >= v.abs() {
                (s - t) + v
            } else {
                (v - t) + s
            };
            self.sum[m] = t;
        }
    }

    pub fn value(&self) -> Quaternion {
        Quaternion::from([
            self.sum[0] + self.comp[0],
            self.sum[1] + self.comp[1],
            self.sum[2] + self.comp[2],
            self.sum[3] + self.comp[3],
        ])
    }
}

/// `Σ weight·integrand(node)`, deterministic for a fixed rule.
pub fn reduce<F>(nodes: &[QuadNode], integrand: F) -> Result<Quaternion>
where
    F: Fn(&QuadNode) -> Result<Quaternion> + Sync,
{
    let partials: Vec<Result<Quaternion>> = nodes
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = Compensated::default();
            for node in chunk {
                let v = integrand(node)?;
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        what: "integrand".into(),
                        point: node.point,
                    });
                }
                acc.add(v * node.weight);
            }
            Ok(acc.value())
        })
        .collect();
    let mut total = Compensated::default();
    for p in partials {
        total.add(p?);
    }
    Ok(total.value())
}

/// Like [`reduce`] for an integrand returning `(value, mass)`; both are integrated in one pass.
pub fn reduce_with_mass<F>(nodes: &[QuadNode], integrand: F) -> Result<(Quaternion, f64)>
where
    F: Fn(&QuadNode) -> Result<(Quaternion, f64)> + Sync,
{
    let partials: Vec<Result<(Quaternion, f64)>> = nodes
        .par_chunks(CHUNK)
        .map(|chunk| {
            let (mut acc, mut mass) = (Compensated::default(), Compensated::default());
            for node in chunk {
                let (v, m) = integrand(node)?;
                if !v.is_finite() || !m.is_finite() {
                    return Err(Error::NonFinite {
                        what: "integrand".into(),
                        point: node.point,
                    });
                }
                acc.add(v * node.weight);
                mass.add(Quaternion::real(m * node.weight));
            }
            Ok((acc.value(), mass.value().w))
        })
        .collect();
    let (mut total, mut mass) = (Compensated::default(), Compensated::default());
    for p in partials {
        let (v, m) = p?;
        total.add(v);
        mass.add(Quaternion::real(m));
    }
    Ok((total.value(), mass.value().w))
}

/// `∫_Ω f dV`.
pub fn volume_integral<F>(d: &Domain, f: F, rule: &QuadratureRule) -> Result<Quaternion>
where
    F: Fn(Quaternion) -> Result<Quaternion> + Sync,
{
    rule.expect(RuleKind::Volume, Some(d))?;
    reduce(rule.nodes(), |n| f(n.point))
}

/// `∫_∂Ω g(q, n(q)) dS` with `n` the outward unit normal.
pub fn boundary_integral<G>(d: &Domain, g: G, rule: &QuadratureRule) -> Result<Quaternion>
where
    G: Fn(Quaternion, Quaternion) -> Result<Quaternion> + Sync,
{
    rule.expect(RuleKind::Boundary, Some(d))?;
    reduce(rule.nodes(), |n| g(n.point, n.normal))
}

/// `∫_{|q − center| = ε} g(q, n(q)) dS` with `n = (q − center)/ε` pointing away from the center.
pub fn eps_sphere_integral<G>(
    center: Quaternion,
    eps: f64,
    g: G,
    rule: &QuadratureRule,
) -> Result<Quaternion>
where
    G: Fn(Quaternion, Quaternion) -> Result<Quaternion> + Sync,
{
    rule.expect(RuleKind::EpsSphere, None)?;
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Precondition(format!(
            "sphere radius must be positive, got {eps}"
        )));
    }
    let e3 = eps.powi(3);
    Ok(reduce(rule.nodes(), |n| g(center + n.point * eps, n.normal))? * e3)
}

/// `∫_Ω f dV` for `f` that may grow like `|q − p|⁻³` at the interior point `p`.
pub fn singular_volume_integral<F>(
    d: &Domain,
    p: Quaternion,
    f: F,
    rule: &QuadratureRule,
) -> Result<Quaternion>
where
    F: Fn(Quaternion) -> Result<Quaternion> + Sync,
{
    if !d.contains(p) {
        return Err(Error::Precondition(format!(
            "singular point {p} is not interior to the domain"
        )));
    }
    rule.expect(RuleKind::SingularVolume, Some(d))?;
    if rule.singular_point != Some(p) {
        return Err(Error::Precondition(format!(
            "quadrature rule is not centered at {p}"
        )));
    }
    reduce(rule.nodes(), |n| f(n.point))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const TWO_PI2: f64 = 2.0 * PI * PI;

    fn one(_: Quaternion) -> Result<Quaternion> {
        Ok(Quaternion::ONE)
    }

    fn unit_box() -> Domain {
        Domain::cuboid(Quaternion::ZERO, Quaternion::new(1.0, 1.0, 1.0, 1.0)).unwrap()
    }

    #[test]
    fn unit_sphere_area() {
        let rule = QuadratureRule::eps_sphere(24).unwrap();
        assert_eq!(rule.len(), 24 * 24 * 48);
        assert_relative_eq!(rule.total_weight(), TWO_PI2, max_relative = 1e-10);
        assert!(rule.nodes().iter().all(|n| n.weight > 0.0));
    }

    #[test]
    fn boundary_weights_sum_to_area() {
        let ball = Domain::ball(Quaternion::new(0.3, -1.0, 0.0, 2.0), 1.7).unwrap();
        let rule = QuadratureRule::boundary(&ball, 16).unwrap();
        assert_relative_eq!(
            rule.total_weight(),
            TWO_PI2 * 1.7f64.powi(3),
            max_relative = 1e-10
        );
        for n in rule.nodes() {
            assert!(ball.on_boundary(n.point));
            assert_relative_eq!(n.normal.norm(), 1.0, max_relative = 1e-14);
        }
        let cube = unit_box();
        let rule = QuadratureRule::boundary(&cube, 5).unwrap();
        assert_relative_eq!(rule.total_weight(), 8.0, max_relative = 1e-13);
    }

    #[test]
    fn volume_examples() {
        let ball = Domain::unit_ball();
        let rule = QuadratureRule::volume(&ball, 16).unwrap();
        let v = volume_integral(&ball, one, &rule).unwrap();
        assert_relative_eq!(v.w, PI * PI / 2.0, max_relative = 1e-12);
        let zero = volume_integral(&ball, |_| Ok(Quaternion::ZERO), &rule).unwrap();
        assert_eq!(zero, Quaternion::ZERO);
        let odd = volume_integral(&ball, |q| Ok(Quaternion::real(q.w)), &rule).unwrap();
        assert!(odd.norm() < 1e-14);
    }

    #[test]
    fn boundary_examples() {
        let ball = Domain::unit_ball();
        let rule = QuadratureRule::boundary(&ball, 16).unwrap();
        let area = boundary_integral(&ball, |_, _| Ok(Quaternion::ONE), &rule).unwrap();
        assert_relative_eq!(area.w, TWO_PI2, max_relative = 1e-12);
        let n = boundary_integral(&ball, |_, n| Ok(n), &rule).unwrap();
        assert!(n.norm() < 1e-13);
        let flux = boundary_integral(&ball, |q, n| Ok(Quaternion::real(q.dot(n))), &rule).unwrap();
        assert_relative_eq!(flux.w, TWO_PI2, max_relative = 1e-12);
    }

    #[test]
    fn eps_sphere_examples() {
        let rule = QuadratureRule::eps_sphere(12).unwrap();
        let c = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let a1 = eps_sphere_integral(c, 1.0, |_, _| Ok(Quaternion::ONE), &rule).unwrap();
        assert_relative_eq!(a1.w, TWO_PI2, max_relative = 1e-12);
        let a2 = eps_sphere_integral(c, 0.5, |_, _| Ok(Quaternion::ONE), &rule).unwrap();
        assert_relative_eq!(a2.w, TWO_PI2 * 0.125, max_relative = 1e-12);
        let n = eps_sphere_integral(c, 0.5, |_, n| Ok(n), &rule).unwrap();
        assert!(n.norm() < 1e-14);
        let points_on_sphere = eps_sphere_integral(
            c,
            0.5,
            |q, n| Ok(Quaternion::real((q - c - n * 0.5).norm())),
            &rule,
        )
        .unwrap();
        assert!(points_on_sphere.norm() < 1e-13);
        assert!(eps_sphere_integral(c, 0.0, |_, n| Ok(n), &rule).is_err());
    }

    #[test]
    fn singular_radial_reduction() {
        // ∫_{B(p,R)} 1/(2π²|q−p|³) dV = R
        for (p, radius) in [
            (Quaternion::ZERO, 1.0),
            (Quaternion::new(1.0, -2.0, 0.5, 0.0), 0.7),
        ] {
            let ball = Domain::ball(p, radius).unwrap();
            let rule = QuadratureRule::singular_volume(&ball, p, 8, 16).unwrap();
            for c in [1.0, 3.5] {
                let v = singular_volume_integral(
                    &ball,
                    p,
                    |q| Ok(Quaternion::real(c / (TWO_PI2 * (q - p).norm().powi(3)))),
                    &rule,
                )
                .unwrap();
                assert_relative_eq!(v.w, c * radius, max_relative = 1e-12);
            }
            let z = singular_volume_integral(&ball, p, |_| Ok(Quaternion::ZERO), &rule).unwrap();
            assert_eq!(z, Quaternion::ZERO);
        }
    }

    #[test]
    fn singular_rule_avoids_singular_point_and_matches_measure() {
        let p = Quaternion::new(0.2, 0.7, 0.1, 0.3);
        for d in [
            Domain::ball(Quaternion::new(0.1, 0.5, 0.0, 0.2), 1.0).unwrap(),
            unit_box(),
        ] {
            let rule = QuadratureRule::singular_volume(&d, p, 6, 10).unwrap();
            assert!(rule.nodes().iter().all(|n| n.point != p && n.weight > 0.0));
            assert_relative_eq!(rule.total_weight(), d.measure(), max_relative = 1e-6);
        }
    }

    #[test]
    fn singular_matches_regular_on_smooth_integrands() {
        let p = Quaternion::new(0.3, 0.6, 0.2, 0.4);
        let f = |q: Quaternion| Ok(q * q + Quaternion::new(q.x.cos(), 0.0, (q.w * q.z).exp(), 1.0));
        let ball = Domain::ball(Quaternion::new(0.5, 0.5, 0.5, 0.5), 0.6).unwrap();
        let cube = unit_box();
        for d in [ball, cube] {
            let plain = volume_integral(&d, f, &QuadratureRule::volume(&d, 24).unwrap()).unwrap();
            let rule = QuadratureRule::singular_volume(&d, p, 16, 24).unwrap();
            let sing = singular_volume_integral(&d, p, f, &rule).unwrap();
            assert!(
                (plain - sing).norm() <= 1e-6 * plain.norm(),
                "{d:?}: {plain} vs {sing}"
            );
        }
    }

    #[test]
    fn rule_kinds_are_enforced() {
        let ball = Domain::unit_ball();
        let b = QuadratureRule::boundary(&ball, 4).unwrap();
        assert!(matches!(
            volume_integral(&ball, one, &b),
            Err(Error::RuleKind { .. })
        ));
        let other = Domain::ball(Quaternion::ONE, 1.0).unwrap();
        let v = QuadratureRule::volume(&other, 4).unwrap();
        assert!(volume_integral(&ball, one, &v).is_err());
        assert!(QuadratureRule::singular_volume(&ball, Quaternion::real(1.0), 4, 4).is_err());
        let s = QuadratureRule::singular_volume(&ball, Quaternion::ZERO, 4, 4).unwrap();
        assert!(singular_volume_integral(&ball, Quaternion::real(0.1), one, &s).is_err());
    }

    #[test]
    fn non_finite_values_name_the_node() {
        let ball = Domain::unit_ball();
        let rule = QuadratureRule::volume(&ball, 4).unwrap();
        let err = volume_integral(
            &ball,
            |q| Ok(Quaternion::real(if q.w > 0.0 { f64::NAN } else { 0.0 })),
            &rule,
        );
        match err {
            Err(Error::NonFinite { point, .. }) => assert!(point.w > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn polynomial_convergence_on_ball() {
        // ∫_{B(0,1)} t⁴ dV = π²/32: mean of ω₀⁴ over S³ is 1/8, radial ∫ρ⁷ = 1/8.
        let exact = PI * PI / 32.0;
        let ball = Domain::unit_ball();
        let err = |n: usize| {
            let rule = QuadratureRule::volume(&ball, n).unwrap();
            (volume_integral(&ball, |q| Ok(Quaternion::real(q.w.powi(4))), &rule)
                .unwrap()
                .w
                - exact)
                .abs()
        };
        assert!(err(16) < 1e-12, "{}", err(16));
        let smooth = |q: Quaternion| Ok(Quaternion::real((q.w + 2.0 * q.x).exp()));
        let reference = volume_integral(&ball, smooth, &QuadratureRule::volume(&ball, 24).unwrap())
            .unwrap()
            .w;
        let e = |n| {
            (volume_integral(&ball, smooth, &QuadratureRule::volume(&ball, n).unwrap())
                .unwrap()
                .w
                - reference)
                .abs()
        };
        assert!(e(4) / e(8) > 4.0);
    }
}
