use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::quat::Quaternion;
use crate::{Error, Result};

/// Relative tolerance used to decide boundary membership.
const BOUNDARY_RTOL: f64 = 1e-12;

/// A bounded region of quaternionic space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Domain {
    Ball4 {
        center: Quaternion,
        radius: f64,
    },
    Box4 {
        min_corner: Quaternion,
        max_corner: Quaternion,
    },
}

impl Domain {
    pub fn ball(center: Quaternion, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(Error::Precondition(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Self::Ball4 { center, radius })
    }

    pub fn cuboid(min_corner: Quaternion, max_corner: Quaternion) -> Result<Self> {
        let lo = min_corner.to_array();
        let hi = max_corner.to_array();
        if (0..4).any(|m| lo[m] >= hi[m] || !lo[m].is_finite() || !hi[m].is_finite()) {
            return Err(Error::Precondition(format!(
                "box corners must satisfy min < max in every coordinate, got {min_corner} and {max_corner}"
            )));
        }
        Ok(Self::Box4 {
            min_corner,
            max_corner,
        })
    }

    /// The unit ball centered at the origin.
    pub fn unit_ball() -> Self {
        Self::Ball4 {
            center: Quaternion::ZERO,
            radius: 1.0,
        }
    }

    fn scale(&self) -> f64 {
        self.diameter().max(1.0)
    }

    /// Signed distance to the boundary, positive inside.
    pub fn signed_distance(&self, p: Quaternion) -> f64 {
        match *self {
            Domain::Ball4 { center, radius } => radius - (p - center).norm(),
            Domain::Box4 {
                min_corner,
                max_corner,
            } => {
                let (p, lo, hi) = (p.to_array(), min_corner.to_array(), max_corner.to_array());
                let inside = (0..4)
                    .map(|m| (p[m] - lo[m]).min(hi[m] - p[m]))
                    .fold(f64::INFINITY, f64::min);
                if inside >= 0.0 {
                    inside
                } else {
                    let outside: f64 = (0..4)
                        .map(|m| (lo[m] - p[m]).max(0.0).max(p[m] - hi[m]))
                        .map(|d| d * d)
                        .sum();
                    -outside.sqrt()
                }
            }
        }
    }

    /// Strict interior membership; boundary points are excluded.
    pub fn contains(&self, p: Quaternion) -> bool {
        self.signed_distance(p) > BOUNDARY_RTOL * self.scale()
    }

    pub fn on_boundary(&self, p: Quaternion) -> bool {
        self.signed_distance(p).abs() <= BOUNDARY_RTOL * self.scale()
    }

    /// Distance from an interior point to the boundary.
    pub fn distance_to_boundary(&self, p: Quaternion) -> f64 {
        self.signed_distance(p).max(0.0)
    }

    pub fn diameter(&self) -> f64 {
        match *self {
            Domain::Ball4 { radius, .. } => 2.0 * radius,
            Domain::Box4 {
                min_corner,
                max_corner,
            } => (max_corner - min_corner).norm(),
        }
    }

    /// 4-volume.
    pub fn measure(&self) -> f64 {
        match *self {
            Domain::Ball4 { radius, .. } => 0.5 * PI * PI * radius.powi(4),
            Domain::Box4 {
                min_corner,
                max_corner,
            } => (max_corner - min_corner).to_array().iter().product(),
        }
    }

    /// 3-volume of the boundary.
    pub fn boundary_measure(&self) -> f64 {
        match *self {
            Domain::Ball4 { radius, .. } => 2.0 * PI * PI * radius.powi(3),
            Domain::Box4 {
                min_corner,
                max_corner,
            } => {
                let s = (max_corner - min_corner).to_array();
                (0..4)
                    .map(|m| 2.0 * (0..4).filter(|&k| k != m).map(|k| s[k]).product::<f64>())
                    .sum()
            }
        }
    }

    /// Outward unit normal at (or nearest to) a boundary point.
    pub fn outward_normal(&self, q: Quaternion) -> Quaternion {
        match *self {
            Domain::Ball4 { center, .. } => {
                let d = q - center;
                d / d.norm()
            }
            Domain::Box4 {
                min_corner,
                max_corner,
            } => {
                let (p, lo, hi) = (q.to_array(), min_corner.to_array(), max_corner.to_array());
                let mut best = (f64::INFINITY, 0, 1.0);
                for m in 0..4 {
                    let dl = (p[m] - lo[m]).abs();
                    let dh = (hi[m] - p[m]).abs();
                    if dl < best.0 {
                        best = (dl, m, -1.0);
                    }
                    if dh < best.0 {
                        best = (dh, m, 1.0);
                    }
                }
                Quaternion::BASIS[best.1] * best.2
            }
        }
    }

    /// Distance along the unit direction `dir` from the interior point `p` to the boundary.
    pub fn exit_distance(&self, p: Quaternion, dir: Quaternion) -> f64 {
        match *self {
            Domain::Ball4 { center, radius } => {
                let d = p - center;
                let b = d.dot(dir);
                let c = d.norm_sqr() - radius * radius;
                -b + (b * b - c).sqrt()
            }
            Domain::Box4 {
                min_corner,
                max_corner,
            } => {
                let (p, lo, hi, u) = (
                    p.to_array(),
                    min_corner.to_array(),
                    max_corner.to_array(),
                    dir.to_array(),
                );
                (0..4)
                    .filter(|&m| u[m] != 0.0)
                    .map(|m| {
                        if u[m] > 0.0 {
                            (hi[m] - p[m]) / u[m]
                        } else {
                            (lo[m] - p[m]) / u[m]
                        }
                    })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Whether every point of the closed domain keeps `√(x²+y²) ≥ threshold·r`,
    /// i.e. stays out of the tube around the plane `t + zk`.
    pub fn clears_axis_tube(&self, threshold: f64) -> bool {
        let (min_xy, max_r) = match *self {
            Domain::Ball4 { center, radius } => {
                let xy = center.x.hypot(center.y);
                ((xy - radius).max(0.0), center.vector().norm() + radius)
            }
            Domain::Box4 {
                min_corner: lo,
                max_corner: hi,
            } => {
                let gap = |a: f64, b: f64| {
                    if a > 0.0 {
                        a
                    } else if b < 0.0 {
                        -b
                    } else {
                        0.0
                    }
                };
                let far = |a: f64, b: f64| a.abs().max(b.abs());
                (
                    gap(lo.x, hi.x).hypot(gap(lo.y, hi.y)),
                    (far(lo.x, hi.x).powi(2) + far(lo.y, hi.y).powi(2) + far(lo.z, hi.z).powi(2))
                        .sqrt(),
                )
            }
        };
        min_xy > 0.0 && min_xy >= threshold * max_r
    }

    /// Whether this domain is a ball lying strictly inside `outer`.
    pub fn ball_strictly_inside(&self, outer: &Domain) -> bool {
        match *self {
            Domain::Ball4 { center, radius } => outer.signed_distance(center) > radius,
            Domain::Box4 { .. } => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_box() -> Domain {
        Domain::cuboid(Quaternion::ZERO, Quaternion::new(1.0, 1.0, 1.0, 1.0)).unwrap()
    }

    #[test]
    fn constructors_validate() {
        assert!(Domain::ball(Quaternion::ZERO, 0.0).is_err());
        assert!(Domain::ball(Quaternion::ZERO, -1.0).is_err());
        assert!(Domain::cuboid(Quaternion::ONE, Quaternion::ZERO).is_err());
    }

    #[test]
    fn contains_and_boundary_are_exclusive() {
        let b = Domain::unit_ball();
        for q in [
            Quaternion::ZERO,
            Quaternion::I,
            Quaternion::real(0.999),
            Quaternion::real(2.0),
        ] {
            assert!(!(b.contains(q) && b.on_boundary(q)));
        }
        assert!(b.on_boundary(Quaternion::J));
        assert!(b.contains(Quaternion::real(0.5)));
        let c = unit_box();
        assert!(c.on_boundary(Quaternion::new(0.0, 0.5, 0.5, 0.5)));
        assert!(c.contains(Quaternion::new(0.5, 0.5, 0.5, 0.5)));
        assert!(!c.contains(Quaternion::new(1.5, 0.5, 0.5, 0.5)));
    }

    #[test]
    fn normals() {
        let b = Domain::ball(Quaternion::ONE, 2.0).unwrap();
        let q = Quaternion::ONE + Quaternion::new(0.0, 2.0, 0.0, 0.0);
        assert_eq!(b.outward_normal(q), Quaternion::I);
        let c = unit_box();
        assert_eq!(
            c.outward_normal(Quaternion::new(0.5, 0.5, 0.0, 0.5)),
            -Quaternion::J
        );
        assert_eq!(
            c.outward_normal(Quaternion::new(0.5, 0.5, 0.5, 1.0)),
            Quaternion::K
        );
    }

    #[test]
    fn measures() {
        assert_relative_eq!(Domain::unit_ball().measure(), PI * PI / 2.0);
        assert_relative_eq!(Domain::unit_ball().boundary_measure(), 2.0 * PI * PI);
        assert_relative_eq!(unit_box().measure(), 1.0);
        assert_relative_eq!(unit_box().boundary_measure(), 8.0);
    }

    #[test]
    fn exit_distance_matches_geometry() {
        let b = Domain::unit_ball();
        let p = Quaternion::real(0.5);
        assert_relative_eq!(b.exit_distance(p, Quaternion::ONE), 0.5);
        assert_relative_eq!(b.exit_distance(p, -Quaternion::ONE), 1.5);
        assert_relative_eq!(b.exit_distance(p, Quaternion::I), 0.75f64.sqrt());
        let c = unit_box();
        let p = Quaternion::new(0.25, 0.5, 0.5, 0.5);
        assert_relative_eq!(c.exit_distance(p, -Quaternion::ONE), 0.25);
        let d = Quaternion::new(1.0, 1.0, 0.0, 0.0) / 2f64.sqrt();
        assert_relative_eq!(c.exit_distance(p, d), 0.5 * 2f64.sqrt());
    }

    #[test]
    fn axis_tube() {
        let off = Domain::ball(Quaternion::new(2.0, 2.0, 2.0, 0.0), 0.8).unwrap();
        assert!(off.clears_axis_tube(1e-4));
        assert!(!Domain::unit_ball().clears_axis_tube(1e-4));
        let slab = Domain::cuboid(
            Quaternion::new(0.0, -1.0, 1.0, 0.0),
            Quaternion::new(1.0, 1.0, 2.0, 1.0),
        )
        .unwrap();
        assert!(slab.clears_axis_tube(1e-4));
    }
}
