//! Quaternion algebra and the slice decomposition `q = t + r·ι`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A quaternion `w + x·i + y·j + z·k`.
///
/// Serialized as the 4-element array `[w, x, y, z]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    /// The units `1, i, j, k` in coordinate order `(t, x, y, z)`.
    pub const BASIS: [Self; 4] = [Self::ONE, Self::I, Self::J, Self::K];

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    pub const fn pure(x: f64, y: f64, z: f64) -> Self {
        Self::new(0.0, x, y, z)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Coordinate `m` in the order `(t, x, y, z)`.
    pub fn component(self, m: usize) -> f64 {
        self.to_array()[m]
    }

    pub fn scalar(self) -> f64 {
        self.w
    }

    pub fn vector(self) -> Self {
        Self::pure(self.x, self.y, self.z)
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Euclidean inner product on R⁴.
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `conj(q) / |q|²`.
    pub fn inv(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.conj() / n2)
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Integer power by repeated left multiplication.
    pub fn powi(self, n: u32) -> Self {
        (0..n).fold(Self::ONE, |acc, _| self * acc)
    }

    pub fn to_slice(self) -> SliceCoords {
        to_slice(self)
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign<f64> for Quaternion {
    fn mul_assign(&mut self, s: f64) {
        *self = *self * s;
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

/// Hamilton product, `a·b`.
pub fn mul(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b
}

/// `q⁻¹`; fails on `q = 0`.
pub fn inv(q: Quaternion) -> Result<Quaternion> {
    q.inv()
}

/// Slice coordinates `q = t + r·ι`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceCoords {
    pub t: f64,
    pub r: f64,
    pub iota: Quaternion,
    /// Set when `r = 0`; `iota` then holds the conventional `k`.
    pub degenerate: bool,
}

impl SliceCoords {
    pub fn recompose(&self) -> Quaternion {
        recompose(self.t, self.r, self.iota)
    }
}

pub fn to_slice(q: Quaternion) -> SliceCoords {
    let v = q.vector();
    let r = v.norm();
    if r == 0.0 {
        SliceCoords {
            t: q.w,
            r: 0.0,
            iota: Quaternion::K,
            degenerate: true,
        }
    } else {
        SliceCoords {
            t: q.w,
            r,
            iota: v / r,
            degenerate: false,
        }
    }
}

pub fn recompose(t: f64, r: f64, iota: Quaternion) -> Quaternion {
    Quaternion::real(t) + iota * r
}

/// Direction angles of `ι` on the unit 2-sphere: `α` azimuth in the i-j plane, `β` polar angle from k.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalAngles {
    pub alpha: f64,
    pub beta: f64,
}

impl SphericalAngles {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    /// Angles of a pure unit quaternion, `alpha` normalized into `[0, 2π)`.
    pub fn of_iota(iota: Quaternion) -> Self {
        let beta = iota.z.clamp(-1.0, 1.0).acos();
        let mut alpha = iota.y.atan2(iota.x);
        if alpha < 0.0 {
            alpha += std::f64::consts::TAU;
        }
        Self { alpha, beta }
    }
}

pub fn iota_from_angles(a: SphericalAngles) -> Quaternion {
    let (sa, ca) = a.alpha.sin_cos();
    let (sb, cb) = a.beta.sin_cos();
    Quaternion::pure(ca * sb, sa * sb, cb)
}

/// `∂ι/∂α` and `∂ι/∂β`.
pub fn iota_tangents(a: SphericalAngles) -> (Quaternion, Quaternion) {
    let (sa, ca) = a.alpha.sin_cos();
    let (sb, cb) = a.beta.sin_cos();
    (
        Quaternion::pure(-sa * sb, ca * sb, 0.0),
        Quaternion::pure(ca * cb, sa * cb, -sb),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn unit_relations() {
        assert_eq!(I * J, K);
        assert_eq!(J * I, -K);
        assert_eq!(J * K, I);
        assert_eq!(K * I, J);
        for u in [I, J, K] {
            assert_eq!(u * u, -Quaternion::ONE);
        }
        assert_eq!(I * J * K, -Quaternion::ONE);
    }

    #[test]
    fn hand_expanded_product() {
        // (1+i)(1+j) = 1 + j + i + ij = 1 + i + j + k
        let p = (Quaternion::ONE + I) * (Quaternion::ONE + J);
        assert_eq!(p, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inv(Quaternion::ONE).unwrap(), Quaternion::ONE);
        assert_eq!(inv(I).unwrap(), -I);
        let q = Quaternion::new(2.0, 2.0, 0.0, 0.0);
        assert_eq!(inv(q).unwrap(), Quaternion::new(2.0, -2.0, 0.0, 0.0) / 8.0);
        assert!(matches!(inv(Quaternion::ZERO), Err(Error::ZeroInverse)));
    }

    #[test]
    fn slice_examples() {
        let s = to_slice(Quaternion::new(3.0, 4.0, 0.0, 0.0));
        assert_eq!((s.t, s.r, s.iota, s.degenerate), (3.0, 4.0, I, false));

        let s = to_slice(Quaternion::real(5.0));
        assert_eq!((s.t, s.r, s.iota, s.degenerate), (5.0, 0.0, K, true));

        let s = to_slice(Quaternion::pure(1.0, 1.0, 1.0));
        let c = 1.0 / 3f64.sqrt();
        assert_eq!(s.t, 0.0);
        assert_abs_diff_eq!(s.r, 3f64.sqrt(), epsilon = 1e-15);
        assert!(close(s.iota, Quaternion::pure(c, c, c), 1e-15));
    }

    #[test]
    fn angle_examples() {
        assert!(close(
            iota_from_angles(SphericalAngles::new(0.0, FRAC_PI_2)),
            I,
            1e-15
        ));
        assert!(close(
            iota_from_angles(SphericalAngles::new(FRAC_PI_2, FRAC_PI_2)),
            J,
            1e-15
        ));
        for alpha in [0.0, 1.0, 4.0] {
            assert!(close(
                iota_from_angles(SphericalAngles::new(alpha, 0.0)),
                K,
                1e-15
            ));
        }
    }

    #[test]
    fn angles_invert_parametrization() {
        let a = SphericalAngles::new(5.1, 0.7);
        let back = SphericalAngles::of_iota(iota_from_angles(a));
        assert_abs_diff_eq!(back.alpha, a.alpha, epsilon = 1e-14);
        assert_abs_diff_eq!(back.beta, a.beta, epsilon = 1e-14);
    }

    #[test]
    fn serializes_as_array() {
        let q = Quaternion::new(1.0, -2.0, 0.5, 3.0);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[1.0,-2.0,0.5,3.0]");
        let back: Quaternion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }

    fn quat() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-10.0f64..10.0).prop_map(Quaternion::from)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn norm_is_multiplicative(a in quat(), b in quat()) {
            let lhs = (a * b).norm();
            let rhs = a.norm() * b.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(f64::MIN_POSITIVE));
        }

        #[test]
        fn conj_reverses_products(a in quat(), b in quat()) {
            let scale = 1.0 + a.norm() * b.norm();
            prop_assert!(close((a * b).conj(), b.conj() * a.conj(), 1e-13 * scale));
        }

        #[test]
        fn inverse_both_sides(a in quat()) {
            prop_assume!(a.norm() > 1e-6);
            let ai = a.inv().unwrap();
            prop_assert!(close(a * ai, Quaternion::ONE, 1e-14));
            prop_assert!(close(ai * a, Quaternion::ONE, 1e-14));
        }

        #[test]
        fn slice_round_trip(a in quat()) {
            let s = to_slice(a);
            prop_assume!(s.r > 1e-8);
            prop_assert!(close(s.recompose(), a, 1e-14 * a.norm()));
            prop_assert_eq!(s.iota.w, 0.0);
            prop_assert!((s.iota.norm() - 1.0).abs() < 1e-15);
            prop_assert!(close(s.iota * s.iota, -Quaternion::ONE, 1e-14));
        }

        #[test]
        fn angles_give_square_root_of_minus_one(alpha in 0.0..2.0 * PI, beta in 0.0..PI) {
            let iota = iota_from_angles(SphericalAngles::new(alpha, beta));
            prop_assert_eq!(iota.w, 0.0);
            prop_assert!(close(iota * iota, -Quaternion::ONE, 1e-14));
        }
    }
}
