//! Reference quaternionic fields and compactly supported test functions.

use std::fmt;
use std::sync::Arc;

use crate::geometry::Domain;
use crate::kernel::{eval_kernel, kernel_partials};
use crate::quat::Quaternion;
use crate::{Error, Result};

type EvalFn = dyn Fn(Quaternion) -> Result<Quaternion> + Send + Sync;
type PartialsFn = dyn Fn(Quaternion) -> Result<[Quaternion; 4]> + Send + Sync;

/// A map `H → H`, optionally with closed-form partials `∂/∂t, ∂/∂x, ∂/∂y, ∂/∂z`.
#[derive(Clone)]
pub struct QuaternionField {
    name: String,
    eval: Arc<EvalFn>,
    partials: Option<Arc<PartialsFn>>,
    support: Option<Domain>,
}

impl fmt::Debug for QuaternionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuaternionField")
            .field("name", &self.name)
            .field("closed_form_partials", &self.partials.is_some())
            .field("support", &self.support)
            .finish()
    }
}

impl QuaternionField {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(Quaternion) -> Result<Quaternion> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            partials: None,
            support: None,
        }
    }

    /// Field from an infallible closure.
    pub fn from_fn<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(Quaternion) -> Quaternion + Send + Sync + 'static,
    {
        Self::new(name, move |q| Ok(f(q)))
    }

    pub fn with_partials<P>(mut self, partials: P) -> Self
    where
        P: Fn(Quaternion) -> Result<[Quaternion; 4]> + Send + Sync + 'static,
    {
        self.partials = Some(Arc::new(partials));
        self
    }

    /// The same field with its closed-form partials dropped, forcing finite differences.
    pub fn without_partials(&self) -> Self {
        Self {
            partials: None,
            ..self.clone()
        }
    }

    /// Declare that the field vanishes outside `support`.
    pub fn with_support(mut self, support: Domain) -> Self {
        self.support = Some(support);
        self
    }

    /// A region outside which the field is known to vanish.
    pub fn support(&self) -> Option<Domain> {
        self.support
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn has_partials(&self) -> bool {
        self.partials.is_some()
    }

    /// Value at `q`; non-finite values are reported as errors.
    pub fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        let v = (self.eval)(q)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite {
                what: self.name.clone(),
                point: q,
            })
        }
    }

    pub fn closed_form_partials(&self, q: Quaternion) -> Option<Result<[Quaternion; 4]>> {
        self.partials.as_ref().map(|p| p(q))
    }

    /// Pointwise `self + other`.
    pub fn add(&self, other: &QuaternionField) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let mut out = Self::new(format!("{}+{}", self.name, other.name), {
            let (a, b) = (a.clone(), b.clone());
            move |q| Ok(a.eval(q)? + b.eval(q)?)
        });
        if a.has_partials() && b.has_partials() {
            out = out.with_partials(move |q| {
                let pa = a.closed_form_partials(q).expect("checked")?;
                let pb = b.closed_form_partials(q).expect("checked")?;
                Ok(std::array::from_fn(|m| pa[m] + pb[m]))
            });
        }
        out
    }

    /// Pointwise `c·self` for real `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let a = self.clone();
        let mut out = Self::new(format!("{c}*{}", self.name), {
            let a = a.clone();
            move |q| Ok(a.eval(q)? * c)
        });
        if a.has_partials() {
            out = out.with_partials(move |q| {
                let p = a.closed_form_partials(q).expect("checked")?;
                Ok(p.map(|v| v * c))
            });
        }
        out.support = self.support;
        out
    }
}

pub fn make_constant(c: Quaternion) -> QuaternionField {
    QuaternionField::from_fn(format!("const:{c}"), move |_| c)
        .with_partials(|_| Ok([Quaternion::ZERO; 4]))
}

pub fn make_identity() -> QuaternionField {
    QuaternionField::from_fn("identity", |q| q).with_partials(|_| Ok(Quaternion::BASIS))
}

pub fn make_conjugate() -> QuaternionField {
    QuaternionField::from_fn("conj", |q| q.conj()).with_partials(|_| {
        Ok([
            Quaternion::ONE,
            -Quaternion::I,
            -Quaternion::J,
            -Quaternion::K,
        ])
    })
}

/// `qⁿ` by repeated multiplication, partials from the product rule
/// `∂(q·qⁿ⁻¹) = e·qⁿ⁻¹ + q·∂qⁿ⁻¹`.
pub fn make_power(n: u32) -> QuaternionField {
    QuaternionField::from_fn(format!("power:{n}"), move |q| q.powi(n)).with_partials(move |q| {
        let mut value = Quaternion::ONE;
        let mut d = [Quaternion::ZERO; 4];
        for _ in 0..n {
            for (m, dm) in d.iter_mut().enumerate() {
                *dm = Quaternion::BASIS[m] * value + q * *dm;
            }
            value = q * value;
        }
        Ok(d)
    })
}

/// The real coordinate function `q ↦ q_m` in the order `(t, x, y, z)`.
pub fn make_coordinate(m: usize) -> QuaternionField {
    assert!(m < 4, "coordinate index out of range");
    QuaternionField::from_fn(format!("coord:{m}"), move |q| {
        Quaternion::real(q.component(m))
    })
    .with_partials(move |_| {
        let mut d = [Quaternion::ZERO; 4];
        d[m] = Quaternion::ONE;
        Ok(d)
    })
}

/// `q ↦ E(q, p0)`.
pub fn make_kernel_section(p0: Quaternion) -> QuaternionField {
    QuaternionField::new(format!("kernel:{p0}"), move |q| eval_kernel(q, p0))
        .with_partials(move |q| kernel_partials(q, p0))
}

/// Smooth bump `amplitude·exp(−1/(1 − s²))`, `s = |q − center|/radius`, zero for `s ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestFunction {
    pub center: Quaternion,
    pub radius: f64,
    pub amplitude: Quaternion,
}

pub fn make_bump(center: Quaternion, radius: f64, amplitude: Quaternion) -> Result<TestFunction> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Precondition(format!(
            "bump radius must be positive, got {radius}"
        )));
    }
    Ok(TestFunction {
        center,
        radius,
        amplitude,
    })
}

impl TestFunction {
    /// Real unit-amplitude bump.
    pub fn real(center: Quaternion, radius: f64) -> Result<Self> {
        make_bump(center, radius, Quaternion::ONE)
    }

    fn profile(&self, q: Quaternion) -> Option<(f64, f64)> {
        let d2 = (q - self.center).norm_sqr() / (self.radius * self.radius);
        if d2 >= 1.0 {
            return None;
        }
        let one_minus = 1.0 - d2;
        Some(((-1.0 / one_minus).exp(), one_minus))
    }

    pub fn value(&self, q: Quaternion) -> Quaternion {
        match self.profile(q) {
            Some((e, _)) => self.amplitude * e,
            None => Quaternion::ZERO,
        }
    }

    /// Partials `∂φ/∂t, ∂φ/∂x, ∂φ/∂y, ∂φ/∂z`.
    pub fn gradient(&self, q: Quaternion) -> [Quaternion; 4] {
        match self.profile(q) {
            Some((e, one_minus)) => {
                let d = (q - self.center).to_array();
                let c = -2.0 * e / (self.radius * self.radius * one_minus * one_minus);
                d.map(|dm| self.amplitude * (c * dm))
            }
            None => [Quaternion::ZERO; 4],
        }
    }

    /// `D_r φ = Σ (∂φ/∂x_m)·e_m`.
    pub fn fueter_right(&self, q: Quaternion) -> Quaternion {
        let g = self.gradient(q);
        (0..4).map(|m| g[m] * Quaternion::BASIS[m]).sum()
    }

    /// `|φ(center)| = |amplitude|·e⁻¹`.
    pub fn peak(&self) -> f64 {
        self.amplitude.norm() * (-1.0f64).exp()
    }

    pub fn is_real(&self) -> bool {
        self.amplitude.vector() == Quaternion::ZERO
    }

    pub fn support(&self) -> Domain {
        Domain::Ball4 {
            center: self.center,
            radius: self.radius,
        }
    }

    pub fn name(&self) -> String {
        format!("bump:{},{}", self.center, self.radius)
    }

    pub fn field(&self) -> QuaternionField {
        let (a, b) = (*self, *self);
        QuaternionField::from_fn(self.name(), move |q| a.value(q))
            .with_partials(move |q| Ok(b.gradient(q)))
            .with_support(self.support())
    }
}
