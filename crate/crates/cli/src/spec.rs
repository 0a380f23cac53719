//! Text forms of quaternions, domains, fields, test functions and resolutions.

use std::str::FromStr;

use fueter_core::fields::{
    make_bump, make_conjugate, make_constant, make_coordinate, make_identity, make_kernel_section,
    make_power,
};
use fueter_core::identities::{newton_potential_field, Resolutions};
use fueter_core::{Domain, Quaternion, QuaternionField, TestFunction};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

fn numbers(text: &str, what: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("invalid number {s:?} in {what} {text:?}")))
        })
        .collect()
}

fn quat_of(v: &[f64]) -> Quaternion {
    Quaternion::new(v[0], v[1], v[2], v[3])
}

/// `w,x,y,z`, optionally bracketed.
pub fn parse_quaternion(text: &str) -> CliResult<Quaternion> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    let v = numbers(inner, "quaternion")?;
    if v.len() != 4 {
        return Err(CliError::usage(format!(
            "a quaternion needs 4 components w,x,y,z, got {text:?}"
        )));
    }
    Ok(quat_of(&v))
}

/// `ball:w,x,y,z,R`, `box:w0,x0,y0,z0,w1,x1,y1,z1` or `unit-ball`.
pub fn parse_domain(text: &str) -> CliResult<Domain> {
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    match kind.trim() {
        "unit-ball" | "unit_ball" if rest.is_empty() => Ok(Domain::unit_ball()),
        "ball" => {
            let v = numbers(rest, "ball")?;
            if v.len() != 5 {
                return Err(CliError::usage(format!(
                    "ball needs w,x,y,z,R, got {text:?}"
                )));
            }
            Ok(Domain::ball(quat_of(&v), v[4])?)
        }
        "box" => {
            let v = numbers(rest, "box")?;
            if v.len() != 8 {
                return Err(CliError::usage(format!(
                    "box needs two corners w0,x0,y0,z0,w1,x1,y1,z1, got {text:?}"
                )));
            }
            Ok(Domain::cuboid(quat_of(&v[..4]), quat_of(&v[4..]))?)
        }
        _ => Err(CliError::usage(format!(
            "unknown domain {text:?}; expected ball:w,x,y,z,R, box:<8 numbers> or unit-ball"
        ))),
    }
}

/// A domain given either as text or as a tagged JSON object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainInput {
    Text(String),
    Shape(Domain),
}

impl DomainInput {
    pub fn resolve(&self) -> CliResult<Domain> {
        match self {
            DomainInput::Text(t) => parse_domain(t),
            DomainInput::Shape(d) => Ok(*d),
        }
    }
}

/// Named reference field.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldSpec {
    Constant(Quaternion),
    Identity,
    Conjugate,
    Power(u32),
    Coordinate(usize),
    Kernel(Quaternion),
    Bump(TestFunction),
    /// Newton potential of the right-hand-side field over the domain.
    Newton,
}

fn parse_bump(rest: &str, text: &str) -> CliResult<TestFunction> {
    let v = numbers(rest, "bump")?;
    let amplitude = match v.len() {
        5 => Quaternion::ONE,
        9 => quat_of(&v[5..]),
        _ => {
            return Err(CliError::usage(format!(
                "bump needs w,x,y,z,radius[,a0,a1,a2,a3], got {text:?}"
            )))
        }
    };
    Ok(make_bump(quat_of(&v), v[4], amplitude)?)
}

impl FromStr for FieldSpec {
    type Err = CliError;

    fn from_str(text: &str) -> CliResult<Self> {
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        let need_empty = |spec: FieldSpec| {
            if rest.is_empty() {
                Ok(spec)
            } else {
                Err(CliError::usage(format!(
                    "field {kind:?} takes no arguments, got {text:?}"
                )))
            }
        };
        match kind.trim() {
            "const" if rest.is_empty() => Ok(FieldSpec::Constant(Quaternion::ONE)),
            "const" => match rest.trim().parse::<f64>() {
                Ok(c) => Ok(FieldSpec::Constant(Quaternion::real(c))),
                Err(_) => Ok(FieldSpec::Constant(parse_quaternion(rest)?)),
            },
            "identity" => need_empty(FieldSpec::Identity),
            "conj" => need_empty(FieldSpec::Conjugate),
            "newton" => need_empty(FieldSpec::Newton),
            "power" => rest
                .trim()
                .parse()
                .map(FieldSpec::Power)
                .map_err(|_| CliError::usage(format!("power needs a non-negative integer, got {text:?}"))),
            "coord" => match rest.trim().parse::<usize>() {
                Ok(m) if m < 4 => Ok(FieldSpec::Coordinate(m)),
                _ => Err(CliError::usage(format!("coord needs an index 0..=3, got {text:?}"))),
            },
            "kernel" => Ok(FieldSpec::Kernel(parse_quaternion(rest)?)),
            "bump" => Ok(FieldSpec::Bump(parse_bump(rest, text)?)),
            _ => Err(CliError::usage(format!(
                "unknown field {text:?}; expected const[:c or :w,x,y,z], identity, conj, power:n, coord:m, \
                 kernel:w,x,y,z, bump:w,x,y,z,r or newton"
            ))),
        }
    }
}

impl FieldSpec {
    /// Build the field; `newton` needs the domain, the right-hand side and resolutions.
    pub fn build(
        &self,
        domain: &Domain,
        rhs: Option<&QuaternionField>,
        res: &Resolutions,
    ) -> CliResult<QuaternionField> {
        Ok(match self {
            FieldSpec::Constant(c) => make_constant(*c),
            FieldSpec::Identity => make_identity(),
            FieldSpec::Conjugate => make_conjugate(),
            FieldSpec::Power(n) => make_power(*n),
            FieldSpec::Coordinate(m) => make_coordinate(*m),
            FieldSpec::Kernel(p0) => make_kernel_section(*p0),
            FieldSpec::Bump(b) => b.field(),
            FieldSpec::Newton => {
                let h = rhs.ok_or_else(|| CliError::usage("field newton needs --rhs-field"))?;
                newton_potential_field(domain, h, res)
            }
        })
    }
}

/// `bump:w,x,y,z,r[,a0,a1,a2,a3]`.
pub fn parse_test_function(text: &str) -> CliResult<TestFunction> {
    match FieldSpec::from_str(text)? {
        FieldSpec::Bump(b) => Ok(b),
        _ => Err(CliError::usage(format!(
            "test functions are bumps, got {text:?}"
        ))),
    }
}

/// Per-family overrides of the default resolutions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartialResolutions {
    pub volume: Option<usize>,
    pub boundary: Option<usize>,
    pub eps_sphere: Option<usize>,
    pub singular_radial: Option<usize>,
    pub singular_angular: Option<usize>,
    pub support_radial: Option<usize>,
}

/// Either one node count for every rule family or per-family overrides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResolutionInput {
    Uniform(usize),
    Partial(PartialResolutions),
}

impl ResolutionInput {
    pub fn resolve(&self) -> CliResult<Resolutions> {
        let r = match *self {
            ResolutionInput::Uniform(n) => Resolutions::uniform(n),
            ResolutionInput::Partial(p) => {
                let d = Resolutions::default();
                Resolutions {
                    volume: p.volume.unwrap_or(d.volume),
                    boundary: p.boundary.unwrap_or(d.boundary),
                    eps_sphere: p.eps_sphere.unwrap_or(d.eps_sphere),
                    singular_radial: p.singular_radial.unwrap_or(d.singular_radial),
                    singular_angular: p.singular_angular.unwrap_or(d.singular_angular),
                    support_radial: p.support_radial.unwrap_or(d.support_radial),
                }
            }
        };
        let all = [
            r.volume,
            r.boundary,
            r.eps_sphere,
            r.singular_radial,
            r.singular_angular,
            r.support_radial,
        ];
        if all.contains(&0) {
            return Err(CliError::usage("resolutions must be positive"));
        }
        Ok(r)
    }

    /// Set one family (or `all`) to `n`, keeping the rest.
    pub fn with_family(self, family: &str, n: usize) -> CliResult<Self> {
        if family == "all" {
            return Ok(ResolutionInput::Uniform(n));
        }
        let mut p = match self {
            ResolutionInput::Partial(p) => p,
            ResolutionInput::Uniform(u) => {
                let r = Resolutions::uniform(u);
                PartialResolutions {
                    volume: Some(r.volume),
                    boundary: Some(r.boundary),
                    eps_sphere: Some(r.eps_sphere),
                    singular_radial: Some(r.singular_radial),
                    singular_angular: Some(r.singular_angular),
                    support_radial: Some(r.support_radial),
                }
            }
        };
        let slot = match family {
            "volume" => &mut p.volume,
            "boundary" => &mut p.boundary,
            "eps_sphere" => &mut p.eps_sphere,
            "singular_radial" => &mut p.singular_radial,
            "singular_angular" => &mut p.singular_angular,
            "support_radial" => &mut p.support_radial,
            _ => {
                return Err(CliError::usage(format!(
                    "unknown resolution family {family:?}"
                )))
            }
        };
        *slot = Some(n);
        Ok(ResolutionInput::Partial(p))
    }
}

impl FromStr for ResolutionInput {
    type Err = CliError;

    /// `24` or `volume=24,boundary=32`.
    fn from_str(text: &str) -> CliResult<Self> {
        if let Ok(n) = text.trim().parse::<usize>() {
            return Ok(ResolutionInput::Uniform(n));
        }
        let mut input = ResolutionInput::Partial(PartialResolutions::default());
        for item in text.split(',') {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("invalid resolution {text:?}")))?;
            let n = v
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("invalid node count in {item:?}")))?;
            input = input.with_family(k.trim(), n)?;
        }
        Ok(input)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternions() {
        assert_eq!(
            parse_quaternion("1, 2,3,4").unwrap(),
            Quaternion::new(1.0, 2.0, 3.0, 4.0)
        );
        assert_eq!(parse_quaternion("[0,0,0,1]").unwrap(), Quaternion::K);
        assert!(parse_quaternion("1,2,3").is_err());
        assert!(parse_quaternion("a,b,c,d").is_err());
    }

    #[test]
    fn domains() {
        assert_eq!(parse_domain("unit-ball").unwrap(), Domain::unit_ball());
        assert_eq!(
            parse_domain("ball:2,2,2,0,0.8").unwrap(),
            Domain::ball(Quaternion::new(2.0, 2.0, 2.0, 0.0), 0.8).unwrap()
        );
        assert!(matches!(
            parse_domain("box:0,0,0,0,1,1,1,1").unwrap(),
            Domain::Box4 { .. }
        ));
        assert!(parse_domain("ball:0,0,0,0,-1").is_err());
        assert!(parse_domain("torus:1").is_err());
        let json: DomainInput =
            serde_json::from_str(r#"{"shape":"ball4","center":[0,0,0,0],"radius":1.0}"#).unwrap();
        assert_eq!(json.resolve().unwrap(), Domain::unit_ball());
    }

    #[test]
    fn fields() {
        assert_eq!(
            "const".parse::<FieldSpec>().unwrap(),
            FieldSpec::Constant(Quaternion::ONE)
        );
        assert_eq!(
            "const:-2".parse::<FieldSpec>().unwrap(),
            FieldSpec::Constant(Quaternion::real(-2.0))
        );
        assert_eq!("power:3".parse::<FieldSpec>().unwrap(), FieldSpec::Power(3));
        assert_eq!(
            "coord:2".parse::<FieldSpec>().unwrap(),
            FieldSpec::Coordinate(2)
        );
        assert!("coord:4".parse::<FieldSpec>().is_err());
        assert!("identity:1".parse::<FieldSpec>().is_err());
        assert!("sin".parse::<FieldSpec>().is_err());
        let b = parse_test_function("bump:0,0,0,0,0.5,0,1,0,0").unwrap();
        assert!(!b.is_real());
        assert!(parse_test_function("identity").is_err());
        let d = Domain::unit_ball();
        let res = Resolutions::default();
        assert!(FieldSpec::Newton.build(&d, None, &res).is_err());
    }

    #[test]
    fn resolutions() {
        assert_eq!(
            "16".parse::<ResolutionInput>().unwrap().resolve().unwrap(),
            Resolutions::uniform(16)
        );
        let r = "boundary=8,volume=6"
            .parse::<ResolutionInput>()
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(
            (r.boundary, r.volume, r.eps_sphere),
            (8, 6, Resolutions::default().eps_sphere)
        );
        assert!("bogus=3".parse::<ResolutionInput>().is_err());
        assert!("0".parse::<ResolutionInput>().unwrap().resolve().is_err());
        let j: ResolutionInput = serde_json::from_str(r#"{"boundary": 12}"#).unwrap();
        assert_eq!(j.resolve().unwrap().boundary, 12);
    }
}
