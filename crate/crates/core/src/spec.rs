//! JSON descriptions of spaces and the text form of points.
//!
//! A document is `{"schema": 1, "space": {...}}`; unknown fields anywhere are
//! rejected. Structural problems are [`Error::Schema`], constructor
//! violations (a radius past π/√κ, a non-convex polygon) are
//! [`Error::InvalidArgument`].

use std::f64::consts::PI;

use serde::Deserialize;

use crate::comparison::{AnalyticSpace, PointedSpace};
use crate::cone::{ConePoint, ConeSpace};
use crate::dirspace::{DirPoint, DirectionSpace};
use crate::error::{invalid, Error, Result};
use crate::glue::{GluedSpace, Involution, PolygonGluing};
use crate::spaceform::Curvature;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    schema: u32,
    space: SpaceSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    pub kappa: f64,
    pub radius: f64,
    pub sigma: DirectionSpace,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    Sphere { dim: usize },
    Circle { length: f64 },
    Interval { theta: f64 },
    Suspension { inner: DirectionSpace },
    FiniteNet { matrix: Vec<Vec<f64>> },
    Cone(ConeSpec),
    Glued {
        cone: ConeSpec,
        phi: Involution,
        #[serde(default)]
        allow_non_admissible: bool,
    },
    Polygon { vertices: Vec<[f64; 2]> },
    RoundSphere { radius: f64, dim: usize },
}

/// A constructed space.
#[derive(Debug, Clone, PartialEq)]
pub enum Space {
    Direction(DirectionSpace),
    Cone(ConeSpace),
    Glued(GluedSpace),
    Polygon(PolygonGluing),
    Analytic(AnalyticSpace),
}

impl Space {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Space::Direction(_) => "direction",
            Space::Cone(_) => "cone",
            Space::Glued(_) => "glued",
            Space::Polygon(_) => "polygon",
            Space::Analytic(_) => "round_sphere",
        }
    }
}

impl Space {
    /// The space as a pointed space with ball volumes, if it is one.
    pub fn pointed(&self) -> Result<&dyn PointedSpace> {
        match self {
            Space::Cone(c) => Ok(c),
            Space::Glued(g) => Ok(g),
            Space::Analytic(a) => Ok(a),
            other => Err(Error::Unsupported(format!(
                "volumes need a cone, glued or round_sphere space, got {}",
                other.kind_name()
            ))),
        }
    }
}

fn cone_from(spec: ConeSpec) -> Result<ConeSpace> {
    ConeSpace::new(spec.sigma, Curvature::new(spec.kappa)?, spec.radius)
}

impl SpaceSpec {
    pub fn build(self) -> Result<Space> {
        Ok(match self {
            SpaceSpec::Sphere { dim } => Space::Direction(DirectionSpace::sphere(dim)),
            SpaceSpec::Circle { length } => Space::Direction(DirectionSpace::circle(length)?),
            SpaceSpec::Interval { theta } => Space::Direction(DirectionSpace::interval(theta)?),
            SpaceSpec::Suspension { inner } => Space::Direction(DirectionSpace::suspension(inner)?),
            SpaceSpec::FiniteNet { matrix } => Space::Direction(DirectionSpace::finite_net(matrix)?),
            SpaceSpec::Cone(c) => Space::Cone(cone_from(c)?),
            SpaceSpec::Glued { cone, phi, allow_non_admissible } => {
                let cone = cone_from(cone)?;
                Space::Glued(if allow_non_admissible {
                    GluedSpace::new_non_admissible(cone, phi)?
                } else {
                    GluedSpace::new(cone, phi)?
                })
            }
            SpaceSpec::Polygon { vertices } => Space::Polygon(PolygonGluing::new(vertices)?),
            SpaceSpec::RoundSphere { radius, dim } => Space::Analytic(AnalyticSpace::round_sphere(radius, dim)?),
        })
    }
}

fn schema_error(e: serde_path_to_error::Error<serde_json::Error>) -> Error {
    let path = e.path().to_string();
    let inner = e.into_inner();
    // serde_json's message already ends with the line and column
    Error::Schema(format!("at `{path}`: {inner}"))
}

/// Parses and validates a space document.
pub fn parse_space(json: &str) -> Result<Space> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let doc: Document = serde_path_to_error::deserialize(de).map_err(schema_error)?;
    if doc.schema != SCHEMA_VERSION {
        return Err(Error::Schema(format!("unsupported schema version {} (expected {SCHEMA_VERSION})", doc.schema)));
    }
    doc.space.build()
}

/// Parses a bare direction-space object, as used for `--sigma`.
pub fn parse_direction_space(json: &str) -> Result<DirectionSpace> {
    match parse_space(json)? {
        Space::Direction(d) => Ok(d),
        other => Err(invalid(format!("expected a direction space, got a {} space", other.kind_name()))),
    }
}

fn number(s: &str) -> Result<f64> {
    let s = s.trim();
    let (body, scale) = if let Some(b) = s.strip_suffix("deg").or_else(|| s.strip_suffix('°')) {
        (b, PI / 180.0)
    } else {
        (s, 1.0)
    };
    let v = match body.trim() {
        "pi" => PI,
        b => b.parse::<f64>().map_err(|_| invalid(format!("cannot read `{s}` as a number")))?,
    };
    Ok(v * scale)
}

/// Direction text: an angle for circles, a position for intervals, `x:y:z`
/// for spheres, `polar/inner` for suspensions, an index for finite nets.
/// Angles and positions accept a `deg` suffix.
pub fn parse_direction(sigma: &DirectionSpace, text: &str) -> Result<DirPoint> {
    let text = text.trim();
    let p = match sigma {
        DirectionSpace::Circle { .. } => DirPoint::Angle(number(text)?),
        DirectionSpace::Interval { .. } => DirPoint::Scalar(number(text)?),
        DirectionSpace::Sphere { .. } => DirPoint::Vector(text.split(':').map(number).collect::<Result<_>>()?),
        DirectionSpace::Suspension { inner } => {
            let (polar, rest) =
                text.split_once('/').ok_or_else(|| invalid(format!("suspension point `{text}` needs polar/inner")))?;
            DirPoint::suspended(number(polar)?, parse_direction(inner, rest)?)
        }
        DirectionSpace::FiniteNet { .. } => {
            DirPoint::Index(text.parse().map_err(|_| invalid(format!("`{text}` is not a net index")))?)
        }
    };
    sigma.validate_point(&p)?;
    Ok(p)
}

/// Cone point text: `apex` or `t,direction`.
pub fn parse_cone_point(cone: &ConeSpace, text: &str) -> Result<ConePoint> {
    let text = text.trim();
    if text == "apex" {
        return Ok(cone.apex());
    }
    let (t, dir) = text
        .split_once(',')
        .ok_or_else(|| invalid(format!("cone point `{text}` must be `apex` or `t,direction`")))?;
    let t = number(t)?;
    if t == 0.0 {
        return Ok(cone.apex());
    }
    cone.point(parse_direction(cone.sigma(), dir)?, t)
}

/// Polygon point text: `x:y`.
pub fn parse_plane_point(text: &str) -> Result<[f64; 2]> {
    let (x, y) = text.trim().split_once(':').ok_or_else(|| invalid(format!("plane point `{text}` must be `x:y`")))?;
    Ok([number(x)?, number(y)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    const DISK: &str = r#"{"schema": 1, "space": {"kind": "cone", "kappa": 0, "radius": 1,
        "sigma": {"kind": "circle", "length": 6.283185307179586}}}"#;

    #[test]
    fn parses_cone_and_points() {
        let Space::Cone(c) = parse_space(DISK).unwrap() else { panic!("not a cone") };
        assert_eq!(c.radius(), 1.0);
        let p = parse_cone_point(&c, "0.9,180deg").unwrap();
        assert!(matches!(p.direction, DirPoint::Angle(a) if (a - PI).abs() < 1e-15));
        assert!(parse_cone_point(&c, "apex").unwrap().is_apex());
        assert!(parse_cone_point(&c, "1.5,0").is_err());
    }

    #[test]
    fn glued_and_polygon() {
        let g = r#"{"schema":1,"space":{"kind":"glued","cone":{"kappa":0,"radius":1,
            "sigma":{"kind":"circle","length":6.283185307179586}},"phi":{"kind":"antipodal_circle"}}}"#;
        assert!(matches!(parse_space(g).unwrap(), Space::Glued(_)));
        let p = r#"{"schema":1,"space":{"kind":"polygon","vertices":[[0,0],[2,0],[1,1.7320508075688772]]}}"#;
        assert!(matches!(parse_space(p).unwrap(), Space::Polygon(_)));
        assert_eq!(parse_plane_point("1:0.5").unwrap(), [1.0, 0.5]);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let bad = r#"{"schema": 1, "space": {"kind": "cone", "kappa": 0, "radius": 1,
            "sigma": {"kind": "circle", "lenght": 6.28}}}"#;
        let Err(Error::Schema(msg)) = parse_space(bad) else { panic!("expected a schema error") };
        assert!(msg.contains("`lenght`") && msg.contains("line 2"), "{msg}");
        assert!(matches!(parse_space("{not json"), Err(Error::Schema(_))));
        assert!(matches!(parse_space(r#"{"schema": 2, "space": {"kind": "sphere", "dim": 1}}"#), Err(Error::Schema(_))));
        assert!(matches!(
            parse_space(r#"{"schema": 1, "space": {"kind": "sphere", "dim": 1}, "extra": 0}"#),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn domain_errors_are_not_schema_errors() {
        let far = r#"{"schema": 1, "space": {"kind": "cone", "kappa": 1, "radius": 4,
            "sigma": {"kind": "sphere", "dim": 1}}}"#;
        assert!(matches!(parse_space(far), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn direction_text() {
        let s = DirectionSpace::suspension(DirectionSpace::circle(2.0 * PI).unwrap()).unwrap();
        let p = parse_direction(&s, "90deg/pi").unwrap();
        assert_eq!(p, DirPoint::suspended(PI / 2.0, DirPoint::Angle(PI)));
        let sphere = DirectionSpace::sphere(2);
        assert!(parse_direction(&sphere, "0:0:1").is_ok());
        assert!(parse_direction(&sphere, "0:1").is_err());
    }
}
