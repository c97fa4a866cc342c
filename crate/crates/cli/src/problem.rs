//! Problem files.
//!
//! A problem is a single JSON object. Polygons list their vertices; frontiers
//! name a shape and its parameters:
//!
//! ```json
//! {"kind":"polygon","vertices":[[0,0],[1,0],[0,1]]}
//! {"kind":"frontier","shape":"power","p":2,"domain":[0,1],"y_lo":0,"y_hi":1}
//! {"kind":"frontier","shape":"circle","center":[0,0],"radius":1,"domain":[0,1]}
//! {"kind":"frontier","shape":"linear","domain":[0,2],"y_lo":0,"y_hi":1}
//! {"kind":"frontier","shape":"polyline","points":[[0,2],[1,1.5],[2,0]]}
//! ```
//!
//! `y_hi` is the frontier value at the left end of the domain and `y_lo` the
//! value at the right end. `tol` and `max_iter` may be added to any problem.

use bargain_core::{ConvexPolygon, Frontier, FrontierError, FrontierShape, GeometryError, Point};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid polygon: {0}")]
    Polygon(#[from] GeometryError),
    #[error("invalid frontier: {0}")]
    Frontier(#[from] FrontierError),
    #[error("invalid solver setting: {0}")]
    Setting(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProblemKind {
    Polygon(Vec<Point>),
    Frontier(FrontierShape),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub kind: ProblemKind,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

/// A validated problem.
#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Polygon(ConvexPolygon),
    Frontier(Frontier),
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shape: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    center: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    domain: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y_lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y_hi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_iter: Option<usize>,
}

impl RawProblem {
    /// Names of the fields that are present.
    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut note = |name, set: bool| {
            if set {
                out.push(name)
            }
        };
        note("vertices", self.vertices.is_some());
        note("shape", self.shape.is_some());
        note("p", self.p.is_some());
        note("center", self.center.is_some());
        note("radius", self.radius.is_some());
        note("domain", self.domain.is_some());
        note("y_lo", self.y_lo.is_some());
        note("y_hi", self.y_hi.is_some());
        note("points", self.points.is_some());
        out
    }

    fn only(&self, allowed: &[&str], context: &str) -> Result<(), ProblemError> {
        match self.present().into_iter().find(|f| !allowed.contains(f)) {
            Some(field) => Err(ProblemError::Schema(format!(
                "field `{field}` is not valid for {context}"
            ))),
            None => Ok(()),
        }
    }
}

fn required<T: Copy>(value: Option<T>, field: &str, context: &str) -> Result<T, ProblemError> {
    value.ok_or_else(|| ProblemError::Schema(format!("{context} requires field `{field}`")))
}

fn pair(value: &[f64], field: &str) -> Result<[f64; 2], ProblemError> {
    <[f64; 2]>::try_from(value).map_err(|_| {
        ProblemError::Schema(format!(
            "field `{field}` needs 2 numbers, found {}",
            value.len()
        ))
    })
}

fn required_pair(
    value: &Option<Vec<f64>>,
    field: &str,
    context: &str,
) -> Result<[f64; 2], ProblemError> {
    match value {
        Some(v) => pair(v, field),
        None => Err(ProblemError::Schema(format!(
            "{context} requires field `{field}`"
        ))),
    }
}

fn points(list: &[Vec<f64>], field: &str) -> Result<Vec<Point>, ProblemError> {
    list.iter()
        .map(|p| pair(p, field).map(Point::from))
        .collect()
}

fn pairs(list: &[Point]) -> Vec<Vec<f64>> {
    list.iter().map(|p| vec![p.x, p.y]).collect()
}

/// Parses and validates a problem document.
pub fn parse_problem(text: &str) -> Result<ProblemFile, ProblemError> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            ProblemError::Schema(e.to_string())
        } else {
            ProblemError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            }
        }
    })?;

    let kind = match raw.kind.as_str() {
        "polygon" => {
            raw.only(&["vertices"], "a polygon")?;
            let vertices = raw.vertices.as_deref().ok_or_else(|| {
                ProblemError::Schema("a polygon requires field `vertices`".into())
            })?;
            ProblemKind::Polygon(points(vertices, "vertices")?)
        }
        "frontier" => ProblemKind::Frontier(frontier_shape(&raw)?),
        other => {
            return Err(ProblemError::Schema(format!(
                "unknown kind `{other}` (expected `polygon` or `frontier`)"
            )))
        }
    };

    if let Some(tol) = raw.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(ProblemError::Setting(format!("tol {tol} must be positive")));
        }
    }
    if raw.max_iter == Some(0) {
        return Err(ProblemError::Setting("max_iter must be at least 1".into()));
    }

    let file = ProblemFile {
        kind,
        tol: raw.tol,
        max_iter: raw.max_iter,
    };
    file.build()?;
    Ok(file)
}

fn frontier_shape(raw: &RawProblem) -> Result<FrontierShape, ProblemError> {
    let shape = raw
        .shape
        .as_deref()
        .ok_or_else(|| ProblemError::Schema("a frontier requires field `shape`".into()))?;
    let ctx = format!("a {shape} frontier");
    let shape = match shape {
        "linear" => {
            raw.only(&["shape", "domain", "y_lo", "y_hi"], &ctx)?;
            let [x_lo, x_hi] = required_pair(&raw.domain, "domain", &ctx)?;
            FrontierShape::Linear {
                x_lo,
                x_hi,
                y_top: required(raw.y_hi, "y_hi", &ctx)?,
                y_bottom: required(raw.y_lo, "y_lo", &ctx)?,
            }
        }
        "power" => {
            raw.only(&["shape", "p", "domain", "y_lo", "y_hi"], &ctx)?;
            let [x_lo, x_hi] = required_pair(&raw.domain, "domain", &ctx)?;
            FrontierShape::Power {
                exponent: required(raw.p, "p", &ctx)?,
                x_lo,
                x_hi,
                y_top: required(raw.y_hi, "y_hi", &ctx)?,
                y_bottom: required(raw.y_lo, "y_lo", &ctx)?,
            }
        }
        "circle" => {
            raw.only(&["shape", "center", "radius", "domain"], &ctx)?;
            let [x_lo, x_hi] = required_pair(&raw.domain, "domain", &ctx)?;
            FrontierShape::Circle {
                center: Point::from(required_pair(&raw.center, "center", &ctx)?),
                radius: required(raw.radius, "radius", &ctx)?,
                x_lo,
                x_hi,
            }
        }
        "polyline" => {
            raw.only(&["shape", "points"], &ctx)?;
            let pts = raw
                .points
                .as_deref()
                .ok_or_else(|| ProblemError::Schema(format!("{ctx} requires field `points`")))?;
            FrontierShape::Polyline(points(pts, "points")?)
        }
        other => {
            return Err(ProblemError::Schema(format!(
                "unknown shape `{other}` (expected linear, power, circle or polyline)"
            )))
        }
    };
    Ok(shape)
}

impl ProblemFile {
    /// Constructs the validated polygon or frontier.
    pub fn build(&self) -> Result<Problem, ProblemError> {
        Ok(match &self.kind {
            ProblemKind::Polygon(vertices) => {
                Problem::Polygon(ConvexPolygon::new(vertices.clone())?)
            }
            ProblemKind::Frontier(shape) => Problem::Frontier(Frontier::new(shape.clone())?),
        })
    }

    /// Single-line JSON that [`parse_problem`] reads back to an equal value.
    pub fn to_json(&self) -> String {
        let mut raw = RawProblem {
            tol: self.tol,
            max_iter: self.max_iter,
            ..RawProblem::default()
        };
        match &self.kind {
            ProblemKind::Polygon(vertices) => {
                raw.kind = "polygon".into();
                raw.vertices = Some(pairs(vertices));
            }
            ProblemKind::Frontier(shape) => {
                raw.kind = "frontier".into();
                match shape {
                    FrontierShape::Linear {
                        x_lo,
                        x_hi,
                        y_top,
                        y_bottom,
                    } => {
                        raw.shape = Some("linear".into());
                        raw.domain = Some(vec![*x_lo, *x_hi]);
                        raw.y_lo = Some(*y_bottom);
                        raw.y_hi = Some(*y_top);
                    }
                    FrontierShape::Power {
                        exponent,
                        x_lo,
                        x_hi,
                        y_top,
                        y_bottom,
                    } => {
                        raw.shape = Some("power".into());
                        raw.p = Some(*exponent);
                        raw.domain = Some(vec![*x_lo, *x_hi]);
                        raw.y_lo = Some(*y_bottom);
                        raw.y_hi = Some(*y_top);
                    }
                    FrontierShape::Circle {
                        center,
                        radius,
                        x_lo,
                        x_hi,
                    } => {
                        raw.shape = Some("circle".into());
                        raw.center = Some(vec![center.x, center.y]);
                        raw.radius = Some(*radius);
                        raw.domain = Some(vec![*x_lo, *x_hi]);
                    }
                    FrontierShape::Polyline(pts) => {
                        raw.shape = Some("polyline".into());
                        raw.points = Some(pairs(pts));
                    }
                }
            }
        }
        serde_json::to_string(&raw).expect("problem serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_problem() {
        let p = parse_problem(r#"{"kind":"polygon","vertices":[[0,0],[1,0],[0,1]]}"#).unwrap();
        assert_eq!(
            p.kind,
            ProblemKind::Polygon(vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, 1.0)
            ])
        );
        assert_eq!((p.tol, p.max_iter), (None, None));
    }

    #[test]
    fn power_problem() {
        let p = parse_problem(
            r#"{"kind":"frontier","shape":"power","p":2,"domain":[0,1],"y_lo":0,"y_hi":1}"#,
        )
        .unwrap();
        let Problem::Frontier(f) = p.build().unwrap() else {
            panic!("expected a frontier")
        };
        assert_eq!(f.eval(0.5).unwrap(), 0.75);
    }

    #[test]
    fn single_point_problem() {
        let p = parse_problem(r#"{"kind":"polygon","vertices":[[0,0]]}"#).unwrap();
        assert!(matches!(p.build().unwrap(), Problem::Polygon(poly) if poly.is_point()));
    }

    #[test]
    fn overrides() {
        let p = parse_problem(r#"{"kind":"polygon","vertices":[[0,0]],"tol":1e-6,"max_iter":5}"#)
            .unwrap();
        assert_eq!((p.tol, p.max_iter), (Some(1e-6), Some(5)));
        assert!(matches!(
            parse_problem(r#"{"kind":"polygon","vertices":[[0,0]],"tol":-1}"#),
            Err(ProblemError::Setting(_))
        ));
    }

    #[test]
    fn syntax_errors_name_the_line() {
        let err = parse_problem("{\n\"kind\": \"polygon\",\n\"vertices\": [[0,0],\n").unwrap_err();
        match err {
            ProblemError::Syntax { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn schema_errors() {
        for text in [
            r#"{"kind":"polygon"}"#,
            r#"{"kind":"polygon","vertices":[[0,0]],"color":"red"}"#,
            r#"{"kind":"polygon","vertices":[[0,0]],"radius":1}"#,
            r#"{"kind":"blob","vertices":[[0,0]]}"#,
            r#"{"kind":"frontier","shape":"power","domain":[0,1],"y_lo":0,"y_hi":1}"#,
            r#"{"kind":"frontier","shape":"spline","points":[[0,1],[1,0]]}"#,
            r#"{"vertices":[[0,0]]}"#,
            r#"{"kind":"polygon","vertices":[[0,0,1]]}"#,
            r#"{"kind":"frontier","shape":"linear","domain":[0],"y_lo":0,"y_hi":1}"#,
        ] {
            assert!(
                matches!(parse_problem(text), Err(ProblemError::Schema(_))),
                "{text}: {:?}",
                parse_problem(text)
            );
        }
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            parse_problem(r#"{"kind":"polygon","vertices":[]}"#),
            Err(ProblemError::Polygon(GeometryError::EmptyInput))
        ));
        assert!(matches!(
            parse_problem(r#"{"kind":"polygon","vertices":[[0,0],[2,0],[1,0.3],[0,1]]}"#),
            Err(ProblemError::Polygon(GeometryError::NotConvex { .. }))
        ));
        assert!(matches!(
            parse_problem(
                r#"{"kind":"frontier","shape":"power","p":0.5,"domain":[0,1],"y_lo":0,"y_hi":1}"#
            ),
            Err(ProblemError::Frontier(FrontierError::BadParameter(_)))
        ));
    }

    #[test]
    fn json_round_trip() {
        for text in [
            r#"{"kind":"polygon","vertices":[[0,0],[1,0],[0,1]],"tol":1e-7}"#,
            r#"{"kind":"frontier","shape":"linear","domain":[0,2],"y_lo":0,"y_hi":1}"#,
            r#"{"kind":"frontier","shape":"power","p":2.5,"domain":[0,1],"y_lo":0,"y_hi":1,"max_iter":50}"#,
            r#"{"kind":"frontier","shape":"circle","center":[0,0],"radius":1,"domain":[0,1]}"#,
            r#"{"kind":"frontier","shape":"polyline","points":[[0,2],[1,1.5],[2,0]]}"#,
        ] {
            let p = parse_problem(text).unwrap();
            assert_eq!(parse_problem(&p.to_json()).unwrap(), p, "{text}");
        }
    }
}
