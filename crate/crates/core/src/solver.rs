//! The two solution procedures.
//!
//! [`solve_polygon`] trims the set repeatedly to the quadrant above its
//! threat point. [`solve_frontier`] runs the equivalent recurrence on the
//! corners alone, using only `f` and `f⁻¹`. Both shrink the bracket around
//! the solution by at least half per step.

use thiserror::Error;

use crate::frontier::{Frontier, FrontierError};
use crate::geometry::{ConvexPolygon, GeometryError, Point};
use crate::threat::threat_point;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// Stop once the bounding-box (or corner-bracket) diameter is at most this.
    pub tol: f64,
    pub max_iter: usize,
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            record_trace: false,
        }
    }
}

impl SolverConfig {
    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(SolverError::BadConfig(format!(
                "tol {} must be positive",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(SolverError::BadConfig("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// State of one step: top corner `(x, y)`, right corner `(z, w)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    pub n: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
    pub threat: Point,
    pub diam: f64,
}

impl TraceRecord {
    pub fn top(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn right(&self) -> Point {
        Point::new(self.z, self.w)
    }

    fn of_polygon(n: usize, polygon: &ConvexPolygon) -> Self {
        let corners = polygon.corner_points();
        TraceRecord {
            n,
            x: corners.top.x,
            y: corners.top.y,
            z: corners.right.x,
            w: corners.right.y,
            threat: threat_point(&corners),
            diam: polygon.bounding_box().diameter(),
        }
    }

    fn of_bracket(n: usize, x: f64, y: f64, z: f64, w: f64) -> Self {
        TraceRecord {
            n,
            x,
            y,
            z,
            w,
            threat: Point::new(0.5 * (x + z), 0.5 * (y + w)),
            diam: (z - x).hypot(y - w),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub point: Point,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TraceRecord>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("no convergence after {} iterations", .0.iterations)]
    NotConverged(Box<Solution>),
    #[error("invalid solver configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Frontier(#[from] FrontierError),
}

impl SolverError {
    /// The partial solution carried by a non-convergence error.
    pub fn partial(&self) -> Option<&Solution> {
        match self {
            SolverError::NotConverged(s) => Some(s),
            _ => None,
        }
    }
}

/// The part of the set that weakly dominates its own threat point.
pub fn trim(polygon: &ConvexPolygon) -> Result<ConvexPolygon, GeometryError> {
    let t = threat_point(&polygon.corner_points());
    polygon.clip_lower_left(t)
}

/// Iterates [`trim`] to a point.
///
/// At least one trim is applied. The loop stops when the set is a single
/// point, when its bounding box has diameter at most `tol`, or when a trim
/// leaves the set unchanged. The returned point is the centre of the final
/// bounding box.
pub fn solve_polygon(polygon: &ConvexPolygon, cfg: &SolverConfig) -> Result<Solution, SolverError> {
    run_trims(polygon, cfg, |_| {})
}

/// All sets visited by [`solve_polygon`], starting with the input.
pub fn trim_sequence(
    polygon: &ConvexPolygon,
    cfg: &SolverConfig,
) -> Result<Vec<ConvexPolygon>, SolverError> {
    let mut sets = vec![polygon.clone()];
    run_trims(polygon, cfg, |p| sets.push(p.clone()))?;
    Ok(sets)
}

fn run_trims<F: FnMut(&ConvexPolygon)>(
    polygon: &ConvexPolygon,
    cfg: &SolverConfig,
    mut visit: F,
) -> Result<Solution, SolverError> {
    cfg.validate()?;
    let mut trace = Vec::new();
    if cfg.record_trace {
        trace.push(TraceRecord::of_polygon(0, polygon));
    }

    let mut current = polygon.clone();
    let mut iterations = 0;
    let converged = loop {
        if iterations == cfg.max_iter {
            break false;
        }
        let next = trim(&current)?;
        iterations += 1;
        if next == current {
            break true;
        }
        visit(&next);
        if cfg.record_trace {
            trace.push(TraceRecord::of_polygon(iterations, &next));
        }
        current = next;
        if current.is_point() || current.bounding_box().diameter() <= cfg.tol {
            break true;
        }
    };

    let solution = Solution {
        point: current.bounding_box().centroid(),
        iterations,
        converged,
        trace,
    };
    if converged {
        Ok(solution)
    } else {
        Err(SolverError::NotConverged(Box::new(solution)))
    }
}

/// Runs the corner recurrences on a frontier.
///
/// Starting from `x = x_lo, y = f(x_lo), z = x_hi, w = f(x_hi)`:
///
/// ```text
/// x' = (x + z) / 2    y' = f(x')
/// w' = (y + w) / 2    z' = f⁻¹(w')
/// ```
///
/// until `max(z - x, y - w) <= tol`. The result is the centre of the final
/// bracket. Each update is clamped to the previous bracket, which only
/// removes rounding: in exact arithmetic concavity keeps
/// `x ≤ x' ≤ z' ≤ z` and `w ≤ w' ≤ y' ≤ y`.
pub fn solve_frontier(frontier: &Frontier, cfg: &SolverConfig) -> Result<Solution, SolverError> {
    cfg.validate()?;
    let (mut x, mut z) = (frontier.x_lo(), frontier.x_hi());
    let (mut y, mut w) = (frontier.y_top(), frontier.y_bottom());

    let mut trace = Vec::new();
    if cfg.record_trace {
        trace.push(TraceRecord::of_bracket(0, x, y, z, w));
    }

    let mut iterations = 0;
    let converged = loop {
        if (z - x).max(y - w) <= cfg.tol {
            break true;
        }
        if iterations == cfg.max_iter {
            break false;
        }
        let x_next = (0.5 * (x + z)).clamp(x, z);
        let w_next = (0.5 * (y + w)).clamp(w, y);
        let y_next = frontier.eval(x_next)?.clamp(w_next, y);
        let z_next = frontier.inverse(w_next)?.clamp(x_next, z);
        (x, y, z, w) = (x_next, y_next, z_next, w_next);
        iterations += 1;
        if cfg.record_trace {
            trace.push(TraceRecord::of_bracket(iterations, x, y, z, w));
        }
    };

    let solution = Solution {
        point: Point::new(0.5 * (x + z), 0.5 * (y + w)),
        iterations,
        converged,
        trace,
    };
    if converged {
        Ok(solution)
    } else {
        Err(SolverError::NotConverged(Box::new(solution)))
    }
}

/// Extracts the frontier of `polygon` and runs [`solve_frontier`] on it.
///
/// When both corners coincide there is nothing to iterate: the common
/// corner is returned after zero iterations.
pub fn solve_polygon_frontier(
    polygon: &ConvexPolygon,
    cfg: &SolverConfig,
) -> Result<Solution, SolverError> {
    cfg.validate()?;
    match polygon.pareto_frontier() {
        Ok(frontier) => solve_frontier(&frontier, cfg),
        Err(GeometryError::DegenerateFrontier { point }) => {
            let trace = if cfg.record_trace {
                vec![TraceRecord::of_bracket(
                    0, point.x, point.y, point.x, point.y,
                )]
            } else {
                Vec::new()
            };
            Ok(Solution {
                point,
                iterations: 0,
                converged: true,
                trace,
            })
        }
        Err(e) => Err(e.into()),
    }
}

/// Outcome of comparing the solution of a set with that of its trim.
#[derive(Clone, Debug, PartialEq)]
pub struct Prop1Report {
    pub whole: Point,
    pub trimmed: Point,
    /// Largest coordinate difference between the two solutions.
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Checks that trimming a set does not move its solution by more than
/// `10 * tol` in either coordinate.
pub fn verify_prop1(
    polygon: &ConvexPolygon,
    cfg: &SolverConfig,
) -> Result<Prop1Report, SolverError> {
    let whole = solve_polygon(polygon, cfg)?.point;
    let trimmed = solve_polygon(&trim(polygon)?, cfg)?.point;
    let deviation = whole.max_abs_diff(trimmed);
    let tolerance = 10.0 * cfg.tol;
    Ok(Prop1Report {
        whole,
        trimmed,
        deviation,
        tolerance,
        passed: deviation <= tolerance,
    })
}
