//! Brute-force reference solution on a lattice sample of the set.
//!
//! The oracle never calls the clipping, corner or trim code in
//! [`geometry`](crate::geometry) and [`solver`](crate::solver). It only needs
//! to know which vertical slice of the set lies over a given `x`.

use thiserror::Error;

use crate::frontier::Frontier;
use crate::geometry::{BoundingBox, ConvexPolygon, Point};

/// Upper bound on lattice points per cloud.
pub const MAX_CLOUD_POINTS: usize = 20_000_000;

/// Offset, relative to the cloud's coordinate scale, by which the threat
/// filter is relaxed so a lattice point exactly at the threat coordinate
/// survives midpoint rounding.
pub const FILTER_SLACK: f64 = 1e-12;

// lattice index rounding
const INDEX_FUZZ: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("resolution {0} must be positive and finite")]
    BadResolution(f64),
    #[error("resolution {resolution} would need about {estimate} lattice points")]
    TooManyPoints { resolution: f64, estimate: f64 },
    #[error("no lattice point falls inside the set")]
    EmptyCloud,
}

/// A set that can be sampled column by column.
pub trait Region {
    fn extent(&self) -> BoundingBox;
    /// The closed interval of `y` values over `x`, if the slice is nonempty.
    fn column(&self, x: f64) -> Option<(f64, f64)>;
    /// Extra boundary points so extreme points are never lost to the grid.
    fn anchors(&self, resolution: f64) -> Vec<Point>;
}

impl Region for ConvexPolygon {
    fn extent(&self) -> BoundingBox {
        BoundingBox::of_points(self.vertices().iter().copied()).unwrap()
    }

    fn column(&self, x: f64) -> Option<(f64, f64)> {
        let v = self.vertices();
        let n = v.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let (a, b) = (v[i], v[(i + 1) % n]);
            if x < a.x.min(b.x) || x > a.x.max(b.x) {
                continue;
            }
            let ys = if a.x == b.x {
                [a.y, b.y]
            } else {
                let y = a.y + (x - a.x) / (b.x - a.x) * (b.y - a.y);
                [y, y]
            };
            for y in ys {
                lo = lo.min(y);
                hi = hi.max(y);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// The vertices and every crossing of an edge with a lattice line, so
    /// each lattice column and row carries its exact end points.
    fn anchors(&self, resolution: f64) -> Vec<Point> {
        let v = self.vertices();
        let mut pts = v.to_vec();
        for (i, &a) in v.iter().enumerate() {
            let b = v[(i + 1) % v.len()];
            pts.extend(
                lattice_between(a.x, b.x, resolution)
                    .map(|x| Point::new(x, a.y + (x - a.x) / (b.x - a.x) * (b.y - a.y))),
            );
            pts.extend(
                lattice_between(a.y, b.y, resolution)
                    .map(|y| Point::new(a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x), y)),
            );
        }
        pts
    }
}

/// Lattice coordinates strictly between `a` and `b`.
fn lattice_between(a: f64, b: f64, resolution: f64) -> impl Iterator<Item = f64> {
    let (lo, hi) = (a.min(b), a.max(b));
    let first = (lo / resolution).floor() as i64 + 1;
    let last = (hi / resolution).ceil() as i64 - 1;
    (first..=last)
        .map(move |k| k as f64 * resolution)
        .filter(move |&t| t > lo && t < hi)
}

/// The region under the arc and above `y = f(x_hi)`.
impl Region for Frontier {
    fn extent(&self) -> BoundingBox {
        BoundingBox {
            x_lo: self.x_lo(),
            x_hi: self.x_hi(),
            y_lo: self.y_bottom(),
            y_hi: self.y_top(),
        }
    }

    fn column(&self, x: f64) -> Option<(f64, f64)> {
        if x < self.x_lo() || x > self.x_hi() {
            return None;
        }
        Some((self.y_bottom(), self.eval_clamped(x)))
    }

    /// Arc points every `resolution` in `x` and every `resolution` in `y`,
    /// so steep and flat stretches are both covered.
    fn anchors(&self, resolution: f64) -> Vec<Point> {
        let steps = (self.width() / resolution).ceil().max(1.0) as usize;
        let mut pts: Vec<Point> = (0..=steps)
            .map(|i| {
                let x = self.x_lo() + self.width() * i as f64 / steps as f64;
                Point::new(x, self.eval_clamped(x))
            })
            .collect();
        let steps = (self.height() / resolution).ceil().max(1.0) as usize;
        pts.extend((1..steps).filter_map(|j| {
            let y = self.y_bottom() + self.height() * j as f64 / steps as f64;
            let x = self.inverse(y).ok()?;
            Some(Point::new(x, self.eval_clamped(x).max(y)))
        }));
        if let crate::frontier::FrontierShape::Polyline(vertices) = self.shape() {
            pts.extend_from_slice(vertices);
        }
        pts.push(Point::new(self.x_lo(), self.y_bottom()));
        pts
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Point>,
    pub resolution: f64,
}

/// All lattice points `(i·res, j·res)` inside `source`, plus its anchors,
/// without duplicates.
pub fn discretize<R: Region + ?Sized>(
    source: &R,
    resolution: f64,
) -> Result<PointCloud, OracleError> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(OracleError::BadResolution(resolution));
    }
    let bb = source.extent();
    let estimate = (bb.width() / resolution + 2.0) * (bb.height() / resolution + 2.0);
    if estimate > MAX_CLOUD_POINTS as f64 {
        return Err(OracleError::TooManyPoints {
            resolution,
            estimate,
        });
    }

    let mut points = Vec::new();
    let i_lo = (bb.x_lo / resolution - INDEX_FUZZ).ceil() as i64;
    let i_hi = (bb.x_hi / resolution + INDEX_FUZZ).floor() as i64;
    for i in i_lo..=i_hi {
        let x = i as f64 * resolution;
        let Some((lo, hi)) = source.column(x.clamp(bb.x_lo, bb.x_hi)) else {
            continue;
        };
        let j_lo = (lo / resolution - INDEX_FUZZ).ceil() as i64;
        let j_hi = (hi / resolution + INDEX_FUZZ).floor() as i64;
        points.extend((j_lo..=j_hi).map(|j| Point::new(x, j as f64 * resolution)));
    }
    points.extend(source.anchors(resolution));

    points.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    points.dedup();
    if points.is_empty() {
        return Err(OracleError::EmptyCloud);
    }
    Ok(PointCloud { points, resolution })
}

/// Why the threat filter stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CloudStop {
    /// Every survivor already dominates the threat point.
    Stalled,
    /// No survivor dominates the threat point.
    WouldEmpty,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CloudSolution {
    pub point: Point,
    /// Filtering passes, including the final one that changed nothing.
    pub passes: usize,
    pub survivors: usize,
    pub stop: CloudStop,
}

/// Runs the threat filter on the cloud until it stalls or would empty it.
///
/// A stalled filter returns the mean of the survivors. A filter that would
/// empty the set returns the threat point it failed on: the true trim at
/// that stage holds no sample, so the solution lies within about a grid
/// cell of that point, while the survivors can still span many cells.
pub fn solve_cloud(cloud: &PointCloud) -> CloudSolution {
    let mut current = cloud.points.clone();
    let mut passes = 0;
    loop {
        passes += 1;
        let threat = threat_of(&current);
        match filter(&current, threat) {
            Filtered::Kept(next) => current = next,
            Filtered::Unchanged => {
                return CloudSolution {
                    point: mean(&current),
                    passes,
                    survivors: current.len(),
                    stop: CloudStop::Stalled,
                }
            }
            Filtered::Empty => {
                return CloudSolution {
                    point: threat,
                    passes,
                    survivors: current.len(),
                    stop: CloudStop::WouldEmpty,
                }
            }
        }
    }
}

/// The survivors after every pass, starting with the full cloud.
pub fn filter_history(cloud: &PointCloud) -> Vec<Vec<Point>> {
    let mut history = vec![cloud.points.clone()];
    loop {
        let current = history.last().unwrap();
        match filter(current, threat_of(current)) {
            Filtered::Kept(next) => history.push(next),
            _ => return history,
        }
    }
}

enum Filtered {
    Kept(Vec<Point>),
    Unchanged,
    Empty,
}

/// Midpoint of the extreme points under the corner tie rule.
fn threat_of(points: &[Point]) -> Point {
    let mut right = points[0];
    let mut top = points[0];
    for &p in points {
        if p.x > right.x || (p.x == right.x && p.y > right.y) {
            right = p;
        }
        if p.y > top.y || (p.y == top.y && p.x > top.x) {
            top = p;
        }
    }
    right.midpoint(top)
}

/// The points weakly above `threat`.
fn filter(points: &[Point], threat: Point) -> Filtered {
    let scale = points
        .iter()
        .fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()));
    let slack = FILTER_SLACK * (1.0 + scale);
    let kept: Vec<Point> = points
        .iter()
        .copied()
        .filter(|p| p.x >= threat.x - slack && p.y >= threat.y - slack)
        .collect();
    if kept.is_empty() {
        Filtered::Empty
    } else if kept.len() == points.len() {
        Filtered::Unchanged
    } else {
        Filtered::Kept(kept)
    }
}

fn mean(points: &[Point]) -> Point {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    Point::new(sx / n, sy / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[(f64, f64)]) -> ConvexPolygon {
        ConvexPolygon::new(pts.iter().map(|&p| p.into()).collect()).unwrap()
    }

    fn unit_square() -> ConvexPolygon {
        poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    }

    fn unit_triangle() -> ConvexPolygon {
        poly(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
    }

    #[test]
    fn square_lattice() {
        let cloud = discretize(&unit_square(), 0.5).unwrap();
        assert_eq!(cloud.points.len(), 9);
    }

    #[test]
    fn triangle_lattice() {
        let cloud = discretize(&unit_triangle(), 0.5).unwrap();
        let expected = [
            (0.0, 0.0),
            (0.0, 0.5),
            (0.0, 1.0),
            (0.5, 0.0),
            (0.5, 0.5),
            (1.0, 0.0),
        ];
        let expected: Vec<Point> = expected.iter().map(|&p| p.into()).collect();
        assert_eq!(cloud.points, expected);
    }

    #[test]
    fn single_point_cloud() {
        let cloud = discretize(&poly(&[(0.3, 0.7)]), 0.5).unwrap();
        assert_eq!(cloud.points, vec![Point::new(0.3, 0.7)]);
        assert_eq!(solve_cloud(&cloud).point, Point::new(0.3, 0.7));
    }

    #[test]
    fn bad_resolutions() {
        assert!(matches!(
            discretize(&unit_square(), 0.0),
            Err(OracleError::BadResolution(_))
        ));
        assert!(matches!(
            discretize(&unit_square(), 1e-5),
            Err(OracleError::TooManyPoints { .. })
        ));
    }

    #[test]
    fn square_solves_to_dominant_corner() {
        let cloud = discretize(&unit_square(), 0.5).unwrap();
        assert_eq!(solve_cloud(&cloud).point, Point::new(1.0, 1.0));
    }

    #[test]
    fn triangle_solves_near_midpoint() {
        let cloud = discretize(&unit_triangle(), 0.25).unwrap();
        let c = solve_cloud(&cloud).point;
        assert!(c.max_abs_diff(Point::new(0.5, 0.5)) <= 0.25, "{c:?}");
    }

    #[test]
    fn frontier_region_cloud() {
        let f = Frontier::linear(0.0, 1.0, 1.0, 0.0).unwrap();
        let cloud = discretize(&f, 0.5).unwrap();
        assert_eq!(cloud.points.len(), 6);
        for p in &cloud.points {
            assert!(p.x + p.y <= 1.0 + 1e-12 && p.x >= 0.0 && p.y >= 0.0);
        }
    }

    #[test]
    fn edge_anchors_sit_on_lattice_lines() {
        let tri = poly(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let anchors = tri.anchors(0.25);
        assert!(anchors.contains(&Point::new(0.25, 0.75)));
        assert!(anchors.contains(&Point::new(0.75, 0.25)));
        assert_eq!(anchors.len(), 3 + 2 * 3 + 2 * 3);
    }

    #[test]
    fn emptying_pass_returns_its_threat() {
        // the trim collapses to (7/6, 1.25), which no lattice point reaches
        let tri = poly(&[(1.0, 1.0), (4.0 / 3.0, 1.0), (1.0, 1.5)]);
        let s = solve_cloud(&discretize(&tri, 0.03).unwrap());
        assert_eq!(s.stop, CloudStop::WouldEmpty);
        assert!(
            s.point.max_abs_diff(Point::new(7.0 / 6.0, 1.25)) <= 0.03,
            "{s:?}"
        );
    }

    #[test]
    fn stalled_filter_averages() {
        let cloud = discretize(&unit_square(), 0.5).unwrap();
        let s = solve_cloud(&cloud);
        assert_eq!((s.stop, s.survivors), (CloudStop::Stalled, 1));
    }

    #[test]
    fn passes_shrink() {
        let f = Frontier::power(2.0, 0.0, 1.0, 1.0, 0.0).unwrap();
        let cloud = discretize(&f, 0.01).unwrap();
        let history = filter_history(&cloud);
        for pair in history.windows(2) {
            assert!(pair[1].len() < pair[0].len());
            assert!(pair[1].iter().all(|p| pair[0].contains(p)));
        }
        assert_eq!(solve_cloud(&cloud).passes, history.len());
    }
}
