//! Convex bargaining sets in the utility plane.
//!
//! A bargaining set is stored as a counterclockwise vertex list. Sets with an
//! empty interior (a single point or a segment) are ordinary values here: the
//! trim step routinely produces them.

use std::ops::{Add, Mul, Sub};

use thiserror::Error;

use crate::frontier::{Frontier, FrontierError};

/// Relative tolerance on edge-pair cross products, scaled by `diameter²`.
pub const CONVEXITY_TOL: f64 = 1e-9;

/// Absolute tolerance used by membership tests on bargaining sets.
pub const CONTAINMENT_TOL: f64 = 1e-9;

/// Slack allowed when the clip corner sits on (or just outside) the set.
pub const CLIP_TOL: f64 = 1e-12;

/// A utility pair: `x` for player 1, `y` for player 2.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Componentwise order: `self.x <= other.x && self.y <= other.y`.
    pub fn dominated_by(self, other: Point) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    /// Largest absolute coordinate difference.
    pub fn max_abs_diff(self, other: Point) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point::new(x, y)
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

/// Axis-aligned closed box `[x_lo, x_hi] × [y_lo, y_hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundingBox {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl BoundingBox {
    /// Smallest box holding every point; `None` for an empty iterator.
    pub fn of_points<I: IntoIterator<Item = Point>>(points: I) -> Option<Self> {
        let mut iter = points.into_iter();
        let first = iter.next()?;
        let mut bb = BoundingBox {
            x_lo: first.x,
            x_hi: first.x,
            y_lo: first.y,
            y_hi: first.y,
        };
        for p in iter {
            bb.x_lo = bb.x_lo.min(p.x);
            bb.x_hi = bb.x_hi.max(p.x);
            bb.y_lo = bb.y_lo.min(p.y);
            bb.y_hi = bb.y_hi.max(p.y);
        }
        Some(bb)
    }

    pub fn width(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn height(&self) -> f64 {
        self.y_hi - self.y_lo
    }

    /// Length of the diagonal.
    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn centroid(&self) -> Point {
        Point::new(0.5 * (self.x_lo + self.x_hi), 0.5 * (self.y_lo + self.y_hi))
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        p.x >= self.x_lo - tol
            && p.x <= self.x_hi + tol
            && p.y >= self.y_lo - tol
            && p.y <= self.y_hi + tol
    }

    /// The upper-right box of the four congruent boxes this one splits into.
    pub fn upper_right_quarter(&self) -> BoundingBox {
        let c = self.centroid();
        BoundingBox {
            x_lo: c.x,
            x_hi: self.x_hi,
            y_lo: c.y,
            y_hi: self.y_hi,
        }
    }

    pub fn contains_box(&self, other: &BoundingBox, tol: f64) -> bool {
        other.x_lo >= self.x_lo - tol
            && other.x_hi <= self.x_hi + tol
            && other.y_lo >= self.y_lo - tol
            && other.y_hi <= self.y_hi + tol
    }

    fn max_abs_coordinate(&self) -> f64 {
        self.x_lo
            .abs()
            .max(self.x_hi.abs())
            .max(self.y_lo.abs())
            .max(self.y_hi.abs())
    }
}

/// The two outcomes of the threat lottery.
///
/// `right` is what player 1 picks when chosen (largest `x`, then largest `y`);
/// `top` is what player 2 picks (largest `y`, then largest `x`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CornerPair {
    pub right: Point,
    pub top: Point,
}

impl CornerPair {
    /// Both players would pick the same point.
    pub fn is_degenerate(&self) -> bool {
        self.right == self.top
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("vertex list is empty")]
    EmptyInput,
    #[error("vertex {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("vertex list is not convex at vertex {index}")]
    NotConvex { index: usize },
    #[error("no point of the set dominates ({}, {})", corner.x, corner.y)]
    EmptyIntersection { corner: Point },
    #[error("frontier collapses to the single point ({}, {})", point.x, point.y)]
    DegenerateFrontier { point: Point },
    #[error("frontier extraction failed: {0}")]
    Frontier(#[from] FrontierError),
}

/// A closed bounded convex set given by its vertices in counterclockwise order.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Validates and canonicalizes a vertex list.
    ///
    /// Consecutive duplicates (cyclically) are dropped and clockwise input is
    /// reversed. Collinear vertices are kept. A fully collinear list becomes
    /// the segment between its two farthest vertices.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.is_empty() {
            return Err(GeometryError::EmptyInput);
        }
        if let Some(index) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite { index });
        }

        let mut pts = vertices;
        pts.dedup();
        while pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        if pts.len() == 1 {
            return Ok(ConvexPolygon { vertices: pts });
        }

        let (ia, ib, diam) = farthest_pair(&pts);
        let tol = CONVEXITY_TOL * diam * diam;
        let (a, b) = (pts[ia], pts[ib]);
        if pts.iter().all(|&p| (b - a).cross(p - a).abs() <= tol) {
            let (first, second) = if ia < ib { (a, b) } else { (b, a) };
            return Ok(ConvexPolygon {
                vertices: vec![first, second],
            });
        }

        if signed_area2(&pts) < 0.0 {
            pts.reverse();
        }

        let n = pts.len();
        let mut turning = 0.0;
        for i in 0..n {
            let prev = pts[(i + n - 1) % n];
            let cur = pts[i];
            let next = pts[(i + 1) % n];
            let e1 = cur - prev;
            let e2 = next - cur;
            let c = e1.cross(e2);
            let d = e1.dot(e2);
            if c < -tol || (c.abs() <= tol && d < 0.0) {
                return Err(GeometryError::NotConvex { index: i });
            }
            turning += c.atan2(d);
        }
        // a star polygon turns left everywhere but winds more than once
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(GeometryError::NotConvex { index: 0 });
        }

        Ok(ConvexPolygon { vertices: pts })
    }

    /// Convex hull of an arbitrary finite point set (monotone chain).
    ///
    /// Collinear boundary points are dropped. Non-finite points are rejected.
    pub fn hull(points: &[Point]) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::EmptyInput);
        }
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite { index });
        }
        Ok(ConvexPolygon {
            vertices: monotone_chain(points),
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Always false: a polygon has at least one vertex.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    pub fn bounding_box(&self) -> BoundingBox {
        BoundingBox::of_points(self.vertices.iter().copied())
            .expect("polygon has at least one vertex")
    }

    /// Largest distance between two vertices, which for a convex set is the
    /// set diameter.
    pub fn diameter(&self) -> f64 {
        farthest_pair(&self.vertices).2
    }

    /// The threat outcomes under the tie rule: a chosen player never picks a
    /// point when another gives them the same utility and the opponent more.
    pub fn corner_points(&self) -> CornerPair {
        let mut right = self.vertices[0];
        let mut top = self.vertices[0];
        for &p in &self.vertices[1..] {
            if p.x > right.x || (p.x == right.x && p.y > right.y) {
                right = p;
            }
            if p.y > top.y || (p.y == top.y && p.x > top.x) {
                top = p;
            }
        }
        CornerPair { right, top }
    }

    /// The part of the set in the quadrant `[corner.x, ∞) × [corner.y, ∞)`.
    ///
    /// When the corner lies outside the set by no more than [`CLIP_TOL`]
    /// (relative to the set size), the result is the corner itself.
    pub fn clip_lower_left(&self, corner: Point) -> Result<ConvexPolygon, GeometryError> {
        let clipped = clip_quadrant(&self.vertices, corner);
        if !clipped.is_empty() {
            return Ok(ConvexPolygon {
                vertices: snap(monotone_chain(&clipped)),
            });
        }

        let bb = self.bounding_box();
        let eps = CLIP_TOL * (1.0 + bb.max_abs_coordinate().max(bb.diameter()));
        let relaxed = clip_quadrant(&self.vertices, Point::new(corner.x - eps, corner.y - eps));
        if relaxed.is_empty() {
            return Err(GeometryError::EmptyIntersection { corner });
        }
        Ok(ConvexPolygon {
            vertices: vec![corner],
        })
    }

    /// Euclidean distance from `q` to the set (zero inside).
    pub fn distance_to(&self, q: Point) -> f64 {
        match self.vertices.len() {
            1 => q.distance(self.vertices[0]),
            2 => segment_distance(q, self.vertices[0], self.vertices[1]),
            _ => {
                let inside = self.edges().all(|(a, b)| (b - a).cross(q - a) >= 0.0);
                if inside {
                    0.0
                } else {
                    self.boundary_distance(q)
                }
            }
        }
    }

    pub fn contains(&self, q: Point, tol: f64) -> bool {
        self.distance_to(q) <= tol
    }

    /// Euclidean distance from `q` to the boundary curve of the set.
    pub fn boundary_distance(&self, q: Point) -> f64 {
        if self.vertices.len() == 1 {
            return q.distance(self.vertices[0]);
        }
        self.edges()
            .map(|(a, b)| segment_distance(q, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Every vertex of `other` lies in `self` within `tol`.
    pub fn contains_polygon(&self, other: &ConvexPolygon, tol: f64) -> bool {
        other.vertices.iter().all(|&v| self.contains(v, tol))
    }

    /// The boundary arc from the top corner to the right corner, as a
    /// strictly decreasing concave polyline.
    pub fn pareto_frontier(&self) -> Result<Frontier, GeometryError> {
        let corners = self.corner_points();
        if corners.is_degenerate() {
            return Err(GeometryError::DegenerateFrontier {
                point: corners.right,
            });
        }
        let n = self.vertices.len();
        let find = |p: Point| self.vertices.iter().position(|&v| v == p).unwrap();
        let (ir, it) = (find(corners.right), find(corners.top));

        let mut chain = vec![self.vertices[ir]];
        let mut k = ir;
        while k != it {
            k = (k + 1) % n;
            chain.push(self.vertices[k]);
        }
        chain.reverse();
        Ok(Frontier::polyline(chain)?)
    }

    /// Applies `g` to every vertex and revalidates.
    pub fn map<F: Fn(Point) -> Point>(&self, g: F) -> Result<ConvexPolygon, GeometryError> {
        ConvexPolygon::new(self.vertices.iter().map(|&p| g(p)).collect())
    }

    fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }
}

/// Twice the signed area (positive for counterclockwise order).
fn signed_area2(pts: &[Point]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| pts[i].cross(pts[(i + 1) % n])).sum()
}

fn farthest_pair(pts: &[Point]) -> (usize, usize, f64) {
    let mut best = (0, 0, 0.0);
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = pts[i].distance(pts[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    best
}

fn segment_distance(q: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return q.distance(a);
    }
    let t = ((q - a).dot(ab) / len2).clamp(0.0, 1.0);
    q.distance(a + ab * t)
}

fn monotone_chain(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }

    let turn = |o: Point, a: Point, b: Point| (a - o).cross(b - o);
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Collapses a vertex list whose extent is at rounding level to one point.
fn snap(vertices: Vec<Point>) -> Vec<Point> {
    if vertices.len() < 2 {
        return vertices;
    }
    let bb = BoundingBox::of_points(vertices.iter().copied()).unwrap();
    let noise = 16.0 * f64::EPSILON * (1.0 + bb.max_abs_coordinate());
    if bb.width() <= noise && bb.height() <= noise {
        vec![vertices[0]]
    } else {
        vertices
    }
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
}

/// Sutherland–Hodgman against `x >= corner.x`, then `y >= corner.y`.
fn clip_quadrant(vertices: &[Point], corner: Point) -> Vec<Point> {
    let first = clip_half_plane(vertices, Axis::X, corner.x);
    clip_half_plane(&first, Axis::Y, corner.y)
}

fn clip_half_plane(vertices: &[Point], axis: Axis, bound: f64) -> Vec<Point> {
    let coord = |p: Point| match axis {
        Axis::X => p.x,
        Axis::Y => p.y,
    };
    let n = vertices.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let a_in = coord(a) >= bound;
        let b_in = coord(b) >= bound;
        if a_in {
            out.push(a);
        }
        if a_in != b_in {
            out.push(crossing(a, b, axis, bound));
        }
    }
    out
}

/// Point of segment `ab` on the line `axis = bound`, placed exactly on it.
fn crossing(a: Point, b: Point, axis: Axis, bound: f64) -> Point {
    match axis {
        Axis::X => {
            let t = (bound - a.x) / (b.x - a.x);
            let y = (a.y + t * (b.y - a.y)).clamp(a.y.min(b.y), a.y.max(b.y));
            Point::new(bound, y)
        }
        Axis::Y => {
            let t = (bound - a.y) / (b.y - a.y);
            let x = (a.x + t * (b.x - a.x)).clamp(a.x.min(b.x), a.x.max(b.x));
            Point::new(x, bound)
        }
    }
}
