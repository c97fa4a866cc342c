//! The upper-right boundary of a bargaining set as a function `f` of player
//! 1's utility.
//!
//! The domain runs from `x_lo` (under the top corner, where `f = y_top`) to
//! `x_hi` (under the right corner, where `f = y_bottom`). Every frontier is
//! strictly decreasing and concave, so `f` has a single-valued inverse.

use thiserror::Error;

use crate::geometry::{ConvexPolygon, CornerPair, GeometryError, Point};

/// Samples used by the construction-time monotonicity and concavity checks.
pub const VALIDATION_SAMPLES: usize = 1001;
/// Relative slack on sampled second differences.
pub const CONCAVITY_TOL: f64 = 1e-9;
/// Relative slack for arguments just outside the domain or range.
pub const CLAMP_TOL: f64 = 1e-12;
/// Bisection stops once the bracket is this fraction of the domain width.
pub const BISECTION_REL_WIDTH: f64 = 1e-13;
pub const BISECTION_MAX_ITER: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrontierError {
    #[error("frontier is not strictly decreasing near x = {at}")]
    NotDecreasing { at: f64 },
    #[error("frontier is not concave near x = {at}")]
    NotConcave { at: f64 },
    #[error("empty or reversed domain [{x_lo}, {x_hi}]")]
    BadDomain { x_lo: f64, x_hi: f64 },
    #[error("bad frontier parameter: {0}")]
    BadParameter(String),
    #[error("{t} is outside the frontier domain")]
    OutOfDomain { t: f64 },
    #[error("{v} is outside the frontier range")]
    OutOfRange { v: f64 },
}

/// Description of a frontier before validation.
#[derive(Clone, Debug, PartialEq)]
pub enum FrontierShape {
    /// Straight line from `(x_lo, y_top)` to `(x_hi, y_bottom)`.
    Linear {
        x_lo: f64,
        x_hi: f64,
        y_top: f64,
        y_bottom: f64,
    },
    /// Upper arc `y = center.y + sqrt(radius² - (x - center.x)²)`.
    Circle {
        center: Point,
        radius: f64,
        x_lo: f64,
        x_hi: f64,
    },
    /// `y = y_top - (y_top - y_bottom) * s^exponent` with `s` the position
    /// of `x` in the domain scaled to `[0, 1]`.
    Power {
        exponent: f64,
        x_lo: f64,
        x_hi: f64,
        y_top: f64,
        y_bottom: f64,
    },
    /// Vertices ordered by increasing `x`.
    Polyline(Vec<Point>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Frontier {
    shape: FrontierShape,
    x_lo: f64,
    x_hi: f64,
    y_top: f64,
    y_bottom: f64,
}

impl Frontier {
    /// Validates `shape`. Polylines are canonicalized first: repeated points
    /// are merged, a flat run at the top keeps only its rightmost point and a
    /// vertical run at the right keeps only its highest point.
    pub fn new(shape: FrontierShape) -> Result<Self, FrontierError> {
        let shape = match shape {
            FrontierShape::Polyline(points) => FrontierShape::Polyline(canonical_polyline(points)?),
            other => {
                check_parameters(&other)?;
                other
            }
        };
        let (x_lo, x_hi) = match &shape {
            FrontierShape::Linear { x_lo, x_hi, .. }
            | FrontierShape::Circle { x_lo, x_hi, .. }
            | FrontierShape::Power { x_lo, x_hi, .. } => (*x_lo, *x_hi),
            FrontierShape::Polyline(pts) => (pts[0].x, pts[pts.len() - 1].x),
        };
        let mut frontier = Frontier {
            shape,
            x_lo,
            x_hi,
            y_top: 0.0,
            y_bottom: 0.0,
        };
        frontier.y_top = frontier.eval_clamped(x_lo);
        frontier.y_bottom = frontier.eval_clamped(x_hi);

        match &frontier.shape {
            FrontierShape::Polyline(pts) => check_polyline_concave(pts)?,
            _ => frontier.check_samples()?,
        }
        Ok(frontier)
    }

    pub fn linear(x_lo: f64, x_hi: f64, y_top: f64, y_bottom: f64) -> Result<Self, FrontierError> {
        Frontier::new(FrontierShape::Linear {
            x_lo,
            x_hi,
            y_top,
            y_bottom,
        })
    }

    pub fn circle(center: Point, radius: f64, x_lo: f64, x_hi: f64) -> Result<Self, FrontierError> {
        Frontier::new(FrontierShape::Circle {
            center,
            radius,
            x_lo,
            x_hi,
        })
    }

    pub fn power(
        exponent: f64,
        x_lo: f64,
        x_hi: f64,
        y_top: f64,
        y_bottom: f64,
    ) -> Result<Self, FrontierError> {
        Frontier::new(FrontierShape::Power {
            exponent,
            x_lo,
            x_hi,
            y_top,
            y_bottom,
        })
    }

    pub fn polyline(points: Vec<Point>) -> Result<Self, FrontierError> {
        Frontier::new(FrontierShape::Polyline(points))
    }

    /// The validated (and for polylines, canonicalized) shape.
    pub fn shape(&self) -> &FrontierShape {
        &self.shape
    }

    pub fn x_lo(&self) -> f64 {
        self.x_lo
    }

    pub fn x_hi(&self) -> f64 {
        self.x_hi
    }

    /// `f(x_lo)`, the largest utility player 2 can get.
    pub fn y_top(&self) -> f64 {
        self.y_top
    }

    /// `f(x_hi)`, player 2's utility at the right corner.
    pub fn y_bottom(&self) -> f64 {
        self.y_bottom
    }

    pub fn width(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn height(&self) -> f64 {
        self.y_top - self.y_bottom
    }

    /// The endpoints of the arc as threat outcomes.
    pub fn corners(&self) -> CornerPair {
        CornerPair {
            right: Point::new(self.x_hi, self.y_bottom),
            top: Point::new(self.x_lo, self.y_top),
        }
    }

    /// `f(t)`, clamping `t` onto the domain when it is within rounding of it.
    pub fn eval(&self, t: f64) -> Result<f64, FrontierError> {
        let slack = CLAMP_TOL * self.width();
        if !(t >= self.x_lo - slack && t <= self.x_hi + slack) {
            return Err(FrontierError::OutOfDomain { t });
        }
        Ok(self.eval_clamped(t))
    }

    /// `f⁻¹(v)`, closed form for analytic shapes and segment lookup for
    /// polylines.
    pub fn inverse(&self, v: f64) -> Result<f64, FrontierError> {
        let v = self.clamp_range(v)?;
        let t = match &self.shape {
            FrontierShape::Linear {
                x_lo,
                x_hi,
                y_top,
                y_bottom,
            } => x_lo + (y_top - v) / (y_top - y_bottom) * (x_hi - x_lo),
            FrontierShape::Circle { center, radius, .. } => {
                let dy = v - center.y;
                center.x + (radius * radius - dy * dy).max(0.0).sqrt()
            }
            FrontierShape::Power {
                exponent,
                x_lo,
                x_hi,
                y_top,
                y_bottom,
            } => {
                let s = ((y_top - v) / (y_top - y_bottom)).clamp(0.0, 1.0);
                x_lo + s.powf(exponent.recip()) * (x_hi - x_lo)
            }
            FrontierShape::Polyline(pts) => {
                // y is strictly decreasing along the vertices
                let k = pts.partition_point(|p| p.y > v).clamp(1, pts.len() - 1);
                let (a, b) = (pts[k - 1], pts[k]);
                a.x + (a.y - v) / (a.y - b.y) * (b.x - a.x)
            }
        };
        Ok(t.clamp(self.x_lo, self.x_hi))
    }

    /// `f⁻¹(v)` by bisection on the domain; the reference for [`inverse`].
    ///
    /// [`inverse`]: Frontier::inverse
    pub fn inverse_by_bisection(&self, v: f64) -> Result<f64, FrontierError> {
        let v = self.clamp_range(v)?;
        let (mut lo, mut hi) = (self.x_lo, self.x_hi);
        let stop = BISECTION_REL_WIDTH * self.width();
        for _ in 0..BISECTION_MAX_ITER {
            if hi - lo <= stop {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.eval_clamped(mid) > v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// A convex polygon whose upper-right chain has `arc_vertices` points on
    /// the arc, closed by the lower-left corner `(x_lo, y_bottom)`. Polylines
    /// use their own vertices.
    pub fn inscribe(&self, arc_vertices: usize) -> Result<ConvexPolygon, GeometryError> {
        let segments = arc_vertices.max(2) - 1;
        let mut vertices = vec![Point::new(self.x_lo, self.y_bottom)];
        match &self.shape {
            FrontierShape::Polyline(pts) => vertices.extend(pts.iter().rev()),
            FrontierShape::Circle { center, radius, .. } => {
                // equal angular steps keep chords short near the steep end
                let angle = |x: f64| ((x - center.x) / radius).clamp(-1.0, 1.0).acos();
                let (a_hi, a_lo) = (angle(self.x_hi), angle(self.x_lo));
                vertices.push(Point::new(self.x_hi, self.y_bottom));
                for k in 1..segments {
                    let a = a_hi + (a_lo - a_hi) * k as f64 / segments as f64;
                    let x = (center.x + radius * a.cos()).clamp(self.x_lo, self.x_hi);
                    vertices.push(Point::new(x, self.eval_clamped(x)));
                }
                vertices.push(Point::new(self.x_lo, self.y_top));
            }
            _ => {
                for k in (0..=segments).rev() {
                    let x = self.x_lo + self.width() * k as f64 / segments as f64;
                    vertices.push(Point::new(x, self.eval_clamped(x)));
                }
            }
        }
        ConvexPolygon::new(vertices)
    }

    pub(crate) fn eval_clamped(&self, t: f64) -> f64 {
        let t = t.clamp(self.x_lo, self.x_hi);
        match &self.shape {
            FrontierShape::Linear {
                x_lo,
                x_hi,
                y_top,
                y_bottom,
            } => y_top + (y_bottom - y_top) * ((t - x_lo) / (x_hi - x_lo)),
            FrontierShape::Circle { center, radius, .. } => {
                let dx = t - center.x;
                center.y + (radius * radius - dx * dx).max(0.0).sqrt()
            }
            FrontierShape::Power {
                exponent,
                x_lo,
                x_hi,
                y_top,
                y_bottom,
            } => {
                let s = (t - x_lo) / (x_hi - x_lo);
                y_top - (y_top - y_bottom) * s.powf(*exponent)
            }
            FrontierShape::Polyline(pts) => {
                let k = pts.partition_point(|p| p.x <= t).clamp(1, pts.len() - 1);
                let (a, b) = (pts[k - 1], pts[k]);
                if t == b.x {
                    b.y
                } else {
                    a.y + (t - a.x) / (b.x - a.x) * (b.y - a.y)
                }
            }
        }
    }

    fn clamp_range(&self, v: f64) -> Result<f64, FrontierError> {
        let slack = CLAMP_TOL * self.height();
        if !(v >= self.y_bottom - slack && v <= self.y_top + slack) {
            return Err(FrontierError::OutOfRange { v });
        }
        Ok(v.clamp(self.y_bottom, self.y_top))
    }

    fn check_samples(&self) -> Result<(), FrontierError> {
        let n = VALIDATION_SAMPLES;
        let xs: Vec<f64> = (0..n)
            .map(|i| self.x_lo + self.width() * i as f64 / (n - 1) as f64)
            .collect();
        let ys: Vec<f64> = xs.iter().map(|&x| self.eval_clamped(x)).collect();
        // the parameter checks already imply strict decrease; samples may tie
        // where the curve is flatter than the spacing of doubles
        for i in 1..n {
            if ys[i] > ys[i - 1] || ys[i].is_nan() {
                return Err(FrontierError::NotDecreasing { at: xs[i] });
            }
        }
        if ys[n - 1] >= ys[0] || ys[0].is_nan() || ys[n - 1].is_nan() {
            return Err(FrontierError::NotDecreasing { at: self.x_lo });
        }
        let slack = CONCAVITY_TOL * self.height().abs();
        for i in 1..n - 1 {
            if ys[i - 1] - 2.0 * ys[i] + ys[i + 1] > slack {
                return Err(FrontierError::NotConcave { at: xs[i] });
            }
        }
        Ok(())
    }
}

fn check_parameters(shape: &FrontierShape) -> Result<(), FrontierError> {
    let finite = |vals: &[f64]| vals.iter().all(|v| v.is_finite());
    let domain = |x_lo: f64, x_hi: f64| {
        if x_lo < x_hi {
            Ok(())
        } else {
            Err(FrontierError::BadDomain { x_lo, x_hi })
        }
    };
    let bad = |msg: String| Err(FrontierError::BadParameter(msg));
    match *shape {
        FrontierShape::Linear {
            x_lo,
            x_hi,
            y_top,
            y_bottom,
        } => {
            if !finite(&[x_lo, x_hi, y_top, y_bottom]) {
                return bad("non-finite linear parameter".into());
            }
            domain(x_lo, x_hi)?;
            if y_top <= y_bottom {
                return Err(FrontierError::NotDecreasing { at: x_lo });
            }
        }
        FrontierShape::Circle {
            center,
            radius,
            x_lo,
            x_hi,
        } => {
            if !finite(&[center.x, center.y, radius, x_lo, x_hi]) {
                return bad("non-finite circle parameter".into());
            }
            if radius <= 0.0 {
                return bad(format!("circle radius {radius} must be positive"));
            }
            domain(x_lo, x_hi)?;
            if x_lo < center.x || x_hi > center.x + radius {
                return bad(format!(
                    "circle domain [{x_lo}, {x_hi}] leaves [{}, {}]",
                    center.x,
                    center.x + radius
                ));
            }
        }
        FrontierShape::Power {
            exponent,
            x_lo,
            x_hi,
            y_top,
            y_bottom,
        } => {
            if !finite(&[exponent, x_lo, x_hi, y_top, y_bottom]) {
                return bad("non-finite power parameter".into());
            }
            if exponent < 1.0 {
                return bad(format!("power exponent {exponent} is below 1"));
            }
            domain(x_lo, x_hi)?;
            if y_top <= y_bottom {
                return Err(FrontierError::NotDecreasing { at: x_lo });
            }
        }
        FrontierShape::Polyline(_) => {}
    }
    Ok(())
}

fn canonical_polyline(mut pts: Vec<Point>) -> Result<Vec<Point>, FrontierError> {
    if pts.iter().any(|p| !p.is_finite()) {
        return Err(FrontierError::BadParameter(
            "non-finite polyline vertex".into(),
        ));
    }
    pts.dedup();
    let leading_flat = pts.windows(2).take_while(|w| w[1].y == w[0].y).count();
    pts.drain(..leading_flat);
    while pts.len() >= 2 && pts[pts.len() - 2].x == pts[pts.len() - 1].x {
        pts.pop();
    }
    match pts.as_slice() {
        [] => {
            return Err(FrontierError::BadDomain {
                x_lo: f64::NAN,
                x_hi: f64::NAN,
            })
        }
        [p] => {
            return Err(FrontierError::BadDomain {
                x_lo: p.x,
                x_hi: p.x,
            })
        }
        _ => {}
    }
    for w in pts.windows(2) {
        if !(w[1].x > w[0].x && w[1].y < w[0].y) {
            return Err(FrontierError::NotDecreasing { at: w[1].x });
        }
    }
    Ok(pts)
}

fn check_polyline_concave(pts: &[Point]) -> Result<(), FrontierError> {
    let first = pts[0];
    let last = pts[pts.len() - 1];
    let scale = (last.x - first.x).hypot(first.y - last.y);
    let slack = CONCAVITY_TOL * scale * scale;
    for w in pts.windows(3) {
        // walking right along a concave graph only turns clockwise
        if (w[1] - w[0]).cross(w[2] - w[1]) > slack {
            return Err(FrontierError::NotConcave { at: w[1].x });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit_linear() -> Frontier {
        Frontier::linear(0.0, 1.0, 1.0, 0.0).unwrap()
    }

    fn quarter_circle() -> Frontier {
        Frontier::circle(Point::new(0.0, 0.0), 1.0, 0.0, 1.0).unwrap()
    }

    fn parabola() -> Frontier {
        Frontier::power(2.0, 0.0, 1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn evaluation() {
        assert_eq!(unit_linear().eval(0.25).unwrap(), 0.75);
        assert_abs_diff_eq!(
            quarter_circle().eval(0.5).unwrap(),
            0.866_025_4,
            epsilon = 1e-7
        );
        assert_eq!(parabola().eval(0.5).unwrap(), 0.75);
    }

    #[test]
    fn inverses() {
        assert_eq!(unit_linear().inverse(0.25).unwrap(), 0.75);
        assert_abs_diff_eq!(
            quarter_circle().inverse(0.5).unwrap(),
            0.866_025_4,
            epsilon = 1e-7
        );
        assert_abs_diff_eq!(parabola().inverse(0.75).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn endpoints() {
        let f = parabola();
        assert_eq!(f.y_top(), 1.0);
        assert_eq!(f.y_bottom(), 0.0);
        let c = f.corners();
        assert_eq!(c.top, Point::new(0.0, 1.0));
        assert_eq!(c.right, Point::new(1.0, 0.0));
    }

    #[test]
    fn clamping_near_edges() {
        let f = unit_linear();
        assert_eq!(f.eval(1.0 + 1e-13).unwrap(), 0.0);
        assert_eq!(f.eval(-1e-13).unwrap(), 1.0);
        assert!(matches!(
            f.eval(1.0 + 1e-9),
            Err(FrontierError::OutOfDomain { .. })
        ));
        assert_eq!(f.inverse(-1e-13).unwrap(), 1.0);
        assert!(matches!(
            f.inverse(1.1),
            Err(FrontierError::OutOfRange { .. })
        ));
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            Frontier::linear(1.0, 1.0, 1.0, 0.0),
            Err(FrontierError::BadDomain { .. })
        ));
        assert!(matches!(
            Frontier::linear(0.0, 1.0, 0.0, 1.0),
            Err(FrontierError::NotDecreasing { .. })
        ));
        assert!(matches!(
            Frontier::power(0.5, 0.0, 1.0, 1.0, 0.0),
            Err(FrontierError::BadParameter(_))
        ));
        assert!(matches!(
            Frontier::circle(Point::new(0.0, 0.0), 1.0, -0.5, 1.0),
            Err(FrontierError::BadParameter(_))
        ));
        assert!(matches!(
            Frontier::circle(Point::new(0.0, 0.0), 1.0, 0.0, 1.5),
            Err(FrontierError::BadParameter(_))
        ));
    }

    #[test]
    fn polyline_canonicalization() {
        let f = Frontier::polyline(vec![
            Point::new(0.0, 2.0),
            Point::new(1.0, 2.0),
            Point::new(1.0, 2.0),
            Point::new(2.0, 1.0),
            Point::new(2.0, 0.0),
        ])
        .unwrap();
        assert_eq!(
            f.shape(),
            &FrontierShape::Polyline(vec![Point::new(1.0, 2.0), Point::new(2.0, 1.0)])
        );
    }

    #[test]
    fn polyline_errors() {
        assert!(matches!(
            Frontier::polyline(vec![Point::new(0.0, 1.0), Point::new(1.0, 1.0)]),
            Err(FrontierError::BadDomain { .. })
        ));
        assert!(matches!(
            Frontier::polyline(vec![
                Point::new(0.0, 1.0),
                Point::new(1.0, 0.0),
                Point::new(2.0, 0.5)
            ]),
            Err(FrontierError::NotDecreasing { .. })
        ));
        assert!(matches!(
            Frontier::polyline(vec![
                Point::new(0.0, 2.0),
                Point::new(1.0, 0.5),
                Point::new(2.0, 0.0)
            ]),
            Err(FrontierError::NotConcave { .. })
        ));
    }

    #[test]
    fn polyline_lookup() {
        let f = Frontier::polyline(vec![
            Point::new(0.0, 2.0),
            Point::new(1.0, 1.8),
            Point::new(2.0, 0.0),
        ])
        .unwrap();
        assert_eq!(f.eval(1.0).unwrap(), 1.8);
        assert_abs_diff_eq!(f.eval(1.5).unwrap(), 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(f.inverse(0.9).unwrap(), 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.inverse(1.9).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn bisection_matches_closed_form() {
        for f in [unit_linear(), quarter_circle(), parabola()] {
            for k in 0..=50 {
                let v = f.y_bottom() + f.height() * k as f64 / 50.0;
                let exact = f.inverse(v).unwrap();
                let bis = f.inverse_by_bisection(v).unwrap();
                assert!((exact - bis).abs() <= 1e-10 * f.width(), "{exact} vs {bis}");
            }
        }
    }

    #[test]
    fn inscribed_polygon() {
        let p = quarter_circle().inscribe(64).unwrap();
        assert_eq!(p.len(), 65);
        assert_eq!(quarter_circle().inscribe(2).unwrap().len(), 3);
        for v in p.vertices() {
            assert!(v.norm() <= 1.0 + 1e-15);
        }
        let c = p.corner_points();
        assert_eq!(c.right, Point::new(1.0, 0.0));
        assert_eq!(c.top, Point::new(0.0, 1.0));
        assert_eq!(parabola().inscribe(255).unwrap().len(), 256);
    }
}
