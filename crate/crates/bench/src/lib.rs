//! Shared fixtures for the benchmarks.

use bargain_core::{ConvexPolygon, Frontier, Point, SplitMix64};

/// Hull of `n` points drawn uniformly from `[-10, 10]²`.
pub fn random_hull(n: usize, seed: u64) -> ConvexPolygon {
    let mut rng = SplitMix64::new(seed);
    let mut coord = || ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64) * 20.0 - 10.0;
    let pts: Vec<Point> = (0..n).map(|_| Point::new(coord(), coord())).collect();
    ConvexPolygon::hull(&pts).expect("hull of random points")
}

/// `f(t) = 1 - t²` on `[0, 1]`.
pub fn power_frontier() -> Frontier {
    Frontier::power(2.0, 0.0, 1.0, 1.0, 0.0).expect("valid power frontier")
}

/// The unit quarter circle.
pub fn quarter_circle() -> Frontier {
    Frontier::circle(Point::new(0.0, 0.0), 1.0, 0.0, 1.0).expect("valid circle")
}
