//! Bargaining between two players when the only fallback is a coin flip.
//!
//! If the players cannot agree, a fair coin picks one of them and that player
//! takes any point of the bargaining set they like, provided no other point
//! gives them the same utility and the opponent more. The agreed point is the
//! limit of repeatedly cutting the set down to the quadrant above the
//! expected fallback.
//!
//! - [`geometry`]: convex sets, corners, clipping and frontier extraction.
//! - [`frontier`]: the boundary as a decreasing concave function with inverse.
//! - [`threat`]: the fallback lottery and its Monte Carlo simulation.
//! - [`solver`]: the trim iteration and the corner recurrences.
//! - [`oracle`]: a lattice brute force for cross-checking both solvers.
//!
//! ```
//! use bargain_core::{solve_polygon, ConvexPolygon, Point, SolverConfig};
//!
//! let set = ConvexPolygon::new(vec![
//!     Point::new(0.0, 0.0),
//!     Point::new(2.0, 0.0),
//!     Point::new(0.0, 1.0),
//! ])
//! .unwrap();
//! let solution = solve_polygon(&set, &SolverConfig::default()).unwrap();
//! assert_eq!(solution.point, Point::new(1.0, 0.5));
//! ```

pub mod frontier;
pub mod geometry;
pub mod oracle;
pub mod solver;
pub mod threat;

pub use frontier::{Frontier, FrontierError, FrontierShape};
pub use geometry::{BoundingBox, ConvexPolygon, CornerPair, GeometryError, Point};
pub use oracle::{
    discretize, solve_cloud, CloudSolution, CloudStop, OracleError, PointCloud, Region,
};
pub use solver::{
    solve_frontier, solve_polygon, solve_polygon_frontier, trim, verify_prop1, Prop1Report,
    Solution, SolverConfig, SolverError, TraceRecord,
};
pub use threat::{simulate_threat_mean, threat_point, SplitMix64, ThreatError, ThreatSampleStats};
