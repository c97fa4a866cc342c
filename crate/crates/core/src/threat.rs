//! The threat lottery: if bargaining fails, a fair coin picks a player, and
//! that player takes their corner of the set.

use thiserror::Error;

use crate::geometry::{CornerPair, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThreatError {
    #[error("at least one sample is required")]
    ZeroSamples,
}

/// Expected outcome of the lottery: the midpoint of the two corners.
pub fn threat_point(corners: &CornerPair) -> Point {
    corners.right.midpoint(corners.top)
}

/// SplitMix64 (Steele, Lea and Flood), the reference generator for every
/// seeded simulation in this crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Which player the coin selected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chosen {
    /// Player 1, who takes the right corner.
    First,
    /// Player 2, who takes the top corner.
    Second,
}

/// Low bit of the next output: 0 selects player 1, 1 selects player 2.
pub fn flip(rng: &mut SplitMix64) -> Chosen {
    if rng.next_u64() & 1 == 0 {
        Chosen::First
    } else {
        Chosen::Second
    }
}

/// One draw of the lottery.
pub fn sample_threat(rng: &mut SplitMix64, corners: &CornerPair) -> Point {
    match flip(rng) {
        Chosen::First => corners.right,
        Chosen::Second => corners.top,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThreatSampleStats {
    pub n: u64,
    /// Draws that landed on the right corner.
    pub right_count: u64,
    pub mean: Point,
    /// Sample standard deviation over `sqrt(n)`, per coordinate.
    pub standard_error: Point,
}

/// Draws `n` lottery outcomes from a generator seeded with `seed`.
///
/// The outcome has two support points, so the sample moments are computed
/// exactly from the count of right-corner draws.
pub fn simulate_threat_mean(
    corners: &CornerPair,
    n: u64,
    seed: u64,
) -> Result<ThreatSampleStats, ThreatError> {
    if n == 0 {
        return Err(ThreatError::ZeroSamples);
    }
    let mut rng = SplitMix64::new(seed);
    let mut right_count = 0u64;
    for _ in 0..n {
        if sample_threat(&mut rng, corners) == corners.right {
            right_count += 1;
        }
    }

    let k = right_count as f64;
    let nf = n as f64;
    let mix = |a: f64, b: f64| ((k * a + (nf - k) * b) / nf).clamp(a.min(b), a.max(b));
    let mean = Point::new(
        mix(corners.right.x, corners.top.x),
        mix(corners.right.y, corners.top.y),
    );

    let standard_error = if n > 1 {
        // unbiased variance of a two-point sample: k (n - k) / (n (n - 1)) * gap²
        let spread = (k * (nf - k) / (nf * (nf - 1.0))).sqrt() / nf.sqrt();
        Point::new(
            spread * (corners.right.x - corners.top.x).abs(),
            spread * (corners.right.y - corners.top.y).abs(),
        )
    } else {
        Point::new(0.0, 0.0)
    };

    Ok(ThreatSampleStats {
        n,
        right_count,
        mean,
        standard_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_corners() -> CornerPair {
        CornerPair {
            right: Point::new(1.0, 0.0),
            top: Point::new(0.0, 1.0),
        }
    }

    #[test]
    fn threat_points() {
        assert_eq!(threat_point(&triangle_corners()), Point::new(0.5, 0.5));
        let c = CornerPair {
            right: Point::new(2.0, 0.0),
            top: Point::new(0.0, 1.0),
        };
        assert_eq!(threat_point(&c), Point::new(1.0, 0.5));
        let d = CornerPair {
            right: Point::new(1.0, 1.0),
            top: Point::new(1.0, 1.0),
        };
        assert_eq!(threat_point(&d), Point::new(1.0, 1.0));
    }

    #[test]
    fn splitmix_reference_values() {
        // published test vector for seed 1234567
        let mut rng = SplitMix64::new(1234567);
        let expected = [
            6457827717110365317u64,
            3203168211198807973,
            9817491932198370423,
            4593380528125082431,
            16408922859458223821,
        ];
        for e in expected {
            assert_eq!(rng.next_u64(), e);
        }
    }

    #[test]
    fn draws_stay_on_support() {
        let c = triangle_corners();
        let mut rng = SplitMix64::new(7);
        for _ in 0..1000 {
            let p = sample_threat(&mut rng, &c);
            assert!(p == c.right || p == c.top);
        }
    }

    #[test]
    fn coin_fraction_is_fair() {
        let c = triangle_corners();
        let stats = simulate_threat_mean(&c, 100_000, 3).unwrap();
        let frac = stats.right_count as f64 / stats.n as f64;
        assert!((frac - 0.5).abs() <= 0.0063, "fraction {frac}");
    }

    #[test]
    fn degenerate_lottery_is_exact() {
        let c = CornerPair {
            right: Point::new(1.0, 1.0),
            top: Point::new(1.0, 1.0),
        };
        let stats = simulate_threat_mean(&c, 12_345, 99).unwrap();
        assert_eq!(stats.mean, Point::new(1.0, 1.0));
        assert_eq!(stats.standard_error, Point::new(0.0, 0.0));
    }

    #[test]
    fn single_sample_is_a_corner() {
        let c = triangle_corners();
        for seed in 0..20 {
            let stats = simulate_threat_mean(&c, 1, seed).unwrap();
            assert!(stats.mean == c.right || stats.mean == c.top);
            assert_eq!(stats.standard_error, Point::new(0.0, 0.0));
        }
    }

    #[test]
    fn zero_samples_rejected() {
        assert_eq!(
            simulate_threat_mean(&triangle_corners(), 0, 1),
            Err(ThreatError::ZeroSamples)
        );
    }

    #[test]
    fn reproducible() {
        let c = triangle_corners();
        let a = simulate_threat_mean(&c, 5000, 11).unwrap();
        let b = simulate_threat_mean(&c, 5000, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mean.x.to_bits(), b.mean.x.to_bits());
    }
}
