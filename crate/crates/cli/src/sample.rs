//! Deterministic seeded sampling of chart points, covectors, and tangent
//! directions.
//!
//! The stream layout per sample is fixed (base coordinates, covector
//! direction, covector radius, then plane directions), so a given seed
//! always reproduces the same point set regardless of which suites run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::SamplingSection;

/// Number of plane directions drawn per sample for sectional-curvature
/// checks.
pub const DIRECTIONS_PER_POINT: usize = 3;

/// One sampled fiber point with auxiliary plane directions.
#[derive(Debug, Clone)]
pub struct SamplePoint {
    /// Base chart coordinates.
    pub x: Vec<f64>,
    /// Covector components (coordinate norm inside the configured annulus).
    pub p: Vec<f64>,
    /// Adapted-frame direction vectors of length `2n`.
    pub dirs: Vec<Vec<f64>>,
}

/// Draw `count` sample points for an `n`-dimensional base.
pub fn sample_points(n: usize, s: &SamplingSection) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    (0..s.count)
        .map(|_| {
            let x: Vec<f64> = (0..n)
                .map(|_| rng.gen_range(-s.x_radius..=s.x_radius))
                .collect();
            // Isotropic direction via normal components, then a uniform
            // radius in the annulus.
            let mut p: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            let r = rng.gen_range(s.r_min..=s.r_max);
            if norm < 1e-300 {
                // Essentially impossible; keep the sample deterministic
                // and inside the annulus anyway.
                p = vec![0.0; n];
                p[0] = r;
            } else {
                for v in p.iter_mut() {
                    *v *= r / norm;
                }
            }
            let dirs: Vec<Vec<f64>> = (0..DIRECTIONS_PER_POINT)
                .map(|_| (0..2 * n).map(|_| rng.gen_range(-1.0..=1.0)).collect())
                .collect();
            SamplePoint { x, p, dirs }
        })
        .collect()
}
