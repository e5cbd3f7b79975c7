//! The Bell–Mermin hidden-variable model for a single qubit.
//!
//! The qubit is prepared as the up-eigenstate along a unit vector n. A
//! hidden unit vector m, uniform on the sphere and outside experimental
//! control, fixes the outcome of any observable A = a0 + a1·σ:
//!
//! ```text
//! v(A) = a0 + ‖a1‖   if (m + n)·a1 > 0
//! v(A) = a0 − ‖a1‖   if (m + n)·a1 < 0
//! ```
//!
//! Averaging over the solid angle of m recovers the quantum expectation
//! a0 + a1·n exactly.
//!
//! RNG contract: sampling uses ChaCha8 (rand_chacha 0.3), seeded from the
//! caller's `u64` with one independent stream per fixed-size chunk, so
//! results are bit-reproducible per seed and independent of worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Samples per RNG substream; results do not depend on how chunks are
/// scheduled across threads.
const CHUNK: u64 = 1 << 16;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("direction must have nonzero length")]
    ZeroDirection,
    #[error("sample count must be at least 1")]
    ZeroSamples,
}

/// Observable A = a0 + a1·σ.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Observable {
    pub a0: f64,
    pub a1: [f64; 3],
}

impl Observable {
    pub fn sigma_x() -> Self {
        Observable {
            a0: 0.0,
            a1: [1.0, 0.0, 0.0],
        }
    }

    pub fn sigma_y() -> Self {
        Observable {
            a0: 0.0,
            a1: [0.0, 1.0, 0.0],
        }
    }

    pub fn sigma_z() -> Self {
        Observable {
            a0: 0.0,
            a1: [0.0, 0.0, 1.0],
        }
    }

    /// ‖a1‖, the half-spread of the two possible outcomes a0 ± ‖a1‖.
    pub fn a1_magnitude(&self) -> f64 {
        dot(self.a1, self.a1).sqrt()
    }
}

/// The hidden unit vector m.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HiddenDirection(pub [f64; 3]);

impl HiddenDirection {
    pub fn new(v: [f64; 3]) -> Result<Self, ModelError> {
        Ok(HiddenDirection(normalize(v)?))
    }
}

/// The preparation axis n (state = up-eigenstate along n).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PreparedDirection(pub [f64; 3]);

impl PreparedDirection {
    pub fn new(v: [f64; 3]) -> Result<Self, ModelError> {
        Ok(PreparedDirection(normalize(v)?))
    }

    pub fn z() -> Self {
        PreparedDirection([0.0, 0.0, 1.0])
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(v: [f64; 3]) -> Result<[f64; 3], ModelError> {
    let norm = dot(v, v).sqrt();
    if norm < 1e-12 {
        return Err(ModelError::ZeroDirection);
    }
    Ok([v[0] / norm, v[1] / norm, v[2] / norm])
}

/// Deterministic outcome rule. The measure-zero boundary (m+n)·a1 = 0 takes
/// the + branch; `sample_mean` counts boundary hits separately.
pub fn outcome(a: &Observable, n: &PreparedDirection, m: &HiddenDirection) -> f64 {
    let a1 = a.a1_magnitude();
    if a1 == 0.0 {
        return a.a0;
    }
    let s = [m.0[0] + n.0[0], m.0[1] + n.0[1], m.0[2] + n.0[2]];
    if dot(s, a.a1) >= 0.0 {
        a.a0 + a1
    } else {
        a.a0 - a1
    }
}

/// Analytic solid-angle average: a0 + a1·n.
pub fn closed_form_mean(a: &Observable, n: &PreparedDirection) -> f64 {
    a.a0 + dot(a.a1, n.0)
}

/// Monte Carlo estimate of the outcome average.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SampleStats {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    /// Exact hits of the measure-zero boundary (m+n)·a1 = 0; expected 0.
    pub boundary_hits: u64,
}

/// Draws m uniformly on the sphere: cosθ uniform on [−1,1], azimuth
/// uniform on [0,2π) — the d(cosθ) measure of the solid-angle integral.
pub fn sample_hidden_direction<R: Rng>(rng: &mut R) -> HiddenDirection {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    HiddenDirection([r * phi.cos(), r * phi.sin(), z])
}

/// Empirical mean of `outcome` over `samples` uniform hidden directions.
///
/// Deterministic per seed: chunk `c` uses ChaCha8 stream `c` of the master
/// seed, and partial sums are combined in chunk order.
pub fn sample_mean(
    a: &Observable,
    n: &PreparedDirection,
    samples: u64,
    seed: u64,
) -> Result<SampleStats, ModelError> {
    if samples == 0 {
        return Err(ModelError::ZeroSamples);
    }
    let num_chunks = samples.div_ceil(CHUNK);
    let partials: Vec<(f64, f64, u64)> = (0..num_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let count = CHUNK.min(samples - chunk * CHUNK);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            let mut boundary = 0u64;
            for _ in 0..count {
                let m = sample_hidden_direction(&mut rng);
                let s = [m.0[0] + n.0[0], m.0[1] + n.0[1], m.0[2] + n.0[2]];
                if dot(s, a.a1) == 0.0 && a.a1_magnitude() > 0.0 {
                    boundary += 1;
                }
                let v = outcome(a, n, &m);
                sum += v;
                sum_sq += v * v;
            }
            (sum, sum_sq, boundary)
        })
        .collect();
    let (sum, sum_sq, boundary_hits) = partials
        .iter()
        .fold((0.0, 0.0, 0), |(s, q, b), (ps, pq, pb)| {
            (s + ps, q + pq, b + pb)
        });
    let mean = sum / samples as f64;
    let variance = (sum_sq / samples as f64 - mean * mean).max(0.0);
    let stderr = (variance / samples as f64).sqrt();
    Ok(SampleStats {
        mean,
        stderr,
        samples,
        seed,
        boundary_hits,
    })
}
