//! Points on the unit sphere, seeded random streams and test grids.
//!
//! Every random draw in the crate comes from a [`RandomStream`]: a ChaCha8
//! generator keyed by a 64-bit master seed (expanded with
//! `SeedableRng::seed_from_u64`) and positioned on ChaCha stream number
//! `stream_index`. The trial with index `k` always uses stream `k`, so trial
//! results do not depend on scheduling.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const UNIT_TOLERANCE: f64 = 1e-6;

/// A point on S².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVector {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector {
    pub const X: UnitVector = UnitVector {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const Y: UnitVector = UnitVector {
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const Z: UnitVector = UnitVector {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    /// Accepts a vector whose norm is within 1e-6 of 1 and renormalizes it.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// Projects any nonzero finite vector onto the sphere.
    pub fn normalize(x: f64, y: f64, z: f64) -> Option<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if norm > 0.0 && norm.is_finite() {
            Some(Self {
                x: x / norm,
                y: y / norm,
                z: z / norm,
            })
        } else {
            None
        }
    }

    /// Point at latitude `lat` (radians from the equator) and longitude `lon`.
    pub fn from_lat_lon(lat: f64, lon: f64) -> Self {
        let (sl, cl) = lat.sin_cos();
        let (so, co) = lon.sin_cos();
        Self::normalize(cl * co, cl * so, sl).expect("trigonometric point is nonzero")
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &UnitVector) -> [f64; 3] {
        [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ]
    }

    /// Latitude in `[−π/2, π/2]`.
    pub fn latitude(&self) -> f64 {
        self.z.atan2(self.x.hypot(self.y))
    }

    pub fn antipode(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// Great-circle angle between two points, in `[0, π]`.
///
/// Uses `atan2(|u × v|, u · v)`, which stays accurate near 0 and π where
/// `acos` of the dot product loses most of its digits.
pub fn angular_distance(u: &UnitVector, v: &UnitVector) -> f64 {
    let [cx, cy, cz] = u.cross(v);
    (cx * cx + cy * cy + cz * cz).sqrt().atan2(u.dot(v))
}

/// Angular distance between raw coordinate triples. Rejects inputs whose norm
/// is more than 1e-6 away from 1.
pub fn angular_distance_checked(u: [f64; 3], v: [f64; 3]) -> Result<f64> {
    let u = UnitVector::new(u[0], u[1], u[2])?;
    let v = UnitVector::new(v[0], v[1], v[2])?;
    Ok(angular_distance(&u, &v))
}

/// Reproducible random source identified by `(master_seed, stream_index)`.
#[derive(Debug, Clone)]
pub struct RandomStream {
    master_seed: u64,
    stream_index: u64,
    position: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            position: 0,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Number of unit vectors drawn so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    /// Uniform point on S²: a normalized triple of standard Gaussians.
    pub fn next_unit_vector(&mut self) -> UnitVector {
        self.position += 1;
        loop {
            let x: f64 = self.rng.sample(StandardNormal);
            let y: f64 = self.rng.sample(StandardNormal);
            let z: f64 = self.rng.sample(StandardNormal);
            // The zero vector has probability zero but would not normalize.
            if let Some(u) = UnitVector::normalize(x, y, z) {
                return u;
            }
        }
    }

    pub fn next_f64(&mut self) -> f64 {
        self.rng.random()
    }

    pub fn unit_vectors(&mut self, n: usize) -> Vec<UnitVector> {
        (0..n).map(|_| self.next_unit_vector()).collect()
    }
}

pub fn sample_uniform_unit_vector(stream: &mut RandomStream) -> UnitVector {
    stream.next_unit_vector()
}

/// `m` quasi-uniform points on a golden-angle spiral.
///
/// Point `i` sits at height `z = 1 − (2i + 1)/m` and longitude `i·γ` with
/// `γ = π(3 − √5)`, so every point covers an equal-area slab.
pub fn fibonacci_grid(m: usize) -> Vec<UnitVector> {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    (0..m)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / m as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let (s, c) = (i as f64 * golden_angle).sin_cos();
            UnitVector::normalize(r * c, r * s, z).expect("grid point is nonzero")
        })
        .collect()
}
