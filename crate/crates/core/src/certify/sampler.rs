//! Deterministic sample sets around a base point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::BoxDomain;

const PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Sample layout: a lattice over the ε-box, a multiscale cluster at the base
/// point (needed to expose violations at scales `~1/r`) and seeded Halton
/// points with a random Cranley-Patterson shift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    pub points_per_axis: usize,
    pub lambda_points_per_axis: usize,
    pub low_discrepancy: usize,
    pub lambda_low_discrepancy: usize,
    /// Offsets `ε 2^-k` along each axis for `k = 1..=cluster_levels`.
    pub cluster_levels: u32,
    pub seed: u64,
    /// Only use `λ = λ̄` (per-slice checks).
    pub freeze_lambda: bool,
    /// Fewer localized tuples than this yields an inconclusive verdict.
    pub min_tuples: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            points_per_axis: 21,
            lambda_points_per_axis: 7,
            low_discrepancy: 256,
            lambda_low_discrepancy: 8,
            cluster_levels: 30,
            seed: DEFAULT_SEED,
            freeze_lambda: false,
            min_tuples: 8,
        }
    }
}

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as f64;
    let mut inv = 1.0 / b;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base as u64) as f64 * inv;
        i /= base as u64;
        inv /= b;
    }
    out
}

fn lattice(center: &[f64], radius: f64, points: usize) -> Vec<Vec<f64>> {
    let n = center.len();
    let points = points.max(1);
    let total = points.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut x = vec![0.0; n];
            for axis in (0..n).rev() {
                let k = idx % points;
                idx /= points;
                let t = if points == 1 {
                    0.0
                } else {
                    2.0 * k as f64 / (points - 1) as f64 - 1.0
                };
                x[axis] = center[axis] + radius * t;
            }
            x
        })
        .collect()
}

fn halton(center: &[f64], radius: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let n = center.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    (1..=count as u64)
        .map(|i| {
            (0..n)
                .map(|axis| {
                    let u = (radical_inverse(i, PRIMES[axis % PRIMES.len()]) + shift[axis]).fract();
                    center[axis] + radius * (2.0 * u - 1.0)
                })
                .collect()
        })
        .collect()
}

fn finish(mut pts: Vec<Vec<f64>>, domain: &BoxDomain) -> Vec<Vec<f64>> {
    pts.retain(|p| domain.contains(p));
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(pts.len());
    let mut seen = std::collections::HashSet::new();
    for p in pts {
        let key: Vec<u64> = p.iter().map(|v| v.to_bits()).collect();
        if seen.insert(key) {
            out.push(p);
        }
    }
    out
}

/// Radius of the sampled box: just inside the open ε-ball along each axis.
fn inner_radius(eps: f64) -> f64 {
    eps * (1.0 - 1e-9)
}

impl SamplerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_points(mut self, points_per_axis: usize) -> Self {
        self.points_per_axis = points_per_axis;
        self
    }

    pub fn frozen(mut self) -> Self {
        self.freeze_lambda = true;
        self
    }

    /// Sampled `x` around `center`; the centre itself always comes first.
    pub fn x_samples(&self, center: &[f64], eps: f64, domain: &BoxDomain) -> Vec<Vec<f64>> {
        let rho = inner_radius(eps);
        let mut pts = vec![center.to_vec()];
        pts.extend(lattice(center, rho, self.points_per_axis));
        for k in 1..=self.cluster_levels {
            let step = eps * 0.5f64.powi(k as i32);
            for axis in 0..center.len() {
                for sign in [-1.0, 1.0] {
                    let mut p = center.to_vec();
                    p[axis] = center[axis] + sign * step;
                    pts.push(p);
                }
            }
        }
        pts.extend(halton(center, rho, self.low_discrepancy, self.seed));
        finish(pts, domain)
    }

    /// Sampled `λ` around `center`; `[λ̄]` alone when frozen or `m = 0`.
    pub fn lambda_samples(&self, center: &[f64], eps: f64, domain: &BoxDomain) -> Vec<Vec<f64>> {
        if self.freeze_lambda || center.is_empty() {
            return vec![center.to_vec()];
        }
        let rho = inner_radius(eps);
        let mut pts = vec![center.to_vec()];
        pts.extend(lattice(center, rho, self.lambda_points_per_axis));
        pts.extend(halton(
            center,
            rho,
            self.lambda_low_discrepancy,
            self.seed.wrapping_add(1),
        ));
        finish(pts, domain)
    }
}
