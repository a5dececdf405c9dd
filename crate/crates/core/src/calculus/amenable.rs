//! Sampled estimates of the constants `r₁, r₂, k, r̄` of an amenable
//! composition `g(F(x))` and the resulting `r = r₁ + r₂ + r̄ k²`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rules::PRParams;
use crate::domain::BoxDomain;
use crate::error::{ProxError, Result};
use crate::function::SmoothMap;
use crate::linalg::{dist, norm};

/// Safety factor applied to sampled suprema that vary across samples.
pub const INFLATION: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateConfig {
    /// Lattice points per axis of the `x` box.
    pub x_points: usize,
    /// Extra uniformly drawn `x` and `η` samples.
    pub random_samples: usize,
    pub power_iterations: usize,
    pub seed: u64,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        Self {
            x_points: 9,
            random_samples: 48,
            power_iterations: 200,
            seed: crate::certify::DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmenableConstants {
    pub r1: f64,
    pub r2: f64,
    pub k: f64,
    pub rbar: f64,
    pub x_box: BoxDomain,
    pub y_box: BoxDomain,
}

fn lattice(b: &BoxDomain, points: usize) -> Vec<Vec<f64>> {
    let n = b.dim();
    let points = points.max(2);
    (0..points.pow(n as u32))
        .map(|mut idx| {
            let mut x = vec![0.0; n];
            for axis in (0..n).rev() {
                let k = idx % points;
                idx /= points;
                x[axis] = b.lower()[axis] + b.width(axis) * k as f64 / (points - 1) as f64;
            }
            x
        })
        .collect()
}

fn vertices(b: &BoxDomain) -> Vec<Vec<f64>> {
    lattice(b, 2)
}

fn uniform(b: &BoxDomain, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            (0..b.dim())
                .map(|a| b.lower()[a] + b.width(a) * rng.gen::<f64>())
                .collect()
        })
        .collect()
}

/// Largest eigenvalue of a symmetric matrix by power iteration on `A + σI`,
/// `σ = ‖A‖_F`, which makes the spectrum nonnegative.
pub fn largest_eigenvalue(a: &DMatrix<f64>, iterations: usize) -> f64 {
    let n = a.nrows();
    let sigma = a.norm();
    if sigma == 0.0 {
        return 0.0;
    }
    let shifted = a + DMatrix::identity(n, n) * sigma;
    let mut v = DVector::from_fn(n, |i, _| 1.0 + 0.1 * i as f64);
    v /= v.norm();
    let mut lambda = 0.0;
    for _ in 0..iterations {
        let w = &shifted * &v;
        let nw = w.norm();
        if nw == 0.0 {
            return -sigma;
        }
        lambda = v.dot(&w);
        v = w / nw;
    }
    lambda - sigma
}

/// Maximum of sampled values, inflated unless all samples agree.
fn inflated(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(0.0, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if values.is_empty() || max - min <= 1e-12 * max.abs().max(1.0) {
        max
    } else {
        INFLATION * max
    }
}

pub fn estimate_amenable_constants(
    map: &SmoothMap,
    y_box: &BoxDomain,
    x_box: &BoxDomain,
    rs: &[PRParams],
    config: &EstimateConfig,
) -> Result<AmenableConstants> {
    if rs.is_empty() {
        return Err(ProxError::EmptyList);
    }
    if x_box.dim() != map.input_dim() {
        return Err(ProxError::DimensionMismatch {
            expected: map.input_dim(),
            got: x_box.dim(),
        });
    }
    if y_box.dim() != map.output_dim() {
        return Err(ProxError::DimensionMismatch {
            expected: map.output_dim(),
            got: y_box.dim(),
        });
    }
    let finite = |b: &BoxDomain| b.lower().iter().chain(b.upper()).all(|v| v.is_finite());
    if !finite(x_box) || !finite(y_box) {
        return Err(ProxError::DegenerateBox("box bounds must be finite".into()));
    }
    if (0..x_box.dim()).any(|a| x_box.width(a) <= 0.0) {
        return Err(ProxError::DegenerateBox("x box has an axis of zero width".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut xs = lattice(x_box, config.x_points);
    xs.extend(uniform(x_box, config.random_samples, &mut rng));
    let mut ys = vertices(y_box);
    ys.extend(uniform(y_box, config.random_samples, &mut rng));
    let eta_box = BoxDomain::new(
        (0..y_box.dim()).map(|a| -y_box.width(a)).collect(),
        (0..y_box.dim()).map(|a| y_box.width(a)).collect(),
    )?;
    let mut etas = vertices(&eta_box);
    etas.extend(uniform(&eta_box, config.random_samples, &mut rng));

    let fx: Vec<Vec<f64>> = xs.iter().map(|x| map.eval(x)).collect();
    let jac: Vec<Vec<Vec<f64>>> = xs.iter().map(|x| map.jacobian(x)).collect();
    let (n, m) = (map.input_dim(), map.output_dim());
    let pairs: Vec<(usize, usize)> = (0..xs.len())
        .flat_map(|i| ((i + 1)..xs.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| dist(&xs[i], &xs[j]) > 0.0)
        .collect();

    let k_samples: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| dist(&fx[i], &fx[j]) / dist(&xs[i], &xs[j]))
        .collect();
    let r1_samples: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let dx = dist(&xs[i], &xs[j]);
            ys.iter()
                .map(|y| {
                    let t: Vec<f64> = (0..n)
                        .map(|c| (0..m).map(|row| (jac[j][row][c] - jac[i][row][c]) * y[row]).sum())
                        .collect();
                    norm(&t) / dx
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let r2_samples: Vec<f64> = xs
        .par_iter()
        .flat_map_iter(|x| {
            let hs = map.hessians(x);
            etas.iter()
                .map(|eta| {
                    let a = DMatrix::from_fn(n, n, |r, c| (0..m).map(|i| eta[i] * hs[i][r][c]).sum());
                    largest_eigenvalue(&a, config.power_iterations).max(0.0)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(AmenableConstants {
        r1: inflated(&r1_samples),
        r2: inflated(&r2_samples),
        k: inflated(&k_samples),
        rbar: rs.iter().map(|p| p.r).fold(0.0, f64::max),
        x_box: x_box.clone(),
        y_box: y_box.clone(),
    })
}

/// `(ε, r₁ + r₂ + r̄ k²)`; `ε` is supplied by the caller since the
/// neighbourhood where the chain rule for subgradients holds is not
/// computable from oracles.
pub fn amenable_params(c: &AmenableConstants, eps: f64) -> Result<PRParams> {
    PRParams::new(eps, c.r1 + c.r2 + c.rbar * c.k * c.k)
}
