//! Grid-based conjugates, Moreau envelopes, proximal maps, prox-boundedness
//! thresholds and proximal averages.
//!
//! Every infimum and supremum is a discrete reduction over grid nodes. Grids
//! beyond three dimensions are rejected by callers in practice: the node count
//! grows as `points^n` and each envelope query scans all nodes.

mod average;
mod cache;
mod conjugate;
mod threshold;

pub use average::{
    build_nc_pa, lambda_lipschitz_estimate, lipschitz_mix_prox, nc_pa, pa_convex, pa_convex_env,
    ConvexPa, EnvelopePa, NcPa, WINDOW_FACTOR,
};
pub use cache::{grid_values, inner_envelope, EnvelopeCache};
pub use conjugate::{conjugate_values, dual_box, dual_grid, fenchel_conjugate, ConjugateResult};
pub use threshold::{prox_bound_threshold, ThresholdEstimate};

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::Grid;
use crate::error::{ProxError, Result};
use crate::extreal::ExtReal;
use crate::function::FunctionOracle;
use crate::linalg::{dist_sq, dot};

/// Relative tolerance defining the argmin set of an envelope.
pub const ENVELOPE_TOL: f64 = 1e-9;

/// Grid infimum of `f(y) + r/2 |y - x|²` together with its minimizers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeResult {
    pub value: ExtReal,
    pub argmin: Vec<Vec<f64>>,
    /// Every minimizing node lies on the grid boundary, so the window is
    /// probably too small and `value` is not trustworthy.
    pub boundary_attained: bool,
}

pub(crate) fn check_grid(f: &FunctionOracle, grid: &Grid) -> Result<()> {
    if grid.dim() != f.dim() {
        return Err(ProxError::DimensionMismatch {
            expected: f.dim(),
            got: grid.dim(),
        });
    }
    if !f.domain().contains_box(grid.domain()) {
        return Err(ProxError::GridOutsideDomain(f.id().to_string()));
    }
    Ok(())
}

pub(crate) fn check_r(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(ProxError::InvalidArgument(format!("r must be positive, got {r}")))
    }
}

/// Minimizes `values[i] + r/2 |node_i - x|²` over the grid.
pub(crate) fn envelope_from_values(
    grid: &Grid,
    values: &[ExtReal],
    r: f64,
    x: &[f64],
) -> Result<EnvelopeResult> {
    let objective: Vec<Option<f64>> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            values[i]
                .finite()
                .map(|v| v + 0.5 * r * dist_sq(&grid.node(i), x))
        })
        .collect();
    let min = objective
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return Err(ProxError::ImproperOnGrid);
    }
    let tol = ENVELOPE_TOL * (1.0 + min.abs());
    let active: Vec<usize> = objective
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_some_and(|v| v <= min + tol))
        .map(|(i, _)| i)
        .collect();
    Ok(EnvelopeResult {
        value: ExtReal::Finite(min),
        boundary_attained: active.iter().all(|&i| grid.is_boundary(i)),
        argmin: active.into_iter().map(|i| grid.node(i)).collect(),
    })
}

/// `e_r f(x) = min_y f(y) + r/2 |y - x|²` over the nodes of `grid`.
pub fn moreau_envelope(f: &FunctionOracle, r: f64, x: &[f64], grid: &Grid) -> Result<EnvelopeResult> {
    check_r(r)?;
    check_grid(f, grid)?;
    let values = grid_values(f, grid);
    envelope_from_values(grid, &values, r, x)
}

/// All grid minimizers of `f(y) + r/2 |y - x|²`.
pub fn prox_map(f: &FunctionOracle, r: f64, x: &[f64], grid: &Grid) -> Result<Vec<Vec<f64>>> {
    Ok(moreau_envelope(f, r, x, grid)?.argmin)
}

/// The minimizer closest to `x` (ties broken by grid order).
pub fn nearest_prox(argmin: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    argmin
        .iter()
        .min_by(|a, b| dist_sq(a, x).total_cmp(&dist_sq(b, x)))
        .expect("argmin set of a finite envelope is nonempty")
        .clone()
}

/// Prox point refined below grid resolution: starting from the minimizing
/// node nearest to `x`, each coordinate is moved to the vertex of the parabola
/// through the objective at the node and its two neighbours (clamped to one
/// spacing). Exact whenever the objective is quadratic around the node.
pub(crate) fn refined_prox(
    grid: &Grid,
    values: &[ExtReal],
    r: f64,
    x: &[f64],
) -> Result<Vec<f64>> {
    let env = envelope_from_values(grid, values, r, x)?;
    let base = nearest_prox(&env.argmin, x);
    let index = grid.nearest_index(&base);
    let multi = grid.multi_index(index);
    let stride = |axis: usize| grid.points_per_axis().pow((grid.dim() - 1 - axis) as u32);
    let objective = |i: usize| values[i].finite().map(|v| v + 0.5 * r * dist_sq(&grid.node(i), x));
    let mut out = base.clone();
    let centre = objective(index).expect("argmin node is finite");
    for axis in 0..grid.dim() {
        let k = multi[axis];
        if k == 0 || k + 1 == grid.points_per_axis() {
            continue;
        }
        let (Some(lo), Some(hi)) = (objective(index - stride(axis)), objective(index + stride(axis)))
        else {
            continue;
        };
        let curvature = lo - 2.0 * centre + hi;
        if curvature <= 0.0 {
            continue;
        }
        let h = grid.spacing(axis);
        let shift = (0.5 * h * (lo - hi) / curvature).clamp(-h, h);
        out[axis] = base[axis] + shift;
    }
    Ok(out)
}

/// `⟨x, y⟩` helper shared by the conjugate routines.
pub(crate) fn pairing(x: &[f64], y: &[f64]) -> f64 {
    dot(x, y)
}
