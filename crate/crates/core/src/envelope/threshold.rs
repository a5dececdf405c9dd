//! Upper estimates of the prox-boundedness threshold on a finite window.

use serde::Serialize;

use super::{cache::grid_values, check_grid, envelope_from_values};
use crate::domain::Grid;
use crate::error::{ProxError, Result};
use crate::function::FunctionOracle;

/// Number of halvings in the sweep `r_max · 2^-k`.
pub const SWEEP_STEPS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThresholdEstimate {
    Estimate { r: f64 },
    NotProxBoundedBelow { r_max: f64 },
}

impl ThresholdEstimate {
    pub fn value(&self) -> Option<f64> {
        match self {
            ThresholdEstimate::Estimate { r } => Some(*r),
            ThresholdEstimate::NotProxBoundedBelow { .. } => None,
        }
    }
}

/// Smallest `r = r_max · 2^-k` for which the envelope at the grid centre is
/// finite and attained away from the boundary.
pub fn prox_bound_threshold(f: &FunctionOracle, grid: &Grid, r_max: f64) -> Result<ThresholdEstimate> {
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(ProxError::InvalidArgument(format!("r_max must be positive, got {r_max}")));
    }
    check_grid(f, grid)?;
    let values = grid_values(f, grid);
    let centre = grid.domain().center();
    let mut best = None;
    for k in 0..=SWEEP_STEPS {
        let r = r_max * 0.5f64.powi(k as i32);
        match envelope_from_values(grid, &values, r, &centre) {
            Ok(env) if env.value.is_finite() && !env.boundary_attained => best = Some(r),
            Ok(_) => {}
            Err(ProxError::ImproperOnGrid) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(match best {
        Some(r) => ThresholdEstimate::Estimate { r },
        None => ThresholdEstimate::NotProxBoundedBelow { r_max },
    })
}
