//! Discrete Fenchel conjugates `f*(y) = max_x ⟨x, y⟩ - f(x)` over grid nodes.

use rayon::prelude::*;
use serde::Serialize;

use super::{check_grid, pairing};
use crate::domain::{BoxDomain, Grid};
use crate::error::{ProxError, Result};
use crate::extreal::ExtReal;
use crate::function::FunctionOracle;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugateResult {
    pub value: ExtReal,
    pub argmax: Vec<Vec<f64>>,
    /// Every maximizing node lies on the grid boundary: the true conjugate
    /// is likely larger (possibly `+∞`) and grows with the window.
    pub unbounded: bool,
}

/// `max_x ⟨x, y⟩ - f(x)` over the nodes of `grid`, skipping nodes where `f = +∞`.
pub fn fenchel_conjugate(f: &FunctionOracle, grid: &Grid, y: &[f64]) -> Result<ConjugateResult> {
    check_grid(f, grid)?;
    if y.len() != grid.dim() {
        return Err(ProxError::DimensionMismatch {
            expected: grid.dim(),
            got: y.len(),
        });
    }
    let scores: Vec<Option<f64>> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.node(i);
            f.eval(&x).finite().map(|fx| pairing(&x, y) - fx)
        })
        .collect();
    let best = scores
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        return Err(ProxError::ImproperOnGrid);
    }
    let tol = super::ENVELOPE_TOL * (1.0 + best.abs());
    let active: Vec<usize> = scores
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_some_and(|s| s >= best - tol))
        .map(|(i, _)| i)
        .collect();
    Ok(ConjugateResult {
        value: ExtReal::Finite(best),
        unbounded: active.iter().all(|&i| grid.is_boundary(i)),
        argmax: active.into_iter().map(|i| grid.node(i)).collect(),
    })
}

/// Conjugate of the tabulated function `values` (on `primal`) at every node of
/// `dual`. Nodes with infinite value are skipped.
pub fn conjugate_values(primal: &Grid, values: &[ExtReal], dual: &Grid) -> Result<Vec<f64>> {
    let finite: Vec<(Vec<f64>, f64)> = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.finite().map(|v| (primal.node(i), v)))
        .collect();
    if finite.is_empty() {
        return Err(ProxError::ImproperOnGrid);
    }
    Ok((0..dual.len())
        .into_par_iter()
        .map(|j| {
            let s = dual.node(j);
            finite
                .iter()
                .map(|(x, v)| pairing(x, &s) - v)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect())
}

/// Bounding box of the axis-wise difference quotients of the tabulated
/// functions, padded by 10% of its width on each side.
pub fn dual_box(primal: &Grid, tables: &[&[ExtReal]]) -> Result<BoxDomain> {
    let n = primal.dim();
    let p = primal.points_per_axis();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for values in tables {
        for i in 0..primal.len() {
            let multi = primal.multi_index(i);
            for axis in 0..n {
                if multi[axis] + 1 == p {
                    continue;
                }
                let j = i + p.pow((n - 1 - axis) as u32);
                if let (Some(a), Some(b)) = (values[i].finite(), values[j].finite()) {
                    let q = (b - a) / primal.spacing(axis);
                    lo[axis] = lo[axis].min(q);
                    hi[axis] = hi[axis].max(q);
                }
            }
        }
    }
    if lo.iter().any(|v| !v.is_finite()) {
        return Err(ProxError::ImproperOnGrid);
    }
    for axis in 0..n {
        let pad = 0.1 * (hi[axis] - lo[axis]).max(1e-3);
        lo[axis] -= pad;
        hi[axis] += pad;
    }
    BoxDomain::new(lo, hi)
}

/// Dual grid over [`dual_box`] with spacing at most a quarter of the primal
/// spacing (capped so that the node count stays tractable in 2-D and 3-D).
pub fn dual_grid(primal: &Grid, tables: &[&[ExtReal]]) -> Result<Grid> {
    let domain = dual_box(primal, tables)?;
    let cap = match primal.dim() {
        1 => 40_001,
        2 => 401,
        _ => 61,
    };
    let target = 0.25 * primal.max_spacing();
    let points = (0..domain.dim())
        .map(|a| (domain.width(a) / target).ceil() as usize + 1)
        .max()
        .unwrap_or(3)
        .clamp(3, cap);
    Grid::new(domain, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::catalog;

    fn grid() -> Grid {
        Grid::interval(-4.0, 4.0, 401).unwrap()
    }

    #[test]
    fn conjugate_of_quadratic() {
        let quad = catalog::function("quad").unwrap();
        let c = fenchel_conjugate(&quad, &grid(), &[1.0]).unwrap();
        assert!((c.value.to_f64() - 0.5).abs() < 1e-3);
        assert!(!c.unbounded);
    }

    #[test]
    fn conjugate_of_abs_inside_and_outside_unit_interval() {
        let abs = catalog::function("abs").unwrap();
        let c = fenchel_conjugate(&abs, &grid(), &[0.5]).unwrap();
        assert!(c.value.to_f64().abs() < 1e-12);
        assert!(!c.unbounded);
        for radius in [2.0, 4.0, 8.0] {
            let g = Grid::interval(-radius, radius, 401).unwrap();
            let c = fenchel_conjugate(&abs, &g, &[2.0]).unwrap();
            assert!((c.value.to_f64() - radius).abs() < 1e-12);
            assert!(c.unbounded);
        }
    }

    #[test]
    fn tabulated_conjugate_matches_pointwise() {
        let f = catalog::function("huberizable").unwrap();
        let g = grid();
        let values = crate::envelope::grid_values(&f, &g);
        let dual = dual_grid(&g, &[&values]).unwrap();
        let table = conjugate_values(&g, &values, &dual).unwrap();
        for j in [0, dual.len() / 3, dual.len() - 1] {
            let direct = fenchel_conjugate(&f, &g, &dual.node(j)).unwrap();
            assert_eq!(direct.value.to_f64(), table[j]);
        }
        assert!(dual.domain().lower()[0] < -1.0 && dual.domain().upper()[0] > 1.0);
    }
}
