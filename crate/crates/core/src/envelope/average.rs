//! Convex proximal average (two routes) and the nonconvex proximal average.

use std::sync::Arc;

use rayon::prelude::*;

use super::cache::{grid_values, inner_envelope};
use super::conjugate::{conjugate_values, dual_grid};
use super::threshold::prox_bound_threshold;
use super::{check_grid, check_r, pairing, refined_prox};
use crate::domain::{BoxDomain, Grid};
use crate::error::{ProxError, Result};
use crate::extreal::ExtReal;
use crate::function::{FunctionOracle, ParametrizedOracle, Smoothness, Subdifferential};
use crate::linalg::{dist, dist_sq, scaled, sub};

/// Widening factor for the inner grids: minimizers of the envelopes of
/// points in the query window lie outside it.
pub const WINDOW_FACTOR: usize = 3;

fn check_lambda(lambda: f64, open: bool) -> Result<()> {
    let ok = if open {
        lambda > 0.0 && lambda < 1.0
    } else {
        (0.0..=1.0).contains(&lambda)
    };
    if ok {
        Ok(())
    } else {
        Err(ProxError::InvalidArgument(format!(
            "lambda = {lambda} outside {}",
            if open { "(0, 1)" } else { "[0, 1]" }
        )))
    }
}

fn common_domain(f0: &FunctionOracle, f1: &FunctionOracle) -> Result<BoxDomain> {
    f0.domain()
        .intersect(f1.domain())
        .ok_or_else(|| ProxError::GridOutsideDomain(format!("{} ∩ {}", f0.id(), f1.id())))
}

fn inner_grid(f0: &FunctionOracle, f1: &FunctionOracle, grid: &Grid) -> Result<Grid> {
    check_grid(f0, grid)?;
    check_grid(f1, grid)?;
    Ok(grid.widened(WINDOW_FACTOR, &common_domain(f0, f1)?))
}

fn require_convex(f: &FunctionOracle) -> Result<()> {
    if f.is_convex() {
        Ok(())
    } else {
        Err(ProxError::NotConvexTagged(f.id().to_string()))
    }
}

/// Tabulated conjugate route:
/// `PA(x) = ((1-λ) φ₀* + λ φ₁*)*(x) - |x|²/2` with `φᵢ = fᵢ + |·|²/2`.
#[derive(Debug, Clone)]
pub struct ConvexPa {
    dual: Grid,
    psi: Vec<f64>,
}

impl ConvexPa {
    pub fn new(f0: &FunctionOracle, f1: &FunctionOracle, lambda: f64, grid: &Grid) -> Result<Self> {
        require_convex(f0)?;
        require_convex(f1)?;
        check_lambda(lambda, false)?;
        let primal = inner_grid(f0, f1, grid)?;
        let shifted = |f: &FunctionOracle| -> Vec<ExtReal> {
            grid_values(f, &primal)
                .into_iter()
                .enumerate()
                .map(|(i, v)| v + 0.5 * pairing(&primal.node(i), &primal.node(i)))
                .collect()
        };
        let (phi0, phi1) = (shifted(f0), shifted(f1));
        let dual = dual_grid(&primal, &[&phi0, &phi1])?;
        let c0 = conjugate_values(&primal, &phi0, &dual)?;
        let c1 = conjugate_values(&primal, &phi1, &dual)?;
        let psi = c0
            .iter()
            .zip(&c1)
            .map(|(a, b)| (1.0 - lambda) * a + lambda * b)
            .collect();
        Ok(Self { dual, psi })
    }

    pub fn dual_grid(&self) -> &Grid {
        &self.dual
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let best = (0..self.dual.len())
            .map(|j| pairing(x, &self.dual.node(j)) - self.psi[j])
            .fold(f64::NEG_INFINITY, f64::max);
        best - 0.5 * pairing(x, x)
    }
}

/// Tabulated envelope route: `PA(x) = -e₁(-(1-λ) e₁f₀ - λ e₁f₁)(x)`.
#[derive(Debug, Clone)]
pub struct EnvelopePa {
    grid: Grid,
    mix: Vec<f64>,
}

impl EnvelopePa {
    pub fn new(f0: &FunctionOracle, f1: &FunctionOracle, lambda: f64, grid: &Grid) -> Result<Self> {
        require_convex(f0)?;
        require_convex(f1)?;
        check_lambda(lambda, false)?;
        let inner = inner_grid(f0, f1, grid)?;
        let mix = mixed_envelopes(f0, f1, 1.0, lambda, &inner)?;
        Ok(Self { grid: inner, mix })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        max_minus_quadratic(&self.grid, &self.mix, 1.0, x).0
    }
}

/// `(1-λ) e_r f₀ + λ e_r f₁` on every node of `grid`.
fn mixed_envelopes(
    f0: &FunctionOracle,
    f1: &FunctionOracle,
    r: f64,
    lambda: f64,
    grid: &Grid,
) -> Result<Vec<f64>> {
    let e0 = inner_envelope(f0, r, grid)?;
    let e1 = inner_envelope(f1, r, grid)?;
    Ok(mix_tables(&e0, &e1, lambda))
}

fn mix_tables(e0: &[ExtReal], e1: &[ExtReal], lambda: f64) -> Vec<f64> {
    e0.iter()
        .zip(e1)
        .map(|(a, b)| (1.0 - lambda) * a.to_f64() + lambda * b.to_f64())
        .collect()
}

/// `max_y g(y) - s/2 |y - x|²` over grid nodes, with the maximizing nodes.
fn max_minus_quadratic(grid: &Grid, g: &[f64], s: f64, x: &[f64]) -> (f64, Vec<Vec<f64>>) {
    let scores: Vec<f64> = (0..grid.len())
        .map(|i| g[i] - 0.5 * s * dist_sq(&grid.node(i), x))
        .collect();
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = super::ENVELOPE_TOL * (1.0 + best.abs());
    let arg = scores
        .iter()
        .enumerate()
        .filter(|(_, v)| **v >= best - tol)
        .map(|(i, _)| grid.node(i))
        .collect();
    (best, arg)
}

/// Convex proximal average through conjugates, evaluated at one point.
pub fn pa_convex(f0: &FunctionOracle, f1: &FunctionOracle, lambda: f64, x: &[f64], grid: &Grid) -> Result<ExtReal> {
    Ok(ExtReal::Finite(ConvexPa::new(f0, f1, lambda, grid)?.eval(x)))
}

/// Convex proximal average through Moreau envelopes, evaluated at one point.
pub fn pa_convex_env(f0: &FunctionOracle, f1: &FunctionOracle, lambda: f64, x: &[f64], grid: &Grid) -> Result<ExtReal> {
    Ok(ExtReal::Finite(EnvelopePa::new(f0, f1, lambda, grid)?.eval(x)))
}

/// Nonconvex proximal average
/// `PA_r(x, λ) = -e_{r+λ(1-λ)}(-(1-λ) e_r f₀ - λ e_r f₁)(x)`
/// with both inner envelopes tabulated once on the widened grid.
#[derive(Debug, Clone)]
pub struct NcPa {
    id: String,
    r: f64,
    window: BoxDomain,
    inner: Grid,
    e0: Arc<Vec<ExtReal>>,
    e1: Arc<Vec<ExtReal>>,
}

impl NcPa {
    /// Fails with `ThresholdViolated` unless `r` exceeds the threshold
    /// estimate of both functions on the inner grid.
    pub fn new(f0: &FunctionOracle, f1: &FunctionOracle, r: f64, grid: &Grid) -> Result<Self> {
        check_r(r)?;
        let inner = inner_grid(f0, f1, grid)?;
        for f in [f0, f1] {
            let below = prox_bound_threshold(f, &inner, r)?
                .value()
                .is_some_and(|t| t < r);
            if !below {
                return Err(ProxError::ThresholdViolated {
                    id: f.id().to_string(),
                    r,
                });
            }
        }
        Ok(Self {
            id: format!("nc_pa({},{};r={r})", f0.id(), f1.id()),
            r,
            window: grid.domain().clone(),
            e0: inner_envelope(f0, r, &inner)?,
            e1: inner_envelope(f1, r, &inner)?,
            inner,
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Outer envelope parameter `r + λ(1-λ)`.
    pub fn outer_r(&self, lambda: f64) -> f64 {
        self.r + lambda * (1.0 - lambda)
    }

    fn solve(&self, x: &[f64], lambda: f64) -> (f64, Vec<Vec<f64>>) {
        let mix = mix_tables(&self.e0, &self.e1, lambda);
        max_minus_quadratic(&self.inner, &mix, self.outer_r(lambda), x)
    }

    pub fn eval(&self, x: &[f64], lambda: f64) -> f64 {
        self.solve(x, lambda).0
    }

    /// `∂ₓPA_r(x, λ) = conv { s (y* - x) }` over the outer maximizers `y*`,
    /// `s = r + λ(1-λ)`.
    pub fn subdifferential(&self, x: &[f64], lambda: f64) -> Subdifferential {
        let s = self.outer_r(lambda);
        let (_, arg) = self.solve(x, lambda);
        Subdifferential::hull(arg.iter().map(|y| scaled(&sub(y, x), s)).collect())
    }

    /// The average as a family in `(x, λ)` with `x` in the query window and
    /// `λ ∈ [0.01, 0.99]`. Lower-C² in `x` with modulus `r + λ(1-λ) ≤ r + 1/4`.
    pub fn into_oracle(self) -> ParametrizedOracle {
        let this = Arc::new(self);
        let (a, b) = (this.clone(), this.clone());
        ParametrizedOracle::new(
            this.id.clone(),
            this.window.clone(),
            BoxDomain::interval(0.01, 0.99).expect("valid interval"),
            Smoothness::Lsc,
            move |x, l| ExtReal::Finite(a.eval(x, l[0])),
        )
        .with_subgradients(move |x, l| b.subdifferential(x, l[0]))
    }
}

/// One NC-PA value; see [`NcPa`] for repeated queries.
pub fn nc_pa(
    f0: &FunctionOracle,
    f1: &FunctionOracle,
    r: f64,
    lambda: f64,
    x: &[f64],
    grid: &Grid,
) -> Result<ExtReal> {
    check_lambda(lambda, true)?;
    Ok(ExtReal::Finite(NcPa::new(f0, f1, r, grid)?.eval(x, lambda)))
}

pub fn build_nc_pa(f0: &FunctionOracle, f1: &FunctionOracle, r: f64, grid: &Grid) -> Result<ParametrizedOracle> {
    Ok(NcPa::new(f0, f1, r, grid)?.into_oracle())
}

/// Largest difference quotient `|PA(x, λ') - PA(x, λ)| / |λ' - λ|` over
/// consecutive entries of `lambdas` at each of `xs`.
pub fn lambda_lipschitz_estimate(pa: &NcPa, xs: &[Vec<f64>], lambdas: &[f64]) -> f64 {
    xs.par_iter()
        .map(|x| {
            let vals: Vec<f64> = lambdas.iter().map(|&l| pa.eval(x, l)).collect();
            vals.windows(2)
                .zip(lambdas.windows(2))
                .map(|(v, l)| (v[1] - v[0]).abs() / (l[1] - l[0]).abs())
                .fold(0.0, |a: f64, b| if b.is_nan() { f64::INFINITY } else { a.max(b) })
        })
        .reduce(|| 0.0, f64::max)
}

/// Lipschitz estimate of `g(x) = λ P_r f₀(x) + (1-λ) P_r f₁(x) - x` over all
/// pairs of nodes of `grid`. Prox points are the minimizers nearest to `x`,
/// refined below the inner grid spacing.
pub fn lipschitz_mix_prox(f0: &FunctionOracle, f1: &FunctionOracle, r: f64, lambda: f64, grid: &Grid) -> Result<f64> {
    check_r(r)?;
    check_lambda(lambda, false)?;
    let inner = inner_grid(f0, f1, grid)?;
    let v0 = grid_values(f0, &inner);
    let v1 = grid_values(f1, &inner);
    let nodes = grid.nodes();
    let g: Vec<Vec<f64>> = nodes
        .par_iter()
        .map(|x| -> Result<Vec<f64>> {
            let p0 = refined_prox(&inner, &v0, r, x)?;
            let p1 = refined_prox(&inner, &v1, r, x)?;
            Ok((0..x.len())
                .map(|k| lambda * p0[k] + (1.0 - lambda) * p1[k] - x[k])
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok((0..nodes.len())
        .into_par_iter()
        .map(|i| {
            ((i + 1)..nodes.len())
                .map(|j| dist(&g[i], &g[j]) / dist(&nodes[i], &nodes[j]))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max))
}
