use serde::{Deserialize, Serialize};

use crate::error::{ProxError, Result};
use crate::function::FunctionOracle;

/// Prox-regularity parameters `ε > 0`, `r ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PRParams {
    pub eps: f64,
    pub r: f64,
}

impl PRParams {
    pub fn new(eps: f64, r: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(ProxError::InvalidArgument(format!("ε must be positive, got {eps}")));
        }
        if !(r >= 0.0 && r.is_finite()) {
            return Err(ProxError::InvalidArgument(format!("r must be nonnegative, got {r}")));
        }
        Ok(Self { eps, r })
    }
}

fn positive(lambda: f64) -> Result<f64> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(lambda)
    } else {
        Err(ProxError::NonpositiveLambda(lambda))
    }
}

fn paired<'a>(ps: &'a [PRParams], lambdas: &'a [f64]) -> Result<impl Iterator<Item = (PRParams, f64)> + 'a> {
    if ps.is_empty() {
        return Err(ProxError::EmptyList);
    }
    if ps.len() != lambdas.len() {
        return Err(ProxError::DimensionMismatch {
            expected: ps.len(),
            got: lambdas.len(),
        });
    }
    for &l in lambdas {
        positive(l)?;
    }
    Ok(ps.iter().copied().zip(lambdas.iter().copied()))
}

fn fold(items: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    items.fold((f64::INFINITY, 0.0), |(e, r), (ei, ri)| (e.min(ei), r.max(ri)))
}

/// `λ f`: `(min(ε, λε), λ r)`.
pub fn scalar_mult_params(p: PRParams, lambda: f64) -> Result<PRParams> {
    let l = positive(lambda)?;
    Ok(PRParams {
        eps: p.eps.min(l * p.eps),
        r: l * p.r,
    })
}

/// `λ f(x)` with `λ` varying near `λ̄`. Uses `δ = λ̄/2`:
/// `ε = min(δ, ε̃, δ ε̃)`, `r = 3 λ̄ r̃ / 2`.
pub fn scalar_mult_para_params(p: PRParams, lambdabar: f64) -> Result<PRParams> {
    let l = positive(lambdabar)?;
    let delta = 0.5 * l;
    Ok(PRParams {
        eps: delta.min(p.eps).min(delta * p.eps),
        r: 1.5 * l * p.r,
    })
}

/// `Σ fᵢ`: `(min εᵢ, m max rᵢ)`.
pub fn sum_params(ps: &[PRParams]) -> Result<PRParams> {
    if ps.is_empty() {
        return Err(ProxError::EmptyList);
    }
    let (eps, r) = fold(ps.iter().map(|p| (p.eps, p.r)));
    Ok(PRParams {
        eps,
        r: ps.len() as f64 * r,
    })
}

/// `Σ λᵢ fᵢ`: `(minᵢ min(εᵢ, λᵢεᵢ), m maxᵢ λᵢrᵢ)`.
pub fn weighted_sum_params(ps: &[PRParams], lambda: &[f64]) -> Result<PRParams> {
    let (eps, r) = fold(paired(ps, lambda)?.map(|(p, l)| (p.eps.min(l * p.eps), l * p.r)));
    Ok(PRParams {
        eps,
        r: ps.len() as f64 * r,
    })
}

/// `Σ λᵢ fᵢ(x)` with `λ` varying near `λ̄`:
/// `(minᵢ min(λ̄ᵢ/2, εᵢ, λ̄ᵢεᵢ/2), m maxᵢ 3λ̄ᵢrᵢ/2)`.
pub fn para_sum_params(ps: &[PRParams], lambdabar: &[f64]) -> Result<PRParams> {
    let (eps, r) = fold(
        paired(ps, lambdabar)?
            .map(|(p, l)| ((0.5 * l).min(p.eps).min(0.5 * l * p.eps), 1.5 * l * p.r)),
    );
    Ok(PRParams {
        eps,
        r: ps.len() as f64 * r,
    })
}

/// `maxᵢ λᵢ fᵢ(x)` for C¹ `fᵢ`: `(minᵢ min(εᵢ, λ̄ᵢεᵢ/2), maxᵢ 3λ̄ᵢrᵢ/2)`.
/// No factor `m` on `r`.
pub fn para_max_params(ps: &[PRParams], lambdabar: &[f64]) -> Result<PRParams> {
    let (eps, r) = fold(paired(ps, lambdabar)?.map(|(p, l)| (p.eps.min(0.5 * l * p.eps), 1.5 * l * p.r)));
    Ok(PRParams { eps, r })
}

/// [`para_max_params`] after checking that every atom is tagged C¹ or C².
pub fn para_max_params_for(fs: &[FunctionOracle], ps: &[PRParams], lambdabar: &[f64]) -> Result<PRParams> {
    if fs.len() != ps.len() {
        return Err(ProxError::DimensionMismatch {
            expected: ps.len(),
            got: fs.len(),
        });
    }
    if let Some(f) = fs.iter().find(|f| !f.smoothness().is_differentiable()) {
        return Err(ProxError::NotC1Tagged(f.id().to_string()));
    }
    para_max_params(ps, lambdabar)
}
