//! Derived functions: tilt shifts, argument shifts and scalings, weighted
//! sums and weighted maxima.

use std::sync::Arc;

use super::oracle::{FunctionOracle, ParametrizedOracle, Smoothness};
use super::subdiff::Subdifferential;
use crate::domain::BoxDomain;
use crate::error::{ProxError, Result};
use crate::extreal::ExtReal;
use crate::linalg::{dot, scaled, sub};

/// Relative tolerance deciding which pieces of a max are active.
pub const ACTIVITY_TOL: f64 = 1e-9;

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(ProxError::DimensionMismatch { expected, got })
    }
}

fn weakest(tags: impl Iterator<Item = Smoothness>) -> Smoothness {
    let mut out = Smoothness::C2;
    for t in tags {
        out = match (out, t) {
            (_, Smoothness::Lsc) | (Smoothness::Lsc, _) => Smoothness::Lsc,
            (_, Smoothness::Convex) | (Smoothness::Convex, _) => Smoothness::Lsc,
            (Smoothness::C1, _) | (_, Smoothness::C1) => Smoothness::C1,
            _ => Smoothness::C2,
        };
    }
    out
}

/// `g(x, λ) = f(x - shift, λ) - ⟨tilt, x - shift⟩`, with
/// `∂ₓg(x, λ) = ∂ₓf(x - shift, λ) - tilt`.
pub fn build_tilt_shift(
    f: &ParametrizedOracle,
    shift: &[f64],
    tilt: &[f64],
) -> Result<ParametrizedOracle> {
    check_dim(f.x_dim(), shift.len())?;
    check_dim(f.x_dim(), tilt.len())?;
    let eval = f.eval_fn();
    let (s, t) = (shift.to_vec(), tilt.to_vec());
    let x_domain = BoxDomain::new(
        f.x_domain().lower().iter().zip(&s).map(|(l, c)| l + c).collect(),
        f.x_domain().upper().iter().zip(&s).map(|(u, c)| u + c).collect(),
    )?;
    let mut g = ParametrizedOracle::new(
        format!("tilt({};{:?};{:?})", f.id(), shift, tilt),
        x_domain,
        f.lambda_domain().clone(),
        f.smoothness(),
        move |x, lambda| {
            let u = sub(x, &s);
            eval(&u, lambda) + (-dot(&t, &u))
        },
    );
    if f.is_convex_in_x() {
        g = g.convex_in_x();
    }
    if f.has_subgradient_oracle() || f.smoothness().is_differentiable() {
        let inner = f.clone();
        let (s, t) = (shift.to_vec(), tilt.to_vec());
        g = g.with_subgradients(move |x, lambda| {
            inner
                .subdifferential_x(&sub(x, &s), lambda)
                .expect("finite point of the shifted function")
                .translated(&t)
        });
    }
    Ok(g)
}

/// Tilt shift that moves `(xbar, vbar)` to `(0, 0)`:
/// `g(u, λ) = f(u + xbar, λ) - ⟨vbar, u + xbar⟩`.
pub fn shift_to_origin(
    f: &ParametrizedOracle,
    xbar: &[f64],
    vbar: &[f64],
) -> Result<ParametrizedOracle> {
    let neg: Vec<f64> = xbar.iter().map(|v| -v).collect();
    build_tilt_shift(f, &neg, vbar)
}

/// `f(x, λ) = f̃(x - λ)` with `λ ∈ R^n`.
pub fn build_arg_shift(f: &FunctionOracle) -> Result<ParametrizedOracle> {
    let n = f.dim();
    let half: Vec<f64> = (0..n).map(|a| 0.5 * f.domain().width(a)).collect();
    let lambda_domain = BoxDomain::new(half.iter().map(|h| -h).collect(), half)?;
    let eval = f.eval_fn();
    let mut g = ParametrizedOracle::new(
        format!("argshift({})", f.id()),
        f.domain().clone(),
        lambda_domain,
        f.smoothness(),
        move |x, lambda| eval(&sub(x, lambda)),
    );
    if f.is_convex() {
        g = g.convex_in_x();
    }
    if f.has_first_order_oracle() {
        let inner = f.clone();
        g = g.with_subgradients(move |x, lambda| {
            inner
                .subdifferential(&sub(x, lambda))
                .expect("finite point of the shifted function")
        });
    }
    Ok(g)
}

/// `f(x, λ) = f̃(λ x)` with scalar `λ`; subgradients `{λ w : w ∈ ∂f̃(λx)}`.
pub fn build_arg_scale(f: &FunctionOracle) -> Result<ParametrizedOracle> {
    let eval = f.eval_fn();
    let mut g = ParametrizedOracle::new(
        format!("argscale({})", f.id()),
        f.domain().clone(),
        BoxDomain::interval(0.0, 2.0)?,
        f.smoothness(),
        move |x, lambda| eval(&scaled(x, lambda[0])),
    );
    if f.is_convex() {
        g = g.convex_in_x();
    }
    if f.has_first_order_oracle() {
        let inner = f.clone();
        g = g.with_subgradients(move |x, lambda| {
            inner
                .subdifferential(&scaled(x, lambda[0]))
                .expect("finite point of the scaled function")
                .scaled(lambda[0])
        });
    }
    Ok(g)
}

fn shared_dim(fs: &[FunctionOracle]) -> Result<usize> {
    let first = fs.first().ok_or(ProxError::EmptyList)?;
    for f in fs {
        check_dim(first.dim(), f.dim())?;
    }
    Ok(first.dim())
}

fn intersect_domains(fs: &[FunctionOracle]) -> Result<BoxDomain> {
    let mut d = fs[0].domain().clone();
    for f in &fs[1..] {
        d = d
            .intersect(f.domain())
            .ok_or_else(|| ProxError::DegenerateBox("domains do not overlap".into()))?;
    }
    Ok(d)
}

fn join_ids(prefix: &str, fs: &[FunctionOracle]) -> String {
    let ids: Vec<&str> = fs.iter().map(|f| f.id()).collect();
    format!("{prefix}({})", ids.join(","))
}

/// `f(x, λ) = Σᵢ λᵢ fᵢ(x)`; the x-subdifferential is the Minkowski sum of
/// the scaled atom subdifferentials.
pub fn build_weighted_sum(fs: &[FunctionOracle]) -> Result<ParametrizedOracle> {
    shared_dim(fs)?;
    let m = fs.len();
    let atoms: Arc<Vec<FunctionOracle>> = Arc::new(fs.to_vec());
    let eval_atoms = Arc::clone(&atoms);
    let mut g = ParametrizedOracle::new(
        join_ids("wsum", fs),
        intersect_domains(fs)?,
        BoxDomain::cube(m, 0.0, 10.0)?,
        weakest(fs.iter().map(|f| f.smoothness())),
        move |x, lambda| {
            eval_atoms
                .iter()
                .zip(lambda)
                .fold(ExtReal::ZERO, |acc, (f, &w)| acc + f.eval(x).scale(w))
        },
    );
    if fs.iter().all(|f| f.is_convex()) {
        g = g.convex_in_x();
    }
    if fs.iter().all(|f| f.has_first_order_oracle()) {
        g = g.with_subgradients(move |x, lambda| {
            let mut acc: Option<Subdifferential> = None;
            for (f, &w) in atoms.iter().zip(lambda) {
                let part = f
                    .subdifferential(x)
                    .expect("every atom is finite where the sum is finite")
                    .scaled(w);
                acc = Some(match acc {
                    None => part,
                    Some(a) => a.minkowski_sum(&part),
                });
            }
            acc.expect("nonempty atom list")
        });
    }
    Ok(g)
}

/// Plain sum `Σᵢ fᵢ(x)`, i.e. the composition of the separable `g(u) = Σ fᵢ(uᵢ)`
/// with the diagonal map `F(x) = (x, ..., x)`.
pub fn build_diagonal_sum(fs: &[FunctionOracle]) -> Result<FunctionOracle> {
    let m = fs.len();
    let sum = build_weighted_sum(fs)?;
    let ones = vec![1.0; m];
    Ok(sum.slice(&ones).renamed(join_ids("sum", fs)))
}

/// `f(x, λ) = maxᵢ λᵢ fᵢ(x)` for real-valued C¹ atoms; the x-subdifferential
/// is the convex hull of `λᵢ ∇fᵢ(x)` over the active indices.
pub fn build_weighted_max(fs: &[FunctionOracle]) -> Result<ParametrizedOracle> {
    let n = shared_dim(fs)?;
    let domain = intersect_domains(fs)?;
    for f in fs {
        if !f.smoothness().is_differentiable() {
            return Err(ProxError::NotFiniteValued(f.id().to_string()));
        }
        let probe = crate::domain::Grid::new(domain.clone(), 5)
            .map(|g| g.nodes())
            .unwrap_or_else(|_| vec![domain.center()]);
        if probe.iter().any(|x| !f.eval(x).is_finite()) {
            return Err(ProxError::NotFiniteValued(f.id().to_string()));
        }
    }
    let m = fs.len();
    let atoms: Arc<Vec<FunctionOracle>> = Arc::new(fs.to_vec());
    let eval_atoms = Arc::clone(&atoms);
    let g = ParametrizedOracle::new(
        join_ids("wmax", fs),
        domain,
        BoxDomain::cube(m, 0.0, 10.0)?,
        Smoothness::Lsc,
        move |x, lambda| {
            eval_atoms
                .iter()
                .zip(lambda)
                .map(|(f, &w)| f.eval(x).scale(w))
                .fold(None, |acc: Option<ExtReal>, v| Some(acc.map_or(v, |a| a.max(v))))
                .expect("nonempty atom list")
        },
    )
    .with_subgradients(move |x, lambda| {
        let values: Vec<f64> = atoms
            .iter()
            .zip(lambda)
            .map(|(f, &w)| w * f.eval(x).to_f64())
            .collect();
        let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tol = ACTIVITY_TOL * (1.0 + top.abs());
        let active: Vec<Vec<f64>> = atoms
            .iter()
            .zip(lambda)
            .zip(&values)
            .filter(|(_, &v)| v >= top - tol)
            .map(|((f, &w), _)| {
                scaled(&f.gradient(x).expect("C1 atom has a gradient"), w)
            })
            .collect();
        debug_assert!(active.iter().all(|v| v.len() == n));
        Subdifferential::hull(active)
    });
    Ok(g)
}
