use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::subdiff::Subdifferential;
use crate::domain::BoxDomain;
use crate::error::{ProxError, Result};
use crate::extreal::ExtReal;

pub type EvalFn = Arc<dyn Fn(&[f64]) -> ExtReal + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(&[f64]) -> Option<Vec<f64>> + Send + Sync>;
pub type SubgradientFn = Arc<dyn Fn(&[f64]) -> Subdifferential + Send + Sync>;

pub type ParamEvalFn = Arc<dyn Fn(&[f64], &[f64]) -> ExtReal + Send + Sync>;
pub type ParamSubgradientFn = Arc<dyn Fn(&[f64], &[f64]) -> Subdifferential + Send + Sync>;

/// Regularity class of an oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothness {
    C2,
    C1,
    Convex,
    Lsc,
}

impl Smoothness {
    pub fn is_differentiable(self) -> bool {
        matches!(self, Smoothness::C1 | Smoothness::C2)
    }
}

/// Central-difference step per coordinate.
pub fn fd_step(x: f64) -> f64 {
    1e-6_f64.max(1e-6 * x.abs())
}

fn central_difference(eval: &dyn Fn(&[f64]) -> ExtReal, x: &[f64]) -> Option<Vec<f64>> {
    let mut grad = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        let h = fd_step(x[i]);
        probe[i] = x[i] + h;
        let up = eval(&probe).finite()?;
        probe[i] = x[i] - h;
        let down = eval(&probe).finite()?;
        probe[i] = x[i];
        grad.push((up - down) / (2.0 * h));
    }
    Some(grad)
}

/// An extended-real-valued function on `R^n` with optional first-order oracles.
#[derive(Clone)]
pub struct FunctionOracle {
    id: String,
    domain: BoxDomain,
    smoothness: Smoothness,
    convex: bool,
    eval: EvalFn,
    gradient: Option<GradientFn>,
    subgradients: Option<SubgradientFn>,
}

impl fmt::Debug for FunctionOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionOracle")
            .field("id", &self.id)
            .field("dim", &self.dim())
            .field("smoothness", &self.smoothness)
            .field("convex", &self.convex)
            .finish()
    }
}

impl FunctionOracle {
    pub fn new(
        id: impl Into<String>,
        domain: BoxDomain,
        smoothness: Smoothness,
        eval: impl Fn(&[f64]) -> ExtReal + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            domain,
            convex: smoothness == Smoothness::Convex,
            smoothness,
            eval: Arc::new(eval),
            gradient: None,
            subgradients: None,
        }
    }

    pub fn with_gradient(
        mut self,
        gradient: impl Fn(&[f64]) -> Option<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    pub fn with_subgradients(
        mut self,
        subgradients: impl Fn(&[f64]) -> Subdifferential + Send + Sync + 'static,
    ) -> Self {
        self.subgradients = Some(Arc::new(subgradients));
        self
    }

    /// Marks the function as convex (independently of its smoothness class).
    pub fn convex(mut self) -> Self {
        self.convex = true;
        self
    }

    pub fn renamed(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn eval(&self, x: &[f64]) -> ExtReal {
        (self.eval)(x)
    }

    pub fn eval_fn(&self) -> EvalFn {
        Arc::clone(&self.eval)
    }

    pub fn has_subgradient_oracle(&self) -> bool {
        self.subgradients.is_some()
    }

    /// True when [`FunctionOracle::subdifferential`] can answer at finite points.
    pub fn has_first_order_oracle(&self) -> bool {
        self.subgradients.is_some() || self.gradient.is_some() || self.smoothness.is_differentiable()
    }

    /// Analytic gradient, falling back to central differences for C1/C2 tags.
    pub fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        if let Some(g) = &self.gradient {
            if let Some(v) = g(x) {
                return Some(v);
            }
        }
        if self.smoothness.is_differentiable() {
            return central_difference(&*self.eval, x);
        }
        None
    }

    /// Generators of `∂f(x)`.
    ///
    /// Uses the subgradient oracle when present, then the analytic gradient,
    /// then a central-difference gradient for functions tagged C1 or C2.
    pub fn subdifferential(&self, x: &[f64]) -> Result<Subdifferential> {
        if x.len() != self.dim() {
            return Err(ProxError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        if !self.eval(x).is_finite() {
            return Err(ProxError::EvalInfinite);
        }
        if let Some(s) = &self.subgradients {
            return Ok(s(x));
        }
        if let Some(g) = &self.gradient {
            if let Some(v) = g(x) {
                return Ok(Subdifferential::singleton(v));
            }
        }
        if self.smoothness.is_differentiable() {
            if let Some(v) = central_difference(&*self.eval, x) {
                return Ok(Subdifferential::singleton(v));
            }
        }
        Err(ProxError::NoSubdiffOracle(self.id.clone()))
    }
}

/// `eval_subdifferential`: generators of `∂f(x)` for `x` in the domain.
pub fn eval_subdifferential(f: &FunctionOracle, x: &[f64]) -> Result<Subdifferential> {
    if !f.domain().contains(x) {
        return Err(ProxError::InvalidArgument(format!(
            "point {x:?} lies outside the domain of `{}`",
            f.id()
        )));
    }
    f.subdifferential(x)
}

/// A family `f(x, λ)` with subgradient oracles in `x`.
#[derive(Clone)]
pub struct ParametrizedOracle {
    id: String,
    x_domain: BoxDomain,
    lambda_domain: BoxDomain,
    smoothness: Smoothness,
    convex_in_x: bool,
    eval: ParamEvalFn,
    subgradients: Option<ParamSubgradientFn>,
}

impl fmt::Debug for ParametrizedOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametrizedOracle")
            .field("id", &self.id)
            .field("x_dim", &self.x_dim())
            .field("lambda_dim", &self.lambda_dim())
            .field("smoothness", &self.smoothness)
            .finish()
    }
}

impl ParametrizedOracle {
    pub fn new(
        id: impl Into<String>,
        x_domain: BoxDomain,
        lambda_domain: BoxDomain,
        smoothness: Smoothness,
        eval: impl Fn(&[f64], &[f64]) -> ExtReal + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            x_domain,
            lambda_domain,
            convex_in_x: smoothness == Smoothness::Convex,
            smoothness,
            eval: Arc::new(eval),
            subgradients: None,
        }
    }

    pub fn with_subgradients(
        mut self,
        subgradients: impl Fn(&[f64], &[f64]) -> Subdifferential + Send + Sync + 'static,
    ) -> Self {
        self.subgradients = Some(Arc::new(subgradients));
        self
    }

    pub fn convex_in_x(mut self) -> Self {
        self.convex_in_x = true;
        self
    }

    pub fn renamed(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn with_lambda_domain(mut self, lambda_domain: BoxDomain) -> Self {
        self.lambda_domain = lambda_domain;
        self
    }

    /// Views an unparametrized function as a family over a zero-dimensional parameter.
    pub fn from_function(f: &FunctionOracle) -> Self {
        let eval = f.eval_fn();
        let g = f.clone();
        Self {
            id: f.id().to_string(),
            x_domain: f.domain().clone(),
            lambda_domain: BoxDomain::point(),
            smoothness: f.smoothness(),
            convex_in_x: f.is_convex(),
            eval: Arc::new(move |x: &[f64], _lambda: &[f64]| eval(x)),
            subgradients: if f.has_first_order_oracle() {
                Some(Arc::new(move |x: &[f64], _lambda: &[f64]| {
                    g.subdifferential(x)
                        .expect("subgradient oracle present at finite points")
                }))
            } else {
                None
            },
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn x_dim(&self) -> usize {
        self.x_domain.dim()
    }

    pub fn lambda_dim(&self) -> usize {
        self.lambda_domain.dim()
    }

    pub fn x_domain(&self) -> &BoxDomain {
        &self.x_domain
    }

    pub fn lambda_domain(&self) -> &BoxDomain {
        &self.lambda_domain
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn is_convex_in_x(&self) -> bool {
        self.convex_in_x
    }

    pub fn eval(&self, x: &[f64], lambda: &[f64]) -> ExtReal {
        (self.eval)(x, lambda)
    }

    pub fn eval_fn(&self) -> ParamEvalFn {
        Arc::clone(&self.eval)
    }

    pub fn has_subgradient_oracle(&self) -> bool {
        self.subgradients.is_some()
    }

    /// Generators of `∂ₓf(x, λ)`, with the same fallbacks as [`FunctionOracle::subdifferential`].
    pub fn subdifferential_x(&self, x: &[f64], lambda: &[f64]) -> Result<Subdifferential> {
        if x.len() != self.x_dim() {
            return Err(ProxError::DimensionMismatch {
                expected: self.x_dim(),
                got: x.len(),
            });
        }
        if lambda.len() != self.lambda_dim() {
            return Err(ProxError::DimensionMismatch {
                expected: self.lambda_dim(),
                got: lambda.len(),
            });
        }
        if !self.eval(x, lambda).is_finite() {
            return Err(ProxError::EvalInfinite);
        }
        if let Some(s) = &self.subgradients {
            return Ok(s(x, lambda));
        }
        if self.smoothness.is_differentiable() {
            let eval = &self.eval;
            if let Some(v) = central_difference(&|y: &[f64]| eval(y, lambda), x) {
                return Ok(Subdifferential::singleton(v));
            }
        }
        Err(ProxError::NoSubdiffOracle(self.id.clone()))
    }

    /// The slice `x ↦ f(x, λ)`.
    pub fn slice(&self, lambda: &[f64]) -> FunctionOracle {
        let eval = Arc::clone(&self.eval);
        let lam = lambda.to_vec();
        let mut f = FunctionOracle::new(
            format!("{}@{:?}", self.id, lambda),
            self.x_domain.clone(),
            self.smoothness,
            move |x| eval(x, &lam),
        );
        if self.convex_in_x {
            f = f.convex();
        }
        if let Some(s) = &self.subgradients {
            let s = Arc::clone(s);
            let lam = lambda.to_vec();
            f = f.with_subgradients(move |x| s(x, &lam));
        }
        f
    }
}

impl From<FunctionOracle> for ParametrizedOracle {
    fn from(f: FunctionOracle) -> Self {
        Self::from_function(&f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs() -> FunctionOracle {
        FunctionOracle::new(
            "abs",
            BoxDomain::interval(-4.0, 4.0).unwrap(),
            Smoothness::Convex,
            |x| ExtReal::Finite(x[0].abs()),
        )
    }

    #[test]
    fn lsc_without_oracle_is_an_error() {
        let f = FunctionOracle::new(
            "bare",
            BoxDomain::interval(-1.0, 1.0).unwrap(),
            Smoothness::Lsc,
            |x| ExtReal::Finite(x[0].abs()),
        );
        assert_eq!(
            f.subdifferential(&[0.0]),
            Err(ProxError::NoSubdiffOracle("bare".into()))
        );
        assert_eq!(abs().subdifferential(&[0.0, 1.0]).unwrap_err(), ProxError::DimensionMismatch { expected: 1, got: 2 });
    }

    #[test]
    fn smooth_tag_falls_back_to_central_differences() {
        let f = FunctionOracle::new(
            "cube",
            BoxDomain::interval(-2.0, 2.0).unwrap(),
            Smoothness::C2,
            |x| ExtReal::Finite(x[0].powi(3)),
        );
        let g = f.subdifferential(&[1.5]).unwrap().generators();
        assert!((g[0][0] - 6.75).abs() < 1e-6);
    }

    #[test]
    fn infinite_points_have_no_subdifferential() {
        let f = FunctionOracle::new(
            "ind",
            BoxDomain::interval(-2.0, 2.0).unwrap(),
            Smoothness::Convex,
            |x| if x[0].abs() <= 1.0 { ExtReal::ZERO } else { ExtReal::PosInf },
        )
        .with_subgradients(|_| Subdifferential::singleton(vec![0.0]));
        assert_eq!(f.subdifferential(&[1.5]), Err(ProxError::EvalInfinite));
        assert!(eval_subdifferential(&f, &[3.0]).is_err());
    }

    #[test]
    fn lifted_function_ignores_parameter() {
        let f = abs().with_subgradients(|x| {
            if x[0] == 0.0 {
                Subdifferential::hull(vec![vec![-1.0], vec![1.0]])
            } else {
                Subdifferential::singleton(vec![x[0].signum()])
            }
        });
        let p = ParametrizedOracle::from_function(&f);
        assert_eq!(p.lambda_dim(), 0);
        assert_eq!(p.eval(&[-2.0], &[]), ExtReal::Finite(2.0));
        assert_eq!(p.subdifferential_x(&[0.0], &[]).unwrap().generators().len(), 2);
    }
}
