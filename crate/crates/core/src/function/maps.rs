//! Smooth maps `F: R^n → R^m` with analytic Jacobians and component Hessians.

use std::fmt;
use std::sync::Arc;

use crate::error::{ProxError, Result};

type VecFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type MatFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;
type HessFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<Vec<f64>>> + Send + Sync>;

/// A C² map with `jacobian(x)[i][j] = ∂Fᵢ/∂xⱼ` and
/// `hessians(x)[i]` the Hessian of the component `Fᵢ`.
#[derive(Clone)]
pub struct SmoothMap {
    id: String,
    n: usize,
    m: usize,
    eval: VecFn,
    jacobian: MatFn,
    hessians: HessFn,
}

impl fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmoothMap({}: R^{} -> R^{})", self.id, self.n, self.m)
    }
}

impl SmoothMap {
    pub fn new(
        id: impl Into<String>,
        n: usize,
        m: usize,
        eval: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        jacobian: impl Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static,
        hessians: impl Fn(&[f64]) -> Vec<Vec<Vec<f64>>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            n,
            m,
            eval: Arc::new(eval),
            jacobian: Arc::new(jacobian),
            hessians: Arc::new(hessians),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn input_dim(&self) -> usize {
        self.n
    }

    pub fn output_dim(&self) -> usize {
        self.m
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        (self.eval)(x)
    }

    pub fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        (self.jacobian)(x)
    }

    pub fn hessians(&self, x: &[f64]) -> Vec<Vec<Vec<f64>>> {
        (self.hessians)(x)
    }

    /// `F(x) = (x, ..., x)` with `m` copies of `x ∈ R`.
    pub fn diagonal(m: usize) -> Self {
        Self::new(
            format!("diagonal{m}"),
            1,
            m,
            move |x| vec![x[0]; m],
            move |_| vec![vec![1.0]; m],
            move |_| vec![vec![vec![0.0]]; m],
        )
    }

    pub fn identity(n: usize) -> Self {
        Self::new(
            format!("identity{n}"),
            n,
            n,
            |x| x.to_vec(),
            move |_| {
                (0..n)
                    .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                    .collect()
            },
            move |_| vec![vec![vec![0.0; n]; n]; n],
        )
    }

    /// `F(x) = (x, x²)`.
    pub fn curve() -> Self {
        Self::new(
            "curve",
            1,
            2,
            |x| vec![x[0], x[0] * x[0]],
            |x| vec![vec![1.0], vec![2.0 * x[0]]],
            |_| vec![vec![vec![0.0]], vec![vec![2.0]]],
        )
    }

    /// Looks up `diagonal<m>`, `identity<n>` or `curve`.
    pub fn by_name(name: &str) -> Result<Self> {
        if name == "curve" {
            return Ok(Self::curve());
        }
        let parse = |prefix: &str| {
            name.strip_prefix(prefix)
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|k| *k > 0)
        };
        if let Some(m) = parse("diagonal") {
            Ok(Self::diagonal(m))
        } else if let Some(n) = parse("identity") {
            Ok(Self::identity(n))
        } else {
            Err(ProxError::UnknownFunction(name.to_string()))
        }
    }
}
