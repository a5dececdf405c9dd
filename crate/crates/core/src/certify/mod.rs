//! Sample-based certification of prox-regularity and parametric
//! prox-regularity, with reproducible violation witnesses.
//!
//! All checks run on a finite, seeded sample set and report `pass` only in
//! the sense "no violation found among at least `min_tuples` localized
//! tuples". Strict inequalities are checked in non-strict form with the
//! slack `τ = 1e-8 (1 + |f(x, λ)| + |f(x', λ)|)`. The localized monotonicity
//! inequality is `⟨v₁ - v₀, x₁ - x₀⟩ ≥ -r |x₁ - x₀|²`.

mod checks;
mod equivalence;
mod localization;
mod sampler;
mod search;

pub use checks::{
    check_monotone_localization, check_para_prox_regular, check_prox_regular,
    check_proximal_subgradient, monotone_on, direct_on, replay_witness,
};
pub use equivalence::{cross_validate_equivalence, ConverseEvidence, EquivalenceReport, ResolventEvidence};
pub use localization::{collect_localization, validate_certificate, Localization};
pub use sampler::{SamplerConfig, DEFAULT_SEED};
pub use search::{search_certificate, SearchOutcome, DEFAULT_EPS_GRID, DEFAULT_R_GRID};

use serde::{Deserialize, Serialize};

/// Relative slack of every inequality check.
pub const CHECK_TOL: f64 = 1e-8;

pub fn check_tolerance(a: f64, b: f64) -> f64 {
    CHECK_TOL * (1.0 + a.abs() + b.abs())
}

/// Claim that the quadratic minorant inequality holds with `(ε, r)` on the
/// f-attentive localization at `(x̄, λ̄, v̄)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParaProxCertificate {
    pub xbar: Vec<f64>,
    pub lambdabar: Vec<f64>,
    pub vbar: Vec<f64>,
    pub eps: f64,
    pub r: f64,
}

/// λ-free certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxCertificate {
    pub xbar: Vec<f64>,
    pub vbar: Vec<f64>,
    pub eps: f64,
    pub r: f64,
}

impl From<ProxCertificate> for ParaProxCertificate {
    fn from(c: ProxCertificate) -> Self {
        Self {
            xbar: c.xbar,
            lambdabar: Vec::new(),
            vbar: c.vbar,
            eps: c.eps,
            r: c.r,
        }
    }
}

impl ParaProxCertificate {
    pub fn new(xbar: Vec<f64>, lambdabar: Vec<f64>, vbar: Vec<f64>, eps: f64, r: f64) -> Self {
        Self {
            xbar,
            lambdabar,
            vbar,
            eps,
            r,
        }
    }

    pub fn with_params(&self, eps: f64, r: f64) -> Self {
        Self {
            eps,
            r,
            ..self.clone()
        }
    }
}

/// One point of the localized subdifferential graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleTuple {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub fval: f64,
    pub lambda: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `f(x', λ) ≥ f(x, λ) + ⟨v, x' - x⟩ - r/2 |x' - x|²`.
    Direct,
    /// `⟨v₁ - v₀, x₁ - x₀⟩ ≥ -r |x₁ - x₀|²` for tuples sharing `λ`.
    Monotone,
    /// `f(x, λ) ≥ f(x̄, λ̄) + ⟨v̄, x - x̄⟩ - r/2 |x - x̄|²`.
    ProximalSubgradient,
}

/// A sampled counterexample. `margin = lhs - rhs < -tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationWitness {
    pub kind: CheckKind,
    pub x_prime: Vec<f64>,
    /// Parameter at which `x_prime` is evaluated (differs from the tuple's
    /// only for proximal-subgradient witnesses).
    pub lambda_prime: Vec<f64>,
    pub tuple: SampleTuple,
    /// Second tuple of a monotonicity witness.
    pub partner: Option<SampleTuple>,
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: CheckKind,
    pub verdict: Verdict,
    pub tuples_checked: usize,
    pub pairs_checked: usize,
    pub violations: usize,
    /// Smallest `lhs - rhs` over all checked pairs (`None` if no pair).
    pub worst_margin: Option<f64>,
    pub witness: Option<ViolationWitness>,
    pub certificate: ParaProxCertificate,
    pub seed: u64,
    pub min_tuples: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}
