//! Piecewise-polynomial functions of one variable, loaded from JSON.
//!
//! ```json
//! {
//!   "id": "kinked",
//!   "breakpoints": [0.0],
//!   "pieces": [[0.0, -1.0], [0.0, 1.0]],
//!   "domain": [-10.0, 10.0],
//!   "tag": "convex"
//! }
//! ```
//!
//! Piece `i` lives between breakpoints `i - 1` and `i`; its coefficients are
//! listed in increasing powers of `x`. The function must be continuous. At a
//! breakpoint the generators are the one-sided derivatives: a segment when
//! `f'₋ ≤ f'₊` (convex kink) and two separate limiting slopes otherwise.

use serde::Deserialize;

use super::oracle::{FunctionOracle, Smoothness};
use super::subdiff::Subdifferential;
use crate::domain::BoxDomain;
use crate::error::{ProxError, Result};
use crate::extreal::ExtReal;

const CONTINUITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseSpec {
    #[serde(default = "default_id")]
    pub id: String,
    #[serde(default)]
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<Vec<f64>>,
    #[serde(default)]
    pub domain: Option<[f64; 2]>,
    #[serde(default)]
    pub tag: Option<Smoothness>,
    /// Convexity is asserted by the author of the spec, never detected.
    #[serde(default)]
    pub convex: bool,
}

fn default_id() -> String {
    "piecewise".to_string()
}

fn field_error(location: impl Into<String>, message: impl Into<String>) -> ProxError {
    ProxError::SpecParse {
        location: location.into(),
        message: message.into(),
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn derivative(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, c)| acc * x + k as f64 * c)
}

impl PiecewiseSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: PiecewiseSpec = serde_json::from_str(text).map_err(|e| {
            field_error(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pieces.len() != self.breakpoints.len() + 1 {
            return Err(field_error(
                "pieces",
                format!(
                    "expected {} pieces for {} breakpoints, found {}",
                    self.breakpoints.len() + 1,
                    self.breakpoints.len(),
                    self.pieces.len()
                ),
            ));
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if p.is_empty() {
                return Err(field_error(format!("pieces[{i}]"), "empty coefficient list"));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(field_error(format!("pieces[{i}]"), "non-finite coefficient"));
            }
        }
        for (i, b) in self.breakpoints.iter().enumerate() {
            if !b.is_finite() {
                return Err(field_error(format!("breakpoints[{i}]"), "non-finite breakpoint"));
            }
            if i > 0 && *b <= self.breakpoints[i - 1] {
                return Err(field_error(
                    format!("breakpoints[{i}]"),
                    "breakpoints must be strictly increasing",
                ));
            }
            let left = horner(&self.pieces[i], *b);
            let right = horner(&self.pieces[i + 1], *b);
            if (left - right).abs() > CONTINUITY_TOL * (1.0 + left.abs().max(right.abs())) {
                return Err(field_error(
                    format!("breakpoints[{i}]"),
                    format!("discontinuous at x = {b}: left value {left}, right value {right}"),
                ));
            }
        }
        if let Some([lo, hi]) = self.domain {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(field_error("domain", "expected [lo, hi] with lo < hi"));
            }
        }
        Ok(())
    }

    fn piece_index(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|b| *b < x)
    }

    /// Value at `x`; at a breakpoint the two adjacent pieces agree.
    pub fn value(&self, x: f64) -> f64 {
        let i = self.piece_index(x);
        let v = horner(&self.pieces[i], x);
        match self.breakpoints.get(i) {
            Some(b) if *b == x => v.min(horner(&self.pieces[i + 1], x)),
            _ => v,
        }
    }

    pub fn subdifferential(&self, x: f64) -> Subdifferential {
        let i = self.piece_index(x);
        match self.breakpoints.get(i) {
            Some(b) if *b == x => {
                let left = derivative(&self.pieces[i], x);
                let right = derivative(&self.pieces[i + 1], x);
                if left == right {
                    Subdifferential::singleton(vec![left])
                } else if left < right {
                    Subdifferential::hull(vec![vec![left], vec![right]])
                } else {
                    Subdifferential::points(vec![vec![right], vec![left]])
                }
            }
            _ => Subdifferential::singleton(vec![derivative(&self.pieces[i], x)]),
        }
    }

    pub fn into_oracle(self) -> Result<FunctionOracle> {
        self.validate()?;
        let [lo, hi] = self.domain.unwrap_or([-10.0, 10.0]);
        let domain = BoxDomain::interval(lo, hi)?;
        let tag = self.tag.unwrap_or(if self.convex {
            Smoothness::Convex
        } else {
            Smoothness::Lsc
        });
        let convex = self.convex;
        let id = self.id.clone();
        let spec = std::sync::Arc::new(self);
        let (s1, s2) = (spec.clone(), spec);
        let f = FunctionOracle::new(id, domain, tag, move |x| ExtReal::Finite(s1.value(x[0])))
            .with_subgradients(move |x| s2.subdifferential(x[0]));
        Ok(if convex { f.convex() } else { f })
    }
}

/// Parses a JSON function spec into an oracle.
pub fn load_piecewise(text: &str) -> Result<FunctionOracle> {
    PiecewiseSpec::from_json(text)?.into_oracle()
}
