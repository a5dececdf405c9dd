//! Grid search for `(ε, r)` certificates.

use serde::Serialize;

use super::checks::{direct_on, monotone_on};
use super::localization::collect_localization;
use super::{CheckReport, ParaProxCertificate, SamplerConfig};
use crate::error::Result;
use crate::function::ParametrizedOracle;

pub const DEFAULT_EPS_GRID: [f64; 7] = [1.0, 0.5, 0.25, 0.1, 0.05, 0.01, 0.001];
pub const DEFAULT_R_GRID: [f64; 13] = [
    0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 1000.0, 5000.0, 10_000.0,
];

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found {
        certificate: ParaProxCertificate,
        direct: Box<CheckReport>,
        monotone: Box<CheckReport>,
    },
    NotFound {
        eps_tried: Vec<f64>,
        r_tried: Vec<f64>,
    },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&ParaProxCertificate> {
        match self {
            SearchOutcome::Found { certificate, .. } => Some(certificate),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

/// Largest `ε` (then smallest `r`) for which both the direct and the
/// monotone checks pass. The localization is sampled once per `ε`.
pub fn search_certificate(
    f: &ParametrizedOracle,
    xbar: &[f64],
    lambdabar: &[f64],
    vbar: &[f64],
    sampler: &SamplerConfig,
    eps_grid: &[f64],
    r_grid: &[f64],
) -> Result<SearchOutcome> {
    let mut eps: Vec<f64> = eps_grid.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    eps.dedup();
    let mut rs: Vec<f64> = r_grid.to_vec();
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    for &e in &eps {
        let base = ParaProxCertificate::new(xbar.to_vec(), lambdabar.to_vec(), vbar.to_vec(), e, 0.0);
        let loc = collect_localization(f, &base, sampler)?;
        for &r in &rs {
            let direct = direct_on(&loc, r);
            if !direct.passed() {
                continue;
            }
            let monotone = monotone_on(&loc, r);
            if monotone.passed() {
                return Ok(SearchOutcome::Found {
                    certificate: base.with_params(e, r),
                    direct: Box::new(direct),
                    monotone: Box::new(monotone),
                });
            }
        }
    }
    Ok(SearchOutcome::NotFound {
        eps_tried: eps,
        r_tried: rs,
    })
}
