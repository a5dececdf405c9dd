//! Sample-level cross-check of the direct and monotone characterizations.

use serde::Serialize;

use super::checks::{direct_on, monotone_on};
use super::localization::{collect_localization, Localization};
use super::{check_tolerance, CheckReport, ParaProxCertificate, SamplerConfig, Verdict};
use crate::error::Result;
use crate::function::ParametrizedOracle;
use crate::linalg::{add, dist, scaled};

/// What the finite sample says about monotone ⇒ direct, which is not
/// sample-exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConverseEvidence {
    Consistent,
    /// Monotone check passed but the direct check did not: the finite
    /// sample cannot decide this direction.
    SampleLimited,
}

/// Single-valuedness of `(∂ₓf + r' I)⁻¹` on the sample, with `r' = r + 1`.
/// Pairs of tuples sharing `λ` whose `z = v + r' x` lie within the lattice
/// spacing `h` are compared: monotonicity of `T + r I` forces
/// `|x₁ - x₀| ≤ |z₁ - z₀| / (r' - r) ≤ h`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolventEvidence {
    pub r_used: f64,
    pub z_tol: f64,
    pub pairs_checked: usize,
    pub max_spread: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub direct: CheckReport,
    pub monotone: CheckReport,
    /// Direct pass ⇒ monotone pass on the shared tuple set.
    pub implication_holds: bool,
    pub converse: ConverseEvidence,
    pub resolvent: ResolventEvidence,
    pub note: String,
}

fn resolvent_evidence(loc: &Localization, r: f64) -> ResolventEvidence {
    let r_used = r + 1.0;
    let z_tol = loc.lattice_spacing;
    let z: Vec<Vec<f64>> = loc
        .tuples
        .iter()
        .map(|t| add(&t.v, &scaled(&t.x, r_used)))
        .collect();
    let mut pairs = 0;
    let mut max_spread: f64 = 0.0;
    let mut consistent = true;
    for i in 0..loc.tuples.len() {
        for j in (i + 1)..loc.tuples.len() {
            let dz = dist(&z[i], &z[j]);
            if loc.index[i].1 != loc.index[j].1 || dz > z_tol {
                continue;
            }
            pairs += 1;
            let dx = dist(&loc.tuples[i].x, &loc.tuples[j].x);
            max_spread = max_spread.max(dx);
            let slack = 2.0 * check_tolerance(loc.tuples[i].fval, loc.tuples[j].fval);
            if dx * dx > dz * dx + slack {
                consistent = false;
            }
        }
    }
    ResolventEvidence {
        r_used,
        z_tol,
        pairs_checked: pairs,
        max_spread,
        consistent,
    }
}

/// Runs both checks on one shared localization.
pub fn cross_validate_equivalence(
    f: &ParametrizedOracle,
    cert: &ParaProxCertificate,
    sampler: &SamplerConfig,
) -> Result<EquivalenceReport> {
    let loc = collect_localization(f, cert, sampler)?;
    let direct = direct_on(&loc, cert.r);
    let monotone = monotone_on(&loc, cert.r);
    let implication_holds = direct.verdict != Verdict::Pass || monotone.verdict == Verdict::Pass;
    let converse = if monotone.verdict == Verdict::Fail || direct.verdict == Verdict::Pass {
        ConverseEvidence::Consistent
    } else {
        ConverseEvidence::SampleLimited
    };
    let note = match (direct.verdict, monotone.verdict) {
        (Verdict::Pass, Verdict::Pass) => "both characterizations pass on the shared sample".to_string(),
        (Verdict::Fail, Verdict::Fail) => "both characterizations fail on the shared sample".to_string(),
        (Verdict::Pass, _) => "direct pass without monotone pass: implication violated".to_string(),
        (_, Verdict::Fail) => "monotone fails; direct check did not fail on the sample".to_string(),
        _ => format!(
            "monotone check {:?} on {} tuple(s) while direct is {:?}; the converse is sample-limited",
            monotone.verdict, monotone.tuples_checked, direct.verdict
        ),
    };
    Ok(EquivalenceReport {
        resolvent: resolvent_evidence(&loc, cert.r),
        direct,
        monotone,
        implication_holds,
        converse,
        note,
    })
}
