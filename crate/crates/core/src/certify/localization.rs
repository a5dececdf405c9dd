//! f-attentive ε-localization of `∂ₓf` around `(x̄, λ̄, v̄)`.

use serde::Serialize;

use super::{ParaProxCertificate, SampleTuple, SamplerConfig};
use crate::error::{ProxError, Result};
use crate::extreal::ExtReal;
use crate::function::ParametrizedOracle;
use crate::linalg::dist;

/// Tolerance for `v̄ ∈ ∂ₓf(x̄, λ̄)`.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Sampled data shared by all checks of one certificate.
#[derive(Debug, Clone, Serialize)]
pub struct Localization {
    pub certificate: ParaProxCertificate,
    pub fbar: f64,
    /// Sampled `x` with `|x - x̄| < ε`.
    pub xs: Vec<Vec<f64>>,
    /// Sampled `λ` with `|λ - λ̄| < ε`.
    pub lambdas: Vec<Vec<f64>>,
    /// `values[l][i] = f(xs[i], lambdas[l])`.
    #[serde(skip)]
    pub values: Vec<Vec<ExtReal>>,
    pub tuples: Vec<SampleTuple>,
    /// `(x index, λ index)` of each tuple.
    #[serde(skip)]
    pub index: Vec<(usize, usize)>,
    pub seed: u64,
    pub min_tuples: usize,
    /// Spacing of the x-lattice of the sampler.
    pub lattice_spacing: f64,
}

pub fn validate_certificate(f: &ParametrizedOracle, cert: &ParaProxCertificate) -> Result<f64> {
    let bad = |msg: String| Err(ProxError::InvalidCertificate(msg));
    if cert.xbar.len() != f.x_dim() || cert.vbar.len() != f.x_dim() {
        return bad(format!("x̄ and v̄ must have dimension {}", f.x_dim()));
    }
    if cert.lambdabar.len() != f.lambda_dim() {
        return bad(format!("λ̄ must have dimension {}", f.lambda_dim()));
    }
    if !(cert.eps > 0.0 && cert.eps.is_finite()) {
        return bad(format!("ε must be positive, got {}", cert.eps));
    }
    if !(cert.r >= 0.0 && cert.r.is_finite()) {
        return bad(format!("r must be nonnegative, got {}", cert.r));
    }
    if !f.x_domain().contains(&cert.xbar) {
        return bad("x̄ lies outside the domain".into());
    }
    if !f.lambda_domain().contains(&cert.lambdabar) {
        return bad("λ̄ lies outside the parameter domain".into());
    }
    let Some(fbar) = f.eval(&cert.xbar, &cert.lambdabar).finite() else {
        return bad("f(x̄, λ̄) = +∞".into());
    };
    let sub = f
        .subdifferential_x(&cert.xbar, &cert.lambdabar)
        .map_err(|e| ProxError::InvalidCertificate(e.to_string()))?;
    let d = sub.distance(&cert.vbar);
    if d > MEMBERSHIP_TOL {
        return bad(format!("v̄ is at distance {d:.3e} from ∂ₓf(x̄, λ̄)"));
    }
    Ok(fbar)
}

/// Every sampled `(x, λ, v)` passing the five localization filters; each
/// sampled element of `∂ₓf(x, λ)` contributes one tuple.
pub fn collect_localization(
    f: &ParametrizedOracle,
    cert: &ParaProxCertificate,
    sampler: &SamplerConfig,
) -> Result<Localization> {
    let fbar = validate_certificate(f, cert)?;
    let eps = cert.eps;
    let xs: Vec<Vec<f64>> = sampler
        .x_samples(&cert.xbar, eps, f.x_domain())
        .into_iter()
        .filter(|x| dist(x, &cert.xbar) < eps)
        .collect();
    let lambdas: Vec<Vec<f64>> = sampler
        .lambda_samples(&cert.lambdabar, eps, f.lambda_domain())
        .into_iter()
        .filter(|l| dist(l, &cert.lambdabar) < eps)
        .collect();
    let values: Vec<Vec<ExtReal>> = lambdas
        .iter()
        .map(|l| xs.iter().map(|x| f.eval(x, l)).collect())
        .collect();
    let mut tuples = Vec::new();
    let mut index = Vec::new();
    for (li, l) in lambdas.iter().enumerate() {
        for (xi, x) in xs.iter().enumerate() {
            let Some(fval) = values[li][xi].finite() else { continue };
            if (fval - fbar).abs() >= eps {
                continue;
            }
            let Ok(sub) = f.subdifferential_x(x, l) else { continue };
            for v in sub.samples(Some(&cert.vbar)) {
                if dist(&v, &cert.vbar) < eps {
                    tuples.push(SampleTuple {
                        x: x.clone(),
                        v,
                        fval,
                        lambda: l.clone(),
                    });
                    index.push((xi, li));
                }
            }
        }
    }
    Ok(Localization {
        certificate: cert.clone(),
        fbar,
        xs,
        lambdas,
        values,
        tuples,
        index,
        seed: sampler.seed,
        min_tuples: sampler.min_tuples,
        lattice_spacing: 2.0 * eps / (sampler.points_per_axis.max(2) - 1) as f64,
    })
}
