//! The three inequality checks and witness replay.

use rayon::prelude::*;

use super::localization::{collect_localization, validate_certificate, Localization};
use super::{
    check_tolerance, CheckKind, CheckReport, ParaProxCertificate, ProxCertificate, SampleTuple,
    SamplerConfig, Verdict, ViolationWitness,
};
use crate::error::{ProxError, Result};
use crate::function::{FunctionOracle, ParametrizedOracle};
use crate::linalg::{dist, dot, sub};

/// Running reduction over checked pairs. Ordering is total (margin, then
/// indices), so the parallel reduction is deterministic.
#[derive(Debug, Clone, Copy)]
struct Tally {
    pairs: usize,
    violations: usize,
    worst: Option<(f64, usize, usize)>,
    witness: Option<(f64, usize, usize)>,
}

impl Tally {
    const EMPTY: Tally = Tally {
        pairs: 0,
        violations: 0,
        worst: None,
        witness: None,
    };

    fn pick(a: Option<(f64, usize, usize)>, b: Option<(f64, usize, usize)>) -> Option<(f64, usize, usize)> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(p), Some(q)) => {
                let ord = p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2));
                Some(if ord.is_le() { p } else { q })
            }
        }
    }

    fn record(&mut self, margin: f64, tol: f64, i: usize, j: usize) {
        self.pairs += 1;
        self.worst = Self::pick(self.worst, Some((margin, i, j)));
        if margin < -tol {
            self.violations += 1;
            self.witness = Self::pick(self.witness, Some((margin, i, j)));
        }
    }

    fn merge(self, other: Tally) -> Tally {
        Tally {
            pairs: self.pairs + other.pairs,
            violations: self.violations + other.violations,
            worst: Self::pick(self.worst, other.worst),
            witness: Self::pick(self.witness, other.witness),
        }
    }
}

fn verdict(tally: &Tally, tuples: usize, min_tuples: usize) -> Verdict {
    if tally.violations > 0 {
        Verdict::Fail
    } else if tuples >= min_tuples {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    }
}

fn direct_margin(fx_prime: f64, t: &SampleTuple, x_prime: &[f64], r: f64) -> (f64, f64, f64) {
    let d = sub(x_prime, &t.x);
    let rhs = t.fval + dot(&t.v, &d) - 0.5 * r * dot(&d, &d);
    (fx_prime, rhs, fx_prime - rhs)
}

fn monotone_margin(t0: &SampleTuple, t1: &SampleTuple, r: f64) -> (f64, f64, f64) {
    let dx = sub(&t1.x, &t0.x);
    let lhs = dot(&sub(&t1.v, &t0.v), &dx);
    let rhs = -r * dot(&dx, &dx);
    (lhs, rhs, lhs - rhs)
}

fn report(
    loc: &Localization,
    kind: CheckKind,
    tuples: usize,
    tally: Tally,
    witness: Option<ViolationWitness>,
) -> CheckReport {
    CheckReport {
        check: kind,
        verdict: verdict(&tally, tuples, loc.min_tuples),
        tuples_checked: tuples,
        pairs_checked: tally.pairs,
        violations: tally.violations,
        worst_margin: tally.worst.map(|w| w.0),
        witness,
        certificate: loc.certificate.clone(),
        seed: loc.seed,
        min_tuples: loc.min_tuples,
    }
}

/// Direct inequality on a precomputed localization with parameter `r`.
pub fn direct_on(loc: &Localization, r: f64) -> CheckReport {
    let tally = loc
        .tuples
        .par_iter()
        .zip(loc.index.par_iter())
        .enumerate()
        .map(|(ti, (t, &(_, li)))| {
            let mut tally = Tally::EMPTY;
            for (j, x_prime) in loc.xs.iter().enumerate() {
                let Some(fp) = loc.values[li][j].finite() else { continue };
                let (_, _, margin) = direct_margin(fp, t, x_prime, r);
                tally.record(margin, check_tolerance(t.fval, fp), ti, j);
            }
            tally
        })
        .reduce(|| Tally::EMPTY, Tally::merge);
    let witness = tally.witness.map(|(_, ti, j)| {
        let t = &loc.tuples[ti];
        let fp = loc.values[loc.index[ti].1][j].to_f64();
        let (lhs, rhs, margin) = direct_margin(fp, t, &loc.xs[j], r);
        ViolationWitness {
            kind: CheckKind::Direct,
            x_prime: loc.xs[j].clone(),
            lambda_prime: t.lambda.clone(),
            tuple: t.clone(),
            partner: None,
            r,
            lhs,
            rhs,
            margin,
            tolerance: check_tolerance(t.fval, fp),
        }
    });
    let mut out = report(loc, CheckKind::Direct, loc.tuples.len(), tally, witness);
    out.certificate.r = r;
    out
}

/// Pairwise monotonicity of `T_λ + r I` on a precomputed localization.
pub fn monotone_on(loc: &Localization, r: f64) -> CheckReport {
    let n = loc.tuples.len();
    let tally = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut tally = Tally::EMPTY;
            let (t0, li) = (&loc.tuples[i], loc.index[i].1);
            for j in (i + 1)..n {
                if loc.index[j].1 != li {
                    continue;
                }
                let t1 = &loc.tuples[j];
                let (_, _, margin) = monotone_margin(t0, t1, r);
                tally.record(margin, 2.0 * check_tolerance(t0.fval, t1.fval), i, j);
            }
            tally
        })
        .reduce(|| Tally::EMPTY, Tally::merge);
    let witness = tally.witness.map(|(_, i, j)| {
        let (t0, t1) = (&loc.tuples[i], &loc.tuples[j]);
        let (lhs, rhs, margin) = monotone_margin(t0, t1, r);
        ViolationWitness {
            kind: CheckKind::Monotone,
            x_prime: t1.x.clone(),
            lambda_prime: t1.lambda.clone(),
            tuple: t0.clone(),
            partner: Some(t1.clone()),
            r,
            lhs,
            rhs,
            margin,
            tolerance: 2.0 * check_tolerance(t0.fval, t1.fval),
        }
    });
    let mut out = report(loc, CheckKind::Monotone, n, tally, witness);
    out.certificate.r = r;
    out
}

/// Checks `f(x', λ) ≥ f(x, λ) + ⟨v, x' - x⟩ - r/2 |x' - x|²` for every
/// localized tuple and every sampled `x'` with `|x' - x̄| < ε`.
pub fn check_para_prox_regular(
    f: &ParametrizedOracle,
    cert: &ParaProxCertificate,
    sampler: &SamplerConfig,
) -> Result<CheckReport> {
    Ok(direct_on(&collect_localization(f, cert, sampler)?, cert.r))
}

/// λ-free specialization (strict form checked non-strictly).
pub fn check_prox_regular(
    f: &FunctionOracle,
    cert: &ProxCertificate,
    sampler: &SamplerConfig,
) -> Result<CheckReport> {
    let p = ParametrizedOracle::from_function(f);
    check_para_prox_regular(&p, &cert.clone().into(), sampler)
}

/// Checks `⟨v₁ - v₀, x₁ - x₀⟩ ≥ -r |x₁ - x₀|²` over tuple pairs sharing `λ`.
pub fn check_monotone_localization(
    f: &ParametrizedOracle,
    cert: &ParaProxCertificate,
    sampler: &SamplerConfig,
) -> Result<CheckReport> {
    Ok(monotone_on(&collect_localization(f, cert, sampler)?, cert.r))
}

/// Single base point minorant
/// `f(x, λ) ≥ f(x̄, λ̄) + ⟨v̄, x - x̄⟩ - r/2 |x - x̄|²` over sampled
/// `|x - x̄| < ε`, `|λ - λ̄| < ε`.
pub fn check_proximal_subgradient(
    f: &ParametrizedOracle,
    cert: &ParaProxCertificate,
    sampler: &SamplerConfig,
) -> Result<CheckReport> {
    let fbar = validate_certificate(f, cert)?;
    let base = SampleTuple {
        x: cert.xbar.clone(),
        v: cert.vbar.clone(),
        fval: fbar,
        lambda: cert.lambdabar.clone(),
    };
    let xs: Vec<Vec<f64>> = sampler
        .x_samples(&cert.xbar, cert.eps, f.x_domain())
        .into_iter()
        .filter(|x| dist(x, &cert.xbar) < cert.eps)
        .collect();
    let lambdas: Vec<Vec<f64>> = sampler
        .lambda_samples(&cert.lambdabar, cert.eps, f.lambda_domain())
        .into_iter()
        .filter(|l| dist(l, &cert.lambdabar) < cert.eps)
        .collect();
    let evaluated: Vec<(usize, usize, f64)> = lambdas
        .par_iter()
        .enumerate()
        .flat_map_iter(|(li, l)| {
            xs.iter()
                .enumerate()
                .filter_map(move |(xi, x)| f.eval(x, l).finite().map(|v| (li, xi, v)))
        })
        .collect();
    let mut tally = Tally::EMPTY;
    for &(li, xi, fx) in &evaluated {
        let (_, _, margin) = direct_margin(fx, &base, &xs[xi], cert.r);
        tally.record(margin, check_tolerance(fbar, fx), li, xi);
    }
    let witness = tally.witness.map(|(_, li, xi)| {
        let fx = f.eval(&xs[xi], &lambdas[li]).to_f64();
        let (lhs, rhs, margin) = direct_margin(fx, &base, &xs[xi], cert.r);
        ViolationWitness {
            kind: CheckKind::ProximalSubgradient,
            x_prime: xs[xi].clone(),
            lambda_prime: lambdas[li].clone(),
            tuple: base.clone(),
            partner: None,
            r: cert.r,
            lhs,
            rhs,
            margin,
            tolerance: check_tolerance(fbar, fx),
        }
    });
    Ok(CheckReport {
        check: CheckKind::ProximalSubgradient,
        verdict: verdict(&tally, evaluated.len(), sampler.min_tuples),
        tuples_checked: evaluated.len(),
        pairs_checked: tally.pairs,
        violations: tally.violations,
        worst_margin: tally.worst.map(|w| w.0),
        witness,
        certificate: cert.clone(),
        seed: sampler.seed,
        min_tuples: sampler.min_tuples,
    })
}

/// Recomputes a witness margin from fresh oracle calls. The stored tuple
/// data must still be consistent with `f`: its value is re-evaluated and
/// its subgradient must belong to `∂ₓf`.
pub fn replay_witness(f: &ParametrizedOracle, w: &ViolationWitness) -> Result<f64> {
    let fresh = |t: &SampleTuple| -> Result<SampleTuple> {
        let fval = f
            .eval(&t.x, &t.lambda)
            .finite()
            .ok_or(ProxError::EvalInfinite)?;
        let sub = f.subdifferential_x(&t.x, &t.lambda)?;
        if sub.distance(&t.v) > 1e-9 {
            return Err(ProxError::InvalidCertificate(
                "witness subgradient is not in the subdifferential".into(),
            ));
        }
        Ok(SampleTuple { fval, ..t.clone() })
    };
    let t = fresh(&w.tuple)?;
    Ok(match w.kind {
        CheckKind::Direct | CheckKind::ProximalSubgradient => {
            let fp = f
                .eval(&w.x_prime, &w.lambda_prime)
                .finite()
                .ok_or(ProxError::EvalInfinite)?;
            direct_margin(fp, &t, &w.x_prime, w.r).2
        }
        CheckKind::Monotone => {
            let partner = w.partner.as_ref().ok_or_else(|| {
                ProxError::InvalidArgument("monotonicity witness without partner tuple".into())
            })?;
            monotone_margin(&t, &fresh(partner)?, w.r).2
        }
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::catalog;

    fn cert(x: f64, l: f64, v: f64, eps: f64, r: f64) -> ParaProxCertificate {
        ParaProxCertificate::new(vec![x], vec![l], vec![v], eps, r)
    }

    #[test]
    fn lambda_abs_passes_at_positive_lambda() {
        let f = catalog::parametrized("lambda_abs").unwrap();
        let rep = check_para_prox_regular(&f, &cert(0.0, 1.0, 0.0, 0.5, 0.0), &SamplerConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.tuples_checked >= 8);
        assert!(rep.worst_margin.unwrap() >= -1e-8);
    }

    #[test]
    fn lambda_abs_fails_at_negative_lambda() {
        let f = catalog::parametrized("lambda_abs").unwrap();
        for r in [1.0, 10.0, 100.0, 1e4] {
            let rep = check_para_prox_regular(&f, &cert(0.0, -1.0, 1.0, 0.5, r), &SamplerConfig::default()).unwrap();
            assert_eq!(rep.verdict, Verdict::Fail, "r = {r}");
            let w = rep.witness.unwrap();
            assert!(w.margin < -w.tolerance);
            assert!((replay_witness(&f, &w).unwrap() - w.margin).abs() <= 1e-12);
            let t = dist(&w.x_prime, &w.tuple.x);
            assert!(t < 4.0 / r, "witness step {t} at r = {r}");
        }
    }

    #[test]
    fn prox_regular_examples() {
        let s = SamplerConfig::default();
        let abs = catalog::function("abs").unwrap();
        let pc = |v, eps, r| ProxCertificate { xbar: vec![0.0], vbar: vec![v], eps, r };
        assert_eq!(check_prox_regular(&abs, &pc(0.0, 0.25, 0.0), &s).unwrap().verdict, Verdict::Pass);
        let neg = catalog::function("neg_abs").unwrap();
        for r in [1.0, 100.0, 1e4] {
            assert_eq!(check_prox_regular(&neg, &pc(1.0, 0.5, r), &s).unwrap().verdict, Verdict::Fail);
        }
        // x²/2 - |x| has a concave kink at 0: pairs straddling it violate
        // the inequality for every r.
        let qma = catalog::function("quad_minus_abs").unwrap();
        let rep = check_prox_regular(&qma, &pc(1.0, 0.5, 1.5), &s).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        assert!(rep.witness.unwrap().x_prime[0] > 0.0);
        // |x| - x²/2 is lower-C² with modulus 1.
        let amq = catalog::function("abs_minus_quad").unwrap();
        assert_eq!(check_prox_regular(&amq, &pc(1.0, 0.5, 1.0), &s).unwrap().verdict, Verdict::Pass);
        assert_eq!(check_prox_regular(&amq, &pc(1.0, 0.5, 0.5), &s).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn monotone_examples() {
        let s = SamplerConfig::default();
        let f = catalog::parametrized("lambda_abs").unwrap();
        assert_eq!(check_monotone_localization(&f, &cert(0.0, 1.0, 0.0, 0.5, 0.0), &s).unwrap().verdict, Verdict::Pass);
        let g = catalog::parametrized("lambda_neg_abs").unwrap();
        let rep = check_monotone_localization(&g, &cert(0.0, 1.0, 1.0, 1.5, 10.0), &s).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        let w = rep.witness.unwrap();
        let p = w.partner.clone().unwrap();
        assert!(w.tuple.v[0] != p.v[0]);
        assert!((replay_witness(&g, &w).unwrap() - w.margin).abs() <= 1e-12);
    }

    #[test]
    fn single_tuple_monotone_is_inconclusive() {
        let f = catalog::parametrized("abs").unwrap();
        let rep = check_monotone_localization(&f, &ParaProxCertificate::new(vec![0.0], vec![], vec![0.0], 1e-12, 0.0), &SamplerConfig::default()).unwrap();
        assert_eq!(rep.tuples_checked, 1);
        assert_eq!(rep.pairs_checked, 0);
        assert_eq!(rep.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn proximal_subgradient_examples() {
        let s = SamplerConfig::default();
        let q = catalog::parametrized("quad").unwrap();
        let c0 = ParaProxCertificate::new(vec![0.0], vec![], vec![0.0], 0.5, 0.0);
        assert_eq!(check_proximal_subgradient(&q, &c0, &s).unwrap().verdict, Verdict::Pass);
        let n = catalog::parametrized("neg_abs").unwrap();
        let c1 = ParaProxCertificate::new(vec![0.0], vec![], vec![1.0], 0.5, 1.0);
        let rep = check_proximal_subgradient(&n, &c1, &s).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        assert!(rep.witness.as_ref().unwrap().x_prime[0] > 0.0);
        assert!((replay_witness(&n, rep.witness.as_ref().unwrap()).unwrap() - rep.witness.unwrap().margin).abs() <= 1e-12);
    }

    /// With `λ` varying, `λ|x| ≥ t - r/2 t²` at `x = t > 0` needs `λ ≥ 1 - r t / 2`,
    /// which fails for `λ < 1` and small `t`. On the slice `λ = 1` it holds.
    #[test]
    fn proximal_subgradient_of_lambda_abs_depends_on_lambda_neighbourhood() {
        let f = catalog::parametrized("lambda_abs").unwrap();
        let c = cert(0.0, 1.0, 1.0, 0.5, 1.0);
        let varying = check_proximal_subgradient(&f, &c, &SamplerConfig::default()).unwrap();
        assert_eq!(varying.verdict, Verdict::Fail);
        assert!(varying.witness.unwrap().lambda_prime[0] < 1.0);
        let frozen = check_proximal_subgradient(&f, &c, &SamplerConfig::default().frozen()).unwrap();
        assert_eq!(frozen.verdict, Verdict::Pass);
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let f = catalog::parametrized("lambda_abs").unwrap();
        let rep = check_para_prox_regular(&f, &cert(0.0, -1.0, 1.0, 0.5, 1.0), &SamplerConfig::default()).unwrap();
        let mut w = rep.witness.unwrap();
        w.tuple.v = vec![5.0];
        assert!(replay_witness(&f, &w).is_err());
    }
}
