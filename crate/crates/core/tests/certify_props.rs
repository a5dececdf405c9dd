use proptest::prelude::*;
use proxkit::certify::{
    check_para_prox_regular, check_monotone_localization, replay_witness, CheckReport,
    ParaProxCertificate, SamplerConfig, Verdict,
};
use proxkit::function::{build_tilt_shift, catalog, ParametrizedOracle};

fn lattice_sampler(seed: u64) -> SamplerConfig {
    SamplerConfig { low_discrepancy: 64, ..SamplerConfig::default().with_seed(seed).with_points(11) }
}

fn base_subgradient(f: &ParametrizedOracle, x: f64) -> Vec<f64> {
    f.subdifferential_x(&[x], &[]).unwrap().generators()[0].clone()
}

fn check(f: &ParametrizedOracle, x: f64, eps: f64, r: f64, s: &SamplerConfig) -> CheckReport {
    let v = base_subgradient(f, x);
    let cert = ParaProxCertificate::new(vec![x], vec![], v, eps, r);
    check_para_prox_regular(f, &cert, s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn passing_certificates_stay_valid_for_larger_r(
        id in prop::sample::select(vec!["abs", "abs_minus_quad", "poly_nc", "sine", "neg_quad"]),
        x in -1.5f64..1.5,
        extra in 0.0f64..10.0,
    ) {
        let e = catalog::entry(id).unwrap();
        let f = e.oracle.as_parametrized();
        let r = e.properties.global_r.unwrap();
        let s = lattice_sampler(7);
        let a = check(&f, x, 0.3, r, &s);
        prop_assert_eq!(a.verdict, Verdict::Pass);
        let b = check(&f, x, 0.3, r + extra, &s);
        prop_assert_eq!(b.verdict, Verdict::Pass);
        prop_assert!(b.worst_margin.unwrap() >= a.worst_margin.unwrap() - 1e-12);
    }

    #[test]
    fn direct_pass_implies_monotone_pass(
        id in prop::sample::select(vec!["abs", "huberizable", "abs_minus_quad", "poly_nc", "sine"]),
        x in -1.0f64..1.0,
        eps in 0.1f64..1.0,
    ) {
        let e = catalog::entry(id).unwrap();
        let f = e.oracle.as_parametrized();
        let s = lattice_sampler(11);
        let r = e.properties.global_r.unwrap();
        let v = base_subgradient(&f, x);
        let cert = ParaProxCertificate::new(vec![x], vec![], v, eps, r);
        let d = check_para_prox_regular(&f, &cert, &s).unwrap();
        let m = check_monotone_localization(&f, &cert, &s).unwrap();
        prop_assert_eq!(d.verdict, Verdict::Pass);
        prop_assert_eq!(m.verdict, Verdict::Pass);
    }

    #[test]
    fn witnesses_replay_exactly(r in 1.0f64..1e4, seed in 0u64..1000) {
        let f = catalog::parametrized("neg_abs").unwrap();
        let cert = ParaProxCertificate::new(vec![0.0], vec![], vec![1.0], 0.5, r);
        let rep = check_para_prox_regular(&f, &cert, &lattice_sampler(seed)).unwrap();
        prop_assert_eq!(rep.verdict, Verdict::Fail);
        let w = rep.witness.unwrap();
        prop_assert!((replay_witness(&f, &w).unwrap() - w.margin).abs() <= 1e-12);
    }

    #[test]
    fn tilt_shift_values_and_subgradients(
        id in prop::sample::select(vec!["abs", "poly_nc", "neg_abs", "sine"]),
        shift in -2.0f64..2.0,
        tilt in -2.0f64..2.0,
        u in -3.0f64..3.0,
    ) {
        let f = catalog::parametrized(id).unwrap();
        let g = build_tilt_shift(&f, &[shift], &[tilt]).unwrap();
        let lhs = g.eval(&[u + shift], &[]).to_f64() - f.eval(&[u], &[]).to_f64();
        prop_assert!((lhs + tilt * u).abs() <= 1e-12 * (1.0 + u.abs()) * (1.0 + tilt.abs()));
        let df = f.subdifferential_x(&[u], &[]).unwrap().generators();
        let dg = g.subdifferential_x(&[u + shift], &[]).unwrap().generators();
        prop_assert_eq!(df.len(), dg.len());
        for (a, b) in df.iter().zip(&dg) {
            prop_assert!((a[0] - tilt - b[0]).abs() <= 1e-12);
        }
    }
}

#[test]
fn reports_are_deterministic_for_a_seed() {
    let f = catalog::parametrized("lambda_abs").unwrap();
    let cert = ParaProxCertificate::new(vec![0.0], vec![1.0], vec![0.0], 0.5, 0.0);
    let s = SamplerConfig::default().with_seed(99);
    let a = serde_json::to_string(&check_para_prox_regular(&f, &cert, &s).unwrap()).unwrap();
    let b = serde_json::to_string(&check_para_prox_regular(&f, &cert, &s).unwrap()).unwrap();
    assert_eq!(a, b);
    let other = check_para_prox_regular(&f, &cert, &s.with_seed(100)).unwrap();
    assert_eq!(other.verdict, Verdict::Pass);
    assert_eq!(other.seed, 100);
}

#[test]
fn invalid_base_subgradient_is_rejected() {
    let f = catalog::parametrized("abs").unwrap();
    let cert = ParaProxCertificate::new(vec![0.0], vec![], vec![2.0], 0.5, 0.0);
    assert!(check_para_prox_regular(&f, &cert, &SamplerConfig::default()).is_err());
}
