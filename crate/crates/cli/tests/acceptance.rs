//! Acceptance run: one PASS/FAIL line per criterion.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use proxkit::calculus::{
    amenable_params, estimate_amenable_constants, para_max_params, para_max_params_for, para_sum_params,
    scalar_mult_para_params, scalar_mult_params, sum_params, weighted_sum_params, AmenableConstants,
    EstimateConfig, PRParams,
};
use proxkit::certify::{
    check_monotone_localization, check_para_prox_regular, collect_localization, direct_on, monotone_on,
    replay_witness, search_certificate, CheckReport, ParaProxCertificate, SamplerConfig, SearchOutcome,
    Verdict, DEFAULT_EPS_GRID, DEFAULT_R_GRID,
};
use proxkit::envelope::{
    lambda_lipschitz_estimate, lipschitz_mix_prox, moreau_envelope, ConvexPa, EnvelopePa, NcPa,
};
use proxkit::function::catalog::{self, CatalogEntry};
use proxkit::function::{
    build_diagonal_sum, build_weighted_max, build_weighted_sum, shift_to_origin, FunctionOracle,
    ParametrizedOracle, SmoothMap,
};
use proxkit::{BoxDomain, Grid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
/// (function, x̄, λ̄, v̄).
type Instance = (ParametrizedOracle, Vec<f64>, Vec<f64>, Vec<f64>);
/// (id, x̄, v̄, λ̄, ε, r).
type ShiftCase = (&'static str, f64, f64, Vec<f64>, f64, f64);
type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn proxkit(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_proxkit"))
        .args(args)
        .env_remove("PROXKIT_SEED")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn scaled_abs_example(dir: &Path) -> Outcome {
    let start = Instant::now();
    let (code, _) = proxkit(&["check", "--function", "lambda_abs", "--xbar", "0", "--lambdabar", "1", "--vbar", "0", "--eps", "0.5", "--r", "0"]);
    ensure(code == 0, || format!("pass case exited {code}"))?;
    within(Duration::from_secs(5), start, "pass case")?;
    let mut margins = Vec::new();
    for r in ["1", "10", "100", "10000"] {
        let start = Instant::now();
        let report = dir.join(format!("fail-{r}.json"));
        let path = report.to_str().unwrap();
        let args = ["check", "--function", "lambda_abs", "--xbar", "0", "--lambdabar", "-1", "--vbar", "1", "--eps", "0.5", "--r", r, "--output", path];
        let (code, _) = proxkit(&args);
        ensure(code == 1, || format!("r = {r}: exited {code}"))?;
        within(Duration::from_secs(5), start, &format!("r = {r}"))?;
        let first = std::fs::read(&report).map_err(err)?;
        proxkit(&args);
        ensure(first == std::fs::read(&report).map_err(err)?, || format!("r = {r}: report not byte-identical on rerun"))?;
        let (code, replay) = proxkit(&["check", "--function", "lambda_abs", "--replay-witness", path]);
        ensure(code == 0, || format!("r = {r}: replay exited {code}"))?;
        let replay: serde_json::Value = serde_json::from_str(&replay).map_err(err)?;
        margins.push(replay["replayed_margin"].as_f64().unwrap_or(f64::NAN));
    }
    Ok(format!("pass at λ̄=1; witnesses replayed at λ̄=-1 with margins {margins:.3?}"))
}

fn base_subgradient(f: &ParametrizedOracle, x: &[f64], l: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let samples = f.subdifferential_x(x, l).expect("finite base point").samples(None);
    samples[rng.gen_range(0..samples.len())].clone()
}

fn random_in(b: &BoxDomain, cap: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..b.dim())
        .map(|a| {
            let lo = b.lower()[a].max(-cap);
            let hi = b.upper()[a].min(cap);
            lo + (hi - lo) * rng.gen::<f64>()
        })
        .collect()
}

fn convexity_gives_zero_r() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let convex: Vec<CatalogEntry> = catalog::entries().into_iter().filter(|e| e.properties.convex).collect();
    let mut runs = 0;
    for e in &convex {
        let f = e.oracle.as_parametrized();
        let mut done = 0;
        while done < 10 {
            let x = random_in(f.x_domain(), 2.0, &mut rng);
            let l = random_in(f.lambda_domain(), 3.0, &mut rng);
            if !f.eval(&x, &l).is_finite() {
                continue;
            }
            let v = base_subgradient(&f, &x, &l, &mut rng);
            let eps = rng.gen_range(0.1..1.0);
            let cert = ParaProxCertificate::new(x, l, v, eps, 0.0);
            let rep = check_para_prox_regular(&f, &cert, &SamplerConfig::default()).map_err(err)?;
            ensure(rep.passed(), || format!("{} at {:?}: {:?} worst {:?}", e.id, cert, rep.verdict, rep.worst_margin))?;
            done += 1;
            runs += 1;
        }
    }
    within(Duration::from_secs(30), start, "convex sweep")?;
    Ok(format!("{} convex entries × 10 base points = {runs} passes", convex.len()))
}

fn envelope_golden() -> Outcome {
    let g = Grid::interval(-4.0, 4.0, 4001).map_err(err)?;
    let quad = catalog::function("quad").map_err(err)?;
    let abs = catalog::function("abs").map_err(err)?;
    let cases = [(&quad, 2.0, 1.0), (&abs, 2.0, 1.5), (&abs, 0.5, 0.125)];
    for (f, x, want) in cases {
        let got = moreau_envelope(f, 1.0, &[x], &g).map_err(err)?.value.to_f64();
        ensure((got - want).abs() <= 1e-3, || format!("e_1 {}({x}) = {got}, want {want}", f.id()))?;
    }
    let p = moreau_envelope(&abs, 1.0, &[2.0], &g).map_err(err)?.argmin;
    let h = g.spacing(0);
    ensure(!p.is_empty() && p.iter().all(|y| (y[0] - 1.0).abs() <= h), || format!("P_1 abs(2) = {p:?}"))?;
    Ok("e_1 values and P_1 |x|(2) within tolerance".into())
}

fn pa_agreement() -> Outcome {
    let start = Instant::now();
    let g = Grid::interval(-2.0, 2.0, 401).map_err(err)?;
    let f = |id| catalog::function(id).map_err(err);
    let interior: Vec<Vec<f64>> = (1..g.len() - 1).map(|i| g.node(i)).collect();
    let mut worst: f64 = 0.0;
    for (a, b) in [("quad", "abs"), ("quad", "quad"), ("abs", "abs")] {
        let (f0, f1) = (f(a)?, f(b)?);
        for lambda in [0.25, 0.5, 0.75] {
            let conj = ConvexPa::new(&f0, &f1, lambda, &g).map_err(err)?;
            let env = EnvelopePa::new(&f0, &f1, lambda, &g).map_err(err)?;
            for x in &interior {
                let d = (conj.eval(x) - env.eval(x)).abs();
                worst = worst.max(d);
                ensure(d <= 1e-3, || format!("({a}, {b}) λ={lambda} x={}: routes differ by {d}", x[0]))?;
            }
        }
    }
    for id in ["quad", "abs", "huberizable"] {
        let h = f(id)?;
        for lambda in [0.0, 0.3, 1.0] {
            let conj = ConvexPa::new(&h, &h, lambda, &g).map_err(err)?;
            let env = EnvelopePa::new(&h, &h, lambda, &g).map_err(err)?;
            for x in &interior {
                let want = h.eval(x).to_f64();
                ensure((conj.eval(x) - want).abs() <= 1e-3 && (env.eval(x) - want).abs() <= 1e-3, || {
                    format!("self-average of {id} at λ={lambda}, x={}", x[0])
                })?;
            }
        }
    }
    for (a, b) in [("quad", "abs"), ("abs", "huberizable")] {
        let (f0, f1) = (f(a)?, f(b)?);
        for (lambda, target) in [(0.0, &f0), (1.0, &f1)] {
            let conj = ConvexPa::new(&f0, &f1, lambda, &g).map_err(err)?;
            let env = EnvelopePa::new(&f0, &f1, lambda, &g).map_err(err)?;
            for x in &interior {
                let want = target.eval(x).to_f64();
                ensure((conj.eval(x) - want).abs() <= 1e-3 && (env.eval(x) - want).abs() <= 1e-3, || {
                    format!("endpoint λ={lambda} of ({a}, {b}) at x={}", x[0])
                })?;
            }
        }
    }
    within(Duration::from_secs(60), start, "PA agreement")?;
    Ok(format!("max route gap {worst:.2e}; self-average and endpoints recovered"))
}

fn nc_pa_sanity() -> Outcome {
    let f0 = catalog::function("quad").map_err(err)?;
    let f1 = catalog::function("quad_minus_abs").map_err(err)?;
    let g = Grid::interval(-2.0, 2.0, 401).map_err(err)?;
    let pa = NcPa::new(&f0, &f1, 4.0, &g).map_err(err)?;
    let lambdas: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    for &l in &lambdas {
        for i in 0..g.len() {
            let v = pa.eval(&g.node(i), l);
            ensure(v.is_finite(), || format!("NC-PA is {v} at x={}, λ={l}", g.node(i)[0]))?;
        }
    }
    let xs: Vec<Vec<f64>> = (0..g.len()).step_by(8).map(|i| g.node(i)).collect();
    let fine: Vec<f64> = (0..=80).map(|k| 0.1 + 0.01 * k as f64).collect();
    let lip = lambda_lipschitz_estimate(&pa, &xs, &fine);
    ensure(lip.is_finite(), || "λ-Lipschitz estimate is not finite".into())?;
    // P_r f₁ jumps at 0, so the mixed prox is only Lipschitz away from it.
    let window = Grid::interval(0.1, 0.9, 81).map_err(err)?;
    let mut mix: f64 = 0.0;
    for &l in &lambdas {
        mix = mix.max(lipschitz_mix_prox(&f0, &f1, 4.0, l, &window).map_err(err)?);
    }
    ensure(mix < 1.0 + 1e-6, || format!("mixed prox Lipschitz estimate {mix}"))?;
    let oracle = pa.into_oracle();
    let v = oracle.subdifferential_x(&[0.5], &[0.5]).map_err(err)?.generators()[0].clone();
    let found = search_certificate(&oracle, &[0.5], &[0.5], &v, &SamplerConfig::default(), &DEFAULT_EPS_GRID, &DEFAULT_R_GRID)
        .map_err(err)?;
    let cert = found.certificate().ok_or("search found no certificate at (0.5, 0.5)")?;
    Ok(format!("λ-Lipschitz ≈ {lip:.3}, mixed prox ≈ {mix:.3}, certificate ε={} r={}", cert.eps, cert.r))
}

/// Catalog instances for the direct ⇒ monotone sweep.
fn instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for e in catalog::entries() {
        let f = e.oracle.as_parametrized();
        if f.x_dim() != 1 {
            continue;
        }
        let lambdas: Vec<Vec<f64>> = match f.lambda_dim() {
            0 => vec![vec![]],
            m => vec![vec![0.5; m], vec![1.5; m]],
        };
        for l in &lambdas {
            for x in [-1.2, -0.3, 0.0, 0.6] {
                if !f.eval(&[x], l).is_finite() {
                    continue;
                }
                for v in f.subdifferential_x(&[x], l).expect("finite point").generators() {
                    out.push((f.clone(), vec![x], l.clone(), v));
                }
            }
        }
    }
    out
}

fn direct_implies_monotone() -> Outcome {
    let sampler = SamplerConfig::default();
    let (mut certified, mut exceptions) = (0, Vec::new());
    for (f, x, l, v) in instances() {
        'search: for &eps in &DEFAULT_EPS_GRID {
            let loc = collect_localization(&f, &ParaProxCertificate::new(x.clone(), l.clone(), v.clone(), eps, 0.0), &sampler)
                .map_err(err)?;
            for &r in &DEFAULT_R_GRID {
                if direct_on(&loc, r).passed() {
                    certified += 1;
                    if !monotone_on(&loc, r).passed() {
                        exceptions.push(format!("{} at x={x:?} λ={l:?} v={v:?} (ε={eps}, r={r})", f.id()));
                    }
                    // Independent re-run through the public entry point.
                    let cert = ParaProxCertificate::new(x.clone(), l.clone(), v.clone(), eps, r);
                    if !check_monotone_localization(&f, &cert, &sampler).map_err(err)?.passed() {
                        exceptions.push(format!("{} rerun at {cert:?}", f.id()));
                    }
                    break 'search;
                }
            }
        }
    }
    ensure(certified >= 20, || format!("only {certified} certified instances"))?;
    ensure(exceptions.is_empty(), || format!("{} exceptions: {:?}", exceptions.len(), exceptions))?;
    Ok(format!("{certified} certified instances, monotone check passed on all"))
}

fn tilt_shift_invariance() -> Outcome {
    let cases: Vec<ShiftCase> = vec![
        ("sine", 0.3, 0.3f64.cos(), vec![], 0.25, 1.0),
        ("sine", 1.0, 1.0f64.cos(), vec![], 0.25, 1.0),
        ("sine", -0.7, (-0.7f64).cos(), vec![], 0.25, 1.0),
        ("sine", 2.0, 2.0f64.cos(), vec![], 0.25, 0.0),
        ("huberizable", 0.5, 0.5, vec![], 0.25, 0.0),
        ("huberizable", 2.0, 1.0, vec![], 0.25, 0.0),
        ("huberizable", -1.5, -1.0, vec![], 0.25, 0.0),
        ("poly_nc", 0.0, 0.0, vec![], 0.25, 2.0),
        ("poly_nc", 0.5, -0.875, vec![], 0.1, 2.0),
        ("poly_nc", 0.5, -0.875, vec![], 0.1, 0.5),
        ("abs_minus_quad", 0.5, 0.5, vec![], 0.25, 1.0),
        ("lambda_abs", 0.0, 0.2, vec![0.5], 0.25, 0.0),
        ("lambda_abs", 0.0, -0.25, vec![0.5], 0.25, 0.0),
    ];
    let sampler = SamplerConfig::default();
    let mut worst: f64 = 0.0;
    for (id, x, v, l, eps, r) in &cases {
        let f = catalog::parametrized(id).map_err(err)?;
        let a = check_para_prox_regular(&f, &ParaProxCertificate::new(vec![*x], l.clone(), vec![*v], *eps, *r), &sampler)
            .map_err(err)?;
        let g = shift_to_origin(&f, &[*x], &[*v]).map_err(err)?;
        let b = check_para_prox_regular(&g, &ParaProxCertificate::new(vec![0.0], l.clone(), vec![0.0], *eps, *r), &sampler)
            .map_err(err)?;
        let gap = match (a.worst_margin, b.worst_margin) {
            (Some(p), Some(q)) => (p - q).abs(),
            _ => f64::INFINITY,
        };
        worst = worst.max(gap);
        ensure(a.verdict == b.verdict && gap <= 1e-9, || {
            format!("{id} at x̄={x}, v̄={v}: {:?}/{:?}, margins {:?} vs {:?}", a.verdict, b.verdict, a.worst_margin, b.worst_margin)
        })?;
    }
    Ok(format!("{} instances, max margin gap {worst:.1e}", cases.len()))
}

fn arithmetic_examples() -> Result<(), String> {
    let p = |eps, r| PRParams { eps, r };
    let same = |a: PRParams, b: PRParams| a == b;
    let tenth = scalar_mult_params(p(0.5, 2.0), 0.1).map_err(err)?;
    let checks = [
        same(scalar_mult_params(p(0.5, 2.0), 3.0).map_err(err)?, p(0.5, 6.0)),
        (tenth.eps - 0.05).abs() < 1e-15 && (tenth.r - 0.2).abs() < 1e-15,
        same(scalar_mult_para_params(p(0.4, 2.0), 1.0).map_err(err)?, p(0.2, 3.0)),
        same(scalar_mult_para_params(p(1.0, 0.0), 2.0).map_err(err)?, p(1.0, 0.0)),
        same(scalar_mult_para_params(p(0.1, 1.0), 4.0).map_err(err)?, p(0.1, 6.0)),
        same(sum_params(&[p(0.1, 1.0), p(0.2, 2.0), p(0.3, 5.0)]).map_err(err)?, p(0.1, 15.0)),
        same(sum_params(&[p(0.2, 3.0)]).map_err(err)?, p(0.2, 3.0)),
        same(sum_params(&[p(0.7, 0.0), p(0.3, 0.0)]).map_err(err)?, p(0.3, 0.0)),
        same(weighted_sum_params(&[p(0.4, 1.0), p(0.4, 1.0)], &[1.0, 2.0]).map_err(err)?, p(0.4, 4.0)),
        same(para_sum_params(&[p(0.4, 1.0), p(0.4, 1.0)], &[1.0, 2.0]).map_err(err)?, p(0.2, 6.0)),
        same(para_sum_params(&[p(0.3, 0.0)], &[1.0]).map_err(err)?, p(0.15, 0.0)),
        same(para_sum_params(&[p(1.0, 2.0)], &[0.5]).map_err(err)?, p(0.25, 1.5)),
        same(para_max_params(&[p(0.2, 2.0), p(0.2, 4.0)], &[1.0, 1.0]).map_err(err)?, p(0.1, 6.0)),
        same(para_max_params(&[p(0.6, 0.0)], &[0.5]).map_err(err)?, p(0.15, 0.0)),
        same(para_max_params(&[p(1.0, 1.0), p(1.0, 1.0)], &[2.0, 2.0]).map_err(err)?, p(1.0, 3.0)),
    ];
    if let Some(i) = checks.iter().position(|ok| !ok) {
        return Err(format!("arithmetic example #{i} differs"));
    }
    let unit = BoxDomain::interval(0.0, 1.0).map_err(err)?;
    let c = |r1, r2, k: f64, rbar| AmenableConstants { r1, r2, k, rbar, x_box: unit.clone(), y_box: unit.clone() };
    ensure((amenable_params(&c(1.0, 2.0, 5f64.sqrt(), 3.0), 0.1).map_err(err)?.r - 18.0).abs() < 1e-12, || "r = 18 example".into())?;
    ensure(amenable_params(&c(0.0, 0.0, 1.0, 5.0), 0.1).map_err(err)?.r == 5.0, || "r = 5 example".into())
}

fn pick<'a>(ids: &[&'a str], rng: &mut ChaCha8Rng, m: usize) -> Vec<&'a str> {
    (0..m).map(|_| ids[rng.gen_range(0..ids.len())]).collect()
}

fn atoms(ids: &[&str]) -> Result<(Vec<FunctionOracle>, Vec<f64>), String> {
    let fs = ids.iter().map(|id| catalog::function(id).map_err(err)).collect::<Result<Vec<_>, _>>()?;
    let rs = ids
        .iter()
        .map(|id| catalog::entry(id).map_err(err)?.properties.global_r.ok_or(format!("{id} has no global r")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((fs, rs))
}

fn validate(f: &ParametrizedOracle, x: f64, l: Vec<f64>, q: PRParams, rng: &mut ChaCha8Rng) -> Result<CheckReport, String> {
    let v = base_subgradient(f, &[x], &l, rng);
    let cert = ParaProxCertificate::new(vec![x], l, v, q.eps, q.r);
    check_para_prox_regular(f, &cert, &SamplerConfig::default()).map_err(err)
}

fn calculus_validation() -> Outcome {
    arithmetic_examples()?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let sum_atoms = ["quad", "abs", "huberizable", "abs_minus_quad", "poly_nc", "sine", "neg_quad"];
    let max_atoms = ["quad", "huberizable", "poly_nc", "sine", "neg_quad", "linear", "neg_linear"];
    let mut runs = Vec::new();
    for kind in ["para-sum", "para-max", "diagonal"] {
        let count = if kind == "diagonal" { 6 } else { 8 };
        for _ in 0..count {
            let m = rng.gen_range(1..=4);
            let ids = pick(if kind == "para-max" { &max_atoms } else { &sum_atoms }, &mut rng, m);
            let (fs, rs) = atoms(&ids)?;
            let ps: Vec<PRParams> = rs.iter().map(|&r| PRParams { eps: rng.gen_range(0.2..1.0), r }).collect();
            let lb: Vec<f64> = (0..m).map(|_| rng.gen_range(0.5..3.0)).collect();
            let x = rng.gen_range(-2.0..2.0);
            let (q, rep) = match kind {
                "para-sum" => {
                    let q = para_sum_params(&ps, &lb).map_err(err)?;
                    (q, validate(&build_weighted_sum(&fs).map_err(err)?, x, lb.clone(), q, &mut rng)?)
                }
                "para-max" => {
                    let q = para_max_params_for(&fs, &ps, &lb).map_err(err)?;
                    (q, validate(&build_weighted_max(&fs).map_err(err)?, x, lb.clone(), q, &mut rng)?)
                }
                _ => {
                    let x_box = BoxDomain::around(&[x], 1.0).map_err(err)?;
                    let y_box = BoxDomain::cube(m, -1.0, 1.0).map_err(err)?;
                    let c = estimate_amenable_constants(&SmoothMap::diagonal(m), &y_box, &x_box, &ps, &EstimateConfig::default())
                        .map_err(err)?;
                    let eps = ps.iter().map(|p| p.eps).fold(f64::INFINITY, f64::min);
                    let q = amenable_params(&c, eps).map_err(err)?;
                    let expect = sum_params(&ps).map_err(err)?;
                    ensure((q.r - expect.r).abs() <= 1e-9 * (1.0 + expect.r), || format!("diagonal r {} vs m·max rᵢ {}", q.r, expect.r))?;
                    let f: ParametrizedOracle = build_diagonal_sum(&fs).map_err(err)?.into();
                    (q, validate(&f, x, vec![], q, &mut rng)?)
                }
            };
            ensure(rep.passed(), || format!("{kind} of {ids:?} at x̄={x}, λ̄={lb:?}, {q:?}: {:?} worst {:?}", rep.verdict, rep.worst_margin))?;
            runs.push(kind);
        }
    }
    Ok(format!("{} compositions certified; arithmetic examples exact", runs.len()))
}

fn negative_control() -> Outcome {
    let sampler = SamplerConfig::default();
    let cases: Vec<(&str, Vec<f64>, f64)> = vec![
        ("neg_abs", vec![], 1.0),
        ("neg_abs", vec![], -1.0),
        ("lambda_neg_abs", vec![1.0], 1.0),
        ("lambda_neg_abs", vec![0.5], -0.5),
    ];
    let mut worst_gap: f64 = 0.0;
    for (id, l, v) in &cases {
        let f = catalog::parametrized(id).map_err(err)?;
        for r in [1.0, 10.0, 100.0, 1e4] {
            let cert = ParaProxCertificate::new(vec![0.0], l.clone(), vec![*v], 0.5, r);
            let rep = check_para_prox_regular(&f, &cert, &sampler).map_err(err)?;
            ensure(rep.verdict == Verdict::Fail, || format!("{id} r={r}: {:?}", rep.verdict))?;
            let w = rep.witness.ok_or(format!("{id} r={r}: fail without witness"))?;
            let gap = (replay_witness(&f, &w).map_err(err)? - w.margin).abs();
            worst_gap = worst_gap.max(gap);
            ensure(gap <= 1e-12, || format!("{id} r={r}: replay gap {gap}"))?;
            ensure(rep.worst_margin == Some(w.margin), || format!("{id} r={r}: witness is not the worst violation"))?;
        }
        let found = search_certificate(&f, &[0.0], l, &[*v], &sampler, &DEFAULT_EPS_GRID, &DEFAULT_R_GRID).map_err(err)?;
        ensure(matches!(found, SearchOutcome::NotFound { .. }), || format!("{id}: search found {:?}", found.certificate()))?;
    }
    Ok(format!("{} instances fail at every r ≤ 1e4, replay gap {worst_gap:.1e}; searches NotFound", cases.len()))
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let criteria: Vec<Criterion> = vec![
        ("λ|x| pass and λ̄=-1 witnesses", Box::new(|| scaled_abs_example(dir.path()))),
        ("convex entries certify with r=0", Box::new(convexity_gives_zero_r)),
        ("envelope golden values", Box::new(envelope_golden)),
        ("PA conjugate and envelope routes agree", Box::new(pa_agreement)),
        ("NC-PA sanity", Box::new(nc_pa_sanity)),
        ("direct implies monotone", Box::new(direct_implies_monotone)),
        ("tilt-shift invariance", Box::new(tilt_shift_invariance)),
        ("parameter calculus validation", Box::new(calculus_validation)),
        ("negative control", Box::new(negative_control)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{t:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why} [{t:.2}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
