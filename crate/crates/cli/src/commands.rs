use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use proxkit::calculus::{
    amenable_params, estimate_amenable_constants, para_max_params_for, para_sum_params,
    scalar_mult_para_params, scalar_mult_params, sum_params, weighted_sum_params,
    AmenableConstants, EstimateConfig, PRParams,
};
use proxkit::certify::{
    check_monotone_localization, check_para_prox_regular, check_proximal_subgradient,
    replay_witness, search_certificate, CheckReport, ParaProxCertificate, SamplerConfig,
    SearchOutcome, Verdict, ViolationWitness,
};
use proxkit::envelope::{ConvexPa, EnvelopePa, NcPa};
use proxkit::function::catalog::{self, CatalogOracle};
use proxkit::function::{
    build_diagonal_sum, build_weighted_max, build_weighted_sum, load_piecewise, FunctionOracle,
    ParametrizedOracle, SmoothMap,
};
use proxkit::{BoxDomain, ExtReal, Grid};
use serde::{Deserialize, Serialize};

use crate::{CalculusArgs, CatalogArgs, CheckArgs, CheckChoice, Cli, Command, PaArgs, PointArgs, Rule, SearchArgs};

/// Replayed margins must match the recorded ones to this absolute accuracy.
const REPLAY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Error = 2,
    Inconclusive = 3,
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail => Status::Fail,
            Verdict::Inconclusive => Status::Inconclusive,
        }
    }
}

pub fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Catalog(a) => catalog_cmd(a),
        Command::Check(a) => check_cmd(a),
        Command::Search(a) => search_cmd(a),
        Command::Calculus(a) => calculus_cmd(a),
        Command::Pa(a) => pa_cmd(a),
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn effective_seed(flag: u64) -> Result<u64> {
    match std::env::var("PROXKIT_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| anyhow!("PROXKIT_SEED must be an unsigned integer, got `{s}`")),
        Err(_) => Ok(flag),
    }
}

/// A catalog id, or else a path to a piecewise-polynomial spec file.
fn resolve(reference: &str) -> Result<CatalogOracle> {
    if let Ok(entry) = catalog::entry(reference) {
        return Ok(entry.oracle);
    }
    let path = Path::new(reference);
    if !path.is_file() {
        bail!(proxkit::ProxError::UnknownFunction(reference.to_string()));
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {reference}"))?;
    let f = load_piecewise(&text).with_context(|| format!("in {reference}"))?;
    Ok(CatalogOracle::Function(f))
}

fn resolve_function(reference: &str) -> Result<FunctionOracle> {
    match resolve(reference)? {
        CatalogOracle::Function(f) => Ok(f),
        CatalogOracle::Parametrized(_) => bail!("`{reference}` is parametrized; a plain function is required"),
    }
}

fn or_zeros(v: &Option<Vec<f64>>, n: usize, name: &str) -> Result<Vec<f64>> {
    match v {
        None => Ok(vec![0.0; n]),
        Some(v) if v.len() == n => Ok(v.clone()),
        Some(v) => bail!("--{name} has {} components, expected {n}", v.len()),
    }
}

struct Prepared {
    f: ParametrizedOracle,
    xbar: Vec<f64>,
    lambdabar: Vec<f64>,
    vbar: Vec<f64>,
    sampler: SamplerConfig,
}

fn prepare(p: &PointArgs) -> Result<Prepared> {
    let f = resolve(&p.function)?.as_parametrized();
    let xbar = or_zeros(&p.xbar, f.x_dim(), "xbar")?;
    let vbar = or_zeros(&p.vbar, f.x_dim(), "vbar")?;
    let lambdabar = match (&p.lambdabar, f.lambda_dim()) {
        (None, 0) => Vec::new(),
        (None, m) => bail!("`{}` is parametrized; --lambdabar needs {m} components", p.function),
        (Some(l), m) if l.len() == m => l.clone(),
        (Some(l), m) => bail!("--lambdabar has {} components, expected {m}", l.len()),
    };
    let mut sampler = SamplerConfig::default()
        .with_seed(effective_seed(p.seed)?)
        .with_points(p.points);
    if p.freeze_lambda {
        sampler = sampler.frozen();
    }
    Ok(Prepared { f, xbar, lambdabar, vbar, sampler })
}

#[derive(Serialize)]
struct CatalogListing {
    id: &'static str,
    description: &'static str,
    x_dim: usize,
    lambda_dim: usize,
    x_domain: BoxDomain,
    properties: catalog::KnownProperties,
}

fn catalog_cmd(a: CatalogArgs) -> Result<Status> {
    let list: Vec<CatalogListing> = catalog::entries()
        .into_iter()
        .map(|e| {
            let p = e.oracle.as_parametrized();
            CatalogListing {
                id: e.id,
                description: e.description,
                x_dim: p.x_dim(),
                lambda_dim: e.oracle.lambda_dim(),
                x_domain: p.x_domain().clone(),
                properties: e.properties,
            }
        })
        .collect();
    emit(a.output.as_deref(), &to_json(&list)?)?;
    Ok(Status::Pass)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WitnessFile {
    Report(Box<CheckReport>),
    Witness(Box<ViolationWitness>),
}

#[derive(Serialize)]
struct Replay {
    function: String,
    witness: ViolationWitness,
    recorded_margin: f64,
    replayed_margin: f64,
    abs_difference: f64,
    still_violated: bool,
    reproduced: bool,
}

fn replay_cmd(f: &ParametrizedOracle, path: &Path, output: Option<&Path>) -> Result<Status> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let witness = match serde_json::from_str::<WitnessFile>(&text)
        .with_context(|| format!("{} is neither a report nor a witness", path.display()))?
    {
        WitnessFile::Report(r) => r
            .witness
            .ok_or_else(|| anyhow!("{} carries no witness", path.display()))?,
        WitnessFile::Witness(w) => *w,
    };
    let replayed = replay_witness(f, &witness)?;
    let diff = (replayed - witness.margin).abs();
    let still_violated = replayed < -witness.tolerance;
    let out = Replay {
        function: f.id().to_string(),
        recorded_margin: witness.margin,
        replayed_margin: replayed,
        abs_difference: diff,
        still_violated,
        reproduced: diff <= REPLAY_TOL && still_violated,
        witness,
    };
    emit(output, &to_json(&out)?)?;
    Ok(if out.reproduced { Status::Pass } else { Status::Fail })
}

fn check_cmd(a: CheckArgs) -> Result<Status> {
    if let Some(path) = &a.replay_witness {
        let f = resolve(&a.point.function)?.as_parametrized();
        return replay_cmd(&f, path, a.point.output.as_deref());
    }
    let p = prepare(&a.point)?;
    let cert = ParaProxCertificate::new(p.xbar, p.lambdabar, p.vbar, a.eps, a.r);
    let report = match a.check {
        CheckChoice::Direct => check_para_prox_regular(&p.f, &cert, &p.sampler)?,
        CheckChoice::Monotone => check_monotone_localization(&p.f, &cert, &p.sampler)?,
        CheckChoice::ProximalSubgradient => check_proximal_subgradient(&p.f, &cert, &p.sampler)?,
    };
    if let (Some(path), Some(w)) = (&a.witness, &report.witness) {
        std::fs::write(path, to_json(w)?).with_context(|| format!("writing {}", path.display()))?;
    }
    emit(a.point.output.as_deref(), &to_json(&report)?)?;
    Ok(report.verdict.into())
}

fn search_cmd(a: SearchArgs) -> Result<Status> {
    let p = prepare(&a.point)?;
    let outcome = search_certificate(&p.f, &p.xbar, &p.lambdabar, &p.vbar, &p.sampler, &a.eps_grid, &a.r_grid)?;
    emit(a.point.output.as_deref(), &to_json(&outcome)?)?;
    Ok(match outcome {
        SearchOutcome::Found { .. } => Status::Pass,
        SearchOutcome::NotFound { .. } => Status::Fail,
    })
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitConstants {
    r1: f64,
    r2: f64,
    k: f64,
    rbar: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CalculusInput {
    #[serde(default)]
    params: Vec<PRParams>,
    /// Weights of `wsum`, or the single multiplier of `scalar`.
    lambda: Option<Vec<f64>>,
    lambdabar: Option<Vec<f64>>,
    #[serde(default)]
    functions: Vec<String>,
    xbar: Option<Vec<f64>>,
    vbar: Option<Vec<f64>>,
    /// Neighbourhood size for `amenable` (not derivable from oracles).
    eps: Option<f64>,
    map: Option<String>,
    x_box: Option<BoxDomain>,
    y_box: Option<BoxDomain>,
    constants: Option<ExplicitConstants>,
}

#[derive(Serialize)]
struct CalculusOutput {
    rule: String,
    params: PRParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    constants: Option<AmenableConstants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    validation: Option<CheckReport>,
}

fn rule_name(rule: Rule) -> String {
    use clap::ValueEnum;
    rule.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn single(params: &[PRParams]) -> Result<PRParams> {
    match params {
        [p] => Ok(*p),
        _ => bail!("this rule takes exactly one entry in `params`"),
    }
}

fn scalar_of(v: &Option<Vec<f64>>, name: &str) -> Result<f64> {
    match v.as_deref() {
        Some([x]) => Ok(*x),
        _ => bail!("this rule needs `{name}` with exactly one entry"),
    }
}

fn required<'a>(v: &'a Option<Vec<f64>>, name: &str) -> Result<&'a [f64]> {
    v.as_deref().ok_or_else(|| anyhow!("this rule needs `{name}`"))
}

/// The function whose certification validates the rule, with its base parameter.
fn composite(rule: Rule, input: &CalculusInput) -> Result<(ParametrizedOracle, Vec<f64>)> {
    if input.functions.is_empty() {
        bail!("--validate needs `functions` (catalog ids or spec paths)");
    }
    let fs: Vec<FunctionOracle> = input.functions.iter().map(|r| resolve_function(r)).collect::<Result<_>>()?;
    Ok(match rule {
        Rule::Scalar => (build_weighted_sum(&fs)?.slice(&[scalar_of(&input.lambda, "lambda")?]).into(), vec![]),
        Rule::ScalarPara => (build_weighted_sum(&fs)?, vec![scalar_of(&input.lambdabar, "lambdabar")?]),
        Rule::Sum => (build_diagonal_sum(&fs)?.into(), vec![]),
        Rule::Wsum => (build_weighted_sum(&fs)?.slice(required(&input.lambda, "lambda")?).into(), vec![]),
        Rule::ParaSum => (build_weighted_sum(&fs)?, required(&input.lambdabar, "lambdabar")?.to_vec()),
        Rule::ParaMax => (build_weighted_max(&fs)?, required(&input.lambdabar, "lambdabar")?.to_vec()),
        Rule::Amenable => match input.map.as_deref() {
            Some(m) if m.starts_with("diagonal") || m.starts_with("identity") => {
                (build_diagonal_sum(&fs)?.into(), vec![])
            }
            _ => bail!("validation of amenable compositions supports the diagonal and identity maps"),
        },
    })
}

fn calculus_cmd(a: CalculusArgs) -> Result<Status> {
    let text = if a.input == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input))?
    };
    let input: CalculusInput = serde_json::from_str(&text).context("calculus input")?;
    let ps = &input.params;
    let mut constants = None;
    let params = match a.rule {
        Rule::Scalar => scalar_mult_params(single(ps)?, scalar_of(&input.lambda, "lambda")?)?,
        Rule::ScalarPara => scalar_mult_para_params(single(ps)?, scalar_of(&input.lambdabar, "lambdabar")?)?,
        Rule::Sum => sum_params(ps)?,
        Rule::Wsum => weighted_sum_params(ps, required(&input.lambda, "lambda")?)?,
        Rule::ParaSum => para_sum_params(ps, required(&input.lambdabar, "lambdabar")?)?,
        Rule::ParaMax => {
            let lb = required(&input.lambdabar, "lambdabar")?;
            if input.functions.is_empty() {
                proxkit::calculus::para_max_params(ps, lb)?
            } else {
                let fs: Vec<FunctionOracle> =
                    input.functions.iter().map(|r| resolve_function(r)).collect::<Result<_>>()?;
                para_max_params_for(&fs, ps, lb)?
            }
        }
        Rule::Amenable => {
            let c = amenable_constants(&input, effective_seed(a.seed)?)?;
            let eps = match input.eps {
                Some(e) => e,
                None => ps
                    .iter()
                    .map(|p| p.eps)
                    .reduce(f64::min)
                    .ok_or_else(|| anyhow!("amenable needs `eps` or `params`"))?,
            };
            let p = amenable_params(&c, eps)?;
            constants = Some(c);
            p
        }
    };
    let validation = if a.validate {
        let (f, lambdabar) = composite(a.rule, &input)?;
        let xbar = or_zeros(&input.xbar, f.x_dim(), "xbar")?;
        let vbar = match &input.vbar {
            Some(v) => v.clone(),
            None => f
                .subdifferential_x(&xbar, &lambdabar)?
                .generators()
                .into_iter()
                .next()
                .ok_or_else(|| anyhow!("empty subdifferential at xbar"))?,
        };
        let sampler = SamplerConfig::default()
            .with_seed(effective_seed(a.seed)?)
            .with_points(a.points);
        let cert = ParaProxCertificate::new(xbar, lambdabar, vbar, params.eps, params.r);
        Some(check_para_prox_regular(&f, &cert, &sampler)?)
    } else {
        None
    };
    let status = validation.as_ref().map_or(Status::Pass, |r| r.verdict.into());
    let out = CalculusOutput { rule: rule_name(a.rule), params, constants, validation };
    emit(a.output.as_deref(), &to_json(&out)?)?;
    Ok(status)
}

fn amenable_constants(input: &CalculusInput, seed: u64) -> Result<AmenableConstants> {
    let rbar_of = |ps: &[PRParams]| ps.iter().map(|p| p.r).fold(0.0, f64::max);
    if let Some(c) = input.constants {
        return Ok(AmenableConstants {
            r1: c.r1,
            r2: c.r2,
            k: c.k,
            rbar: c.rbar,
            x_box: input.x_box.clone().unwrap_or_else(BoxDomain::point),
            y_box: input.y_box.clone().unwrap_or_else(BoxDomain::point),
        });
    }
    let map = SmoothMap::by_name(input.map.as_deref().ok_or_else(|| anyhow!("amenable needs `map` or `constants`"))?)?;
    let xbar = or_zeros(&input.xbar, map.input_dim(), "xbar")?;
    let x_box = match &input.x_box {
        Some(b) => b.clone(),
        None => BoxDomain::around(&xbar, 1.0)?,
    };
    let y_box = match &input.y_box {
        Some(b) => b.clone(),
        None => BoxDomain::cube(map.output_dim(), -1.0, 1.0)?,
    };
    let config = EstimateConfig { seed, ..EstimateConfig::default() };
    let c = estimate_amenable_constants(&map, &y_box, &x_box, &input.params, &config)?;
    debug_assert_eq!(c.rbar, rbar_of(&input.params));
    Ok(c)
}

fn cell(v: Option<ExtReal>) -> String {
    match v {
        None => String::new(),
        Some(ExtReal::Finite(x)) => format!("{x}"),
        Some(_) => "inf".to_string(),
    }
}

fn pa_cmd(a: PaArgs) -> Result<Status> {
    let f0 = resolve_function(&a.f0)?;
    let f1 = resolve_function(&a.f1)?;
    if f0.dim() != 1 || f1.dim() != 1 {
        bail!("pa tabulates functions of one variable");
    }
    let grid = Grid::interval(a.bounds[0], a.bounds[1], a.points)?;
    let convex = f0.is_convex() && f1.is_convex();
    let nc = match NcPa::new(&f0, &f1, a.r, &grid) {
        Ok(pa) => Some(pa),
        Err(e) => {
            eprintln!("nc_pa column left empty: {e}");
            None
        }
    };
    let mut csv = String::from("x,lambda,pa_convex,pa_convex_env,nc_pa\n");
    for &lambda in &a.lambda {
        if !(0.0..=1.0).contains(&lambda) {
            bail!("lambda must lie in [0, 1], got {lambda}");
        }
        let (conj, env) = if convex {
            (Some(ConvexPa::new(&f0, &f1, lambda, &grid)?), Some(EnvelopePa::new(&f0, &f1, lambda, &grid)?))
        } else {
            (None, None)
        };
        let interior = lambda > 0.0 && lambda < 1.0;
        for i in 0..grid.len() {
            let x = grid.node(i);
            let pa = conj.as_ref().map(|p| ExtReal::new(p.eval(&x)));
            let pe = env.as_ref().map(|p| ExtReal::new(p.eval(&x)));
            let pn = nc.as_ref().filter(|_| interior).map(|p| ExtReal::new(p.eval(&x, lambda)));
            writeln!(csv, "{},{},{},{},{}", x[0], lambda, cell(pa), cell(pe), cell(pn))?;
        }
    }
    emit(a.output.as_deref(), &csv)?;
    Ok(Status::Pass)
}
