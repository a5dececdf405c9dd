//! Analytic test functions with exact subdifferentials.
//!
//! Every flag in [`KnownProperties`] is backed by the short analytic argument
//! stored in the entry's `justification`.

use serde::Serialize;

use super::builders::{build_arg_scale, build_arg_shift, build_weighted_max, build_weighted_sum};
use super::oracle::{FunctionOracle, ParametrizedOracle, Smoothness};
use super::subdiff::Subdifferential;
use crate::domain::BoxDomain;
use crate::error::{ProxError, Result};
use crate::extreal::ExtReal;

/// Half-width of the sampling window of one-dimensional catalog functions.
pub const CATALOG_RADIUS: f64 = 10.0;

/// Truncation of the normal cone `[0, ∞)` at the endpoints of the indicator
/// of `[-1, 1]`. Generator sets are finite, so the cone is cut at this length.
pub const NORMAL_CONE_CAP: f64 = 100.0;

/// Analytic facts about a catalog entry.
#[derive(Debug, Clone, Default, Serialize)]
pub struct KnownProperties {
    /// Convex (in `x`, for every admissible parameter).
    pub convex: bool,
    /// Prox-regular at every point of its domain, for every subgradient.
    pub prox_regular_everywhere: bool,
    pub not_prox_regular_at_0: bool,
    pub prox_bounded: bool,
    /// Threshold of prox-boundedness, when prox-bounded.
    pub threshold: Option<f64>,
    /// An `r` that works at every point with any `ε` (`f + r/2 |x|²` convex).
    pub global_r: Option<f64>,
    /// Real-valued and continuously differentiable.
    pub c1: bool,
    pub justification: &'static str,
}

#[derive(Debug, Clone)]
pub enum CatalogOracle {
    Function(FunctionOracle),
    Parametrized(ParametrizedOracle),
}

impl CatalogOracle {
    /// The entry as a parametrized family (unparametrized functions get `λ ∈ R⁰`).
    pub fn as_parametrized(&self) -> ParametrizedOracle {
        match self {
            CatalogOracle::Function(f) => ParametrizedOracle::from_function(f),
            CatalogOracle::Parametrized(p) => p.clone(),
        }
    }

    pub fn lambda_dim(&self) -> usize {
        match self {
            CatalogOracle::Function(_) => 0,
            CatalogOracle::Parametrized(p) => p.lambda_dim(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub oracle: CatalogOracle,
    pub properties: KnownProperties,
}

fn line() -> BoxDomain {
    BoxDomain::interval(-CATALOG_RADIUS, CATALOG_RADIUS).expect("valid interval")
}

fn sign_kink(x: f64, left: f64, right: f64, convex: bool) -> Subdifferential {
    if x < 0.0 {
        Subdifferential::singleton(vec![left])
    } else if x > 0.0 {
        Subdifferential::singleton(vec![right])
    } else if convex {
        Subdifferential::hull(vec![vec![left], vec![right]])
    } else {
        Subdifferential::points(vec![vec![left], vec![right]])
    }
}

fn abs() -> FunctionOracle {
    FunctionOracle::new("abs", line(), Smoothness::Convex, |x| {
        ExtReal::Finite(x[0].abs())
    })
    .with_subgradients(|x| sign_kink(x[0], -1.0, 1.0, true))
}

fn quad() -> FunctionOracle {
    FunctionOracle::new("quad", line(), Smoothness::C2, |x| {
        ExtReal::Finite(0.5 * x[0] * x[0])
    })
    .with_gradient(|x| Some(vec![x[0]]))
    .convex()
}

fn neg_abs() -> FunctionOracle {
    FunctionOracle::new("neg_abs", line(), Smoothness::Lsc, |x| {
        ExtReal::Finite(-x[0].abs())
    })
    .with_subgradients(|x| sign_kink(x[0], 1.0, -1.0, false))
}

fn huberizable() -> FunctionOracle {
    FunctionOracle::new("huberizable", line(), Smoothness::C1, |x| {
        let a = x[0].abs();
        ExtReal::Finite(if a <= 1.0 { 0.5 * a * a } else { a - 0.5 })
    })
    .with_gradient(|x| Some(vec![x[0].clamp(-1.0, 1.0)]))
    .convex()
}

fn quad_minus_abs() -> FunctionOracle {
    FunctionOracle::new("quad_minus_abs", line(), Smoothness::Lsc, |x| {
        ExtReal::Finite(0.5 * x[0] * x[0] - x[0].abs())
    })
    .with_subgradients(|x| {
        sign_kink(x[0], 1.0, -1.0, false).translated(&[-x[0]])
    })
}

fn abs_minus_quad() -> FunctionOracle {
    FunctionOracle::new("abs_minus_quad", line(), Smoothness::Lsc, |x| {
        ExtReal::Finite(x[0].abs() - 0.5 * x[0] * x[0])
    })
    .with_subgradients(|x| sign_kink(x[0], -1.0, 1.0, true).translated(&[x[0]]))
}

fn indicator_unit_interval() -> FunctionOracle {
    FunctionOracle::new("indicator_unit_interval", line(), Smoothness::Convex, |x| {
        if x[0].abs() <= 1.0 {
            ExtReal::ZERO
        } else {
            ExtReal::PosInf
        }
    })
    .with_subgradients(|x| {
        if x[0] == 1.0 {
            Subdifferential::hull(vec![vec![0.0], vec![NORMAL_CONE_CAP]])
        } else if x[0] == -1.0 {
            Subdifferential::hull(vec![vec![-NORMAL_CONE_CAP], vec![0.0]])
        } else {
            Subdifferential::singleton(vec![0.0])
        }
    })
}

fn poly_nc() -> FunctionOracle {
    FunctionOracle::new("poly_nc", line(), Smoothness::C2, |x| {
        let t = x[0];
        ExtReal::Finite(0.25 * t.powi(4) - t * t)
    })
    .with_gradient(|x| Some(vec![x[0].powi(3) - 2.0 * x[0]]))
}

fn neg_quad() -> FunctionOracle {
    FunctionOracle::new("neg_quad", line(), Smoothness::C2, |x| {
        ExtReal::Finite(-0.5 * x[0] * x[0])
    })
    .with_gradient(|x| Some(vec![-x[0]]))
}

fn neg_quartic() -> FunctionOracle {
    FunctionOracle::new("neg_quartic", line(), Smoothness::C2, |x| {
        ExtReal::Finite(-x[0].powi(4))
    })
    .with_gradient(|x| Some(vec![-4.0 * x[0].powi(3)]))
}

fn affine(id: &str, slope: f64, offset: f64) -> FunctionOracle {
    FunctionOracle::new(id, line(), Smoothness::C2, move |x| {
        ExtReal::Finite(slope * x[0] + offset)
    })
    .with_gradient(move |_| Some(vec![slope]))
    .convex()
}

fn sine() -> FunctionOracle {
    FunctionOracle::new("sine", line(), Smoothness::C2, |x| ExtReal::Finite(x[0].sin()))
        .with_gradient(|x| Some(vec![x[0].cos()]))
}

fn quad2() -> FunctionOracle {
    FunctionOracle::new(
        "quad2",
        BoxDomain::cube(2, -CATALOG_RADIUS, CATALOG_RADIUS).expect("valid box"),
        Smoothness::C2,
        |x| ExtReal::Finite(0.5 * (x[0] * x[0] + x[1] * x[1])),
    )
    .with_gradient(|x| Some(x.to_vec()))
    .convex()
}

fn l1_2d() -> FunctionOracle {
    FunctionOracle::new(
        "l1_2d",
        BoxDomain::cube(2, -CATALOG_RADIUS, CATALOG_RADIUS).expect("valid box"),
        Smoothness::Convex,
        |x| ExtReal::Finite(x[0].abs() + x[1].abs()),
    )
    .with_subgradients(|x| {
        let a = sign_kink(x[0], -1.0, 1.0, true);
        let b = sign_kink(x[1], -1.0, 1.0, true);
        let mut gens = Vec::new();
        for ga in a.generators() {
            for gb in b.generators() {
                gens.push(vec![ga[0], gb[0]]);
            }
        }
        Subdifferential::hull(gens)
    })
}

/// `λ|x|`: convex kink for `λ > 0`, two-point limiting set for `λ < 0`.
fn scaled_abs(id: &str, sign: f64) -> ParametrizedOracle {
    ParametrizedOracle::new(
        id,
        line(),
        BoxDomain::interval(-4.0, 4.0).expect("valid interval"),
        Smoothness::Lsc,
        move |x, l| ExtReal::Finite(sign * l[0] * x[0].abs()),
    )
    .with_subgradients(move |x, l| {
        let w = sign * l[0];
        if w == 0.0 {
            Subdifferential::singleton(vec![0.0])
        } else {
            sign_kink(x[0], -w, w, w > 0.0)
        }
    })
}

fn c1_atom(f: FunctionOracle) -> bool {
    f.smoothness().is_differentiable()
}

/// All catalog entries, in listing order.
pub fn entries() -> Vec<CatalogEntry> {
    use CatalogOracle::{Function as F, Parametrized as P};
    let convex = |justification| KnownProperties {
        convex: true,
        prox_regular_everywhere: true,
        prox_bounded: true,
        threshold: Some(0.0),
        global_r: Some(0.0),
        justification,
        ..Default::default()
    };
    let mut out = vec![
        CatalogEntry {
            id: "abs",
            description: "|x|",
            oracle: F(abs()),
            properties: convex("norm; ∂|x|(0) = [-1, 1]"),
        },
        CatalogEntry {
            id: "quad",
            description: "x^2/2",
            oracle: F(quad()),
            properties: KnownProperties {
                c1: true,
                ..convex("f'' = 1 > 0")
            },
        },
        CatalogEntry {
            id: "neg_abs",
            description: "-|x|",
            oracle: F(neg_abs()),
            properties: KnownProperties {
                not_prox_regular_at_0: true,
                prox_bounded: true,
                threshold: Some(0.0),
                justification: "for v = 1 at 0, -t >= t - r t^2/2 fails for 0 < t < 4/r; bounded by -|x| >= -(r/2)x^2 - 1/(2r)",
                ..Default::default()
            },
        },
        CatalogEntry {
            id: "huberizable",
            description: "Huber function (x^2/2 on [-1,1], |x| - 1/2 outside)",
            oracle: F(huberizable()),
            properties: KnownProperties {
                c1: true,
                ..convex("Moreau envelope e_1|.|; convex C1 with f' = clamp(x, -1, 1)")
            },
        },
        CatalogEntry {
            id: "quad_minus_abs",
            description: "x^2/2 - |x|",
            oracle: F(quad_minus_abs()),
            properties: KnownProperties {
                not_prox_regular_at_0: true,
                prox_bounded: true,
                threshold: Some(0.0),
                justification: "concave kink at 0: for v = 1, t^2/2 - t >= t - r t^2/2 fails for small t > 0; f >= -1/2",
                ..Default::default()
            },
        },
        CatalogEntry {
            id: "abs_minus_quad",
            description: "|x| - x^2/2 (lower-C2, nonconvex)",
            oracle: F(abs_minus_quad()),
            properties: KnownProperties {
                prox_regular_everywhere: true,
                prox_bounded: true,
                threshold: Some(1.0),
                global_r: Some(1.0),
                justification: "f + x^2/2 = |x| is convex; e_r f finite iff r > 1 (and flat at r = 1)",
                ..Default::default()
            },
        },
        CatalogEntry {
            id: "indicator_unit_interval",
            description: "indicator of [-1, 1]",
            oracle: F(indicator_unit_interval()),
            properties: convex("indicator of a closed interval; normal cone truncated at NORMAL_CONE_CAP"),
        },
        CatalogEntry {
            id: "poly_nc",
            description: "x^4/4 - x^2 (C2, nonconvex)",
            oracle: F(poly_nc()),
            properties: KnownProperties {
                prox_regular_everywhere: true,
                prox_bounded: true,
                threshold: Some(0.0),
                global_r: Some(2.0),
                c1: true,
                justification: "f'' = 3x^2 - 2 >= -2 so f + x^2 is convex; f >= -1",
                ..Default::default()
            },
        },
        CatalogEntry {
            id: "neg_quad",
            description: "-x^2/2",
            oracle: F(neg_quad()),
            properties: KnownProperties {
                prox_regular_everywhere: true,
                prox_bounded: true,
                threshold: Some(1.0),
                global_r: Some(1.0),
                c1: true,
                justification: "f + x^2/2 = 0; e_r f(x) = -r x^2 / (2(r - 1)) for r > 1, -inf for r < 1",
                ..Default::default()
            },
        },
        CatalogEntry {
            id: "neg_quartic",
            description: "-x^4",
            oracle: F(neg_quartic()),
            properties: KnownProperties {
                prox_regular_everywhere: true,
                c1: true,
                justification: "C2, hence prox-regular locally; -y^4 + (r/2)y^2 is unbounded below for every r",
                ..Default::default()
            },
        },
        CatalogEntry {
            id: "linear",
            description: "x",
            oracle: F(affine("linear", 1.0, 0.0)),
            properties: KnownProperties { c1: true, ..convex("affine") },
        },
        CatalogEntry {
            id: "neg_linear",
            description: "-x",
            oracle: F(affine("neg_linear", -1.0, 0.0)),
            properties: KnownProperties { c1: true, ..convex("affine") },
        },
        CatalogEntry {
            id: "linear_minus_one",
            description: "x - 1",
            oracle: F(affine("linear_minus_one", 1.0, -1.0)),
            properties: KnownProperties { c1: true, ..convex("affine") },
        },
        CatalogEntry {
            id: "sine",
            description: "sin(x)",
            oracle: F(sine()),
            properties: KnownProperties {
                prox_regular_everywhere: true,
                prox_bounded: true,
                threshold: Some(0.0),
                global_r: Some(1.0),
                c1: true,
                justification: "f'' = -sin(x) >= -1; bounded below by -1",
                ..Default::default()
            },
        },
        CatalogEntry {
            id: "quad2",
            description: "|x|^2/2 on R^2",
            oracle: F(quad2()),
            properties: KnownProperties { c1: true, ..convex("Hessian = I") },
        },
        CatalogEntry {
            id: "l1_2d",
            description: "|x1| + |x2| on R^2",
            oracle: F(l1_2d()),
            properties: convex("sum of norms; subdifferential is a product of intervals"),
        },
        CatalogEntry {
            id: "lambda_abs",
            description: "lambda |x|",
            oracle: P(scaled_abs("lambda_abs", 1.0)),
            properties: KnownProperties {
                not_prox_regular_at_0: true,
                justification: "convex in x for lambda > 0 (eps = lambda/2, r = 0 at x = 0); for lambda < 0 the kink is concave",
                ..Default::default()
            },
        },
        CatalogEntry {
            id: "lambda_neg_abs",
            description: "lambda (-|x|)",
            oracle: P(scaled_abs("lambda_neg_abs", -1.0)),
            properties: KnownProperties {
                not_prox_regular_at_0: true,
                justification: "for lambda > 0 the kink at 0 is concave",
                ..Default::default()
            },
        },
        CatalogEntry {
            id: "shift_abs",
            description: "|x - lambda|",
            oracle: P(build_arg_shift(&abs()).expect("1-D atom").renamed("shift_abs")),
            properties: convex("translate of a norm"),
        },
        CatalogEntry {
            id: "scale_quad",
            description: "(lambda x)^2 / 2",
            oracle: P(build_arg_scale(&quad()).expect("1-D atom").renamed("scale_quad")),
            properties: convex("Hessian lambda^2 >= 0"),
        },
        CatalogEntry {
            id: "wsum_abs_quad",
            description: "lambda1 |x| + lambda2 x^2/2 (lambda >= 0)",
            oracle: P(build_weighted_sum(&[abs(), quad()])
                .expect("1-D atoms")
                .renamed("wsum_abs_quad")),
            properties: convex("nonnegative combination of convex functions"),
        },
        CatalogEntry {
            id: "wmax_quad_linear",
            description: "max(lambda1 x^2/2, lambda2 x) (lambda >= 0)",
            oracle: P(build_weighted_max(&[quad(), affine("linear", 1.0, 0.0)])
                .expect("C1 atoms")
                .renamed("wmax_quad_linear")
                .convex_in_x()),
            properties: convex("max of convex functions"),
        },
    ];
    debug_assert!(out.iter().all(|e| !e.properties.c1 || match &e.oracle {
        CatalogOracle::Function(f) => c1_atom(f.clone()),
        CatalogOracle::Parametrized(_) => false,
    }));
    out.shrink_to_fit();
    out
}

pub fn ids() -> Vec<&'static str> {
    entries().into_iter().map(|e| e.id).collect()
}

pub fn entry(id: &str) -> Result<CatalogEntry> {
    entries()
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| ProxError::UnknownFunction(id.to_string()))
}

/// An unparametrized catalog function.
pub fn function(id: &str) -> Result<FunctionOracle> {
    match entry(id)?.oracle {
        CatalogOracle::Function(f) => Ok(f),
        CatalogOracle::Parametrized(_) => Err(ProxError::InvalidArgument(format!(
            "`{id}` is a parametrized family"
        ))),
    }
}

/// Any catalog entry as a parametrized family.
pub fn parametrized(id: &str) -> Result<ParametrizedOracle> {
    Ok(entry(id)?.oracle.as_parametrized())
}
