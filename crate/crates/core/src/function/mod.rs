//! Function oracles, analytic catalog and derived constructions.

pub mod builders;
pub mod catalog;
pub mod maps;
pub mod oracle;
pub mod piecewise;
pub mod subdiff;

pub use builders::{
    build_arg_scale, build_arg_shift, build_diagonal_sum, build_tilt_shift, build_weighted_max,
    build_weighted_sum, shift_to_origin,
};
pub use maps::SmoothMap;
pub use oracle::{eval_subdifferential, FunctionOracle, ParametrizedOracle, Smoothness};
pub use piecewise::{load_piecewise, PiecewiseSpec};
pub use subdiff::Subdifferential;
