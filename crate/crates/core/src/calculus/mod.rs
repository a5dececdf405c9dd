//! Explicit `(ε, r)` rules for scalar multiples, sums, maxima and amenable
//! compositions, and sampled estimates of the amenable constants.

mod amenable;
mod rules;

pub use amenable::{amenable_params, estimate_amenable_constants, largest_eigenvalue, AmenableConstants, EstimateConfig};
pub use rules::{
    para_max_params, para_max_params_for, para_sum_params, scalar_mult_para_params,
    scalar_mult_params, sum_params, weighted_sum_params, PRParams,
};
