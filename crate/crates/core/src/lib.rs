//! Numerical tools for prox-regular and parametrically prox-regular functions:
//! function oracles, grid-based envelopes and proximal averages, certificate
//! checking and the parameter rules for composite functions.

pub mod calculus;
pub mod certify;
pub mod domain;
pub mod error;
pub mod extreal;
pub mod function;
pub mod envelope;
pub mod linalg;

pub use domain::{BoxDomain, Grid};
pub use error::{ProxError, Result};
pub use extreal::ExtReal;
