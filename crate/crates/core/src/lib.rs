// Parameter checks are written as `!(x > 0.0)` so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diagnostics;
pub mod dissipation;
pub mod dynamics;
pub mod error;
pub mod lp;
pub mod spectral;

pub use error::{Error, Result};
