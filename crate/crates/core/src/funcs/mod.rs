//! Special functions and the scale/weight families that define the
//! generalized fractional derivative.

mod family;
mod special;

pub use family::{eval_scale, eval_weight, validate_pair, ScaleFamily, ValidationReport, WeightFamily};
pub use special::{gamma_fn, ln_gamma, lower_incomplete_gamma};
