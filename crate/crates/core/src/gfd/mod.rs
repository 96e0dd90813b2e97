//! Discrete generalized fractional derivative.
//!
//! On [t₀, t₁] the product w·u is interpolated linearly in z, on every later
//! interval [t_k, t_{k+1}] quadratically through (z_{k-1}, z_k, z_{k+1}). The
//! resulting operator at t_{j+1} is
//!
//! ```text
//! p_j u_1 − q_j u_0 + Σ_{k=1..j} (a_k u_{k−1} − b_k u_k + c_k u_{k+1})
//! ```
//!
//! with local truncation error O(Δt^{3−α}) for Lipschitz z.

mod coeffs;
mod quadrature;
mod reference;

pub use coeffs::{
    first_coeffs, gfd_apply, pq_increments, quad_coeffs, step_coefficients, QuadCoeffs, StepCoefficients,
};
pub use quadrature::tanh_sinh;
pub use reference::{gfd_reference, Differentiable, TimeFunction};

use crate::error::{Error, Result};
use crate::funcs::{validate_pair, ScaleFamily, ValidationReport, WeightFamily};

/// Uniform partition of [0, T] with z and w cached at the nodes.
#[derive(Debug, Clone)]
pub struct TimeGrid {
    horizon: f64,
    steps: usize,
    dt: f64,
    t: Vec<f64>,
    z: Vec<f64>,
    w: Vec<f64>,
    scale: ScaleFamily,
    weight: WeightFamily,
    validation: ValidationReport,
}

impl TimeGrid {
    pub fn new(scale: ScaleFamily, weight: WeightFamily, horizon: f64, steps: usize) -> Result<Self> {
        let validation = validate_pair(&scale, &weight, horizon, steps)?;
        let dt = horizon / steps as f64;
        let t: Vec<f64> = (0..=steps).map(|j| horizon * j as f64 / steps as f64).collect();
        let z: Vec<f64> = t.iter().map(|&tj| scale.value(tj)).collect();
        let w: Vec<f64> = t.iter().map(|&tj| weight.value(tj)).collect();
        if let Some(k) = z.windows(2).position(|p| !(p[1] > p[0])) {
            return Err(Error::DegenerateGrid(format!(
                "z nodes {k} and {} coincide in floating point",
                k + 1
            )));
        }
        Ok(Self {
            horizon,
            steps,
            dt,
            t,
            z,
            w,
            scale,
            weight,
            validation,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of intervals M.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_nodes(&self) -> &[f64] {
        &self.t
    }

    pub fn z_nodes(&self) -> &[f64] {
        &self.z
    }

    pub fn w_nodes(&self) -> &[f64] {
        &self.w
    }

    pub fn scale(&self) -> &ScaleFamily {
        &self.scale
    }

    pub fn weight(&self) -> &WeightFamily {
        &self.weight
    }

    pub fn validation(&self) -> &ValidationReport {
        &self.validation
    }

    /// Index of the node closest to `t`.
    pub fn nearest_node(&self, t: f64) -> usize {
        ((t / self.dt).round().max(0.0) as usize).min(self.steps)
    }
}
