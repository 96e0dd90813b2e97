use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::funcs::{ScaleFamily, WeightFamily};

pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Closed-form solution with the derivatives needed for residual checks.
#[derive(Clone)]
pub struct ExactSolution {
    pub u: SpaceTimeFn,
    /// ∂u/∂t
    pub u_t: SpaceTimeFn,
    /// ∂²u/∂x²
    pub u_xx: SpaceTimeFn,
}

impl ExactSolution {
    pub fn new<U, T, X>(u: U, u_t: T, u_xx: X) -> Self
    where
        U: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        T: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        X: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            u: Arc::new(u),
            u_t: Arc::new(u_t),
            u_xx: Arc::new(u_xx),
        }
    }
}

/// One instance of the generalized fractional diffusion problem.
#[derive(Clone)]
pub struct GfdeProblem {
    pub alpha: f64,
    /// Diffusivity δ.
    pub delta: f64,
    pub scale: ScaleFamily,
    pub weight: WeightFamily,
    /// Spatial interval [a, b].
    pub domain: (f64, f64),
    /// Final time T.
    pub horizon: f64,
    pub forcing: SpaceTimeFn,
    pub initial: ScalarFn,
    pub left: ScalarFn,
    pub right: ScalarFn,
    pub exact: Option<ExactSolution>,
}

impl fmt::Debug for GfdeProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GfdeProblem")
            .field("alpha", &self.alpha)
            .field("delta", &self.delta)
            .field("scale", &self.scale)
            .field("weight", &self.weight)
            .field("domain", &self.domain)
            .field("horizon", &self.horizon)
            .field("exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

impl GfdeProblem {
    /// Problem on [0, 1] × (0, 1] with z = t, w = 1 and all data zero.
    pub fn null(alpha: f64) -> Self {
        Self {
            alpha,
            delta: 1.0,
            scale: ScaleFamily::Identity,
            weight: WeightFamily::One,
            domain: (0.0, 1.0),
            horizon: 1.0,
            forcing: Arc::new(|_, _| 0.0),
            initial: Arc::new(|_| 0.0),
            left: Arc::new(|_| 0.0),
            right: Arc::new(|_| 0.0),
            exact: Some(ExactSolution::new(|_, _| 0.0, |_, _| 0.0, |_, _| 0.0)),
        }
    }

    /// Checks parameters; returns warnings for soft issues such as
    /// incompatible corner data.
    pub fn check(&self) -> Result<Vec<String>> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0,1), got {}",
                self.alpha
            )));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        let (a, b) = self.domain;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "domain requires a < b, got [{a}, {b}]"
            )));
        }
        let mut warnings = Vec::new();
        let tol = 1e-12;
        let (phi_a, f1_0) = ((self.initial)(a), (self.left)(0.0));
        if (phi_a - f1_0).abs() > tol * (1.0 + phi_a.abs()) {
            warnings.push(format!(
                "corner mismatch at x = a: phi(a) = {phi_a}, f1(0) = {f1_0}"
            ));
        }
        let (phi_b, f2_0) = ((self.initial)(b), (self.right)(0.0));
        if (phi_b - f2_0).abs() > tol * (1.0 + phi_b.abs()) {
            warnings.push(format!(
                "corner mismatch at x = b: phi(b) = {phi_b}, f2(0) = {f2_0}"
            ));
        }
        Ok(warnings)
    }
}

/// Uniform partition of [a, b] into N intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceGrid {
    a: f64,
    b: f64,
    intervals: usize,
    dx: f64,
    x: Vec<f64>,
}

impl SpaceGrid {
    pub fn new(a: f64, b: f64, intervals: usize) -> Result<Self> {
        if intervals < 2 {
            return Err(Error::InvalidParameter(format!(
                "space intervals N must be at least 2, got {intervals}"
            )));
        }
        if !(a < b) {
            return Err(Error::InvalidParameter(format!(
                "domain requires a < b, got [{a}, {b}]"
            )));
        }
        let dx = (b - a) / intervals as f64;
        let x = (0..=intervals)
            .map(|i| a + (b - a) * i as f64 / intervals as f64)
            .collect();
        Ok(Self {
            a,
            b,
            intervals,
            dx,
            x,
        })
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Number of intervals N.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x_nodes(&self) -> &[f64] {
        &self.x
    }
}
