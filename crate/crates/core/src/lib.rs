//! Finite-difference solver for time-fractional diffusion equations with
//! generalized fractional derivatives
//!
//! ```text
//! ∂^α_t u = δ u_xx + f(x, t),   (x, t) ∈ [a, b] × (0, T]
//! u(x, 0) = φ(x),   u(a, t) = f₁(t),   u(b, t) = f₂(t)
//! ```
//!
//! where ∂^α_t is the Caputo-type derivative with scale function z(t) and
//! weight function w(t):
//!
//! ```text
//! ∂^α_t u(t) = w(t)^{-1} / Γ(1−α) ∫₀ᵗ (w u)′(τ) (z(t) − z(τ))^{-α} dτ
//! ```
//!
//! The time discretization is O(Δt^{3−α}), the space discretization O(Δx²).
//!
//! Modules:
//! - [`funcs`]: gamma functions and the scale/weight families
//! - [`gfd`]: coefficients and application of the discrete operator, plus a quadrature reference
//! - [`solver`]: implicit time marching with tridiagonal solves and stability diagnostics
//! - [`analysis`]: error norms, convergence orders and refinement studies
//! - [`catalog`]: built-in benchmark problems

// Negated comparisons are used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::result_large_err)]

pub mod analysis;
pub mod catalog;
pub mod error;
pub mod funcs;
pub mod gfd;
pub mod solver;

pub use error::{Error, Result};
