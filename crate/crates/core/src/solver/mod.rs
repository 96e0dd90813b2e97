//! Implicit time marching for the generalized fractional diffusion equation.
//!
//! Each step j solves for the interior of level j + 1:
//!
//! ```text
//! (L + 2μ) u_{j+1}^i − μ (u_{j+1}^{i−1} + u_{j+1}^{i+1})
//!     = f_{j+1}^i − Σ_{l ≤ j} ω_l u_l^i,        μ = δ/Δx²
//! ```
//!
//! where ω_l are the discrete GFD weights of [`StepCoefficients`] and L is the
//! weight of the newest level (p_0 for the first step, c_j^j afterwards).
//! Dirichlet values are moved to the right-hand side.

mod problem;
mod stability;
mod tridiag;

pub use problem::{ExactSolution, GfdeProblem, ScalarFn, SpaceGrid, SpaceTimeFn};
pub use stability::{stability_diagnostics, StabilityReport, StabilityRow};
pub use tridiag::{thomas_solve, TridiagonalSystem};

use crate::error::{Error, Result};
use crate::gfd::{step_coefficients, StepCoefficients, TimeGrid};

/// The (M+1)×(N+1) lattice of solution values; row j is time level t_j.
#[derive(Debug, Clone)]
pub struct SolutionField {
    time: TimeGrid,
    space: SpaceGrid,
    values: Vec<f64>,
    filled: usize,
}

impl SolutionField {
    pub fn time_grid(&self) -> &TimeGrid {
        &self.time
    }

    pub fn space_grid(&self) -> &SpaceGrid {
        &self.space
    }

    fn width(&self) -> usize {
        self.space.intervals() + 1
    }

    /// Number of complete time levels (row 0 counts once initialized).
    pub fn filled_levels(&self) -> usize {
        self.filled
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let w = self.width();
        &self.values[j * w..(j + 1) * w]
    }

    pub fn get(&self, j: usize, i: usize) -> f64 {
        self.values[j * self.width() + i]
    }

    /// Iterates over rows 0..filled.
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.width()).take(self.filled)
    }

    fn set_interior(&mut self, j: usize, interior: &[f64]) {
        let w = self.width();
        self.values[j * w + 1..(j + 1) * w - 1].copy_from_slice(interior);
    }

    /// Overwrites one node; test hook for error-norm checks.
    #[doc(hidden)]
    pub fn set(&mut self, j: usize, i: usize, v: f64) {
        let w = self.width();
        self.values[j * w + i] = v;
    }
}

/// Builds both grids and a field holding the initial row and all boundary values.
/// Interior nodes above row 0 are NaN until marched.
pub fn build_grids(
    problem: &GfdeProblem,
    time_steps: usize,
    space_intervals: usize,
) -> Result<SolutionField> {
    problem.check()?;
    let time = TimeGrid::new(problem.scale, problem.weight, problem.horizon, time_steps)?;
    let (a, b) = problem.domain;
    let space = SpaceGrid::new(a, b, space_intervals)?;
    let width = space_intervals + 1;
    let mut values = vec![f64::NAN; (time_steps + 1) * width];
    for (i, &x) in space.x_nodes().iter().enumerate() {
        values[i] = (problem.initial)(x);
    }
    for (j, &t) in time.t_nodes().iter().enumerate().skip(1) {
        values[j * width] = (problem.left)(t);
        values[j * width + space_intervals] = (problem.right)(t);
    }
    Ok(SolutionField {
        time,
        space,
        values,
        filled: 1,
    })
}

/// Assembles the interior system for level j + 1 from the completed levels 0..=j.
pub fn assemble_step(
    j: usize,
    field: &SolutionField,
    coeffs: &StepCoefficients,
    problem: &GfdeProblem,
) -> Result<TridiagonalSystem> {
    if field.filled < j + 1 {
        return Err(Error::IncompleteHistory {
            needed: j,
            available: field.filled,
        });
    }
    if coeffs.j != j {
        return Err(Error::Index(format!(
            "coefficients built for step {} used at step {j}",
            coeffs.j
        )));
    }
    let space = &field.space;
    let n_int = space.intervals();
    let n = n_int - 1;
    let mu = problem.delta / (space.dx() * space.dx());
    let t_next = field.time.t_nodes()[j + 1];

    let weights = coeffs.level_weights();
    let leading = weights[j + 1];

    let x = space.x_nodes();
    let mut rhs: Vec<f64> = (1..n_int).map(|i| (problem.forcing)(x[i], t_next)).collect();
    for (l, &wl) in weights[..=j].iter().enumerate() {
        if wl == 0.0 {
            continue;
        }
        let level = &field.row(l)[1..n_int];
        for (r, u) in rhs.iter_mut().zip(level) {
            *r -= wl * u;
        }
    }
    let next = field.row(j + 1);
    rhs[0] += mu * next[0];
    rhs[n - 1] += mu * next[n_int];

    let sys = TridiagonalSystem::constant(n, -mu, leading + 2.0 * mu, -mu, rhs)?;
    let gap = sys.dominance_gap();
    if !(gap > 0.0) {
        return Err(Error::NotDominant { step: j, gap });
    }
    Ok(sys)
}

/// Coefficient of u_j once the scheme at step j is written as
/// K u_{j+1} = −h_j u_j + (older levels) + f.
fn history_coefficient(coeffs: &StepCoefficients) -> f64 {
    match coeffs.j {
        0 => -coeffs.q_first,
        1 => coeffs.p_first - coeffs.at(1).b,
        j => coeffs.at(j - 1).c - coeffs.at(j).b,
    }
}

/// Marches all M steps; optionally records a stability row per step.
pub fn march(
    problem: &GfdeProblem,
    time_steps: usize,
    space_intervals: usize,
    collect_diagnostics: bool,
) -> Result<(SolutionField, Option<StabilityReport>)> {
    let mut field = build_grids(problem, time_steps, space_intervals)?;
    let mut report = collect_diagnostics.then(StabilityReport::default);
    for j in 0..time_steps {
        let coeffs = step_coefficients(&field.time, j, problem.alpha)?;
        let sys = assemble_step(j, &field, &coeffs, problem)?;
        let interior = thomas_solve(&sys)?;
        if !interior.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { level: j + 1 });
        }
        field.set_interior(j + 1, &interior);
        field.filled = j + 2;
        if let Some(report) = report.as_mut() {
            report
                .rows
                .push(stability::stability_row(j, &sys, history_coefficient(&coeffs)));
        }
    }
    Ok((field, report))
}
