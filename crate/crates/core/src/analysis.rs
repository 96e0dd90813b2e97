//! Error measurement, convergence orders and refinement studies.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcs::{ScaleFamily, WeightFamily};
use crate::gfd::{gfd_apply, gfd_reference, Differentiable, TimeGrid};
use crate::solver::{march, ExactSolution, GfdeProblem, ScalarFn, SolutionField, StabilityReport};

/// Which nodes enter the maximum absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorNorm {
    /// Every node of every time level.
    #[default]
    AllLevels,
    /// Only the nodes of the final level t = T.
    FinalLevel,
}

/// Max |u_j^i − u(x_i, t_j)| under the given norm.
pub fn field_error(field: &SolutionField, exact: &ExactSolution, norm: ErrorNorm) -> f64 {
    let x = field.space_grid().x_nodes();
    let t = field.time_grid().t_nodes();
    let first = match norm {
        ErrorNorm::AllLevels => 0,
        ErrorNorm::FinalLevel => field.filled_levels() - 1,
    };
    let mut worst = 0.0f64;
    for (j, row) in field.rows().enumerate().skip(first) {
        for (i, &u) in row.iter().enumerate() {
            worst = worst.max((u - (exact.u)(x[i], t[j])).abs());
        }
    }
    worst
}

/// Max absolute error over all nodes and all time levels.
pub fn max_abs_error(field: &SolutionField, exact: Option<&ExactSolution>) -> Result<f64> {
    let exact = exact.ok_or(Error::MissingExact)?;
    Ok(field_error(field, exact, ErrorNorm::AllLevels))
}

/// log₂(mae_coarse / mae_fine); absent unless both errors are positive and finite.
pub fn convergence_order(mae_coarse: f64, mae_fine: f64) -> Option<f64> {
    let ok = |v: f64| v > 0.0 && v.is_finite();
    (ok(mae_coarse) && ok(mae_fine)).then(|| (mae_coarse / mae_fine).log2())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refinement {
    Both,
    TimeOnly { space_intervals: usize },
    SpaceOnly { time_steps: usize },
}

/// Sequence of grids where each level halves the refined step sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StudySchedule {
    pub mode: Refinement,
    pub base_time_steps: usize,
    pub base_space_intervals: usize,
    pub levels: usize,
    pub norm: ErrorNorm,
    /// Keep per-step stability diagnostics for every level.
    pub diagnostics: bool,
}

impl StudySchedule {
    pub fn both(base_time_steps: usize, base_space_intervals: usize, levels: usize) -> Self {
        Self {
            mode: Refinement::Both,
            base_time_steps,
            base_space_intervals,
            levels,
            norm: ErrorNorm::AllLevels,
            diagnostics: false,
        }
    }

    pub fn time_only(base_time_steps: usize, space_intervals: usize, levels: usize) -> Self {
        Self {
            mode: Refinement::TimeOnly { space_intervals },
            base_time_steps,
            base_space_intervals: space_intervals,
            levels,
            norm: ErrorNorm::AllLevels,
            diagnostics: false,
        }
    }

    pub fn space_only(time_steps: usize, base_space_intervals: usize, levels: usize) -> Self {
        Self {
            mode: Refinement::SpaceOnly { time_steps },
            base_time_steps: time_steps,
            base_space_intervals,
            levels,
            norm: ErrorNorm::AllLevels,
            diagnostics: false,
        }
    }

    pub fn with_norm(mut self, norm: ErrorNorm) -> Self {
        self.norm = norm;
        self
    }

    pub fn with_diagnostics(mut self) -> Self {
        self.diagnostics = true;
        self
    }

    pub fn check(&self) -> Result<()> {
        if self.levels < 2 {
            return Err(Error::InvalidParameter(format!(
                "a study needs at least 2 levels, got {}",
                self.levels
            )));
        }
        if self.base_time_steps < 1 || self.base_space_intervals < 2 {
            return Err(Error::InvalidParameter(
                "study base grid needs M >= 1 and N >= 2".into(),
            ));
        }
        Ok(())
    }

    /// (M, N) at a level.
    pub fn grid(&self, level: usize) -> (usize, usize) {
        let f = 1usize << level;
        match self.mode {
            Refinement::Both => (self.base_time_steps * f, self.base_space_intervals * f),
            Refinement::TimeOnly { space_intervals } => (self.base_time_steps * f, space_intervals),
            Refinement::SpaceOnly { time_steps } => (time_steps, self.base_space_intervals * f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub time_steps: usize,
    pub space_intervals: Option<usize>,
    pub dt: f64,
    pub dx: Option<f64>,
    pub mae: f64,
    pub co: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportMeta {
    pub case: String,
    pub alpha: f64,
    pub delta: Option<f64>,
    pub scale: String,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceReport {
    pub meta: ReportMeta,
    pub rows: Vec<ConvergenceRow>,
    /// One entry per row when the schedule asked for diagnostics.
    pub stability: Vec<StabilityReport>,
}

impl ConvergenceReport {
    fn push(&mut self, mut row: ConvergenceRow) {
        row.co = self
            .rows
            .last()
            .and_then(|prev| convergence_order(prev.mae, row.mae));
        self.rows.push(row);
    }

    pub fn maes(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.mae).collect()
    }

    pub fn orders(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.co).collect()
    }

    /// True when every stored CO equals log₂ of the stored MAE ratio.
    pub fn is_self_consistent(&self) -> bool {
        self.rows.first().is_none_or(|r| r.co.is_none())
            && self
                .rows
                .windows(2)
                .all(|w| w[1].co == convergence_order(w[0].mae, w[1].mae))
    }
}

/// A study that failed part-way; rows computed before the failing level are kept.
#[derive(Debug, Clone)]
pub struct StudyFailure {
    pub partial: ConvergenceReport,
    pub level: usize,
    pub source: Error,
}

impl fmt::Display for StudyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "study aborted at level {} after {} rows: {}",
            self.level,
            self.partial.rows.len(),
            self.source
        )
    }
}

impl std::error::Error for StudyFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

fn meta_for(case: &str, problem: &GfdeProblem) -> ReportMeta {
    ReportMeta {
        case: case.to_string(),
        alpha: problem.alpha,
        delta: Some(problem.delta),
        scale: problem.scale.name(),
        weight: problem.weight.name(),
    }
}

/// Marches every level of the schedule and tabulates MAE and CO.
///
/// Levels are independent and run in parallel; the report is assembled in
/// level order.
pub fn run_refinement_study(
    case: &str,
    problem: &GfdeProblem,
    schedule: &StudySchedule,
) -> std::result::Result<ConvergenceReport, StudyFailure> {
    let mut report = ConvergenceReport {
        meta: meta_for(case, problem),
        ..Default::default()
    };
    let fail = |report: ConvergenceReport, level, source| StudyFailure {
        partial: report,
        level,
        source,
    };
    if let Err(e) = schedule.check() {
        return Err(fail(report, 0, e));
    }
    let Some(exact) = problem.exact.as_ref() else {
        return Err(fail(report, 0, Error::MissingExact));
    };

    type Level = (usize, usize, f64, Option<StabilityReport>);
    let results: Vec<Result<Level>> = (0..schedule.levels)
        .into_par_iter()
        .map(|level| {
            let (m, n) = schedule.grid(level);
            let (field, stability) = march(problem, m, n, schedule.diagnostics)?;
            Ok((m, n, field_error(&field, exact, schedule.norm), stability))
        })
        .collect();

    let (a, b) = problem.domain;
    for (level, result) in results.into_iter().enumerate() {
        match result {
            Ok((m, n, mae, stability)) => {
                report.push(ConvergenceRow {
                    time_steps: m,
                    space_intervals: Some(n),
                    dt: problem.horizon / m as f64,
                    dx: Some((b - a) / n as f64),
                    mae,
                    co: None,
                });
                report.stability.extend(stability);
            }
            Err(e) => return Err(fail(report, level, e)),
        }
    }
    Ok(report)
}

/// Pointwise test of the discrete operator on a smooth function of time.
#[derive(Clone)]
pub struct OperatorTest {
    pub g: ScalarFn,
    pub g_prime: ScalarFn,
    pub scale: ScaleFamily,
    pub weight: WeightFamily,
    pub alpha: f64,
    pub t_eval: f64,
    pub horizon: f64,
}

impl fmt::Debug for OperatorTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorTest")
            .field("scale", &self.scale)
            .field("weight", &self.weight)
            .field("alpha", &self.alpha)
            .field("t_eval", &self.t_eval)
            .field("horizon", &self.horizon)
            .finish_non_exhaustive()
    }
}

/// Tolerance handed to the quadrature reference in operator studies.
pub const REFERENCE_TOL: f64 = 1e-12;

impl OperatorTest {
    /// |discrete − reference| at the node nearest `t_eval` on an M-step grid.
    pub fn error_at(&self, time_steps: usize) -> Result<f64> {
        let grid = TimeGrid::new(self.scale, self.weight, self.horizon, time_steps)?;
        let node = grid.nearest_node(self.t_eval);
        if node == 0 {
            return Err(Error::InvalidParameter(format!(
                "t_eval = {} rounds to the initial node on {time_steps} steps",
                self.t_eval
            )));
        }
        let series: Vec<f64> = grid.t_nodes()[..=node].iter().map(|&t| (self.g)(t)).collect();
        let discrete = gfd_apply(&series, &grid, node - 1, self.alpha)?;
        let g = Differentiable::new(|t| (self.g)(t), |t| (self.g_prime)(t));
        let reference = gfd_reference(
            &g,
            &self.scale,
            &self.weight,
            self.alpha,
            grid.t_nodes()[node],
            REFERENCE_TOL,
        )?;
        Ok((discrete - reference).abs())
    }
}

/// Halves Δt `levels − 1` times from `base_time_steps` and tabulates the
/// pointwise operator error.
pub fn run_operator_study(
    case: &str,
    test: &OperatorTest,
    base_time_steps: usize,
    levels: usize,
) -> Result<ConvergenceReport> {
    if levels < 2 {
        return Err(Error::InvalidParameter(format!(
            "a study needs at least 2 levels, got {levels}"
        )));
    }
    let errors: Vec<Result<f64>> = (0..levels)
        .into_par_iter()
        .map(|level| test.error_at(base_time_steps << level))
        .collect();
    let mut report = ConvergenceReport {
        meta: ReportMeta {
            case: case.to_string(),
            alpha: test.alpha,
            delta: None,
            scale: test.scale.name(),
            weight: test.weight.name(),
        },
        ..Default::default()
    };
    for (level, err) in errors.into_iter().enumerate() {
        let m = base_time_steps << level;
        report.push(ConvergenceRow {
            time_steps: m,
            space_intervals: None,
            dt: test.horizon / m as f64,
            dx: None,
            mae: err?,
            co: None,
        });
    }
    Ok(report)
}

/// Convenience constructor for tests and catalog entries.
pub fn operator_test<G, D>(
    g: G,
    g_prime: D,
    scale: ScaleFamily,
    weight: WeightFamily,
    alpha: f64,
    t_eval: f64,
) -> OperatorTest
where
    G: Fn(f64) -> f64 + Send + Sync + 'static,
    D: Fn(f64) -> f64 + Send + Sync + 'static,
{
    OperatorTest {
        g: Arc::new(g),
        g_prime: Arc::new(g_prime),
        scale,
        weight,
        alpha,
        t_eval,
        horizon: 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::build_grids;

    #[test]
    fn order_examples() {
        assert_eq!(convergence_order(4.0e-3, 1.0e-3), Some(2.0));
        let co = convergence_order(0.012_682_479_250_020, 0.003_154_209_795_232).unwrap();
        assert!((co - 2.0075).abs() < 5e-5);
        let co = convergence_order(6.84003e-3, 1.04274e-3).unwrap();
        assert!((co - 2.71362).abs() < 5e-6);
        assert_eq!(convergence_order(0.0, 1.0), None);
        assert_eq!(convergence_order(1.0, -1.0), None);
        assert_eq!(convergence_order(f64::NAN, 1.0), None);
    }

    #[test]
    fn error_norms() {
        let p = GfdeProblem::null(0.5);
        let (mut field, _) = march(&p, 4, 4, false).unwrap();
        let exact = p.exact.as_ref().unwrap();
        assert_eq!(max_abs_error(&field, Some(exact)).unwrap(), 0.0);
        field.set(2, 3, 1e-3);
        assert_eq!(max_abs_error(&field, Some(exact)).unwrap(), 1e-3);
        assert_eq!(field_error(&field, exact, ErrorNorm::FinalLevel), 0.0);
        field.set(4, 1, -2e-3);
        assert_eq!(field_error(&field, exact, ErrorNorm::FinalLevel), 2e-3);
        assert_eq!(max_abs_error(&field, None), Err(Error::MissingExact));
    }

    #[test]
    fn unfilled_levels_are_ignored() {
        let p = GfdeProblem::null(0.5);
        let field = build_grids(&p, 4, 4).unwrap();
        let exact = p.exact.as_ref().unwrap();
        assert_eq!(field_error(&field, exact, ErrorNorm::AllLevels), 0.0);
    }

    #[test]
    fn schedule_grids() {
        let s = StudySchedule::both(8, 8, 5);
        assert_eq!(s.grid(0), (8, 8));
        assert_eq!(s.grid(4), (128, 128));
        let s = StudySchedule::time_only(10, 5000, 6);
        assert_eq!(s.grid(5), (320, 5000));
        let s = StudySchedule::space_only(600, 10, 6);
        assert_eq!(s.grid(3), (600, 80));
        assert!(StudySchedule::both(8, 8, 1).check().is_err());
    }

    #[test]
    fn study_row_contract() {
        let mut p = GfdeProblem::null(0.5);
        // u = t x(1 − x) has a nonzero discrete error only through the first interval.
        p.exact = Some(ExactSolution::new(
            |x, t| t * t * x * (1.0 - x),
            |x, t| 2.0 * t * x * (1.0 - x),
            |_, t| -2.0 * t * t,
        ));
        let g3 = crate::funcs::gamma_fn(2.5).unwrap();
        p.forcing = Arc::new(move |x: f64, t: f64| 2.0 * t.powf(1.5) / g3 * x * (1.0 - x) + 2.0 * t * t);
        let report = run_refinement_study("custom", &p, &StudySchedule::both(4, 4, 5)).unwrap();
        assert_eq!(report.rows.len(), 5);
        assert!(report.rows[0].co.is_none());
        assert_eq!(report.orders().iter().filter(|c| c.is_some()).count(), 4);
        assert!(report.is_self_consistent());
        assert!(report.rows.iter().all(|r| r.mae > 0.0));
    }

    #[test]
    fn study_without_exact_fails_with_empty_partial() {
        let mut p = GfdeProblem::null(0.5);
        p.exact = None;
        let err = run_refinement_study("x", &p, &StudySchedule::both(4, 4, 3)).unwrap_err();
        assert_eq!(err.source, Error::MissingExact);
        assert!(err.partial.rows.is_empty());
    }

    #[test]
    fn failing_level_keeps_partial_rows() {
        // ulp(1e15) = 0.125; validation samples at T/(2M) so only M = 4 passes.
        let mut p = GfdeProblem::null(0.5);
        p.scale = ScaleFamily::Linear { a: 1e15, b: 1.0 };
        let err = run_refinement_study("x", &p, &StudySchedule::both(4, 4, 4)).unwrap_err();
        assert_eq!(err.level, 1);
        assert_eq!(err.partial.rows.len(), 1);
        assert!(matches!(err.source, Error::Validation { .. }));
        assert!(err.to_string().contains("level 1"));
    }

    #[test]
    fn operator_study_on_data_linear_in_scale() {
        let t = operator_test(
            |t: f64| 0.5 + 3.0 * t * t,
            |t: f64| 6.0 * t,
            ScaleFamily::Power { p: 2.0 },
            WeightFamily::One,
            0.4,
            0.6,
        );
        let report = run_operator_study("lin", &t, 10, 3).unwrap();
        for row in &report.rows {
            assert!(row.mae <= 1e-11, "{row:?}");
        }
    }
}
