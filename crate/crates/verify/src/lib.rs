//! Small harness for checking convergence studies against published tables.
//!
//! A criterion is a function returning [`Check`]s; it passes when it
//! produced at least one check and all of them hold. [`run_criteria`] prints
//! one `PASS`/`FAIL` line per criterion followed by indented details.

use std::io::Write;
use std::time::Instant;

use gfde_core::analysis::ConvergenceReport;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub ok: bool,
    pub detail: String,
}

impl Check {
    pub fn new(ok: bool, detail: impl Into<String>) -> Self {
        Self {
            ok,
            detail: detail.into(),
        }
    }
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

/// Row-by-row MAE (relative) and CO (absolute) comparison.
///
/// `co[i]` is compared with the order of row `i + 1`; an empty `co` skips the
/// order checks.
pub fn compare_table(
    label: &str,
    report: &ConvergenceReport,
    mae: &[f64],
    mae_rel: f64,
    co: &[f64],
    co_abs: f64,
) -> Vec<Check> {
    let mut checks = Vec::new();
    if report.rows.len() != mae.len() {
        checks.push(Check::new(
            false,
            format!("{label}: expected {} rows, got {}", mae.len(), report.rows.len()),
        ));
        return checks;
    }
    for (i, (row, &want)) in report.rows.iter().zip(mae).enumerate() {
        let e = rel_err(row.mae, want);
        checks.push(Check::new(
            e <= mae_rel,
            format!(
                "{label} row {}: MAE {:.6e} vs {:.6e} (rel {:.2e}, tol {:.0e})",
                i + 1,
                row.mae,
                want,
                e,
                mae_rel
            ),
        ));
    }
    for (i, &want) in co.iter().enumerate() {
        let got = report.rows.get(i + 1).and_then(|r| r.co);
        let ok = got.is_some_and(|g| (g - want).abs() <= co_abs);
        checks.push(Check::new(
            ok,
            format!(
                "{label} row {}: CO {} vs {want} (tol {co_abs})",
                i + 2,
                got.map_or("-".into(), |g| format!("{g:.4}"))
            ),
        ));
    }
    checks
}

/// (id, title, body); the body may stash results in the shared state for
/// later criteria.
pub type Criterion<S> = (&'static str, &'static str, fn(&mut S) -> Vec<Check>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub passed: usize,
    pub total: usize,
}

impl Summary {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

pub fn run_criteria<S>(criteria: &[Criterion<S>], state: &mut S, out: &mut impl Write) -> Summary {
    let mut passed = 0;
    for (id, title, body) in criteria {
        let start = Instant::now();
        let checks = body(state);
        let ok = !checks.is_empty() && checks.iter().all(|c| c.ok);
        passed += usize::from(ok);
        let _ = writeln!(
            out,
            "{} criterion {id}: {title} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for c in &checks {
            let _ = writeln!(out, "    [{}] {}", if c.ok { "ok" } else { "x" }, c.detail);
        }
    }
    let summary = Summary {
        passed,
        total: criteria.len(),
    };
    let _ = writeln!(out, "{} of {} criteria passed", summary.passed, summary.total);
    summary
}
