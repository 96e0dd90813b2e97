//! Command-line front end for `gfde`.
//!
//! `parse_config` turns argv (plus an optional config file) into a
//! [`RunConfig`], `execute` runs it and `run` wires both to stdout, files
//! and exit codes:
//!
//! | code | meaning |
//! |---|---|
//! | 0 | success |
//! | 1 | I/O failure |
//! | 2 | configuration error |
//! | 3 | numerical failure |
//! | 4 | consistency check failed |

pub mod config;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use gfde_core::analysis::{run_operator_study, run_refinement_study, ConvergenceReport, StudySchedule};
use gfde_core::catalog::{get_case_with, verify_case_consistency, CaseId, Ex4Forcing};
use gfde_core::solver::march;
use thiserror::Error;

pub use config::{parse_config, Command, Format, RunConfig};
pub use render::{parse_report_csv, render_report};

/// Residual tolerance of `verify`.
pub const VERIFY_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(#[source] clap::Error),
    #[error("{0}")]
    Config(String),
    #[error("{message}")]
    Numerical {
        message: String,
        partial: Option<Box<Output>>,
    },
    #[error("{message}")]
    Inconsistent { message: String, output: Box<Output> },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(e) => e.exit_code(),
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical { .. } => 3,
            CliError::Inconsistent { .. } => 4,
        }
    }

    fn numerical(e: impl std::fmt::Display) -> Self {
        CliError::Numerical {
            message: e.to_string(),
            partial: None,
        }
    }
}

/// Everything a command produces.
#[derive(Debug, Clone, Default)]
pub struct Output {
    /// Main artifact: csv/md table, field dump or case list.
    pub text: String,
    /// Stability csv, when diagnostics were requested.
    pub diagnostics: Option<String>,
    /// Short remarks for stderr.
    pub notes: Vec<String>,
    pub report: Option<ConvergenceReport>,
}

fn case_of(cfg: &RunConfig) -> Result<CaseId, CliError> {
    cfg.case
        .ok_or_else(|| CliError::Config("case is required".into()))
}

fn pde(cfg: &RunConfig) -> Result<gfde_core::solver::GfdeProblem, CliError> {
    let forcing = if cfg.ex4_printed_forcing {
        Ex4Forcing::Printed
    } else {
        Ex4Forcing::Consistent
    };
    let mut p = get_case_with(case_of(cfg)?, cfg.alpha, forcing)
        .and_then(|c| c.into_problem())
        .map_err(|e| CliError::Config(e.to_string()))?;
    p.delta = cfg.delta;
    Ok(p)
}

pub fn schedule(cfg: &RunConfig) -> StudySchedule {
    let s = match cfg.refine {
        config::RefineMode::Both => StudySchedule::both(cfg.time_steps, cfg.space_intervals, cfg.levels),
        config::RefineMode::Time => StudySchedule::time_only(
            cfg.time_steps,
            cfg.fixed_space_intervals.unwrap_or(cfg.space_intervals),
            cfg.levels,
        ),
        config::RefineMode::Space => StudySchedule::space_only(
            cfg.fixed_time_steps.unwrap_or(cfg.time_steps),
            cfg.space_intervals,
            cfg.levels,
        ),
    };
    let s = s.with_norm(cfg.norm.into());
    if cfg.diagnostics {
        s.with_diagnostics()
    } else {
        s
    }
}

fn stability_notes(report: &ConvergenceReport) -> Vec<String> {
    report
        .rows
        .iter()
        .zip(&report.stability)
        .enumerate()
        .map(|(level, (row, st))| {
            let outside = st.rows.iter().filter(|r| !r.within_bound).count();
            format!(
                "level {level} (nt {}, nx {}): max amplification {:.6}, {outside} of {} steps outside the unit bound",
                row.time_steps,
                row.space_intervals.unwrap_or(0),
                st.max_amplification(0).unwrap_or(0.0),
                st.rows.len()
            )
        })
        .collect()
}

fn study_output(report: ConvergenceReport, cfg: &RunConfig) -> Output {
    let diagnostics = cfg.diagnostics.then(|| {
        render::render_stability(
            report
                .rows
                .iter()
                .zip(&report.stability)
                .enumerate()
                .map(|(level, (row, st))| (level, row.time_steps, row.space_intervals.unwrap_or(0), st)),
        )
    });
    Output {
        text: render_report(&report, cfg.format),
        diagnostics,
        notes: if cfg.diagnostics {
            stability_notes(&report)
        } else {
            Vec::new()
        },
        report: Some(report),
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Output, CliError> {
    match cfg.command {
        Command::List => Ok(Output {
            text: render::render_cases(cfg.format),
            ..Default::default()
        }),
        Command::Solve => {
            let p = pde(cfg)?;
            let (field, report) = march(&p, cfg.time_steps, cfg.space_intervals, cfg.diagnostics)
                .map_err(CliError::numerical)?;
            let mut out = Output {
                text: render::render_field(&field, p.exact.as_ref()),
                ..Default::default()
            };
            if let Some(st) = report {
                let outside = st.rows.iter().filter(|r| !r.within_bound).count();
                out.notes.push(format!(
                    "max amplification {:.6}, {outside} of {} steps outside the unit bound",
                    st.max_amplification(0).unwrap_or(0.0),
                    st.rows.len()
                ));
                out.diagnostics = Some(render::render_stability([(
                    0,
                    cfg.time_steps,
                    cfg.space_intervals,
                    &st,
                )]));
            }
            Ok(out)
        }
        Command::Study => {
            let p = pde(cfg)?;
            let case = case_of(cfg)?;
            match run_refinement_study(case.as_str(), &p, &schedule(cfg)) {
                Ok(report) => Ok(study_output(report, cfg)),
                Err(failure) => Err(CliError::Numerical {
                    message: failure.to_string(),
                    partial: (!failure.partial.rows.is_empty())
                        .then(|| Box::new(study_output(failure.partial.clone(), cfg))),
                }),
            }
        }
        Command::Operator => {
            let case = case_of(cfg)?;
            let test = get_case_with(case, cfg.alpha, Ex4Forcing::Consistent)
                .and_then(|c| c.into_operator())
                .map_err(|e| CliError::Config(e.to_string()))?;
            let report = run_operator_study(case.as_str(), &test, cfg.time_steps, cfg.levels)
                .map_err(CliError::numerical)?;
            Ok(Output {
                text: render_report(&report, cfg.format),
                report: Some(report),
                ..Default::default()
            })
        }
        Command::Verify => {
            let p = pde(cfg)?;
            let r = verify_case_consistency(&p, VERIFY_TOL).map_err(CliError::numerical)?;
            let verdict = if r.consistent() {
                "consistent"
            } else {
                "INCONSISTENT"
            };
            let text = format!(
                "{} alpha={} max_residual={:.6e} at x={} t={} probes={} tol={:e} {verdict}\n",
                case_of(cfg)?,
                cfg.alpha,
                r.max_residual,
                r.worst_at.0,
                r.worst_at.1,
                r.probes,
                r.tol
            );
            let out = Output {
                text,
                ..Default::default()
            };
            if r.consistent() {
                Ok(out)
            } else {
                Err(CliError::Inconsistent {
                    message: format!(
                        "consistency check failed: residual {:.3e} exceeds {:e}",
                        r.max_residual, r.tol
                    ),
                    output: Box::new(out),
                })
            }
        }
    }
}

/// `table.csv` -> `table.stability.csv`
pub fn diagnostics_path(out: &Path) -> PathBuf {
    out.with_extension("stability.csv")
}

fn emit(
    out: &Output,
    cfg: &RunConfig,
    stdout: &mut impl Write,
    stderr: &mut impl Write,
) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &out.text)?;
            if let Some(d) = &out.diagnostics {
                std::fs::write(diagnostics_path(path), d)?;
            }
        }
        None => {
            stdout.write_all(out.text.as_bytes())?;
            if let Some(d) = &out.diagnostics {
                stderr.write_all(d.as_bytes())?;
            }
        }
    }
    for note in &out.notes {
        writeln!(stderr, "{note}")?;
    }
    Ok(())
}

/// Full invocation; returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_config(argv) {
        Ok(cfg) => cfg,
        Err(CliError::Usage(e)) => {
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return e.exit_code();
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let result = execute(&cfg);
    let written = match &result {
        Ok(out) => emit(out, &cfg, stdout, stderr),
        Err(CliError::Numerical {
            partial: Some(out), ..
        })
        | Err(CliError::Inconsistent { output: out, .. }) => emit(out, &cfg, stdout, stderr),
        Err(_) => Ok(()),
    };
    if let Err(e) = result {
        let _ = writeln!(stderr, "error: {e}");
        return e.exit_code();
    }
    match written {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
