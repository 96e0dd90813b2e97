//! Text output: convergence tables, field dumps, stability rows, case list.

use std::fmt::Write;

use gfde_core::analysis::{ConvergenceReport, ConvergenceRow};
use gfde_core::catalog::CaseId;
use gfde_core::solver::{ExactSolution, SolutionField, StabilityReport};

use crate::config::Format;
use crate::CliError;

pub const REPORT_HEADER: &str = "dt,dx,mae,co";
pub const FIELD_HEADER: &str = "x,t,u_num,u_exact,abs_err";
pub const STABILITY_HEADER: &str =
    "level,nt,nx,step,gap,history_coefficient,amplification,within_bound,dominant,inverse_norm,amplification_exact";

pub fn render_report(report: &ConvergenceReport, format: Format) -> String {
    match format {
        Format::Csv => report_csv(report),
        Format::Md => report_md(report),
    }
}

fn report_csv(report: &ConvergenceReport) -> String {
    let mut s = String::new();
    writeln!(s, "{REPORT_HEADER}").unwrap();
    for row in &report.rows {
        let dx = row.dx.map(|v| v.to_string()).unwrap_or_default();
        let co = row.co.map(|v| format!("{v:.6}")).unwrap_or_default();
        writeln!(s, "{},{},{:.12e},{}", row.dt, dx, row.mae, co).unwrap();
    }
    s
}

/// `1/M` when the step is the reciprocal of an integer, else the decimal value.
fn step_label(h: f64) -> String {
    let inv = 1.0 / h;
    if (inv - inv.round()).abs() <= 1e-9 * inv && inv.round() >= 1.0 {
        format!("1/{}", inv.round() as u64)
    } else {
        format!("{h}")
    }
}

fn report_md(report: &ConvergenceReport) -> String {
    let mut s = String::new();
    let m = &report.meta;
    write!(s, "{}: α = {}", m.case, m.alpha).unwrap();
    if let Some(d) = m.delta {
        write!(s, ", δ = {d}").unwrap();
    }
    writeln!(s, ", {}, {}\n", m.scale, m.weight).unwrap();
    writeln!(s, "| Δt | Δx | MAE | CO |").unwrap();
    writeln!(s, "|---|---|---|---|").unwrap();
    for row in &report.rows {
        let dx = row.dx.map(step_label).unwrap_or_else(|| "-".into());
        let co = row.co.map(|v| format!("{v:.4}")).unwrap_or_default();
        writeln!(
            s,
            "| {} | {} | {:.6e} | {} |",
            step_label(row.dt),
            dx,
            row.mae,
            co
        )
        .unwrap();
    }
    s
}

/// One row of a report csv as read back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub dt: f64,
    pub dx: Option<f64>,
    pub mae: f64,
    pub co: Option<f64>,
}

pub fn parse_report_csv(text: &str) -> Result<Vec<CsvRow>, CliError> {
    let mut lines = text.lines();
    if lines.next() != Some(REPORT_HEADER) {
        return Err(CliError::Config(format!(
            "report csv must start with '{REPORT_HEADER}'"
        )));
    }
    let num = |field: &str, line: usize| {
        field
            .parse::<f64>()
            .map_err(|_| CliError::Config(format!("report csv line {line}: bad number '{field}'")))
    };
    let opt = |field: &str, line: usize| {
        if field.is_empty() {
            Ok(None)
        } else {
            num(field, line).map(Some)
        }
    };
    lines
        .enumerate()
        .map(|(i, line)| {
            let n = i + 2;
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(CliError::Config(format!(
                    "report csv line {n}: expected 4 fields"
                )));
            }
            Ok(CsvRow {
                dt: num(f[0], n)?,
                dx: opt(f[1], n)?,
                mae: num(f[2], n)?,
                co: opt(f[3], n)?,
            })
        })
        .collect()
}

impl From<&ConvergenceRow> for CsvRow {
    fn from(r: &ConvergenceRow) -> Self {
        CsvRow {
            dt: r.dt,
            dx: r.dx,
            mae: r.mae,
            co: r.co,
        }
    }
}

/// Long-form dump, one line per node, levels in time order.
pub fn render_field(field: &SolutionField, exact: Option<&ExactSolution>) -> String {
    let mut s = String::new();
    writeln!(s, "{FIELD_HEADER}").unwrap();
    let x = field.space_grid().x_nodes();
    let t = field.time_grid().t_nodes();
    for (j, row) in field.rows().enumerate() {
        for (i, &u) in row.iter().enumerate() {
            match exact {
                Some(e) => {
                    let ue = (e.u)(x[i], t[j]);
                    writeln!(
                        s,
                        "{},{},{:.12e},{:.12e},{:.6e}",
                        x[i],
                        t[j],
                        u,
                        ue,
                        (u - ue).abs()
                    )
                    .unwrap();
                }
                None => writeln!(s, "{},{},{:.12e},,", x[i], t[j], u).unwrap(),
            }
        }
    }
    s
}

fn opt_e(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.6e}")).unwrap_or_default()
}

/// Stability rows of several runs, each tagged with its level and grid.
pub fn render_stability<'a>(
    runs: impl IntoIterator<Item = (usize, usize, usize, &'a StabilityReport)>,
) -> String {
    let mut s = String::new();
    writeln!(s, "{STABILITY_HEADER}").unwrap();
    for (level, nt, nx, report) in runs {
        for r in &report.rows {
            writeln!(
                s,
                "{level},{nt},{nx},{},{:.6e},{:.6e},{:.6e},{},{},{},{}",
                r.step,
                r.gap,
                r.history_coefficient,
                r.amplification,
                r.within_bound,
                r.dominant,
                opt_e(r.inverse_norm),
                opt_e(r.amplification_exact)
            )
            .unwrap();
        }
    }
    s
}

pub fn render_cases(format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Csv => {
            writeln!(s, "id,kind,default_alpha,summary").unwrap();
            for id in CaseId::ALL {
                writeln!(
                    s,
                    "{},{},{},\"{}\"",
                    id,
                    kind(id),
                    id.default_alpha(),
                    id.summary()
                )
                .unwrap();
            }
        }
        Format::Md => {
            writeln!(s, "| id | kind | default α | summary |").unwrap();
            writeln!(s, "|---|---|---|---|").unwrap();
            for id in CaseId::ALL {
                writeln!(
                    s,
                    "| {} | {} | {} | {} |",
                    id,
                    kind(id),
                    id.default_alpha(),
                    id.summary()
                )
                .unwrap();
            }
        }
    }
    s
}

fn kind(id: CaseId) -> &'static str {
    if id.is_operator() {
        "operator"
    } else {
        "pde"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gfde_core::analysis::ReportMeta;

    fn report(rows: &[(usize, f64)]) -> ConvergenceReport {
        let mut r = ConvergenceReport {
            meta: ReportMeta {
                case: "ex3".into(),
                alpha: 0.4,
                delta: Some(1.0),
                scale: "z(t)=t".into(),
                weight: "w(t)=1".into(),
            },
            ..Default::default()
        };
        let mut prev: Option<f64> = None;
        for &(m, mae) in rows {
            r.rows.push(ConvergenceRow {
                time_steps: m,
                space_intervals: Some(m),
                dt: 1.0 / m as f64,
                dx: Some(1.0 / m as f64),
                mae,
                co: prev.map(|p| (p / mae).log2()),
            });
            prev = Some(mae);
        }
        r
    }

    #[test]
    fn single_row_csv_has_empty_order() {
        let text = render_report(&report(&[(10, 7.2312969103e-3)]), Format::Csv);
        assert_eq!(text, "dt,dx,mae,co\n0.1,0.1,7.231296910300e-3,\n");
    }

    #[test]
    fn markdown_layout() {
        let text = render_report(&report(&[(10, 7.2313e-3), (20, 1.8017e-3)]), Format::Md);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "ex3: α = 0.4, δ = 1, z(t)=t, w(t)=1");
        assert_eq!(lines[2], "| Δt | Δx | MAE | CO |");
        assert_eq!(lines[4], "| 1/10 | 1/10 | 7.231300e-3 |  |");
        assert!(lines[5].starts_with("| 1/20 | 1/20 | 1.801700e-3 | 2.00"));
    }

    #[test]
    fn step_labels() {
        assert_eq!(step_label(0.125), "1/8");
        assert_eq!(step_label(1.0 / 600.0), "1/600");
        assert_eq!(step_label(0.3), "0.3");
    }

    #[test]
    fn csv_reads_back() {
        let r = report(&[(8, 1.2e-2), (16, 3.1e-3), (32, 7.7e-4)]);
        let rows = parse_report_csv(&render_report(&r, Format::Csv)).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].co, None);
        assert_eq!(rows[2].dt, 1.0 / 32.0);
        assert!((rows[1].co.unwrap() - (1.2e-2f64 / 3.1e-3).log2()).abs() < 1e-6);
        assert!(parse_report_csv("a,b\n").is_err());
        assert!(parse_report_csv("dt,dx,mae,co\n0.1,,x,\n").is_err());
    }

    #[test]
    fn case_list_quotes_summaries() {
        let text = render_cases(Format::Csv);
        assert_eq!(text.lines().count(), 1 + CaseId::ALL.len());
        assert!(text.contains("ex4,pde,0.6,\"u = sin(pi x) e^-t, z = t, w = e^2t\""));
    }
}
