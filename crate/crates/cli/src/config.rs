//! Run configuration: command-line flags layered over an optional config file.
//!
//! The file is either a JSON object or `key = value` lines (`#` starts a
//! comment). Keys are the flag names without the leading dashes; `_` and `-`
//! are interchangeable. Flags given on the command line win over file values.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use gfde_core::analysis::ErrorNorm;
use gfde_core::catalog::CaseId;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// March one grid and dump the field.
    Solve,
    /// Refinement study for a PDE case.
    Study,
    /// Refinement study for a pointwise operator test.
    Operator,
    /// List the built-in cases.
    List,
    /// Check that a case's forcing matches its exact solution.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum RefineMode {
    /// Halve Δt and Δx together.
    #[default]
    Both,
    /// Halve Δt, keep Δx fixed.
    Time,
    /// Halve Δx, keep Δt fixed.
    Space,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum NormArg {
    /// Maximum over every node of every level.
    #[default]
    All,
    /// Maximum over the final time level only.
    Final,
}

impl From<NormArg> for ErrorNorm {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::All => ErrorNorm::AllLevels,
            NormArg::Final => ErrorNorm::FinalLevel,
        }
    }
}

pub const DEFAULT_NT: usize = 8;
pub const DEFAULT_NX: usize = 8;
pub const DEFAULT_LEVELS: usize = 5;

/// Solver for time-fractional diffusion equations with generalized
/// fractional derivatives.
#[derive(Debug, Parser)]
#[command(name = "gfde", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Case id (see `gfde list`).
    #[arg(long)]
    pub case: Option<String>,
    /// Fractional order in (0, 1); defaults to the case's own value.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Diffusivity [default: 1].
    #[arg(long)]
    pub delta: Option<f64>,
    /// Time steps M (base level for studies) [default: 8].
    #[arg(long)]
    pub nt: Option<usize>,
    /// Space intervals N (base level for studies) [default: 8].
    #[arg(long)]
    pub nx: Option<usize>,
    /// Number of refinement levels [default: 5].
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long, value_enum)]
    pub refine: Option<RefineMode>,
    /// Time steps held fixed under `--refine space` [default: nt].
    #[arg(long)]
    pub fixed_nt: Option<usize>,
    /// Space intervals held fixed under `--refine time` [default: nx].
    #[arg(long)]
    pub fixed_nx: Option<usize>,
    /// Nodes entering the error maximum.
    #[arg(long, value_enum)]
    pub norm: Option<NormArg>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the main output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit per-step stability diagnostics.
    #[arg(long)]
    pub diagnostics: bool,
    /// Build ex4 with the alternative forcing term.
    #[arg(long)]
    pub ex4_printed_forcing: bool,
    /// Config file (JSON object or key=value lines).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// `None` only for `list`.
    pub case: Option<CaseId>,
    pub alpha: f64,
    pub delta: f64,
    pub time_steps: usize,
    pub space_intervals: usize,
    pub levels: usize,
    pub refine: RefineMode,
    pub fixed_time_steps: Option<usize>,
    pub fixed_space_intervals: Option<usize>,
    pub norm: NormArg,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub diagnostics: bool,
    pub ex4_printed_forcing: bool,
}

/// Values read from a config file, keyed by normalized flag name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileValues(BTreeMap<String, String>);

const KEYS: [&str; 14] = [
    "case",
    "alpha",
    "delta",
    "nt",
    "nx",
    "levels",
    "refine",
    "fixed-nt",
    "fixed-nx",
    "norm",
    "format",
    "out",
    "diagnostics",
    "ex4-printed-forcing",
];

fn normalize_key(key: &str) -> String {
    key.trim()
        .trim_start_matches('-')
        .replace('_', "-")
        .to_ascii_lowercase()
}

impl FileValues {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let trimmed = text.trim_start();
        let mut map = BTreeMap::new();
        let mut insert = |key: &str, value: String| {
            let key = normalize_key(key);
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!("unknown config key '{key}'")));
            }
            map.insert(key, value);
            Ok(())
        };
        if trimmed.starts_with('{') {
            let json: serde_json::Value = serde_json::from_str(text)
                .map_err(|e| CliError::Config(format!("malformed config file: {e}")))?;
            let obj = json
                .as_object()
                .ok_or_else(|| CliError::Config("malformed config file: expected an object".into()))?;
            for (key, value) in obj {
                let value = match value {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Number(n) => n.to_string(),
                    serde_json::Value::Bool(b) => b.to_string(),
                    _ => {
                        return Err(CliError::Config(format!(
                            "{}: expected a string, number or boolean",
                            normalize_key(key)
                        )))
                    }
                };
                insert(key, value)?;
            }
        } else {
            for (n, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    CliError::Config(format!(
                        "malformed config file: line {}: expected key=value",
                        n + 1
                    ))
                })?;
                insert(key, value.trim().trim_matches('"').to_string())?;
            }
        }
        Ok(FileValues(map))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn number<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Config(format!("{key}: cannot parse '{v}' as a number")))
            })
            .transpose()
    }

    fn choice<T: ValueEnum>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|v| {
                T::from_str(v, true).map_err(|_| CliError::Config(format!("{key}: unknown value '{v}'")))
            })
            .transpose()
    }

    fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.get(key).map(str::to_ascii_lowercase).as_deref() {
            None | Some("false" | "0" | "no") => Ok(false),
            Some("true" | "1" | "yes") => Ok(true),
            Some(v) => Err(CliError::Config(format!(
                "{key}: expected true or false, got '{v}'"
            ))),
        }
    }
}

/// Parses argv (program name first) and reads `--config` if given.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(CliError::Usage)?;
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("config: cannot read {}: {e}", path.display())))?;
            FileValues::parse(&text)?
        }
        None => FileValues::default(),
    };
    resolve(cli, &file)
}

/// Layers flags over file values, fills defaults and validates.
pub fn resolve(cli: Cli, file: &FileValues) -> Result<RunConfig, CliError> {
    let case_text = cli.case.clone().or_else(|| file.get("case").map(str::to_string));
    let case = case_text
        .map(|s| {
            s.parse::<CaseId>().map_err(|_| {
                let known: Vec<_> = CaseId::ALL.iter().map(|c| c.as_str()).collect();
                CliError::Config(format!(
                    "case: unknown case id '{s}' (known: {})",
                    known.join(", ")
                ))
            })
        })
        .transpose()?;
    if case.is_none() && cli.command != Command::List {
        return Err(CliError::Config("case is required".into()));
    }

    let alpha = match cli.alpha.or(file.number("alpha")?) {
        Some(a) => a,
        None => case.map_or(0.5, CaseId::default_alpha),
    };
    let delta = cli.delta.or(file.number("delta")?).unwrap_or(1.0);
    let cfg = RunConfig {
        command: cli.command,
        case,
        alpha,
        delta,
        time_steps: cli.nt.or(file.number("nt")?).unwrap_or(DEFAULT_NT),
        space_intervals: cli.nx.or(file.number("nx")?).unwrap_or(DEFAULT_NX),
        levels: cli.levels.or(file.number("levels")?).unwrap_or(DEFAULT_LEVELS),
        refine: cli.refine.or(file.choice("refine")?).unwrap_or_default(),
        fixed_time_steps: cli.fixed_nt.or(file.number("fixed-nt")?),
        fixed_space_intervals: cli.fixed_nx.or(file.number("fixed-nx")?),
        norm: cli.norm.or(file.choice("norm")?).unwrap_or_default(),
        format: cli.format.or(file.choice("format")?).unwrap_or_default(),
        out: cli.out.or_else(|| file.get("out").map(PathBuf::from)),
        diagnostics: cli.diagnostics || file.flag("diagnostics")?,
        ex4_printed_forcing: cli.ex4_printed_forcing || file.flag("ex4-printed-forcing")?,
    };
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0,1), got {}", self.alpha));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return bad(format!("delta must be positive, got {}", self.delta));
        }
        if self.time_steps < 1 {
            return bad("nt must be at least 1".into());
        }
        if self.space_intervals < 2 {
            return bad(format!("nx must be at least 2, got {}", self.space_intervals));
        }
        if self.fixed_time_steps == Some(0) {
            return bad("fixed-nt must be at least 1".into());
        }
        if matches!(self.fixed_space_intervals, Some(n) if n < 2) {
            return bad("fixed-nx must be at least 2".into());
        }
        let studies = matches!(self.command, Command::Study | Command::Operator);
        if studies && self.levels < 2 {
            return bad(format!("levels must be at least 2, got {}", self.levels));
        }
        if let Some(case) = self.case {
            match self.command {
                Command::Operator if !case.is_operator() => {
                    return bad(format!("case: {case} is a PDE case; use the study command"));
                }
                Command::Solve | Command::Study | Command::Verify if case.is_operator() => {
                    return bad(format!(
                        "case: {case} is an operator test; use the operator command"
                    ));
                }
                _ => {}
            }
        }
        if self.command == Command::Solve && self.format == Format::Md {
            return bad("format: solve writes csv only".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("gfde").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn key_value_file_with_comments() {
        let f =
            FileValues::parse("# run\ncase = ex3\nfixed_nx=512  # fine grid\n\nformat = \"md\"\n").unwrap();
        assert_eq!(f.get("case"), Some("ex3"));
        assert_eq!(f.get("fixed-nx"), Some("512"));
        assert_eq!(f.get("format"), Some("md"));
    }

    #[test]
    fn json_file() {
        let f = FileValues::parse(r#"{"case": "ex1", "alpha": 0.6, "diagnostics": true, "fixed-nt": 600}"#)
            .unwrap();
        assert_eq!(f.get("alpha"), Some("0.6"));
        assert_eq!(f.get("diagnostics"), Some("true"));
        assert_eq!(f.get("fixed-nt"), Some("600"));
    }

    #[test]
    fn file_errors_name_the_problem() {
        let e = FileValues::parse("case ex1").unwrap_err();
        assert_eq!(e.to_string(), "malformed config file: line 1: expected key=value");
        let e = FileValues::parse("speed = 3").unwrap_err();
        assert_eq!(e.to_string(), "unknown config key 'speed'");
        let e = FileValues::parse(r#"{"alpha": [1]}"#).unwrap_err();
        assert!(e.to_string().starts_with("alpha:"));
        let e = FileValues::parse("{ nope").unwrap_err();
        assert!(e.to_string().starts_with("malformed config file"));
    }

    #[test]
    fn file_values_are_typed_by_key() {
        let f = FileValues::parse("nt = many").unwrap();
        let e = resolve(cli(&["solve", "--case", "ex1"]), &f).unwrap_err();
        assert_eq!(e.to_string(), "nt: cannot parse 'many' as a number");
        let f = FileValues::parse("refine = diagonal").unwrap();
        let e = resolve(cli(&["study", "--case", "ex1"]), &f).unwrap_err();
        assert_eq!(e.to_string(), "refine: unknown value 'diagonal'");
    }

    #[test]
    fn defaults() {
        let c = resolve(cli(&["study", "--case", "ex5"]), &FileValues::default()).unwrap();
        assert_eq!(c.alpha, 0.15);
        assert_eq!(c.delta, 1.0);
        assert_eq!((c.time_steps, c.space_intervals, c.levels), (8, 8, 5));
        assert_eq!(c.refine, RefineMode::Both);
        assert_eq!(c.norm, NormArg::All);
        assert_eq!(c.format, Format::Csv);
        assert!(!c.diagnostics);
    }

    #[test]
    fn command_and_case_must_agree() {
        let e = resolve(cli(&["operator", "--case", "ex1"]), &FileValues::default()).unwrap_err();
        assert!(e.to_string().contains("PDE case"));
        let e = resolve(cli(&["solve", "--case", "op2"]), &FileValues::default()).unwrap_err();
        assert!(e.to_string().contains("operator test"));
        let e = resolve(cli(&["verify"]), &FileValues::default()).unwrap_err();
        assert_eq!(e.to_string(), "case is required");
        assert!(resolve(cli(&["list"]), &FileValues::default()).is_ok());
    }

    #[test]
    fn grid_limits() {
        for (args, msg) in [
            (
                &["solve", "--case", "ex1", "--nt", "0"][..],
                "nt must be at least 1",
            ),
            (
                &["solve", "--case", "ex1", "--nx", "1"][..],
                "nx must be at least 2, got 1",
            ),
            (
                &["study", "--case", "ex1", "--levels", "1"][..],
                "levels must be at least 2, got 1",
            ),
            (
                &["solve", "--case", "ex1", "--delta", "0"][..],
                "delta must be positive, got 0",
            ),
        ] {
            assert_eq!(
                resolve(cli(args), &FileValues::default())
                    .unwrap_err()
                    .to_string(),
                msg
            );
        }
    }
}
