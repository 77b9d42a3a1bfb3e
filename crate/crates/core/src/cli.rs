//! Command-line front end.
//!
//! Exit codes: 0 all checks pass, 1 an identity failed, 2 usage or
//! configuration error, 3 extraction residue on user-supplied input.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;

use crate::forms::{DifferentialForm, FormError};
use crate::groupoid::{GroupoidKind, TangentVector};
use crate::harness::{render_table, run_check, run_suite, CheckConfig, CheckReport, CHECK_NAMES};
use crate::io::{matrix_from_rows, matrix_to_rows, EvalInput, IoError};
use crate::operators::{d_contour, d_plus, d_times, mc_defect};
use crate::representation::{Representation, RepresentationKind};
use crate::weil::{GeneratorContext, WeilMatrix};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESIDUE: i32 = 3;

pub const EVAL_OPS: [&str; 8] = ["dplus", "dtimes", "dcontour", "mcdefect", "bracket", "dplus2", "dtimes2", "form"];

#[derive(Debug, Parser)]
#[command(name = "coboundary", version, about = "Exact checks for coboundary operators on groupoid microcubes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run named checks and emit a JSON report.
    Verify(VerifyArgs),
    /// Evaluate one operator on a single instance.
    Eval {
        /// dplus, dtimes, dcontour, mcdefect, bracket, dplus2, dtimes2 or form
        #[arg(long)]
        op: String,
        /// JSON or TOML instance file
        #[arg(long)]
        input: PathBuf,
    },
    /// Render a JSON report as a text table.
    Report {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    /// `all` or a check name
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    base_dim: Option<usize>,
    #[arg(long)]
    fiber_dim: Option<usize>,
    /// trivial, adjoint, gauge or all
    #[arg(long)]
    rep: Option<String>,
    /// pair, bundle or all
    #[arg(long)]
    groupoid: Option<String>,
    /// comma-separated form degrees, e.g. 0,1,2
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    /// bound on random numerators
    #[arg(long)]
    bound: Option<i64>,
    /// write the JSON report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// TOML file with the same keys as the flags; flags win
    #[arg(long)]
    config: Option<PathBuf>,
    /// report 0 for `millis`, making the output byte-stable
    #[arg(long)]
    no_timing: bool,
}

/// Keys accepted in a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    suite: Option<String>,
    seed: Option<u64>,
    trials: Option<usize>,
    base_dim: Option<usize>,
    fiber_dim: Option<usize>,
    rep: Option<String>,
    groupoid: Option<String>,
    degrees: Option<Vec<usize>>,
    bound: Option<i64>,
    output: Option<PathBuf>,
    gauge: Option<Vec<Vec<String>>>,
    no_timing: Option<bool>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Form(f) => f.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<FormError> for Failure {
    fn from(e: FormError) -> Self {
        let code = if e.is_residue() { EXIT_RESIDUE } else { EXIT_USAGE };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn filter<T: std::str::FromStr<Err = String>>(value: Option<String>) -> Result<Option<T>, Failure> {
    match value.as_deref() {
        None | Some("all") => Ok(None),
        Some(s) => s.parse().map(Some).map_err(Failure::usage),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn verify(args: VerifyArgs) -> Result<i32, Failure> {
    let file: FileConfig = match &args.config {
        Some(p) => toml::from_str(&read(p)?).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
        None => FileConfig::default(),
    };
    let defaults = CheckConfig::default();
    let cfg = CheckConfig {
        seed: args.seed.or(file.seed).unwrap_or(defaults.seed),
        trials: args.trials.or(file.trials).unwrap_or(defaults.trials),
        base_dim: args.base_dim.or(file.base_dim).unwrap_or(defaults.base_dim),
        fiber_dim: args.fiber_dim.or(file.fiber_dim).unwrap_or(defaults.fiber_dim),
        degrees: args.degrees.or(file.degrees).unwrap_or(defaults.degrees),
        rep: filter::<RepresentationKind>(args.rep.or(file.rep))?,
        groupoid: filter::<GroupoidKind>(args.groupoid.or(file.groupoid))?,
        bound: args.bound.or(file.bound).unwrap_or(defaults.bound),
        gauge: file.gauge,
    };
    cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
    let suite = args.suite.or(file.suite).unwrap_or_else(|| "all".into());
    let mut reports: Vec<CheckReport> = if suite == "all" {
        run_suite(&cfg).map_err(|e| Failure::usage(e.to_string()))?
    } else {
        if !CHECK_NAMES.contains(&suite.as_str()) {
            return Err(Failure::usage(format!(
                "unknown check {suite:?}; expected all or one of {}",
                CHECK_NAMES.join(", ")
            )));
        }
        vec![run_check(&suite, &cfg).map_err(|e| Failure::usage(e.to_string()))?]
    };
    if args.no_timing || file.no_timing.unwrap_or(false) {
        for r in &mut reports {
            r.millis = 0;
        }
    }
    let json = serde_json::to_string_pretty(&reports).expect("reports serialise") + "\n";
    match args.output.or(file.output) {
        Some(path) => fs::write(&path, json).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{json}"),
    }
    eprint!("{}", render_table(&reports));
    Ok(if reports.iter().all(CheckReport::passed) { EXIT_PASS } else { EXIT_FAIL })
}

fn require<'a, T>(value: &'a Option<T>, what: &str, op: &str) -> Result<&'a T, Failure> {
    value.as_ref().ok_or_else(|| Failure::usage(format!("`{op}` needs `{what}` in the input")))
}

/// Evaluates one operation on an instance; the result is a rational matrix.
pub fn evaluate(op: &str, input: &EvalInput) -> Result<Vec<Vec<String>>, (i32, String)> {
    eval_inner(op, input).map_err(|f| (f.code, f.message))
}

fn eval_inner(op: &str, input: &EvalInput) -> Result<Vec<Vec<String>>, Failure> {
    if op == "bracket" {
        let x1 = matrix_from_rows(require(&input.x1, "x1", op)?)?;
        let x2 = matrix_from_rows(require(&input.x2, "x2", op)?)?;
        if x1.size() != x2.size() {
            return Err(Failure::usage("x1 and x2 must have the same size"));
        }
        let ctx = GeneratorContext::new();
        let value = TangentVector::new(Vec::new(), x1)
            .bracket(&TangentVector::new(Vec::new(), x2), &ctx)
            .map_err(FormError::from)?;
        return Ok(matrix_to_rows(&value.matrix)?);
    }
    if !EVAL_OPS.contains(&op) {
        return Err(Failure::usage(format!("unknown op {op:?}; expected one of {}", EVAL_OPS.join(", "))));
    }
    let spec = require(&input.form, "form", op)?;
    let form = spec.build()?;
    let g = spec.groupoid();
    let cube_json = require(&input.microcube, "microcube", op)?;
    if cube_json.groupoid() != g {
        return Err(Failure::usage("the form and the microcube live on different groupoids"));
    }
    let cube = cube_json.to_cube()?;
    let rep = match &input.representation {
        Some(r) => r.build(g.base_dim, g.fiber_dim)?,
        None => Representation::Trivial { fiber_dim: g.fiber_dim },
    };
    let ctx = GeneratorContext::new();
    let apply = |f: &DifferentialForm| -> Result<WeilMatrix, FormError> { f.eval(&cube, &ctx) };
    let value = match op {
        "form" => form.eval_extracted(&cube, &ctx)?,
        "dplus" => apply(&d_plus(&form, &rep)?)?,
        "dtimes" => apply(&d_times(&form, &rep)?)?,
        "dcontour" => apply(&d_contour(&form, &rep)?)?,
        "mcdefect" => mc_defect(&form, &rep, &cube, &ctx)?,
        "dplus2" => apply(&d_plus(&d_plus(&form, &rep)?, &rep)?)?,
        "dtimes2" => apply(&d_times(&d_times(&form, &rep)?, &rep)?)?,
        _ => unreachable!(),
    };
    Ok(matrix_to_rows(&value)?)
}

fn eval_command(op: &str, path: &Path) -> Result<i32, Failure> {
    let input = EvalInput::parse(&read(path)?)?;
    let rows = eval_inner(op, &input)?;
    let out = serde_json::json!({ "op": op, "result": rows });
    println!("{}", serde_json::to_string_pretty(&out).expect("serialisable"));
    Ok(EXIT_PASS)
}

fn report_command(path: &Path) -> Result<i32, Failure> {
    let reports: Vec<CheckReport> =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::usage(format!("{}: not a report: {e}", path.display())))?;
    print!("{}", render_table(&reports));
    for r in &reports {
        for w in &r.failures {
            println!("{} trial {} [{}] {}: {} != {}", r.check, w.trial, w.case, w.identity, w.lhs, w.rhs);
        }
    }
    Ok(if reports.iter().all(CheckReport::passed) { EXIT_PASS } else { EXIT_FAIL })
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let outcome = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Eval { op, input } => eval_command(&op, &input),
        Command::Report { input } => report_command(&input),
    };
    outcome.unwrap_or_else(|f| {
        eprintln!("error: {}", f.message);
        f.code
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors() {
        assert_eq!(run(["coboundary", "verify", "--suite", "nosuch"]), EXIT_USAGE);
        assert_eq!(run(["coboundary", "verify", "--trials", "0"]), EXIT_USAGE);
        assert_eq!(run(["coboundary", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["coboundary", "verify", "--rep", "adjoint", "--groupoid", "pair"]), EXIT_USAGE);
    }

    #[test]
    fn bracket_of_commuting_matrices_is_zero() {
        let input = EvalInput {
            x1: Some(vec![vec!["1".into(), "0".into()], vec!["0".into(), "2".into()]]),
            x2: Some(vec![vec!["3".into(), "0".into()], vec!["0".into(), "-1".into()]]),
            ..EvalInput::default()
        };
        assert_eq!(evaluate("bracket", &input).unwrap(), vec![vec!["0", "0"], vec!["0", "0"]]);
    }
}
