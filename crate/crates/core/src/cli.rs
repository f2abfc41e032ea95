//! The `passivity` command line.
//!
//! Exit codes: 0 passive, 2 obstructed or not passive, 3 inconsistent,
//! 1 input error, 4 step limit exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::DiffPoly;
use crate::error::{Error, Result};
use crate::json;
use crate::passivity::PassivityReport;
use crate::problem::ProblemFile;
use crate::ranking::{AuditConfig, Ranking};
use crate::syzygy::tau_generators;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_OBSTRUCTED: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "passivity", version, about = "Passivity checks for solved-form differential systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Override the ranking: orderly, elimination, or a JSON weight matrix
    #[arg(long, global = true)]
    pub ranking: Option<String>,
    /// Override the reduction step limit
    #[arg(long, global = true)]
    pub max_steps: Option<usize>,
    /// Compact JSON output (default)
    #[arg(long, global = true, conflicts_with = "pretty")]
    pub json: bool,
    /// Human-readable text output
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide passivity and report pairs and the quotient census
    Check { file: PathBuf },
    /// Reduce a polynomial modulo the system
    Reduce {
        file: PathBuf,
        /// Polynomial JSON, or @path to read it from a file
        #[arg(long)]
        target: String,
    },
    /// List the cross-derivative syzygy generators of the leads
    Syzygies { file: PathBuf },
    /// Principal and parametric derivatives up to an order
    Quotient {
        file: PathBuf,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Check the ranking axioms exhaustively and by sampling
    RankingAudit {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::StepLimit { .. } => EXIT_RESOURCE,
        _ => EXIT_INPUT,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stderr: text,
                    code: EXIT_INPUT,
                    ..Outcome::default()
                }
            } else {
                Outcome {
                    stdout: text,
                    ..Outcome::default()
                }
            };
        }
    };
    match execute(&cli) {
        Ok((stdout, code)) => Outcome {
            stdout,
            code,
            ..Outcome::default()
        },
        Err(e) => Outcome {
            stderr: format!("error: {e}\n"),
            code: exit_code(&e),
            ..Outcome::default()
        },
    }
}

fn parse_ranking_flag(s: &str) -> Result<Ranking> {
    let trimmed = s.trim();
    let value = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let v: Value = serde_json::from_str(trimmed)
            .map_err(|e| Error::parse("--ranking", e.to_string()))?;
        if v.is_array() {
            json!({ "weights": v })
        } else {
            v
        }
    } else {
        json!(trimmed)
    };
    json::parse_ranking(&value, "--ranking")
}

fn load(path: &PathBuf, opts: &Options) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    let mut problem = ProblemFile::parse(&text).map_err(|e| match e {
        Error::Parse { location, message } => {
            Error::parse(format!("{}: {location}", path.display()), message)
        }
        other => other,
    })?;
    if let Some(r) = &opts.ranking {
        let ranking = parse_ranking_flag(r)?;
        ranking.check_ambient(&problem.ambient)?;
        problem.ranking = ranking;
    }
    if let Some(steps) = opts.max_steps {
        problem.bounds.max_steps = steps;
    }
    Ok(problem)
}

fn parse_target(arg: &str, problem: &ProblemFile) -> Result<DiffPoly> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::parse(path, e.to_string()))?,
        None => arg.to_string(),
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| {
        Error::parse(
            format!("--target line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    let target = json::parse_poly(&value, "--target")?;
    problem
        .ambient
        .check_poly(&target)
        .map_err(|e| Error::parse("--target", e.to_string()))?;
    Ok(target)
}

fn render(value: &Value, text: impl FnOnce() -> String, opts: &Options) -> String {
    if opts.pretty {
        text()
    } else {
        let mut s = value.to_string();
        s.push('\n');
        s
    }
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let opts = &cli.options;
    match &cli.command {
        Command::Check { file } => {
            let problem = load(file, opts)?;
            let report = problem.analyze()?;
            let out = render(&json::report(&report), || report_text(&report), opts);
            Ok((out, report.verdict.exit_code()))
        }
        Command::Reduce { file, target } => {
            let problem = load(file, opts)?;
            let target = parse_target(target, &problem)?;
            let sys = problem.system()?;
            let r = sys.reduce(&target, problem.bounds.max_steps)?;
            let value = json!({
                "remainder": json::poly(&r.remainder),
                "text": r.remainder.to_string(),
                "trace": json::trace(&r.trace),
            });
            let text = || {
                let mut s = format!("remainder: {}\n", r.remainder);
                for step in &r.trace {
                    let _ = writeln!(
                        s,
                        "  eq {} shift {} eliminates {}",
                        step.eq, step.shift, step.eliminated
                    );
                }
                s
            };
            Ok((render(&value, text, opts), EXIT_OK))
        }
        Command::Syzygies { file } => {
            let problem = load(file, opts)?;
            let leads: Vec<_> = problem.equations.iter().map(|e| e.lead().clone()).collect();
            let taus = tau_generators(&leads)?;
            let text = || {
                let mut s = format!("{} generators\n", taus.len());
                for t in &taus {
                    let _ = writeln!(s, "  ({}, {}): X^{} e{} - X^{} e{}", t.i, t.j, t.shift_i, t.i, t.shift_j, t.j);
                }
                s
            };
            Ok((render(&json::taus(&taus), text, opts), EXIT_OK))
        }
        Command::Quotient { file, order } => {
            let mut problem = load(file, opts)?;
            if let Some(order) = order {
                problem.bounds.order_bound = *order;
            }
            let report = problem.analyze()?;
            let value = json!({
                "verdict": report.verdict.name(),
                "census": report.census.as_ref().map_or(Value::Null, json::census),
            });
            let text = || match &report.census {
                Some(c) => {
                    let mut s = format!("parametric derivatives up to order {}: {}\n", c.order_bound, c.parametric.len());
                    for (k, n) in &c.counts {
                        let _ = writeln!(s, "  order {k}: {n}");
                    }
                    let names: Vec<String> = c.parametric.iter().map(|d| d.to_string()).collect();
                    let _ = writeln!(s, "  {}", names.join(", "));
                    s
                }
                None => format!("verdict: {} (no census)\n", report.verdict.name()),
            };
            Ok((render(&value, text, opts), report.verdict.exit_code()))
        }
        Command::RankingAudit { file, samples } => {
            let problem = load(file, opts)?;
            let cfg = AuditConfig {
                samples: *samples,
                ..AuditConfig::default()
            };
            let audit = problem.ranking.audit(&problem.ambient, &cfg)?;
            let value = json::audit(&problem.ranking, &audit, cfg.exhaustive_order);
            let text = || {
                let mut s = format!(
                    "{}: {} counterexamples ({} exhaustive checks up to order {}, {} samples)\n",
                    problem.ranking.name(),
                    audit.violations,
                    audit.exhaustive_checks,
                    cfg.exhaustive_order,
                    audit.sampled_checks
                );
                for c in &audit.counterexamples {
                    let _ = writeln!(s, "  {c}");
                }
                s
            };
            let code = if audit.passed() { EXIT_OK } else { EXIT_OBSTRUCTED };
            Ok((render(&value, text, opts), code))
        }
    }
}

fn report_text(r: &PassivityReport) -> String {
    let mut s = format!("verdict: {}\n", r.verdict.name());
    let _ = writeln!(
        s,
        "conditionally solvable: {}",
        if r.solvability.holds() { "yes" } else { "no" }
    );
    for v in &r.solvability.violations {
        let _ = writeln!(s, "  eq {}: tail class {} is not below lead class {}", v.index, v.tail_class, v.lead_class);
    }
    if let Some(t) = &r.theta {
        let _ = writeln!(s, "theta: {t}");
    }
    for c in &r.coincidences {
        let _ = writeln!(
            s,
            "repeated lead {} (eqs {} and {}): {}, relation {}",
            c.lead,
            c.kept,
            c.other,
            c.status.name(),
            c.relation
        );
    }
    for p in &r.pairs {
        let _ = writeln!(
            s,
            "pair ({}, {}): {}; combination {}; remainder {}",
            p.tau.i,
            p.tau.j,
            p.status.name(),
            p.combination,
            p.remainder
        );
    }
    if let Some(c) = &r.census {
        let counts: Vec<String> = c.counts.iter().map(|(k, n)| format!("{k}:{n}")).collect();
        let _ = writeln!(s, "parametric counts up to order {}: {}", c.order_bound, counts.join(" "));
    }
    if let Some(slice) = &r.slice {
        let _ = writeln!(
            s,
            "normalized slice: {} generators, {}",
            slice.forms.len(),
            if slice.certified() { "certified" } else { "NOT certified" }
        );
        for issue in &slice.issues {
            let _ = writeln!(s, "  {issue}");
        }
    }
    s
}

