//! The `foon` command line: `validate`, `retrieve` and `compare`.
//!
//! Exit codes: 0 success, 1 no task tree (or unknown goal), 2 unreadable or
//! malformed input, 3 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::eval::{compare_algorithms, max_chain_depth, tree_metrics, CompareOptions, TreeMetrics};
use crate::io::{
    export_tree_dot, parse_foon, parse_foon_units, parse_goal, parse_kitchen, parse_motion_profile,
    serialize_tree, ParseDiagnostic, ParseError,
};
use crate::model::{build_graph, FoonGraph, Kitchen, MotionProfile, NodeKey, ObjectNode};
use crate::retrieval::{
    retrieve, Algorithm, RetrievalConfig, RetrievalError, RetrievalStats, DEFAULT_MAX_DEPTH,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "foon",
    version,
    about = "Task tree retrieval over functional object-oriented networks"
)]
struct Cli {
    /// Also print parser warnings for retrieve and compare.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a FOON file and report units, nodes and diagnostics.
    Validate { foon: PathBuf },
    /// Retrieve a task tree for a goal with one algorithm.
    Retrieve(RetrieveArgs),
    /// Run all three algorithms and compare their trees.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Ids,
    GbfsSuccess,
    GbfsInputs,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(arg: AlgorithmArg) -> Self {
        match arg {
            AlgorithmArg::Ids => Algorithm::Ids,
            AlgorithmArg::GbfsSuccess => Algorithm::GbfsSuccess,
            AlgorithmArg::GbfsInputs => Algorithm::GbfsInputs,
        }
    }
}

fn parse_rate(text: &str) -> Result<f64, String> {
    let rate: f64 = text
        .parse()
        .map_err(|_| format!("`{text}` is not a number"))?;
    if (0.0..=1.0).contains(&rate) {
        Ok(rate)
    } else {
        Err(format!("{rate} is outside [0, 1]"))
    }
}

#[derive(Debug, Args)]
struct QueryArgs {
    /// FOON universe file.
    #[arg(long)]
    foon: PathBuf,
    /// Object blocks available at the start.
    #[arg(long)]
    kitchen: PathBuf,
    /// A single object block to produce.
    #[arg(long)]
    goal: PathBuf,
    /// Unit-chain cap for iterative deepening.
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH as u64, value_parser = clap::value_parser!(u64).range(1..))]
    max_depth: u64,
    /// Rate used for motions missing from the motion file.
    #[arg(long, value_parser = parse_rate)]
    default_rate: Option<f64>,
    /// Fail on motions missing from the motion file.
    #[arg(long)]
    strict_motions: bool,
    /// Greedy search gives up at the first dead end instead of trying the next-best unit.
    #[arg(long)]
    no_backtrack: bool,
}

#[derive(Debug, Args)]
struct RetrieveArgs {
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    /// Motion success rates, one `label<TAB>rate` per line.
    #[arg(long)]
    motions: Option<PathBuf>,
    /// Write the tree here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the tree as Graphviz DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write metrics and search statistics as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    query: QueryArgs,
    /// Motion success rates, one `label<TAB>rate` per line.
    #[arg(long)]
    motions: PathBuf,
    /// Write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Add wall-clock times (makes output vary between runs).
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NotFound(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::NotFound(_) => EXIT_NOT_FOUND,
        }
    }
}

struct Console<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    verbose: bool,
}

impl Console<'_> {
    fn say(&mut self, text: &str) {
        let _ = writeln!(self.out, "{text}");
    }

    fn note(&mut self, text: &str) {
        let _ = writeln!(self.err, "{text}");
    }

    fn diagnostics(&mut self, path: &Path, diagnostics: &[ParseDiagnostic]) {
        for d in diagnostics {
            let _ = writeln!(
                self.err,
                "{}:{}: {}: {}",
                path.display(),
                d.line,
                d.severity,
                d.message
            );
        }
    }
}

/// Runs the CLI against the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };

    let mut console = Console {
        out,
        err,
        verbose: cli.verbose,
    };
    let result = match cli.command {
        Command::Validate { foon } => cmd_validate(&foon, &mut console),
        Command::Retrieve(args) => cmd_retrieve(&args, &mut console),
        Command::Compare(args) => cmd_compare(&args, &mut console),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            console.note(&format!("error: {e}"));
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn parse_failed(path: &Path, console: &mut Console<'_>, error: ParseError) -> CliError {
    console.diagnostics(path, &error.diagnostics);
    CliError::Input(format!(
        "{} has {} error(s)",
        path.display(),
        error.errors().count()
    ))
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn cmd_validate(path: &Path, console: &mut Console<'_>) -> Result<(), CliError> {
    let text = read(path)?;
    let (units, diagnostics) = parse_foon(&text);
    console.diagnostics(path, &diagnostics);
    let errors = diagnostics.iter().filter(|d| d.is_error()).count();
    let warnings = diagnostics.len() - errors;
    if errors > 0 {
        console.say(&format!(
            "{}: {}, {}",
            path.display(),
            plural(errors, "error"),
            plural(warnings, "warning")
        ));
        return Err(CliError::Input(format!(
            "{} is not a valid FOON file",
            path.display()
        )));
    }
    let graph = build_graph(units).map_err(|e| CliError::Input(e.to_string()))?;
    console.say(&format!(
        "{}, {}",
        plural(graph.len(), "unit"),
        plural(graph.node_count(), "object node")
    ));
    if graph.duplicates_dropped() > 0 {
        console.say(&format!(
            "{} dropped",
            plural(graph.duplicates_dropped(), "duplicate unit")
        ));
    }
    if warnings > 0 {
        console.say(&plural(warnings, "warning"));
    }
    Ok(())
}

struct Query {
    graph: FoonGraph,
    kitchen: Kitchen,
    goal: ObjectNode,
}

fn load_query(args: &QueryArgs, console: &mut Console<'_>) -> Result<Query, CliError> {
    let text = read(&args.foon)?;
    let (units, warnings) =
        parse_foon_units(&text).map_err(|e| parse_failed(&args.foon, console, e))?;
    if console.verbose {
        console.diagnostics(&args.foon, &warnings);
    }
    let graph = build_graph(units).map_err(|e| CliError::Input(e.to_string()))?;
    if graph.duplicates_dropped() > 0 {
        console.note(&format!(
            "warning: {} dropped",
            plural(graph.duplicates_dropped(), "duplicate unit")
        ));
    }
    let kitchen = parse_kitchen(&read(&args.kitchen)?)
        .map_err(|e| parse_failed(&args.kitchen, console, e))?;
    let goal = parse_goal(&read(&args.goal)?).map_err(|e| parse_failed(&args.goal, console, e))?;
    Ok(Query {
        graph,
        kitchen,
        goal,
    })
}

fn load_profile(
    path: Option<&Path>,
    default_rate: Option<f64>,
    console: &mut Console<'_>,
) -> Result<MotionProfile, CliError> {
    let profile = match path {
        Some(path) => {
            parse_motion_profile(&read(path)?).map_err(|e| parse_failed(path, console, e))?
        }
        None => MotionProfile::new(),
    };
    match default_rate {
        Some(rate) => profile
            .with_default_rate(rate)
            .map_err(|e| CliError::Usage(e.to_string())),
        None => Ok(profile),
    }
}

#[derive(Serialize)]
struct RetrieveReport<'a> {
    algorithm: Algorithm,
    goal: &'a NodeKey,
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
    steps: Vec<usize>,
    metrics: Option<TreeMetrics>,
    stats: Option<RetrievalStats>,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

fn cmd_retrieve(args: &RetrieveArgs, console: &mut Console<'_>) -> Result<(), CliError> {
    let algorithm = Algorithm::from(args.algorithm);
    if algorithm == Algorithm::GbfsSuccess && args.motions.is_none() {
        return Err(CliError::Usage(
            "--motions is required for gbfs-success".into(),
        ));
    }
    let query = load_query(&args.query, console)?;
    let profile = load_profile(args.motions.as_deref(), args.query.default_rate, console)?;
    let config = RetrievalConfig {
        algorithm,
        max_depth: args.query.max_depth as usize,
        motion_profile: Some(profile.clone()),
        strict_motions: args.query.strict_motions,
        backtrack: !args.query.no_backtrack,
    };
    let goal_key = query.goal.key();

    match retrieve(&query.graph, &query.goal, &query.kitchen, &config) {
        Ok(found) => {
            let tree = &found.tree;
            if tree.is_empty() {
                console.note("goal already satisfied");
            } else {
                console.note(&format!(
                    "{algorithm}: {}, chain depth {}",
                    plural(tree.len(), "functional unit"),
                    max_chain_depth(tree, &query.kitchen)
                ));
            }
            let text = serialize_tree(tree);
            match &args.out {
                Some(path) => write_file(path, &text)?,
                None => {
                    let _ = write!(console.out, "{text}");
                }
            }
            if let Some(path) = &args.dot {
                write_file(path, &export_tree_dot(tree))?;
            }
            if let Some(path) = &args.json {
                let (metrics, detail) =
                    match tree_metrics(tree, &profile, &query.kitchen, config.strict_motions) {
                        Ok(m) => (Some(m), None),
                        Err(e) => (None, Some(format!("metrics unavailable: {e}"))),
                    };
                let report = RetrieveReport {
                    algorithm,
                    goal: &goal_key,
                    outcome: "found",
                    detail,
                    steps: tree.steps.iter().map(|s| s.source_index()).collect(),
                    metrics,
                    stats: Some(found.stats),
                };
                write_file(path, &to_json(&report))?;
            }
            Ok(())
        }
        Err(e @ RetrievalError::NotFound { .. }) => {
            if let (Some(path), RetrievalError::NotFound { stats, .. }) = (&args.json, &e) {
                let report = RetrieveReport {
                    algorithm,
                    goal: &goal_key,
                    outcome: "not_found",
                    detail: Some(e.to_string()),
                    steps: Vec::new(),
                    metrics: None,
                    stats: Some(*stats),
                };
                write_file(path, &to_json(&report))?;
            }
            Err(CliError::NotFound(e.to_string()))
        }
        Err(e @ RetrievalError::UnknownGoal(_)) => Err(CliError::NotFound(e.to_string())),
        Err(e @ RetrievalError::MissingMotionRate(_)) => Err(CliError::Input(e.to_string())),
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

fn cmd_compare(args: &CompareArgs, console: &mut Console<'_>) -> Result<(), CliError> {
    let query = load_query(&args.query, console)?;
    let profile = load_profile(Some(&args.motions), args.query.default_rate, console)?;
    let options = CompareOptions {
        fixture: args.query.foon.display().to_string(),
        max_depth: args.query.max_depth as usize,
        strict_motions: args.query.strict_motions,
        backtrack: !args.query.no_backtrack,
        record_timings: args.timings,
    };
    let report = compare_algorithms(
        &query.graph,
        &query.goal,
        &query.kitchen,
        &profile,
        &options,
    )
    .map_err(|e| CliError::NotFound(e.to_string()))?;
    let _ = write!(console.out, "{}", report.to_table());
    if let Some(path) = &args.json {
        write_file(path, &report.to_json())?;
    }
    Ok(())
}
