//! Argument grammar and dispatch for the `gauge-ideals` binary.
//!
//! Structured output goes to stdout as JSON, summaries to stderr. Exit codes:
//! 0 success, 1 check failed, 2 invalid input, 3 budget exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gauge_ideals::calculus::{i_family, j_family};
use gauge_ideals::checks::{is_nt_tuple, is_relative_o_family, is_t_family, CheckReport};
use gauge_ideals::enumerate::enumerate_with_top;
use gauge_ideals::family::sort_canonical;
use gauge_ideals::lattice::build_lattice;
use gauge_ideals::{Budget, DirectionModel, EnumerationResult, IdealFamily, Mode, Model, TabulatedModel};
use rayon::prelude::*;

use crate::crossval::{build_corpus, crosscheck, CorpusEntry, CorpusSpec, Origin, Suites};
use crate::error::{Result, ToolError};
use crate::formats::{
    enumeration_value, family_value, lattice_to_dot, lattice_value, model_to_json, parse_family, parse_model,
    report_value, ModelDocument,
};
use crate::generate::{random_model, KindName, RandomParams, Strategy};

#[derive(Debug, Parser)]
#[command(
    name = "gauge-ideals",
    version,
    about = "Parametrising families for gauge-invariant ideals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a model file.
    Validate { model: PathBuf },
    /// Compute the family J or I of a model.
    Compute {
        #[arg(value_enum)]
        which: Which,
        model: PathBuf,
    },
    /// Check a family against a model.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// List T-families, or the families containing a given one.
    Enumerate {
        model: PathBuf,
        /// Only list families containing this one.
        #[arg(long, value_name = "FAMFILE")]
        relative: Option<PathBuf>,
        /// Print only the number of families.
        #[arg(long)]
        count_only: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Order the T-families and export the Hasse diagram.
    Lattice {
        model: PathBuf,
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run every sweep on one model or on a corpus; discrepancies print as JSON lines.
    Crosscheck {
        #[arg(required_unless_present = "corpus", conflicts_with = "corpus")]
        model: Option<PathBuf>,
        #[arg(long, value_name = "CFG")]
        corpus: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print a seeded random model.
    Random {
        #[arg(long, value_enum)]
        kind: KindName,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        max_mult: u64,
        #[arg(long, value_enum, default_value_t = Strategy::Powers)]
        strategy: Strategy,
        #[arg(long, default_value_t = RandomParams::DEFAULT_RETRIES)]
        retries: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Jf,
    If,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckMode {
    T,
    Nt,
    O,
    Rel,
}

#[derive(Debug, Subcommand)]
pub enum FamilyCommand {
    /// Exit 0 if the family passes, 1 with a witness if it fails.
    Check {
        model: PathBuf,
        family: PathBuf,
        #[arg(long, value_enum)]
        mode: CheckMode,
        /// Lower family for `--mode rel`.
        #[arg(long, value_name = "FAMFILE", required_if_eq("mode", "rel"))]
        k: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct RunArgs {
    /// Largest number of candidate sets a search may test.
    #[arg(long, default_value_t = Budget::default().0)]
    pub budget: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| ToolError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| ToolError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_model(path: &Path) -> Result<Model> {
    parse_model(&read(path)?)
}

fn load_family(model: &Model, path: &Path) -> Result<IdealFamily> {
    parse_family(model, &read(path)?)
}

/// Output of one command: stdout text, stderr text and exit code.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn json(value: &serde_json::Value) -> Self {
        Output {
            stdout: serde_json::to_string_pretty(value).expect("values serialize") + "\n",
            ..Output::default()
        }
    }

    fn note(mut self, line: impl AsRef<str>) -> Self {
        self.stderr.push_str(line.as_ref());
        self.stderr.push('\n');
        self
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    if jobs == 0 {
        return Err(ToolError::invalid("--jobs must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ToolError::invalid(format!("cannot start {jobs} workers: {e}")))
}

/// Relative enumeration split by the value of `L_{[k]}`, merged into canonical order.
///
/// The split does not depend on `jobs`, and the budget applies to each part.
fn enumerate_parallel(model: &Model, lower: &IdealFamily, run: RunArgs) -> Result<Vec<IdealFamily>> {
    let tab = TabulatedModel::new(model);
    let dyn_model: &(dyn DirectionModel + Sync) = match &tab {
        Some(t) => t,
        None => model,
    };
    let full = gauge_ideals::SubsetMask::full(model.rank());
    let floor = lower.get(full);
    let tops: Vec<_> = model
        .universe()
        .difference(floor)
        .subsets()
        .map(|s| s | floor)
        .collect();
    let budget = Budget(run.budget);
    let parts: Vec<Vec<IdealFamily>> = pool(run.jobs)?.install(|| {
        tops.par_iter()
            .map(|&top| enumerate_with_top(dyn_model, lower, top, budget).map(|(f, _)| f))
            .collect::<std::result::Result<_, _>>()
    })?;
    let mut families: Vec<IdealFamily> = parts.into_iter().flatten().collect();
    sort_canonical(&mut families);
    Ok(families)
}

fn check_output(model: &Model, report: &CheckReport, mode: &str) -> Output {
    let mut out = Output::json(&report_value(model, report));
    if report.verdict() {
        out.note(format!("{mode}: pass"))
    } else {
        out.code = 1;
        let condition = report.violated_condition().map(|c| c.as_str()).unwrap_or("?");
        out.note(format!("{mode}: fail ({condition})"))
    }
}

fn execute(command: Command) -> Result<Output> {
    match command {
        Command::Validate { model } => {
            let m = load_model(&model)?;
            let kind = ModelDocument::from_model(&m);
            let kind = match kind {
                ModelDocument::Kgraph { .. } => "kgraph",
                ModelDocument::Dynsys { .. } => "dynsys",
            };
            let value = serde_json::json!({
                "valid": true,
                "kind": kind,
                "rank": m.rank(),
                "vertices": m.vertex_count(),
            });
            Ok(Output::json(&value).note(format!("{}: valid {kind} of rank {}", model.display(), m.rank())))
        }
        Command::Compute { which, model } => {
            let m = load_model(&model)?;
            let family = match which {
                Which::Jf => j_family(&m),
                Which::If => i_family(&m),
            };
            Ok(Output::json(&family_value(&m, &family)))
        }
        Command::Family(FamilyCommand::Check { model, family, mode, k }) => {
            let m = load_model(&model)?;
            let f = load_family(&m, &family)?;
            let (report, name) = match mode {
                CheckMode::T => (is_t_family(&m, &f)?, "T-family"),
                CheckMode::Nt => (is_nt_tuple(&m, &f)?, "NT-tuple"),
                CheckMode::O => (is_relative_o_family(&m, &f, &i_family(&m))?, "O-family"),
                CheckMode::Rel => {
                    let path = k.ok_or_else(|| ToolError::invalid("--mode rel needs --k"))?;
                    let lower = load_family(&m, &path)?;
                    (is_relative_o_family(&m, &f, &lower)?, "relative O-family")
                }
            };
            Ok(check_output(&m, &report, name))
        }
        Command::Enumerate {
            model,
            relative,
            count_only,
            run,
        } => {
            let m = load_model(&model)?;
            let (lower, mode) = match &relative {
                Some(path) => {
                    let lower = load_family(&m, path)?;
                    let mode = if lower == i_family(&m) {
                        Mode::O
                    } else {
                        Mode::RelativeO
                    };
                    (lower, mode)
                }
                None => (IdealFamily::empty(m.rank()), Mode::T),
            };
            let families = enumerate_parallel(&m, &lower, run)?;
            let result = EnumerationResult { mode, families };
            let summary = format!("{} {} families", result.count(), mode.as_str());
            if count_only {
                Ok(Output {
                    stdout: format!("{}\n", result.count()),
                    ..Output::default()
                }
                .note(summary))
            } else {
                Ok(Output::json(&enumeration_value(&m, &result)).note(summary))
            }
        }
        Command::Lattice { model, dot, json, run } => {
            let m = load_model(&model)?;
            let families = enumerate_parallel(&m, &IdealFamily::empty(m.rank()), run)?;
            let lattice = build_lattice(&EnumerationResult {
                mode: Mode::T,
                families,
            })?;
            let value = lattice_value(&m, &lattice);
            let text = serde_json::to_string_pretty(&value).expect("values serialize") + "\n";
            let dot_text = lattice_to_dot(&m, &lattice);
            let mut out = Output::default();
            match (&dot, &json) {
                (None, None) => out.stdout = text,
                _ => {
                    if let Some(path) = &dot {
                        write_file(path, &dot_text)?;
                    }
                    if let Some(path) = &json {
                        write_file(path, &text)?;
                    }
                }
            }
            Ok(out.note(format!(
                "{} nodes, {} cover edges",
                lattice.nodes.len(),
                lattice.cover_edges.len()
            )))
        }
        Command::Crosscheck { model, corpus, run } => {
            let (entries, spec) = match (model, corpus) {
                (Some(path), _) => {
                    let spec = CorpusSpec {
                        budget: run.budget,
                        ..CorpusSpec::default()
                    };
                    (vec![CorpusEntry::new(load_model(&path)?, Origin::File)], spec)
                }
                (None, Some(cfg)) => {
                    let spec: CorpusSpec = serde_json::from_str(&read(&cfg)?)?;
                    (build_corpus(&spec)?, spec)
                }
                (None, None) => return Err(ToolError::invalid("crosscheck needs a model or --corpus")),
            };
            let outcome = pool(run.jobs)?.install(|| crosscheck(&entries, &spec, Suites::ALL))?;
            Ok(Output {
                stdout: outcome.to_json_lines(),
                stderr: String::new(),
                code: i32::from(!outcome.is_clean()),
            }
            .note(outcome.summary()))
        }
        Command::Random {
            kind,
            rank,
            vertices,
            seed,
            max_mult,
            strategy,
            retries,
        } => {
            let m = random_model(&RandomParams {
                kind,
                rank,
                vertices,
                seed,
                max_mult,
                strategy,
                retries,
            })?;
            let doc: serde_json::Value = serde_json::from_str(&model_to_json(&m))?;
            Ok(Output::json(&doc))
        }
    }
}

/// Parses `argv` (program name first) and runs the command without touching the process streams.
pub fn run_captured<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    stderr: text,
                    code: 2,
                    ..Output::default()
                }
            } else {
                Output {
                    stdout: text,
                    ..Output::default()
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(out) => out,
        Err(e) => Output {
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
            ..Output::default()
        },
    }
}

/// Runs the CLI against the process streams and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let out = run_captured(argv);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    out.code
}
