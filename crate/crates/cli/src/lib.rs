//! The `mdag` command line, callable in-process.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdag::catalog;
use mdag::dsep::{self, DEFAULT_MAX_PATHS};
use mdag::validity::{subsample_verdict, ValidityError};
use mdag::{MDag, NodeId, ParseError};
use mdag_sim::{run_study, Method, SimError, StudyConfig};
use thiserror::Error;

pub mod dot;
pub mod report;

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("`{0}` is not a variable")]
    NotVariable(String),
    #[error("--from and --to name the same node `{0}`")]
    SameNode(String),
    #[error(transparent)]
    Validity(#[from] ValidityError),
    #[error(transparent)]
    Catalog(#[from] catalog::UnknownScenario),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("thread pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Checks whether complete records analysis, multiple imputation or subsample
/// multiple imputation can estimate an exposure coefficient without bias,
/// given a missingness DAG.
#[derive(Debug, Parser)]
#[command(name = "mdag", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze a graph. Exits 0 if some strategy is unbiased, 2 if none is.
    Check {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate one restriction Q. Exits 0 if it is unbiased, 2 if not.
    Subsample {
        path: PathBuf,
        /// Variables to restrict on, comma separated. Empty means the full sample.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        q: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// List open paths between two nodes. Indicators are written R[X].
    Paths {
        path: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        given: Vec<String>,
        /// Stop after this many paths.
        #[arg(long, default_value_t = DEFAULT_MAX_PATHS)]
        max: usize,
    },
    /// Run a simulation study for a built-in scenario.
    Simulate(SimulateArgs),
    /// List or export the built-in scenarios.
    Catalog {
        #[arg(long, conflicts_with = "export", required_unless_present = "export")]
        list: bool,
        #[arg(long, value_name = "ID")]
        export: Option<String>,
    },
    /// Print a graph as Graphviz DOT.
    Render { path: PathBuf },
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    scenario: String,
    #[arg(long, default_value_t = mdag_sim::study::DEFAULT_REPS)]
    reps: usize,
    #[arg(long, default_value_t = mdag_sim::study::DEFAULT_N)]
    n: usize,
    #[arg(long, default_value_t = mdag_sim::study::DEFAULT_M)]
    m: usize,
    #[arg(long, default_value_t = mdag_sim::study::DEFAULT_CYCLES)]
    cycles: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Methods to compare, e.g. `cra,full_mi,sub:X+W`. Defaults to the scenario's list.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, env = "MDAG_THREADS", default_value_t = 0)]
    threads: usize,
}

fn load(path: &Path) -> Result<MDag, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: shown.clone(), source })?;
    mdag::parse(&text).map_err(|source| CliError::Parse { path: shown, source })
}

fn resolve(g: &MDag, name: &str) -> Result<NodeId, CliError> {
    g.resolve(name).ok_or_else(|| CliError::UnknownNode(name.to_string()))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Output and exit code of a successful command.
struct Outcome {
    stdout: String,
    code: u8,
}

fn check(path: &Path, format: Format) -> Result<Outcome, CliError> {
    let g = load(path)?;
    let r = mdag::analyze(&g);
    let doc = report::document(&g, &r);
    let stdout = match format {
        Format::Text => report::text(&doc),
        Format::Json => json(&doc),
    };
    Ok(Outcome { stdout, code: if r.has_unbiased_strategy() { 0 } else { 2 } })
}

fn subsample(path: &Path, q: &[String], format: Format) -> Result<Outcome, CliError> {
    let g = load(path)?;
    let mut set = BTreeSet::new();
    for name in q.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        let id = resolve(&g, name)?;
        if g.is_indicator(id) {
            return Err(CliError::NotVariable(name.to_string()));
        }
        set.insert(id);
    }
    let opt = subsample_verdict(&g, &set)?;
    let doc = report::SubsampleDocument { graph_summary: report::summary(&g), option: report::option(&g, &opt) };
    let stdout = match format {
        Format::Text => report::subsample_text(&doc),
        Format::Json => json(&doc),
    };
    Ok(Outcome { stdout, code: if opt.verdict.is_unbiased() { 0 } else { 2 } })
}

fn paths(path: &Path, from: &str, to: &str, given: &[String], max: usize) -> Result<Outcome, CliError> {
    let g = load(path)?;
    let a = resolve(&g, from)?;
    let b = resolve(&g, to)?;
    if a == b {
        return Err(CliError::SameNode(g.node_name(a)));
    }
    let c: BTreeSet<NodeId> =
        given.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).map(|s| resolve(&g, s)).collect::<Result<_, _>>()?;
    let found = dsep::open_paths(g.digraph(), a, b, &c, max.max(1)).expect("nodes resolved and distinct");
    let mut stdout = String::new();
    if found.paths.is_empty() {
        stdout.push_str("NONE (d-separated)\n");
    }
    for w in &found.paths {
        let doc = report::witness(&g, w);
        stdout.push_str(&format!("{} (open)\n", doc.path));
        for n in doc.nodes.iter().filter(|n| n.junction.is_some()) {
            stdout.push_str(&format!("  {}: {}, {}\n", n.name, n.junction.unwrap_or(""), n.state.unwrap_or("")));
        }
    }
    if found.truncated {
        stdout.push_str(&format!("(stopped after {} paths)\n", found.paths.len()));
    }
    Ok(Outcome { stdout, code: 0 })
}

fn simulate(a: &SimulateArgs) -> Result<Outcome, CliError> {
    let mut config = StudyConfig::new(&a.scenario)?;
    config.reps = a.reps;
    config.n = a.n;
    config.m = a.m;
    config.cycles = a.cycles;
    config.seed = a.seed;
    if !a.methods.is_empty() {
        config.methods = a.methods.iter().map(|m| m.replace('+', ",").parse()).collect::<Result<Vec<Method>, _>>()?;
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(a.threads).build()?;
    let result = pool.install(|| run_study(&config))?;
    let stdout = match a.format {
        TableFormat::Csv => {
            let mut buf = Vec::new();
            result.write_csv(&mut buf, true)?;
            String::from_utf8(buf).expect("csv output is utf-8")
        }
        TableFormat::Json => {
            let mut s = result.to_json();
            s.push('\n');
            s
        }
    };
    Ok(Outcome { stdout, code: 0 })
}

fn catalog_cmd(export: Option<&str>) -> Result<Outcome, CliError> {
    let stdout = match export {
        Some(id) => catalog::get(id)?.document.to_string(),
        None => catalog::list().iter().map(|id| format!("{id}\n")).collect(),
    };
    Ok(Outcome { stdout, code: 0 })
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Check { path, format } => check(&path, format),
        Command::Subsample { path, q, format } => subsample(&path, &q, format),
        Command::Paths { path, from, to, given, max } => paths(&path, &from, &to, &given, max),
        Command::Simulate(args) => simulate(&args),
        Command::Catalog { export, .. } => catalog_cmd(export.as_deref()),
        Command::Render { path } => Ok(Outcome { stdout: dot::render(&load(&path)?), code: 0 }),
    }
}

/// What one invocation printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

/// Runs the command line `args` (program name first) without touching the
/// process streams. On failure `stdout` is empty and `code` is 1.
pub fn invoke<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Invocation { stdout: String::new(), stderr: text, code: 1 }
            } else {
                Invocation { stdout: text, stderr: String::new(), code: 0 }
            };
        }
    };
    match run(cli) {
        Ok(out) => Invocation { stdout: out.stdout, stderr: String::new(), code: out.code },
        Err(e) => Invocation { stdout: String::new(), stderr: format!("error: {e}\n"), code: 1 },
    }
}
