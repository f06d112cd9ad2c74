//! Command-line driver. Every analysis writes the CSV form of a library result.
//!
//! Exit codes: 0 success, 1 operational error, 2 usage error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::graph::{build_call_graph, export_graph, GraphFormat, Granularity};
use crate::metrics::*;
use crate::model::*;
use crate::search::{search_breakpoints, SearchMode, SearchQuery};
use crate::service::{self, AppState};
use crate::store::{QueryFilter, Store, StoreSnapshot};

/// Resolved runtime configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub data_dir: PathBuf,
    pub port: u16,
    pub project_root: Option<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(name = "swarm", version, about = "Collect and analyze shared debugging sessions")]
pub struct Cli {
    /// Directory holding the store file.
    #[arg(long, global = true, env = "SWARM_DATA_DIR", default_value = "./swarm-data")]
    pub data_dir: PathBuf,
    #[arg(long, global = true, env = "SWARM_PORT", default_value_t = 7000,
          value_parser = clap::value_parser!(u16).range(1..))]
    pub port: u16,
    /// Root the type source paths are relative to.
    #[arg(long, global = true, env = "SWARM_PROJECT_ROOT")]
    pub project_root: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn config(&self) -> Config {
        Config { data_dir: self.data_dir.clone(), port: self.port, project_root: self.project_root.clone() }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Serve the REST API.
    Serve,
    /// Import a JSONL session log into the store.
    Ingest { file: PathBuf },
    /// Run an analysis and print it as CSV.
    Analyze {
        analysis: Analysis,
        /// `key=value` with key one of product, task, developer, session.
        /// Task and developer values may be comma-separated; `all` matches every value.
        #[arg(long = "filter", value_name = "KEY=VALUE")]
        filters: Vec<String>,
        /// Minimum breakpoint count for `fig6`.
        #[arg(long, default_value_t = 5)]
        min: usize,
        #[arg(long, default_value = "control")]
        control: String,
        #[arg(long, default_value = "experiment")]
        experiment: String,
        #[command(flatten)]
        input: Input,
    },
    /// Export the call graph.
    Export {
        format: ExportFormat,
        /// Comma-separated issue keys.
        #[arg(long)]
        tasks: Option<String>,
        /// Needed when the store holds more than one product.
        #[arg(long)]
        product: Option<String>,
        #[arg(long, value_enum, default_value = "type")]
        granularity: GranularityArg,
        #[command(flatten)]
        input: Input,
    },
    /// Search breakpoints by type name or method signature.
    Search {
        query: String,
        #[arg(long, value_enum, default_value = "fuzzy")]
        mode: ModeArg,
        #[arg(long)]
        product: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Suggest breakpoint locations for a product.
    Recommend {
        #[arg(long)]
        product: String,
        #[arg(short, default_value_t = 10)]
        k: usize,
        /// Leave out lines this session already has breakpoints on.
        #[arg(long)]
        session: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Built-in fixture corpora.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum FixturesAction {
    /// Write every fixture log and its sources.
    Generate {
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
    },
}

/// Where the data comes from and where output goes.
#[derive(Args, Debug, Clone, Default)]
pub struct Input {
    /// Analyze this log in memory instead of the store. Sources are looked up
    /// under `src/` next to the log unless a project root is given.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Write to a file instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Analysis {
    /// Elapsed time per task.
    Table2,
    /// Statement kinds at breakpoints.
    Table3,
    /// Lines shared within a task.
    Table5,
    /// Lines shared across tasks.
    Table8,
    /// Classes used in several tasks.
    Table9,
    /// Busiest methods.
    Fig6,
    /// Power-law fit of first-breakpoint time.
    Fit,
    /// Mean and deviation of the first-breakpoint fraction.
    Mfb,
    /// Control versus experiment per task.
    Table10,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Gvjson,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GranularityArg {
    Type,
    Method,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Fuzzy,
    Match,
    Wildcard,
}

/// Parses `argv` (program name first) and runs it. Returns the exit code.
pub fn dispatch<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match run(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let config = cli.config();
    match &cli.command {
        Command::Serve => serve(&config),
        Command::Ingest { file } => {
            if !file.exists() {
                return Err(Error::UnreadableStream(format!("file not found: {}", file.display())));
            }
            let store = Store::open(&config.data_dir)?;
            let summary = store.import_session_log_file(file)?;
            writeln!(stdout, "{}", serde_json::to_string(&summary)?)?;
            Ok(())
        }
        Command::Analyze { analysis, filters, min, control, experiment, input } => {
            let (store, root) = load(&config, input)?;
            let snap = store.snapshot();
            let filter = parse_filter(&snap, filters)?;
            with_output(input, stdout, |out| analyze(&snap, *analysis, &filter, *min, control, experiment, root.as_deref(), out))
        }
        Command::Export { format, tasks, product, granularity, input } => {
            let (store, _) = load(&config, input)?;
            let snap = store.snapshot();
            let filter = graph_filter(&snap, product.as_deref(), tasks.as_deref())?;
            let granularity = match granularity {
                GranularityArg::Type => Granularity::TypeLevel,
                GranularityArg::Method => Granularity::MethodLevel,
            };
            let format = match format {
                ExportFormat::Gvjson => GraphFormat::Gvjson,
                ExportFormat::Dot => GraphFormat::Dot,
            };
            let bytes = export_graph(&build_call_graph(&snap, &filter, granularity), format);
            with_output(input, stdout, |out| Ok(out.write_all(&bytes)?))
        }
        Command::Search { query, mode, product, input } => {
            let (store, _) = load(&config, input)?;
            let snap = store.snapshot();
            let mode = match mode {
                ModeArg::Fuzzy => SearchMode::Fuzzy,
                ModeArg::Match => SearchMode::Match,
                ModeArg::Wildcard => SearchMode::Wildcard,
            };
            let mut q = SearchQuery::new(query, mode);
            if let Some(p) = product {
                q.filter = QueryFilter::product(product_id(&snap, p)?);
            }
            let hits = search_breakpoints(&snap, &q)?;
            with_output(input, stdout, |out| {
                writeln!(out, "score\tfield\tlocation\tmethod\tsession")?;
                for h in &hits {
                    let bp = &h.breakpoint;
                    let ty = snap.type_entity(&bp.type_id).map(|t| t.full_name.as_str()).unwrap_or("?");
                    let method = bp.method_id.as_ref().and_then(|m| snap.method(m)).map(|m| m.signature.as_str());
                    let field = match h.matched_field {
                        crate::search::MatchedField::TypeName => "type",
                        crate::search::MatchedField::MethodSignature => "method",
                    };
                    writeln!(
                        out,
                        "{:.3}\t{field}\t{ty}:{}\t{}\t{}",
                        h.score,
                        bp.line_number,
                        method.unwrap_or("-"),
                        bp.session_id
                    )?;
                }
                Ok(())
            })
        }
        Command::Recommend { product, k, session, input } => {
            if *k == 0 {
                return Err(Error::Invalid("k must be at least 1".into()));
            }
            let (store, _) = load(&config, input)?;
            let snap = store.snapshot();
            let pid = product_id(&snap, product)?;
            let session = session.as_deref().map(SessionId::from);
            if let Some(s) = &session {
                crate::store::require_session(&snap, s)?;
            }
            let spots = recommend_breakpoints(&snap, &pid, session.as_ref(), *k);
            with_output(input, stdout, |out| hotspots_csv(&spots, out))
        }
        Command::Fixtures { action: FixturesAction::Generate { out } } => {
            for dir in fixtures::write_all(out)? {
                writeln!(stdout, "{}", dir.display())?;
            }
            Ok(())
        }
    }
}

fn serve(config: &Config) -> Result<()> {
    let store = Arc::new(Store::open(&config.data_dir)?);
    let state = AppState { store, project_root: config.project_root.clone() };
    let addr = SocketAddr::from(([0, 0, 0, 0], config.port));
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    eprintln!("listening on {addr}");
    rt.block_on(service::serve(state, addr))
}

/// The store to read plus the source root for statement classification.
fn load(config: &Config, input: &Input) -> Result<(Store, Option<PathBuf>)> {
    match &input.log {
        Some(log) => {
            if !log.exists() {
                return Err(Error::UnreadableStream(format!("file not found: {}", log.display())));
            }
            let store = Store::in_memory();
            let summary = store.import_session_log_file(log)?;
            if let Some(code) = &summary.first_error {
                return Err(Error::Invalid(format!(
                    "{} rejected record(s) in {}, first {} at line {}",
                    summary.rejected,
                    log.display(),
                    code,
                    summary.first_error_line.unwrap_or(0)
                )));
            }
            let root = config.project_root.clone().or_else(|| {
                let sibling = log.parent().unwrap_or(Path::new(".")).join(fixtures::SOURCE_DIR);
                sibling.is_dir().then_some(sibling)
            });
            Ok((store, root))
        }
        None => Ok((Store::open(&config.data_dir)?, config.project_root.clone())),
    }
}

fn with_output(input: &Input, stdout: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &input.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(stdout),
    }
}

#[allow(clippy::too_many_arguments)]
fn analyze(
    snap: &StoreSnapshot,
    analysis: Analysis,
    filter: &QueryFilter,
    min: usize,
    control: &str,
    experiment: &str,
    root: Option<&Path>,
    out: &mut dyn Write,
) -> Result<()> {
    match analysis {
        Analysis::Table2 => elapsed_by_task_csv(&first_breakpoint_stats(&all_session_metrics(snap, filter))?, out),
        Analysis::Mfb => first_breakpoint_csv(&first_breakpoint_stats(&all_session_metrics(snap, filter))?, out),
        Analysis::Fit => fit_csv(&fit_power_law(&fit_points(&all_session_metrics(snap, filter)))?, out),
        Analysis::Table3 => {
            let root = root.ok_or_else(|| Error::Invalid("table3 needs a project root to read sources".into()))?;
            distribution_csv(&statement_type_distribution(snap, filter, &FsSourceResolver::new(root))?, out)
        }
        Analysis::Table5 => colocated_csv(&colocated_breakpoints(snap, filter, ColocationMode::SameTask), out),
        Analysis::Table8 => colocated_csv(&colocated_breakpoints(snap, filter, ColocationMode::AcrossTasks), out),
        Analysis::Table9 => class_task_csv(&class_task_matrix(snap, filter), out),
        Analysis::Fig6 => hotspots_csv(&method_hotspots(snap, filter, min), out),
        Analysis::Table10 => comparison_csv(&compare_groups_by_task(snap, filter, control, experiment)?, out),
    }
}

fn product_id(snap: &StoreSnapshot, id_or_name: &str) -> Result<ProductId> {
    snap.resolve_product(id_or_name)
        .map(|p| p.id.clone())
        .ok_or_else(|| Error::UnknownProduct(id_or_name.to_owned()))
}

fn split_values(v: &str) -> Option<Vec<&str>> {
    let v = v.trim();
    if v.is_empty() || v == "all" {
        return None;
    }
    Some(v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect())
}

/// Builds a filter from `key=value` pairs. Task keys are matched within the
/// product when one is given, otherwise in every product.
pub fn parse_filter(snap: &StoreSnapshot, pairs: &[String]) -> Result<QueryFilter> {
    let mut filter = QueryFilter::all();
    let mut tasks = Vec::new();
    for pair in pairs {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("filter {pair:?} is not key=value")))?;
        match key.trim() {
            "product" => filter.product_id = Some(product_id(snap, value.trim())?),
            "task" => tasks.extend(split_values(value).unwrap_or_default().into_iter().map(str::to_owned)),
            "developer" => {
                for d in split_values(value).unwrap_or_default() {
                    let dev = snap
                        .developer_named(d)
                        .or_else(|| snap.developer(&DeveloperId::from(d)))
                        .ok_or_else(|| Error::UnknownDeveloper(d.to_owned()))?;
                    filter.developer_ids.insert(dev.id.clone());
                }
            }
            "session" => {
                for s in split_values(value).unwrap_or_default() {
                    let id = SessionId::from(s);
                    crate::store::require_session(snap, &id)?;
                    filter.session_ids.insert(id);
                }
            }
            other => return Err(Error::Invalid(format!("unknown filter key {other:?}"))),
        }
    }
    for key in tasks {
        let ids: Vec<TaskId> = snap
            .tasks()
            .filter(|t| t.issue_key == key && filter.product_id.as_ref().is_none_or(|p| *p == t.product_id))
            .map(|t| t.id.clone())
            .collect();
        if ids.is_empty() {
            return Err(Error::UnknownTask(key));
        }
        filter.task_ids.extend(ids);
    }
    Ok(filter)
}

/// Export filter: the named product (or the only one) and its tasks.
fn graph_filter(snap: &StoreSnapshot, product: Option<&str>, tasks: Option<&str>) -> Result<QueryFilter> {
    let product = match product {
        Some(p) => p.to_owned(),
        None => {
            let all: Vec<&Product> = snap.products().collect();
            match all.as_slice() {
                [only] => only.id.to_string(),
                [] => return Ok(QueryFilter::all()),
                _ => return Err(Error::Invalid("the store holds several products; pass --product".into())),
            }
        }
    };
    service::task_filter(snap, &product, tasks)
}
