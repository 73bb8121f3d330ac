//! Command-line front end: `mine`, `scan`, `apply` and `report`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{ApiCatalog, CatalogError};
use crate::diff::unified_diff;
use crate::learner::LearnConfig;
use crate::miner::{java_files, MineError};
use crate::migrator::{commit, plan_file, CallSite, MigrationOutcome, OutcomeKind, Reason};
use crate::pattern::{load_store, save_store, MigrationMapping, PatternError};
use crate::pipeline::{mine_patterns, pattern_ids};
use crate::source::parse;

#[derive(Debug, Parser)]
#[command(name = "a4", version, about = "Learn API migrations from examples and apply them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Learn patterns from example sources and write a pattern store.
    Mine(MineArgs),
    /// List the calls patterns apply to without rewriting anything.
    Scan(TargetArgs),
    /// Rewrite target files with the learned patterns.
    Apply(ApplyArgs),
    /// Summarize a report written by `apply` or `scan`.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct MineArgs {
    #[arg(long)]
    pub catalog: PathBuf,
    #[arg(long)]
    pub examples: PathBuf,
    /// Pattern store to write.
    #[arg(long)]
    pub patterns: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Also write the non-migration examples as report lines.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    #[arg(long)]
    pub catalog: PathBuf,
    #[arg(long)]
    pub patterns: PathBuf,
    /// A Java file or a directory searched recursively.
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// Print diffs only (the default).
    #[arg(long, conflicts_with_all = ["in_place", "interactive"])]
    pub dry_run: bool,
    #[arg(long, conflicts_with = "interactive")]
    pub in_place: bool,
    /// Ask which pattern to use at every call, then rewrite in place.
    #[arg(long)]
    pub interactive: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Mine,
    Scan,
    Apply,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    DryRun,
    InPlace,
    Interactive,
}

/// Everything a run needs, independent of how it was parsed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub catalog_path: Option<PathBuf>,
    pub examples_root: Option<PathBuf>,
    pub patterns_path: Option<PathBuf>,
    pub target_root: Option<PathBuf>,
    pub mode: Mode,
    pub similarity_threshold: f64,
    pub output_path: Option<PathBuf>,
    pub color: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            catalog_path: None,
            examples_root: None,
            patterns_path: None,
            target_root: None,
            mode: Mode::DryRun,
            similarity_threshold: 0.5,
            output_path: None,
            color: false,
        }
    }
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let target = |c: Command, t: TargetArgs| RunConfig {
            catalog_path: Some(t.catalog),
            patterns_path: Some(t.patterns),
            target_root: Some(t.target),
            output_path: t.report,
            ..RunConfig::new(c)
        };
        match cli.command {
            CliCommand::Mine(m) => RunConfig {
                catalog_path: Some(m.catalog),
                examples_root: Some(m.examples),
                patterns_path: Some(m.patterns),
                similarity_threshold: m.threshold,
                output_path: m.report,
                ..RunConfig::new(Command::Mine)
            },
            CliCommand::Scan(t) => target(Command::Scan, t),
            CliCommand::Apply(a) => {
                let mode = if a.interactive {
                    Mode::Interactive
                } else if a.in_place {
                    Mode::InPlace
                } else {
                    Mode::DryRun
                };
                RunConfig {
                    mode,
                    ..target(Command::Apply, a.target)
                }
            }
            CliCommand::Report(r) => RunConfig {
                output_path: Some(r.report),
                ..RunConfig::new(Command::Report)
            },
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Mine(#[from] MineError),
    #[error(transparent)]
    Patterns(#[from] PatternError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot read report {path}: {reason}")]
    Report { path: PathBuf, reason: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mine(MineError::UnreadableSnapshot(_)) => 3,
            CliError::Write { .. } => 4,
            _ => 2,
        }
    }
}

/// One line of the JSON lines report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportRow {
    pub file: String,
    pub offset: usize,
    pub api: String,
    pub pattern_id: Option<String>,
    pub outcome: OutcomeKind,
    pub reason: Reason,
    pub tokens_changed: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suggested_examples: Vec<String>,
}

/// What a run produced, for callers that want more than the exit code.
#[derive(Debug, Default)]
pub struct RunSummary {
    pub rows: Vec<ReportRow>,
    pub files_changed: usize,
    pub exit_code: i32,
}

/// Entry point for the binary: parses `args`, runs, returns the exit code.
pub fn main_with_args<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut config = RunConfig::from(cli);
    use std::io::IsTerminal;
    config.color = std::env::var_os("A4_NO_COLOR").is_none() && std::io::stdout().is_terminal();
    if config.mode == Mode::Interactive && !std::io::stdin().is_terminal() {
        eprintln!("a4: --interactive needs a terminal");
        return 2;
    }
    let stdin = std::io::stdin();
    let mut input = stdin.lock();
    let mut out = std::io::stdout();
    match run(&config, &mut input, &mut out) {
        Ok(summary) => summary.exit_code,
        Err(e) => {
            eprintln!("a4: {e}");
            e.exit_code()
        }
    }
}

/// Runs one command. `input` is read only in interactive mode.
pub fn run(config: &RunConfig, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<RunSummary, CliError> {
    match config.command {
        Command::Mine => cmd_mine(config, out),
        Command::Scan | Command::Apply => cmd_apply(config, input, out),
        Command::Report => cmd_report(config, out),
    }
}

fn required<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    p.as_deref().ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn io_write(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    }
}

fn console(out: &mut dyn Write, text: &str) {
    // the console is best effort; a closed pipe must not fail the run
    let _ = out.write_all(text.as_bytes());
}

pub fn cmd_mine(config: &RunConfig, out: &mut dyn Write) -> Result<RunSummary, CliError> {
    let catalog = ApiCatalog::load(required(&config.catalog_path, "catalog")?)?;
    let examples = required(&config.examples_root, "examples")?;
    let store = required(&config.patterns_path, "patterns")?;
    let cfg = LearnConfig {
        threshold: config.similarity_threshold,
        ..LearnConfig::default()
    };
    let summary = mine_patterns(examples, &catalog, &cfg)?;
    let records = summary.records();
    save_store(store, &records)?;
    let rows: Vec<ReportRow> = summary
        .non_migrations
        .iter()
        .map(|ex| ReportRow {
            file: format!("{}/{}", ex.source_id, ex.path),
            offset: ex.focal_offset(),
            api: ex.api.key().to_string(),
            pattern_id: None,
            outcome: OutcomeKind::NotMigration,
            reason: Reason::NonMigration,
            tokens_changed: 0,
            suggested_examples: vec![ex.id()],
        })
        .collect();
    if let Some(path) = &config.output_path {
        write_report(path, &rows)?;
    }
    let unreplayable = records.iter().filter(|r| !r.replayable).count();
    let mut text = format!(
        "patterns found: {}\nnon-migrations filtered: {}\nempty patterns discarded: {}\n",
        records.len(),
        summary.non_migrations.len(),
        summary.empty
    );
    if unreplayable > 0 {
        let _ = writeln!(text, "patterns that do not replay their example: {unreplayable}");
    }
    if summary.failed > 0 {
        let _ = writeln!(text, "examples that could not be learned: {}", summary.failed);
    }
    console(out, &text);
    Ok(RunSummary {
        rows,
        ..RunSummary::default()
    })
}

struct FilePlan {
    rel: String,
    path: PathBuf,
    source: String,
    sites: Vec<CallSite>,
}

fn target_files(root: &Path) -> Result<Vec<(String, PathBuf)>, CliError> {
    if root.is_file() {
        let name = root.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        return Ok(vec![(name, root.to_path_buf())]);
    }
    if !root.is_dir() {
        return Err(CliError::Usage(format!("no such target {}", root.display())));
    }
    Ok(java_files(root)?.into_iter().collect())
}

fn paint(color: bool, kind: OutcomeKind, text: &str) -> String {
    if !color {
        return text.to_string();
    }
    let code = match kind {
        OutcomeKind::Applied => "32",
        OutcomeKind::Guidance => "33",
        OutcomeKind::Unsupported => "31",
        OutcomeKind::NotMigration => "36",
    };
    format!("\x1b[{code}m{text}\x1b[0m")
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

pub fn cmd_apply(config: &RunConfig, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<RunSummary, CliError> {
    let catalog = ApiCatalog::load(required(&config.catalog_path, "catalog")?)?;
    let patterns = load_store(required(&config.patterns_path, "patterns")?)?;
    let root = required(&config.target_root, "target")?;
    let ids = pattern_ids(&patterns.iter().map(|p| p.record.clone()).collect::<Vec<_>>());
    let files = target_files(root)?;

    let plans: Vec<FilePlan> = files
        .par_iter()
        .map(|(rel, path)| {
            let source = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let pr = parse(&source);
            let sites = plan_file(&pr, rel, &patterns, &catalog);
            Ok(FilePlan {
                rel: rel.clone(),
                path: path.clone(),
                source,
                sites,
            })
        })
        .collect::<Result<_, CliError>>()?;

    let mut rows = Vec::new();
    let mut rewrites: Vec<(PathBuf, String)> = Vec::new();
    for plan in plans.iter().filter(|p| !p.sites.is_empty()) {
        if config.command == Command::Scan {
            for site in &plan.sites {
                let line = line_of(&plan.source, site.focal.start);
                let found: Vec<String> = site
                    .attempts
                    .iter()
                    .map(|a| format!("{} {:?}", ids[a.pattern_index], a.outcome.kind))
                    .collect();
                console(out, &format!("{}:{}: {} [{}]\n", plan.rel, line, site.api, found.join(", ")));
                let first = &site.attempts[site.default_choice()];
                rows.push(row(&plan.rel, site, &ids[first.pattern_index], &first.outcome));
            }
            continue;
        }
        let choices: Vec<Option<usize>> = if config.mode == Mode::Interactive {
            let mut picked = Vec::new();
            for site in &plan.sites {
                picked.push(prompt(config, plan, site, &ids, &patterns, input, out));
            }
            picked
        } else {
            plan.sites.iter().map(|s| Some(s.default_choice())).collect()
        };
        let pr = parse(&plan.source);
        let (text, results) = commit(&pr, &plan.sites, &choices, &patterns);
        for (site, (index, outcome)) in plan.sites.iter().zip(&results) {
            let line = line_of(&plan.source, site.focal.start);
            let label = format!("{:?}({:?})", outcome.kind, outcome.reason);
            console(
                out,
                &format!("{}:{}: {} {}\n", plan.rel, line, site.api, paint(config.color, outcome.kind, &label)),
            );
            rows.push(row(&plan.rel, site, &ids[*index], outcome));
        }
        if text != plan.source {
            if config.mode == Mode::DryRun {
                console(out, &unified_diff(&plan.source, &text, &format!("a/{}", plan.rel), &format!("b/{}", plan.rel), 3));
            }
            rewrites.push((plan.path.clone(), text));
        }
    }

    let mut files_changed = 0;
    if config.command == Command::Apply && config.mode != Mode::DryRun {
        for (path, text) in &rewrites {
            write_atomic(path, text)?;
            files_changed += 1;
        }
    }
    if let Some(path) = &config.output_path {
        write_report(path, &rows)?;
    }
    let attention = rows.iter().any(|r| r.outcome != OutcomeKind::Applied);
    let exit_code = if config.command == Command::Apply && attention { 1 } else { 0 };
    Ok(RunSummary {
        rows,
        files_changed,
        exit_code,
    })
}

fn row(file: &str, site: &CallSite, pattern_id: &str, outcome: &MigrationOutcome) -> ReportRow {
    ReportRow {
        file: file.to_string(),
        offset: site.focal.start,
        api: site.api.clone(),
        pattern_id: Some(pattern_id.to_string()),
        outcome: outcome.kind,
        reason: outcome.reason,
        tokens_changed: outcome.tokens_changed,
        suggested_examples: if outcome.is_applied() {
            Vec::new()
        } else {
            outcome.suggested_examples.clone()
        },
    }
}

/// Lists every pattern tried at `site` and reads a 1-based choice.
/// Anything that is not a valid number skips the site; so does end of
/// input.
fn prompt(
    config: &RunConfig,
    plan: &FilePlan,
    site: &CallSite,
    ids: &[String],
    patterns: &[MigrationMapping],
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Option<usize> {
    let line = line_of(&plan.source, site.focal.start);
    let mut text = format!("{}:{}: {}\n", plan.rel, line, site.api);
    for (k, a) in site.attempts.iter().enumerate() {
        let p = &patterns[a.pattern_index];
        let label = format!("{:?}({:?})", a.outcome.kind, a.outcome.reason);
        let _ = writeln!(
            text,
            "  [{}] {} {} from {}",
            k + 1,
            ids[a.pattern_index],
            paint(config.color, a.outcome.kind, &label),
            p.record.example_id
        );
        if let Some(d) = &a.outcome.diff {
            for l in d.lines() {
                let _ = writeln!(text, "      {l}");
            }
        }
    }
    let _ = write!(text, "choose 1-{} or s to skip: ", site.attempts.len());
    console(out, &text);
    let _ = out.flush();
    let mut answer = String::new();
    if input.read_line(&mut answer).unwrap_or(0) == 0 {
        return None;
    }
    match answer.trim().parse::<usize>() {
        Ok(k) if (1..=site.attempts.len()).contains(&k) => Some(k - 1),
        _ => None,
    }
}

/// Replaces `path` by writing a sibling temporary file and renaming it.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_write(path))?;
    tmp.write_all(text.as_bytes()).map_err(io_write(path))?;
    if let Ok(meta) = std::fs::metadata(path) {
        let _ = tmp.as_file().set_permissions(meta.permissions());
    }
    tmp.persist(path).map_err(|e| CliError::Write {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

pub fn write_report(path: &Path, rows: &[ReportRow]) -> Result<(), CliError> {
    let mut text = String::new();
    for r in rows {
        text.push_str(&serde_json::to_string(r).expect("report rows serialize"));
        text.push('\n');
    }
    write_atomic(path, &text)
}

pub fn read_report(path: &Path) -> Result<Vec<ReportRow>, CliError> {
    let bad = |reason: String| CliError::Report {
        path: path.to_path_buf(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| bad(format!("line {}: {e}", i + 1))))
        .collect()
}

/// Row counts of the summary table, in display order.
pub fn summary_counts(rows: &[ReportRow]) -> Vec<(&'static str, usize)> {
    let count = |k: OutcomeKind| rows.iter().filter(|r| r.outcome == k).count();
    let applied = count(OutcomeKind::Applied);
    vec![
        ("Migrated automatically", applied),
        // telling these apart needs a build and the target's tests
        ("Migrated with minor changes", 0),
        ("Guidance", count(OutcomeKind::Guidance)),
        ("False positive", 0),
        ("Not a migration", count(OutcomeKind::NotMigration)),
        ("Unsupported", count(OutcomeKind::Unsupported)),
        ("Total", rows.len()),
    ]
}

/// Minimum, mean and maximum tokens changed over applied rows.
pub fn token_stats(rows: &[ReportRow]) -> Option<(usize, f64, usize)> {
    let t: Vec<usize> = rows
        .iter()
        .filter(|r| r.outcome == OutcomeKind::Applied)
        .map(|r| r.tokens_changed)
        .collect();
    let min = *t.iter().min()?;
    let max = *t.iter().max()?;
    Some((min, t.iter().sum::<usize>() as f64 / t.len() as f64, max))
}

pub fn render_summary(rows: &[ReportRow]) -> String {
    let counts = summary_counts(rows);
    let mut reasons: BTreeMap<(OutcomeKind, Reason), usize> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.outcome != OutcomeKind::Applied) {
        *reasons.entry((r.outcome, r.reason)).or_default() += 1;
    }
    let reason_label = |k: &OutcomeKind, r: &Reason| format!("{k:?}({r:?})");
    let width = counts
        .iter()
        .map(|(l, _)| l.len())
        .chain(reasons.keys().map(|(k, r)| reason_label(k, r).len()))
        .max()
        .unwrap_or(0);
    let mut text = String::new();
    for (label, n) in &counts {
        if *label == "Total" {
            let _ = writeln!(text, "{}", "-".repeat(width + 8));
        }
        let _ = writeln!(text, "{label:<width$}  {n:>6}");
    }
    if !reasons.is_empty() {
        text.push('\n');
        for ((k, r), n) in &reasons {
            let _ = writeln!(text, "{:<width$}  {n:>6}", reason_label(k, r));
        }
    }
    text.push('\n');
    match token_stats(rows) {
        Some((min, avg, max)) => {
            let _ = writeln!(text, "tokens changed: min {min}  avg {avg:.2}  max {max}");
        }
        None => text.push_str("tokens changed: no applied migrations\n"),
    }
    text
}

pub fn cmd_report(config: &RunConfig, out: &mut dyn Write) -> Result<RunSummary, CliError> {
    let rows = read_report(required(&config.output_path, "report")?)?;
    console(out, &render_summary(&rows));
    Ok(RunSummary {
        rows,
        ..RunSummary::default()
    })
}
