mod common;

use std::io::Cursor;
use std::path::Path;

use a4::cli::{read_report, render_summary, run, summary_counts, token_stats, Command, Mode, ReportRow, RunConfig};
use a4::migrator::{OutcomeKind, Reason};
use common::*;

fn mine_cfg(examples: &Path, store: &Path) -> RunConfig {
    RunConfig {
        catalog_path: Some(fixture("catalog.json")),
        examples_root: Some(examples.to_path_buf()),
        patterns_path: Some(store.to_path_buf()),
        ..RunConfig::new(Command::Mine)
    }
}

fn target_cfg(command: Command, store: &Path, target: &Path, mode: Mode) -> RunConfig {
    RunConfig {
        catalog_path: Some(fixture("catalog.json")),
        patterns_path: Some(store.to_path_buf()),
        target_root: Some(target.to_path_buf()),
        mode,
        ..RunConfig::new(command)
    }
}

fn run_with(config: &RunConfig, input: &str) -> (Result<a4::cli::RunSummary, a4::cli::CliError>, String) {
    let mut out = Vec::new();
    let r = run(config, &mut Cursor::new(input.as_bytes().to_vec()), &mut out);
    (r, String::from_utf8(out).unwrap())
}

fn exit_code(config: &RunConfig) -> i32 {
    match run_with(config, "").0 {
        Ok(s) => s.exit_code,
        Err(e) => e.exit_code(),
    }
}

fn store_for(dir: &Path, examples: &str) -> std::path::PathBuf {
    let store = dir.join("patterns.json");
    run_with(&mine_cfg(&fixture(examples), &store), "").0.unwrap();
    store
}

#[test]
fn mine_prints_counts_and_writes_store() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("p.json");
    let (r, out) = run_with(&mine_cfg(&fixture("corpus"), &store), "");
    assert_eq!(r.unwrap().exit_code, 0);
    assert!(out.contains("patterns found: 14"), "{out}");
    assert!(out.contains("non-migrations filtered: 2"), "{out}");
    assert_eq!(a4::pattern::load_store(&store).unwrap().len(), 14);
}

#[test]
fn mine_report_lists_non_migrations() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("mine.jsonl");
    let cfg = RunConfig {
        output_path: Some(report.clone()),
        ..mine_cfg(&fixture("rename_only"), &dir.path().join("p.json"))
    };
    run_with(&cfg, "").0.unwrap();
    let rows = read_report(&report).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].outcome, OutcomeKind::NotMigration);
    assert_eq!(summary_counts(&rows)[4], ("Not a migration", 1));
}

#[test]
fn empty_examples_give_empty_store() {
    let dir = tempfile::tempdir().unwrap();
    let examples = dir.path().join("none");
    std::fs::create_dir(&examples).unwrap();
    let store = dir.path().join("p.json");
    assert_eq!(exit_code(&mine_cfg(&examples, &store)), 0);
    assert!(a4::pattern::load_store(&store).unwrap().is_empty());
}

#[test]
fn malformed_catalog_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let catalog = dir.path().join("catalog.json");
    std::fs::write(&catalog, "[{\"owner\": 1}]").unwrap();
    let cfg = RunConfig {
        catalog_path: Some(catalog),
        ..mine_cfg(&fixture("corpus"), &dir.path().join("p.json"))
    };
    assert_eq!(exit_code(&cfg), 2);
}

#[test]
fn unreadable_snapshot_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("broken");
    copy_tree(&fixture("getcolor/examples/palette"), &src);
    // not valid UTF-8
    std::fs::write(src.join("after/app/Palette.java"), [0xff, 0xfe, 0x00]).unwrap();
    assert_eq!(exit_code(&mine_cfg(&src, &dir.path().join("p.json"))), 3);
}

#[test]
fn dry_run_prints_diff_and_leaves_files_alone() {
    let dir = tempfile::tempdir().unwrap();
    let store = store_for(dir.path(), "getcolor/examples");
    let target = dir.path().join("t");
    copy_tree(&fixture("getcolor/target"), &target);
    let before = snapshot(&target);
    let (r, out) = run_with(&target_cfg(Command::Apply, &store, &target, Mode::DryRun), "");
    assert_eq!(r.unwrap().exit_code, 0);
    assert!(out.contains("--- a/app/Swatch.java"), "{out}");
    assert!(out.contains("+        int fg = resources.getColor(R.color.text_primary, null);"), "{out}");
    assert_eq!(snapshot(&target), before);
}

#[test]
fn in_place_writes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let store = store_for(dir.path(), "getcolor/examples");
    let target = dir.path().join("t");
    copy_tree(&fixture("getcolor/target"), &target);
    let report = dir.path().join("r.jsonl");
    let cfg = RunConfig {
        output_path: Some(report.clone()),
        ..target_cfg(Command::Apply, &store, &target, Mode::InPlace)
    };
    let s = run_with(&cfg, "").0.unwrap();
    assert_eq!(s.files_changed, 1);
    assert_eq!(read(&target.join("app/Swatch.java")), read(&fixture("getcolor/golden/app/Swatch.java")));
    let rows = read_report(&report).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.outcome == OutcomeKind::Applied && r.tokens_changed == 2));
    assert_eq!(rows[0].pattern_id.as_deref(), Some("palette#1"));
}

#[test]
fn no_matching_calls_is_a_clean_run() {
    let dir = tempfile::tempdir().unwrap();
    let store = store_for(dir.path(), "getcolor/examples");
    let cfg = target_cfg(Command::Apply, &store, &fixture("table2/move/target"), Mode::DryRun);
    let (r, out) = run_with(&cfg, "");
    let s = r.unwrap();
    assert!(s.rows.is_empty());
    assert_eq!(s.exit_code, 0);
    assert!(out.is_empty());
}

#[test]
fn loop_header_call_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let store = store_for(dir.path(), "getcolor/examples");
    let cfg = target_cfg(Command::Apply, &store, &fixture("unsupported/while"), Mode::DryRun);
    let s = run_with(&cfg, "").0.unwrap();
    assert_eq!(s.exit_code, 1);
    assert_eq!(s.rows[0].reason, Reason::LoopHeader);
}

#[test]
fn report_write_failure_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let store = store_for(dir.path(), "getcolor/examples");
    let cfg = RunConfig {
        output_path: Some(dir.path().join("missing/dir/r.jsonl")),
        ..target_cfg(Command::Apply, &store, &fixture("getcolor/target"), Mode::DryRun)
    };
    assert_eq!(exit_code(&cfg), 4);
}

#[test]
fn scan_lists_candidates_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let store = store_for(dir.path(), "corpus");
    let target = dir.path().join("t");
    copy_tree(&fixture("table2/add_context/target"), &target);
    let before = snapshot(&target);
    let (r, out) = run_with(&target_cfg(Command::Scan, &store, &target, Mode::DryRun), "");
    let s = r.unwrap();
    assert_eq!(s.rows.len(), 1);
    assert!(out.contains("chips/ChipView.java:10"), "{out}");
    assert!(out.contains("badge#1"), "{out}");
    assert_eq!(snapshot(&target), before);
}

#[test]
fn interactive_choice_picks_the_pattern() {
    let dir = tempfile::tempdir().unwrap();
    let store = store_for(dir.path(), "corpus");
    let target = dir.path().join("t");
    copy_tree(&fixture("table2/add_context/target"), &target);
    let cfg = target_cfg(Command::Apply, &store, &target, Mode::Interactive);
    let (r, out) = run_with(&cfg, "");
    // end of input skips
    assert_eq!(r.unwrap().files_changed, 0);
    let options = out.lines().filter(|l| l.trim_start().starts_with('[')).count();
    assert_eq!(options, 3, "{out}");
    assert!(out.contains("from palette@0:app/Palette.java"), "{out}");

    let k = out
        .lines()
        .find(|l| l.contains("palette#1"))
        .and_then(|l| l.trim_start().strip_prefix('['))
        .and_then(|l| l.split(']').next())
        .unwrap()
        .to_string();
    let s = run_with(&cfg, &format!("{k}\n")).0.unwrap();
    assert_eq!(s.files_changed, 1);
    let text = read(&target.join("chips/ChipView.java"));
    assert!(text.contains("getColor(R.color.chip_fill, null)"), "{text}");
}

#[test]
fn interactive_skip_reports_guidance() {
    let dir = tempfile::tempdir().unwrap();
    let store = store_for(dir.path(), "getcolor/examples");
    let target = dir.path().join("t");
    copy_tree(&fixture("getcolor/target"), &target);
    let before = snapshot(&target);
    let cfg = target_cfg(Command::Apply, &store, &target, Mode::Interactive);
    let s = run_with(&cfg, "s\n1\n").0.unwrap();
    assert_eq!(s.rows[0].outcome, OutcomeKind::Guidance);
    assert_eq!(s.rows[1].outcome, OutcomeKind::Applied);
    assert_eq!(s.exit_code, 1);
    assert_ne!(snapshot(&target), before);
}

#[test]
fn runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let store = store_for(dir.path(), "corpus");
    let target = dir.path().join("t");
    for t in MIGRATION_TYPES {
        copy_tree(&fixture(&format!("table2/{t}/target")), &target.join(t));
    }
    let cfg = target_cfg(Command::Apply, &store, &target, Mode::DryRun);
    let (a, out_a) = run_with(&cfg, "");
    let (b, out_b) = run_with(&cfg, "");
    assert_eq!(a.unwrap().rows, b.unwrap().rows);
    assert_eq!(out_a, out_b);
    let store2 = dir.path().join("again.json");
    run_with(&mine_cfg(&fixture("corpus"), &store2), "").0.unwrap();
    assert_eq!(std::fs::read(&store).unwrap(), std::fs::read(&store2).unwrap());
}

fn row(outcome: OutcomeKind, reason: Reason, tokens: usize) -> ReportRow {
    ReportRow {
        file: "A.java".into(),
        offset: 0,
        api: "a.B.m()".into(),
        pattern_id: Some("s#1".into()),
        outcome,
        reason,
        tokens_changed: tokens,
        suggested_examples: Vec::new(),
    }
}

#[test]
fn summary_counts_rows() {
    let mut rows = vec![row(OutcomeKind::Applied, Reason::Matched, 2); 3];
    rows.push(row(OutcomeKind::Guidance, Reason::UnmatchedDataflow, 0));
    rows[1].tokens_changed = 5;
    let counts = summary_counts(&rows);
    assert_eq!(counts[0], ("Migrated automatically", 3));
    assert_eq!(counts[2], ("Guidance", 1));
    assert_eq!(counts[6], ("Total", 4));
    assert_eq!(token_stats(&rows), Some((2, 3.0, 5)));
    assert!(render_summary(&rows).contains("min 2  avg 3.00  max 5"));
}

#[test]
fn empty_report_is_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    std::fs::write(&path, "").unwrap();
    let cfg = RunConfig {
        output_path: Some(path),
        ..RunConfig::new(Command::Report)
    };
    let (r, out) = run_with(&cfg, "");
    assert_eq!(r.unwrap().exit_code, 0);
    assert!(summary_counts(&[]).iter().all(|(_, n)| *n == 0));
    assert!(out.contains("no applied migrations"), "{out}");
}

#[test]
fn corrupt_or_missing_report_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    std::fs::write(&path, "{\"file\": 3}\n").unwrap();
    let corrupt = RunConfig {
        output_path: Some(path),
        ..RunConfig::new(Command::Report)
    };
    assert_eq!(exit_code(&corrupt), 2);
    let missing = RunConfig {
        output_path: Some(dir.path().join("nope.jsonl")),
        ..RunConfig::new(Command::Report)
    };
    assert_eq!(exit_code(&missing), 2);
}

#[test]
fn report_average_matches_diffs() {
    let dir = tempfile::tempdir().unwrap();
    let store = store_for(dir.path(), "corpus");
    let target = dir.path().join("t");
    for t in MIGRATION_TYPES {
        copy_tree(&fixture(&format!("table2/{t}/target")), &target.join(t));
    }
    let (r, out) = run_with(&target_cfg(Command::Apply, &store, &target, Mode::DryRun), "");
    let rows = r.unwrap().rows;
    // each target file holds one call, so each file diff belongs to one row
    let diffs: Vec<&str> = out.split("--- a/").skip(1).collect();
    let applied: Vec<&ReportRow> = rows.iter().filter(|r| r.outcome == OutcomeKind::Applied).collect();
    assert_eq!(diffs.len(), applied.len());
    let recounted: usize = diffs.iter().map(|d| recount_tokens(d)).sum();
    let reported: usize = applied.iter().map(|r| r.tokens_changed).sum();
    assert_eq!(recounted, reported);
}

#[test]
fn clap_flags_map_to_config() {
    use clap::Parser;
    let cli = a4::cli::Cli::try_parse_from([
        "a4", "apply", "--catalog", "c.json", "--patterns", "p.json", "--target", "src", "--in-place",
    ])
    .unwrap();
    let cfg = RunConfig::from(cli);
    assert_eq!(cfg.command, Command::Apply);
    assert_eq!(cfg.mode, Mode::InPlace);
    assert!(a4::cli::Cli::try_parse_from([
        "a4", "apply", "--catalog", "c", "--patterns", "p", "--target", "t", "--in-place", "--dry-run",
    ])
    .is_err());
    let cli = a4::cli::Cli::try_parse_from([
        "a4", "mine", "--catalog", "c", "--examples", "e", "--patterns", "p", "--threshold", "0.7",
    ])
    .unwrap();
    assert_eq!(RunConfig::from(cli).similarity_threshold, 0.7);
}
