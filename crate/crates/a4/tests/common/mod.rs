#![allow(dead_code)]

use std::path::{Path, PathBuf};

use a4::catalog::ApiCatalog;
use a4::learner::LearnConfig;
use a4::migrator::{commit, plan_file, CallSite, MigrationOutcome};
use a4::pattern::MigrationMapping;
use a4::pipeline::{mine_patterns, MineSummary};
use a4::source::parse;

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

pub fn catalog() -> ApiCatalog {
    ApiCatalog::load(&fixture("catalog.json")).expect("fixture catalog loads")
}

pub fn mine(rel: &str) -> MineSummary {
    mine_patterns(&fixture(rel), &catalog(), &LearnConfig::default()).expect("mining succeeds")
}

/// Rewrites `text` with the default choice at every call site.
pub fn migrate(text: &str, name: &str, patterns: &[MigrationMapping]) -> (String, Vec<MigrationOutcome>, Vec<CallSite>) {
    let pr = parse(text);
    let sites = plan_file(&pr, name, patterns, &catalog());
    let choices: Vec<Option<usize>> = sites.iter().map(|s| Some(s.default_choice())).collect();
    let (out, results) = commit(&pr, &sites, &choices, patterns);
    (out, results.into_iter().map(|(_, o)| o).collect(), sites)
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Copies the directory tree `from` into `to`.
pub fn copy_tree(from: &Path, to: &Path) {
    for entry in walkdir::WalkDir::new(from) {
        let entry = entry.unwrap();
        let dest = to.join(entry.path().strip_prefix(from).unwrap());
        if entry.file_type().is_dir() {
            std::fs::create_dir_all(&dest).unwrap();
        } else {
            std::fs::copy(entry.path(), &dest).unwrap();
        }
    }
}

/// Relative path and contents of every file under `root`.
pub fn snapshot(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out: Vec<(PathBuf, Vec<u8>)> = walkdir::WalkDir::new(root)
        .into_iter()
        .map(Result::unwrap)
        .filter(|e| e.file_type().is_file())
        .map(|e| (e.path().strip_prefix(root).unwrap().to_path_buf(), std::fs::read(e.path()).unwrap()))
        .collect();
    out.sort();
    out
}

/// The single Java file under `dir`, relative to it.
pub fn only_java(dir: &Path) -> String {
    let files: Vec<String> = walkdir::WalkDir::new(dir)
        .into_iter()
        .map(Result::unwrap)
        .filter(|e| e.path().extension().is_some_and(|x| x == "java"))
        .map(|e| e.path().strip_prefix(dir).unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(files.len(), 1, "{}", dir.display());
    files.into_iter().next().unwrap()
}

pub const MIGRATION_TYPES: [&str; 8] = [
    "move",
    "rename",
    "remove_parameter",
    "encapsulate",
    "expose",
    "change_type",
    "add_context",
    "external",
];

/// Token edit distance recounted from a unified diff, hunk by hunk.
pub fn recount_tokens(diff: &str) -> usize {
    let mut total = 0;
    let (mut old, mut new) = (String::new(), String::new());
    let mut flush = |old: &mut String, new: &mut String| {
        total += edit_distance(&a4::source::significant_texts(old), &a4::source::significant_texts(new));
        old.clear();
        new.clear();
    };
    for line in diff.lines() {
        if line.starts_with("---") || line.starts_with("+++") {
            continue;
        }
        if line.starts_with("@@") {
            flush(&mut old, &mut new);
            continue;
        }
        let (tag, body) = line.split_at(line.len().min(1));
        match tag {
            " " => {
                old.push_str(body);
                old.push('\n');
                new.push_str(body);
                new.push('\n');
            }
            "-" => {
                old.push_str(body);
                old.push('\n');
            }
            "+" => {
                new.push_str(body);
                new.push('\n');
            }
            _ => {}
        }
    }
    flush(&mut old, &mut new);
    total
}

/// Plain dynamic-programming Levenshtein distance.
pub fn edit_distance(a: &[String], b: &[String]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for i in 1..=a.len() {
        let mut cur = vec![i; b.len() + 1];
        for j in 1..=b.len() {
            let sub = prev[j - 1] + usize::from(a[i - 1] != b[j - 1]);
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}
