//! Mining migration examples from snapshot directories.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::{debug, info};
use rayon::prelude::*;

use crate::catalog::{ApiCatalog, ApiDeclaration, MatchResult};
use crate::dataflow::{backward_slice, build_dfg, DataFlowGraph, SlicedGraph};
use crate::diff::{levenshtein, line_changes};
use crate::source::{parse, AstNode, NodeKind, ParseResult, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    SnapshotSequence,
    ExplicitPair,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleSource {
    pub id: String,
    pub versions: Vec<PathBuf>,
    pub kind: SourceKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Mined,
    UserProvided,
}

#[derive(Debug, thiserror::Error)]
pub enum MineError {
    #[error("unreadable snapshot {0}")]
    UnreadableSnapshot(PathBuf),
}

/// One side of an example: the file, the enclosing method and the focal
/// call with its backward slice.
#[derive(Debug, Clone)]
pub struct ExampleSide {
    pub file: Arc<ParseResult>,
    pub method_path: Vec<usize>,
    pub focal: Option<Span>,
    pub slice: Option<SlicedGraph>,
}

impl ExampleSide {
    pub fn method(&self) -> &AstNode {
        self.file
            .ast
            .at_path(&self.method_path)
            .expect("method path is valid")
    }

    pub fn method_text(&self) -> &str {
        self.file.text(&self.method().span)
    }

    pub fn focal_call(&self) -> Option<&AstNode> {
        let span = self.focal.as_ref()?;
        call_at(&self.file, span)
    }
}

#[derive(Debug, Clone)]
pub struct MigrationExample {
    pub api: ApiDeclaration,
    pub source_id: String,
    /// Index of the older snapshot of the pair.
    pub version: usize,
    /// File path relative to the snapshot root, `/`-separated.
    pub path: String,
    pub before: ExampleSide,
    pub after: ExampleSide,
    pub provenance: Provenance,
}

impl MigrationExample {
    pub fn focal_offset(&self) -> usize {
        self.before.focal.as_ref().map_or(0, |s| s.start)
    }

    pub fn id(&self) -> String {
        format!("{}@{}:{}:{}", self.source_id, self.version, self.path, self.focal_offset())
    }

    pub fn removes_call(&self) -> bool {
        self.after.focal.is_none()
    }
}

/// The method invocation with exactly `span`.
pub fn call_at<'a>(pr: &'a ParseResult, span: &Span) -> Option<&'a AstNode> {
    pr.ast
        .walk()
        .find(|n| n.kind == NodeKind::MethodInvocation && n.span == *span)
}

impl ExampleSource {
    /// Reads a source directory laid out as `vNNN/` snapshots or a
    /// `before/` + `after/` pair. Returns `None` for other directories.
    pub fn open(dir: &Path) -> Result<Option<Self>, MineError> {
        let id = dir
            .file_name()
            .map_or_else(|| dir.display().to_string(), |n| n.to_string_lossy().into_owned());
        let mut snapshots = Vec::new();
        let (mut before, mut after) = (None, None);
        for entry in read_dir_sorted(dir)? {
            if !entry.is_dir() {
                continue;
            }
            let name = entry.file_name().unwrap_or_default().to_string_lossy().into_owned();
            if name == "before" {
                before = Some(entry);
            } else if name == "after" {
                after = Some(entry);
            } else if let Some(n) = name.strip_prefix('v').and_then(|d| d.parse::<u32>().ok()) {
                snapshots.push((n, entry));
            }
        }
        if let (Some(b), Some(a)) = (before, after) {
            return Ok(Some(ExampleSource {
                id,
                versions: vec![b, a],
                kind: SourceKind::ExplicitPair,
            }));
        }
        if snapshots.len() >= 2 {
            snapshots.sort();
            return Ok(Some(ExampleSource {
                id,
                versions: snapshots.into_iter().map(|(_, p)| p).collect(),
                kind: SourceKind::SnapshotSequence,
            }));
        }
        Ok(None)
    }
}

/// Example sources under `root`: `root` itself when it is a source,
/// otherwise each qualifying subdirectory in name order.
pub fn discover_sources(root: &Path) -> Result<Vec<ExampleSource>, MineError> {
    if let Some(s) = ExampleSource::open(root)? {
        return Ok(vec![s]);
    }
    let mut out = Vec::new();
    for entry in read_dir_sorted(root)? {
        if entry.is_dir() {
            match ExampleSource::open(&entry)? {
                Some(s) => out.push(s),
                None => debug!("{} is not an example source", entry.display()),
            }
        }
    }
    Ok(out)
}

fn read_dir_sorted(dir: &Path) -> Result<Vec<PathBuf>, MineError> {
    let unreadable = |_| MineError::UnreadableSnapshot(dir.to_path_buf());
    let mut entries = std::fs::read_dir(dir)
        .map_err(unreadable)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(unreadable)?;
    entries.sort();
    Ok(entries)
}

/// Java files under `root`, keyed by `/`-separated relative path.
pub fn java_files(root: &Path) -> Result<BTreeMap<String, PathBuf>, MineError> {
    let mut out = BTreeMap::new();
    for entry in walkdir::WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            MineError::UnreadableSnapshot(e.path().unwrap_or(root).to_path_buf())
        })?;
        let path = entry.path();
        if entry.file_type().is_file() && path.extension().is_some_and(|e| e == "java") {
            let rel = path.strip_prefix(root).unwrap_or(path);
            let key = rel
                .components()
                .map(|c| c.as_os_str().to_string_lossy())
                .collect::<Vec<_>>()
                .join("/");
            out.insert(key, path.to_path_buf());
        }
    }
    Ok(out)
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Whether `text` contains `name` delimited by non-identifier characters.
pub fn contains_identifier(text: &str, name: &str) -> bool {
    if name.is_empty() {
        return false;
    }
    text.match_indices(name).any(|(i, _)| {
        let before = text[..i].chars().next_back();
        let after = text[i + name.len()..].chars().next();
        !before.is_some_and(is_ident_char) && !after.is_some_and(is_ident_char)
    })
}

/// Files whose text mentions a catalog method name as a whole identifier.
pub fn lexical_prefilter<'a, K: Clone>(
    files: impl IntoIterator<Item = (K, &'a str)>,
    catalog: &ApiCatalog,
) -> Vec<K> {
    let names = catalog.method_names();
    files
        .into_iter()
        .filter(|(_, text)| names.iter().any(|n| contains_identifier(text, n)))
        .map(|(k, _)| k)
        .collect()
}

/// Invocations matching a catalog entry, in textual order. Ambiguous
/// matches are left out.
pub fn find_api_calls<'a>(
    file: &'a ParseResult,
    catalog: &ApiCatalog,
) -> Vec<(&'a AstNode, MatchResult)> {
    file.invocations()
        .into_iter()
        .filter_map(|call| match catalog.match_invocation(call, file) {
            Ok(m) if m.is_match() => Some((call, m)),
            Ok(_) => None,
            Err(e) => {
                debug!("skipping call at {}: {e}", call.span.start);
                None
            }
        })
        .collect()
}

/// Mines every consecutive snapshot pair of `source`.
pub fn mine_examples(
    source: &ExampleSource,
    catalog: &ApiCatalog,
) -> Result<Vec<MigrationExample>, MineError> {
    let provenance = match source.kind {
        SourceKind::ExplicitPair => Provenance::UserProvided,
        SourceKind::SnapshotSequence => Provenance::Mined,
    };
    let mut out = Vec::new();
    for (version, pair) in source.versions.windows(2).enumerate() {
        let before_files = java_files(&pair[0])?;
        let after_files = java_files(&pair[1])?;
        for (rel, before_path) in &before_files {
            let Some(after_path) = after_files.get(rel) else {
                continue;
            };
            let read = |p: &PathBuf| {
                std::fs::read_to_string(p).map_err(|_| MineError::UnreadableSnapshot(p.clone()))
            };
            let (before, after) = (read(before_path)?, read(after_path)?);
            if line_changes(&before, &after).is_empty() {
                continue;
            }
            if lexical_prefilter([((), before.as_str())], catalog).is_empty() {
                continue;
            }
            let ctx = PairContext {
                catalog,
                source_id: &source.id,
                version,
                path: rel,
                provenance,
            };
            out.extend(ctx.examples(parse(&before), parse(&after)));
        }
    }
    info!("{}: {} candidate examples", source.id, out.len());
    Ok(out)
}

/// Mines several sources in parallel; results are ordered by source id,
/// version, path and offset.
pub fn mine_all(
    sources: &[ExampleSource],
    catalog: &ApiCatalog,
) -> Result<Vec<MigrationExample>, MineError> {
    let per_source: Vec<Vec<MigrationExample>> = sources
        .par_iter()
        .map(|s| mine_examples(s, catalog))
        .collect::<Result<_, _>>()?;
    let mut all: Vec<MigrationExample> = per_source.into_iter().flatten().collect();
    all.sort_by(|a, b| {
        (&a.source_id, a.version, &a.path, a.focal_offset())
            .cmp(&(&b.source_id, b.version, &b.path, b.focal_offset()))
    });
    Ok(all)
}

struct PairContext<'a> {
    catalog: &'a ApiCatalog,
    source_id: &'a str,
    version: usize,
    path: &'a str,
    provenance: Provenance,
}

struct MethodInfo {
    path: Vec<usize>,
    dfg: DataFlowGraph,
}

fn method_key(pr: &ParseResult, method: &AstNode) -> (String, String, usize) {
    let class = pr
        .enclosing_class(&method.span)
        .and_then(|c| c.name())
        .unwrap_or_default()
        .to_string();
    let params = method.children_with_role(crate::source::Role::Param).count();
    (class, method.name().unwrap_or_default().to_string(), params)
}

fn slice_for(dfg: &DataFlowGraph, call: &AstNode) -> Option<SlicedGraph> {
    let focal = dfg.node_containing(&call.span)?;
    backward_slice(dfg, focal).ok()
}

fn slice_labels(s: &SlicedGraph) -> Vec<(NodeKind, Option<String>)> {
    s.kept_nodes()
        .map(|n| (n.label.kind, n.label.method.clone()))
        .collect()
}

fn slice_texts(s: &SlicedGraph) -> Vec<String> {
    s.kept_nodes().map(|n| n.normalized()).collect()
}

impl PairContext<'_> {
    fn examples(&self, before: ParseResult, after: ParseResult) -> Vec<MigrationExample> {
        let before = Arc::new(before);
        let after = Arc::new(after);
        let mut by_method: BTreeMap<Vec<usize>, Vec<(&AstNode, ApiDeclaration)>> = BTreeMap::new();
        for (call, m) in find_api_calls(&before, self.catalog) {
            let api = m.matched.expect("matched");
            if !api.is_deprecated() {
                continue;
            }
            let Some(method) = before.enclosing_method(&call.span) else {
                continue;
            };
            let path = before
                .ast
                .path_of(NodeKind::MethodDecl, &method.span)
                .expect("method is in the tree");
            by_method.entry(path).or_default().push((call, api));
        }
        let mut out = Vec::new();
        for (bpath, calls) in by_method {
            let bmethod = before.ast.at_path(&bpath).expect("valid path");
            let key = method_key(&before, bmethod);
            let Some(amethod) = after
                .ast
                .walk()
                .find(|n| n.kind == NodeKind::MethodDecl && method_key(&after, n) == key)
            else {
                debug!("{}: method {}.{} gone, skipping", self.path, key.0, key.1);
                continue;
            };
            let ainfo = MethodInfo {
                path: after
                    .ast
                    .path_of(NodeKind::MethodDecl, &amethod.span)
                    .expect("method is in the tree"),
                dfg: build_dfg(amethod, after.source()),
            };
            let binfo = MethodInfo {
                dfg: build_dfg(bmethod, before.source()),
                path: bpath,
            };
            out.extend(self.pair_calls(&before, &binfo, bmethod, &after, &ainfo, amethod, calls));
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn pair_calls(
        &self,
        before: &Arc<ParseResult>,
        binfo: &MethodInfo,
        bmethod: &AstNode,
        after: &Arc<ParseResult>,
        ainfo: &MethodInfo,
        amethod: &AstNode,
        calls: Vec<(&AstNode, ApiDeclaration)>,
    ) -> Vec<MigrationExample> {
        let after_calls: Vec<&AstNode> = after
            .invocations()
            .into_iter()
            .filter(|c| amethod.span.start <= c.span.start && c.span.end <= amethod.span.end)
            .collect();
        let mut used = vec![false; after_calls.len()];
        let mut out = Vec::new();
        for (call, api) in calls {
            let Some(bslice) = slice_for(&binfo.dfg, call) else {
                continue;
            };
            let names: Vec<&str> = std::iter::once(api.method.as_str())
                .chain(api.replacement.as_ref().map(|r| r.method.as_str()))
                .collect();
            let rel = call.span.start - bmethod.span.start;
            let blabels = slice_labels(&bslice);
            let mut best: Option<(usize, usize, usize, SlicedGraph)> = None;
            for (i, ac) in after_calls.iter().enumerate() {
                if used[i] || !ac.name().is_some_and(|n| names.contains(&n)) {
                    continue;
                }
                let Some(aslice) = slice_for(&ainfo.dfg, ac) else {
                    continue;
                };
                let dist = (ac.span.start - amethod.span.start).abs_diff(rel);
                let label_dist = levenshtein(&blabels, &slice_labels(&aslice));
                if best.as_ref().is_none_or(|b| (dist, label_dist) < (b.1, b.2)) {
                    best = Some((i, dist, label_dist, aslice));
                }
            }
            let before_side = ExampleSide {
                file: Arc::clone(before),
                method_path: binfo.path.clone(),
                focal: Some(call.span.clone()),
                slice: Some(bslice.clone()),
            };
            let after_side = match best {
                Some((i, _, _, aslice)) => {
                    let ac = after_calls[i];
                    let unchanged = before.text(&call.span) == after.text(&ac.span)
                        && slice_texts(&bslice) == slice_texts(&aslice)
                        && bslice.focal_node().normalized() == aslice.focal_node().normalized();
                    used[i] = true;
                    if unchanged {
                        continue;
                    }
                    ExampleSide {
                        file: Arc::clone(after),
                        method_path: ainfo.path.clone(),
                        focal: Some(ac.span.clone()),
                        slice: Some(aslice),
                    }
                }
                None => ExampleSide {
                    file: Arc::clone(after),
                    method_path: ainfo.path.clone(),
                    focal: None,
                    slice: None,
                },
            };
            out.push(MigrationExample {
                api,
                source_id: self.source_id.to_string(),
                version: self.version,
                path: self.path.to_string(),
                before: before_side,
                after: after_side,
                provenance: self.provenance,
            });
        }
        out
    }
}

/// Splits examples into real migrations and those whose after call still
/// resolves to the same deprecated entry.
pub fn partition_non_migrations(
    examples: Vec<MigrationExample>,
    catalog: &ApiCatalog,
) -> (Vec<MigrationExample>, Vec<MigrationExample>) {
    examples.into_iter().partition(|ex| {
        let Some(call) = ex.after.focal_call() else {
            return true;
        };
        match catalog.match_invocation(call, &ex.after.file) {
            Ok(m) => {
                let same = m.matched.as_ref().is_some_and(|api| api.key() == ex.api.key());
                if same {
                    info!("{}: not a migration", ex.id());
                }
                !same
            }
            Err(_) => true,
        }
    })
}

pub fn filter_non_migrations(
    examples: Vec<MigrationExample>,
    catalog: &ApiCatalog,
) -> Vec<MigrationExample> {
    partition_non_migrations(examples, catalog).0
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const CATALOG: &str = r#"[
  {"owner": "android.content.res.Resources", "method": "getColor", "paramTypes": ["int"],
   "returnType": "int", "introducedIn": 1, "deprecatedIn": 23,
   "replacement": {"owner": "android.content.res.Resources", "method": "getColor",
                   "paramTypes": ["int", "android.content.res.Resources.Theme"]}},
  {"owner": "android.content.res.Resources", "method": "getColor",
   "paramTypes": ["int", "android.content.res.Resources.Theme"],
   "returnType": "int", "introducedIn": 23, "deprecatedIn": null, "replacement": null}
]"#;

    const BEFORE: &str = "package app;\n\nimport android.content.res.Resources;\n\nclass Paint {\n    int accent(Resources res) {\n        int c = res.getColor(R.color.accent);\n        return c;\n    }\n}\n";

    fn write_pair(dir: &Path, before: &str, after: &str) {
        for (side, text) in [("before", before), ("after", after)] {
            let d = dir.join(side).join("app");
            std::fs::create_dir_all(&d).unwrap();
            std::fs::write(d.join("Paint.java"), text).unwrap();
        }
    }

    fn mine(before: &str, after: &str) -> Vec<MigrationExample> {
        let tmp = tempfile::tempdir().unwrap();
        write_pair(tmp.path(), before, after);
        let cat = ApiCatalog::from_json(CATALOG).unwrap();
        let sources = discover_sources(tmp.path()).unwrap();
        assert_eq!(sources.len(), 1);
        assert_eq!(sources[0].kind, SourceKind::ExplicitPair);
        mine_examples(&sources[0], &cat).unwrap()
    }

    #[test]
    fn identifier_boundaries() {
        assert!(!contains_identifier("x.getColorful(1)", "getColor"));
        assert!(contains_identifier("res.getColor(1)", "getColor"));
        assert!(contains_identifier("getColor", "getColor"));
        assert!(!contains_identifier("mgetColor", "getColor"));
        let cat = ApiCatalog::from_json(CATALOG).unwrap();
        let files = [("a", "getColorful("), ("b", "res.getColor(")];
        assert_eq!(lexical_prefilter(files, &cat), vec!["b"]);
    }

    #[test]
    fn comment_mentions_are_not_calls() {
        let cat = ApiCatalog::from_json(CATALOG).unwrap();
        let src = "import android.content.res.Resources;\nclass A { // getColor(1)\n void f() {} }";
        assert_eq!(lexical_prefilter([((), src)], &cat).len(), 1);
        assert!(find_api_calls(&parse(src), &cat).is_empty());
    }

    #[test]
    fn null_argument_change_is_one_example() {
        let after = BEFORE.replace("R.color.accent)", "R.color.accent, null)");
        let ex = mine(BEFORE, &after);
        assert_eq!(ex.len(), 1);
        assert_eq!(ex[0].api.param_types, ["int"]);
        assert_eq!(ex[0].provenance, Provenance::UserProvided);
        assert_eq!(ex[0].after.focal_call().unwrap().arity(), 2);
        assert!(ex[0].before.slice.as_ref().unwrap().kept.contains(&ex[0].before.slice.as_ref().unwrap().focal));
        let cat = ApiCatalog::from_json(CATALOG).unwrap();
        assert_eq!(filter_non_migrations(ex, &cat).len(), 1);
    }

    #[test]
    fn identical_snapshots_yield_nothing() {
        assert!(mine(BEFORE, BEFORE).is_empty());
    }

    #[test]
    fn rename_only_is_filtered() {
        let before = BEFORE.replace("int accent(Resources res) {", "int accent(Resources res, int id) {")
            .replace("R.color.accent", "id");
        let after = before
            .replace("int id) {", "int colorId) {")
            .replace("getColor(id)", "getColor(colorId)");
        let ex = mine(&before, &after);
        assert_eq!(ex.len(), 1);
        let cat = ApiCatalog::from_json(CATALOG).unwrap();
        let kept = filter_non_migrations(ex.clone(), &cat);
        assert!(kept.is_empty());
        // idempotent
        assert!(filter_non_migrations(kept, &cat).is_empty());
        assert!(filter_non_migrations(Vec::new(), &cat).is_empty());
    }

    #[test]
    fn deleted_call_is_a_removal_example() {
        let after = BEFORE.replace("int c = res.getColor(R.color.accent);", "int c = 0;");
        let ex = mine(BEFORE, &after);
        assert_eq!(ex.len(), 1);
        assert!(ex[0].removes_call());
    }

    #[test]
    fn snapshot_sequences_are_ordered() {
        let tmp = tempfile::tempdir().unwrap();
        let src = tmp.path().join("proj");
        let after = BEFORE.replace("R.color.accent)", "R.color.accent, null)");
        for (v, text) in [("v000", BEFORE), ("v001", BEFORE), ("v002", after.as_str())] {
            let d = src.join(v);
            std::fs::create_dir_all(&d).unwrap();
            std::fs::write(d.join("Paint.java"), text).unwrap();
        }
        let sources = discover_sources(tmp.path()).unwrap();
        assert_eq!(sources[0].id, "proj");
        assert_eq!(sources[0].kind, SourceKind::SnapshotSequence);
        let cat = ApiCatalog::from_json(CATALOG).unwrap();
        let ex = mine_all(&sources, &cat).unwrap();
        assert_eq!(ex.len(), 1);
        assert_eq!(ex[0].version, 1);
        assert_eq!(ex[0].provenance, Provenance::Mined);
    }

    #[test]
    fn missing_snapshot_is_unreadable() {
        let src = ExampleSource {
            id: "x".into(),
            versions: vec![PathBuf::from("/nonexistent/a"), PathBuf::from("/nonexistent/b")],
            kind: SourceKind::ExplicitPair,
        };
        let cat = ApiCatalog::from_json(CATALOG).unwrap();
        assert!(matches!(
            mine_examples(&src, &cat),
            Err(MineError::UnreadableSnapshot(_))
        ));
    }
}
