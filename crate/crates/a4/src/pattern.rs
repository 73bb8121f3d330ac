//! Learned migration patterns and their on-disk store.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::catalog::ApiDeclaration;
use crate::dataflow::{backward_slice, build_dfg, DataFlowGraph, SlicedGraph};
use crate::source::{parse, AstNode, NodeKind, ParseResult, Role, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EditKind {
    Rename,
    InsertToken,
    DeleteToken,
    ReplaceArgument,
}

/// Replace `len` bytes at `at` (relative to the node's first byte) with
/// `text`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenEdit {
    pub kind: EditKind,
    pub at: usize,
    pub len: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NodePairing {
    pub before_idx: usize,
    pub after_idx: usize,
    pub similarity: f64,
    pub edits: Vec<TokenEdit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinedVar {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NewNode {
    pub after_idx: usize,
    pub text: String,
    pub defines: Vec<DefinedVar>,
}

/// Enough of the enclosing file to re-resolve names in a snippet.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SnippetContext {
    pub package: Option<String>,
    /// Import paths; static imports carry a `static ` prefix.
    pub imports: Vec<String>,
    pub class_name: String,
    pub fields: Vec<String>,
}

/// Focal call position relative to the method snippet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocalRef {
    pub offset: usize,
    pub len: usize,
}

/// The serialized form of a pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PatternRecord {
    pub api: ApiDeclaration,
    pub source_id: String,
    pub example_id: String,
    pub before_snippet: String,
    pub after_snippet: String,
    pub before_context: SnippetContext,
    pub after_context: SnippetContext,
    pub before_focal: FocalRef,
    pub after_focal: Option<FocalRef>,
    pub pairings: Vec<NodePairing>,
    pub new_nodes: Vec<NewNode>,
    pub removes_call: bool,
    pub replayable: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum PatternError {
    #[error("cannot read pattern store {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt pattern store: {0}")]
    Corrupt(String),
}

/// One side of a pattern, reparsed from its snippet and context.
#[derive(Debug, Clone)]
pub struct PatternSide {
    pub file: ParseResult,
    pub method_path: Vec<usize>,
    pub focal: Option<Span>,
    pub dfg: DataFlowGraph,
}

impl PatternSide {
    pub fn method(&self) -> &AstNode {
        self.file.ast.at_path(&self.method_path).expect("valid method path")
    }

    pub fn focal_call(&self) -> Option<&AstNode> {
        let span = self.focal.as_ref()?;
        crate::miner::call_at(&self.file, span)
    }

    pub fn focal_node(&self) -> Option<usize> {
        self.dfg.node_containing(self.focal.as_ref()?)
    }

    /// Statement node behind a DFG node.
    pub fn stmt(&self, id: usize) -> &AstNode {
        self.method()
            .at_path(&self.dfg.nodes[id].stmt_path)
            .expect("valid statement path")
    }

    fn slice(&self) -> Option<SlicedGraph> {
        backward_slice(&self.dfg, self.focal_node()?).ok()
    }
}

/// A pattern ready for matching and replay.
#[derive(Debug, Clone)]
pub struct MigrationMapping {
    pub record: PatternRecord,
    pub before: PatternSide,
    pub after: PatternSide,
    /// Before slice restricted to the nodes that survive pruning.
    pub before_pattern: SlicedGraph,
    /// After slice restricted likewise; absent for removal patterns.
    pub after_pattern: Option<SlicedGraph>,
}

impl MigrationMapping {
    pub fn api(&self) -> &ApiDeclaration {
        &self.record.api
    }

    pub fn pairings(&self) -> &[NodePairing] {
        &self.record.pairings
    }

    pub fn new_nodes(&self) -> &[NewNode] {
        &self.record.new_nodes
    }

    pub fn removes_call(&self) -> bool {
        self.record.removes_call
    }

    pub fn pairing_for(&self, before_id: usize) -> Option<&NodePairing> {
        self.record.pairings.iter().find(|p| p.before_idx == before_id)
    }

    /// Pattern nodes with no counterpart.
    pub fn unmatched_before(&self) -> BTreeSet<usize> {
        self.before_pattern
            .kept
            .iter()
            .copied()
            .filter(|&id| self.pairing_for(id).is_none())
            .collect()
    }

    /// Rebuilds the runtime form by reparsing the stored snippets.
    pub fn from_record(record: PatternRecord) -> Result<Self, PatternError> {
        let before = side(&record.before_context, &record.before_snippet, Some(record.before_focal))?;
        let after = side(&record.after_context, &record.after_snippet, record.after_focal)?;
        let bslice = before
            .slice()
            .ok_or_else(|| PatternError::Corrupt("before focal is not a call".into()))?;
        let aslice = match record.after_focal {
            Some(_) => Some(
                after
                    .slice()
                    .ok_or_else(|| PatternError::Corrupt("after focal is not a call".into()))?,
            ),
            None => None,
        };
        let (bkeep, akeep) = prune_identical(&bslice, aslice.as_ref(), &after.dfg);
        let before_pattern = SlicedGraph {
            kept: bkeep,
            ..bslice
        };
        let after_pattern = aslice.map(|s| SlicedGraph { kept: akeep, ..s });
        for p in &record.pairings {
            if p.before_idx >= before.dfg.nodes.len() || p.after_idx >= after.dfg.nodes.len() {
                return Err(PatternError::Corrupt(format!(
                    "pairing {}->{} out of range",
                    p.before_idx, p.after_idx
                )));
            }
        }
        Ok(MigrationMapping {
            record,
            before,
            after,
            before_pattern,
            after_pattern,
        })
    }
}

/// Nodes of each slice that survive pruning. A node is pruned when an
/// identical node exists on the other side and every data-adjacent node
/// other than the focal is likewise identical. Focal nodes always survive.
/// Before nodes are compared with the whole after method, so a statement
/// that stays put but no longer feeds the call is pruned too.
pub fn prune_identical(
    before: &SlicedGraph,
    after: Option<&SlicedGraph>,
    after_method: &DataFlowGraph,
) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let texts = |g: &DataFlowGraph, ids: &mut dyn Iterator<Item = usize>| -> BTreeSet<String> {
        ids.map(|i| g.nodes[i].normalized()).collect()
    };
    let btexts = texts(&before.base, &mut before.kept.iter().copied());
    let atexts = texts(after_method, &mut (0..after_method.nodes.len()));
    let survivors = |s: &SlicedGraph, other: &BTreeSet<String>| -> BTreeSet<usize> {
        let identical = |i: usize| other.contains(&s.base.nodes[i].normalized());
        s.kept
            .iter()
            .copied()
            .filter(|&i| {
                if i == s.focal || !identical(i) {
                    return true;
                }
                let neighbours = s.base.adjacent(i);
                !neighbours
                    .iter()
                    .filter(|&&n| n != s.focal && s.kept.contains(&n))
                    .all(|&n| identical(n))
            })
            .collect()
    };
    let bkeep = survivors(before, &atexts);
    let akeep = after.map(|a| survivors(a, &btexts)).unwrap_or_default();
    (bkeep, akeep)
}

/// Captures package, imports, class name and field declarations around
/// `method`.
pub fn snippet_context(pr: &ParseResult, method: &AstNode) -> SnippetContext {
    let imports = pr
        .ast
        .children
        .iter()
        .filter(|c| c.kind == NodeKind::ImportDecl)
        .filter_map(|c| {
            let path = c.name()?;
            Some(if c.role == Role::StaticImport {
                format!("static {path}")
            } else {
                path.to_string()
            })
        })
        .collect();
    let class = pr.enclosing_class(&method.span);
    let fields = class
        .map(|c| {
            c.children
                .iter()
                .filter(|f| f.kind == NodeKind::FieldDecl)
                .map(|f| pr.text(&f.span).to_string())
                .collect()
        })
        .unwrap_or_default();
    SnippetContext {
        package: pr.ast.name().map(str::to_string),
        imports,
        class_name: class.and_then(|c| c.name()).unwrap_or("Example").to_string(),
        fields,
    }
}

/// A compilation unit holding just the context and the method; returns
/// the text and the method's start offset.
pub fn synthetic_unit(ctx: &SnippetContext, method: &str) -> (String, usize) {
    let mut out = String::new();
    if let Some(p) = &ctx.package {
        out.push_str(&format!("package {p};\n"));
    }
    for i in &ctx.imports {
        out.push_str(&format!("import {i};\n"));
    }
    out.push_str(&format!("class {} {{\n", ctx.class_name));
    for f in &ctx.fields {
        out.push_str(f);
        out.push('\n');
    }
    let at = out.len();
    out.push_str(method);
    out.push_str("\n}\n");
    (out, at)
}

fn side(ctx: &SnippetContext, snippet: &str, focal: Option<FocalRef>) -> Result<PatternSide, PatternError> {
    let (text, at) = synthetic_unit(ctx, snippet);
    let file = parse(&text);
    let span = at..at + snippet.len();
    let method_path = file
        .ast
        .path_of(NodeKind::MethodDecl, &span)
        .ok_or_else(|| PatternError::Corrupt("snippet is not a single method".into()))?;
    let focal = match focal {
        Some(f) => {
            let s = at + f.offset..at + f.offset + f.len;
            if crate::miner::call_at(&file, &s).is_none() {
                return Err(PatternError::Corrupt(format!(
                    "no call at snippet offset {}",
                    f.offset
                )));
            }
            Some(s)
        }
        None => None,
    };
    let method = file.ast.at_path(&method_path).expect("path just found");
    let dfg = build_dfg(method, file.source());
    Ok(PatternSide {
        file,
        method_path,
        focal,
        dfg,
    })
}

pub fn save_store(path: &Path, records: &[PatternRecord]) -> Result<(), PatternError> {
    let json = serde_json::to_string_pretty(records).expect("records serialize");
    let io = |source| PatternError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    std::io::Write::write_all(&mut tmp, format!("{json}\n").as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn load_store(path: &Path) -> Result<Vec<MigrationMapping>, PatternError> {
    let text = std::fs::read_to_string(path).map_err(|source| PatternError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let records: Vec<PatternRecord> =
        serde_json::from_str(&text).map_err(|e| PatternError::Corrupt(e.to_string()))?;
    records.into_iter().map(MigrationMapping::from_record).collect()
}
