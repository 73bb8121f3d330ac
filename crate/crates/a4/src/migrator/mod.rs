//! Finding migration candidates in target code and applying patterns.

pub mod anchor;
pub mod embed;
pub mod names;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::catalog::{ApiCatalog, MatchError};
use crate::dataflow::{backward_slice, build_dfg, DataFlowGraph, Header, SlicedGraph};
use crate::diff::{levenshtein, unified_diff};
use crate::miner::MigrationExample;
use crate::pattern::MigrationMapping;
use crate::source::{
    parse, qualify, significant_texts, AstNode, DiagnosticKind, Edit, NodeKind, ParseResult, Span,
};
use anchor::{locate_any, resolve, Side};
use embed::{slice_embeddings, verify_embedding, Embedding};
use names::{align_names, argument_holes, choose_names, declared_in, free_identifiers, substitute, visible_map, PatternVar};

/// Most embeddings kept per call site.
const EMBEDDING_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OutcomeKind {
    Applied,
    Guidance,
    Unsupported,
    /// A mined example set aside as not being a migration.
    NotMigration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Reason {
    Matched,
    UnmatchedDataflow,
    RemovesCall,
    TryCatchSpan,
    LoopHeader,
    ConditionHeader,
    AmbiguousMatch,
    OverlapConflict,
    /// The pattern does not reproduce its own example.
    Unreplayable,
    NonMigration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MigrationOutcome {
    pub kind: OutcomeKind,
    pub reason: Reason,
    pub suggested_examples: Vec<String>,
    /// Span edits against the target file; present iff applied.
    pub edits: Option<Vec<Edit>>,
    pub diff: Option<String>,
    pub tokens_changed: usize,
}

impl MigrationOutcome {
    pub fn guidance(reason: Reason, pattern: &MigrationMapping) -> Self {
        Self::without_edits(OutcomeKind::Guidance, reason, pattern)
    }

    pub fn unsupported(reason: Reason, pattern: &MigrationMapping) -> Self {
        Self::without_edits(OutcomeKind::Unsupported, reason, pattern)
    }

    fn without_edits(kind: OutcomeKind, reason: Reason, pattern: &MigrationMapping) -> Self {
        MigrationOutcome {
            kind,
            reason,
            suggested_examples: vec![pattern.record.example_id.clone()],
            edits: None,
            diff: None,
            tokens_changed: 0,
        }
    }

    pub fn is_applied(&self) -> bool {
        self.kind == OutcomeKind::Applied
    }
}

#[derive(Debug, Clone)]
pub struct MigrationCandidate<'p> {
    pub focal: Span,
    pub method_path: Vec<usize>,
    pub target_slice: SlicedGraph,
    pub embedding: Embedding,
    pub pattern: &'p MigrationMapping,
}

/// A call to the pattern's API that could not be embedded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnmatchedCall {
    pub focal: Span,
    pub reason: Reason,
}

#[derive(Debug, Clone, Default)]
pub struct CandidateSearch<'p> {
    pub candidates: Vec<MigrationCandidate<'p>>,
    pub unmatched: Vec<UnmatchedCall>,
}

/// Calls in `target` that `pattern` applies to, one candidate per
/// embedding of the pattern's before slice.
pub fn find_candidates<'p>(
    target: &ParseResult,
    pattern: &'p MigrationMapping,
    catalog: &ApiCatalog,
) -> CandidateSearch<'p> {
    let mut out = CandidateSearch::default();
    let key = pattern.api().key();
    let mut graphs: HashMap<Vec<usize>, DataFlowGraph> = HashMap::new();
    let pcall = pattern.before.focal_call().expect("pattern focal is a call");
    for call in target.invocations() {
        if call.name() != Some(pattern.api().method.as_str()) {
            continue;
        }
        let unmatched = |reason| UnmatchedCall {
            focal: call.span.clone(),
            reason,
        };
        match catalog.match_invocation(call, target) {
            Err(MatchError::AmbiguousMatch(entries)) => {
                if entries.iter().any(|e| e.key() == key) {
                    out.unmatched.push(unmatched(Reason::AmbiguousMatch));
                }
                continue;
            }
            Ok(m) if m.is_match() && m.matched.as_ref().is_some_and(|d| d.key() == key) => {}
            Ok(_) => continue,
        }
        let Some(method) = target.enclosing_method(&call.span) else {
            out.unmatched.push(unmatched(Reason::UnmatchedDataflow));
            continue;
        };
        let method_path = target
            .ast
            .path_of(NodeKind::MethodDecl, &method.span)
            .expect("enclosing method is in the tree");
        if nested_call_blocks(call, pcall, target, catalog) {
            out.unmatched.push(unmatched(Reason::UnmatchedDataflow));
            continue;
        }
        let dfg = graphs
            .entry(method_path.clone())
            .or_insert_with(|| build_dfg(method, target.source()));
        let Some(focal) = dfg.node_containing(&call.span) else {
            out.unmatched.push(unmatched(Reason::UnmatchedDataflow));
            continue;
        };
        let slice = backward_slice(dfg, focal).expect("focal node exists");
        let found = slice_embeddings(&pattern.before_pattern, &pattern.before.file, &slice, target, EMBEDDING_LIMIT);
        if found.is_empty() {
            out.unmatched.push(unmatched(Reason::UnmatchedDataflow));
            continue;
        }
        for embedding in found {
            out.candidates.push(MigrationCandidate {
                focal: call.span.clone(),
                method_path: method_path.clone(),
                target_slice: slice.clone(),
                embedding,
                pattern,
            });
        }
    }
    out
}

/// A nested call argument whose type cannot be resolved only matches a
/// pattern that has a call of the same name in that position.
fn nested_call_blocks(call: &AstNode, pcall: &AstNode, target: &ParseResult, catalog: &ApiCatalog) -> bool {
    let pargs = pcall.arguments();
    call.arguments().iter().enumerate().any(|(i, a)| {
        a.kind == NodeKind::MethodInvocation
            && catalog.type_of(a, target).is_none()
            && !pargs
                .get(i)
                .is_some_and(|p| p.kind == NodeKind::MethodInvocation && p.name() == a.name())
    })
}

/// Where new statements go in the target.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Insertion {
    /// Target DFG node the statements attach to.
    node: usize,
    /// `false` inserts in front of the statement, `true` after it.
    after: bool,
    texts: Vec<String>,
}

fn target_method<'a>(target: &'a ParseResult, c: &MigrationCandidate) -> &'a AstNode {
    target.ast.at_path(&c.method_path).expect("candidate method path")
}

fn target_stmt<'a>(target: &'a ParseResult, c: &MigrationCandidate, node: usize) -> &'a AstNode {
    target_method(target, c)
        .at_path(&c.target_slice.base.nodes[node].stmt_path)
        .expect("statement path")
}

/// Groups new statements by the target node they attach to. Statements
/// before the after-focal go in front of the next paired statement;
/// statements after it follow the focal statement.
fn insertion_plan(c: &MigrationCandidate) -> Vec<Insertion> {
    let p = c.pattern;
    let Some(after_focal) = p.after_pattern.as_ref().map(|s| s.focal) else {
        return Vec::new();
    };
    let mut groups: BTreeMap<(usize, bool), Vec<String>> = BTreeMap::new();
    for nn in p.new_nodes() {
        let (before_id, after) = if nn.after_idx > after_focal {
            (p.before_pattern.focal, true)
        } else {
            let next = p
                .pairings()
                .iter()
                .filter(|q| q.after_idx > nn.after_idx)
                .min_by_key(|q| q.after_idx)
                .map_or(p.before_pattern.focal, |q| q.before_idx);
            (next, false)
        };
        let Some(&t) = c.embedding.get(&before_id) else { continue };
        groups.entry((t, after)).or_default().push(nn.text.clone());
    }
    groups
        .into_iter()
        .map(|((node, after), texts)| Insertion { node, after, texts })
        .collect()
}

/// Decides whether the candidate can be rewritten automatically.
pub fn check_supported(c: &MigrationCandidate) -> Result<(), Reason> {
    if c.pattern.removes_call() {
        return Err(Reason::RemovesCall);
    }
    let nodes = &c.target_slice.base.nodes;
    let focal = &nodes[c.target_slice.focal];
    match focal.header {
        Header::Loop => return Err(Reason::LoopHeader),
        Header::Condition => return Err(Reason::ConditionHeader),
        Header::TryResources => return Err(Reason::TryCatchSpan),
        Header::None | Header::CatchParam => {}
    }
    let mut touched: BTreeSet<usize> = c
        .pattern
        .pairings()
        .iter()
        .filter(|q| !q.edits.is_empty())
        .filter_map(|q| c.embedding.get(&q.before_idx).copied())
        .collect();
    touched.extend(insertion_plan(c).into_iter().map(|i| i.node));
    if touched.iter().any(|&t| nodes[t].try_region != focal.try_region) {
        return Err(Reason::TryCatchSpan);
    }
    Ok(())
}

/// Pattern variables referenced by edits and new statements.
fn pattern_vars(p: &MigrationMapping) -> Vec<PatternVar> {
    let bsite = p.before.focal.clone().expect("before focal");
    let before_vis = visible_map(&p.before.file, &bsite);
    let after_vis = p
        .after
        .focal
        .as_ref()
        .map(|s| visible_map(&p.after.file, s))
        .unwrap_or_default();
    let mut introduced: BTreeMap<String, Option<String>> = BTreeMap::new();
    for nn in p.new_nodes() {
        for d in &nn.defines {
            if !before_vis.contains_key(&d.name) {
                let ty = d.ty.as_deref().map(|t| qualify(&p.after.file, t));
                introduced.insert(d.name.clone(), ty);
            }
        }
    }
    let mut referenced: BTreeSet<String> = BTreeSet::new();
    for q in p.pairings() {
        let node = &p.before.dfg.nodes[q.before_idx];
        for e in &q.edits {
            let dot = prev_is_dot(&p.before.file, node.span.start + e.at);
            referenced.extend(free_identifiers(&e.text, dot));
        }
    }
    for nn in p.new_nodes() {
        referenced.extend(free_identifiers(&nn.text, false));
    }
    referenced
        .into_iter()
        .filter_map(|name| {
            if let Some(ty) = introduced.get(&name) {
                return Some(PatternVar {
                    name,
                    ty: ty.clone(),
                    introduced: true,
                });
            }
            let v = before_vis.get(&name).or_else(|| after_vis.get(&name))?;
            Some(PatternVar {
                name,
                ty: (!v.written_type.is_empty()).then(|| v.qualified_type.clone()),
                introduced: false,
            })
        })
        .collect()
}

fn prev_is_dot(file: &ParseResult, x: usize) -> bool {
    file.tokens
        .iter()
        .take_while(|t| t.span.end <= x)
        .filter(|t| !t.is_trivia())
        .last()
        .is_some_and(|t| t.text == ".")
}

/// Chooses target names for the pattern's variables: names read off the
/// embedded statements first, then a visible variable of the same name
/// and type, then the nearest visible variable of the same type, then the
/// pattern's own name made fresh.
pub fn infer_names(c: &MigrationCandidate, target: &ParseResult) -> BTreeMap<String, String> {
    let p = c.pattern;
    let mut aligned = Vec::new();
    if let (Some(pc), Some(tc)) = (p.before.focal_call(), crate::miner::call_at(target, &c.focal)) {
        align_names(pc, tc, &mut aligned);
    }
    for (&pb, &t) in &c.embedding {
        align_names(p.before.stmt(pb), target_stmt(target, c, t), &mut aligned);
    }
    let visible: Vec<_> = crate::source::visible_variables(target, &c.focal);
    let declared = declared_in(target_method(target, c));
    choose_names(&pattern_vars(p), &aligned, &visible, &declared)
}

/// Rewrites the candidate. Every failure downgrades to guidance; the
/// target is never partly rewritten.
pub fn apply_mapping(c: &MigrationCandidate, target: &ParseResult, file_name: &str) -> MigrationOutcome {
    if !c.pattern.record.replayable {
        return MigrationOutcome::guidance(Reason::Unreplayable, c.pattern);
    }
    apply_unchecked(c, target, file_name)
}

fn apply_unchecked(c: &MigrationCandidate, target: &ParseResult, file_name: &str) -> MigrationOutcome {
    let p = c.pattern;
    let guidance = |r| MigrationOutcome::guidance(r, p);
    let names = infer_names(c, target);
    let visible = visible_map(target, &c.focal);
    for v in pattern_vars(p) {
        if !v.introduced && !visible.contains_key(&names[&v.name]) {
            return guidance(Reason::UnmatchedDataflow);
        }
    }
    let (Some(pcall), Some(tcall)) = (p.before.focal_call(), crate::miner::call_at(target, &c.focal)) else {
        return guidance(Reason::UnmatchedDataflow);
    };
    let holes = argument_holes(&p.before.file, pcall, target, tcall);

    let mut edits = Vec::new();
    for q in p.pairings().iter().filter(|q| !q.edits.is_empty()) {
        let Some(&t) = c.embedding.get(&q.before_idx) else {
            return guidance(Reason::UnmatchedDataflow);
        };
        let pnode = &p.before.dfg.nodes[q.before_idx];
        let is_focal = q.before_idx == p.before_pattern.focal;
        let pstmt = p.before.stmt(q.before_idx);
        let tstmt = target_stmt(target, c, t);
        let roots = |x: usize| {
            if is_focal && pcall.span.start <= x && x <= pcall.span.end {
                (pcall, tcall)
            } else {
                (pstmt, tstmt)
            }
        };
        let place = |x: usize, sides: [Side; 2]| {
            let (pr, tr) = roots(x);
            let a = locate_any(&p.before.file, pr, x, sides)?;
            resolve(target, tr, &a)
        };
        for e in &q.edits {
            let x0 = pnode.span.start + e.at;
            let x1 = x0 + e.len;
            let span = if e.len == 0 {
                place(x0, [Side::AfterPrev, Side::BeforeNext]).map(|y| y..y)
            } else {
                match (
                    place(x0, [Side::AfterPrev, Side::BeforeNext]),
                    place(x1, [Side::BeforeNext, Side::AfterPrev]),
                ) {
                    (Some(a), Some(b)) if a <= b => Some(a..b),
                    _ => None,
                }
            };
            let Some(span) = span else {
                return guidance(Reason::UnmatchedDataflow);
            };
            let dot = prev_is_dot(&p.before.file, x0);
            edits.push(Edit::new(span, substitute(&e.text, dot, &holes, &names)));
        }
    }
    for ins in insertion_plan(c) {
        let stmt = target_stmt(target, c, ins.node);
        let indent = indentation(target.source(), stmt.span.start);
        let texts: Vec<String> = ins
            .texts
            .iter()
            .map(|t| substitute(t, false, &holes, &names))
            .collect();
        if ins.after {
            let mut text = String::new();
            for t in texts {
                text.push('\n');
                text.push_str(&indent);
                text.push_str(&t);
            }
            edits.push(Edit::insert(stmt.span.end, text));
        } else {
            let mut text = String::new();
            for t in texts {
                text.push_str(&t);
                text.push('\n');
                text.push_str(&indent);
            }
            edits.push(Edit::insert(stmt.span.start, text));
        }
    }
    let texts: Vec<String> = edits.iter().map(|e| e.text.clone()).collect();
    edits.extend(import_edits(p, target, &texts));
    finish(c, target, file_name, edits)
}

/// Imports the pattern's after side added that the inserted text needs
/// and the target lacks, placed in sorted position.
fn import_edits(p: &MigrationMapping, target: &ParseResult, texts: &[String]) -> Vec<Edit> {
    let before: BTreeSet<&String> = p.record.before_context.imports.iter().collect();
    let used: BTreeSet<String> = texts.iter().flat_map(|t| free_identifiers(t, false)).collect();
    let have = target.imports();
    let have: Vec<&str> = have.iter().map(|h| h.trim_start_matches("static ")).collect();
    let package = target.ast.name().unwrap_or("");
    let mut wanted: Vec<&str> = p
        .record
        .after_context
        .imports
        .iter()
        .filter(|i| !before.contains(i) && !i.starts_with("static ") && !i.ends_with(".*"))
        .filter(|i| i.rsplit('.').next().is_some_and(|simple| used.contains(simple)))
        .map(String::as_str)
        .filter(|i| {
            let pkg = i.rsplit_once('.').map_or("", |(pkg, _)| pkg);
            !have.iter().any(|h| h == i || h.strip_suffix(".*") == Some(pkg)) && pkg != package
        })
        .collect();
    wanted.sort_unstable();
    wanted.dedup();
    let decls: Vec<&AstNode> = target
        .ast
        .children
        .iter()
        .filter(|c| c.kind == NodeKind::ImportDecl)
        .collect();
    let mut at: BTreeMap<usize, String> = BTreeMap::new();
    for imp in wanted {
        let line = format!("import {imp};");
        if let Some(next) = decls.iter().find(|d| d.name().is_some_and(|n| n > imp)) {
            at.entry(next.span.start).or_default().push_str(&format!("{line}\n"));
        } else if let Some(last) = decls.last() {
            at.entry(last.span.end).or_default().push_str(&format!("\n{line}"));
        } else {
            let after_package = target
                .tokens
                .iter()
                .position(|t| t.text == "package")
                .and_then(|i| target.tokens[i..].iter().find(|t| t.text == ";"))
                .map(|t| t.span.end);
            match after_package {
                Some(end) => at.entry(end).or_default().push_str(&format!("\n\n{line}")),
                None => at.entry(0).or_default().push_str(&format!("{line}\n\n")),
            }
        }
    }
    at.into_iter().map(|(pos, text)| Edit::insert(pos, text)).collect()
}

fn finish(c: &MigrationCandidate, target: &ParseResult, file_name: &str, edits: Vec<Edit>) -> MigrationOutcome {
    let p = c.pattern;
    let Ok(rewritten) = target.render(&edits) else {
        return MigrationOutcome::guidance(Reason::OverlapConflict, p);
    };
    let recoveries = |pr: &ParseResult| {
        pr.diagnostics
            .iter()
            .filter(|d| d.kind == DiagnosticKind::Recovery)
            .count()
    };
    if recoveries(&parse(&rewritten)) > recoveries(target) {
        return MigrationOutcome::guidance(Reason::OverlapConflict, p);
    }
    if !verify_embedding(&p.before_pattern, &c.target_slice, &c.embedding) {
        return MigrationOutcome::guidance(Reason::UnmatchedDataflow, p);
    }
    let tokens_changed = tokens_changed(target.source(), &rewritten);
    let diff = unified_diff(
        target.source(),
        &rewritten,
        &format!("a/{file_name}"),
        &format!("b/{file_name}"),
        3,
    );
    MigrationOutcome {
        kind: OutcomeKind::Applied,
        reason: Reason::Matched,
        suggested_examples: vec![p.record.example_id.clone()],
        edits: Some(edits),
        diff: Some(diff),
        tokens_changed,
    }
}

/// Leading whitespace of the line holding `at`, or a single space when
/// the line has other text before `at`.
fn indentation(source: &str, at: usize) -> String {
    let line_start = source[..at].rfind('\n').map_or(0, |i| i + 1);
    let prefix = &source[line_start..at];
    if prefix.chars().all(char::is_whitespace) {
        prefix.to_string()
    } else {
        " ".to_string()
    }
}

/// Token edit distance between two versions of a file.
pub fn tokens_changed(old: &str, new: &str) -> usize {
    let (a, b) = (significant_texts(old), significant_texts(new));
    let head = a.iter().zip(&b).take_while(|(x, y)| x == y).count();
    let tail = a[head..]
        .iter()
        .rev()
        .zip(b[head..].iter().rev())
        .take_while(|(x, y)| x == y)
        .count();
    levenshtein(&a[head..a.len() - tail], &b[head..b.len() - tail])
}

/// Whether `pattern` rewrites its own example's before method into the
/// after method, compared token by token.
pub fn replays_own_example(pattern: &MigrationMapping, example: &MigrationExample, catalog: &ApiCatalog) -> bool {
    let Some(focal) = example.before.focal.clone() else {
        return false;
    };
    let file = &example.before.file;
    let method = example.before.method().span.clone();
    let want = significant_texts(example.after.method_text());
    find_candidates(file, pattern, catalog)
        .candidates
        .iter()
        .filter(|c| c.focal == focal)
        .any(|c| {
            if check_supported(c).is_err() {
                return false;
            }
            let out = apply_unchecked(c, file, &example.path);
            let Some(edits) = out.edits else { return false };
            let Ok(text) = file.render(&edits) else { return false };
            let growth = |e: &Edit| e.text.len() as isize - e.span.len() as isize;
            let shift: isize = edits.iter().filter(|e| e.span.end <= method.start).map(growth).sum();
            let grown: isize = edits.iter().map(growth).sum();
            let start = (method.start as isize + shift) as usize;
            let end = (method.end as isize + grown) as usize;
            text.get(start..end)
                .is_some_and(|m| significant_texts(m) == want)
        })
}

/// All patterns tried on one call.
#[derive(Debug, Clone)]
pub struct CallSite {
    pub focal: Span,
    pub api: String,
    pub attempts: Vec<Attempt>,
}

#[derive(Debug, Clone)]
pub struct Attempt {
    pub pattern_index: usize,
    pub outcome: MigrationOutcome,
}

impl CallSite {
    /// The first applied attempt, else the first attempt.
    pub fn default_choice(&self) -> usize {
        self.attempts
            .iter()
            .position(|a| a.outcome.is_applied())
            .unwrap_or(0)
    }
}

/// Tries every pattern, in order, on every matching call of `target`.
pub fn plan_file(
    target: &ParseResult,
    file_name: &str,
    patterns: &[MigrationMapping],
    catalog: &ApiCatalog,
) -> Vec<CallSite> {
    let mut sites: BTreeMap<(usize, usize), CallSite> = BTreeMap::new();
    for (i, pattern) in patterns.iter().enumerate() {
        let search = find_candidates(target, pattern, catalog);
        let mut per_call: BTreeMap<(usize, usize), MigrationOutcome> = BTreeMap::new();
        for c in &search.candidates {
            let key = (c.focal.start, c.focal.end);
            if per_call.get(&key).is_some_and(MigrationOutcome::is_applied) {
                continue;
            }
            let outcome = match check_supported(c) {
                Err(r) => MigrationOutcome::unsupported(r, pattern),
                Ok(()) => apply_mapping(c, target, file_name),
            };
            let replace = match per_call.get(&key) {
                None => true,
                Some(_) => outcome.is_applied(),
            };
            if replace {
                per_call.insert(key, outcome);
            }
        }
        for u in &search.unmatched {
            per_call.insert((u.focal.start, u.focal.end), MigrationOutcome::guidance(u.reason, pattern));
        }
        for (key, outcome) in per_call {
            sites
                .entry(key)
                .or_insert_with(|| CallSite {
                    focal: key.0..key.1,
                    api: pattern.api().key().to_string(),
                    attempts: Vec::new(),
                })
                .attempts
                .push(Attempt {
                    pattern_index: i,
                    outcome,
                });
        }
    }
    sites.into_values().collect()
}

/// Combines the chosen attempts into one rewrite. `choices[i]` picks an
/// attempt of `sites[i]`, or skips the site. Applied attempts whose edits
/// clash with earlier ones become guidance.
pub fn commit(
    target: &ParseResult,
    sites: &[CallSite],
    choices: &[Option<usize>],
    patterns: &[MigrationMapping],
) -> (String, Vec<(usize, MigrationOutcome)>) {
    let mut edits: Vec<Edit> = Vec::new();
    let mut results = Vec::new();
    for (site, choice) in sites.iter().zip(choices) {
        let Some(k) = *choice else {
            let first = &site.attempts[0];
            let mut o = first.outcome.clone();
            if o.is_applied() {
                o = MigrationOutcome::guidance(Reason::Matched, &patterns[first.pattern_index]);
            }
            results.push((first.pattern_index, o));
            continue;
        };
        let attempt = &site.attempts[k];
        let mut outcome = attempt.outcome.clone();
        if let Some(e) = &outcome.edits {
            let mut trial = edits.clone();
            // shared import insertions are only made once
            trial.extend(e.iter().filter(|x| !edits.contains(x)).cloned());
            if target.render(&trial).is_ok() {
                edits = trial;
            } else {
                outcome = MigrationOutcome::guidance(Reason::OverlapConflict, &patterns[attempt.pattern_index]);
            }
        }
        results.push((attempt.pattern_index, outcome));
    }
    let text = target.render(&edits).expect("edits checked incrementally");
    (text, results)
}
