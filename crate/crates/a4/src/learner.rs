//! Learning a migration pattern from one before/after example.

use std::collections::{BTreeMap, BTreeSet};

use crate::dataflow::{DataFlowGraph, DfgNode, Header};
use crate::diff::lcs_pairs;
use crate::miner::MigrationExample;
use crate::pattern::{
    prune_identical, snippet_context, DefinedVar, EditKind, FocalRef, MigrationMapping, NewNode,
    NodePairing, PatternError, PatternRecord, TokenEdit,
};
use crate::source::{types_equal, AstNode, ParseResult, Span};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityWeights {
    pub kind: f64,
    pub identifiers: f64,
    pub def_type: f64,
    pub position: f64,
}

impl Default for SimilarityWeights {
    fn default() -> Self {
        SimilarityWeights {
            kind: 0.4,
            identifiers: 0.3,
            def_type: 0.2,
            position: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnConfig {
    /// Minimum similarity for two non-focal nodes to pair.
    pub threshold: f64,
    pub weights: SimilarityWeights,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig {
            threshold: 0.5,
            weights: SimilarityWeights::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LearnError {
    #[error("example produces no edits")]
    EmptyPattern,
    #[error("example has no focal call on the before side")]
    NoFocal,
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

/// Weighted similarity of two statement nodes; `focal_a` and `focal_b`
/// are the focal ids of the graphs the nodes come from.
pub fn node_similarity(
    a: &DfgNode,
    b: &DfgNode,
    focal_a: usize,
    focal_b: usize,
    w: &SimilarityWeights,
) -> f64 {
    let kind = f64::from(u8::from(a.label.kind == b.label.kind && a.header == b.header));
    let idents = multiset_jaccard(&a.identifiers(), &b.identifiers());
    let def_type = match (&a.label.def_type, &b.label.def_type) {
        (None, None) => 1.0,
        (Some(x), Some(y)) => f64::from(u8::from(types_equal(x, y))),
        _ => 0.0,
    };
    let side = |id: usize, focal: usize| id.cmp(&focal);
    let position = f64::from(u8::from(side(a.id, focal_a) == side(b.id, focal_b)));
    w.kind * kind + w.identifiers * idents + w.def_type * def_type + w.position * position
}

/// Multiset Jaccard index; two empty bags count as equal.
pub fn multiset_jaccard(a: &[&str], b: &[&str]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let count = |xs: &[&str]| {
        let mut m: BTreeMap<String, usize> = BTreeMap::new();
        for x in xs {
            *m.entry((*x).to_string()).or_default() += 1;
        }
        m
    };
    let (ca, cb) = (count(a), count(b));
    let keys: BTreeSet<&String> = ca.keys().chain(cb.keys()).collect();
    let (mut inter, mut union) = (0, 0);
    for k in keys {
        let (x, y) = (ca.get(k).copied().unwrap_or(0), cb.get(k).copied().unwrap_or(0));
        inter += x.min(y);
        union += x.max(y);
    }
    inter as f64 / union as f64
}

/// Learns a pattern from `example`. The result is rebuilt from its
/// serialized record, so a pattern used right after learning behaves the
/// same as one loaded from a store.
pub fn learn_mapping(example: &MigrationExample, cfg: &LearnConfig) -> Result<MigrationMapping, LearnError> {
    let bside = &example.before;
    let aside = &example.after;
    let bslice = bside.slice.as_ref().ok_or(LearnError::NoFocal)?;
    let bfocal_span = bside.focal.clone().ok_or(LearnError::NoFocal)?;
    let bmethod = bside.method();
    let amethod = aside.method();
    if alpha_normalized(&bside.file, bmethod) == alpha_normalized(&aside.file, amethod) {
        return Err(LearnError::EmptyPattern);
    }
    let after_dfg = crate::dataflow::build_dfg(amethod, aside.file.source());
    let (bkeep, akeep) = prune_identical(bslice, aside.slice.as_ref(), &after_dfg);

    let mut pairings = Vec::new();
    let mut new_nodes = Vec::new();
    if let Some(aslice) = &aside.slice {
        let (bg, ag) = (&bslice.base, &aslice.base);
        let (bf, af) = (bslice.focal, aslice.focal);
        let mut paired: Vec<(usize, usize)> = vec![(bf, af)];
        let mut bused = BTreeSet::from([bf]);
        let mut aused = BTreeSet::from([af]);
        let before_texts: BTreeSet<String> = bg.nodes.iter().map(DfgNode::normalized).collect();

        // identical survivors pair with each other first
        let mut present = BTreeSet::new();
        for &a in akeep.iter().filter(|&&a| a != af) {
            let text = ag.nodes[a].normalized();
            if let Some(&b) = bkeep
                .iter()
                .find(|&&b| !bused.contains(&b) && bg.nodes[b].normalized() == text)
            {
                paired.push((b, a));
                bused.insert(b);
                aused.insert(a);
            } else if before_texts.contains(&text) {
                present.insert(a);
            }
        }

        let mut scored = Vec::new();
        for &b in bkeep.iter().filter(|b| !bused.contains(b)) {
            for &a in akeep.iter().filter(|a| !aused.contains(a) && !present.contains(a)) {
                let s = node_similarity(&bg.nodes[b], &ag.nodes[a], bf, af, &cfg.weights);
                if s >= cfg.threshold {
                    scored.push((s, b, a));
                }
            }
        }
        scored.sort_by(|x, y| y.0.total_cmp(&x.0).then((x.1, x.2).cmp(&(y.1, y.2))));
        for (_, b, a) in scored {
            if !bused.contains(&b) && !aused.contains(&a) {
                bused.insert(b);
                aused.insert(a);
                paired.push((b, a));
            }
        }
        paired.sort();

        let bcall = bside.focal_call();
        let acall = aside.focal_call();
        for (b, a) in paired {
            let (bn, an) = (&bg.nodes[b], &ag.nodes[a]);
            let (bc, ac) = if b == bf { (bcall, acall) } else { (None, None) };
            let edits = node_edits(&bside.file, bn, bc, &aside.file, an, ac);
            // rounded so the stored value survives a JSON round trip
            let similarity = (node_similarity(bn, an, bf, af, &cfg.weights) * 1e6).round() / 1e6;
            pairings.push(NodePairing {
                before_idx: b,
                after_idx: a,
                similarity,
                edits,
            });
        }
        for &a in akeep
            .iter()
            .filter(|a| !aused.contains(a) && !present.contains(a))
        {
            new_nodes.push(new_node(&aside.file, ag, a));
        }
        // statements after the call that consume variables the migration
        // introduces
        let before_defs: BTreeSet<&String> = bg.nodes.iter().flat_map(|n| &n.defines).collect();
        let mut fresh: BTreeSet<String> = new_nodes
            .iter()
            .flat_map(|n| n.defines.iter().map(|d| d.name.clone()))
            .chain(ag.nodes[af].defines.iter().cloned())
            .filter(|v| !before_defs.contains(v))
            .collect();
        for n in ag.nodes.iter().filter(|n| n.id > af) {
            if before_texts.contains(&n.normalized()) || !n.uses.iter().any(|u| fresh.contains(u)) {
                continue;
            }
            fresh.extend(n.defines.iter().filter(|v| !before_defs.contains(v)).cloned());
            new_nodes.push(new_node(&aside.file, ag, n.id));
        }
    }

    let removes_call = aside.slice.is_none();
    if !removes_call && new_nodes.is_empty() && pairings.iter().all(|p| p.edits.is_empty()) {
        return Err(LearnError::EmptyPattern);
    }
    let after_focal = aside.focal.as_ref().map(|s| FocalRef {
        offset: s.start - amethod.span.start,
        len: s.len(),
    });
    let record = PatternRecord {
        api: example.api.clone(),
        source_id: example.source_id.clone(),
        example_id: example.id(),
        before_snippet: bside.method_text().to_string(),
        after_snippet: aside.method_text().to_string(),
        before_context: snippet_context(&bside.file, bmethod),
        after_context: snippet_context(&aside.file, amethod),
        before_focal: FocalRef {
            offset: bfocal_span.start - bmethod.span.start,
            len: bfocal_span.len(),
        },
        after_focal,
        pairings,
        new_nodes,
        removes_call,
        replayable: true,
    };
    Ok(MigrationMapping::from_record(record)?)
}

/// Significant tokens of `method` with every locally declared variable
/// replaced by its order of first appearance. Methods that differ only by
/// consistent local renaming normalize equally.
pub fn alpha_normalized(file: &ParseResult, method: &AstNode) -> Vec<String> {
    let locals: BTreeSet<&str> = method
        .walk()
        .filter(|n| n.kind == crate::source::NodeKind::LocalVarDecl)
        .flat_map(|n| n.declared_names())
        .collect();
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    let mut out = Vec::new();
    let mut after_dot = false;
    for t in tokens_in(file, &method.span) {
        let text = t.text.as_str();
        if !after_dot && t.kind == crate::source::TokenKind::Identifier && locals.contains(text) {
            let k = seen.len();
            let k = *seen.entry(text).or_insert(k);
            out.push(format!("${k}"));
        } else {
            out.push(text.to_string());
        }
        after_dot = text == ".";
    }
    out
}

fn new_node(file: &ParseResult, g: &DataFlowGraph, id: usize) -> NewNode {
    let n = &g.nodes[id];
    let ty = if n.header == Header::None {
        n.label.def_type.clone()
    } else {
        None
    };
    NewNode {
        after_idx: id,
        text: file.text(&n.span).to_string(),
        defines: n
            .defines
            .iter()
            .map(|name| DefinedVar {
                name: name.clone(),
                ty: ty.clone(),
            })
            .collect(),
    }
}

/// An alignment unit: one significant token, or a whole argument of the
/// focal call.
#[derive(Debug, Clone)]
struct Unit {
    text: String,
    span: Span,
}

fn units(file: &ParseResult, span: &Span, call: Option<&AstNode>) -> Vec<Unit> {
    let args: Vec<Span> = call
        .map(|c| c.arguments().into_iter().map(|a| a.span.clone()).collect())
        .unwrap_or_default();
    let mut out: Vec<Unit> = Vec::new();
    let mut current_arg: Option<usize> = None;
    for t in tokens_in(file, span) {
        match args.iter().position(|a| a.start <= t.span.start && t.span.end <= a.end) {
            Some(k) if current_arg == Some(k) => {
                let u = out.last_mut().expect("argument unit started");
                u.text.push(' ');
                u.text.push_str(&t.text);
                u.span.end = t.span.end;
            }
            Some(k) => {
                current_arg = Some(k);
                out.push(Unit {
                    text: t.text.clone(),
                    span: t.span.clone(),
                });
            }
            None => {
                current_arg = None;
                out.push(Unit {
                    text: t.text.clone(),
                    span: t.span.clone(),
                });
            }
        }
    }
    out
}

/// Significant tokens lying inside `span`.
pub(crate) fn tokens_in<'a>(file: &'a ParseResult, span: &Span) -> impl Iterator<Item = &'a crate::source::Token> {
    let from = file.tokens.partition_point(|t| t.span.start < span.start);
    let end = span.end;
    file.tokens[from..]
        .iter()
        .take_while(move |t| t.span.end <= end)
        .filter(|t| !t.is_trivia())
}

/// Token-level edits turning `bn` into `an`, positioned relative to the
/// start of `bn`.
fn node_edits(
    bfile: &ParseResult,
    bn: &DfgNode,
    bcall: Option<&AstNode>,
    afile: &ParseResult,
    an: &DfgNode,
    acall: Option<&AstNode>,
) -> Vec<TokenEdit> {
    let bu = units(bfile, &bn.span, bcall);
    let au = units(afile, &an.span, acall);
    let bt: Vec<&str> = bu.iter().map(|u| u.text.as_str()).collect();
    let at: Vec<&str> = au.iter().map(|u| u.text.as_str()).collect();
    let pairs = lcs_pairs(&bt, &at);
    let (n, m) = (bu.len(), au.len());
    let mut edits = Vec::new();
    let mut prev: Option<(usize, usize)> = None;
    for (i, j) in pairs.into_iter().chain(std::iter::once((n, m))) {
        let (pi, pj) = prev.map_or((0, 0), |(x, y)| (x + 1, y + 1));
        prev = Some((i, j));
        if i == pi && j == pj {
            continue;
        }
        let bound = |u: &[Unit], node: &Span, k: usize, lo: bool| -> usize {
            if lo {
                if k == 0 { node.start } else { u[k - 1].span.end }
            } else if k == u.len() {
                node.end
            } else {
                u[k].span.start
            }
        };
        let (mut b0, mut b1) = (bound(&bu, &bn.span, pi, true), bound(&bu, &bn.span, i, false));
        let (mut a0, mut a1) = (bound(&au, &an.span, pj, true), bound(&au, &an.span, j, false));
        trim_common_space(bfile.source(), &mut b0, &mut b1, afile.source(), &mut a0, &mut a1);
        let (removed, inserted) = (i - pi, j - pj);
        let kind = match (removed, inserted) {
            (0, _) => EditKind::InsertToken,
            (_, 0) => EditKind::DeleteToken,
            (1, 1) => EditKind::Rename,
            _ => EditKind::ReplaceArgument,
        };
        edits.push(TokenEdit {
            kind,
            at: b0 - bn.span.start,
            len: b1 - b0,
            text: afile.source()[a0..a1].to_string(),
        });
    }
    edits
}

/// Drops whitespace shared at both ends of two replacement ranges so edits
/// start and end on token boundaries where possible.
fn trim_common_space(bsrc: &str, b0: &mut usize, b1: &mut usize, asrc: &str, a0: &mut usize, a1: &mut usize) {
    let lead = |s: &str| s.len() - s.trim_start().len();
    let (bt, at) = (&bsrc[*b0..*b1], &asrc[*a0..*a1]);
    let (lb, la) = (lead(bt), lead(at));
    if lb > 0 && lb == la && bt[..lb] == at[..la] {
        *b0 += lb;
        *a0 += la;
    }
    let trail = |s: &str| s.len() - s.trim_end().len();
    let (bt, at) = (&bsrc[*b0..*b1], &asrc[*a0..*a1]);
    let (tb, ta) = (trail(bt), trail(at));
    if tb > 0 && tb == ta && bt[bt.len() - tb..] == at[at.len() - ta..] {
        *b1 -= tb;
        *a1 -= ta;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::ApiCatalog;
    use crate::miner::{mine_examples, ExampleSource, SourceKind};

    pub(crate) const CATALOG: &str = r#"[
      {"owner": "android.content.res.Resources", "method": "getColor",
       "paramTypes": ["int"], "returnType": "int", "introducedIn": 1, "deprecatedIn": 23,
       "replacement": {"owner": "android.content.res.Resources", "method": "getColor",
                       "paramTypes": ["int", "android.content.res.Resources.Theme"]}},
      {"owner": "android.content.res.Resources", "method": "getColor",
       "paramTypes": ["int", "android.content.res.Resources.Theme"], "returnType": "int",
       "introducedIn": 23}
    ]"#;

    const BEFORE: &str = "package app;
import android.content.res.Resources;
class Paint {
    int tint(Resources res) {
        int c = res.getColor(R.color.accent);
        return c;
    }
}
";

    const AFTER: &str = "package app;
import android.content.res.Resources;
class Paint {
    int tint(Resources res) {
        int c = res.getColor(R.color.accent, null);
        return c;
    }
}
";

    fn example(before: &str, after: &str) -> MigrationExample {
        let dir = tempfile::tempdir().unwrap();
        for (side, text) in [("before", before), ("after", after)] {
            std::fs::create_dir_all(dir.path().join(side)).unwrap();
            std::fs::write(dir.path().join(side).join("Paint.java"), text).unwrap();
        }
        let src = ExampleSource::open(dir.path()).unwrap().unwrap();
        assert_eq!(src.kind, SourceKind::ExplicitPair);
        let cat = ApiCatalog::from_json(CATALOG).unwrap();
        let mut ex = mine_examples(&src, &cat).unwrap();
        assert_eq!(ex.len(), 1);
        ex.remove(0)
    }

    #[test]
    fn null_theme_pattern_has_one_insertion() {
        let m = learn_mapping(&example(BEFORE, AFTER), &LearnConfig::default()).unwrap();
        assert_eq!(m.pairings().len(), 1);
        let edits = &m.pairings()[0].edits;
        assert_eq!(edits.len(), 1);
        assert_eq!(edits[0].kind, EditKind::InsertToken);
        assert_eq!(edits[0].text, ", null");
        assert_eq!(edits[0].len, 0);
        assert!(m.new_nodes().is_empty());
        assert!(!m.removes_call());
        // "int c = res.getColor(R.color.accent" is 35 bytes
        assert_eq!(edits[0].at, 35);
    }

    #[test]
    fn theme_variant_adds_a_new_node() {
        let before = BEFORE.replace("Resources res)", "Resources res, android.content.Context ctx)");
        let after = AFTER
            .replace("Resources res)", "Resources res, android.content.Context ctx)")
            .replace(
                "        int c = res.getColor(R.color.accent, null);",
                "        Resources.Theme theme = ctx.getTheme();\n        int c = res.getColor(R.color.accent, theme);",
            );
        let m = learn_mapping(&example(&before, &after), &LearnConfig::default()).unwrap();
        assert_eq!(m.new_nodes().len(), 1);
        let nn = &m.new_nodes()[0];
        assert_eq!(nn.text, "Resources.Theme theme = ctx.getTheme();");
        assert_eq!(nn.defines[0].name, "theme");
        assert_eq!(m.pairings()[0].edits[0].text, ", theme");
    }

    #[test]
    fn rename_only_example_is_empty() {
        let after = BEFORE.replace("int c", "int color").replace("return c", "return color");
        let err = learn_mapping(&example(BEFORE, &after), &LearnConfig::default()).unwrap_err();
        assert!(matches!(err, LearnError::EmptyPattern), "{err}");
    }

    #[test]
    fn store_round_trip_preserves_pattern() {
        let m = learn_mapping(&example(BEFORE, AFTER), &LearnConfig::default()).unwrap();
        let json = serde_json::to_string(&m.record).unwrap();
        let back: PatternRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m.record);
        let again = MigrationMapping::from_record(back).unwrap();
        assert_eq!(again.before_pattern.kept, m.before_pattern.kept);
        for key in ["beforeSnippet", "afterSnippet", "pairings", "newNodes", "removesCall", "beforeIdx", "afterIdx"] {
            assert!(json.contains(key), "{key}");
        }
    }

    #[test]
    fn jaccard_matches_hand_counts() {
        assert_eq!(multiset_jaccard(&[], &[]), 1.0);
        assert_eq!(multiset_jaccard(&["a", "a", "b"], &["a", "b", "b"]), 0.5);
        assert_eq!(multiset_jaccard(&["a"], &["b"]), 0.0);
    }

    #[test]
    fn trimming_keeps_token_boundaries() {
        let (bs, as_) = ("x = FloatMath.sqrt", "x = (float) Math.sqrt");
        let (mut b0, mut b1, mut a0, mut a1) = (3, 13, 3, 16);
        trim_common_space(bs, &mut b0, &mut b1, as_, &mut a0, &mut a1);
        assert_eq!(&bs[b0..b1], "FloatMath");
        assert_eq!(&as_[a0..a1], "(float) Math");
    }
}
