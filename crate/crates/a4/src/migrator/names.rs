//! Mapping pattern variable names onto the target's names.

use std::collections::{BTreeMap, BTreeSet};

use crate::source::{
    significant_texts, tokenize, types_equal, visible_variables, AstNode, NodeKind, ParseResult, Role,
    TokenKind, Visible,
};

/// A pattern variable with the qualified type it was declared with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternVar {
    pub name: String,
    pub ty: Option<String>,
    /// Declared by one of the pattern's new statements.
    pub introduced: bool,
}

/// Pairs `Name` nodes of two structurally parallel trees.
pub fn align_names(p: &AstNode, t: &AstNode, out: &mut Vec<(String, String)>) {
    if p.kind != t.kind {
        return;
    }
    if p.kind == NodeKind::Name && p.role != Role::Type {
        if let (Some(a), Some(b)) = (p.name(), t.name()) {
            out.push((a.to_string(), b.to_string()));
        }
        return;
    }
    let mut roles: Vec<Role> = Vec::new();
    for c in &p.children {
        if !roles.contains(&c.role) {
            roles.push(c.role);
        }
    }
    for role in roles {
        for (a, b) in p.children_with_role(role).zip(t.children_with_role(role)) {
            align_names(a, b, out);
        }
    }
}

/// Chooses a target name for every variable in `vars`.
///
/// `aligned` holds name pairs read off embedded statements, earliest
/// first; `visible` is what the target sees at the focal site, nearest
/// first; `declared` are all names declared in the target method.
pub fn choose_names(
    vars: &[PatternVar],
    aligned: &[(String, String)],
    visible: &[Visible],
    declared: &BTreeSet<String>,
) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    let mut taken: BTreeSet<String> = visible.iter().map(|v| v.name.clone()).collect();
    taken.extend(declared.iter().cloned());
    let mut fresh_used: BTreeSet<String> = BTreeSet::new();
    for v in vars {
        let derived = aligned.iter().find(|(a, _)| *a == v.name).map(|(_, b)| b.clone());
        let chosen = if let Some(d) = derived {
            d
        } else if v.introduced {
            fresh(&v.name, &taken, &mut fresh_used)
        } else if let Some(same) = visible
            .iter()
            .find(|w| w.name == v.name && v.ty.as_deref().is_none_or(|t| types_equal(t, &w.qualified_type)))
        {
            same.name.clone()
        } else if let Some(by_type) = v
            .ty
            .as_deref()
            .and_then(|t| visible.iter().find(|w| types_equal(&w.qualified_type, t)))
        {
            by_type.name.clone()
        } else if taken.contains(&v.name) {
            fresh(&v.name, &taken, &mut fresh_used)
        } else {
            v.name.clone()
        };
        map.insert(v.name.clone(), chosen);
    }
    map
}

fn fresh(name: &str, taken: &BTreeSet<String>, used: &mut BTreeSet<String>) -> String {
    let mut candidate = name.to_string();
    let mut k = 0;
    while taken.contains(&candidate) || used.contains(&candidate) {
        k += 1;
        candidate = format!("{name}_m{k}");
    }
    used.insert(candidate.clone());
    candidate
}

/// Variables visible at `site`, keyed by name with the nearest winning.
pub fn visible_map(pr: &ParseResult, site: &crate::source::Span) -> BTreeMap<String, Visible> {
    let mut out = BTreeMap::new();
    for v in visible_variables(pr, site) {
        out.entry(v.name.clone()).or_insert(v);
    }
    out
}

/// Names declared anywhere in `method`.
pub fn declared_in(method: &AstNode) -> BTreeSet<String> {
    method
        .walk()
        .filter(|n| n.kind == NodeKind::LocalVarDecl)
        .flat_map(|n| n.declared_names())
        .map(str::to_string)
        .collect()
}

/// Identifiers of `text` that may denote variables: not following a `.`.
pub fn free_identifiers(text: &str, after_dot: bool) -> Vec<String> {
    let mut out = Vec::new();
    let mut dot = after_dot;
    for t in tokenize(text).into_iter().filter(|t| !t.is_trivia()) {
        if t.kind == TokenKind::Identifier && !dot {
            out.push(t.text.clone());
        }
        dot = t.text == ".";
    }
    out
}

/// Rewrites `text`: token runs equal to a pattern argument become the
/// target's argument, then free identifiers go through `names`.
pub fn substitute(
    text: &str,
    after_dot: bool,
    args: &[(Vec<String>, String)],
    names: &BTreeMap<String, String>,
) -> String {
    let toks = tokenize(text);
    let sig: Vec<usize> = (0..toks.len()).filter(|&i| !toks[i].is_trivia()).collect();
    let mut out = String::new();
    let mut cursor = 0; // index into toks
    let mut s = 0; // index into sig
    let mut dot = after_dot;
    while s < sig.len() {
        let i = sig[s];
        let hit = args.iter().find(|(pat, _)| {
            !pat.is_empty()
                && s + pat.len() <= sig.len()
                && pat.iter().enumerate().all(|(k, p)| toks[sig[s + k]].text == *p)
                && !(dot && pat.len() == 1)
        });
        for t in &toks[cursor..i] {
            out.push_str(&t.text);
        }
        if let Some((pat, replacement)) = hit {
            out.push_str(replacement);
            let last = sig[s + pat.len() - 1];
            dot = toks[last].text == ".";
            cursor = last + 1;
            s += pat.len();
            continue;
        }
        let t = &toks[i];
        match names.get(&t.text) {
            Some(n) if t.kind == TokenKind::Identifier && !dot => out.push_str(n),
            _ => out.push_str(&t.text),
        }
        dot = t.text == ".";
        cursor = i + 1;
        s += 1;
    }
    for t in &toks[cursor..] {
        out.push_str(&t.text);
    }
    out
}

/// Pattern arguments that must be carried over, longest first, paired with
/// the target's argument text. Arguments identical on both sides are left
/// out.
pub fn argument_holes(
    pfile: &ParseResult,
    pcall: &AstNode,
    tfile: &ParseResult,
    tcall: &AstNode,
) -> Vec<(Vec<String>, String)> {
    let mut out: Vec<(Vec<String>, String)> = pcall
        .arguments()
        .into_iter()
        .zip(tcall.arguments())
        .map(|(p, t)| (significant_texts(pfile.text(&p.span)), tfile.text(&t.span).to_string()))
        .filter(|(p, t)| *p != significant_texts(t))
        .collect();
    out.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));
    out
}
