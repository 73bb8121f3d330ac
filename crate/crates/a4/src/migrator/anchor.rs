//! Structural positions that carry an edit offset from a pattern node to
//! the corresponding target node.

use crate::learner::tokens_in;
use crate::source::{AstNode, NodeKind, ParseResult, Role, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Right after the element preceding the position.
    AfterPrev,
    /// Right before the element following the position.
    BeforeNext,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Boundary {
    FromStart(usize),
    FromEnd(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anchor {
    steps: Vec<(Role, NodeKind, usize)>,
    boundary: Boundary,
    side: Side,
    /// Text of the adjacent element when it is a bare token.
    neighbour: Option<String>,
}

/// A child node or a token owned directly by a node.
struct Element<'a> {
    span: Span,
    token: Option<&'a str>,
}

fn elements<'a>(file: &'a ParseResult, node: &AstNode) -> Vec<Element<'a>> {
    let mut out: Vec<Element<'a>> = node
        .children
        .iter()
        .map(|c| Element {
            span: c.span.clone(),
            token: None,
        })
        .collect();
    for t in tokens_in(file, &node.span) {
        if !node
            .children
            .iter()
            .any(|c| c.span.start <= t.span.start && t.span.end <= c.span.end)
        {
            out.push(Element {
                span: t.span.clone(),
                token: Some(&t.text),
            });
        }
    }
    out.sort_by_key(|e| (e.span.start, e.span.end));
    out
}

/// Describes byte offset `x` inside `root`, or `None` when `x` is not on an
/// element boundary for `side`.
pub fn locate(file: &ParseResult, root: &AstNode, x: usize, side: Side) -> Option<Anchor> {
    let mut node = root;
    let mut steps = Vec::new();
    while let Some(c) = node
        .children
        .iter()
        .find(|c| c.span.start < x && x < c.span.end)
    {
        let ordinal = node
            .children
            .iter()
            .filter(|s| s.role == c.role)
            .position(|s| std::ptr::eq(s, c))
            .expect("child is among its siblings");
        steps.push((c.role, c.kind, ordinal));
        node = c;
    }
    let elems = elements(file, node);
    let len = elems.len();
    let k = elems.iter().filter(|e| e.span.end <= x).count();
    let valid = match side {
        Side::AfterPrev => (k > 0 && elems[k - 1].span.end == x) || (k == 0 && x == node.span.start),
        Side::BeforeNext => (k < len && elems[k].span.start == x) || (k == len && x == node.span.end),
    };
    if !valid {
        return None;
    }
    let neighbour = match side {
        Side::AfterPrev if k > 0 => elems[k - 1].token.map(str::to_string),
        Side::BeforeNext if k < len => elems[k].token.map(str::to_string),
        _ => None,
    };
    let boundary = if k <= len - k {
        Boundary::FromStart(k)
    } else {
        Boundary::FromEnd(len - k)
    };
    Some(Anchor {
        steps,
        boundary,
        side,
        neighbour,
    })
}

/// Locates `x` preferring `sides` in order.
pub fn locate_any(file: &ParseResult, root: &AstNode, x: usize, sides: [Side; 2]) -> Option<Anchor> {
    sides.into_iter().find_map(|s| locate(file, root, x, s))
}

/// The target offset an anchor denotes inside `root`.
pub fn resolve(file: &ParseResult, root: &AstNode, anchor: &Anchor) -> Option<usize> {
    let mut node = root;
    for &(role, kind, ordinal) in &anchor.steps {
        node = node.children_with_role(role).nth(ordinal)?;
        if node.kind != kind {
            return None;
        }
    }
    let elems = elements(file, node);
    let len = elems.len();
    let k = match anchor.boundary {
        Boundary::FromStart(k) if k <= len => k,
        Boundary::FromEnd(e) if e <= len => len - e,
        _ => return None,
    };
    let same = |e: &Element| match (&anchor.neighbour, e.token) {
        (Some(p), Some(t)) => p == t,
        (None, None) => true,
        _ => false,
    };
    match anchor.side {
        Side::AfterPrev if k == 0 => Some(node.span.start),
        Side::AfterPrev => same(&elems[k - 1]).then(|| elems[k - 1].span.end),
        Side::BeforeNext if k == len => Some(node.span.end),
        Side::BeforeNext => same(&elems[k]).then(|| elems[k].span.start),
    }
}
