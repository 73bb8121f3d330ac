//! Lexing, tolerant parsing and minimal-reprint rendering of Java source.

mod ast;
mod parser;
mod scope;
mod token;

pub use ast::{AstNode, NodeKind, Role, Walk};
pub use parser::{parse, Completeness, Diagnostic, DiagnosticKind, ParseResult};
pub use scope::{qualify, resolve_type, types_equal, visible_variables, Visible};
pub use token::{is_keyword, significant, significant_texts, tokenize, Span, Token, TokenKind, PRIMITIVES};

/// A replacement of `span` in the original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edit {
    pub span: Span,
    pub text: String,
}

impl Edit {
    pub fn new(span: Span, text: impl Into<String>) -> Self {
        Edit {
            span,
            text: text.into(),
        }
    }

    pub fn insert(at: usize, text: impl Into<String>) -> Self {
        Edit::new(at..at, text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("edits overlap at bytes {first:?} and {second:?}")]
    OverlappingEdits { first: Span, second: Span },
    #[error("edit span {0:?} lies outside the source")]
    OutOfBounds(Span),
}

/// Splices `edits` into `source`. Bytes outside the edit spans are copied
/// unchanged. Two insertions at the same offset count as overlapping since
/// their order would be ambiguous; an insertion directly in front of a
/// replacement does not.
pub fn render(source: &str, edits: &[Edit]) -> Result<String, RenderError> {
    let mut sorted: Vec<&Edit> = edits.iter().collect();
    sorted.sort_by_key(|e| (e.span.start, e.span.end));
    for e in &sorted {
        if e.span.start > e.span.end
            || e.span.end > source.len()
            || !source.is_char_boundary(e.span.start)
            || !source.is_char_boundary(e.span.end)
        {
            return Err(RenderError::OutOfBounds(e.span.clone()));
        }
    }
    for pair in sorted.windows(2) {
        let (a, b) = (&pair[0].span, &pair[1].span);
        if b.start < a.end || (a.is_empty() && b == a) {
            return Err(RenderError::OverlappingEdits {
                first: a.clone(),
                second: b.clone(),
            });
        }
    }
    let mut out = String::with_capacity(source.len());
    let mut cursor = 0;
    for e in sorted {
        out.push_str(&source[cursor..e.span.start]);
        out.push_str(&e.text);
        cursor = e.span.end;
    }
    out.push_str(&source[cursor..]);
    Ok(out)
}

impl ParseResult {
    pub fn render(&self, edits: &[Edit]) -> Result<String, RenderError> {
        render(&self.source, edits)
    }

    /// Innermost method declaration enclosing `span`.
    pub fn enclosing_method(&self, span: &Span) -> Option<&AstNode> {
        self.ast
            .ancestors_at(span)
            .into_iter()
            .rev()
            .find(|n| n.kind == NodeKind::MethodDecl)
    }

    /// Innermost class declaration enclosing `span`.
    pub fn enclosing_class(&self, span: &Span) -> Option<&AstNode> {
        self.ast
            .ancestors_at(span)
            .into_iter()
            .rev()
            .find(|n| n.kind == NodeKind::ClassDecl)
    }

    /// Method invocations in textual order.
    pub fn invocations(&self) -> Vec<&AstNode> {
        let mut calls: Vec<&AstNode> = self
            .ast
            .walk()
            .filter(|n| n.kind == NodeKind::MethodInvocation)
            .collect();
        calls.sort_by_key(|n| (n.span.start, std::cmp::Reverse(n.span.end)));
        calls
    }

    pub fn imports(&self) -> Vec<&str> {
        self.ast
            .children
            .iter()
            .filter(|c| c.kind == NodeKind::ImportDecl)
            .filter_map(|c| c.name())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_edit_list_is_identity() {
        let src = "class A { void f() { x(); } }";
        assert_eq!(parse(src).render(&[]).unwrap(), src);
    }

    #[test]
    fn inserting_null_argument_touches_only_that_point() {
        let src = "int c = res.getColor(R.color.accent);";
        let at = src.find(")").unwrap();
        let out = render(src, &[Edit::insert(at, ", null")]).unwrap();
        assert_eq!(out, "int c = res.getColor(R.color.accent, null);");
        assert_eq!(&out[..at], &src[..at]);
        assert_eq!(&out[at + 6..], &src[at..]);
    }

    #[test]
    fn overlapping_edits_are_rejected() {
        let err = render("abcdef", &[Edit::new(1..3, "x"), Edit::new(2..4, "y")]).unwrap_err();
        assert!(matches!(err, RenderError::OverlappingEdits { .. }));
        let err = render("abcdef", &[Edit::insert(2, "x"), Edit::insert(2, "y")]).unwrap_err();
        assert!(matches!(err, RenderError::OverlappingEdits { .. }));
        assert!(render("abc", &[Edit::new(2..9, "")]).is_err());
        let ok = render("abcdef", &[Edit::new(2..4, "Y"), Edit::insert(2, "x")]).unwrap();
        assert_eq!(ok, "abxYef");
    }

    fn apply_one(src: &str, e: &Edit) -> String {
        render(src, std::slice::from_ref(e)).unwrap()
    }

    fn shift(e: &Edit, by: isize) -> Edit {
        let s = (e.span.start as isize + by) as usize;
        let t = (e.span.end as isize + by) as usize;
        Edit::new(s..t, e.text.clone())
    }

    proptest! {
        // Sequential application in either order agrees with the batch.
        #[test]
        fn disjoint_edits_commute(
            src in "[a-z ;(){}.]{2,60}",
            cuts in proptest::collection::vec(0usize..60, 4),
            a in "[A-Z]{0,4}",
            b in "[A-Z]{0,4}",
        ) {
            let n = src.len();
            let mut c: Vec<usize> = cuts.into_iter().map(|x| x % (n + 1)).collect();
            c.sort();
            prop_assume!(c[1] < c[2]);
            let e1 = Edit::new(c[0]..c[1], a);
            let e2 = Edit::new(c[2]..c[3], b);
            let batch = render(&src, &[e1.clone(), e2.clone()]).unwrap();
            // right edit first keeps the left span valid
            let right_first = apply_one(&apply_one(&src, &e2), &e1);
            let delta = e1.text.len() as isize - (e1.span.end - e1.span.start) as isize;
            let left_first = apply_one(&apply_one(&src, &e1), &shift(&e2, delta));
            prop_assert_eq!(&batch, &right_first);
            prop_assert_eq!(&batch, &left_first);
        }
    }
}
