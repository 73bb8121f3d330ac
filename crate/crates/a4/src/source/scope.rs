//! Lexical name and type lookup. Nothing outside the file is consulted.

use super::ast::{AstNode, NodeKind, Role};
use super::parser::{ParseResult, JAVA_LANG};
use super::token::{Span, PRIMITIVES};

/// A variable visible at some site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Visible {
    pub name: String,
    /// Type as written, e.g. `Resources.Theme` or `List<String>`.
    pub written_type: String,
    /// Type qualified through the file's imports when possible.
    pub qualified_type: String,
    pub decl_span: Span,
    pub is_field: bool,
}

/// Variables visible at `site`, nearest declaration first. A name declared
/// in several scopes appears once per scope, inner first.
pub fn visible_variables(pr: &ParseResult, site: &Span) -> Vec<Visible> {
    let chain = pr.ast.ancestors_at(site);
    let mut out = Vec::new();
    for (depth, node) in chain.iter().enumerate().rev() {
        let child = chain.get(depth + 1).copied();
        match node.kind {
            NodeKind::Block | NodeKind::LocalVarDecl => {
                let decls: Vec<&AstNode> = if node.kind == NodeKind::Block {
                    node.children
                        .iter()
                        .filter(|c| c.kind == NodeKind::LocalVarDecl && c.span.end <= site.start)
                        .collect()
                } else {
                    vec![node]
                };
                for decl in decls.into_iter().rev() {
                    push_declarators(pr, decl, site, false, &mut out);
                }
            }
            NodeKind::ForStmt => {
                if child.is_some_and(|c| c.role != Role::Init) {
                    for init in node.children_with_role(Role::Init) {
                        if init.kind == NodeKind::LocalVarDecl {
                            push_declarators(pr, init, site, false, &mut out);
                        }
                    }
                }
            }
            NodeKind::TryStmt => {
                let Some(child) = child else { continue };
                match child.role {
                    Role::Body | Role::Resource => {
                        for r in node.children_with_role(Role::Resource).rev() {
                            if r.kind == NodeKind::LocalVarDecl && r.span.end <= site.start {
                                push_declarators(pr, r, site, false, &mut out);
                            }
                        }
                    }
                    Role::Catch => {
                        let idx = node
                            .children
                            .iter()
                            .position(|c| std::ptr::eq(c, child))
                            .unwrap_or(0);
                        if let Some(param) = idx.checked_sub(1).map(|i| &node.children[i]) {
                            if param.role == Role::CatchParam {
                                push_declarators(pr, param, site, false, &mut out);
                            }
                        }
                    }
                    _ => {}
                }
            }
            NodeKind::MethodDecl => {
                for p in node.children_with_role(Role::Param) {
                    push_declarators(pr, p, site, false, &mut out);
                }
            }
            NodeKind::ClassDecl => {
                for f in node.children.iter().filter(|c| c.kind == NodeKind::FieldDecl) {
                    push_declarators(pr, f, site, true, &mut out);
                }
            }
            _ => {}
        }
    }
    out
}

fn push_declarators(
    pr: &ParseResult,
    decl: &AstNode,
    site: &Span,
    is_field: bool,
    out: &mut Vec<Visible>,
) {
    let names: Vec<&AstNode> = decl.children_with_role(Role::Declarator).collect();
    for d in names.into_iter().rev() {
        // a local is not visible inside or before its own declarator
        if !is_field && d.span.end > site.start {
            continue;
        }
        let Some(name) = d.name() else { continue };
        let written = d
            .declared_type
            .clone()
            .or_else(|| decl.declared_type.clone())
            .unwrap_or_default();
        let qualified_type = qualify(pr, &written);
        out.push(Visible {
            name: name.to_string(),
            written_type: written,
            qualified_type,
            decl_span: d.span.clone(),
            is_field,
        });
    }
}

/// Declared type of `name` as seen from `site`, qualified when the file's
/// imports allow it.
pub fn resolve_type(pr: &ParseResult, name: &str, site: &Span) -> Option<String> {
    visible_variables(pr, site)
        .into_iter()
        .find(|v| v.name == name)
        .map(|v| v.qualified_type)
        .filter(|t| !t.is_empty() && t != "var")
}

/// Qualifies a written type name using the file's imports, same-file
/// classes and `java.lang`. Generic arguments are dropped.
pub fn qualify(pr: &ParseResult, written: &str) -> String {
    let base: String = strip_generics(written);
    let (head, rest) = match base.find(['.', '[']) {
        Some(i) => (&base[..i], &base[i..]),
        None => (base.as_str(), ""),
    };
    if head.is_empty() || PRIMITIVES.contains(&head) {
        return base;
    }
    for import in pr.imports() {
        if import.rsplit('.').next() == Some(head) && !import.ends_with(".*") {
            return format!("{import}{rest}");
        }
    }
    if head.starts_with(|c: char| c.is_lowercase()) {
        // already a package path
        return base;
    }
    let declared_here = pr
        .ast
        .walk()
        .any(|n| n.kind == NodeKind::ClassDecl && n.name() == Some(head));
    if declared_here {
        return match pr.ast.name() {
            Some(pkg) => format!("{pkg}.{base}"),
            None => base,
        };
    }
    if JAVA_LANG.contains(&head) {
        return format!("java.lang.{base}");
    }
    base
}

fn strip_generics(t: &str) -> String {
    let mut out = String::with_capacity(t.len());
    let mut depth = 0usize;
    for c in t.chars() {
        match c {
            '<' => depth += 1,
            '>' => depth = depth.saturating_sub(1),
            c if depth == 0 && !c.is_whitespace() => out.push(c),
            _ => {}
        }
    }
    out
}

/// Type equality tolerant of one side being unqualified.
pub fn types_equal(a: &str, b: &str) -> bool {
    let a = strip_generics(a);
    let b = strip_generics(b);
    if a == b {
        return true;
    }
    let qualified = |t: &str| t.split('.').next().is_some_and(|h| h.starts_with(|c: char| c.is_lowercase()));
    if qualified(&a) && qualified(&b) {
        return false;
    }
    let short = |t: &str| -> String {
        // keep nested type names: android.content.res.Resources.Theme -> Theme
        t.rsplit('.').next().unwrap_or(t).to_string()
    };
    short(&a) == short(&b)
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn site_of(src: &str, marker: &str) -> Span {
        let at = src.find(marker).unwrap();
        at..at + marker.len()
    }

    #[test]
    fn local_type_qualified_through_import() {
        let src = "import android.content.res.Resources;\n\
                   class A { void f() { Resources res = get(); int c = res.getColor(1); } }";
        let pr = parse(src);
        let site = site_of(src, "res.getColor");
        assert_eq!(
            resolve_type(&pr, "res", &site).as_deref(),
            Some("android.content.res.Resources")
        );
        assert_eq!(resolve_type(&pr, "nope", &site), None);
    }

    #[test]
    fn local_shadows_field() {
        let src = "class A { String x; void f(int y) { long x = 1; g(x, y); } void h() { g(x); } }";
        let pr = parse(src);
        assert_eq!(resolve_type(&pr, "x", &site_of(src, "g(x, y)")).as_deref(), Some("long"));
        assert_eq!(resolve_type(&pr, "y", &site_of(src, "g(x, y)")).as_deref(), Some("int"));
        assert_eq!(
            resolve_type(&pr, "x", &site_of(src, "g(x);")).as_deref(),
            Some("java.lang.String")
        );
    }

    #[test]
    fn scoping_follows_nesting() {
        let src = r#"class A {
    Object v;
    void f(String p) {
        if (p != null) {
            int v = 1;
            use(v);
        }
        use2(v);
        for (int i = 0; i < 3; i++) { loop(i); }
        after(i);
        try { t(); } catch (java.io.IOException e) { handle(e); }
        later(e);
        int late = 2;
    }
}"#;
        let pr = parse(src);
        let at = |m: &str, n: &str| resolve_type(&pr, n, &site_of(src, m));
        assert_eq!(at("use(v)", "v").as_deref(), Some("int"));
        assert_eq!(at("use2(v)", "v").as_deref(), Some("java.lang.Object"));
        assert_eq!(at("loop(i)", "i").as_deref(), Some("int"));
        assert_eq!(at("after(i)", "i"), None);
        assert_eq!(at("handle(e)", "e").as_deref(), Some("java.io.IOException"));
        assert_eq!(at("later(e)", "e"), None);
        assert_eq!(at("use(v)", "late"), None);
        assert_eq!(at("use(v)", "p").as_deref(), Some("java.lang.String"));
    }

    #[test]
    fn nested_type_through_outer_import() {
        let src = "import android.content.res.Resources;\nclass A { void f(Resources.Theme t) { g(t); } }";
        let pr = parse(src);
        assert_eq!(
            resolve_type(&pr, "t", &site_of(src, "g(t)")).as_deref(),
            Some("android.content.res.Resources.Theme")
        );
    }

    #[test]
    fn type_equality() {
        assert!(types_equal("int", "int"));
        assert!(types_equal("android.content.res.Resources", "Resources"));
        assert!(!types_equal("android.content.res.Resources", "android.other.Resources"));
        assert!(types_equal("List<String>", "List"));
        assert!(!types_equal("int", "long"));
    }
}
