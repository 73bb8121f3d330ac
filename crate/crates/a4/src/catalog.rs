//! The API catalog and invocation matching.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::source::{qualify, resolve_type, types_equal, AstNode, NodeKind, ParseResult, Role};

/// A method signature without version data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MethodRef {
    pub owner: String,
    pub method: String,
    pub param_types: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ApiDeclaration {
    pub owner: String,
    pub method: String,
    pub param_types: Vec<String>,
    pub return_type: String,
    pub introduced_in: u32,
    pub deprecated_in: Option<u32>,
    pub replacement: Option<MethodRef>,
}

impl ApiDeclaration {
    pub fn key(&self) -> MethodRef {
        MethodRef {
            owner: self.owner.clone(),
            method: self.method.clone(),
            param_types: self.param_types.clone(),
        }
    }

    pub fn is_deprecated(&self) -> bool {
        self.deprecated_in.is_some()
    }

    pub fn owner_simple_name(&self) -> &str {
        self.owner.rsplit('.').next().unwrap_or(&self.owner)
    }
}

impl fmt::Display for MethodRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}({})", self.owner, self.method, self.param_types.join(", "))
    }
}

impl fmt::Display for ApiDeclaration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.key().fmt(f)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed catalog at line {line}: {reason}")]
    MalformedCatalog { line: usize, reason: String },
    #[error("duplicate catalog entry {0}")]
    DuplicateEntry(MethodRef),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ApiCatalog {
    entries: Vec<ApiDeclaration>,
    version_range: (u32, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchStrength {
    None,
    Partial,
    Perfect,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub strength: MatchStrength,
    pub matched: Option<ApiDeclaration>,
}

impl MatchResult {
    pub fn none() -> Self {
        MatchResult {
            strength: MatchStrength::None,
            matched: None,
        }
    }

    pub fn is_match(&self) -> bool {
        self.strength != MatchStrength::None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatchError {
    #[error("call matches {} catalog entries equally well", .0.len())]
    AmbiguousMatch(Vec<ApiDeclaration>),
}

impl ApiCatalog {
    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Parses the catalog format. Whitespace-only input is an empty catalog.
    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        if text.trim().is_empty() {
            return Ok(ApiCatalog::default());
        }
        let entries: Vec<ApiDeclaration> =
            serde_json::from_str(text).map_err(|e| CatalogError::MalformedCatalog {
                line: e.line(),
                reason: e.to_string(),
            })?;
        let lines = object_lines(text);
        let line_of = |i: usize| lines.get(i).copied().unwrap_or(1);
        let mut seen = HashSet::new();
        for (i, e) in entries.iter().enumerate() {
            if let Some(dep) = e.deprecated_in {
                if dep < e.introduced_in {
                    return Err(CatalogError::MalformedCatalog {
                        line: line_of(i),
                        reason: format!(
                            "{e} is deprecated in {dep} before it is introduced in {}",
                            e.introduced_in
                        ),
                    });
                }
            }
            if e.method.is_empty() || e.owner.is_empty() {
                return Err(CatalogError::MalformedCatalog {
                    line: line_of(i),
                    reason: "owner and method must be non-empty".to_string(),
                });
            }
            if !seen.insert(e.key()) {
                return Err(CatalogError::DuplicateEntry(e.key()));
            }
        }
        Ok(Self::from_entries_unchecked(entries))
    }

    /// Builds a catalog from already validated entries.
    pub fn from_entries(entries: Vec<ApiDeclaration>) -> Result<Self, CatalogError> {
        let json = serde_json::to_string(&entries).expect("catalog entries serialize");
        Self::from_json(&json)
    }

    fn from_entries_unchecked(entries: Vec<ApiDeclaration>) -> Self {
        let min = entries.iter().map(|e| e.introduced_in).min().unwrap_or(0);
        let max = entries
            .iter()
            .map(|e| e.deprecated_in.unwrap_or(e.introduced_in).max(e.introduced_in))
            .max()
            .unwrap_or(0);
        ApiCatalog {
            entries,
            version_range: (min, max),
        }
    }

    pub fn entries(&self) -> &[ApiDeclaration] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn version_range(&self) -> (u32, u32) {
        self.version_range
    }

    pub fn get(&self, key: &MethodRef) -> Option<&ApiDeclaration> {
        self.entries.iter().find(|e| e.key() == *key)
    }

    /// Simple method names of all entries, sorted and deduplicated.
    pub fn method_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.entries.iter().map(|e| e.method.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        names
    }

    /// Matches a method invocation against the catalog.
    ///
    /// A candidate entry needs the same name and arity plus owner evidence:
    /// an import of the owner, or a receiver whose type resolves to it. A
    /// receiver resolving to some other type rules the entry out. Entries
    /// whose argument types all resolve and agree are perfect matches; when
    /// some argument type is unknown and none disagrees the match is partial.
    pub fn match_invocation(
        &self,
        call: &AstNode,
        context: &ParseResult,
    ) -> Result<MatchResult, MatchError> {
        let typer = Typer {
            catalog: self,
            pr: context,
        };
        typer.match_call(call, 0)
    }

    /// Type of an expression as far as the file and catalog can tell.
    pub fn type_of(&self, expr: &AstNode, context: &ParseResult) -> Option<String> {
        Typer {
            catalog: self,
            pr: context,
        }
        .type_of(expr, 0)
    }
}

/// Line number of each top-level array element's opening brace.
fn object_lines(text: &str) -> Vec<usize> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut line = 1;
    let mut in_str = false;
    let mut escaped = false;
    for c in text.chars() {
        if c == '\n' {
            line += 1;
        }
        if in_str {
            match c {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '"' => in_str = false,
                _ => {}
            }
            continue;
        }
        match c {
            '"' => in_str = true,
            '[' | '{' => {
                if c == '{' && depth == 1 {
                    out.push(line);
                }
                depth += 1;
            }
            ']' | '}' => depth = depth.saturating_sub(1),
            _ => {}
        }
    }
    out
}

const MAX_DEPTH: usize = 16;

struct Typer<'a> {
    catalog: &'a ApiCatalog,
    pr: &'a ParseResult,
}

impl Typer<'_> {
    fn has_import_of(&self, owner: &str, method: &str) -> bool {
        let package = owner.rsplit_once('.').map_or("", |(p, _)| p);
        self.pr.ast.children.iter().any(|c| {
            let Some(path) = c.name() else { return false };
            match c.role {
                Role::Import => {
                    path == owner
                        || owner.starts_with(&format!("{path}."))
                        || path.strip_suffix(".*") == Some(package)
                }
                Role::StaticImport => {
                    path == format!("{owner}.{method}") || path.strip_suffix(".*") == Some(owner)
                }
                _ => false,
            }
        })
    }

    fn match_call(&self, call: &AstNode, depth: usize) -> Result<MatchResult, MatchError> {
        let Some(name) = call.name() else {
            return Ok(MatchResult::none());
        };
        if call.kind != NodeKind::MethodInvocation || depth > MAX_DEPTH {
            return Ok(MatchResult::none());
        }
        let args = call.arguments();
        let candidates: Vec<&ApiDeclaration> = self
            .catalog
            .entries
            .iter()
            .filter(|e| e.method == name && e.param_types.len() == args.len())
            .collect();
        if candidates.is_empty() {
            return Ok(MatchResult::none());
        }
        let receiver_type = call.receiver().and_then(|r| self.type_of(r, depth + 1));
        let arg_types: Vec<Option<String>> =
            args.iter().map(|a| self.type_of(a, depth + 1)).collect();
        let mut perfect = Vec::new();
        let mut partial = Vec::new();
        for entry in candidates {
            let evidence = match &receiver_type {
                Some(t) if types_equal(t, &entry.owner) => true,
                Some(_) => continue,
                None => self.has_import_of(&entry.owner, &entry.method),
            };
            if !evidence {
                continue;
            }
            let mut all_known = true;
            let mut conflict = false;
            for (actual, declared) in arg_types.iter().zip(&entry.param_types) {
                match actual {
                    Some(t) if assignable(t, declared) => {}
                    Some(_) => conflict = true,
                    None => all_known = false,
                }
            }
            if conflict {
                continue;
            }
            if all_known {
                perfect.push(entry);
            } else {
                partial.push(entry);
            }
        }
        let pick = |list: Vec<&ApiDeclaration>, strength| match list.len() {
            0 => Ok(None),
            1 => Ok(Some(MatchResult {
                strength,
                matched: Some(list[0].clone()),
            })),
            _ => Err(MatchError::AmbiguousMatch(list.into_iter().cloned().collect())),
        };
        if let Some(m) = pick(perfect, MatchStrength::Perfect)? {
            return Ok(m);
        }
        Ok(pick(partial, MatchStrength::Partial)?.unwrap_or_else(MatchResult::none))
    }

    fn type_of(&self, expr: &AstNode, depth: usize) -> Option<String> {
        if depth > MAX_DEPTH {
            return None;
        }
        match expr.kind {
            NodeKind::Literal => literal_type(expr.name()?),
            NodeKind::Name => {
                let name = expr.name()?;
                if name == "this" {
                    let class = self.pr.enclosing_class(&expr.span)?;
                    // supertypes are not modelled, so a subclass has no
                    // usable type
                    let has_supertypes = self
                        .pr
                        .tokens
                        .iter()
                        .filter(|t| t.span.start >= class.span.start && !t.is_trivia())
                        .take_while(|t| t.text != "{")
                        .any(|t| t.text == "extends" || t.text == "implements");
                    if has_supertypes {
                        return None;
                    }
                    return Some(qualify(self.pr, class.name()?));
                }
                if let Some(t) = resolve_type(self.pr, name, &expr.span) {
                    return Some(t);
                }
                // a bare type name used as a static receiver
                if name.starts_with(|c: char| c.is_uppercase()) {
                    let q = qualify(self.pr, name);
                    if q != name || self.pr.imports().iter().any(|i| i.ends_with(&format!(".{name}"))) {
                        return Some(q);
                    }
                }
                None
            }
            NodeKind::FieldAccess => {
                let receiver = expr.child_with_role(Role::Receiver)?;
                let root = leftmost(receiver);
                if root.kind == NodeKind::Name && root.name() == Some("R") {
                    // generated resource identifiers
                    return Some("int".to_string());
                }
                if receiver.kind == NodeKind::Name && receiver.name() == Some("this") {
                    let class = self.pr.enclosing_class(&expr.span)?;
                    let field = expr.name()?;
                    for f in class.children.iter().filter(|c| c.kind == NodeKind::FieldDecl) {
                        for d in f.children_with_role(Role::Declarator) {
                            if d.name() == Some(field) {
                                return d.declared_type.as_deref().map(|t| qualify(self.pr, t));
                            }
                        }
                    }
                }
                if expr.name() == Some("length") {
                    let t = self.type_of(receiver, depth + 1)?;
                    return t.ends_with("[]").then(|| "int".to_string());
                }
                None
            }
            NodeKind::MethodInvocation => {
                if let Ok(m) = self.match_call(expr, depth + 1) {
                    if let Some(api) = m.matched {
                        return Some(api.return_type);
                    }
                }
                self.local_method_return(expr)
            }
            NodeKind::ObjectCreation | NodeKind::Cast => {
                expr.declared_type.as_deref().map(|t| qualify(self.pr, t))
            }
            NodeKind::BinaryExpr => self.binary_type(expr, depth),
            NodeKind::UnaryExpr => {
                let operand = expr.children.first()?;
                match expr.name()? {
                    "!" => Some("boolean".to_string()),
                    _ => self.type_of(operand, depth + 1).map(|t| promote_unary(&t)),
                }
            }
            NodeKind::ArrayAccess => {
                let t = self.type_of(expr.children.first()?, depth + 1)?;
                t.strip_suffix("[]").map(str::to_string)
            }
            _ => None,
        }
    }

    fn binary_type(&self, expr: &AstNode, depth: usize) -> Option<String> {
        let op = expr.name()?;
        let kid = |i: usize| expr.children.get(i);
        match op {
            "==" | "!=" | "<" | ">" | "<=" | ">=" | "&&" | "||" | "instanceof" => {
                Some("boolean".to_string())
            }
            "?:" => {
                let a = self.type_of(kid(1)?, depth + 1)?;
                let b = self.type_of(kid(2)?, depth + 1)?;
                types_equal(&a, &b).then_some(a)
            }
            "<<" | ">>" | ">>>" => self.type_of(kid(0)?, depth + 1).map(|t| promote_unary(&t)),
            _ if op.ends_with('=') => self.type_of(kid(0)?, depth + 1),
            _ => {
                let a = self.type_of(kid(0)?, depth + 1)?;
                let b = self.type_of(kid(1)?, depth + 1)?;
                if op == "+" && (a == "java.lang.String" || b == "java.lang.String") {
                    return Some("java.lang.String".to_string());
                }
                binary_numeric(&a, &b)
            }
        }
    }

    /// Return type of a method declared in the same class, for unqualified
    /// or `this.` calls. Overloads are matched by arity only.
    fn local_method_return(&self, call: &AstNode) -> Option<String> {
        match call.receiver() {
            None => {}
            Some(r) if r.kind == NodeKind::Name && r.name() == Some("this") => {}
            Some(_) => return None,
        }
        let class = self.pr.enclosing_class(&call.span)?;
        let arity = call.arity();
        let mut found = class.children.iter().filter(|m| {
            m.kind == NodeKind::MethodDecl
                && m.name() == call.name()
                && m.children_with_role(Role::Param).count() == arity
        });
        let m = found.next()?;
        if found.next().is_some() {
            return None;
        }
        let t = m.declared_type.as_deref()?;
        Some(qualify(self.pr, t))
    }
}

fn leftmost(mut n: &AstNode) -> &AstNode {
    while matches!(n.kind, NodeKind::FieldAccess | NodeKind::MethodInvocation) {
        match n.child_with_role(Role::Receiver) {
            Some(r) => n = r,
            None => break,
        }
    }
    n
}

fn literal_type(text: &str) -> Option<String> {
    let t = match text {
        "null" => return None,
        "true" | "false" => "boolean",
        _ if text.starts_with('"') => "java.lang.String",
        _ if text.starts_with('\'') => "char",
        _ => {
            let lower = text.to_ascii_lowercase();
            let hex = lower.starts_with("0x");
            if lower.ends_with('l') {
                "long"
            } else if lower.ends_with('f') && !hex {
                "float"
            } else if !hex && (lower.ends_with('d') || lower.contains('.') || lower.contains('e')) {
                "double"
            } else {
                "int"
            }
        }
    };
    Some(t.to_string())
}

const NUMERIC_RANK: &[&str] = &["byte", "short", "char", "int", "long", "float", "double"];

fn numeric_rank(t: &str) -> Option<usize> {
    NUMERIC_RANK.iter().position(|&n| n == t)
}

fn promote_unary(t: &str) -> String {
    match numeric_rank(t) {
        Some(r) if r < 3 => "int".to_string(),
        _ => t.to_string(),
    }
}

fn binary_numeric(a: &str, b: &str) -> Option<String> {
    if a == "boolean" && b == "boolean" {
        return Some("boolean".to_string());
    }
    let r = numeric_rank(a)?.max(numeric_rank(b)?).max(3);
    Some(NUMERIC_RANK[r].to_string())
}

/// Exact type equality, plus primitive widening so that an `int`
/// expression satisfies a `long` parameter.
fn assignable(actual: &str, declared: &str) -> bool {
    if types_equal(actual, declared) {
        return true;
    }
    match (numeric_rank(actual), numeric_rank(declared)) {
        (Some(a), Some(d)) => a <= d && !(actual == "char" && d < 3) && declared != "char",
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::parse;

    pub(crate) const GET_COLOR: &str = r#"[
  {"owner": "android.content.res.Resources", "method": "getColor", "paramTypes": ["int"],
   "returnType": "int", "introducedIn": 1, "deprecatedIn": 23,
   "replacement": {"owner": "android.content.res.Resources", "method": "getColor",
                   "paramTypes": ["int", "android.content.res.Resources.Theme"]}},
  {"owner": "android.content.res.Resources", "method": "getColor",
   "paramTypes": ["int", "android.content.res.Resources.Theme"],
   "returnType": "int", "introducedIn": 23, "deprecatedIn": null, "replacement": null}
]"#;

    fn first_call<'a>(pr: &'a ParseResult, name: &str) -> &'a AstNode {
        pr.invocations()
            .into_iter()
            .find(|c| c.name() == Some(name))
            .unwrap()
    }

    #[test]
    fn loads_catalog_rows() {
        let one = r#"[{"owner": "android.content.res.Resources", "method": "getColor",
            "paramTypes": ["int"], "returnType": "int", "introducedIn": 1, "deprecatedIn": 23,
            "replacement": {"owner": "android.content.res.Resources", "method": "getColor",
            "paramTypes": ["int", "android.content.res.Resources.Theme"]}}]"#;
        let cat = ApiCatalog::from_json(one).unwrap();
        assert_eq!(cat.len(), 1);
        assert!(cat.entries()[0].is_deprecated());
        assert_eq!(cat.version_range(), (1, 23));
        assert!(ApiCatalog::from_json("").unwrap().is_empty());
        assert!(ApiCatalog::from_json("[]").unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_rows() {
        let backwards = r#"[
  {"owner": "a.B", "method": "m", "paramTypes": [], "returnType": "void",
   "introducedIn": 1, "deprecatedIn": null, "replacement": null},
  {"owner": "a.B", "method": "n", "paramTypes": [], "returnType": "void",
   "introducedIn": 9, "deprecatedIn": 3, "replacement": null}
]"#;
        match ApiCatalog::from_json(backwards) {
            Err(CatalogError::MalformedCatalog { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let unknown = r#"[{"owner": "a.B", "method": "m", "paramTypes": [], "returnType": "void",
            "introducedIn": 1, "deprecatedIn": null, "replacement": null, "extra": 1}]"#;
        assert!(matches!(
            ApiCatalog::from_json(unknown),
            Err(CatalogError::MalformedCatalog { .. })
        ));
        let dup = r#"[
  {"owner": "a.B", "method": "m", "paramTypes": [], "returnType": "void", "introducedIn": 1, "deprecatedIn": null, "replacement": null},
  {"owner": "a.B", "method": "m", "paramTypes": [], "returnType": "int", "introducedIn": 2, "deprecatedIn": null, "replacement": null}
]"#;
        assert!(matches!(ApiCatalog::from_json(dup), Err(CatalogError::DuplicateEntry(_))));
        assert!(matches!(
            ApiCatalog::from_json("{"),
            Err(CatalogError::MalformedCatalog { line: 1, .. })
        ));
    }

    #[test]
    fn perfect_with_resources_receiver() {
        let cat = ApiCatalog::from_json(GET_COLOR).unwrap();
        let src = "import android.content.res.Resources;\n\
                   class A { void f(Resources res) { int c = res.getColor(R.color.x); } }";
        let pr = parse(src);
        let m = cat.match_invocation(first_call(&pr, "getColor"), &pr).unwrap();
        assert_eq!(m.strength, MatchStrength::Perfect);
        assert_eq!(m.matched.unwrap().param_types, ["int"]);
    }

    #[test]
    fn partial_with_unknown_receiver_and_import() {
        let cat = ApiCatalog::from_json(GET_COLOR).unwrap();
        let src = "import android.content.res.Resources;\n\
                   class A { void f() { int c = getResources().getColor(colorId()); } }";
        let pr = parse(src);
        let m = cat.match_invocation(first_call(&pr, "getColor"), &pr).unwrap();
        assert_eq!(m.strength, MatchStrength::Partial);
        assert_eq!(m.matched.unwrap().param_types, ["int"]);
    }

    #[test]
    fn arity_mismatch_is_none() {
        let cat = ApiCatalog::from_json(GET_COLOR).unwrap();
        let src = "import android.content.res.Resources;\n\
                   class A { void f(Resources res) { res.getColor(a, b, c); } }";
        let pr = parse(src);
        let m = cat.match_invocation(first_call(&pr, "getColor"), &pr).unwrap();
        assert_eq!(m, MatchResult::none());
    }

    #[test]
    fn foreign_receiver_and_missing_evidence_are_none() {
        let cat = ApiCatalog::from_json(GET_COLOR).unwrap();
        let src = "import android.content.res.Resources;\n\
                   class A { void f(Palette p) { p.getColor(1); } }";
        let pr = parse(src);
        // a declared receiver of another type rules the entry out
        assert!(!cat.match_invocation(first_call(&pr, "getColor"), &pr).unwrap().is_match());
        let src = "import android.content.res.Resources;\n\
                   class A { void f(String p) { p.getColor(1); } }";
        let pr = parse(src);
        assert!(!cat.match_invocation(first_call(&pr, "getColor"), &pr).unwrap().is_match());
        let src = "class A { void f(Object p) { q.getColor(1); } }";
        let pr = parse(src);
        assert!(!cat.match_invocation(first_call(&pr, "getColor"), &pr).unwrap().is_match());
    }

    #[test]
    fn ambiguous_overloads_are_reported() {
        let cat = ApiCatalog::from_json(
            r#"[
 {"owner": "a.B", "method": "m", "paramTypes": ["int"], "returnType": "void", "introducedIn": 1, "deprecatedIn": null, "replacement": null},
 {"owner": "a.B", "method": "m", "paramTypes": ["java.lang.String"], "returnType": "void", "introducedIn": 1, "deprecatedIn": null, "replacement": null}
]"#,
        )
        .unwrap();
        let pr = parse("import a.B;\nclass A { void f(B b) { b.m(x); b.m(1); } }");
        let calls = pr.invocations();
        assert!(matches!(
            cat.match_invocation(calls[0], &pr),
            Err(MatchError::AmbiguousMatch(v)) if v.len() == 2
        ));
        assert_eq!(
            cat.match_invocation(calls[1], &pr).unwrap().strength,
            MatchStrength::Perfect
        );
    }

    #[test]
    fn expression_types() {
        let cat = ApiCatalog::from_json(GET_COLOR).unwrap();
        let src = "import android.content.res.Resources;\n\
                   class A { int[] xs; void f(Resources res, long n) { g(1, 2L, 1.5, \"s\", 'c', true, (float) n, n + 1, xs[0], res.getColor(1), new StringBuilder(), this.xs, null, -n); } }";
        let pr = parse(src);
        let g = first_call(&pr, "g");
        let types: Vec<Option<String>> = g.arguments().iter().map(|a| cat.type_of(a, &pr)).collect();
        let expect = [
            Some("int"),
            Some("long"),
            Some("double"),
            Some("java.lang.String"),
            Some("char"),
            Some("boolean"),
            Some("float"),
            Some("long"),
            Some("int"),
            Some("int"),
            Some("java.lang.StringBuilder"),
            Some("int[]"),
            None,
            Some("long"),
        ];
        let expect: Vec<Option<String>> = expect.iter().map(|o| o.map(str::to_string)).collect();
        assert_eq!(types, expect);
    }
}
