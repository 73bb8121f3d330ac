//! Tolerant recursive-descent parser for the Java subset.
//!
//! The parser never fails. Constructs outside the supported subset (lambdas,
//! anonymous class bodies, annotations with arguments, switch blocks, array
//! initializers) are skipped by balanced-delimiter scanning and kept as
//! `OpaqueExpr` leaves; syntax errors are recorded as diagnostics and the
//! offending region becomes opaque as well.

use std::collections::HashSet;
use std::sync::Arc;

use super::ast::{AstNode, NodeKind, Role};
use super::token::{tokenize, Span, Token, TokenKind, PRIMITIVES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    Full,
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// Syntax the parser had to skip over.
    Recovery,
    /// A supported-but-unmodelled construct captured as `OpaqueExpr`.
    Opaque,
    /// A type name that neither the file nor its imports declare.
    UnresolvedType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub kind: DiagnosticKind,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct ParseResult {
    pub source: Arc<str>,
    pub tokens: Vec<Token>,
    pub ast: AstNode,
    pub completeness: Completeness,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseResult {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn text(&self, span: &Span) -> &str {
        &self.source[span.clone()]
    }

    pub fn is_full(&self) -> bool {
        self.completeness == Completeness::Full
    }
}

/// Parses a compilation unit. Never aborts.
pub fn parse(source: &str) -> ParseResult {
    let tokens = tokenize(source);
    let sig: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_trivia())
        .map(|(i, _)| i)
        .collect();
    let mut parser = Parser {
        toks: &tokens,
        sig,
        pos: 0,
        diags: Vec::new(),
        src_len: source.len(),
    };
    let mut ast = parser.compilation_unit();
    let mut diags = parser.diags;
    mark_unresolved_types(&mut ast, &mut diags);
    diags.sort_by_key(|d| (d.span.start, d.span.end));
    let completeness = if diags.is_empty() {
        Completeness::Full
    } else {
        Completeness::Partial
    };
    ParseResult {
        source: Arc::from(source),
        tokens,
        ast,
        completeness,
        diagnostics: diags,
    }
}

const MODIFIERS: &[&str] = &[
    "public", "private", "protected", "static", "final", "abstract", "native", "synchronized",
    "transient", "volatile", "strictfp", "default", "sealed", "non-sealed",
];

const ASSIGN_OPS: &[&str] = &[
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
];

fn binary_precedence(op: &str) -> Option<u8> {
    Some(match op {
        "||" => 1,
        "&&" => 2,
        "|" => 3,
        "^" => 4,
        "&" => 5,
        "==" | "!=" => 6,
        "<" | ">" | "<=" | ">=" | "instanceof" => 7,
        "<<" | ">>" | ">>>" => 8,
        "+" | "-" => 9,
        "*" | "/" | "%" => 10,
        _ => return None,
    })
}

struct Parser<'t> {
    toks: &'t [Token],
    sig: Vec<usize>,
    pos: usize,
    diags: Vec<Diagnostic>,
    src_len: usize,
}

impl<'t> Parser<'t> {
    // ---- token cursor -------------------------------------------------

    fn tok(&self, n: usize) -> Option<&'t Token> {
        self.sig.get(self.pos + n).map(|&i| &self.toks[i])
    }

    fn peek(&self, n: usize) -> &'t str {
        self.tok(n).map_or("", |t| t.text.as_str())
    }

    fn peek_kind(&self, n: usize) -> Option<TokenKind> {
        self.tok(n).map(|t| t.kind)
    }

    fn at_eof(&self) -> bool {
        self.pos >= self.sig.len()
    }

    fn is_ident(&self, n: usize) -> bool {
        self.peek_kind(n) == Some(TokenKind::Identifier)
    }

    /// Byte offset where the current token starts.
    fn here(&self) -> usize {
        self.tok(0).map_or(self.src_len, |t| t.span.start)
    }

    /// Byte offset where the last consumed token ends.
    fn last_end(&self) -> usize {
        if self.pos == 0 {
            return 0;
        }
        self.toks[self.sig[self.pos - 1]].span.end
    }

    fn bump(&mut self) -> &'t Token {
        let t = &self.toks[self.sig[self.pos]];
        self.pos += 1;
        t
    }

    fn eat(&mut self, text: &str) -> bool {
        if !self.at_eof() && self.peek(0) == text {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, text: &str) -> bool {
        if self.eat(text) {
            return true;
        }
        let here = self.here();
        let found = if self.at_eof() { "end of input" } else { self.peek(0) };
        self.diag(
            here..here,
            DiagnosticKind::Recovery,
            format!("expected `{text}`, found `{found}`"),
        );
        false
    }

    fn diag(&mut self, span: Span, kind: DiagnosticKind, message: String) {
        self.diags.push(Diagnostic {
            span,
            kind,
            message,
        });
    }

    /// Whether the tokens `n` and `n + 1` touch with no trivia between them.
    fn adjacent(&self, n: usize) -> bool {
        match (self.tok(n), self.tok(n + 1)) {
            (Some(a), Some(b)) => a.span.end == b.span.start,
            _ => false,
        }
    }

    fn span_from(&self, start: usize) -> Span {
        start..self.last_end().max(start)
    }

    /// Consumes a balanced `(..)`, `[..]` or `{..}` group starting at the
    /// current token. Stops at end of input when unbalanced.
    fn skip_balanced(&mut self) {
        let mut depth = 0usize;
        while !self.at_eof() {
            let t = self.bump().text.as_str();
            match t {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => {
                    depth = depth.saturating_sub(1);
                    if depth == 0 {
                        return;
                    }
                }
                _ if depth == 0 => return,
                _ => {}
            }
        }
    }

    fn opaque(&mut self, start: usize, role: Role, what: &str) -> AstNode {
        let span = self.span_from(start);
        self.diag(span.clone(), DiagnosticKind::Opaque, format!("{what} kept opaque"));
        AstNode::new(NodeKind::OpaqueExpr, role, span)
    }

    // ---- declarations -------------------------------------------------

    fn compilation_unit(&mut self) -> AstNode {
        let mut unit = AstNode::new(NodeKind::CompilationUnit, Role::Root, 0..self.src_len);
        self.skip_annotations_and_modifiers(&mut Vec::new());
        if self.peek(0) == "package" {
            self.bump();
            let mut path = String::new();
            while !self.at_eof() && self.peek(0) != ";" {
                path.push_str(self.bump().text.as_str());
            }
            self.expect(";");
            unit.name = Some(path);
        }
        while self.peek(0) == "import" {
            let start = self.here();
            self.bump();
            let is_static = self.eat("static");
            let mut path = String::new();
            while !self.at_eof() && self.peek(0) != ";" && self.peek(0) != "import" {
                path.push_str(self.bump().text.as_str());
            }
            self.expect(";");
            let role = if is_static { Role::StaticImport } else { Role::Import };
            let mut node = AstNode::new(NodeKind::ImportDecl, role, self.span_from(start));
            node.name = Some(path);
            unit.children.push(node);
        }
        while !self.at_eof() {
            if self.eat(";") {
                continue;
            }
            let start = self.here();
            let mut extras = Vec::new();
            self.skip_annotations_and_modifiers(&mut extras);
            unit.children.extend(extras);
            if self.at_type_decl_keyword() {
                let class = self.type_decl(start, Role::Member);
                unit.children.push(class);
            } else if !self.at_eof() {
                let skip_start = self.here();
                while !self.at_eof() && !self.at_type_decl_keyword() {
                    self.bump();
                }
                let span = self.span_from(skip_start);
                self.diag(
                    span.clone(),
                    DiagnosticKind::Recovery,
                    "unexpected tokens at top level".to_string(),
                );
                unit.children
                    .push(AstNode::new(NodeKind::OpaqueExpr, Role::Member, span));
            }
        }
        unit
    }

    fn at_type_decl_keyword(&self) -> bool {
        match self.peek(0) {
            "class" | "interface" | "enum" => true,
            "record" => self.is_ident(1),
            "@" => self.peek(1) == "interface",
            _ => false,
        }
    }

    /// Skips modifiers and annotations. Annotations with arguments are
    /// returned as opaque nodes.
    fn skip_annotations_and_modifiers(&mut self, extras: &mut Vec<AstNode>) {
        loop {
            let t = self.peek(0);
            if MODIFIERS.contains(&t) && !(t == "synchronized" && self.peek(1) == "(") {
                self.bump();
            } else if t == "non" && self.peek(1) == "-" && self.peek(2) == "sealed" {
                self.pos += 3;
            } else if t == "@" && self.peek(1) != "interface" {
                let start = self.here();
                self.bump();
                while self.is_ident(0) || self.peek(0) == "." {
                    self.bump();
                }
                if self.peek(0) == "(" {
                    self.skip_balanced();
                    extras.push(self.opaque(start, Role::Member, "annotation arguments"));
                }
            } else {
                return;
            }
        }
    }

    fn type_decl(&mut self, start: usize, role: Role) -> AstNode {
        let keyword = self.bump().text.clone();
        if keyword == "@" {
            self.bump();
        }
        let mut class = AstNode::new(NodeKind::ClassDecl, role, start..start);
        if self.is_ident(0) {
            class.name = Some(self.bump().text.clone());
        } else {
            self.expect("identifier");
        }
        class.declared_type = class.name.clone();
        if self.peek(0) == "<" {
            self.skip_generic_args();
        }
        if keyword == "record" && self.peek(0) == "(" {
            self.skip_balanced();
        }
        // extends / implements / permits clauses
        while !self.at_eof() && self.peek(0) != "{" && self.peek(0) != ";" {
            if self.peek(0) == "<" {
                self.skip_generic_args();
            } else {
                self.bump();
            }
        }
        if self.eat("{") {
            if keyword == "enum" {
                self.enum_constants();
            }
            let class_name = class.name.clone().unwrap_or_default();
            while !self.at_eof() && self.peek(0) != "}" {
                let before = self.pos;
                if let Some(member) = self.member(&class_name) {
                    class.children.push(member);
                }
                if self.pos == before {
                    let s = self.here();
                    self.bump();
                    let span = self.span_from(s);
                    self.diag(
                        span.clone(),
                        DiagnosticKind::Recovery,
                        "unexpected token in class body".to_string(),
                    );
                    class
                        .children
                        .push(AstNode::new(NodeKind::OpaqueExpr, Role::Member, span));
                }
            }
            self.expect("}");
        } else {
            self.expect("{");
        }
        class.span = self.span_from(start);
        class
    }

    fn enum_constants(&mut self) {
        while !self.at_eof() && self.peek(0) != ";" && self.peek(0) != "}" {
            if matches!(self.peek(0), "(" | "{") {
                self.skip_balanced();
            } else {
                self.bump();
            }
        }
        self.eat(";");
    }

    fn member(&mut self, class_name: &str) -> Option<AstNode> {
        if self.eat(";") {
            return None;
        }
        let start = self.here();
        if self.peek(0) == "{" || (self.peek(0) == "static" && self.peek(1) == "{") {
            self.eat("static");
            let body = self.block(Role::Body);
            let mut method = AstNode::new(NodeKind::MethodDecl, Role::Member, self.span_from(start));
            method.name = Some("<init>".to_string());
            method.children.push(body);
            return Some(method);
        }
        let mut extras = Vec::new();
        self.skip_annotations_and_modifiers(&mut extras);
        if self.at_type_decl_keyword() {
            return Some(self.type_decl(start, Role::Member));
        }
        if self.peek(0) == "<" {
            self.skip_generic_args();
        }
        if self.is_ident(0) && self.peek(0) == class_name && self.peek(1) == "(" {
            let name = self.bump().text.clone();
            return Some(self.method_rest(start, name, None, extras));
        }
        let ty = self.parse_type(Role::Type)?;
        if !self.is_ident(0) {
            self.expect("identifier");
            return None;
        }
        if self.peek(1) == "(" {
            let name = self.bump().text.clone();
            return Some(self.method_rest(start, name, Some(ty), extras));
        }
        let mut field = AstNode::new(NodeKind::FieldDecl, Role::Member, start..start);
        field.declared_type = ty.declared_type.clone();
        field.children.extend(extras);
        field.children.push(ty);
        self.declarators(&mut field);
        self.expect(";");
        field.span = self.span_from(start);
        Some(field)
    }

    fn method_rest(
        &mut self,
        start: usize,
        name: String,
        return_type: Option<AstNode>,
        extras: Vec<AstNode>,
    ) -> AstNode {
        let mut method = AstNode::new(NodeKind::MethodDecl, Role::Member, start..start);
        method.name = Some(name);
        method.declared_type = return_type.as_ref().and_then(|t| t.declared_type.clone());
        method.children.extend(extras);
        if let Some(t) = return_type {
            method.children.push(t);
        }
        self.expect("(");
        while !self.at_eof() && self.peek(0) != ")" {
            let before = self.pos;
            if let Some(p) = self.param(Role::Param) {
                method.children.push(p);
            }
            if !self.eat(",") && self.peek(0) != ")" {
                if self.pos == before {
                    self.bump();
                }
                let here = self.here();
                self.diag(
                    here..here,
                    DiagnosticKind::Recovery,
                    "malformed parameter list".to_string(),
                );
                while !self.at_eof() && !matches!(self.peek(0), ")" | "{" | ";") {
                    self.bump();
                }
            }
        }
        self.expect(")");
        while self.peek(0) == "[" {
            self.skip_balanced();
        }
        if self.eat("throws") {
            while !self.at_eof() && self.peek(0) != "{" && self.peek(0) != ";" {
                self.bump();
            }
        }
        if self.peek(0) == "{" {
            method.children.push(self.block(Role::Body));
        } else {
            self.expect(";");
        }
        method.span = self.span_from(start);
        method
    }

    fn param(&mut self, role: Role) -> Option<AstNode> {
        let start = self.here();
        let mut extras = Vec::new();
        self.skip_annotations_and_modifiers(&mut extras);
        let mut ty = self.parse_type(Role::Type)?;
        if self.peek(0) == "..." {
            self.bump();
            ty.span = self.span_from(ty.span.start);
            let t = format!("{}[]", ty.declared_type.clone().unwrap_or_default());
            ty.declared_type = Some(t);
        }
        let mut decl = AstNode::new(NodeKind::LocalVarDecl, role, start..start);
        decl.declared_type = ty.declared_type.clone();
        decl.children.extend(extras);
        decl.children.push(ty);
        if self.is_ident(0) || self.peek(0) == "this" {
            let t = self.bump();
            let mut name = AstNode::new(NodeKind::Name, Role::Declarator, t.span.clone());
            name.name = Some(t.text.clone());
            name.declared_type = decl.declared_type.clone();
            decl.children.push(name);
            while self.peek(0) == "[" && self.peek(1) == "]" {
                self.pos += 2;
            }
        } else {
            self.expect("identifier");
        }
        decl.span = self.span_from(start);
        Some(decl)
    }

    /// Parses `name [= init] {, name [= init]}` into `decl`.
    fn declarators(&mut self, decl: &mut AstNode) {
        loop {
            if !self.is_ident(0) {
                self.expect("identifier");
                return;
            }
            let t = self.bump();
            let mut name = AstNode::new(NodeKind::Name, Role::Declarator, t.span.clone());
            name.name = Some(t.text.clone());
            let mut ty = decl.declared_type.clone().unwrap_or_default();
            while self.peek(0) == "[" && self.peek(1) == "]" {
                self.pos += 2;
                ty.push_str("[]");
            }
            name.declared_type = Some(ty);
            decl.children.push(name);
            if self.eat("=") {
                let init = if self.peek(0) == "{" {
                    let s = self.here();
                    self.skip_balanced();
                    self.opaque(s, Role::Init, "array initializer")
                } else {
                    self.expression(Role::Init)
                };
                decl.children.push(init);
            }
            if !self.eat(",") {
                return;
            }
        }
    }

    // ---- types ----------------------------------------------------------

    /// Skips `<...>` type arguments. Returns false (restoring nothing) when
    /// the tokens do not look like type arguments.
    fn skip_generic_args(&mut self) -> bool {
        if self.peek(0) != "<" {
            return false;
        }
        let mut depth = 0usize;
        while !self.at_eof() {
            let t = self.peek(0);
            match t {
                "<" => depth += 1,
                ">" => {
                    depth -= 1;
                    if depth == 0 {
                        self.bump();
                        return true;
                    }
                }
                "," | "." | "?" | "extends" | "super" | "&" | "[" | "]" => {}
                _ if self.is_ident(0) || PRIMITIVES.contains(&t) => {}
                _ => return false,
            }
            self.bump();
        }
        false
    }

    /// Scans a type without building nodes; returns whether one was found.
    fn scan_type(&mut self) -> bool {
        let t = self.peek(0);
        if PRIMITIVES.contains(&t) {
            self.bump();
        } else if self.is_ident(0) {
            self.bump();
            loop {
                if self.peek(0) == "<" {
                    if !self.skip_generic_args() {
                        return false;
                    }
                }
                if self.peek(0) == "." && self.is_ident(1) {
                    self.pos += 2;
                } else {
                    break;
                }
            }
        } else {
            return false;
        }
        while self.peek(0) == "[" && self.peek(1) == "]" {
            self.pos += 2;
        }
        true
    }

    fn parse_type(&mut self, role: Role) -> Option<AstNode> {
        let save = self.pos;
        let start = self.here();
        if !self.scan_type() {
            self.pos = save;
            let here = self.here();
            self.diag(here..here, DiagnosticKind::Recovery, "expected a type".to_string());
            return None;
        }
        let text = self.joined_text(save, self.pos);
        let mut node = AstNode::new(NodeKind::Name, role, self.span_from(start));
        node.name = Some(text.clone());
        node.declared_type = Some(text);
        Some(node)
    }

    /// Concatenates significant tokens `[from, to)` with a space only
    /// between two word-like tokens.
    fn joined_text(&self, from: usize, to: usize) -> String {
        let mut out = String::new();
        let mut prev_word = false;
        for k in from..to {
            let t = &self.toks[self.sig[k]];
            let word = matches!(t.kind, TokenKind::Identifier | TokenKind::Keyword);
            if word && prev_word {
                out.push(' ');
            }
            out.push_str(&t.text);
            prev_word = word;
        }
        out
    }

    fn looks_like_local_decl(&mut self) -> bool {
        let save = self.pos;
        let mut extras = Vec::new();
        let diag_len = self.diags.len();
        self.skip_annotations_and_modifiers(&mut extras);
        let ok = self.scan_type()
            && self.is_ident(0)
            && matches!(self.peek(1), "=" | ";" | "," | "[" | ":" | ")");
        self.pos = save;
        self.diags.truncate(diag_len);
        ok
    }

    // ---- statements -----------------------------------------------------

    fn block(&mut self, role: Role) -> AstNode {
        let start = self.here();
        let mut block = AstNode::new(NodeKind::Block, role, start..start);
        if !self.expect("{") {
            return block;
        }
        while !self.at_eof() && self.peek(0) != "}" {
            let before = self.pos;
            if let Some(stmt) = self.statement(Role::Statement) {
                block.children.push(stmt);
            }
            if self.pos == before {
                let s = self.here();
                self.bump();
                let span = self.span_from(s);
                self.diag(span.clone(), DiagnosticKind::Recovery, "unexpected token".to_string());
                let mut stmt = AstNode::new(NodeKind::ExprStmt, Role::Statement, span.clone());
                stmt.children
                    .push(AstNode::new(NodeKind::OpaqueExpr, Role::Expr, span));
                block.children.push(stmt);
            }
        }
        self.expect("}");
        block.span = self.span_from(start);
        block
    }

    /// Ends a simple statement: expects `;`, otherwise skips to the next
    /// statement boundary and records the skipped region.
    fn finish_statement(&mut self, node: &mut AstNode, start: usize) {
        if !self.expect(";") {
            let skip_start = self.here();
            let mut skipped = false;
            while !self.at_eof() && !matches!(self.peek(0), ";" | "}") {
                if matches!(self.peek(0), "(" | "[" | "{") {
                    self.skip_balanced();
                } else {
                    self.bump();
                }
                skipped = true;
            }
            if skipped {
                let span = self.span_from(skip_start);
                node.children
                    .push(AstNode::new(NodeKind::OpaqueExpr, Role::Expr, span));
            }
            self.eat(";");
        }
        node.span = self.span_from(start);
    }

    fn statement(&mut self, role: Role) -> Option<AstNode> {
        let start = self.here();
        let head = self.peek(0);
        match head {
            "{" => return Some(self.block(role)),
            ";" => {
                self.bump();
                return None;
            }
            "if" => return Some(self.if_stmt(role)),
            "while" => return Some(self.while_stmt(role)),
            "do" => return Some(self.do_stmt(role)),
            "for" => return Some(self.for_stmt(role)),
            "try" => return Some(self.try_stmt(role)),
            "return" => {
                self.bump();
                let mut node = AstNode::new(NodeKind::ReturnStmt, role, start..start);
                if self.peek(0) != ";" {
                    node.children.push(self.expression(Role::Expr));
                }
                self.finish_statement(&mut node, start);
                return Some(node);
            }
            "throw" => {
                self.bump();
                let mut node = AstNode::new(NodeKind::ExprStmt, role, start..start);
                node.name = Some("throw".to_string());
                node.children.push(self.expression(Role::Expr));
                self.finish_statement(&mut node, start);
                return Some(node);
            }
            "break" | "continue" => {
                self.bump();
                let mut node = AstNode::new(NodeKind::ExprStmt, role, start..start);
                node.name = Some(head.to_string());
                if self.is_ident(0) {
                    self.bump();
                }
                self.finish_statement(&mut node, start);
                return Some(node);
            }
            "switch" | "synchronized" => {
                self.bump();
                if self.peek(0) == "(" {
                    self.skip_balanced();
                }
                if self.peek(0) == "{" {
                    self.skip_balanced();
                }
                let what = format!("{head} statement");
                let opaque = self.opaque(start, Role::Expr, &what);
                let mut node = AstNode::new(NodeKind::ExprStmt, role, opaque.span.clone());
                node.name = Some(head.to_string());
                node.children.push(opaque);
                return Some(node);
            }
            "assert" => {
                self.bump();
                while !self.at_eof() && !matches!(self.peek(0), ";" | "}") {
                    if matches!(self.peek(0), "(" | "[" | "{") {
                        self.skip_balanced();
                    } else {
                        self.bump();
                    }
                }
                let opaque = self.opaque(start, Role::Expr, "assert statement");
                let mut node = AstNode::new(NodeKind::ExprStmt, role, start..start);
                node.name = Some("assert".to_string());
                node.children.push(opaque);
                self.finish_statement(&mut node, start);
                return Some(node);
            }
            _ => {}
        }
        if self.at_type_decl_keyword()
            || (matches!(head, "abstract" | "final" | "static")
                && matches!(self.peek(1), "class" | "interface" | "enum"))
        {
            while !self.at_eof() && self.peek(0) != "{" {
                self.bump();
            }
            self.skip_balanced();
            let opaque = self.opaque(start, Role::Expr, "local type declaration");
            let mut node = AstNode::new(NodeKind::ExprStmt, role, opaque.span.clone());
            node.children.push(opaque);
            return Some(node);
        }
        if self.is_ident(0) && self.peek(1) == ":" && self.peek(2) != ":" {
            // labelled statement
            self.pos += 2;
            return self.statement(role);
        }
        if matches!(head, "else" | "catch" | "finally" | ")" | "]") {
            self.bump();
            let span = self.span_from(start);
            self.diag(
                span.clone(),
                DiagnosticKind::Recovery,
                format!("unexpected `{head}`"),
            );
            let mut node = AstNode::new(NodeKind::ExprStmt, role, span.clone());
            node.children
                .push(AstNode::new(NodeKind::OpaqueExpr, Role::Expr, span));
            return Some(node);
        }
        if self.looks_like_local_decl() {
            let mut decl = self.local_decl(role);
            self.finish_statement(&mut decl, start);
            return Some(decl);
        }
        let mut node = AstNode::new(NodeKind::ExprStmt, role, start..start);
        node.children.push(self.expression(Role::Expr));
        self.finish_statement(&mut node, start);
        Some(node)
    }

    /// Local variable declaration without its terminator.
    fn local_decl(&mut self, role: Role) -> AstNode {
        let start = self.here();
        let mut extras = Vec::new();
        self.skip_annotations_and_modifiers(&mut extras);
        let mut decl = AstNode::new(NodeKind::LocalVarDecl, role, start..start);
        decl.children.extend(extras);
        if let Some(ty) = self.parse_type(Role::Type) {
            decl.declared_type = ty.declared_type.clone();
            decl.children.push(ty);
        }
        self.declarators(&mut decl);
        decl.span = self.span_from(start);
        decl
    }

    fn paren_condition(&mut self, node: &mut AstNode) {
        self.expect("(");
        if self.peek(0) != ")" {
            node.children.push(self.expression(Role::Condition));
        }
        if !self.expect(")") {
            while !self.at_eof() && !matches!(self.peek(0), ")" | "{" | ";") {
                self.bump();
            }
            self.eat(")");
        }
    }

    fn sub_statement(&mut self, node: &mut AstNode, role: Role) {
        if let Some(s) = self.statement(role) {
            node.children.push(s);
        }
    }

    fn if_stmt(&mut self, role: Role) -> AstNode {
        let start = self.here();
        self.bump();
        let mut node = AstNode::new(NodeKind::IfStmt, role, start..start);
        self.paren_condition(&mut node);
        self.sub_statement(&mut node, Role::Then);
        if self.eat("else") {
            self.sub_statement(&mut node, Role::Else);
        }
        node.span = self.span_from(start);
        node
    }

    fn while_stmt(&mut self, role: Role) -> AstNode {
        let start = self.here();
        self.bump();
        let mut node = AstNode::new(NodeKind::WhileStmt, role, start..start);
        node.name = Some("while".to_string());
        self.paren_condition(&mut node);
        self.sub_statement(&mut node, Role::Body);
        node.span = self.span_from(start);
        node
    }

    fn do_stmt(&mut self, role: Role) -> AstNode {
        let start = self.here();
        self.bump();
        let mut node = AstNode::new(NodeKind::WhileStmt, role, start..start);
        node.name = Some("do".to_string());
        self.sub_statement(&mut node, Role::Body);
        self.expect("while");
        self.paren_condition(&mut node);
        self.finish_statement(&mut node, start);
        node
    }

    fn for_stmt(&mut self, role: Role) -> AstNode {
        let start = self.here();
        self.bump();
        let mut node = AstNode::new(NodeKind::ForStmt, role, start..start);
        node.name = Some("for".to_string());
        self.expect("(");
        if self.looks_like_local_decl() {
            let save = self.pos;
            let decl_start = self.here();
            let mut extras = Vec::new();
            self.skip_annotations_and_modifiers(&mut extras);
            let ty = self.parse_type(Role::Type);
            if self.is_ident(0) && self.peek(1) == ":" {
                let mut decl = AstNode::new(NodeKind::LocalVarDecl, Role::Init, decl_start..decl_start);
                decl.children.extend(extras);
                if let Some(ty) = ty {
                    decl.declared_type = ty.declared_type.clone();
                    decl.children.push(ty);
                }
                let t = self.bump();
                let mut name = AstNode::new(NodeKind::Name, Role::Declarator, t.span.clone());
                name.name = Some(t.text.clone());
                name.declared_type = decl.declared_type.clone();
                decl.children.push(name);
                decl.span = self.span_from(decl_start);
                node.children.push(decl);
                node.name = Some("foreach".to_string());
                self.bump(); // ':'
                node.children.push(self.expression(Role::Condition));
            } else {
                self.pos = save;
                let decl = self.local_decl(Role::Init);
                node.children.push(decl);
            }
        } else {
            while !self.at_eof() && !matches!(self.peek(0), ";" | ")") {
                node.children.push(self.expression(Role::Init));
                if !self.eat(",") {
                    break;
                }
            }
        }
        if node.name.as_deref() == Some("for") {
            self.expect(";");
            if self.peek(0) != ";" {
                node.children.push(self.expression(Role::Condition));
            }
            self.expect(";");
            while !self.at_eof() && self.peek(0) != ")" {
                node.children.push(self.expression(Role::Update));
                if !self.eat(",") {
                    break;
                }
            }
        }
        if !self.expect(")") {
            while !self.at_eof() && !matches!(self.peek(0), ")" | "{") {
                self.bump();
            }
            self.eat(")");
        }
        self.sub_statement(&mut node, Role::Body);
        node.span = self.span_from(start);
        node
    }

    fn try_stmt(&mut self, role: Role) -> AstNode {
        let start = self.here();
        self.bump();
        let mut node = AstNode::new(NodeKind::TryStmt, role, start..start);
        if self.eat("(") {
            while !self.at_eof() && self.peek(0) != ")" {
                let before = self.pos;
                if self.looks_like_local_decl() {
                    node.children.push(self.local_decl(Role::Resource));
                } else {
                    node.children.push(self.expression(Role::Resource));
                }
                if !self.eat(";") && self.peek(0) != ")" {
                    if self.pos == before {
                        self.bump();
                    }
                    break;
                }
            }
            self.expect(")");
        }
        node.children.push(self.block(Role::Body));
        while self.peek(0) == "catch" {
            self.bump();
            self.expect("(");
            let param_start = self.here();
            let mut extras = Vec::new();
            self.skip_annotations_and_modifiers(&mut extras);
            let type_start = self.here();
            let type_pos = self.pos;
            let mut alternatives = Vec::new();
            loop {
                let s = self.pos;
                if !self.scan_type() {
                    break;
                }
                alternatives.push(self.joined_text(s, self.pos));
                if !self.eat("|") {
                    break;
                }
            }
            let mut param = AstNode::new(NodeKind::LocalVarDecl, Role::CatchParam, param_start..param_start);
            if self.pos > type_pos {
                let text = alternatives.join("|");
                let mut ty = AstNode::new(NodeKind::Name, Role::Type, self.span_from(type_start));
                ty.name = Some(text.clone());
                ty.declared_type = Some(text.clone());
                param.declared_type = Some(text);
                param.children.push(ty);
            }
            if self.is_ident(0) {
                let t = self.bump();
                let mut name = AstNode::new(NodeKind::Name, Role::Declarator, t.span.clone());
                name.name = Some(t.text.clone());
                name.declared_type = param.declared_type.clone();
                param.children.push(name);
            }
            param.span = self.span_from(param_start);
            node.children.push(param);
            self.expect(")");
            node.children.push(self.block(Role::Catch));
        }
        if self.eat("finally") {
            node.children.push(self.block(Role::Finally));
        }
        node.span = self.span_from(start);
        node
    }

    // ---- expressions ----------------------------------------------------

    /// Operator at the cursor, fusing adjacent `>` / `=` tokens.
    fn peek_operator(&self) -> (String, usize) {
        let t = self.peek(0);
        if t == ">" {
            let mut op = String::from(">");
            let mut n = 1;
            while n < 3 && self.peek(n) == ">" && self.adjacent(n - 1) {
                op.push('>');
                n += 1;
            }
            if self.peek(n) == "=" && self.adjacent(n - 1) {
                op.push('=');
                n += 1;
            }
            return (op, n);
        }
        (t.to_string(), 1)
    }

    fn expression(&mut self, role: Role) -> AstNode {
        let mut e = self.assignment();
        e.role = role;
        e
    }

    fn lambda_ahead(&self) -> bool {
        if self.is_ident(0) && self.peek(1) == "->" {
            return true;
        }
        if self.peek(0) != "(" {
            return false;
        }
        let mut depth = 0usize;
        let mut n = 0;
        while let Some(t) = self.tok(n) {
            match t.text.as_str() {
                "(" => depth += 1,
                ")" => {
                    depth -= 1;
                    if depth == 0 {
                        return self.peek(n + 1) == "->";
                    }
                }
                ";" | "{" | "}" => return false,
                _ => {}
            }
            n += 1;
        }
        false
    }

    fn lambda(&mut self) -> AstNode {
        let start = self.here();
        if self.peek(0) == "(" {
            self.skip_balanced();
        } else {
            self.bump();
        }
        self.expect("->");
        if self.peek(0) == "{" {
            self.skip_balanced();
        } else {
            let diags = self.diags.len();
            let _ = self.assignment();
            self.diags.truncate(diags);
        }
        self.opaque(start, Role::Expr, "lambda")
    }

    fn assignment(&mut self) -> AstNode {
        if self.lambda_ahead() {
            return self.lambda();
        }
        let start = self.here();
        let lhs = self.ternary();
        let (op, n) = self.peek_operator();
        if ASSIGN_OPS.contains(&op.as_str()) {
            self.pos += n;
            let mut rhs = if self.peek(0) == "{" {
                let s = self.here();
                self.skip_balanced();
                self.opaque(s, Role::Operand, "array initializer")
            } else {
                self.assignment()
            };
            rhs.role = Role::Operand;
            let mut lhs = lhs;
            lhs.role = Role::Operand;
            let mut node = AstNode::new(NodeKind::BinaryExpr, Role::Expr, start..start);
            node.name = Some(op);
            node.children = vec![lhs, rhs];
            node.span = self.span_from(start);
            return node;
        }
        lhs
    }

    fn ternary(&mut self) -> AstNode {
        let start = self.here();
        let cond = self.binary(1);
        if self.peek(0) != "?" {
            return cond;
        }
        self.bump();
        let mut then = if self.lambda_ahead() { self.lambda() } else { self.ternary() };
        self.expect(":");
        let mut other = if self.lambda_ahead() { self.lambda() } else { self.ternary() };
        let mut cond = cond;
        cond.role = Role::Condition;
        then.role = Role::Operand;
        other.role = Role::Operand;
        let mut node = AstNode::new(NodeKind::BinaryExpr, Role::Expr, start..start);
        node.name = Some("?:".to_string());
        node.children = vec![cond, then, other];
        node.span = self.span_from(start);
        node
    }

    fn binary(&mut self, min_prec: u8) -> AstNode {
        let start = self.here();
        let mut left = self.unary();
        loop {
            let (op, n) = self.peek_operator();
            let Some(prec) = binary_precedence(&op) else {
                break;
            };
            if prec < min_prec {
                break;
            }
            self.pos += n;
            let mut right = if op == "instanceof" {
                self.eat("final");
                match self.parse_type(Role::Type) {
                    Some(t) => {
                        if self.is_ident(0) {
                            // pattern binding
                            self.bump();
                        }
                        t
                    }
                    None => {
                        let here = self.here();
                        AstNode::new(NodeKind::OpaqueExpr, Role::Type, here..here)
                    }
                }
            } else {
                let mut r = self.binary(prec + 1);
                r.role = Role::Operand;
                r
            };
            if op == "instanceof" {
                right.role = Role::Type;
            }
            left.role = Role::Operand;
            let mut node = AstNode::new(NodeKind::BinaryExpr, Role::Expr, start..start);
            node.name = Some(op);
            node.children = vec![left, right];
            node.span = self.span_from(start);
            left = node;
        }
        left
    }

    fn cast_ahead(&mut self) -> bool {
        if self.peek(0) != "(" {
            return false;
        }
        let save = self.pos;
        self.bump();
        let primitive = PRIMITIVES.contains(&self.peek(0));
        let ok = self.scan_type() && self.peek(0) == ")";
        let next_ok = if ok {
            self.bump();
            if primitive {
                !matches!(self.peek(0), "" | ")" | ";" | "," | "." | "]" | "}")
            } else {
                match self.peek_kind(0) {
                    Some(TokenKind::Identifier) | Some(TokenKind::Literal) => true,
                    _ => matches!(self.peek(0), "(" | "this" | "super" | "new" | "!" | "~"),
                }
            }
        } else {
            false
        };
        self.pos = save;
        ok && next_ok
    }

    fn unary(&mut self) -> AstNode {
        let start = self.here();
        let t = self.peek(0);
        if matches!(t, "+" | "-" | "!" | "~" | "++" | "--") {
            self.bump();
            let mut operand = self.unary();
            operand.role = Role::Operand;
            let mut node = AstNode::new(NodeKind::UnaryExpr, Role::Expr, start..start);
            node.name = Some(t.to_string());
            node.children.push(operand);
            node.span = self.span_from(start);
            return node;
        }
        if self.cast_ahead() {
            self.bump();
            let ty = self.parse_type(Role::Type);
            self.expect(")");
            let mut operand = if self.lambda_ahead() { self.lambda() } else { self.unary() };
            operand.role = Role::Operand;
            let mut node = AstNode::new(NodeKind::Cast, Role::Expr, start..start);
            if let Some(ty) = ty {
                node.declared_type = ty.declared_type.clone();
                node.children.push(ty);
            }
            node.children.push(operand);
            node.span = self.span_from(start);
            return node;
        }
        let primary = self.primary();
        self.postfix(primary, start)
    }

    fn arguments(&mut self, node: &mut AstNode) {
        self.expect("(");
        while !self.at_eof() && self.peek(0) != ")" {
            let before = self.pos;
            node.children.push(self.expression(Role::Argument));
            if !self.eat(",") {
                if self.peek(0) != ")" {
                    let here = self.here();
                    self.diag(
                        here..here,
                        DiagnosticKind::Recovery,
                        "malformed argument list".to_string(),
                    );
                    let skip_start = self.here();
                    while !self.at_eof() && !matches!(self.peek(0), ")" | ";" | "}") {
                        if matches!(self.peek(0), "(" | "[" | "{") {
                            self.skip_balanced();
                        } else {
                            self.bump();
                        }
                    }
                    if self.pos > before && self.here() > skip_start {
                        let span = self.span_from(skip_start);
                        node.children
                            .push(AstNode::new(NodeKind::OpaqueExpr, Role::Expr, span));
                    }
                }
                break;
            }
        }
        self.expect(")");
    }

    fn primary(&mut self) -> AstNode {
        let start = self.here();
        let Some(tok) = self.tok(0) else {
            self.expect("expression");
            return AstNode::new(NodeKind::OpaqueExpr, Role::Expr, start..start);
        };
        match (tok.kind, tok.text.as_str()) {
            (TokenKind::Literal, _) => {
                self.bump();
                let mut n = AstNode::new(NodeKind::Literal, Role::Expr, tok.span.clone());
                n.name = Some(tok.text.clone());
                n
            }
            (_, "this") | (_, "super") => {
                self.bump();
                if self.peek(0) == "(" {
                    // explicit constructor call
                    let mut call = AstNode::new(NodeKind::MethodInvocation, Role::Expr, start..start);
                    call.name = Some(tok.text.clone());
                    self.arguments(&mut call);
                    call.span = self.span_from(start);
                    return call;
                }
                let mut n = AstNode::new(NodeKind::Name, Role::Expr, tok.span.clone());
                n.name = Some(tok.text.clone());
                n
            }
            (_, "new") => self.creation(),
            (_, "(") => {
                self.bump();
                let inner = self.expression(Role::Expr);
                self.expect(")");
                inner
            }
            (_, "switch") => {
                self.bump();
                if self.peek(0) == "(" {
                    self.skip_balanced();
                }
                if self.peek(0) == "{" {
                    self.skip_balanced();
                }
                self.opaque(start, Role::Expr, "switch expression")
            }
            (TokenKind::Identifier, _) => {
                self.bump();
                if self.peek(0) == "(" {
                    let mut call = AstNode::new(NodeKind::MethodInvocation, Role::Expr, start..start);
                    call.name = Some(tok.text.clone());
                    self.arguments(&mut call);
                    call.span = self.span_from(start);
                    return call;
                }
                let mut n = AstNode::new(NodeKind::Name, Role::Expr, tok.span.clone());
                n.name = Some(tok.text.clone());
                n
            }
            (TokenKind::Keyword, t) if PRIMITIVES.contains(&t) => {
                // `int.class`, `int[].class`
                self.bump();
                while self.peek(0) == "[" && self.peek(1) == "]" {
                    self.pos += 2;
                }
                let mut n = AstNode::new(NodeKind::Name, Role::Expr, self.span_from(start));
                n.name = Some(t.to_string());
                n
            }
            (_, "{") => {
                self.skip_balanced();
                self.opaque(start, Role::Expr, "array initializer")
            }
            _ => {
                let text = tok.text.clone();
                if !matches!(text.as_str(), ")" | ";" | "}" | "," | "]") {
                    self.bump();
                }
                let span = self.span_from(start);
                self.diag(
                    span.clone(),
                    DiagnosticKind::Recovery,
                    format!("unexpected `{text}` in expression"),
                );
                AstNode::new(NodeKind::OpaqueExpr, Role::Expr, span)
            }
        }
    }

    fn creation(&mut self) -> AstNode {
        let start = self.here();
        self.bump(); // new
        let mut node = AstNode::new(NodeKind::ObjectCreation, Role::Expr, start..start);
        if self.peek(0) == "<" {
            self.skip_generic_args();
        }
        // array element types never carry their own dims here
        let save = self.pos;
        let ty_start = self.here();
        let scanned = {
            let t = self.peek(0);
            if PRIMITIVES.contains(&t) {
                self.bump();
                true
            } else if self.is_ident(0) {
                self.bump();
                loop {
                    if self.peek(0) == "<" {
                        if self.peek(1) == ">" {
                            self.pos += 2;
                        } else if !self.skip_generic_args() {
                            break;
                        }
                    }
                    if self.peek(0) == "." && self.is_ident(1) {
                        self.pos += 2;
                    } else {
                        break;
                    }
                }
                true
            } else {
                false
            }
        };
        if !scanned {
            self.pos = save;
            self.expect("type");
            node.span = self.span_from(start);
            return node;
        }
        let text = self.joined_text(save, self.pos);
        let mut ty = AstNode::new(NodeKind::Name, Role::Type, self.span_from(ty_start));
        ty.name = Some(text.clone());
        ty.declared_type = Some(text.clone());
        node.children.push(ty);
        let mut full_type = text;
        if self.peek(0) == "[" {
            while self.eat("[") {
                full_type.push_str("[]");
                if self.peek(0) != "]" {
                    node.children.push(self.expression(Role::Index));
                }
                self.expect("]");
            }
            if self.peek(0) == "{" {
                let s = self.here();
                self.skip_balanced();
                node.children.push(self.opaque(s, Role::Init, "array initializer"));
            }
        } else {
            self.arguments(&mut node);
            if self.peek(0) == "{" {
                let s = self.here();
                self.skip_balanced();
                node.children.push(self.opaque(s, Role::Body, "anonymous class body"));
            }
        }
        node.declared_type = Some(full_type);
        node.span = self.span_from(start);
        node
    }

    fn postfix(&mut self, mut expr: AstNode, start: usize) -> AstNode {
        loop {
            match self.peek(0) {
                "." => {
                    self.bump();
                    if self.peek(0) == "<" {
                        self.skip_generic_args();
                    }
                    let Some(t) = self.tok(0) else {
                        self.expect("identifier");
                        break;
                    };
                    if t.text == "new" {
                        let inner = self.creation();
                        expr.role = Role::Receiver;
                        let mut node = inner;
                        node.children.insert(0, expr);
                        node.span = self.span_from(start);
                        expr = node;
                        continue;
                    }
                    if !matches!(t.kind, TokenKind::Identifier | TokenKind::Keyword) {
                        self.expect("identifier");
                        break;
                    }
                    self.bump();
                    expr.role = Role::Receiver;
                    if self.peek(0) == "(" {
                        let mut call =
                            AstNode::new(NodeKind::MethodInvocation, Role::Expr, start..start);
                        call.name = Some(t.text.clone());
                        call.children.push(expr);
                        self.arguments(&mut call);
                        call.span = self.span_from(start);
                        expr = call;
                    } else {
                        let mut access = AstNode::new(NodeKind::FieldAccess, Role::Expr, start..start);
                        access.name = Some(t.text.clone());
                        access.children.push(expr);
                        access.span = self.span_from(start);
                        expr = access;
                    }
                }
                "[" => {
                    if self.peek(1) == "]" {
                        // array type in expression position, e.g. `String[].class`
                        self.pos += 2;
                        expr.span = self.span_from(expr.span.start);
                        continue;
                    }
                    self.bump();
                    expr.role = Role::Operand;
                    let index = self.expression(Role::Index);
                    self.expect("]");
                    let mut node = AstNode::new(NodeKind::ArrayAccess, Role::Expr, start..start);
                    node.children = vec![expr, index];
                    node.span = self.span_from(start);
                    expr = node;
                }
                "++" | "--" => {
                    let op = self.bump().text.clone();
                    expr.role = Role::Operand;
                    let mut node = AstNode::new(NodeKind::UnaryExpr, Role::Expr, start..start);
                    node.name = Some(format!("post{op}"));
                    node.children.push(expr);
                    node.span = self.span_from(start);
                    expr = node;
                }
                "::" => {
                    self.bump();
                    if self.is_ident(0) || self.peek(0) == "new" {
                        self.bump();
                    }
                    expr = self.opaque(start, Role::Expr, "method reference");
                }
                _ => break,
            }
        }
        expr
    }
}

pub(crate) const JAVA_LANG: &[&str] = &[
    "Object", "String", "Integer", "Long", "Double", "Float", "Boolean", "Character", "Byte",
    "Short", "Number", "Math", "System", "Exception", "RuntimeException", "Throwable", "Error",
    "Thread", "Runnable", "Iterable", "Void", "Class", "StringBuilder", "StringBuffer",
    "CharSequence", "Override", "Deprecated", "SuppressWarnings", "FunctionalInterface",
    "SafeVarargs", "IllegalArgumentException", "IllegalStateException", "NullPointerException",
    "Comparable", "Enum", "Record", "AutoCloseable", "InterruptedException",
    "IndexOutOfBoundsException", "ArrayIndexOutOfBoundsException", "UnsupportedOperationException",
    "ClassCastException", "ArithmeticException", "NumberFormatException", "SecurityException",
    "CloneNotSupportedException", "Cloneable", "Process", "Runtime", "ThreadLocal",
    "ReflectiveOperationException", "ClassNotFoundException", "OutOfMemoryError", "StackOverflowError",
];

/// Flags type references the file cannot account for. Files with wildcard
/// imports are skipped: any simple name could come from them.
fn mark_unresolved_types(unit: &mut AstNode, diags: &mut Vec<Diagnostic>) {
    let imports: Vec<&str> = unit
        .children_with_role(Role::Import)
        .filter_map(|i| i.name())
        .collect();
    if imports.iter().any(|p| p.ends_with(".*")) {
        return;
    }
    let mut known: HashSet<String> = imports
        .iter()
        .map(|p| p.rsplit('.').next().unwrap_or(p).to_string())
        .collect();
    for n in unit.walk() {
        if n.kind == NodeKind::ClassDecl {
            if let Some(name) = n.name() {
                known.insert(name.to_string());
            }
        }
    }
    // method and class type parameters are not tracked; single upper-case
    // letters are the conventional names
    fn visit(node: &mut AstNode, known: &HashSet<String>, diags: &mut Vec<Diagnostic>) {
        if node.kind == NodeKind::Name && node.role == Role::Type {
            if let Some(text) = node.declared_type.as_deref() {
                for alt in text.split('|') {
                    let head = alt
                        .split(['<', '[', '.'])
                        .next()
                        .unwrap_or("")
                        .trim();
                    let ok = head.is_empty()
                        || PRIMITIVES.contains(&head)
                        || head == "var"
                        || JAVA_LANG.contains(&head)
                        || known.contains(head)
                        || head.starts_with(|c: char| c.is_lowercase())
                        || (head.len() == 1 && head.chars().all(|c| c.is_ascii_uppercase()));
                    if !ok {
                        node.resolved_partially = true;
                        diags.push(Diagnostic {
                            span: node.span.clone(),
                            kind: DiagnosticKind::UnresolvedType,
                            message: format!("type `{head}` is not declared or imported"),
                        });
                    }
                }
            }
        }
        for c in &mut node.children {
            visit(c, known, diags);
        }
    }
    visit(unit, &known, diags);
}
