//! Statement-level data-flow graphs over a single method body.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::source::{significant_texts, tokenize, AstNode, NodeKind, Role, Span, TokenKind};

/// Which part of a statement a node stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Header {
    /// A whole simple statement.
    None,
    /// The condition of an `if`.
    Condition,
    /// The header of a `for`, `while` or the condition of a `do`.
    Loop,
    /// The resource list of a `try`.
    TryResources,
    /// A `catch` parameter.
    CatchParam,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeLabel {
    pub kind: NodeKind,
    pub method: Option<String>,
    pub def_type: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfgNode {
    pub id: usize,
    /// Child-index path from the method node to the statement.
    pub stmt_path: Vec<usize>,
    pub header: Header,
    /// Bytes covered by this node: the statement, or only its header.
    pub span: Span,
    pub defines: BTreeSet<String>,
    pub uses: BTreeSet<String>,
    pub is_focal: bool,
    pub label: NodeLabel,
    /// Significant token texts of `span`.
    pub tokens: Vec<String>,
    /// Innermost `try` body, `catch` block or `finally` block around the node.
    pub try_region: Option<Span>,
}

impl DfgNode {
    /// Normalized text used for identity comparisons.
    pub fn normalized(&self) -> String {
        self.tokens.join(" ")
    }

    /// Identifier tokens, with repetition.
    pub fn identifiers(&self) -> Vec<&str> {
        self.tokens
            .iter()
            .filter(|t| t.starts_with(|c: char| c.is_alphabetic() || c == '_' || c == '$'))
            .filter(|t| !crate::source::is_keyword(t))
            .map(String::as_str)
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DataFlowGraph {
    pub nodes: Vec<DfgNode>,
    /// `(def, use, variable)` sorted.
    pub edges: Vec<(usize, usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlicedGraph {
    pub base: DataFlowGraph,
    pub kept: BTreeSet<usize>,
    pub focal: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DataflowError {
    #[error("node {0} is not in the graph")]
    UnknownNode(usize),
}

impl DataFlowGraph {
    pub fn node(&self, id: usize) -> &DfgNode {
        &self.nodes[id]
    }

    /// The node whose span contains `span`. Node spans are disjoint.
    pub fn node_containing(&self, span: &Span) -> Option<usize> {
        self.nodes
            .iter()
            .find(|n| n.span.start <= span.start && span.end <= n.span.end)
            .map(|n| n.id)
    }

    pub fn predecessors(&self, id: usize) -> BTreeSet<usize> {
        self.edges.iter().filter(|e| e.1 == id).map(|e| e.0).collect()
    }

    pub fn successors(&self, id: usize) -> BTreeSet<usize> {
        self.edges.iter().filter(|e| e.0 == id).map(|e| e.1).collect()
    }

    pub fn adjacent(&self, id: usize) -> BTreeSet<usize> {
        let mut out = self.predecessors(id);
        out.extend(self.successors(id));
        out
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.iter().any(|e| e.0 == from && e.1 == to)
    }

    /// Node table followed by one `def -> use [var]` line per edge.
    pub fn debug_export(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let _ = writeln!(
                out,
                "{}{} {:?} def={:?} use={:?} `{}`",
                n.id,
                if n.is_focal { "*" } else { "" },
                n.label.kind,
                n.defines,
                n.uses,
                n.normalized()
            );
        }
        for (a, b, v) in &self.edges {
            let _ = writeln!(out, "{a} -> {b} [{v}]");
        }
        out
    }

    fn add_edges(&mut self) {
        let mut edges = Vec::new();
        for b in &self.nodes {
            for a in &self.nodes[..b.id] {
                for v in a.defines.intersection(&b.uses) {
                    edges.push((a.id, b.id, v.clone()));
                }
            }
        }
        edges.sort();
        self.edges = edges;
    }
}

impl SlicedGraph {
    pub fn kept_nodes(&self) -> impl Iterator<Item = &DfgNode> {
        self.kept.iter().map(|&i| &self.base.nodes[i])
    }

    pub fn focal_node(&self) -> &DfgNode {
        &self.base.nodes[self.focal]
    }

    /// Edges with both ends kept.
    pub fn kept_edges(&self) -> impl Iterator<Item = &(usize, usize, String)> {
        self.base
            .edges
            .iter()
            .filter(|e| self.kept.contains(&e.0) && self.kept.contains(&e.1))
    }
}

/// Builds the data-flow graph of a method declaration.
pub fn build_dfg(method: &AstNode, source: &str) -> DataFlowGraph {
    let mut b = Builder {
        source,
        nodes: Vec::new(),
    };
    let mut path = Vec::new();
    for (i, c) in method.children.iter().enumerate() {
        if c.role == Role::Body {
            path.push(i);
            b.statement(c, &mut path, None);
            path.pop();
        }
    }
    let mut nodes = b.nodes;
    nodes.sort_by_key(|n| (n.span.start, n.span.end));
    for (i, n) in nodes.iter_mut().enumerate() {
        n.id = i;
    }
    let mut g = DataFlowGraph {
        nodes,
        edges: Vec::new(),
    };
    g.add_edges();
    g
}

/// Nodes backward-reachable from `focal`, plus `focal`.
pub fn backward_slice(dfg: &DataFlowGraph, focal: usize) -> Result<SlicedGraph, DataflowError> {
    if focal >= dfg.nodes.len() {
        return Err(DataflowError::UnknownNode(focal));
    }
    let mut kept = BTreeSet::from([focal]);
    let mut queue = VecDeque::from([focal]);
    while let Some(n) = queue.pop_front() {
        for p in dfg.predecessors(n) {
            if kept.insert(p) {
                queue.push_back(p);
            }
        }
    }
    let mut base = dfg.clone();
    for n in &mut base.nodes {
        n.is_focal = n.id == focal;
    }
    Ok(SlicedGraph { base, kept, focal })
}

struct Builder<'s> {
    source: &'s str,
    nodes: Vec<DfgNode>,
}

impl Builder<'_> {
    fn statement(&mut self, stmt: &AstNode, path: &mut Vec<usize>, region: Option<&Span>) {
        match stmt.kind {
            NodeKind::Block => self.children(stmt, path, &|c| c.kind.is_statement(), region),
            NodeKind::IfStmt => {
                if let Some(cond) = stmt.child_with_role(Role::Condition) {
                    let span = header_span(stmt, self.source);
                    let mut n = self.node(stmt, path, Header::Condition, span, region);
                    collect(cond, self.source, &mut n.defines, &mut n.uses);
                    self.nodes.push(n);
                }
                self.children(stmt, path, &|c| matches!(c.role, Role::Then | Role::Else), region);
            }
            NodeKind::WhileStmt | NodeKind::ForStmt => {
                let span = header_span(stmt, self.source);
                let mut n = self.node(stmt, path, Header::Loop, span, region);
                for c in stmt.children.iter().filter(|c| c.role != Role::Body) {
                    collect(c, self.source, &mut n.defines, &mut n.uses);
                }
                if let Some(t) = stmt
                    .children_with_role(Role::Init)
                    .find_map(|c| c.declared_type.clone())
                {
                    n.label.def_type = Some(t);
                }
                self.nodes.push(n);
                self.children(stmt, path, &|c| c.role == Role::Body, region);
            }
            NodeKind::TryStmt => {
                if stmt.children_with_role(Role::Resource).next().is_some() {
                    let span = header_span(stmt, self.source);
                    let mut n = self.node(stmt, path, Header::TryResources, span, region);
                    for r in stmt.children_with_role(Role::Resource) {
                        collect(r, self.source, &mut n.defines, &mut n.uses);
                    }
                    self.nodes.push(n);
                }
                for (i, c) in stmt.children.iter().enumerate() {
                    path.push(i);
                    match c.role {
                        Role::Body | Role::Catch | Role::Finally => {
                            self.statement(c, path, Some(&c.span));
                        }
                        Role::CatchParam => {
                            let mut n = self.node(c, path, Header::CatchParam, c.span.clone(), region);
                            n.label.kind = NodeKind::TryStmt;
                            n.label.def_type = c.declared_type.clone();
                            n.defines.extend(c.declared_names().into_iter().map(str::to_string));
                            self.nodes.push(n);
                        }
                        _ => {}
                    }
                    path.pop();
                }
            }
            _ => {
                let mut n = self.node(stmt, path, Header::None, stmt.span.clone(), region);
                collect(stmt, self.source, &mut n.defines, &mut n.uses);
                if stmt.kind == NodeKind::LocalVarDecl {
                    n.label.def_type = stmt.declared_type.clone();
                }
                self.nodes.push(n);
            }
        }
    }

    fn children(
        &mut self,
        stmt: &AstNode,
        path: &mut Vec<usize>,
        pred: &dyn Fn(&AstNode) -> bool,
        region: Option<&Span>,
    ) {
        for (i, c) in stmt.children.iter().enumerate() {
            if pred(c) {
                path.push(i);
                self.statement(c, path, region);
                path.pop();
            }
        }
    }

    fn node(
        &self,
        stmt: &AstNode,
        path: &[usize],
        header: Header,
        span: Span,
        region: Option<&Span>,
    ) -> DfgNode {
        let text = &self.source[span.clone()];
        let method = first_call_within(stmt, &span).map(str::to_string);
        DfgNode {
            id: 0,
            stmt_path: path.to_vec(),
            header,
            span: span.clone(),
            defines: BTreeSet::new(),
            uses: BTreeSet::new(),
            is_focal: false,
            label: NodeLabel {
                kind: stmt.kind,
                method,
                def_type: None,
            },
            tokens: significant_texts(text),
            try_region: region.cloned(),
        }
    }
}

/// Span of a compound statement without its nested bodies.
fn header_span(stmt: &AstNode, source: &str) -> Span {
    let body_roles = [Role::Then, Role::Else, Role::Body, Role::Catch, Role::Finally, Role::CatchParam];
    if stmt.kind == NodeKind::WhileStmt && stmt.name() == Some("do") {
        let body_end = stmt
            .child_with_role(Role::Body)
            .map_or(stmt.span.start + 2, |b| b.span.end);
        return trim(source, body_end..stmt.span.end);
    }
    let end = stmt
        .children
        .iter()
        .find(|c| body_roles.contains(&c.role))
        .map_or(stmt.span.end, |c| c.span.start);
    trim(source, stmt.span.start..end)
}

fn trim(source: &str, span: Span) -> Span {
    let text = &source[span.clone()];
    let lead = text.len() - text.trim_start().len();
    let trail = text.len() - text.trim_end().len();
    if lead + trail >= text.len() {
        return span.start..span.start;
    }
    span.start + lead..span.end - trail
}

fn first_call_within<'a>(stmt: &'a AstNode, span: &Span) -> Option<&'a str> {
    stmt.walk()
        .filter(|n| n.span.start >= span.start && n.span.end <= span.end)
        .find(|n| n.kind == NodeKind::MethodInvocation)
        .and_then(|n| n.name())
}

/// Dotted text of a `a.b.c` chain made only of names and field accesses.
pub fn dotted(expr: &AstNode) -> Option<String> {
    match expr.kind {
        NodeKind::Name if expr.role != Role::Type => expr.name().map(str::to_string),
        NodeKind::FieldAccess => {
            let recv = dotted(expr.child_with_role(Role::Receiver)?)?;
            Some(format!("{recv}.{}", expr.name()?))
        }
        _ => None,
    }
}

fn use_chain(text: &str, uses: &mut BTreeSet<String>) {
    let mut acc = String::new();
    for (i, part) in text.split('.').enumerate() {
        if i > 0 {
            acc.push('.');
        }
        acc.push_str(part);
        if acc != "this" {
            uses.insert(acc.clone());
        }
    }
}

/// Definitions and uses of an expression or simple statement.
fn collect(node: &AstNode, source: &str, defs: &mut BTreeSet<String>, uses: &mut BTreeSet<String>) {
    match node.kind {
        NodeKind::Literal => {}
        NodeKind::Name => {
            if node.role != Role::Type && node.role != Role::Declarator {
                if let Some(n) = node.name().filter(|&n| n != "this" && n != "super") {
                    uses.insert(n.to_string());
                }
            }
        }
        NodeKind::FieldAccess => match dotted(node) {
            Some(text) => use_chain(&text, uses),
            None => node.children.iter().for_each(|c| collect(c, source, defs, uses)),
        },
        NodeKind::OpaqueExpr => {
            for t in tokenize(node.text(source)) {
                if t.kind == TokenKind::Identifier {
                    uses.insert(t.text);
                }
            }
        }
        NodeKind::LocalVarDecl => {
            defs.extend(node.declared_names().into_iter().map(str::to_string));
            for c in node.children.iter().filter(|c| c.role != Role::Declarator) {
                collect(c, source, defs, uses);
            }
        }
        NodeKind::BinaryExpr if is_assignment(node.name()) => {
            let op = node.name().unwrap_or("=");
            let (Some(lhs), Some(rhs)) = (node.children.first(), node.children.get(1)) else {
                return;
            };
            define_target(lhs, op != "=", source, defs, uses);
            collect(rhs, source, defs, uses);
        }
        NodeKind::UnaryExpr if matches!(node.name(), Some("++" | "--" | "post++" | "post--")) => {
            if let Some(target) = node.children.first() {
                define_target(target, true, source, defs, uses);
            }
        }
        _ => node.children.iter().for_each(|c| collect(c, source, defs, uses)),
    }
}

fn define_target(
    target: &AstNode,
    also_use: bool,
    source: &str,
    defs: &mut BTreeSet<String>,
    uses: &mut BTreeSet<String>,
) {
    match target.kind {
        NodeKind::Name | NodeKind::FieldAccess => match dotted(target) {
            Some(text) => {
                defs.insert(text.clone());
                if also_use {
                    uses.insert(text.clone());
                }
                // the object part of `a.b = v` is read
                if let Some((prefix, _)) = text.rsplit_once('.') {
                    use_chain(prefix, uses);
                }
            }
            None => collect(target, source, defs, uses),
        },
        NodeKind::ArrayAccess => {
            // an element store updates the array variable
            if let Some(array) = target.children.first().and_then(dotted) {
                defs.insert(array.clone());
                uses.insert(array);
            }
            for c in &target.children {
                collect(c, source, defs, uses);
            }
        }
        _ => collect(target, source, defs, uses),
    }
}

fn is_assignment(op: Option<&str>) -> bool {
    matches!(
        op,
        Some("=" | "+=" | "-=" | "*=" | "/=" | "%=" | "&=" | "|=" | "^=" | "<<=" | ">>=" | ">>>=")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::parse;
    use proptest::prelude::*;

    fn dfg_of(body: &str) -> (DataFlowGraph, String) {
        let src = format!("class A {{ void m(int p) {{ {body} }} }}");
        let pr = parse(&src);
        let method = pr.ast.walk().find(|n| n.kind == NodeKind::MethodDecl).unwrap();
        (build_dfg(method, &src), src)
    }

    #[test]
    fn decl_then_return() {
        let (g, _) = dfg_of("int a = 1; return a;");
        assert_eq!(g.nodes.len(), 2);
        assert_eq!(g.edges, vec![(0, 1, "a".to_string())]);
    }

    #[test]
    fn two_defs_reach_one_use() {
        let (g, _) = dfg_of("int x = 1; x = 2; use(x);");
        let into_use: Vec<_> = g.edges.iter().filter(|e| e.1 == 2).collect();
        assert_eq!(into_use.len(), 2);
    }

    #[test]
    fn nested_statements_are_flattened() {
        let (g, _) = dfg_of(
            "int a = 1; if (a > 0) { a++; } else { b = a; } while (a < 3) a += 1; \
             for (int i = 0; i < a; i++) { s(i); } try (R r = open()) { r.x(); } catch (E e) { h(e); } do { q(); } while (a < 9);",
        );
        let headers: Vec<Header> = g.nodes.iter().map(|n| n.header).collect();
        assert_eq!(headers.iter().filter(|h| **h == Header::Condition).count(), 1);
        assert_eq!(headers.iter().filter(|h| **h == Header::Loop).count(), 3);
        assert_eq!(headers.iter().filter(|h| **h == Header::TryResources).count(), 1);
        assert_eq!(headers.iter().filter(|h| **h == Header::CatchParam).count(), 1);
        // spans are disjoint and textually ordered
        for w in g.nodes.windows(2) {
            assert!(w[0].span.end <= w[1].span.start, "{:?} {:?}", w[0].span, w[1].span);
        }
        let loop_node = g.nodes.iter().find(|n| n.normalized().starts_with("for")).unwrap();
        assert!(loop_node.defines.contains("i"));
        let do_node = g.nodes.iter().find(|n| n.normalized() == "while ( a < 9 ) ;").unwrap();
        assert!(do_node.uses.contains("a"));
        let call = g.nodes.iter().find(|n| n.normalized() == "r . x ( ) ;").unwrap();
        assert!(call.try_region.is_some());
    }

    #[test]
    fn fields_and_opaque() {
        let (g, _) = dfg_of("this.v = p; q(this.v, o.f.g); run(() -> go(z));");
        assert!(g.nodes[0].defines.contains("this.v"));
        assert!(g.nodes[1].uses.contains("this.v"));
        assert!(g.nodes[1].uses.contains("o.f.g"));
        assert!(g.nodes[1].uses.contains("o"));
        assert!(g.nodes[2].uses.contains("z"));
        assert!(g.nodes[2].defines.is_empty());
        assert_eq!(g.edges, vec![(0, 1, "this.v".to_string())]);
    }

    #[test]
    fn slice_excludes_successors_of_focal() {
        let (g, _) = dfg_of(
            "int id = R.color.x; Resources res = getResources(); int c = res.getColor(id); return c;",
        );
        let focal = 2;
        let s = backward_slice(&g, focal).unwrap();
        assert_eq!(s.kept, BTreeSet::from([0, 1, 2]));
        assert!(s.focal_node().is_focal);
        assert!(!g.predecessors(focal).contains(&3));
        assert_eq!(backward_slice(&g, 99), Err(DataflowError::UnknownNode(99)));
    }

    #[test]
    fn focal_with_no_inputs() {
        let (g, _) = dfg_of("a(); b();");
        assert_eq!(backward_slice(&g, 1).unwrap().kept, BTreeSet::from([1]));
    }

    #[test]
    fn export_lists_nodes_then_edges() {
        let (g, _) = dfg_of("int a = 1; return a;");
        let text = g.debug_export();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2], "0 -> 1 [a]");
    }

    /// Brute force: n is kept iff some path of edges leads from n to focal.
    fn reaches(adj: &[Vec<bool>], from: usize, to: usize, seen: &mut Vec<bool>) -> bool {
        if from == to {
            return true;
        }
        if seen[from] {
            return false;
        }
        seen[from] = true;
        (0..adj.len()).any(|k| adj[from][k] && reaches(adj, k, to, seen))
    }

    proptest! {
        #[test]
        fn slice_matches_exhaustive_reachability(
            n in 1usize..=8,
            bits in proptest::collection::vec(any::<bool>(), 64),
            focal_seed in 0usize..8,
        ) {
            let focal = focal_seed % n;
            let mut g = DataFlowGraph::default();
            for i in 0..n {
                g.nodes.push(DfgNode {
                    id: i,
                    stmt_path: vec![i],
                    header: Header::None,
                    span: i..i,
                    defines: BTreeSet::new(),
                    uses: BTreeSet::new(),
                    is_focal: false,
                    label: NodeLabel { kind: NodeKind::ExprStmt, method: None, def_type: None },
                    tokens: Vec::new(),
                    try_region: None,
                });
            }
            let mut adj = vec![vec![false; n]; n];
            for a in 0..n {
                for b in a + 1..n {
                    if bits[a * 8 + b] {
                        g.edges.push((a, b, format!("v{a}")));
                        adj[a][b] = true;
                    }
                }
            }
            let s = backward_slice(&g, focal).unwrap();
            for k in 0..n {
                let expected = reaches(&adj, k, focal, &mut vec![false; n]);
                prop_assert_eq!(s.kept.contains(&k), expected);
                if s.kept.contains(&k) {
                    prop_assert!(k <= focal);
                }
            }
        }

        // every edge goes forward and carries a def/use pair
        #[test]
        fn edges_respect_def_use(stmts in proptest::collection::vec(0usize..6, 1..10)) {
            let forms = ["int a = b;", "b = a + 1;", "c += a;", "use(c, b);", "a++;", "int b = c;"];
            let body: String = stmts.iter().map(|&i| forms[i]).collect::<Vec<_>>().join(" ");
            let (g, _) = dfg_of(&body);
            prop_assert_eq!(g.nodes.len(), stmts.len());
            for (a, b, v) in &g.edges {
                prop_assert!(a < b);
                prop_assert!(g.nodes[*a].defines.contains(v));
                prop_assert!(g.nodes[*b].uses.contains(v));
            }
        }
    }
}
