use std::fmt;

use super::token::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum NodeKind {
    CompilationUnit,
    ImportDecl,
    ClassDecl,
    MethodDecl,
    FieldDecl,
    LocalVarDecl,
    ExprStmt,
    ReturnStmt,
    IfStmt,
    ForStmt,
    WhileStmt,
    TryStmt,
    Block,
    MethodInvocation,
    ObjectCreation,
    FieldAccess,
    Name,
    Literal,
    Cast,
    BinaryExpr,
    UnaryExpr,
    ArrayAccess,
    OpaqueExpr,
}

impl NodeKind {
    pub fn is_statement(self) -> bool {
        matches!(
            self,
            NodeKind::LocalVarDecl
                | NodeKind::ExprStmt
                | NodeKind::ReturnStmt
                | NodeKind::IfStmt
                | NodeKind::ForStmt
                | NodeKind::WhileStmt
                | NodeKind::TryStmt
                | NodeKind::Block
        )
    }

    pub fn is_expression(self) -> bool {
        matches!(
            self,
            NodeKind::MethodInvocation
                | NodeKind::ObjectCreation
                | NodeKind::FieldAccess
                | NodeKind::Name
                | NodeKind::Literal
                | NodeKind::Cast
                | NodeKind::BinaryExpr
                | NodeKind::UnaryExpr
                | NodeKind::ArrayAccess
                | NodeKind::OpaqueExpr
        )
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The position a child occupies inside its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Root,
    Import,
    StaticImport,
    Member,
    Type,
    Declarator,
    Init,
    Param,
    Body,
    Receiver,
    Argument,
    Condition,
    Then,
    Else,
    Update,
    Operand,
    Index,
    Resource,
    CatchParam,
    Catch,
    Finally,
    Statement,
    Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AstNode {
    pub kind: NodeKind,
    pub role: Role,
    pub span: Span,
    pub children: Vec<AstNode>,
    /// Identifier carried by the node: method/class/variable name, operator
    /// for expressions, keyword for keyword statements, imported path.
    pub name: Option<String>,
    /// Type text for declarations, casts and creations, as written.
    pub declared_type: Option<String>,
    /// Set when a referenced type could not be resolved from the file alone.
    pub resolved_partially: bool,
}

impl AstNode {
    pub fn new(kind: NodeKind, role: Role, span: Span) -> Self {
        AstNode {
            kind,
            role,
            span,
            children: Vec::new(),
            name: None,
            declared_type: None,
            resolved_partially: false,
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn children_with_role(&self, role: Role) -> impl DoubleEndedIterator<Item = &AstNode> {
        self.children.iter().filter(move |c| c.role == role)
    }

    pub fn child_with_role(&self, role: Role) -> Option<&AstNode> {
        self.children.iter().find(|c| c.role == role)
    }

    /// Receiver of a method invocation, if written.
    pub fn receiver(&self) -> Option<&AstNode> {
        debug_assert_eq!(self.kind, NodeKind::MethodInvocation);
        self.child_with_role(Role::Receiver)
    }

    pub fn arguments(&self) -> Vec<&AstNode> {
        self.children_with_role(Role::Argument).collect()
    }

    pub fn arity(&self) -> usize {
        self.children_with_role(Role::Argument).count()
    }

    /// Names declared by a variable declaration node.
    pub fn declared_names(&self) -> Vec<&str> {
        self.children_with_role(Role::Declarator)
            .filter_map(|c| c.name())
            .collect()
    }

    pub fn text<'s>(&self, source: &'s str) -> &'s str {
        &source[self.span.clone()]
    }

    /// Pre-order walk.
    pub fn walk(&self) -> Walk<'_> {
        Walk { stack: vec![self] }
    }

    /// Follows a child-index path from this node.
    pub fn at_path(&self, path: &[usize]) -> Option<&AstNode> {
        let mut node = self;
        for &i in path {
            node = node.children.get(i)?;
        }
        Some(node)
    }

    /// Child-index path of the first node satisfying `pred`, in pre-order.
    pub fn find_path(&self, pred: &dyn Fn(&AstNode) -> bool) -> Option<Vec<usize>> {
        if pred(self) {
            return Some(Vec::new());
        }
        for (i, c) in self.children.iter().enumerate() {
            if let Some(mut p) = c.find_path(pred) {
                p.insert(0, i);
                return Some(p);
            }
        }
        None
    }

    /// Path of the node with exactly `span` and `kind`.
    pub fn path_of(&self, kind: NodeKind, span: &Span) -> Option<Vec<usize>> {
        if self.kind == kind && self.span == *span {
            return Some(Vec::new());
        }
        for (i, c) in self.children.iter().enumerate() {
            if c.span.start <= span.start && span.end <= c.span.end {
                if let Some(mut p) = c.path_of(kind, span) {
                    p.insert(0, i);
                    return Some(p);
                }
            }
        }
        None
    }

    /// Nodes on the path from `self` down to the deepest node containing
    /// `span`, outermost first.
    pub fn ancestors_at(&self, span: &Span) -> Vec<&AstNode> {
        let mut out = vec![self];
        let mut node = self;
        'outer: loop {
            for c in &node.children {
                if c.span.start <= span.start && span.end <= c.span.end {
                    out.push(c);
                    node = c;
                    continue 'outer;
                }
            }
            return out;
        }
    }
}

pub struct Walk<'a> {
    stack: Vec<&'a AstNode>,
}

impl<'a> Iterator for Walk<'a> {
    type Item = &'a AstNode;

    fn next(&mut self) -> Option<&'a AstNode> {
        let node = self.stack.pop()?;
        self.stack.extend(node.children.iter().rev());
        Some(node)
    }
}
