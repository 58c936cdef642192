use std::fmt;
use std::ops::Deref;

/// A node plus the source position it came from. Positions are kept for
/// diagnostics only and do not take part in structural equality.
#[derive(Debug, Clone, Eq)]
pub struct Spanned<T> {
    pub node: T,
    pub line: u32,
    pub column: u32,
}

impl<T> Spanned<T> {
    pub fn new(node: T, line: u32, column: u32) -> Self {
        Spanned { node, line, column }
    }
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl<T> Deref for Spanned<T> {
    type Target = T;

    fn deref(&self) -> &T {
        &self.node
    }
}

impl<T: fmt::Display> fmt::Display for Spanned<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.node.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Variable(String),
    Constant(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Variable(v) => f.write_str(v),
            Term::Constant(c) => f.write_str(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AstAtom {
    pub predicate: String,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AstLiteral {
    pub atom: Spanned<AstAtom>,
    pub positive: bool,
}

/// One `name - type` pair from a typed list (objects or parameters).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedName {
    pub name: Spanned<String>,
    pub ty: Spanned<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDecl {
    pub name: Spanned<String>,
    pub params: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AstAction {
    pub name: Spanned<String>,
    pub params: Vec<TypedName>,
    pub precondition: Vec<AstLiteral>,
    pub effect: Vec<AstLiteral>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainAst {
    pub name: String,
    pub requirements: Vec<String>,
    pub types: Vec<Spanned<String>>,
    pub predicates: Vec<PredicateDecl>,
    pub actions: Vec<AstAction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemAst {
    pub name: String,
    pub domain: String,
    pub objects: Vec<TypedName>,
    pub init: Vec<Spanned<AstAtom>>,
    pub goal: Vec<AstLiteral>,
}
