//! Parser and printer for the typed-STRIPS planning-language subset used for
//! domain and problem files. The reference grammar lives in
//! `docs/pddl-grammar.ebnf`; input is UTF-8, `;` starts a line comment, and
//! symbols are case-insensitive (normalized to lower case).

use std::fmt;

mod ast;
mod convert;
mod parser;
mod printer;
mod token;

pub use ast::{
    AstAction, AstAtom, AstLiteral, DomainAst, PredicateDecl, ProblemAst, Spanned, Term, TypedName,
};
pub use convert::{catalog_to_domain, domain_to_catalog, problem_to_model};
pub use parser::{parse_domain, parse_problem};
pub use printer::{print_domain, print_problem};
pub use token::{tokenize, LexError, Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => f.write_str("error"),
            Severity::Warning => f.write_str("warning"),
        }
    }
}

/// A positioned parse or validation message. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub line: u32,
    pub column: u32,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}: {}",
            self.line, self.column, self.severity, self.message
        )
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(|d| d.severity == Severity::Error)
}
