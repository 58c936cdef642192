use thiserror::Error;

use super::{Diagnostic, Severity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    LParen,
    RParen,
    /// A bare name or the `-` type separator.
    Symbol,
    /// `:keyword`
    Keyword,
    /// `?variable`
    Variable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: u32,
    pub column: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("illegal character `{ch}` at {line}:{column}")]
pub struct LexError {
    pub ch: char,
    pub line: u32,
    pub column: u32,
}

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '-' || c == '_'
}

struct Scanner<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn take_symbol_tail(&mut self, first: char) -> String {
        let mut text = String::new();
        text.push(first.to_ascii_lowercase());
        while let Some(&c) = self.chars.peek() {
            if is_symbol_char(c) {
                text.push(c.to_ascii_lowercase());
                self.bump();
            } else {
                break;
            }
        }
        text
    }
}

fn scan(text: &str) -> (Vec<Token>, Vec<LexError>) {
    let mut tokens = Vec::new();
    let mut errors = Vec::new();
    let mut s = Scanner::new(text);
    loop {
        let (line, column) = (s.line, s.column);
        let Some(c) = s.bump() else { break };
        match c {
            ';' => {
                while let Some(&c) = s.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    s.bump();
                }
            }
            c if c.is_whitespace() => {}
            '(' => tokens.push(Token {
                kind: TokenKind::LParen,
                text: "(".into(),
                line,
                column,
            }),
            ')' => tokens.push(Token {
                kind: TokenKind::RParen,
                text: ")".into(),
                line,
                column,
            }),
            '?' => match s.chars.peek() {
                Some(&c) if is_symbol_char(c) => {
                    s.bump();
                    let mut text = String::from("?");
                    text.push_str(&s.take_symbol_tail(c));
                    tokens.push(Token {
                        kind: TokenKind::Variable,
                        text,
                        line,
                        column,
                    });
                }
                _ => errors.push(LexError {
                    ch: '?',
                    line,
                    column,
                }),
            },
            ':' => match s.chars.peek() {
                Some(&c) if is_symbol_char(c) => {
                    s.bump();
                    let mut text = String::from(":");
                    text.push_str(&s.take_symbol_tail(c));
                    tokens.push(Token {
                        kind: TokenKind::Keyword,
                        text,
                        line,
                        column,
                    });
                }
                _ => errors.push(LexError {
                    ch: ':',
                    line,
                    column,
                }),
            },
            c if is_symbol_char(c) => {
                let text = s.take_symbol_tail(c);
                tokens.push(Token {
                    kind: TokenKind::Symbol,
                    text,
                    line,
                    column,
                });
            }
            other => errors.push(LexError {
                ch: other,
                line,
                column,
            }),
        }
    }
    (tokens, errors)
}

/// Strict tokenization: fails on the first illegal character.
pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    let (tokens, errors) = scan(text);
    match errors.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(tokens),
    }
}

/// Total tokenization: illegal characters become error diagnostics and are
/// skipped, so parsing can continue.
pub(crate) fn tokenize_lossy(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let (tokens, errors) = scan(text);
    let diagnostics = errors
        .into_iter()
        .map(|e| Diagnostic {
            severity: Severity::Error,
            message: format!("illegal character `{}`", e.ch),
            line: e.line,
            column: e.column,
        })
        .collect();
    (tokens, diagnostics)
}
