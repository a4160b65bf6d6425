//! The surface language: parsing, elaborating type checking, and
//! interpretation of checked programs in the fibration model.

pub mod check;
pub mod interp;
pub mod lexer;
pub mod nbe;
pub mod parser;
pub mod print;
pub mod syntax;

use thiserror::Error;

pub use check::{check_module, CheckedDef, CheckedModule};
pub use interp::{evaluate_module, ModelValue};
pub use parser::{parse_module, parse_term, parse_type};
pub use syntax::{Module, Span};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: Span,
    pub message: String,
    /// Tokens that would have been accepted at `span`.
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        ParseError { span, message: message.into(), expected: Vec::new() }
    }

    pub fn expected(span: Span, expected: &[&str], found: &str) -> Self {
        let list = expected.iter().map(|e| format!("`{e}`")).collect::<Vec<_>>().join(", ");
        let message = match expected.len() {
            0 => format!("unexpected {found}"),
            1 => format!("expected {list}, found {found}"),
            _ => format!("expected one of {list}, found {found}"),
        };
        ParseError { span, message, expected: expected.iter().map(|e| e.to_string()).collect() }
    }

    pub fn with_expected(mut self, expected: &[&str]) -> Self {
        self.expected.extend(expected.iter().map(|e| e.to_string()));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct TypeError {
    pub span: Span,
    pub message: String,
}

impl TypeError {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        TypeError { span, message: message.into() }
    }
}

/// Any failure between source text and a checked module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SourceError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("type error at {0}")]
    Type(#[from] TypeError),
}

impl SourceError {
    pub fn span(&self) -> Span {
        match self {
            SourceError::Parse(e) => e.span,
            SourceError::Type(e) => e.span,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            SourceError::Parse(e) => &e.message,
            SourceError::Type(e) => &e.message,
        }
    }

    /// `file:line:col: message`
    pub fn render(&self, file: &str) -> String {
        format!("{file}:{}: {}", self.span(), self.message())
    }
}

/// Parses and checks a whole source file.
pub fn load(src: &str) -> Result<CheckedModule, SourceError> {
    let module = parse_module(src)?;
    Ok(check_module(&module)?)
}
