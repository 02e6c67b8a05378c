use std::fmt;

use crate::span::SourceSpan;

/// A lexical or syntactic fault, reported at the first offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    /// Descriptions of the tokens that would have been accepted.
    pub expected: Vec<String>,
    /// Text of the token actually found (`end of input` at EOF).
    pub found: String,
    pub message: String,
}

impl ParseError {
    pub fn new(span: SourceSpan, expected: Vec<String>, found: impl Into<String>, message: impl Into<String>) -> Self {
        let message = message.into();
        debug_assert!(!message.is_empty());
        ParseError {
            span,
            expected,
            found: found.into(),
            message,
        }
    }

    pub fn expected(span: SourceSpan, expected: &[&str], found: impl Into<String>) -> Self {
        let found = found.into();
        let list = expected.join(", ");
        let message = if expected.len() == 1 {
            format!("expected {list}, found {found}")
        } else {
            format!("expected one of {list}, found {found}")
        };
        ParseError::new(
            span,
            expected.iter().map(|s| s.to_string()).collect(),
            found,
            message,
        )
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: error: {}", self.span, self.message)
    }
}

impl std::error::Error for ParseError {}
