//! Source locations.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

/// A 1-based, inclusive-start/exclusive-end region of a source file.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    pub fn new(file: Arc<str>, start: (u32, u32), end: (u32, u32)) -> Self {
        debug_assert!(start <= end, "span start after end");
        SourceSpan {
            file,
            start_line: start.0,
            start_col: start.1,
            end_line: end.0,
            end_col: end.1,
        }
    }

    pub fn start(&self) -> (u32, u32) {
        (self.start_line, self.start_col)
    }

    pub fn end(&self) -> (u32, u32) {
        (self.end_line, self.end_col)
    }

    /// Smallest span covering both `self` and `other` (same file assumed).
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan::new(
            self.file.clone(),
            self.start().min(other.start()),
            self.end().max(other.end()),
        )
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start_line, self.start_col)
    }
}

/// Optional location attached to AST nodes.
///
/// Locations never participate in equality: two nodes parsed from differently
/// laid out text compare equal when their structure is equal.
#[derive(Debug, Clone, Default)]
pub struct Loc(pub Option<SourceSpan>);

impl Loc {
    pub const NONE: Loc = Loc(None);

    pub fn span(&self) -> Option<&SourceSpan> {
        self.0.as_ref()
    }
}

impl From<SourceSpan> for Loc {
    fn from(span: SourceSpan) -> Self {
        Loc(Some(span))
    }
}

impl PartialEq for Loc {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Loc {}
