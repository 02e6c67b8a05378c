//! Findings shared by the SSM validator, the mapper and the conformance linter.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use serde_json::json;

use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule_id: String,
    pub severity: Severity,
    /// Qualified path of the offending element (SSM id path or SysML element path).
    pub element_path: String,
    pub span: Option<SourceSpan>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(
        rule_id: impl Into<String>,
        severity: Severity,
        element_path: impl Into<String>,
        span: Option<SourceSpan>,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            rule_id: rule_id.into(),
            severity,
            element_path: element_path.into(),
            span,
            message: message.into(),
        }
    }

    pub fn error(
        rule_id: impl Into<String>,
        element_path: impl Into<String>,
        span: Option<SourceSpan>,
        message: impl Into<String>,
    ) -> Self {
        Self::new(rule_id, Severity::Error, element_path, span, message)
    }

    pub fn warning(
        rule_id: impl Into<String>,
        element_path: impl Into<String>,
        span: Option<SourceSpan>,
        message: impl Into<String>,
    ) -> Self {
        Self::new(rule_id, Severity::Warning, element_path, span, message)
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: severity[RULE-ID] message`
    ///
    /// `fallback_file` is used when the diagnostic has no span (e.g. it was
    /// raised on a generated element).
    pub fn to_text_line(&self, fallback_file: &str, color: bool) -> String {
        let (file, line, col) = match &self.span {
            Some(s) => (s.file.to_string(), s.start_line, s.start_col),
            None => (fallback_file.to_string(), 0, 0),
        };
        let sev = if color {
            match self.severity {
                Severity::Error => format!("\x1b[31m{}\x1b[0m", self.severity),
                Severity::Warning => format!("\x1b[33m{}\x1b[0m", self.severity),
            }
        } else {
            self.severity.to_string()
        };
        format!("{file}:{line}:{col}: {sev}[{}] {}", self.rule_id, self.message)
    }

    pub fn to_json(&self, fallback_file: &str) -> serde_json::Value {
        let (file, line, col) = match &self.span {
            Some(s) => (
                s.file.to_string(),
                json!(s.start_line),
                json!(s.start_col),
            ),
            None => (fallback_file.to_string(), json!(null), json!(null)),
        };
        json!({
            "rule": self.rule_id,
            "severity": self.severity,
            "element": self.element_path,
            "file": file,
            "line": line,
            "col": col,
            "message": self.message,
        })
    }
}

/// Order by source position; diagnostics without a span sort last.
pub fn cmp_by_position(a: &Diagnostic, b: &Diagnostic) -> Ordering {
    match (&a.span, &b.span) {
        (Some(x), Some(y)) => (&x.file, x.start_line, x.start_col)
            .cmp(&(&y.file, y.start_line, y.start_col))
            .then_with(|| a.rule_id.cmp(&b.rule_id)),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a
            .element_path
            .cmp(&b.element_path)
            .then_with(|| a.rule_id.cmp(&b.rule_id)),
    }
}

pub fn render_json(diags: &[Diagnostic], fallback_file: &str) -> String {
    let arr: Vec<_> = diags.iter().map(|d| d.to_json(fallback_file)).collect();
    serde_json::to_string_pretty(&arr).expect("diagnostics serialize")
}
