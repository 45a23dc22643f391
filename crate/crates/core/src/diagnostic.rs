use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

/// 1-based source region. The end column is exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub file: String,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    pub fn new(file: impl Into<String>, start: (u32, u32), end: (u32, u32)) -> Self {
        SourceSpan {
            file: file.into(),
            start_line: start.0,
            start_col: start.1,
            end_line: end.0,
            end_col: end.1,
        }
    }

    /// Smallest span covering both.
    pub fn join(&self, other: &SourceSpan) -> SourceSpan {
        let start = (self.start_line, self.start_col).min((other.start_line, other.start_col));
        let end = (self.end_line, self.end_col).max((other.end_line, other.end_col));
        SourceSpan::new(self.file.clone(), start, end)
    }

    fn key(&self) -> (&str, u32, u32, u32, u32) {
        (
            &self.file,
            self.start_line,
            self.start_col,
            self.end_line,
            self.end_col,
        )
    }

    /// The text covered by this span within `source`.
    pub fn slice<'a>(&self, source: &'a str) -> &'a str {
        let offset = |line: u32, col: u32| -> usize {
            let mut l = 1;
            let mut c = 1;
            for (i, ch) in source.char_indices() {
                if l == line && c == col {
                    return i;
                }
                if ch == '\n' {
                    if l == line {
                        return i;
                    }
                    l += 1;
                    c = 1;
                } else {
                    c += 1;
                }
            }
            source.len()
        };
        let a = offset(self.start_line, self.start_col);
        let b = offset(self.end_line, self.end_col).max(a);
        &source[a..b]
    }
}

impl PartialOrd for SourceSpan {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SourceSpan {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// The universal report unit: severity, rule code, message and location.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub span: Option<SourceSpan>,
    /// Secondary locations, e.g. the first declaration of a duplicate.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub related: Vec<SourceSpan>,
}

impl Diagnostic {
    pub fn new(severity: Severity, code: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity,
            code: code.into(),
            message: message.into(),
            span: None,
            related: Vec::new(),
        }
    }

    pub fn error(code: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Error, code, message)
    }

    pub fn warning(code: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Warning, code, message)
    }

    pub fn with_span(mut self, span: Option<SourceSpan>) -> Self {
        self.span = span;
        self
    }

    pub fn with_related(mut self, span: SourceSpan) -> Self {
        self.related.push(span);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `FILE:LINE:COL: SEVERITY[CODE] message`. Diagnostics without a span
    /// render as `FILE: SEVERITY[CODE] message`.
    pub fn render(&self, default_file: &str) -> String {
        match &self.span {
            Some(s) => format!(
                "{}:{}:{}: {}[{}] {}",
                s.file, s.start_line, s.start_col, self.severity, self.code, self.message
            ),
            None => format!(
                "{}: {}[{}] {}",
                default_file, self.severity, self.code, self.message
            ),
        }
    }
}

/// Stable ordering: by span (spanless last), then code.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| {
        let span_order = match (&a.span, &b.span) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        span_order.then_with(|| a.code.cmp(&b.code))
    });
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_format() {
        let d = Diagnostic::error("V005", "solution `Sn1` has an outgoing supported_by edge")
            .with_span(Some(SourceSpan::new("bad.gsn", (3, 5), (3, 20))));
        assert_eq!(
            d.render("x"),
            "bad.gsn:3:5: error[V005] solution `Sn1` has an outgoing supported_by edge"
        );
        let d = Diagnostic::warning("V011", "m").render("f.gsn");
        assert_eq!(d, "f.gsn: warning[V011] m");
    }

    #[test]
    fn slicing() {
        let src = "ab\ncdef\ng";
        let s = SourceSpan::new("f", (2, 2), (2, 4));
        assert_eq!(s.slice(src), "de");
        let s = SourceSpan::new("f", (1, 2), (2, 2));
        assert_eq!(s.slice(src), "b\nc");
    }

    #[test]
    fn ordering_by_span_then_code() {
        let at = |l, c| Some(SourceSpan::new("f", (l, c), (l, c + 1)));
        let mut v = vec![
            Diagnostic::error("V002", "").with_span(at(2, 1)),
            Diagnostic::error("V009", ""),
            Diagnostic::error("V001", "").with_span(at(2, 1)),
            Diagnostic::error("V003", "").with_span(at(1, 4)),
        ];
        sort_diagnostics(&mut v);
        let codes: Vec<_> = v.iter().map(|d| d.code.as_str()).collect();
        assert_eq!(codes, ["V003", "V001", "V002", "V009"]);
    }
}
