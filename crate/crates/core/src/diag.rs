//! Diagnostics shared by every stage of the pipeline.

use std::fmt;

/// Byte range into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }

    /// 1-based line and column of `start` in `source`.
    pub fn line_col(&self, source: &str) -> (usize, usize) {
        let upto = &source[..self.start.min(source.len())];
        let line = upto.matches('\n').count() + 1;
        let col = upto.rfind('\n').map_or(upto.len(), |nl| upto.len() - nl - 1) + 1;
        (line, col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagCode {
    SyntaxError,
    UnresolvedName,
    ArityMismatch,
    DuplicateDeclaration,
    BadReturnType,
    DuplicateBinder,
    MutualRecursion,
    GrammarViolation,
    NestedG,
    HIsGadt,
    ZeroArity,
    TrulyNested,
    TrulyNestedGadt,
    TrulyNestedType,
    UnsupportedMap,
    UnknownBuiltin,
    CapExceeded,
}

impl DiagCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiagCode::SyntaxError => "SYNTAX_ERROR",
            DiagCode::UnresolvedName => "UNRESOLVED_NAME",
            DiagCode::ArityMismatch => "ARITY_MISMATCH",
            DiagCode::DuplicateDeclaration => "DUPLICATE_DECLARATION",
            DiagCode::BadReturnType => "BAD_RETURN_TYPE",
            DiagCode::DuplicateBinder => "DUPLICATE_BINDER",
            DiagCode::MutualRecursion => "MUTUAL_RECURSION",
            DiagCode::GrammarViolation => "GRAMMAR_VIOLATION",
            DiagCode::NestedG => "NESTED_G",
            DiagCode::HIsGadt => "H_IS_GADT",
            DiagCode::ZeroArity => "ZERO_ARITY",
            DiagCode::TrulyNested => "TRULY_NESTED",
            DiagCode::TrulyNestedGadt => "TRULY_NESTED_GADT",
            DiagCode::TrulyNestedType => "TRULY_NESTED_TYPE",
            DiagCode::UnsupportedMap => "UNSUPPORTED_MAP",
            DiagCode::UnknownBuiltin => "UNKNOWN_BUILTIN",
            DiagCode::CapExceeded => "CAP_EXCEEDED",
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{code}: {message}")]
pub struct Diagnostic {
    pub code: DiagCode,
    pub message: String,
    pub span: Option<Span>,
    /// Longer, possibly multi-line, explanation. Empty when the message says it all.
    pub explanation: String,
}

impl Diagnostic {
    pub fn new(code: DiagCode, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            message: message.into(),
            span: None,
            explanation: String::new(),
        }
    }

    pub fn at(mut self, span: Option<Span>) -> Self {
        if self.span.is_none() {
            self.span = span;
        }
        self
    }

    pub fn explain(mut self, text: impl Into<String>) -> Self {
        self.explanation = text.into();
        self
    }

    /// Render as `file:line:col: CODE: message` followed by the explanation.
    pub fn render(&self, file: &str, source: &str) -> String {
        let loc = match self.span {
            Some(sp) => {
                let (l, c) = sp.line_col(source);
                format!("{file}:{l}:{c}")
            }
            None => file.to_string(),
        };
        let mut out = format!("{loc}: {}: {}", self.code, self.message);
        for line in self.explanation.lines() {
            out.push_str("\n  ");
            out.push_str(line);
        }
        out
    }
}

pub type Diagnostics = Vec<Diagnostic>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_col_counts_from_one() {
        let src = "ab\ncd\nef";
        assert_eq!(Span::new(0, 1).line_col(src), (1, 1));
        assert_eq!(Span::new(4, 5).line_col(src), (2, 2));
        assert_eq!(Span::new(6, 7).line_col(src), (3, 1));
    }

    #[test]
    fn render_includes_code_and_explanation() {
        let d = Diagnostic::new(DiagCode::UnresolvedName, "unresolved name Y")
            .at(Some(Span::new(3, 4)))
            .explain("first\nsecond");
        let r = d.render("x.gdt", "abc Y");
        assert_eq!(r, "x.gdt:1:4: UNRESOLVED_NAME: unresolved name Y\n  first\n  second");
    }
}
