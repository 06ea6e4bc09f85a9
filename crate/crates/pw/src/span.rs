use std::fmt;

/// A 1-based line/column position with its byte offset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
}

impl Position {
    pub fn start() -> Self {
        Position {
            line: 1,
            column: 1,
            offset: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub start: Position,
    pub end: Position,
}

impl SourceSpan {
    pub fn new(start: Position, end: Position) -> Self {
        SourceSpan { start, end }
    }

    pub fn point(p: Position) -> Self {
        SourceSpan { start: p, end: p }
    }

    /// The span of `len` bytes of a single line starting at `(line, column)`.
    pub fn on_line(line: usize, column: usize, offset: usize, len: usize) -> Self {
        let start = Position {
            line,
            column,
            offset,
        };
        let end = Position {
            line,
            column: column + len,
            offset: offset + len,
        };
        SourceSpan { start, end }
    }

    pub fn to(self, other: SourceSpan) -> Self {
        SourceSpan {
            start: self.start,
            end: other.end,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start.line, self.start.column)
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
    /// Token names that would have been accepted here.
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(message: impl Into<String>, span: SourceSpan) -> Self {
        ParseError {
            message: message.into(),
            span,
            expected: Vec::new(),
        }
    }

    pub fn expecting(mut self, expected: &[&str]) -> Self {
        self.expected = expected.iter().map(|s| s.to_string()).collect();
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}
