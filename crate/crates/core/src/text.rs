//! Shared line reader for the family and design text formats.

use alloc::string::String;
use core::fmt;

use thiserror::Error;

use crate::group::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected `{expected}` header")]
    MissingHeader { expected: &'static str },
    #[error("invalid integer `{text}`")]
    BadInteger { text: String },
    #[error("unexpected token `{text}`")]
    Unexpected { text: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("block size must be at least 2, got {k}")]
    BlockSizeTooSmall { k: u64 },
    #[error("block has {found} elements, expected {expected}")]
    WrongBlockSize { expected: usize, found: usize },
    #[error("duplicate element `{token}` in block")]
    DuplicateElement { token: String },
    #[error("no blocks")]
    NoBlocks,
    #[error("point {point} out of range for v = {v}")]
    PointOutOfRange { point: u64, v: u32 },
    #[error("v = {v} must exceed k = {k}")]
    BadPointCount { v: u64, k: u64 },
}

/// A parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.kind)
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

impl Token<'_> {
    pub fn error(&self, kind: impl Into<ParseErrorKind>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            kind: kind.into(),
        }
    }

    pub fn parse_u64(&self) -> Result<u64, ParseError> {
        self.text.parse().map_err(|_| {
            self.error(ParseErrorKind::BadInteger {
                text: self.text.into(),
            })
        })
    }
}

/// A non-empty content line split into tokens; comments removed.
pub(crate) struct Line<'a> {
    pub number: usize,
    pub tokens: alloc::vec::Vec<Token<'a>>,
}

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut tokens = alloc::vec::Vec::new();
        let mut start = None;
        for (pos, ch) in body.char_indices().chain(core::iter::once((body.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &body[s..pos],
                        line: i + 1,
                        column: body[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        (!tokens.is_empty()).then_some(Line {
            number: i + 1,
            tokens,
        })
    })
}

/// Reads a `<keyword> <value>` header line.
pub(crate) fn header<'a>(
    lines: &mut impl Iterator<Item = Line<'a>>,
    keyword: &'static str,
    last_line: usize,
) -> Result<Token<'a>, ParseError> {
    let missing = |line, column| ParseError {
        line,
        column,
        kind: ParseErrorKind::MissingHeader { expected: keyword },
    };
    let line = lines.next().ok_or_else(|| missing(last_line + 1, 1))?;
    let first = line.tokens[0];
    if first.text != keyword {
        return Err(missing(line.number, first.column));
    }
    match line.tokens.as_slice() {
        [_, value] => Ok(*value),
        [_] => Err(missing(line.number, first.column)),
        [_, _, extra, ..] => Err(extra.error(ParseErrorKind::Unexpected {
            text: extra.text.into(),
        })),
        [] => unreachable!(),
    }
}
