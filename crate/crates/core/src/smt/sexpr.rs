use std::fmt;

use thiserror::Error;

/// An s-expression as printed by an SMT solver. `|quoted|` symbols are
/// stored without their bars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExpr {
    Symbol(String),
    Str(String),
    List(Vec<SExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SExprError {
    #[error("unbalanced `)` at byte {0}")]
    Unbalanced(usize),
    #[error("unterminated {0}")]
    Unterminated(&'static str),
    #[error("nesting deeper than {MAX_DEPTH}")]
    TooDeep,
}

const MAX_DEPTH: usize = 512;

impl SExpr {
    pub fn symbol(&self) -> Option<&str> {
        match self {
            SExpr::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items) => Some(items),
            _ => None,
        }
    }

    pub fn is_symbol(&self, name: &str) -> bool {
        self.symbol() == Some(name)
    }
}

fn needs_quotes(s: &str) -> bool {
    s.is_empty()
        || s.chars().next().is_some_and(|c| c.is_ascii_digit()) && !s.chars().all(|c| c.is_ascii_digit() || c == '.')
        || s.chars().any(|c| c.is_whitespace() || "()|;\"@".contains(c))
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Symbol(s) if needs_quotes(s) => write!(f, "|{s}|"),
            SExpr::Symbol(s) => f.write_str(s),
            SExpr::Str(s) => write!(f, "\"{}\"", s.replace('"', "\"\"")),
            SExpr::List(items) => {
                f.write_str("(")?;
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Incremental reader: feed solver output in arbitrary chunks and take
/// complete top-level expressions as they become available. Comments
/// (`;` to end of line) are skipped.
#[derive(Debug, Default)]
pub struct SExprReader {
    buf: Vec<u8>,
}

impl SExprReader {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn feed(&mut self, bytes: &[u8]) {
        self.buf.extend_from_slice(bytes);
    }

    /// Next complete expression, if the buffer holds one.
    pub fn next_expr(&mut self) -> Result<Option<SExpr>, SExprError> {
        let mut pos = 0;
        match parse_one(&self.buf, &mut pos, 0) {
            Ok(Some(e)) => {
                self.buf.drain(..pos);
                Ok(Some(e))
            }
            Ok(None) => {
                self.buf.drain(..pos);
                Ok(None)
            }
            Err(Incomplete) => Ok(None),
            Err(Invalid(e)) => {
                self.buf.clear();
                Err(e)
            }
        }
    }

    /// Bytes received but not yet forming a complete expression.
    pub fn pending(&self) -> &[u8] {
        &self.buf
    }
}

enum ParseFail {
    Incomplete,
    Invalid(SExprError),
}
use ParseFail::{Incomplete, Invalid};

/// False when the buffer ends inside a comment; `pos` then points at it.
fn skip_blank(buf: &[u8], pos: &mut usize) -> bool {
    while *pos < buf.len() {
        match buf[*pos] {
            b';' => match buf[*pos..].iter().position(|&c| c == b'\n') {
                Some(n) => *pos += n + 1,
                None => return false,
            },
            c if c.is_ascii_whitespace() => *pos += 1,
            _ => return true,
        }
    }
    true
}

/// `Ok(None)`: nothing but blanks up to the end of `buf`.
fn parse_one(buf: &[u8], pos: &mut usize, depth: usize) -> Result<Option<SExpr>, ParseFail> {
    if depth > MAX_DEPTH {
        return Err(Invalid(SExprError::TooDeep));
    }
    if !skip_blank(buf, pos) {
        return Err(Incomplete);
    }
    if *pos >= buf.len() {
        return Ok(None);
    }
    match buf[*pos] {
        b'(' => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                if !skip_blank(buf, pos) || *pos >= buf.len() {
                    return Err(Incomplete);
                }
                if buf[*pos] == b')' {
                    *pos += 1;
                    return Ok(Some(SExpr::List(items)));
                }
                match parse_one(buf, pos, depth + 1)? {
                    Some(e) => items.push(e),
                    None => return Err(Incomplete),
                }
            }
        }
        b')' => Err(Invalid(SExprError::Unbalanced(*pos))),
        b'|' => {
            let start = *pos + 1;
            let end = buf[start..].iter().position(|&c| c == b'|').ok_or(Incomplete)?;
            *pos = start + end + 1;
            Ok(Some(SExpr::Symbol(String::from_utf8_lossy(&buf[start..start + end]).into_owned())))
        }
        b'"' => {
            let mut out = Vec::new();
            let mut i = *pos + 1;
            loop {
                if i >= buf.len() {
                    return Err(Incomplete);
                }
                if buf[i] == b'"' {
                    if buf.get(i + 1) == Some(&b'"') {
                        out.push(b'"');
                        i += 2;
                        continue;
                    }
                    if i + 1 >= buf.len() {
                        // an escaped quote might still follow
                        return Err(Incomplete);
                    }
                    *pos = i + 1;
                    return Ok(Some(SExpr::Str(String::from_utf8_lossy(&out).into_owned())));
                }
                out.push(buf[i]);
                i += 1;
            }
        }
        _ => {
            let start = *pos;
            while *pos < buf.len() && !buf[*pos].is_ascii_whitespace() && !b"()|\";".contains(&buf[*pos]) {
                *pos += 1;
            }
            if *pos >= buf.len() {
                // the atom may continue in the next chunk
                return Err(Incomplete);
            }
            Ok(Some(SExpr::Symbol(String::from_utf8_lossy(&buf[start..*pos]).into_owned())))
        }
    }
}

/// Parses a complete text into its top-level expressions.
pub fn parse_sexprs(text: &str) -> Result<Vec<SExpr>, SExprError> {
    let mut reader = SExprReader::new();
    reader.feed(text.as_bytes());
    // a trailing newline terminates a final bare atom or string
    reader.feed(b"\n");
    let mut out = Vec::new();
    while let Some(e) = reader.next_expr()? {
        out.push(e);
    }
    let rest = reader.pending();
    if rest.iter().any(|c| !c.is_ascii_whitespace()) {
        let mut pos = 0;
        if skip_blank(rest, &mut pos) && pos < rest.len() {
            return Err(SExprError::Unterminated(match rest[pos] {
                b'|' => "quoted symbol",
                b'"' => "string",
                _ => "list",
            }));
        }
    }
    Ok(out)
}
