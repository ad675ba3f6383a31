//! Whitespace tokenizer shared by the text formats. `#` starts a comment.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Tok<'a> {
    pub line: usize,
    pub col: usize,
    pub text: &'a str,
}

pub(crate) struct Cursor<'a> {
    toks: Vec<Tok<'a>>,
    pos: usize,
}

/// Splits one line into tokens with 1-based columns, dropping any comment.
pub(crate) fn line_tokens(line_no: usize, line: &str) -> Vec<Tok<'_>> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok {
                    line: line_no,
                    col: s + 1,
                    text: &body[s..i],
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok {
            line: line_no,
            col: s + 1,
            text: &body[s..],
        });
    }
    out
}

impl<'a> Cursor<'a> {
    pub fn new(text: &'a str) -> Self {
        let toks = text
            .lines()
            .enumerate()
            .flat_map(|(i, l)| line_tokens(i + 1, l))
            .collect();
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).map(|t| t.text)
    }

    fn end_error(&self, what: &str) -> Error {
        let (line, col) = self.toks.last().map_or((1, 1), |t| (t.line, t.col + t.text.len()));
        Error::parse(line, col, format!("expected {what}, found end of input"))
    }

    pub fn word(&mut self) -> Result<Tok<'a>> {
        let t = *self.toks.get(self.pos).ok_or_else(|| self.end_error("a token"))?;
        self.pos += 1;
        Ok(t)
    }

    pub fn expect(&mut self, want: &str) -> Result<Tok<'a>> {
        let t = *self
            .toks
            .get(self.pos)
            .ok_or_else(|| self.end_error(&format!("`{want}`")))?;
        if t.text != want {
            return Err(Error::parse(
                t.line,
                t.col,
                format!("expected `{want}`, found `{}`", t.text),
            ));
        }
        self.pos += 1;
        Ok(t)
    }

    pub fn number(&mut self) -> Result<usize> {
        let t = *self.toks.get(self.pos).ok_or_else(|| self.end_error("a number"))?;
        let v = t
            .text
            .parse()
            .map_err(|_| Error::parse(t.line, t.col, format!("expected a number, found `{}`", t.text)))?;
        self.pos += 1;
        Ok(v)
    }
}
