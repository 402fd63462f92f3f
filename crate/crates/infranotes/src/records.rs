//! Shared plumbing for the line-record text formats: one header line,
//! then whitespace-separated fields per record. Blank lines and `#`
//! comments are ignored.

use std::fmt::Write;
use std::str::FromStr;

use infranotes_core::model::BBox;

use crate::error::{Error, Result};

pub struct Record<'a> {
    pub line: usize,
    pub fields: Vec<&'a str>,
}

impl<'a> Record<'a> {
    pub fn tag(&self) -> &'a str {
        self.fields[0]
    }

    pub fn expect_len(&self, n: usize) -> Result<()> {
        if self.fields.len() != n {
            return Err(Error::syntax(self.line, format!("expected {n} fields, found {}", self.fields.len())));
        }
        Ok(())
    }

    pub fn get<T: FromStr>(&self, i: usize, what: &str) -> Result<T> {
        let raw = self.fields.get(i).ok_or_else(|| Error::syntax(self.line, format!("missing {what}")))?;
        raw.parse().map_err(|_| Error::syntax(self.line, format!("bad {what} {raw:?}")))
    }

    pub fn real(&self, i: usize, what: &str) -> Result<f64> {
        let v: f64 = self.get(i, what)?;
        if !v.is_finite() {
            return Err(Error::syntax(self.line, format!("{what} is not finite")));
        }
        Ok(v)
    }

    pub fn optional<T: FromStr>(&self, i: usize, what: &str) -> Result<Option<T>> {
        match self.fields.get(i) {
            Some(&"-") => Ok(None),
            _ => self.get(i, what).map(Some),
        }
    }

    pub fn bbox(&self, i: usize) -> Result<BBox> {
        let b = BBox::new(self.real(i, "min_x")?, self.real(i + 1, "max_x")?, self.real(i + 2, "min_y")?, self.real(i + 3, "max_y")?);
        if b.min_x > b.max_x || b.min_y > b.max_y {
            return Err(Error::syntax(self.line, "box has min above max"));
        }
        Ok(b)
    }

    pub fn unknown(&self) -> Error {
        Error::syntax(self.line, format!("unknown record {:?}", self.tag()))
    }
}

/// Splits `text` into records. An input with no records at all is accepted
/// without a header; otherwise the first record must be `header`.
pub fn parse_records<'a>(text: &'a str, header: &str) -> Result<Vec<Record<'a>>> {
    let mut out = Vec::new();
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        if !seen_header {
            if body != header {
                return Err(Error::syntax(line, format!("expected header {header:?}")));
            }
            seen_header = true;
            continue;
        }
        out.push(Record { line, fields: body.split_whitespace().collect() });
    }
    Ok(out)
}

/// Shortest decimal that parses back to the same value.
pub fn real(x: f64) -> String {
    format!("{x}")
}

pub fn push_bbox(out: &mut String, b: &BBox) {
    let _ = write!(out, " {} {} {} {}", real(b.min_x), real(b.max_x), real(b.min_y), real(b.max_y));
}
