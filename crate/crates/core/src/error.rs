use alloc::string::String;
use core::fmt;

/// Errors raised by the processing pipeline.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    EmptyStroke,
    TooShort { samples: usize },
    DegenerateTriple,
    NoGlyphPlan(char),
    DegenerateRegion,
    OrphanErase,
    CrossPageMask { mask_page: u32, line_page: u32 },
    BeforePage { as_of: f64, page_start: f64 },
    OutOfSession(f64),
    UnknownPage(u32),
    OracleTooLarge(usize),
    InvalidConfig(&'static str),
    TableSyntax { line: usize, message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyStroke => f.write_str("EmptyStroke: stroke has no samples"),
            Error::TooShort { samples } => write!(f, "TooShort: stroke has only {samples} samples"),
            Error::DegenerateTriple => f.write_str("DegenerateTriple: coincident points"),
            Error::NoGlyphPlan(c) => write!(f, "NoGlyphPlan: no glyph plan for {c:?}"),
            Error::DegenerateRegion => f.write_str("DegenerateRegion: erase region has zero area"),
            Error::OrphanErase => f.write_str("OrphanErase: erase does not overlap any line"),
            Error::CrossPageMask { mask_page, line_page } => write!(
                f,
                "CrossPageMask: mask on page {mask_page} targets a line on page {line_page}"
            ),
            Error::BeforePage { as_of, page_start } => {
                write!(f, "BeforePage: {as_of} precedes page start {page_start}")
            }
            Error::OutOfSession(t) => write!(f, "OutOfSession: {t} is outside the session"),
            Error::UnknownPage(id) => write!(f, "UnknownPage: no page with id {id}"),
            Error::OracleTooLarge(n) => write!(f, "OracleTooLarge: {n} strokes (limit 12)"),
            Error::InvalidConfig(what) => write!(f, "InvalidConfig: {what}"),
            Error::TableSyntax { line, message } => write!(f, "TableSyntax: line {line}: {message}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
