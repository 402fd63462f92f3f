//! Verification labels emitted by the synthetic generator, and OCR candidate
//! lists consumed by the recognizer.

use alloc::vec::Vec;

use crate::model::{BBox, StrokeClass};

/// Labeled sample range `[start, end)` of a series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruthSpan {
    pub start: usize,
    pub end: usize,
    pub class: StrokeClass,
    pub glyph: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruthGlyph {
    pub id: u32,
    pub letter: char,
    pub bbox: BBox,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TruthEventKind {
    NewLine,
    NewPage,
    Erase,
}

impl TruthEventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TruthEventKind::NewLine => "newline",
            TruthEventKind::NewPage => "newpage",
            TruthEventKind::Erase => "erase",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "newline" => TruthEventKind::NewLine,
            "newpage" => TruthEventKind::NewPage,
            "erase" => TruthEventKind::Erase,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruthEvent {
    pub kind: TruthEventKind,
    pub t: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GroundTruth {
    pub spans: Vec<TruthSpan>,
    pub glyphs: Vec<TruthGlyph>,
    pub events: Vec<TruthEvent>,
}

impl GroundTruth {
    /// Start indices of every span after the first.
    pub fn boundaries(&self) -> Vec<usize> {
        self.spans.iter().skip(1).map(|s| s.start).collect()
    }

    pub fn count_events(&self, kind: TruthEventKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }

    pub fn spans_of_glyph(&self, id: u32) -> impl Iterator<Item = &TruthSpan> {
        self.spans.iter().filter(move |s| s.glyph == Some(id))
    }

    /// Spans cover `[0, len)` with no gaps or overlaps.
    pub fn partitions(&self, len: usize) -> bool {
        let mut next = 0;
        for s in &self.spans {
            if s.start != next || s.end <= s.start {
                return false;
            }
            next = s.end;
        }
        next == len
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub symbol: char,
    pub probability: f64,
}

/// OCR output for one character, best candidate first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CandidateList {
    pub entries: Vec<Candidate>,
}

impl CandidateList {
    pub fn new(entries: impl IntoIterator<Item = (char, f64)>) -> Self {
        CandidateList {
            entries: entries
                .into_iter()
                .map(|(symbol, probability)| Candidate { symbol, probability })
                .collect(),
        }
    }

    pub fn probability_of(&self, symbol: char) -> Option<f64> {
        self.entries.iter().find(|c| c.symbol == symbol).map(|c| c.probability)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
