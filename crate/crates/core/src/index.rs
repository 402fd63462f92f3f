//! Time index between note pages and a lecture recording, and keyword
//! search over recognized line text.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::assemble::Notes;
use crate::error::{Error, Result};
use crate::group::group;
use crate::model::BBox;
use crate::recognize::{recognize_group, PrimitiveTable, StrokeCountTable};

/// Fraction of the median character width above which a gap counts as a space.
pub const WORD_GAP_FRACTION: f64 = 0.6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Posting {
    pub page_id: u32,
    pub line_id: u32,
    pub start_t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PageInterval {
    pub page_id: u32,
    pub start_t: f64,
    pub end_t: f64,
}

/// All times are on the recording clock: session time plus `clock_offset`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchIndex {
    pub clock_offset: f64,
    pub postings: BTreeMap<String, Vec<Posting>>,
    pub page_intervals: Vec<PageInterval>,
}

pub fn normalize_word(word: &str) -> String {
    word.trim().chars().flat_map(char::to_uppercase).collect()
}

/// Renders characters of one line, left to right, as text. Unknown
/// characters print as `?`.
pub fn line_text(chars: &[(BBox, Option<char>)]) -> String {
    let mut sorted: Vec<&(BBox, Option<char>)> = chars.iter().collect();
    sorted.sort_by(|a, b| a.0.min_x.total_cmp(&b.0.min_x));
    let mut widths: Vec<f64> = sorted.iter().map(|c| c.0.width()).collect();
    widths.sort_by(f64::total_cmp);
    let median = widths.get(widths.len() / 2).copied().unwrap_or(0.0);
    let mut out = String::new();
    for (i, (b, c)) in sorted.iter().map(|c| (c.0, c.1)).enumerate() {
        if i > 0 && b.min_x - sorted[i - 1].0.max_x >= WORD_GAP_FRACTION * median {
            out.push(' ');
        }
        out.push(c.unwrap_or('?'));
    }
    out
}

/// Groups and recognizes every line of the notes, keyed by line id.
pub fn recognize_lines(notes: &Notes, table: &PrimitiveTable, counts: &StrokeCountTable) -> BTreeMap<u32, String> {
    notes
        .lines()
        .map(|l| {
            let chars: Vec<(BBox, Option<char>)> =
                group(&l.strokes).iter().map(|g| (g.bbox, recognize_group(g, None, table, counts).letter)).collect();
            (l.id, line_text(&chars))
        })
        .collect()
}

/// Tokenizes each line's text on whitespace. Tokens containing an unknown
/// character are left out.
pub fn build_index(notes: &Notes, texts: &BTreeMap<u32, String>, clock_offset: f64) -> SearchIndex {
    let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
    for line in notes.lines() {
        let Some(text) = texts.get(&line.id) else { continue };
        for token in text.split_whitespace().filter(|w| !w.contains('?')) {
            let hit = Posting { page_id: line.page_id, line_id: line.id, start_t: line.created_t + clock_offset };
            let list = postings.entry(normalize_word(token)).or_default();
            if !list.contains(&hit) {
                list.push(hit);
            }
        }
    }
    for list in postings.values_mut() {
        list.sort_by(|a, b| a.start_t.total_cmp(&b.start_t).then(a.line_id.cmp(&b.line_id)));
    }
    let page_intervals = if notes.lines().next().is_none() {
        Vec::new()
    } else {
        notes
            .pages
            .iter()
            .map(|p| PageInterval { page_id: p.id, start_t: p.start_t + clock_offset, end_t: p.end_t + clock_offset })
            .collect()
    };
    SearchIndex { clock_offset, postings, page_intervals }
}

/// The page shown at recording time `t`. A boundary instant belongs to the
/// page that opens there.
pub fn time_to_page(index: &SearchIndex, t: f64) -> Result<u32> {
    let (Some(first), Some(last)) = (index.page_intervals.first(), index.page_intervals.last()) else {
        return Err(Error::OutOfSession(t));
    };
    if !(t >= first.start_t && t <= last.end_t) {
        return Err(Error::OutOfSession(t));
    }
    Ok(index.page_intervals.iter().rev().find(|p| p.start_t <= t).map_or(first.page_id, |p| p.page_id))
}

pub fn page_to_clip(index: &SearchIndex, page_id: u32) -> Result<(f64, f64)> {
    index
        .page_intervals
        .iter()
        .find(|p| p.page_id == page_id)
        .map(|p| (p.start_t, p.end_t))
        .ok_or(Error::UnknownPage(page_id))
}

/// Exact, case-insensitive lookup. Hits are in time order.
pub fn search(index: &SearchIndex, word: &str) -> Vec<Posting> {
    index.postings.get(&normalize_word(word)).cloned().unwrap_or_default()
}
