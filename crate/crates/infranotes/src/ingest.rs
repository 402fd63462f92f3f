//! Readers and writers for trajectory streams, ground truth and OCR
//! candidate lists.

use std::fmt::Write;

use infranotes_core::model::{SamplePoint, SampleSeries, StrokeClass, Vec3};
use infranotes_core::truth::{CandidateList, GroundTruth, TruthEvent, TruthEventKind, TruthGlyph, TruthSpan};

use crate::error::{Error, Result};
use crate::records::{parse_records, push_bbox, real};

pub const STREAM_HEADER: &str = "infranotes-stream v1";
pub const TRUTH_HEADER: &str = "infranotes-truth v1";
pub const CANDIDATES_HEADER: &str = "infranotes-candidates v1";

/// Reads `t x y z [vx vy vz [ox oy oz]] frame_points` records. Orientation
/// is accepted and dropped. Velocities are derived from positions when the
/// records omit them.
pub fn parse_stream(text: &str, source_id: &str) -> Result<SampleSeries> {
    let records = parse_records(text, STREAM_HEADER)?;
    let mut samples = Vec::with_capacity(records.len());
    let mut width = None;
    for r in &records {
        let n = r.fields.len();
        if !matches!(n, 5 | 8 | 11) {
            return Err(Error::syntax(r.line, format!("expected 5, 8 or 11 fields, found {n}")));
        }
        if *width.get_or_insert(n) != n {
            return Err(Error::syntax(r.line, "record width differs from earlier records"));
        }
        let t = r.real(0, "t")?;
        let pos = Vec3::new(r.real(1, "x")?, r.real(2, "y")?, r.real(3, "z")?);
        let vel = if n >= 8 { Vec3::new(r.real(4, "vx")?, r.real(5, "vy")?, r.real(6, "vz")?) } else { Vec3::ZERO };
        if n == 11 {
            for (i, what) in [(7, "ox"), (8, "oy"), (9, "oz")] {
                r.real(i, what)?;
            }
        }
        let frame_points: u32 = r.get(n - 1, "frame_points")?;
        if frame_points == 0 {
            return Err(Error::syntax(r.line, "frame_points must be at least 1"));
        }
        if let Some(prev) = samples.last().map(|s: &SamplePoint| s.t) {
            if t <= prev {
                return Err(Error::NonMonotonicTime { line: r.line, t, previous: prev });
            }
        }
        samples.push(SamplePoint::new(t, pos, vel, frame_points));
    }
    let mut series = SampleSeries::new(source_id, samples);
    if width == Some(5) {
        series.derive_velocities();
    }
    Ok(series)
}

pub fn write_stream(series: &SampleSeries) -> String {
    let mut out = format!("{STREAM_HEADER}\n");
    for s in &series.samples {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {} {}",
            real(s.t),
            real(s.pos.x),
            real(s.pos.y),
            real(s.pos.z),
            real(s.vel.x),
            real(s.vel.y),
            real(s.vel.z),
            s.frame_points
        );
    }
    out
}

pub fn parse_truth(text: &str) -> Result<GroundTruth> {
    let mut gt = GroundTruth::default();
    for r in parse_records(text, TRUTH_HEADER)? {
        match r.tag() {
            "span" => {
                r.expect_len(5)?;
                let start: usize = r.get(1, "start")?;
                let end: usize = r.get(2, "end")?;
                let class = StrokeClass::parse(r.fields[3]).ok_or_else(|| Error::syntax(r.line, "bad class"))?;
                if end <= start || gt.spans.last().is_some_and(|s: &TruthSpan| s.end > start) {
                    return Err(Error::syntax(r.line, "spans must be non-empty, sorted and disjoint"));
                }
                gt.spans.push(TruthSpan { start, end, class, glyph: r.optional(4, "glyph")? });
            }
            "glyph" => {
                r.expect_len(7)?;
                let id: u32 = r.get(1, "glyph id")?;
                let letter: char = r.get(2, "letter")?;
                if gt.glyphs.iter().any(|g| g.id == id) {
                    return Err(Error::syntax(r.line, format!("duplicate glyph {id}")));
                }
                gt.glyphs.push(TruthGlyph { id, letter, bbox: r.bbox(3)? });
            }
            "event" => {
                r.expect_len(3)?;
                let kind = TruthEventKind::parse(r.fields[1]).ok_or_else(|| Error::syntax(r.line, "bad event kind"))?;
                gt.events.push(TruthEvent { kind, t: r.real(2, "t")? });
            }
            _ => return Err(r.unknown()),
        }
    }
    Ok(gt)
}

pub fn write_truth(gt: &GroundTruth) -> String {
    let mut out = format!("{TRUTH_HEADER}\n");
    for s in &gt.spans {
        let glyph = s.glyph.map_or("-".to_string(), |g| g.to_string());
        let _ = writeln!(out, "span {} {} {} {glyph}", s.start, s.end, s.class.as_str());
    }
    for g in &gt.glyphs {
        let _ = write!(out, "glyph {} {}", g.id, g.letter);
        push_bbox(&mut out, &g.bbox);
        out.push('\n');
    }
    for e in &gt.events {
        let _ = writeln!(out, "event {} {}", e.kind.as_str(), real(e.t));
    }
    out
}

fn parse_symbol(field: &str) -> Option<char> {
    match field.strip_prefix("U+") {
        Some(hex) => u32::from_str_radix(hex, 16).ok().and_then(char::from_u32),
        None => field.parse().ok(),
    }
}

fn symbol_field(c: char) -> String {
    if c == '#' || c.is_whitespace() {
        format!("U+{:04X}", c as u32)
    } else {
        c.to_string()
    }
}

/// `SYMBOL PROBABILITY` records, kept in file order. A symbol is either a
/// single character or a `U+XXXX` code point, which `#` must use.
pub fn parse_candidates(text: &str) -> Result<CandidateList> {
    let mut entries = Vec::new();
    for r in parse_records(text, CANDIDATES_HEADER)? {
        r.expect_len(2)?;
        let symbol = parse_symbol(r.fields[0]).ok_or_else(|| Error::syntax(r.line, format!("bad symbol {:?}", r.fields[0])))?;
        let value = r.real(1, "probability")?;
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::BadProbability { line: r.line, value });
        }
        entries.push((symbol, value));
    }
    Ok(CandidateList::new(entries))
}

pub fn write_candidates(list: &CandidateList) -> String {
    let mut out = format!("{CANDIDATES_HEADER}\n");
    for c in &list.entries {
        let _ = writeln!(out, "{} {}", symbol_field(c.symbol), real(c.probability));
    }
    out
}
