//! Text formats for processed sessions: settings, the notes manifest, the
//! event log, the search index and the segmentation trace.

use std::collections::BTreeMap;
use std::fmt::Write;

use infranotes_core::assemble::{Line, Mask, Notes, OrphanErase, Page};
use infranotes_core::index::{PageInterval, Posting, SearchIndex};
use infranotes_core::model::{BoundaryCause, SampleSeries, Stroke, StrokeClass};
use infranotes_core::noteevents::{NoteEvent, NoteEventKind};
use infranotes_core::pipeline::PipelineConfig;
use infranotes_core::segment::SegmentTrace;

use crate::error::{Error, Result};
use crate::records::{parse_records, push_bbox, real, Record};

pub const MANIFEST_HEADER: &str = "infranotes-notes v1";
pub const EVENTS_HEADER: &str = "infranotes-events v1";
pub const INDEX_HEADER: &str = "infranotes-index v1";
pub const TRACE_HEADER: &str = "infranotes-trace v1";

/// Every tunable threshold, plus the offset from session time to the
/// recording clock.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Settings {
    pub pipeline: PipelineConfig,
    pub clock_offset: f64,
}

macro_rules! settings_table {
    ($($key:literal => $($field:ident).+ : $ty:ty),* $(,)?) => {
        impl Settings {
            pub const KEYS: &'static [&'static str] = &[$($key),*];

            fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
                match key {
                    $($key => {
                        self.$($field).+ = value.parse::<$ty>().map_err(|_| format!("bad value {value:?} for {key}"))?;
                    })*
                    _ => return Err(format!("unknown setting {key:?}")),
                }
                Ok(())
            }

            pub fn to_text(&self) -> String {
                let mut out = String::new();
                $(let _ = writeln!(out, "{} = {}", $key, self.$($field).+);)*
                out
            }
        }
    };
}

settings_table! {
    "segment.low_xy_speed" => pipeline.segment.low_xy_speed: f64,
    "segment.z_jump_speed" => pipeline.segment.z_jump_speed: f64,
    "segment.sharp_angle_deg" => pipeline.segment.sharp_angle_deg: f64,
    "segment.min_stroke_samples" => pipeline.segment.min_stroke_samples: usize,
    "segment.min_stroke_duration" => pipeline.segment.min_stroke_duration: f64,
    "segment.speed_window" => pipeline.segment.speed_window: usize,
    "segment.angle_reach_mm" => pipeline.segment.angle_reach_mm: f64,
    "segment.angle_max_span" => pipeline.segment.angle_max_span: usize,
    "segment.merge_radius" => pipeline.segment.merge_radius: usize,
    "classify.window" => pipeline.classify.window: usize,
    "classify.z_std_threshold" => pipeline.classify.z_std_threshold: f64,
    "classify.erase_min_two_point_fraction" => pipeline.classify.erase_min_two_point_fraction: f64,
    "events.newline_dx_fraction" => pipeline.events.newline_dx_fraction: f64,
    "events.newline_dx_floor" => pipeline.events.newline_dx_floor: f64,
    "events.newline_dy_fraction" => pipeline.events.newline_dy_fraction: f64,
    "events.newpage_dy_fraction" => pipeline.events.newpage_dy_fraction: f64,
    "events.newpage_dy_floor" => pipeline.events.newpage_dy_floor: f64,
    "events.newpage_dx_jump" => pipeline.events.newpage_dx_jump: f64,
    "events.mask_window" => pipeline.events.mask_window: f64,
    "index.clock_offset" => clock_offset: f64,
}

/// `key = value` lines over the defaults. `#` starts a comment.
pub fn parse_settings(text: &str) -> Result<Settings> {
    let mut s = Settings::default();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| Error::syntax(i + 1, "expected key = value"))?;
        s.set(key.trim(), value.trim()).map_err(|m| Error::syntax(i + 1, m))?;
    }
    s.pipeline.validate()?;
    Ok(s)
}

fn stroke_refs(strokes: &[Stroke]) -> String {
    if strokes.is_empty() {
        return "-".to_string();
    }
    let refs: Vec<String> = strokes
        .iter()
        .map(|s| format!("{}:{}:{}:{}", s.start_index, s.end_index, s.start_cause.as_str(), s.end_cause.as_str()))
        .collect();
    refs.join(",")
}

fn parse_stroke_refs(r: &Record, i: usize, series: &SampleSeries) -> Result<Vec<Stroke>> {
    let field = r.fields.get(i).ok_or_else(|| Error::syntax(r.line, "missing stroke list"))?;
    if *field == "-" {
        return Ok(Vec::new());
    }
    field
        .split(',')
        .map(|item| {
            let parts: Vec<&str> = item.split(':').collect();
            let bad = || Error::syntax(r.line, format!("bad stroke reference {item:?}"));
            let [s, e, sc, ec] = parts[..] else { return Err(bad()) };
            let (s, e): (usize, usize) = (s.parse().map_err(|_| bad())?, e.parse().map_err(|_| bad())?);
            if s >= e || e > series.len() {
                return Err(Error::syntax(r.line, format!("stroke {s}:{e} lies outside the stream")));
            }
            let mut stroke = Stroke::from_range(&series.samples, s, e).with_class(StrokeClass::OnBoard);
            stroke.start_cause = BoundaryCause::parse(sc).ok_or_else(bad)?;
            stroke.end_cause = BoundaryCause::parse(ec).ok_or_else(bad)?;
            Ok(stroke)
        })
        .collect()
}

pub fn write_manifest(notes: &Notes) -> String {
    let mut out = format!("{MANIFEST_HEADER}\n");
    let source: String = notes.source_id.chars().map(|c| if c.is_whitespace() { '_' } else { c }).collect();
    let source = if source.is_empty() { "-".to_string() } else { source };
    let _ = writeln!(out, "session {source} {} {}", real(notes.start_t), real(notes.end_t));
    for p in &notes.pages {
        let _ = writeln!(out, "page {} {} {}", p.id, real(p.start_t), real(p.end_t));
        for l in &p.lines {
            let _ = write!(out, "line {} {} {} {}", l.id, l.page_id, real(l.created_t), real(l.closed_t));
            push_bbox(&mut out, &l.bbox);
            let _ = writeln!(out, " {}", stroke_refs(&l.strokes));
        }
        for m in &p.masks {
            let _ = write!(out, "mask {} {} {} {}", m.id, m.page_id, m.target_line_id, real(m.created_t));
            push_bbox(&mut out, &m.erase_bbox);
            push_bbox(&mut out, &m.bbox);
            let _ = writeln!(out, " {}", stroke_refs(&m.strokes));
        }
    }
    for o in &notes.orphan_erases {
        let _ = write!(out, "orphan {}", real(o.t));
        push_bbox(&mut out, &o.bbox);
        out.push('\n');
    }
    out
}

/// Rebuilds the notes from a manifest and the stream its stroke
/// references point into.
pub fn parse_manifest(text: &str, series: &SampleSeries) -> Result<Notes> {
    let mut notes = Notes { source_id: String::new(), start_t: 0.0, end_t: 0.0, pages: Vec::new(), orphan_erases: Vec::new() };
    let mut seen_session = false;
    for r in parse_records(text, MANIFEST_HEADER)? {
        let page_of = |notes: &mut Notes, id: u32| -> Result<usize> {
            notes.pages.iter().position(|p| p.id == id).ok_or_else(|| Error::syntax(r.line, format!("page {id} not declared")))
        };
        match r.tag() {
            "session" => {
                r.expect_len(4)?;
                notes.source_id = if r.fields[1] == "-" { String::new() } else { r.fields[1].to_string() };
                notes.start_t = r.real(2, "start_t")?;
                notes.end_t = r.real(3, "end_t")?;
                seen_session = true;
            }
            "page" => {
                r.expect_len(4)?;
                let id = r.get(1, "page id")?;
                if notes.pages.iter().any(|p| p.id == id) {
                    return Err(Error::syntax(r.line, format!("duplicate page {id}")));
                }
                let (start_t, end_t) = (r.real(2, "start_t")?, r.real(3, "end_t")?);
                notes.pages.push(Page { id, start_t, end_t, lines: Vec::new(), masks: Vec::new() });
            }
            "line" => {
                r.expect_len(10)?;
                let page_id = r.get(2, "page id")?;
                let p = page_of(&mut notes, page_id)?;
                let line = Line {
                    id: r.get(1, "line id")?,
                    page_id,
                    created_t: r.real(3, "created_t")?,
                    closed_t: r.real(4, "closed_t")?,
                    bbox: r.bbox(5)?,
                    strokes: parse_stroke_refs(&r, 9, series)?,
                };
                notes.pages[p].lines.push(line);
            }
            "mask" => {
                r.expect_len(14)?;
                let page_id = r.get(2, "page id")?;
                let p = page_of(&mut notes, page_id)?;
                let mask = Mask {
                    id: r.get(1, "mask id")?,
                    page_id,
                    target_line_id: r.get(3, "target line")?,
                    created_t: r.real(4, "created_t")?,
                    erase_bbox: r.bbox(5)?,
                    bbox: r.bbox(9)?,
                    strokes: parse_stroke_refs(&r, 13, series)?,
                };
                if notes.pages[p].line(mask.target_line_id).is_none() {
                    return Err(Error::syntax(r.line, format!("mask targets unknown line {}", mask.target_line_id)));
                }
                notes.pages[p].masks.push(mask);
            }
            "orphan" => {
                r.expect_len(6)?;
                notes.orphan_erases.push(OrphanErase { t: r.real(1, "t")?, bbox: r.bbox(2)? });
            }
            _ => return Err(r.unknown()),
        }
    }
    if !seen_session {
        return Err(Error::syntax(1, "manifest has no session record"));
    }
    if notes.pages.is_empty() {
        notes.pages.push(Page { id: 1, start_t: notes.start_t, end_t: notes.end_t, lines: Vec::new(), masks: Vec::new() });
    }
    Ok(notes)
}

fn opt(v: Option<usize>) -> String {
    v.map_or("-".to_string(), |i| i.to_string())
}

pub fn write_events(events: &[NoteEvent]) -> String {
    let mut out = format!("{EVENTS_HEADER}\n");
    for e in events {
        let _ = write!(out, "event {} {} {}", e.kind.as_str(), real(e.t), real(e.end_t));
        push_bbox(&mut out, &e.bbox);
        let _ = writeln!(out, " {} {}", opt(e.stroke), opt(e.overwrite));
    }
    out
}

pub fn parse_events(text: &str) -> Result<Vec<NoteEvent>> {
    parse_records(text, EVENTS_HEADER)?
        .iter()
        .map(|r| {
            if r.tag() != "event" {
                return Err(r.unknown());
            }
            r.expect_len(10)?;
            Ok(NoteEvent {
                kind: NoteEventKind::parse(r.fields[1]).ok_or_else(|| Error::syntax(r.line, "bad event kind"))?,
                t: r.real(2, "t")?,
                end_t: r.real(3, "end_t")?,
                bbox: r.bbox(4)?,
                stroke: r.optional(8, "stroke")?,
                overwrite: r.optional(9, "overwrite")?,
            })
        })
        .collect()
}

/// Recognized line text is stored alongside the postings so the index can
/// be rebuilt or inspected.
pub fn write_index(index: &SearchIndex, texts: &BTreeMap<u32, String>) -> String {
    let mut out = format!("{INDEX_HEADER}\n");
    let _ = writeln!(out, "offset {}", real(index.clock_offset));
    for p in &index.page_intervals {
        let _ = writeln!(out, "page {} {} {}", p.page_id, real(p.start_t), real(p.end_t));
    }
    for (line, text) in texts {
        let _ = writeln!(out, "text {line} {}", text.replace(char::is_whitespace, " "));
    }
    for (word, hits) in &index.postings {
        for h in hits {
            let _ = writeln!(out, "post {word} {} {} {}", h.page_id, h.line_id, real(h.start_t));
        }
    }
    out
}

pub fn parse_index(text: &str) -> Result<(SearchIndex, BTreeMap<u32, String>)> {
    let mut index = SearchIndex::default();
    let mut texts = BTreeMap::new();
    for (r, raw) in parse_records(text, INDEX_HEADER)?.iter().zip(text.lines().filter(|l| {
        let b = l.trim();
        !b.is_empty() && !b.starts_with('#')
    }).skip(1)) {
        match r.tag() {
            "offset" => {
                r.expect_len(2)?;
                index.clock_offset = r.real(1, "offset")?;
            }
            "page" => {
                r.expect_len(4)?;
                let p = PageInterval { page_id: r.get(1, "page id")?, start_t: r.real(2, "start_t")?, end_t: r.real(3, "end_t")? };
                if index.page_intervals.last().is_some_and(|q| q.end_t > p.start_t) {
                    return Err(Error::syntax(r.line, "page intervals overlap or are out of order"));
                }
                index.page_intervals.push(p);
            }
            "text" => {
                let id: u32 = r.get(1, "line id")?;
                let body = raw.trim().strip_prefix("text").unwrap_or("").trim_start();
                let body = body.strip_prefix(r.fields[1]).unwrap_or("").strip_prefix(' ').unwrap_or("");
                texts.insert(id, body.to_string());
            }
            "post" => {
                r.expect_len(5)?;
                let hit = Posting { page_id: r.get(2, "page id")?, line_id: r.get(3, "line id")?, start_t: r.real(4, "start_t")? };
                index.postings.entry(r.fields[1].to_string()).or_insert_with(Vec::new).push(hit);
            }
            _ => return Err(r.unknown()),
        }
    }
    Ok((index, texts))
}

pub fn write_trace(series: &SampleSeries, trace: &SegmentTrace, strokes: &[Stroke]) -> String {
    let mut out = format!("{TRACE_HEADER}\n");
    for (i, s) in series.samples.iter().enumerate() {
        let turn = trace.turn.get(i).copied().flatten().map_or("-".to_string(), real);
        let xy = trace.xy_speed.get(i).copied().unwrap_or(0.0);
        let z = trace.z_speed.get(i).copied().unwrap_or(0.0);
        let _ = writeln!(out, "sample {i} {} {} {} {turn}", real(s.t), real(xy), real(z));
    }
    for (i, cause) in &trace.boundaries {
        let _ = writeln!(out, "boundary {i} {}", cause.as_str());
    }
    for s in strokes {
        let _ = writeln!(
            out,
            "stroke {} {} {} {} {}",
            s.start_index,
            s.end_index,
            s.class.as_str(),
            s.start_cause.as_str(),
            s.end_cause.as_str()
        );
    }
    out
}


#[cfg(test)]
mod tests {
    use super::*;
    use infranotes_core::model::BBox;
    use infranotes_core::pipeline::process;
    use infranotes_core::synthgen::{add_noise, synth_text, NoiseModel, SessionBuilder, WritingStyle};

    #[test]
    fn settings_defaults_round_trip() {
        let d = Settings::default();
        assert_eq!(parse_settings(&d.to_text()).unwrap(), d);
        assert_eq!(parse_settings("").unwrap(), d);
        assert_eq!(d.to_text().lines().count(), Settings::KEYS.len());
        let s = parse_settings("# tuned\nsegment.low_xy_speed = 40\nindex.clock_offset=-3.5 # note\n").unwrap();
        assert_eq!((s.pipeline.segment.low_xy_speed, s.clock_offset), (40.0, -3.5));
        assert_eq!(parse_settings("x = 1").unwrap_err().to_string(), "line 1: unknown setting \"x\"");
        assert!(parse_settings("classify.window = 4").is_err());
        assert!(parse_settings("segment.merge_radius = -1").is_err());
    }

    fn erase_session() -> SampleSeries {
        let mut b = SessionBuilder::new(WritingStyle::default()).unwrap();
        b.text("AB\nCD\x0cEF").unwrap();
        b.erase(BBox::new(798.0, 842.0, -2.0, 32.0)).unwrap();
        b.text_at("T", (800.0, 0.0)).unwrap();
        b.erase(BBox::new(2000.0, 2040.0, 0.0, 30.0)).unwrap();
        add_noise(&b.finish().0, &NoiseModel::with_seed(9))
    }

    #[test]
    fn manifest_and_events_round_trip() {
        let series = erase_session();
        let p = process(&series, &PipelineConfig::default()).unwrap();
        assert_eq!(p.notes.pages.len(), 2);
        assert_eq!(p.notes.orphan_erases.len(), 1);
        assert_eq!(p.notes.pages[1].masks.len(), 1);
        assert_eq!(parse_manifest(&write_manifest(&p.notes), &series).unwrap(), p.notes);
        assert_eq!(parse_events(&write_events(&p.events)).unwrap(), p.events);
    }

    #[test]
    fn empty_manifest_round_trip() {
        let series = SampleSeries::new("", vec![]);
        let p = process(&series, &PipelineConfig::default()).unwrap();
        assert_eq!(parse_manifest(&write_manifest(&p.notes), &series).unwrap(), p.notes);
    }

    #[test]
    fn manifest_rejects_bad_references() {
        let (series, _) = synth_text("A", &WritingStyle::default()).unwrap();
        let text = "infranotes-notes v1\nsession s 0 1\npage 1 0 1\nline 1 1 0 1 0 1 0 1 5:99999:start:end\n";
        assert!(parse_manifest(text, &series).unwrap_err().to_string().starts_with("line 4:"));
        let text = "infranotes-notes v1\nsession s 0 1\nline 1 1 0 1 0 1 0 1 -\n";
        assert!(parse_manifest(text, &series).is_err());
    }

    #[test]
    fn index_round_trip() {
        let mut postings = BTreeMap::new();
        postings.insert("AB".to_string(), vec![Posting { page_id: 1, line_id: 2, start_t: 3.5 }]);
        let index = SearchIndex {
            clock_offset: 1.5,
            postings,
            page_intervals: vec![PageInterval { page_id: 1, start_t: 1.5, end_t: 9.0 }],
        };
        let texts: BTreeMap<u32, String> = [(2, "AB ?C".to_string()), (3, String::new())].into_iter().collect();
        assert_eq!(parse_index(&write_index(&index, &texts)).unwrap(), (index, texts));
    }

    #[test]
    fn trace_lists_every_sample() {
        let (series, _) = synth_text("A", &WritingStyle::default()).unwrap();
        let (strokes, trace) = infranotes_core::segment::segment_with_trace(&series, &Default::default());
        let text = write_trace(&series, &trace, &strokes);
        assert_eq!(text.lines().filter(|l| l.starts_with("sample ")).count(), series.len());
        assert_eq!(text.lines().filter(|l| l.starts_with("stroke ")).count(), strokes.len());
    }
}
