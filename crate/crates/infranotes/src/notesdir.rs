//! A processed session on disk: the stream, the notes manifest, the event
//! log, the search index, the segmentation trace and one SVG per page.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use infranotes_core::assemble::{compose_page, AsOf, Notes};
use infranotes_core::index::{build_index, recognize_lines, SearchIndex};
use infranotes_core::model::SampleSeries;
use infranotes_core::pipeline::{process, Processed};
use infranotes_core::recognize::{PrimitiveTable, StrokeCountTable};
use infranotes_core::segment::{segment_with_trace, SegmentTrace};

use crate::error::{Error, Result};
use crate::ingest::{parse_stream, write_stream};
use crate::render::{render_svg, SvgStyle};
use crate::store::{parse_index, parse_manifest, write_events, write_index, write_manifest, write_trace, Settings};

pub const STREAM_FILE: &str = "stream.v1";
pub const TRUTH_FILE: &str = "truth.v1";
pub const MANIFEST_FILE: &str = "notes.manifest";
pub const EVENTS_FILE: &str = "events.v1";
pub const INDEX_FILE: &str = "index.v1";
pub const TRACE_FILE: &str = "trace.v1";

pub fn page_file(page_id: u32) -> String {
    format!("page-{page_id}.svg")
}

#[derive(Clone, Debug)]
pub struct SessionOutput {
    pub processed: Processed,
    pub trace: SegmentTrace,
    pub texts: BTreeMap<u32, String>,
    pub index: SearchIndex,
}

/// Runs the whole chain on one series: notes, recognized line text and the
/// search index.
pub fn process_session(series: &SampleSeries, settings: &Settings) -> Result<SessionOutput> {
    let processed = process(series, &settings.pipeline)?;
    let (_, trace) = segment_with_trace(series, &settings.pipeline.segment);
    let texts = recognize_lines(&processed.notes, &PrimitiveTable::standard(), &StrokeCountTable::standard());
    let index = build_index(&processed.notes, &texts, settings.clock_offset);
    Ok(SessionOutput { processed, trace, texts, index })
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))
}

fn write_file(path: &Path, text: &str) -> Result<PathBuf> {
    fs::write(path, text).map_err(|e| Error::from(e).in_file(path))?;
    Ok(path.to_path_buf())
}

/// Writes every artifact into `dir`, creating it if needed. Returns the
/// paths written, in a fixed order.
pub fn write_notes_dir(dir: &Path, series: &SampleSeries, out: &SessionOutput, style: &SvgStyle) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::from(e).in_file(dir))?;
    let p = &out.processed;
    let mut written = vec![
        write_file(&dir.join(STREAM_FILE), &write_stream(series))?,
        write_file(&dir.join(MANIFEST_FILE), &write_manifest(&p.notes))?,
        write_file(&dir.join(EVENTS_FILE), &write_events(&p.events))?,
        write_file(&dir.join(INDEX_FILE), &write_index(&out.index, &out.texts))?,
        write_file(&dir.join(TRACE_FILE), &write_trace(series, &out.trace, &p.strokes))?,
    ];
    for page in &p.notes.pages {
        let svg = render_svg(&compose_page(page, AsOf::Latest)?, style);
        written.push(write_file(&dir.join(page_file(page.id)), &svg)?);
    }
    Ok(written)
}

pub fn load_notes(dir: &Path) -> Result<(SampleSeries, Notes)> {
    let stream_path = dir.join(STREAM_FILE);
    let series = parse_stream(&read_file(&stream_path)?, "").map_err(|e| e.in_file(&stream_path))?;
    let manifest_path = dir.join(MANIFEST_FILE);
    let notes = parse_manifest(&read_file(&manifest_path)?, &series).map_err(|e| e.in_file(&manifest_path))?;
    Ok((series, notes))
}

pub fn load_index(dir: &Path) -> Result<SearchIndex> {
    let path = dir.join(INDEX_FILE);
    Ok(parse_index(&read_file(&path)?).map_err(|e| e.in_file(&path))?.0)
}

/// SVG of one page as it looked at `as_of` (session time), or at its end.
pub fn render_page(dir: &Path, page_id: u32, as_of: Option<f64>, style: &SvgStyle) -> Result<String> {
    let (_, notes) = load_notes(dir)?;
    let page = notes.page(page_id)?;
    let scene = compose_page(page, as_of.map_or(AsOf::Latest, AsOf::At))?;
    Ok(render_svg(&scene, style))
}
