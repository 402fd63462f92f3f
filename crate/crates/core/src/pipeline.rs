//! The full processing chain from a sample series to assembled notes.

use alloc::vec::Vec;

use crate::assemble::{assemble, Notes};
use crate::classify::{classify_all, ClassifyConfig};
use crate::error::Result;
use crate::model::{SampleSeries, Stroke};
use crate::noteevents::{detect_events, EventConfig, NoteEvent};
use crate::segment::{segment, SegmentConfig};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PipelineConfig {
    pub segment: SegmentConfig,
    pub classify: ClassifyConfig,
    pub events: EventConfig,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        self.segment.validate()?;
        self.classify.validate()?;
        self.events.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Processed {
    /// Every segmented stroke with its class, in time order.
    pub strokes: Vec<Stroke>,
    pub events: Vec<NoteEvent>,
    pub notes: Notes,
}

pub fn process(series: &SampleSeries, cfg: &PipelineConfig) -> Result<Processed> {
    cfg.validate()?;
    let strokes = classify_all(&segment(series, &cfg.segment), &cfg.classify);
    let events = detect_events(&strokes, &cfg.events);
    let mut notes = assemble(&events, &strokes)?;
    notes.source_id = series.source_id.clone();
    if let (Some(s), Some(e)) = (series.start_t(), series.end_t()) {
        notes.start_t = notes.start_t.min(s);
        notes.end_t = notes.end_t.max(e);
        if let Some(p) = notes.pages.first_mut() {
            p.start_t = notes.start_t;
        }
        if let Some(p) = notes.pages.last_mut() {
            p.end_t = notes.end_t;
        }
    }
    Ok(Processed { strokes, events, notes })
}
