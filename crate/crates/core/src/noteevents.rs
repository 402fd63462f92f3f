//! Event detection over classified strokes: new lines, new pages, erase
//! regions and the writing that patches erased regions.

use alloc::vec::Vec;

use crate::assemble::Line;
use crate::error::{Error, Result};
use crate::model::{bbox_of, BBox, Stroke, StrokeClass};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EventConfig {
    /// A new line must start within this fraction of the line width from
    /// the line's left edge.
    pub newline_dx_fraction: f64,
    /// Lower bound for the leftward allowance (mm).
    pub newline_dx_floor: f64,
    /// The new stroke's top must lie this fraction of the line height below
    /// the line's bottom.
    pub newline_dy_fraction: f64,
    /// Upward jump, as a fraction of the column height, that starts a page.
    pub newpage_dy_fraction: f64,
    /// Lower bound for the upward jump (mm).
    pub newpage_dy_floor: f64,
    /// Rightward jump past the column that starts a page (mm).
    pub newpage_dx_jump: f64,
    /// Writing over an erased region within this many seconds patches it.
    pub mask_window: f64,
}

impl Default for EventConfig {
    fn default() -> Self {
        EventConfig {
            newline_dx_fraction: 0.5,
            newline_dx_floor: 40.0,
            newline_dy_fraction: 0.25,
            newpage_dy_fraction: 0.5,
            newpage_dy_floor: 150.0,
            newpage_dx_jump: 150.0,
            mask_window: 30.0,
        }
    }
}

impl EventConfig {
    pub fn validate(&self) -> Result<()> {
        let v = [
            self.newline_dx_fraction,
            self.newline_dx_floor,
            self.newline_dy_fraction,
            self.newpage_dy_fraction,
            self.newpage_dy_floor,
            self.newpage_dx_jump,
            self.mask_window,
        ];
        if v.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::InvalidConfig("event thresholds must be > 0"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NoteEventKind {
    NewLine,
    NewPage,
    EraseRegion,
    StrokeWritten,
}

impl NoteEventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NoteEventKind::NewLine => "newline",
            NoteEventKind::NewPage => "newpage",
            NoteEventKind::EraseRegion => "erase",
            NoteEventKind::StrokeWritten => "stroke",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [NoteEventKind::NewLine, NoteEventKind::NewPage, NoteEventKind::EraseRegion, NoteEventKind::StrokeWritten]
            .into_iter()
            .find(|k| k.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoteEvent {
    pub kind: NoteEventKind,
    pub t: f64,
    pub bbox: BBox,
    /// Index of the stroke written, or of the first stroke of an erase region.
    pub stroke: Option<usize>,
    /// For writing that patches an erased region: index of that region's event.
    pub overwrite: Option<usize>,
    /// End time of an erase region.
    pub end_t: f64,
}

impl NoteEvent {
    fn new(kind: NoteEventKind, t: f64, bbox: BBox, stroke: Option<usize>) -> Self {
        NoteEvent { kind, t, bbox, stroke, overwrite: None, end_t: t }
    }
}

fn grow(b: &mut Option<BBox>, with: &BBox) {
    *b = Some(b.map_or(*with, |a| a.union(with)));
}

/// Walks classified strokes in time order and emits the event log. The
/// log opens with a page event at the first stroke.
pub fn detect_events(strokes: &[Stroke], cfg: &EventConfig) -> Vec<NoteEvent> {
    let mut events = Vec::new();
    let t0 = strokes.first().map_or(0.0, |s| s.start_t);
    events.push(NoteEvent::new(NoteEventKind::NewPage, t0, BBox::point(0.0, 0.0), None));
    let mut page: Option<BBox> = None;
    let mut line: Option<BBox> = None;
    let mut erase_open: Option<usize> = None;
    let mut erases: Vec<usize> = Vec::new();

    for (i, s) in strokes.iter().enumerate() {
        let Ok(b) = bbox_of(s) else { continue };
        if s.class != StrokeClass::Erase {
            erase_open = None;
        }
        match s.class {
            StrokeClass::Erase => match erase_open {
                Some(e) => {
                    let ev: &mut NoteEvent = &mut events[e];
                    ev.bbox = ev.bbox.union(&b);
                    ev.end_t = s.end_t;
                }
                None => {
                    let mut ev = NoteEvent::new(NoteEventKind::EraseRegion, s.start_t, b, Some(i));
                    ev.end_t = s.end_t;
                    erase_open = Some(events.len());
                    erases.push(events.len());
                    events.push(ev);
                }
            },
            StrokeClass::OnBoard => {
                let patch = erases
                    .iter()
                    .rev()
                    .copied()
                    .find(|&e| s.start_t - events[e].end_t <= cfg.mask_window && events[e].bbox.intersects(&b));
                if let Some(e) = patch {
                    let mut ev = NoteEvent::new(NoteEventKind::StrokeWritten, s.start_t, b, Some(i));
                    ev.overwrite = Some(e);
                    events.push(ev);
                    continue;
                }
                if let Some(p) = page {
                    let rise = b.min_y - p.min_y;
                    let up = rise >= (cfg.newpage_dy_fraction * p.height()).max(cfg.newpage_dy_floor);
                    let across = b.min_x - p.max_x >= cfg.newpage_dx_jump;
                    if up || across {
                        events.push(NoteEvent::new(NoteEventKind::NewPage, s.start_t, b, Some(i)));
                        page = None;
                        line = None;
                    }
                }
                if let Some(l) = line {
                    let down = b.max_y < l.min_y - cfg.newline_dy_fraction * l.height();
                    let back = b.min_x <= l.min_x + (cfg.newline_dx_fraction * l.width()).max(cfg.newline_dx_floor);
                    if down && back {
                        events.push(NoteEvent::new(NoteEventKind::NewLine, s.start_t, b, Some(i)));
                        line = None;
                    }
                }
                grow(&mut page, &b);
                grow(&mut line, &b);
                events.push(NoteEvent::new(NoteEventKind::StrokeWritten, s.start_t, b, Some(i)));
            }
            _ => {}
        }
    }
    events
}

/// The line whose box overlaps the erased region the most.
pub fn assign_mask_target(erase_bbox: &BBox, lines: &[Line]) -> Result<u32> {
    let mut best: Option<(u32, f64)> = None;
    for l in lines {
        let a = l.bbox.overlap_area(erase_bbox);
        if a > 0.0 && best.is_none_or(|(_, b)| a > b) {
            best = Some((l.id, a));
        }
    }
    best.map(|(id, _)| id).ok_or(Error::OrphanErase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SamplePoint;
    use alloc::vec;

    fn stroke(t: f64, x0: f64, y0: f64, x1: f64, y1: f64, class: StrokeClass) -> Stroke {
        Stroke::from_samples(vec![SamplePoint::at(t, x0, y0, 0.0), SamplePoint::at(t + 0.2, x1, y1, 0.0)]).with_class(class)
    }

    fn letter(t: f64, x: f64, y: f64) -> Stroke {
        stroke(t, x, y, x + 40.0, y + 30.0, StrokeClass::OnBoard)
    }

    fn kinds(ev: &[NoteEvent]) -> Vec<NoteEventKind> {
        ev.iter().map(|e| e.kind).filter(|k| *k != NoteEventKind::StrokeWritten).collect()
    }

    #[test]
    fn sentinel_page_only_for_one_line() {
        let s = [letter(0.0, 0.0, 0.0), letter(1.0, 50.0, 0.0), letter(2.0, 100.0, 0.0)];
        let ev = detect_events(&s, &EventConfig::default());
        assert_eq!(kinds(&ev), vec![NoteEventKind::NewPage]);
        assert_eq!(ev.len(), 4);
        assert!(ev.windows(2).all(|w| w[0].t <= w[1].t));
    }

    #[test]
    fn new_line_after_moving_left_and_down() {
        let s = [letter(0.0, 0.0, 0.0), letter(1.0, 50.0, 0.0), letter(2.0, 0.0, -51.0)];
        let ev = detect_events(&s, &EventConfig::default());
        assert_eq!(kinds(&ev), vec![NoteEventKind::NewPage, NoteEventKind::NewLine]);
        assert_eq!(ev.iter().find(|e| e.kind == NoteEventKind::NewLine).unwrap().t, 2.0);
        let single = [letter(0.0, 0.0, 0.0), letter(2.0, 0.0, -51.0)];
        assert_eq!(kinds(&detect_events(&single, &EventConfig::default())), vec![NoteEventKind::NewPage, NoteEventKind::NewLine]);
    }

    #[test]
    fn new_page_on_column_jump_or_return_to_top() {
        let s = [letter(0.0, 0.0, 0.0), letter(2.0, 800.0, 0.0)];
        assert_eq!(kinds(&detect_events(&s, &EventConfig::default())), vec![NoteEventKind::NewPage; 2]);
        let mut s: Vec<Stroke> = (0..5).map(|i| letter(i as f64, 0.0, -51.0 * i as f64)).collect();
        s.push(letter(9.0, 0.0, 0.0));
        let k = kinds(&detect_events(&s, &EventConfig::default()));
        assert_eq!(k.iter().filter(|k| **k == NoteEventKind::NewLine).count(), 4);
        assert_eq!(k.last(), Some(&NoteEventKind::NewPage));
    }

    #[test]
    fn erase_sweeps_merge_and_patch_writing() {
        let s = [
            letter(0.0, 0.0, 0.0),
            letter(1.0, 0.0, -51.0),
            stroke(3.0, 0.0, -50.0, 45.0, -50.0, StrokeClass::Erase),
            stroke(3.2, 45.0, -40.0, 0.0, -25.0, StrokeClass::Erase),
            stroke(3.5, 0.0, 0.0, 0.0, 5.0, StrokeClass::OffBoard),
            letter(4.0, 2.0, -50.0),
            letter(40.0, 2.0, -50.0),
        ];
        let ev = detect_events(&s, &EventConfig::default());
        let erase: Vec<usize> = (0..ev.len()).filter(|&i| ev[i].kind == NoteEventKind::EraseRegion).collect();
        assert_eq!(erase.len(), 1);
        let e = ev[erase[0]];
        assert_eq!((e.bbox.min_y, e.bbox.max_y), (-50.0, -25.0));
        assert!((e.end_t - 3.4).abs() < 1e-9);
        let writes: Vec<&NoteEvent> = ev.iter().filter(|e| e.kind == NoteEventKind::StrokeWritten).collect();
        assert_eq!(writes[2].overwrite, Some(erase[0]));
        assert_eq!(writes[3].overwrite, None);
    }

    #[test]
    fn dropping_erase_keeps_layout_events() {
        let base = vec![letter(0.0, 0.0, 0.0), letter(1.0, 50.0, 0.0), letter(2.0, 0.0, -51.0), letter(3.0, 50.0, -51.0)];
        let mut with = base.clone();
        with.insert(2, stroke(1.5, 50.0, 0.0, 90.0, 30.0, StrokeClass::Erase));
        let layout = |ev: Vec<NoteEvent>| {
            ev.into_iter()
                .filter(|e| matches!(e.kind, NoteEventKind::NewLine | NoteEventKind::NewPage))
                .map(|e| (e.kind, e.t))
                .collect::<Vec<_>>()
        };
        let cfg = EventConfig::default();
        assert_eq!(layout(detect_events(&base, &cfg)), layout(detect_events(&with, &cfg)));
    }

    fn line(id: u32, bbox: BBox) -> Line {
        Line { id, page_id: 1, strokes: Vec::new(), bbox, created_t: 0.0, closed_t: 1.0 }
    }

    #[test]
    fn mask_target_by_overlap() {
        let lines = [line(1, BBox::new(0.0, 100.0, 0.0, 30.0)), line(2, BBox::new(0.0, 100.0, -51.0, -21.0))];
        assert_eq!(assign_mask_target(&BBox::new(10.0, 40.0, -50.0, -25.0), &lines), Ok(2));
        let spanning = BBox::new(0.0, 10.0, -30.0, 3.0);
        assert_eq!(assign_mask_target(&spanning, &lines), Ok(2));
        let spanning = BBox::new(0.0, 10.0, -24.0, 10.0);
        assert_eq!(assign_mask_target(&spanning, &lines), Ok(1));
        assert_eq!(assign_mask_target(&BBox::new(500.0, 600.0, 0.0, 10.0), &lines), Err(Error::OrphanErase));
    }
}
