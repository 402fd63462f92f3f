//! Folds the event log into pages of lines and masks, and composes the
//! visible content of a page at a point in time.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::model::{bbox_of, BBox, Stroke};
use crate::noteevents::{NoteEvent, NoteEventKind};

#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    pub id: u32,
    pub page_id: u32,
    pub strokes: Vec<Stroke>,
    pub bbox: BBox,
    pub created_t: f64,
    pub closed_t: f64,
}

/// New writing that replaces an erased part of one line.
#[derive(Clone, Debug, PartialEq)]
pub struct Mask {
    pub id: u32,
    pub page_id: u32,
    pub target_line_id: u32,
    pub strokes: Vec<Stroke>,
    pub erase_bbox: BBox,
    pub bbox: BBox,
    pub created_t: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Page {
    pub id: u32,
    pub start_t: f64,
    pub end_t: f64,
    pub lines: Vec<Line>,
    pub masks: Vec<Mask>,
}

impl Page {
    pub fn line(&self, id: u32) -> Option<&Line> {
        self.lines.iter().find(|l| l.id == id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrphanErase {
    pub t: f64,
    pub bbox: BBox,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Notes {
    pub source_id: String,
    pub start_t: f64,
    pub end_t: f64,
    pub pages: Vec<Page>,
    pub orphan_erases: Vec<OrphanErase>,
}

impl Notes {
    pub fn page(&self, id: u32) -> Result<&Page> {
        self.pages.iter().find(|p| p.id == id).ok_or(Error::UnknownPage(id))
    }

    /// The page on screen at session time `t`.
    pub fn page_at(&self, t: f64) -> Result<&Page> {
        if !(t >= self.start_t && t <= self.end_t) {
            return Err(Error::OutOfSession(t));
        }
        Ok(self.pages.iter().rev().find(|p| p.start_t <= t).unwrap_or(&self.pages[0]))
    }

    pub fn lines(&self) -> impl Iterator<Item = &Line> {
        self.pages.iter().flat_map(|p| p.lines.iter())
    }

    pub fn masks(&self) -> impl Iterator<Item = &Mask> {
        self.pages.iter().flat_map(|p| p.masks.iter())
    }
}

struct Builder<'a> {
    strokes: &'a [Stroke],
    start_t: f64,
    pages: Vec<Page>,
    open_line: Option<usize>,
    next_line: u32,
    next_mask: u32,
    erase_masks: BTreeMap<usize, Vec<usize>>,
    orphans: Vec<OrphanErase>,
}

impl Builder<'_> {
    fn page(&mut self, t: f64) -> &mut Page {
        if self.pages.is_empty() {
            self.open_page(t);
        }
        self.pages.last_mut().unwrap()
    }

    fn open_page(&mut self, t: f64) {
        self.close_line(t);
        let start = if self.pages.is_empty() { self.start_t.min(t) } else { t };
        if let Some(p) = self.pages.last_mut() {
            p.end_t = t;
        }
        let id = self.pages.len() as u32 + 1;
        self.pages.push(Page { id, start_t: start, end_t: t, lines: Vec::new(), masks: Vec::new() });
    }

    fn close_line(&mut self, t: f64) {
        if let (Some(i), Some(p)) = (self.open_line.take(), self.pages.last_mut()) {
            p.lines[i].closed_t = t;
        }
    }

    fn erase(&mut self, idx: usize, ev: &NoteEvent) -> Result<()> {
        let page = self.page(ev.t);
        let page_id = page.id;
        let targets: Vec<u32> =
            page.lines.iter().filter(|l| l.bbox.overlap_area(&ev.bbox) > 0.0).map(|l| l.id).collect();
        if targets.is_empty() {
            if let Some(l) = self.pages.iter().flat_map(|p| &p.lines).find(|l| l.bbox.overlap_area(&ev.bbox) > 0.0) {
                return Err(Error::CrossPageMask { mask_page: page_id, line_page: l.page_id });
            }
            self.orphans.push(OrphanErase { t: ev.t, bbox: ev.bbox });
            return Ok(());
        }
        let mut made = Vec::new();
        for target in targets {
            let page = self.pages.last_mut().unwrap();
            made.push(page.masks.len());
            page.masks.push(Mask {
                id: self.next_mask,
                page_id,
                target_line_id: target,
                strokes: Vec::new(),
                erase_bbox: ev.bbox,
                bbox: ev.bbox,
                created_t: ev.t,
            });
            self.next_mask += 1;
        }
        self.erase_masks.insert(idx, made);
        Ok(())
    }

    fn write(&mut self, ev: &NoteEvent) -> Result<()> {
        let Some(si) = ev.stroke else { return Ok(()) };
        let stroke = &self.strokes[si];
        let b = bbox_of(stroke)?;
        let masks = ev.overwrite.and_then(|e| self.erase_masks.get(&e)).cloned().unwrap_or_default();
        let open = self.open_line;
        let next_line = self.next_line;
        let page = self.page(ev.t);
        if !masks.is_empty() {
            let overlap = |mi: &usize, with: &BBox| {
                let target = page.masks[*mi].target_line_id;
                page.line(target).map_or(0.0, |l| l.bbox.overlap_area(with))
            };
            let erase_box = page.masks[masks[0]].erase_bbox;
            let mut best = masks[0];
            let (mut best_s, mut best_e) = (overlap(&best, &b), overlap(&best, &erase_box));
            for mi in &masks[1..] {
                let (s, e) = (overlap(mi, &b), overlap(mi, &erase_box));
                if s > best_s || (s == best_s && e > best_e) {
                    (best, best_s, best_e) = (*mi, s, e);
                }
            }
            let m = &mut page.masks[best];
            m.bbox = m.bbox.union(&b);
            m.strokes.push(stroke.clone());
            return Ok(());
        }
        let page_id = page.id;
        match open {
            Some(i) => {
                let l = &mut page.lines[i];
                l.bbox = l.bbox.union(&b);
                l.strokes.push(stroke.clone());
            }
            None => {
                let i = page.lines.len();
                page.lines.push(Line {
                    id: next_line,
                    page_id,
                    strokes: alloc::vec![stroke.clone()],
                    bbox: b,
                    created_t: stroke.start_t,
                    closed_t: stroke.end_t,
                });
                self.open_line = Some(i);
                self.next_line += 1;
            }
        }
        Ok(())
    }
}

/// Builds the page/line/mask structure from an event log and the strokes
/// it indexes. The session spans the first to the last stroke.
pub fn assemble(events: &[NoteEvent], strokes: &[Stroke]) -> Result<Notes> {
    let start_t = strokes.first().map(|s| s.start_t).or(events.first().map(|e| e.t)).unwrap_or(0.0);
    let end_t = strokes
        .iter()
        .map(|s| s.end_t)
        .chain(events.iter().map(|e| e.end_t))
        .fold(start_t, f64::max);
    let mut b = Builder {
        strokes,
        start_t,
        pages: Vec::new(),
        open_line: None,
        next_line: 1,
        next_mask: 1,
        erase_masks: BTreeMap::new(),
        orphans: Vec::new(),
    };
    for (i, ev) in events.iter().enumerate() {
        match ev.kind {
            NoteEventKind::NewPage => b.open_page(ev.t),
            NoteEventKind::NewLine => b.close_line(ev.t),
            NoteEventKind::EraseRegion => b.erase(i, ev)?,
            NoteEventKind::StrokeWritten => b.write(ev)?,
        }
    }
    b.close_line(end_t);
    b.page(start_t).end_t = end_t;
    Ok(Notes { source_id: String::new(), start_t, end_t, pages: b.pages, orphan_erases: b.orphans })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AsOf {
    Latest,
    At(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayerKind {
    Line,
    Mask,
}

/// One drawable object. Points of its strokes that fall inside a hole are
/// hidden by later masks.
#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub kind: LayerKind,
    pub id: u32,
    pub target_line_id: u32,
    pub created_t: f64,
    pub bbox: BBox,
    pub strokes: Vec<Vec<Point>>,
    pub holes: Vec<BBox>,
}

impl Layer {
    pub fn is_visible(&self, p: Point) -> bool {
        !self.holes.iter().any(|h| h.contains(p.0, p.1))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SceneGraph {
    pub page_id: u32,
    pub as_of: f64,
    pub layers: Vec<Layer>,
}

impl SceneGraph {
    pub fn bbox(&self) -> Option<BBox> {
        BBox::union_all(self.layers.iter().map(|l| &l.bbox))
    }
}

fn visible_strokes(strokes: &[Stroke], t: f64) -> Vec<&Stroke> {
    strokes.iter().filter(|s| s.start_t <= t).collect()
}

fn polyline(s: &Stroke) -> Vec<Point> {
    s.samples.iter().map(|p| (p.pos.x, p.pos.y)).collect()
}

/// Lines drawn in creation order, then masks in creation order, each mask
/// blanking its target line and earlier masks on the same line.
pub fn compose_page(page: &Page, as_of: AsOf) -> Result<SceneGraph> {
    let t = match as_of {
        AsOf::Latest => page.end_t,
        AsOf::At(t) => t,
    };
    if t < page.start_t {
        return Err(Error::BeforePage { as_of: t, page_start: page.start_t });
    }
    let mut layers = Vec::new();
    for l in page.lines.iter().filter(|l| l.created_t <= t) {
        let s = visible_strokes(&l.strokes, t);
        let Some(bbox) = BBox::union_all(s.iter().filter_map(|s| bbox_of(s).ok()).collect::<Vec<_>>().iter()) else {
            continue;
        };
        layers.push(Layer {
            kind: LayerKind::Line,
            id: l.id,
            target_line_id: l.id,
            created_t: l.created_t,
            bbox,
            strokes: s.into_iter().map(polyline).collect(),
            holes: Vec::new(),
        });
    }
    let mut masks: Vec<&Mask> = page.masks.iter().filter(|m| m.created_t <= t).collect();
    masks.sort_by(|a, b| a.created_t.total_cmp(&b.created_t).then(a.id.cmp(&b.id)));
    for m in masks {
        let Some(target) = layers.iter().position(|l| l.kind == LayerKind::Line && l.id == m.target_line_id) else {
            continue;
        };
        let s = visible_strokes(&m.strokes, t);
        let bbox = s.iter().filter_map(|s| bbox_of(s).ok()).fold(m.erase_bbox, |a, b| a.union(&b));
        if let Some(hole) = bbox.intersection(&layers[target].bbox) {
            for l in layers.iter_mut().filter(|l| l.target_line_id == m.target_line_id) {
                l.holes.push(hole);
            }
        }
        layers.push(Layer {
            kind: LayerKind::Mask,
            id: m.id,
            target_line_id: m.target_line_id,
            created_t: m.created_t,
            bbox,
            strokes: s.into_iter().map(polyline).collect(),
            holes: Vec::new(),
        });
    }
    Ok(SceneGraph { page_id: page.id, as_of: t, layers })
}
