//! Scoring against ground truth: boundary matching, box matching and the
//! stage-by-stage recognition ablation.

use alloc::vec::Vec;

use crate::classify::classify_all;
use crate::error::Result;
use crate::group::group;
use crate::model::{BBox, CharacterGroup, SampleSeries, Stroke, StrokeClass};
use crate::pipeline::{process, PipelineConfig};
use crate::recognize::{recognize_group, rerank_stroke_count, PrimitiveTable, Rerank, StrokeCountTable};
use crate::segment::segment;
use crate::truth::{CandidateList, GroundTruth};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BoundaryScore {
    pub matched: usize,
    pub predicted: usize,
    pub truth: usize,
}

impl BoundaryScore {
    pub fn precision(&self) -> f64 {
        if self.predicted == 0 {
            1.0
        } else {
            self.matched as f64 / self.predicted as f64
        }
    }

    pub fn recall(&self) -> f64 {
        if self.truth == 0 {
            1.0
        } else {
            self.matched as f64 / self.truth as f64
        }
    }

    pub fn add(&mut self, other: BoundaryScore) {
        self.matched += other.matched;
        self.predicted += other.predicted;
        self.truth += other.truth;
    }
}

/// One-to-one matching of sorted boundary indices within `tolerance` samples.
pub fn match_boundaries(predicted: &[usize], truth: &[usize], tolerance: usize) -> BoundaryScore {
    let (mut i, mut j, mut matched) = (0, 0, 0);
    while i < predicted.len() && j < truth.len() {
        let (p, t) = (predicted[i], truth[j]);
        if p.abs_diff(t) <= tolerance {
            matched += 1;
            i += 1;
            j += 1;
        } else if p < t {
            i += 1;
        } else {
            j += 1;
        }
    }
    BoundaryScore { matched, predicted: predicted.len(), truth: truth.len() }
}

/// Start indices of every stroke after the first.
pub fn stroke_boundaries(strokes: &[Stroke]) -> Vec<usize> {
    strokes.iter().skip(1).map(|s| s.start_index).collect()
}

pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let inter = a.overlap_area(b);
    let union = a.area() + b.area() - inter;
    if union > 0.0 {
        inter / union
    } else {
        0.0
    }
}

fn pad(b: &BBox, by: f64) -> BBox {
    BBox::new(b.min_x - by, b.max_x + by, b.min_y - by, b.max_y + by)
}

/// Greedy one-to-one pairing by descending IoU. Boxes are padded by 1 mm
/// so that thin glyphs still overlap. Returns `(predicted, truth)` pairs.
pub fn match_boxes(predicted: &[BBox], truth: &[BBox], min_iou: f64) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for (i, p) in predicted.iter().enumerate() {
        for (j, t) in truth.iter().enumerate() {
            let v = iou(&pad(p, 1.0), &pad(t, 1.0));
            if v >= min_iou {
                pairs.push((v, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let (mut used_p, mut used_t) = (Vec::new(), Vec::new());
    let mut out = Vec::new();
    for (_, i, j) in pairs {
        if !used_p.contains(&i) && !used_t.contains(&j) {
            used_p.push(i);
            used_t.push(j);
            out.push((i, j));
        }
    }
    out.sort_unstable();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Raw,
    Segmentation,
    Classification,
    Grouping,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Raw, Stage::Segmentation, Stage::Classification, Stage::Grouping];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Raw => "Raw",
            Stage::Segmentation => "Segmentation",
            Stage::Classification => "Classification",
            Stage::Grouping => "Grouping",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StageScore {
    pub stage: Stage,
    pub glyphs: usize,
    pub pt_correct: usize,
    /// Only counted when candidate lists are supplied.
    pub osn_correct: Option<usize>,
}

impl StageScore {
    pub fn pt_accuracy(&self) -> f64 {
        ratio(self.pt_correct, self.glyphs)
    }

    pub fn osn_accuracy(&self) -> Option<f64> {
        self.osn_correct.map(|c| ratio(c, self.glyphs))
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// A labeled session, optionally with one recognizer candidate list per
/// glyph id.
#[derive(Clone, Debug)]
pub struct LabeledSession {
    pub series: SampleSeries,
    pub truth: GroundTruth,
    pub candidates: Option<Vec<CandidateList>>,
}

struct Tally<'a> {
    table: &'a PrimitiveTable,
    counts: &'a StrokeCountTable,
    glyphs: usize,
    pt: usize,
    osn: usize,
}

impl Tally<'_> {
    fn score(&mut self, g: &CharacterGroup, letter: char, list: Option<&CandidateList>) {
        if recognize_group(g, None, self.table, self.counts).letter == Some(letter) {
            self.pt += 1;
        }
        if let Some(l) = list {
            if rerank_stroke_count(l, g.strokes.len(), self.counts, true) == Rerank::Symbol(letter) {
                self.osn += 1;
            }
        }
    }
}

/// Candidate character groups as each stage would see them: the raw series
/// as a single group, every stroke on its own after segmentation, every
/// on-board stroke on its own after classification, and the grouped lines
/// of the full pipeline.
pub fn stage_groups(series: &SampleSeries, stage: Stage, cfg: &PipelineConfig) -> Result<Vec<CharacterGroup>> {
    let singles = |strokes: Vec<Stroke>| strokes.into_iter().filter_map(|s| CharacterGroup::new(alloc::vec![s]).ok()).collect();
    Ok(match stage {
        Stage::Raw if series.is_empty() => Vec::new(),
        Stage::Raw => singles(alloc::vec![Stroke::from_range(&series.samples, 0, series.len())]),
        Stage::Segmentation => singles(segment(series, &cfg.segment)),
        Stage::Classification => singles(
            classify_all(&segment(series, &cfg.segment), &cfg.classify)
                .into_iter()
                .filter(|s| s.class == StrokeClass::OnBoard)
                .collect(),
        ),
        Stage::Grouping => process(series, cfg)?.notes.lines().flat_map(|l| group(&l.strokes)).collect(),
    })
}

/// Recognition accuracy after each processing stage. Each truth glyph is
/// judged on the stage's group that best overlaps it; glyphs with no
/// overlapping group count as misses.
pub fn ablation(
    corpus: &[LabeledSession],
    cfg: &PipelineConfig,
    table: &PrimitiveTable,
    counts: &StrokeCountTable,
) -> Result<Vec<StageScore>> {
    cfg.validate()?;
    let with_osn = !corpus.is_empty() && corpus.iter().all(|s| s.candidates.is_some());
    let mut out = Vec::new();
    for stage in Stage::ALL {
        let mut tally = Tally { table, counts, glyphs: 0, pt: 0, osn: 0 };
        for session in corpus {
            let truth = &session.truth;
            tally.glyphs += truth.glyphs.len();
            let groups = stage_groups(&session.series, stage, cfg)?;
            let boxes: Vec<BBox> = groups.iter().map(|g| g.bbox).collect();
            let truth_boxes: Vec<BBox> = truth.glyphs.iter().map(|g| g.bbox).collect();
            for (gi, ti) in match_boxes(&boxes, &truth_boxes, 0.5) {
                let g = &truth.glyphs[ti];
                let list = session.candidates.as_ref().and_then(|c| c.get(g.id as usize));
                tally.score(&groups[gi], g.letter, list);
            }
        }
        out.push(StageScore {
            stage,
            glyphs: tally.glyphs,
            pt_correct: tally.pt,
            osn_correct: with_osn.then_some(tally.osn),
        });
    }
    Ok(out)
}
