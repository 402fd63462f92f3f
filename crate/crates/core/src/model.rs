//! Domain types shared by every stage of the pipeline.
//!
//! Board coordinates are millimeters: `x` grows left to right along the
//! board, `y` grows bottom to top and `z` is the distance from the board
//! surface (0 at contact). Times are seconds.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }
}

/// One sensor frame observation of the tracked writing tip.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplePoint {
    pub t: f64,
    pub pos: Vec3,
    pub vel: Vec3,
    /// Number of tips tracked in this frame. An eraser shows up as two.
    pub frame_points: u32,
}

impl SamplePoint {
    pub fn new(t: f64, pos: Vec3, vel: Vec3, frame_points: u32) -> Self {
        SamplePoint { t, pos, vel, frame_points }
    }

    /// Position with zero velocity and a single tracked tip.
    pub fn at(t: f64, x: f64, y: f64, z: f64) -> Self {
        SamplePoint { t, pos: Vec3::new(x, y, z), vel: Vec3::ZERO, frame_points: 1 }
    }
}

/// Speed in the board plane.
pub fn xy_speed(p: &SamplePoint) -> f64 {
    libm::hypot(p.vel.x, p.vel.y)
}

/// Speed toward or away from the board.
pub fn z_speed(p: &SamplePoint) -> f64 {
    libm::fabs(p.vel.z)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SampleSeries {
    pub samples: Vec<SamplePoint>,
    pub source_id: String,
}

impl SampleSeries {
    pub fn new(source_id: impl Into<String>, samples: Vec<SamplePoint>) -> Self {
        SampleSeries { samples, source_id: source_id.into() }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn start_t(&self) -> Option<f64> {
        self.samples.first().map(|s| s.t)
    }

    pub fn end_t(&self) -> Option<f64> {
        self.samples.last().map(|s| s.t)
    }

    /// Recomputes every velocity from positions by finite differences.
    pub fn derive_velocities(&mut self) {
        derive_velocities(&mut self.samples);
    }
}

/// Central differences in the interior, one-sided at both ends. Frames that
/// share a timestamp get zero velocity.
pub fn derive_velocities(samples: &mut [SamplePoint]) {
    let n = samples.len();
    if n < 2 {
        for s in samples.iter_mut() {
            s.vel = Vec3::ZERO;
        }
        return;
    }
    let diff = |a: &SamplePoint, b: &SamplePoint| {
        let dt = b.t - a.t;
        if dt <= 0.0 {
            Vec3::ZERO
        } else {
            Vec3::new((b.pos.x - a.pos.x) / dt, (b.pos.y - a.pos.y) / dt, (b.pos.z - a.pos.z) / dt)
        }
    };
    let mut vel = Vec::with_capacity(n);
    vel.push(diff(&samples[0], &samples[1]));
    for i in 1..n - 1 {
        vel.push(diff(&samples[i - 1], &samples[i + 1]));
    }
    vel.push(diff(&samples[n - 2], &samples[n - 1]));
    for (s, v) in samples.iter_mut().zip(vel) {
        s.vel = v;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrokeClass {
    Unclassified,
    OnBoard,
    OffBoard,
    Erase,
}

impl StrokeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            StrokeClass::Unclassified => "unclassified",
            StrokeClass::OnBoard => "onboard",
            StrokeClass::OffBoard => "offboard",
            StrokeClass::Erase => "erase",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "unclassified" => StrokeClass::Unclassified,
            "onboard" => StrokeClass::OnBoard,
            "offboard" => StrokeClass::OffBoard,
            "erase" => StrokeClass::Erase,
            _ => return None,
        })
    }
}

/// Which detector placed a stroke boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryCause {
    SeriesStart,
    SeriesEnd,
    SharpAngle,
    SlowSpeed,
    ZJump,
}

impl BoundaryCause {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryCause::SeriesStart => "start",
            BoundaryCause::SeriesEnd => "end",
            BoundaryCause::SharpAngle => "angle",
            BoundaryCause::SlowSpeed => "slow",
            BoundaryCause::ZJump => "zjump",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            BoundaryCause::SeriesStart,
            BoundaryCause::SeriesEnd,
            BoundaryCause::SharpAngle,
            BoundaryCause::SlowSpeed,
            BoundaryCause::ZJump,
        ]
        .into_iter()
        .find(|c| c.as_str() == s)
    }
}

/// A contiguous run of samples `[start_index, end_index)` of a parent series.
#[derive(Clone, Debug, PartialEq)]
pub struct Stroke {
    pub samples: Vec<SamplePoint>,
    pub start_index: usize,
    pub end_index: usize,
    pub class: StrokeClass,
    pub start_t: f64,
    pub end_t: f64,
    pub start_cause: BoundaryCause,
    pub end_cause: BoundaryCause,
}

impl Stroke {
    /// Copies `series[start..end]` into an unclassified stroke.
    pub fn from_range(series: &[SamplePoint], start: usize, end: usize) -> Self {
        let samples = series[start..end].to_vec();
        let start_t = samples.first().map_or(0.0, |s| s.t);
        let end_t = samples.last().map_or(start_t, |s| s.t);
        Stroke {
            samples,
            start_index: start,
            end_index: end,
            class: StrokeClass::Unclassified,
            start_t,
            end_t,
            start_cause: BoundaryCause::SeriesStart,
            end_cause: BoundaryCause::SeriesEnd,
        }
    }

    /// A free-standing stroke, indexed as if it were its own series.
    pub fn from_samples(samples: Vec<SamplePoint>) -> Self {
        let n = samples.len();
        let mut s = Stroke::from_range(&samples, 0, n);
        s.samples = samples;
        s
    }

    pub fn with_class(mut self, class: StrokeClass) -> Self {
        self.class = class;
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn bbox(&self) -> Result<BBox> {
        bbox_of(self)
    }

    /// Total polyline length in the board plane.
    pub fn path_length(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| libm::hypot(w[1].pos.x - w[0].pos.x, w[1].pos.y - w[0].pos.y))
            .sum()
    }
}

/// Axis-aligned box in the board plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
}

impl BBox {
    pub fn new(min_x: f64, max_x: f64, min_y: f64, max_y: f64) -> Self {
        BBox { min_x, max_x, min_y, max_y }
    }

    pub fn point(x: f64, y: f64) -> Self {
        BBox { min_x: x, max_x: x, min_y: y, max_y: y }
    }

    pub fn include(&mut self, x: f64, y: f64) {
        self.min_x = self.min_x.min(x);
        self.max_x = self.max_x.max(x);
        self.min_y = self.min_y.min(y);
        self.max_y = self.max_y.max(y);
    }

    pub fn union(&self, other: &BBox) -> BBox {
        BBox {
            min_x: self.min_x.min(other.min_x),
            max_x: self.max_x.max(other.max_x),
            min_y: self.min_y.min(other.min_y),
            max_y: self.max_y.max(other.max_y),
        }
    }

    /// Overlapping region, `None` when the boxes do not touch.
    pub fn intersection(&self, other: &BBox) -> Option<BBox> {
        let b = BBox {
            min_x: self.min_x.max(other.min_x),
            max_x: self.max_x.min(other.max_x),
            min_y: self.min_y.max(other.min_y),
            max_y: self.max_y.min(other.max_y),
        };
        (b.min_x <= b.max_x && b.min_y <= b.max_y).then_some(b)
    }

    pub fn intersects(&self, other: &BBox) -> bool {
        self.intersection(other).is_some()
    }

    pub fn overlap_area(&self, other: &BBox) -> f64 {
        self.intersection(other).map_or(0.0, |b| b.area())
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.min_x && x <= self.max_x && y >= self.min_y && y <= self.max_y
    }

    /// Union of the boxes, `None` for an empty iterator.
    pub fn union_all<'a>(boxes: impl IntoIterator<Item = &'a BBox>) -> Option<BBox> {
        boxes.into_iter().fold(None, |acc: Option<BBox>, b| Some(acc.map_or(*b, |a| a.union(b))))
    }
}

pub fn bbox_of(stroke: &Stroke) -> Result<BBox> {
    bbox_of_samples(&stroke.samples)
}

pub fn bbox_of_samples(samples: &[SamplePoint]) -> Result<BBox> {
    let first = samples.first().ok_or(Error::EmptyStroke)?;
    let mut b = BBox::point(first.pos.x, first.pos.y);
    for s in &samples[1..] {
        b.include(s.pos.x, s.pos.y);
    }
    Ok(b)
}

/// On-board strokes that make up one glyph.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterGroup {
    pub strokes: Vec<Stroke>,
    pub bbox: BBox,
}

impl CharacterGroup {
    pub fn new(strokes: Vec<Stroke>) -> Result<Self> {
        let mut bbox: Option<BBox> = None;
        for s in &strokes {
            let b = bbox_of(s)?;
            bbox = Some(bbox.map_or(b, |a| a.union(&b)));
        }
        let bbox = bbox.ok_or(Error::EmptyStroke)?;
        Ok(CharacterGroup { strokes, bbox })
    }
}
