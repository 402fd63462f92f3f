//! Deterministic synthetic board writing with ground truth.
//!
//! A session is built as a timeline of motions (pen strokes, air transits
//! and eraser sweeps) that is sampled on a fixed clock. Every sample falls in
//! exactly one labeled span.

mod glyphs;
mod motion;

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

pub use glyphs::{GlyphPlan, PenStroke, Piece, Shape};
use motion::{ease, ArcTable, Profile};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::model::{bbox_of_samples, BBox, SamplePoint, SampleSeries, StrokeClass, Vec3};
use crate::truth::{GroundTruth, TruthEvent, TruthEventKind, TruthGlyph, TruthSpan};

/// Gaussian sensor noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    pub sigma_xy: f64,
    pub sigma_z: f64,
    pub seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel { sigma_xy: 0.35, sigma_z: 0.14, seed: 0 }
    }
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel { sigma_xy: 0.0, sigma_z: 0.0, seed: 0 };

    pub fn with_seed(seed: u64) -> Self {
        NoiseModel { seed, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WritingStyle {
    pub letter_width: f64,
    pub letter_height: f64,
    pub spacing: f64,
    pub write_speed: f64,
    /// Speed at the start and end of every pen stroke.
    pub start_speed: f64,
    pub ramp_time: f64,
    pub lift_height: f64,
    pub lift_time: f64,
    /// Peak transit speed as a multiple of `write_speed`.
    pub transit_speed: f64,
    pub min_transit_time: f64,
    pub sample_rate: f64,
    pub tilt_deg: f64,
    pub line_pitch: f64,
    /// Horizontal distance between board columns.
    pub page_pitch: f64,
    /// Stop at corners inside a pen-down stroke.
    pub corner_pause: bool,
}

impl Default for WritingStyle {
    fn default() -> Self {
        WritingStyle {
            letter_width: 40.0,
            letter_height: 30.0,
            spacing: 10.0,
            write_speed: 150.0,
            start_speed: 5.0,
            ramp_time: 0.08,
            lift_height: 8.0,
            lift_time: 0.08,
            transit_speed: 2.0,
            min_transit_time: 0.3,
            sample_rate: 100.0,
            tilt_deg: 0.0,
            line_pitch: 51.0,
            page_pitch: 800.0,
            corner_pause: true,
        }
    }
}

impl WritingStyle {
    pub fn validate(&self) -> Result<()> {
        if !(self.spacing >= 0.0) {
            return Err(Error::InvalidConfig("spacing must be >= 0"));
        }
        if !(30.0..=200.0).contains(&self.sample_rate) {
            return Err(Error::InvalidConfig("sample_rate must lie in [30, 200]"));
        }
        let positive = [
            self.letter_width,
            self.letter_height,
            self.write_speed,
            self.start_speed,
            self.ramp_time,
            self.lift_height,
            self.lift_time,
            self.transit_speed,
            self.min_transit_time,
        ];
        if positive.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidConfig("style dimensions, speeds and times must be > 0"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
enum Motion {
    Path { table: ArcTable, profile: Profile },
    Transit { from: Point, to: Point, z0: f64, z1: f64, lift: f64, lift_time: f64, duration: f64 },
}

impl Motion {
    fn duration(&self) -> f64 {
        match self {
            Motion::Path { profile, .. } => profile.duration(),
            Motion::Transit { duration, .. } => *duration,
        }
    }

    fn eval(&self, dt: f64) -> Vec3 {
        match self {
            Motion::Path { table, profile } => {
                let (x, y) = table.at(profile.distance(dt));
                Vec3::new(x, y, 0.0)
            }
            Motion::Transit { from, to, z0, z1, lift, lift_time, duration } => {
                let u = ease(dt / duration);
                let up = if *z0 > 0.0 { *lift } else { lift * ease(dt / lift_time) };
                let down = if *z1 > 0.0 { *lift } else { lift * ease((duration - dt) / lift_time) };
                Vec3::new(from.0 + (to.0 - from.0) * u, from.1 + (to.1 - from.1) * u, up.min(down))
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Timed {
    t0: f64,
    t1: f64,
    motion: Motion,
    frame_points: u32,
}

#[derive(Clone, Copy, Debug)]
struct Label {
    t0: f64,
    class: StrokeClass,
    glyph: Option<u32>,
}

/// Incremental builder for a synthetic writing session.
#[derive(Clone, Debug)]
pub struct SessionBuilder {
    style: WritingStyle,
    air_ends: bool,
    motions: Vec<Timed>,
    labels: Vec<Label>,
    glyphs: Vec<(u32, char)>,
    events: Vec<(TruthEventKind, f64)>,
    t: f64,
    /// Tool position in the board plane and its height.
    at: Option<(Point, f64)>,
    next_glyph: u32,
    cursor: Point,
    line: usize,
    page: usize,
    written: bool,
    pending: Option<TruthEventKind>,
}

const AIR_OFFSET: f64 = 15.0;
const ERASE_ROW_STEP: f64 = 10.0;
const PIECE_RESOLUTION: usize = 128;

impl SessionBuilder {
    /// A builder whose session starts and ends with the tool in the air.
    pub fn new(style: WritingStyle) -> Result<Self> {
        style.validate()?;
        Ok(SessionBuilder {
            style,
            air_ends: true,
            motions: Vec::new(),
            labels: Vec::new(),
            glyphs: Vec::new(),
            events: Vec::new(),
            t: 0.0,
            at: None,
            next_glyph: 0,
            cursor: (0.0, 0.0),
            line: 0,
            page: 0,
            written: false,
            pending: None,
        })
    }

    /// A builder whose first motion starts on the board.
    pub fn bare(style: WritingStyle) -> Result<Self> {
        let mut b = Self::new(style)?;
        b.air_ends = false;
        Ok(b)
    }

    pub fn style(&self) -> &WritingStyle {
        &self.style
    }

    /// Current layout cursor: where the next letter of [`Self::text`] goes.
    pub fn cursor(&self) -> Point {
        self.cursor
    }

    fn push(&mut self, motion: Motion, frame_points: u32, class: StrokeClass, glyph: Option<u32>) {
        let d = motion.duration();
        self.labels.push(Label { t0: self.t, class, glyph });
        self.motions.push(Timed { t0: self.t, t1: self.t + d, motion, frame_points });
        self.t += d;
    }

    fn transit(&mut self, from: (Point, f64), to: (Point, f64)) {
        let s = &self.style;
        let dist = crate::geom::dist(from.0, to.0);
        let duration = (dist / (s.transit_speed * s.write_speed) * PI / 2.0).max(s.min_transit_time);
        let m = Motion::Transit {
            from: from.0,
            to: to.0,
            z0: from.1,
            z1: to.1,
            lift: s.lift_height,
            lift_time: s.lift_time,
            duration,
        };
        self.push(m, 1, StrokeClass::OffBoard, None);
    }

    /// Moves the tool through the air onto the board at `p`.
    fn land_at(&mut self, p: Point) {
        let lift = self.style.lift_height;
        match self.at {
            None if self.air_ends => self.transit(((p.0 - AIR_OFFSET, p.1 + AIR_OFFSET), lift), (p, 0.0)),
            None => {}
            Some(from) => self.transit(from, (p, 0.0)),
        }
        self.at = Some((p, 0.0));
    }

    fn path(&mut self, pts: Vec<Point>, frame_points: u32, class: StrokeClass, glyph: Option<u32>) {
        let s = &self.style;
        let table = ArcTable::new(pts);
        let profile = Profile::new(table.length(), s.start_speed, s.write_speed, s.ramp_time);
        let end = table.at(table.length());
        self.push(Motion::Path { table, profile }, frame_points, class, glyph);
        self.at = Some((end, 0.0));
    }

    /// Writes one letter with its box's lower-left corner at `origin`.
    /// Returns the ground-truth glyph id.
    pub fn glyph_at(&mut self, letter: char, origin: Point) -> Result<u32> {
        let plan = GlyphPlan::for_letter(letter)?;
        self.plan_at(&plan, origin)
    }

    /// Writes an explicit glyph plan, for variant letters.
    pub fn plan_at(&mut self, plan: &GlyphPlan, origin: Point) -> Result<u32> {
        let id = self.next_glyph;
        self.next_glyph += 1;
        self.glyphs.push((id, plan.letter));
        let s = self.style;
        let (sin, cos) = libm::sincos(s.tilt_deg.to_radians());
        let map = |(ux, uy): (f64, f64)| {
            let (x, y) = (ux * plan.width * s.letter_width, uy * s.letter_height);
            (origin.0 + x * cos - y * sin, origin.1 + x * sin + y * cos)
        };
        for pen in &plan.strokes {
            let shapes: Vec<Vec<Point>> = pen
                .shapes
                .iter()
                .map(|shape| {
                    let mut pts = Vec::new();
                    for piece in &shape.pieces {
                        let skip = usize::from(!pts.is_empty());
                        for i in skip..=PIECE_RESOLUTION {
                            pts.push(map(piece.point_at(i as f64 / PIECE_RESOLUTION as f64)));
                        }
                    }
                    pts
                })
                .collect();
            self.land_at(shapes[0][0]);
            if s.corner_pause || shapes.len() == 1 {
                for pts in shapes {
                    self.path(pts, 1, StrokeClass::OnBoard, Some(id));
                }
            } else {
                self.through_corners(shapes, id);
            }
        }
        Ok(id)
    }

    fn through_corners(&mut self, shapes: Vec<Vec<Point>>, id: u32) {
        let lengths: Vec<f64> = shapes.iter().map(|p| crate::geom::path_length(p)).collect();
        let mut all: Vec<Point> = Vec::new();
        for pts in shapes {
            let skip = usize::from(!all.is_empty());
            all.extend_from_slice(&pts[skip..]);
        }
        let t0 = self.t;
        self.path(all, 1, StrokeClass::OnBoard, Some(id));
        let Some(Timed { motion: Motion::Path { profile, .. }, .. }) = self.motions.last() else { return };
        let profile = *profile;
        let mut acc = 0.0;
        for len in &lengths[..lengths.len() - 1] {
            acc += len;
            let t = t0 + profile.time_at(acc);
            self.labels.push(Label { t0: t, class: StrokeClass::OnBoard, glyph: Some(id) });
        }
    }

    /// Lays out text left to right from the cursor. `'\n'` starts a new
    /// line below, `'\x0c'` starts a new board column.
    pub fn text(&mut self, text: &str) -> Result<()> {
        for c in text.chars() {
            match c {
                ' ' => self.cursor.0 += self.style.letter_width + self.style.spacing,
                '\n' => {
                    self.line += 1;
                    self.cursor = (self.page as f64 * self.style.page_pitch, -(self.line as f64) * self.style.line_pitch);
                    if self.written && self.pending.is_none() {
                        self.pending = Some(TruthEventKind::NewLine);
                    }
                }
                '\x0c' => {
                    self.page += 1;
                    self.line = 0;
                    self.cursor = (self.page as f64 * self.style.page_pitch, 0.0);
                    if self.written {
                        self.pending = Some(TruthEventKind::NewPage);
                    }
                }
                _ => {
                    let plan = GlyphPlan::for_letter(c)?;
                    let event = self.pending.take();
                    let before = self.motions.len();
                    self.plan_at(&plan, self.cursor)?;
                    if let Some(kind) = event {
                        let pen_down = self.motions[before..]
                            .iter()
                            .find(|m| matches!(m.motion, Motion::Path { .. }))
                            .map_or(self.t, |m| m.t0);
                        self.events.push((kind, pen_down));
                    }
                    self.cursor.0 += plan.width * self.style.letter_width + self.style.spacing;
                    self.written = true;
                }
            }
        }
        Ok(())
    }

    /// Writes letters starting at `origin` without touching the layout
    /// cursor or recording line events.
    pub fn text_at(&mut self, text: &str, origin: Point) -> Result<()> {
        let mut x = origin.0;
        for c in text.chars() {
            if c == ' ' {
                x += self.style.letter_width + self.style.spacing;
                continue;
            }
            let plan = GlyphPlan::for_letter(c)?;
            self.plan_at(&plan, (x, origin.1))?;
            x += plan.width * self.style.letter_width + self.style.spacing;
        }
        Ok(())
    }

    /// Sweeps an eraser over `region` in horizontal passes.
    pub fn erase(&mut self, region: BBox) -> Result<()> {
        if !(region.width() > 0.0 && region.height() > 0.0) {
            return Err(Error::DegenerateRegion);
        }
        let rows = ((region.height() / ERASE_ROW_STEP) as usize + 1).max(2);
        let mut pts = Vec::with_capacity(rows * 2);
        for i in 0..rows {
            let y = region.max_y - region.height() * i as f64 / (rows - 1) as f64;
            if i % 2 == 0 {
                pts.push((region.min_x, y));
                pts.push((region.max_x, y));
            } else {
                pts.push((region.max_x, y));
                pts.push((region.min_x, y));
            }
        }
        self.land_at(pts[0]);
        self.events.push((TruthEventKind::Erase, self.t));
        self.path(pts, 2, StrokeClass::Erase, None);
        Ok(())
    }

    /// Samples the timeline into a series with its ground truth.
    pub fn finish(mut self) -> (SampleSeries, GroundTruth) {
        if self.air_ends {
            if let Some((p, z)) = self.at {
                let lift = self.style.lift_height;
                self.transit((p, z), ((p.0 + AIR_OFFSET, p.1 + AIR_OFFSET), lift));
            }
        }
        let rate = self.style.sample_rate;
        let mut samples = Vec::new();
        if !self.motions.is_empty() {
            let n = libm::floor(self.t * rate + 1e-9) as usize + 1;
            let mut m = 0;
            for k in 0..n {
                let t = k as f64 / rate;
                while m + 1 < self.motions.len() && t >= self.motions[m].t1 - 1e-12 {
                    m += 1;
                }
                let tm = &self.motions[m];
                samples.push(SamplePoint::new(t, tm.motion.eval(t - tm.t0), Vec3::ZERO, tm.frame_points));
            }
        }
        let n = samples.len();
        let first_at = |t: f64| (libm::ceil(t * rate - 1e-9).max(0.0) as usize).min(n);
        let mut spans: Vec<TruthSpan> = Vec::new();
        for (i, l) in self.labels.iter().enumerate() {
            let start = first_at(l.t0);
            let end = self.labels.get(i + 1).map_or(n, |next| first_at(next.t0));
            if end > start {
                spans.push(TruthSpan { start, end, class: l.class, glyph: l.glyph });
            }
        }
        let glyphs = self
            .glyphs
            .iter()
            .filter_map(|&(id, letter)| {
                let pts: Vec<SamplePoint> = spans
                    .iter()
                    .filter(|s| s.glyph == Some(id))
                    .flat_map(|s| samples[s.start..s.end].iter().copied())
                    .collect();
                bbox_of_samples(&pts).ok().map(|bbox| TruthGlyph { id, letter, bbox })
            })
            .collect();
        let events = self
            .events
            .iter()
            .filter_map(|&(kind, t)| samples.get(first_at(t)).map(|s| TruthEvent { kind, t: s.t }))
            .collect();
        let mut series = SampleSeries::new(String::from("synth"), samples);
        series.derive_velocities();
        (series, GroundTruth { spans, glyphs, events })
    }
}

/// One letter, starting and ending on the board.
pub fn synth_glyph(letter: char, style: &WritingStyle, origin: Point) -> Result<(SampleSeries, GroundTruth)> {
    let mut b = SessionBuilder::bare(*style)?;
    b.glyph_at(letter, origin)?;
    Ok(b.finish())
}

/// Lays out `text` from the origin; see [`SessionBuilder::text`].
pub fn synth_text(text: &str, style: &WritingStyle) -> Result<(SampleSeries, GroundTruth)> {
    let mut b = SessionBuilder::new(*style)?;
    b.text(text)?;
    Ok(b.finish())
}

/// An eraser sweep alone; every frame tracks two points.
pub fn synth_erase(region: BBox, style: &WritingStyle) -> Result<(SampleSeries, GroundTruth)> {
    let mut b = SessionBuilder::bare(*style)?;
    b.erase(region)?;
    Ok(b.finish())
}

/// Adds seeded Gaussian noise to positions and re-derives velocities.
pub fn add_noise(series: &SampleSeries, noise: &NoiseModel) -> SampleSeries {
    if noise.sigma_xy == 0.0 && noise.sigma_z == 0.0 {
        return series.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let mut out = series.clone();
    for s in &mut out.samples {
        let (nx, ny, nz): (f64, f64, f64) =
            (StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
        s.pos.x += noise.sigma_xy * nx;
        s.pos.y += noise.sigma_xy * ny;
        s.pos.z += noise.sigma_z * nz;
    }
    out.derive_velocities();
    out
}

/// Rigid counter-clockwise rotation of positions and velocities about `pivot`.
pub fn rotate_series(series: &SampleSeries, degrees: f64, pivot: Point) -> SampleSeries {
    if degrees == 0.0 {
        return series.clone();
    }
    let (sin, cos) = libm::sincos(degrees.to_radians());
    let mut out = series.clone();
    for s in &mut out.samples {
        let (x, y) = (s.pos.x - pivot.0, s.pos.y - pivot.1);
        s.pos.x = pivot.0 + x * cos - y * sin;
        s.pos.y = pivot.1 + x * sin + y * cos;
        let (vx, vy) = (s.vel.x, s.vel.y);
        s.vel.x = vx * cos - vy * sin;
        s.vel.y = vx * sin + vy * cos;
    }
    out
}


/// Seeded random uppercase words whose lengths lie in `len_range` and
/// whose letters add up to `total_letters`.
pub fn random_words(seed: u64, total_letters: usize, len_range: core::ops::RangeInclusive<usize>) -> Vec<String> {
    use rand_core::RngCore;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (*len_range.start().max(&1), *len_range.end().max(len_range.start()));
    let mut words = Vec::new();
    let mut left = total_letters;
    while left > 0 {
        let want = lo + (rng.next_u32() as usize) % (hi - lo + 1);
        let len = want.min(left);
        let word: String = (0..len).map(|_| (b'A' + (rng.next_u32() % 26) as u8) as char).collect();
        left -= len;
        words.push(word);
    }
    words
}
