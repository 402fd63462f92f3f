//! Splits a sample series into strokes at pen lifts and landings, slow
//! points and sharp corners.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::{self, Point};
use crate::model::{BoundaryCause, SamplePoint, SampleSeries, Stroke};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentConfig {
    /// Speed below which a valley in board-plane speed becomes a boundary (mm/s).
    pub low_xy_speed: f64,
    /// `|vz|` above which motion counts as a lift or landing (mm/s).
    pub z_jump_speed: f64,
    /// Direction change that counts as a sharp corner (degrees).
    pub sharp_angle_deg: f64,
    pub min_stroke_samples: usize,
    pub min_stroke_duration: f64,
    /// Moving-average window applied to velocity before taking the speed.
    pub speed_window: usize,
    /// Distance to the neighbours used for the corner angle (mm).
    pub angle_reach_mm: f64,
    /// Furthest a corner neighbour may be, in samples.
    pub angle_max_span: usize,
    /// Candidates closer than this many samples collapse into one boundary.
    pub merge_radius: usize,
}

impl Default for SegmentConfig {
    fn default() -> Self {
        SegmentConfig {
            low_xy_speed: 50.0,
            z_jump_speed: 60.0,
            sharp_angle_deg: 120.0,
            min_stroke_samples: 4,
            min_stroke_duration: 0.03,
            speed_window: 5,
            angle_reach_mm: 3.0,
            angle_max_span: 10,
            merge_radius: 3,
        }
    }
}

impl SegmentConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.low_xy_speed, self.z_jump_speed, self.min_stroke_duration, self.angle_reach_mm];
        if positive.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidConfig("segment thresholds must be > 0"));
        }
        if !(self.sharp_angle_deg > 0.0 && self.sharp_angle_deg < 180.0) {
            return Err(Error::InvalidConfig("sharp_angle_deg must lie in (0, 180)"));
        }
        if self.min_stroke_samples == 0 || self.speed_window == 0 || self.angle_max_span == 0 {
            return Err(Error::InvalidConfig("segment sample counts must be >= 1"));
        }
        Ok(())
    }
}

/// Interior angle at `p` in degrees; a straight pass gives 180.
pub fn vertex_angle(p_prev: Point, p: Point, p_next: Point) -> Result<f64> {
    let a = geom::dist(p_prev, p);
    let b = geom::dist(p, p_next);
    if a == 0.0 || b == 0.0 {
        return Err(Error::DegenerateTriple);
    }
    let c = geom::dist(p_prev, p_next);
    let cos = ((a * a + b * b - c * c) / (2.0 * a * b)).clamp(-1.0, 1.0);
    Ok(libm::acos(cos).to_degrees())
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Candidate {
    index: usize,
    cause: BoundaryCause,
    strength: f64,
    /// For pen-height boundaries: the tool leaves the board here.
    lifts: bool,
}

fn rank(c: BoundaryCause) -> u8 {
    match c {
        BoundaryCause::ZJump => 3,
        BoundaryCause::SlowSpeed => 2,
        BoundaryCause::SharpAngle => 1,
        _ => 0,
    }
}

/// True when `a` should win over `b`.
fn stronger(a: &Candidate, b: &Candidate) -> bool {
    (rank(a.cause), a.strength) > (rank(b.cause), b.strength)
}

/// Per-sample diagnostics of a segmentation run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SegmentTrace {
    pub xy_speed: Vec<f64>,
    pub z_speed: Vec<f64>,
    /// Direction change at each sample, where it could be measured.
    pub turn: Vec<Option<f64>>,
    pub boundaries: Vec<(usize, BoundaryCause)>,
}

/// Board-plane speed from moving-averaged velocity vectors.
pub fn smoothed_xy_speed(samples: &[SamplePoint], window: usize) -> Vec<f64> {
    let v: Vec<Point> = samples.iter().map(|s| (s.vel.x, s.vel.y)).collect();
    geom::smooth_points(&v, window).into_iter().map(|(x, y)| libm::hypot(x, y)).collect()
}

fn smoothed_vz(samples: &[SamplePoint]) -> Vec<f64> {
    let v: Vec<Point> = samples.iter().map(|s| (s.vel.z, 0.0)).collect();
    geom::smooth_points(&v, 3).into_iter().map(|p| p.0).collect()
}

/// Runs `[start, end)` where `pred` holds.
fn runs(n: usize, pred: impl Fn(usize) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for i in 0..n {
        match (pred(i), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, n));
    }
    out
}

fn z_candidates(vz: &[f64], cfg: &SegmentConfig) -> Vec<Candidate> {
    let n = vz.len();
    let mut out = Vec::new();
    for (a, b) in runs(n, |i| vz[i] > cfg.z_jump_speed) {
        let peak = vz[a..b].iter().copied().fold(0.0, f64::max);
        out.push(Candidate { index: a.saturating_sub(1), cause: BoundaryCause::ZJump, strength: peak, lifts: true });
    }
    for (a, b) in runs(n, |i| vz[i] < -cfg.z_jump_speed) {
        let peak = vz[a..b].iter().map(|v| -v).fold(0.0, f64::max);
        out.push(Candidate { index: b, cause: BoundaryCause::ZJump, strength: peak, lifts: false });
    }
    out
}

fn slow_candidates(speed: &[f64], z: &[Candidate], cfg: &SegmentConfig) -> Vec<Candidate> {
    let n = speed.len();
    let r = cfg.merge_radius;
    let mut merged: Vec<(usize, usize)> = Vec::new();
    for (a, b) in runs(n, |i| speed[i] < cfg.low_xy_speed) {
        match merged.last_mut() {
            Some(last) if a <= last.1 + r => last.1 = b,
            _ => merged.push((a, b)),
        }
    }
    let airborne = |i: usize| {
        let before = z.iter().filter(|c| c.index <= i).max_by_key(|c| c.index);
        let after = z.iter().filter(|c| c.index > i).min_by_key(|c| c.index);
        match before {
            Some(a) => a.lifts && after.is_none_or(|b| !b.lifts),
            None => after.is_some_and(|b| !b.lifts),
        }
    };
    merged
        .into_iter()
        .filter(|&(a, b)| !z.iter().any(|c| c.index + r >= a && c.index <= b + r))
        .filter(|&(a, b)| !airborne((a + b) / 2))
        .map(|(a, b)| {
            let i = (a..b).fold(a, |m, i| if speed[i] < speed[m] { i } else { m });
            Candidate { index: i, cause: BoundaryCause::SlowSpeed, strength: cfg.low_xy_speed - speed[i], lifts: false }
        })
        .collect()
}

/// Direction change at every sample of `samples` measured on lightly
/// smoothed positions against neighbours about `angle_reach_mm` away.
fn turn_profile(samples: &[SamplePoint], cfg: &SegmentConfig) -> Vec<Option<f64>> {
    let pts = geom::smooth_xy(samples, 3);
    let n = pts.len();
    (0..n)
        .map(|i| {
            let back = (1..=cfg.angle_max_span.min(i))
                .map(|d| i - d)
                .find(|&j| geom::dist(pts[j], pts[i]) >= cfg.angle_reach_mm)?;
            let fwd = (1..=cfg.angle_max_span)
                .map(|d| i + d)
                .take_while(|&k| k < n)
                .find(|&k| geom::dist(pts[k], pts[i]) >= cfg.angle_reach_mm)?;
            vertex_angle(pts[back], pts[i], pts[fwd]).ok().map(|a| 180.0 - a)
        })
        .collect()
}

fn sharp_candidates(turn: &[Option<f64>], offset: usize, cfg: &SegmentConfig) -> Vec<Candidate> {
    let r = cfg.merge_radius;
    let n = turn.len();
    let mut out = Vec::new();
    for i in 0..n {
        let Some(a) = turn[i] else { continue };
        if a <= cfg.sharp_angle_deg {
            continue;
        }
        let lo = i.saturating_sub(r);
        let hi = (i + r + 1).min(n);
        let is_max = (lo..hi).all(|j| match turn[j] {
            Some(b) if j < i => b < a,
            Some(b) if j > i => b <= a,
            _ => true,
        });
        if is_max {
            out.push(Candidate { index: offset + i, cause: BoundaryCause::SharpAngle, strength: a, lifts: false });
        }
    }
    out
}

/// Accepts candidates strongest first, dropping any within `merge_radius`
/// of an accepted one, then removes boundaries that would leave runts.
fn resolve(mut cands: Vec<Candidate>, samples: &[SamplePoint], cfg: &SegmentConfig) -> Vec<Candidate> {
    let n = samples.len();
    cands.retain(|c| c.index > 0 && c.index < n);
    cands.sort_by(|a, b| {
        rank(b.cause)
            .cmp(&rank(a.cause))
            .then(b.strength.total_cmp(&a.strength))
            .then(a.index.cmp(&b.index))
    });
    let mut kept: Vec<Candidate> = Vec::new();
    for c in cands {
        if kept.iter().all(|k| k.index.abs_diff(c.index) > cfg.merge_radius) {
            kept.push(c);
        }
    }
    kept.sort_by_key(|c| c.index);
    let is_runt = |a: usize, b: usize| {
        b - a < cfg.min_stroke_samples || samples[b - 1].t - samples[a].t < cfg.min_stroke_duration - 1e-9
    };
    loop {
        let mut edges = vec![0];
        edges.extend(kept.iter().map(|c| c.index));
        edges.push(n);
        let Some(seg) = (0..edges.len() - 1).find(|&s| is_runt(edges[s], edges[s + 1])) else { break };
        if kept.is_empty() {
            break;
        }
        let drop = if seg == 0 {
            0
        } else if seg == kept.len() {
            seg - 1
        } else {
            let (before, after) = (&kept[seg - 1], &kept[seg]);
            if stronger(before, after) {
                seg
            } else {
                seg - 1
            }
        };
        kept.remove(drop);
    }
    kept
}

fn cut(series_samples: &[SamplePoint], base: usize, bounds: &[Candidate], first: BoundaryCause, last: BoundaryCause) -> Vec<Stroke> {
    let n = series_samples.len();
    let mut out = Vec::with_capacity(bounds.len() + 1);
    let mut start = 0;
    let mut start_cause = first;
    for i in 0..=bounds.len() {
        let (end, end_cause) = bounds.get(i).map_or((n, last), |c| (c.index, c.cause));
        let mut s = Stroke::from_range(series_samples, start, end);
        s.start_index += base;
        s.end_index += base;
        s.start_cause = start_cause;
        s.end_cause = end_cause;
        out.push(s);
        start = end;
        start_cause = end_cause;
    }
    out
}

/// Segments a series into contiguous strokes that cover every sample.
pub fn segment(series: &SampleSeries, cfg: &SegmentConfig) -> Vec<Stroke> {
    segment_with_trace(series, cfg).0
}

/// Like [`segment`] and also returns the per-sample diagnostics.
pub fn segment_with_trace(series: &SampleSeries, cfg: &SegmentConfig) -> (Vec<Stroke>, SegmentTrace) {
    let samples = &series.samples;
    let n = samples.len();
    if n == 0 {
        return (Vec::new(), SegmentTrace::default());
    }
    let speed = smoothed_xy_speed(samples, cfg.speed_window);
    let vz = smoothed_vz(samples);
    let z = resolve(z_candidates(&vz, cfg), samples, cfg);
    let slow = slow_candidates(&speed, &z, cfg);
    let mut coarse = z.clone();
    coarse.extend(slow.iter().copied());
    let coarse = resolve(coarse, samples, cfg);

    let mut turn = vec![None; n];
    let mut cands = coarse.clone();
    let mut edges = vec![0];
    edges.extend(coarse.iter().map(|c| c.index));
    edges.push(n);
    for w in edges.windows(2) {
        let t = turn_profile(&samples[w[0]..w[1]], cfg);
        cands.extend(sharp_candidates(&t, w[0], cfg));
        turn[w[0]..w[1]].copy_from_slice(&t);
    }
    let bounds = resolve(cands, samples, cfg);
    let trace = SegmentTrace {
        xy_speed: speed,
        z_speed: samples.iter().map(crate::model::z_speed).collect(),
        turn,
        boundaries: bounds.iter().map(|c| (c.index, c.cause)).collect(),
    };
    (cut(samples, 0, &bounds, BoundaryCause::SeriesStart, BoundaryCause::SeriesEnd), trace)
}

/// Cuts one stroke at its sharp corners.
pub fn split_at_sharp_angles(stroke: &Stroke, cfg: &SegmentConfig) -> Vec<Stroke> {
    if stroke.len() < 3 {
        return vec![stroke.clone()];
    }
    let turn = turn_profile(&stroke.samples, cfg);
    let bounds = resolve(sharp_candidates(&turn, 0, cfg), &stroke.samples, cfg);
    let mut pieces = cut(&stroke.samples, stroke.start_index, &bounds, stroke.start_cause, stroke.end_cause);
    for p in &mut pieces {
        p.class = stroke.class;
    }
    pieces
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::StrokeClass;
    use crate::synthgen::{add_noise, synth_glyph, synth_text, NoiseModel, WritingStyle};
    use proptest::prelude::*;

    #[test]
    fn vertex_angle_examples() {
        assert!((vertex_angle((0.0, 0.0), (1.0, 0.0), (2.0, 0.0)).unwrap() - 180.0).abs() < 1e-9);
        assert!((vertex_angle((0.0, 0.0), (1.0, 0.0), (1.0, 1.0)).unwrap() - 90.0).abs() < 1e-9);
        let a = vertex_angle((0.0, 0.0), (1.0, 0.0), (0.5, 0.866)).unwrap();
        assert!((a - 60.0).abs() < 0.1, "{a}");
        assert_eq!(vertex_angle((0.0, 0.0), (0.0, 0.0), (1.0, 0.0)), Err(Error::DegenerateTriple));
    }

    fn noisy(series: &SampleSeries, seed: u64) -> SampleSeries {
        add_noise(series, &NoiseModel::with_seed(seed))
    }

    #[test]
    fn letter_a_yields_five_strokes() {
        let (series, gt) = synth_glyph('A', &WritingStyle::default(), (0.0, 0.0)).unwrap();
        let strokes = segment(&noisy(&series, 1), &SegmentConfig::default());
        assert_eq!(strokes.len(), 5);
        for (s, t) in strokes.iter().zip(&gt.spans) {
            assert!(s.start_index.abs_diff(t.start) <= 2, "{} vs {}", s.start_index, t.start);
        }
    }

    #[test]
    fn kl_isolates_transit() {
        let (series, gt) = synth_text("KL", &WritingStyle::default()).unwrap();
        let strokes = segment(&noisy(&series, 2), &SegmentConfig::default());
        let last_k = gt.spans.iter().rposition(|s| s.glyph == Some(0)).unwrap();
        let transit = gt.spans[last_k + 1];
        let hit = strokes
            .iter()
            .find(|s| s.start_index.abs_diff(transit.start) <= 2 && s.end_index.abs_diff(transit.end) <= 2)
            .expect("transit stroke");
        assert_eq!(hit.start_cause, BoundaryCause::ZJump);
        assert_eq!(hit.end_cause, BoundaryCause::ZJump);
    }

    #[test]
    fn pen_down_z_yields_three_strokes() {
        for corner_pause in [true, false] {
            let style = WritingStyle { corner_pause, ..WritingStyle::default() };
            let (series, _) = synth_glyph('Z', &style, (0.0, 0.0)).unwrap();
            let strokes = segment(&noisy(&series, 3), &SegmentConfig::default());
            assert_eq!(strokes.len(), 3, "corner_pause {corner_pause}");
        }
    }

    #[test]
    fn split_examples() {
        let cfg = SegmentConfig::default();
        let line = Stroke::from_samples((0..50).map(|i| SamplePoint::at(i as f64 * 0.01, i as f64, 0.0, 0.0)).collect());
        assert_eq!(split_at_sharp_angles(&line, &cfg), vec![line.clone()]);
        let style = WritingStyle { corner_pause: false, ..WritingStyle::default() };
        let (z, _) = synth_glyph('Z', &style, (0.0, 0.0)).unwrap();
        let whole = Stroke::from_samples(z.samples.clone()).with_class(StrokeClass::OnBoard);
        let pieces = split_at_sharp_angles(&whole, &cfg);
        assert_eq!(pieces.len(), 3);
        assert!(pieces.iter().all(|p| p.class == StrokeClass::OnBoard));
        assert_eq!(pieces[0].start_index, 0);
        assert_eq!(pieces[2].end_index, whole.len());
        let (o, _) = synth_glyph('O', &WritingStyle::default(), (0.0, 0.0)).unwrap();
        let ring = Stroke::from_samples(o.samples.clone());
        let turn = turn_profile(&ring.samples, &cfg);
        let max_turn = turn.iter().flatten().copied().fold(0.0, f64::max);
        assert!(max_turn < 40.0, "max turn on O is {max_turn}");
        assert_eq!(split_at_sharp_angles(&ring, &cfg).len(), 1);
    }

    #[test]
    fn empty_and_tiny_series() {
        assert!(segment(&SampleSeries::default(), &SegmentConfig::default()).is_empty());
        let one = SampleSeries::new("one", vec![SamplePoint::at(0.0, 0.0, 0.0, 0.0)]);
        assert_eq!(segment(&one, &SegmentConfig::default()).len(), 1);
    }

    #[test]
    fn trace_lines_up_with_strokes() {
        let (series, _) = synth_text("AB", &WritingStyle::default()).unwrap();
        let (strokes, trace) = segment_with_trace(&series, &SegmentConfig::default());
        assert_eq!(trace.xy_speed.len(), series.len());
        assert_eq!(trace.boundaries.len() + 1, strokes.len());
        for ((i, cause), s) in trace.boundaries.iter().zip(&strokes[1..]) {
            assert_eq!((*i, *cause), (s.start_index, s.start_cause));
        }
    }

    fn cover(strokes: &[Stroke], n: usize) -> bool {
        let mut next = 0;
        for s in strokes {
            if s.start_index != next || s.end_index <= s.start_index {
                return false;
            }
            next = s.end_index;
        }
        next == n
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn strokes_partition_series(text in "[A-Z]{1,3}", seed in 0u64..1000) {
            let (series, _) = synth_text(&text, &WritingStyle::default()).unwrap();
            let series = noisy(&series, seed);
            let strokes = segment(&series, &SegmentConfig::default());
            prop_assert!(cover(&strokes, series.len()));
            let rejoined = SampleSeries::new("re", strokes.iter().flat_map(|s| s.samples.iter().copied()).collect());
            let again = segment(&rejoined, &SegmentConfig::default());
            prop_assert_eq!(again.len(), strokes.len());
            for (a, b) in again.iter().zip(&strokes) {
                prop_assert!(a.start_index.abs_diff(b.start_index) <= 1);
            }
        }

        #[test]
        fn lower_corner_threshold_only_adds_cuts(text in "[A-Z]{1,3}", seed in 0u64..1000, lower in 30.0f64..120.0) {
            let style = WritingStyle { corner_pause: false, ..WritingStyle::default() };
            let (series, _) = synth_text(&text, &style).unwrap();
            let series = noisy(&series, seed);
            let base = SegmentConfig::default();
            let loose = SegmentConfig { sharp_angle_deg: lower, ..base };
            let cuts = |cfg: &SegmentConfig| segment(&series, cfg).iter().map(|s| s.start_index).collect::<Vec<_>>();
            let (a, b) = (cuts(&base), cuts(&loose));
            for c in &a {
                prop_assert!(b.contains(c), "cut {} lost at threshold {}", c, lower);
            }
        }
    }
}
