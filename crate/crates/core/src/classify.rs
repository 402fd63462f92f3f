//! On-board, off-board and eraser labels from depth variation and the
//! number of tracked points.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{Stroke, StrokeClass};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyConfig {
    /// Moving-window length in samples; odd.
    pub window: usize,
    /// Depth standard deviation above which a stroke is in the air (mm).
    pub z_std_threshold: f64,
    pub erase_min_two_point_fraction: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { window: 9, z_std_threshold: 0.5, erase_min_two_point_fraction: 0.8 }
    }
}

impl ClassifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window < 3 || self.window % 2 == 0 {
            return Err(Error::InvalidConfig("window must be odd and >= 3"));
        }
        if !(self.z_std_threshold > 0.0) {
            return Err(Error::InvalidConfig("z_std_threshold must be > 0"));
        }
        if !(self.erase_min_two_point_fraction > 0.0 && self.erase_min_two_point_fraction <= 1.0) {
            return Err(Error::InvalidConfig("erase_min_two_point_fraction must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Centered moving-window population standard deviation of depth; the
/// window is truncated at both ends.
pub fn depth_std_profile(stroke: &Stroke, window: usize) -> Result<Vec<f64>> {
    let n = stroke.len();
    if n < 3 {
        return Err(Error::TooShort { samples: n });
    }
    let half = window / 2;
    let z: Vec<f64> = stroke.samples.iter().map(|s| s.pos.z).collect();
    Ok((0..n)
        .map(|i| {
            let w = &z[i.saturating_sub(half)..(i + half + 1).min(n)];
            let k = w.len() as f64;
            let mean = w.iter().sum::<f64>() / k;
            libm::sqrt(w.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / k)
        })
        .collect())
}

pub fn classify_stroke(stroke: &Stroke, cfg: &ClassifyConfig) -> Result<StrokeClass> {
    let profile = depth_std_profile(stroke, cfg.window)?;
    let two = stroke.samples.iter().filter(|s| s.frame_points == 2).count();
    if two as f64 >= cfg.erase_min_two_point_fraction * stroke.len() as f64 {
        return Ok(StrokeClass::Erase);
    }
    if profile.iter().copied().fold(0.0, f64::max) > cfg.z_std_threshold {
        Ok(StrokeClass::OffBoard)
    } else {
        Ok(StrokeClass::OnBoard)
    }
}

/// Labels every stroke; strokes too short to judge become off-board.
pub fn classify_all(strokes: &[Stroke], cfg: &ClassifyConfig) -> Vec<Stroke> {
    strokes
        .iter()
        .map(|s| s.clone().with_class(classify_stroke(s, cfg).unwrap_or(StrokeClass::OffBoard)))
        .collect()
}

/// Splits strokes into on-board writing and eraser sweeps, dropping the rest.
pub fn filter_onboard(strokes: &[Stroke], cfg: &ClassifyConfig) -> (Vec<Stroke>, Vec<Stroke>) {
    let mut onboard = Vec::new();
    let mut erase = Vec::new();
    for s in classify_all(strokes, cfg) {
        match s.class {
            StrokeClass::OnBoard => onboard.push(s),
            StrokeClass::Erase => erase.push(s),
            _ => {}
        }
    }
    (onboard, erase)
}
