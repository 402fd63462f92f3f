//! Recursive splitting of on-board strokes into characters.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{bbox_of, BBox, CharacterGroup, Stroke};

pub const ORACLE_LIMIT: usize = 12;

/// Leftmost x of `b` minus rightmost x of `a`; negative when they overlap.
pub fn inter_stroke_gap(a: &Stroke, b: &Stroke) -> f64 {
    match (bbox_of(a), bbox_of(b)) {
        (Ok(a), Ok(b)) => b.min_x - a.max_x,
        _ => f64::NEG_INFINITY,
    }
}

fn boxes(strokes: &[Stroke]) -> Vec<BBox> {
    strokes.iter().map(|s| bbox_of(s).unwrap_or(BBox::point(0.0, 0.0))).collect()
}

fn split(b: &[BBox], lo: usize, hi: usize, out: &mut Vec<(usize, usize)>) {
    if hi - lo <= 1 {
        out.push((lo, hi));
        return;
    }
    let mut at = lo;
    let mut widest = f64::NEG_INFINITY;
    for i in lo..hi - 1 {
        let gap = b[i + 1].min_x - b[i].max_x;
        if gap > widest {
            widest = gap;
            at = i;
        }
    }
    let right_of_left = b[lo..=at].iter().map(|x| x.max_x).fold(f64::NEG_INFINITY, f64::max);
    let left_of_right = b[at + 1..hi].iter().map(|x| x.min_x).fold(f64::INFINITY, f64::min);
    if right_of_left <= left_of_right {
        split(b, lo, at + 1, out);
        split(b, at + 1, hi, out);
    } else {
        out.push((lo, hi));
    }
}

fn build(strokes: &[Stroke], ranges: Vec<(usize, usize)>) -> Vec<CharacterGroup> {
    let mut groups: Vec<CharacterGroup> = ranges
        .into_iter()
        .filter_map(|(lo, hi)| CharacterGroup::new(strokes[lo..hi].to_vec()).ok())
        .collect();
    groups.sort_by(|a, b| a.bbox.min_x.total_cmp(&b.bbox.min_x));
    groups
}

/// Splits time-ordered strokes at the widest gap while the left block lies
/// wholly left of the right block. Groups come out left to right.
pub fn group(strokes: &[Stroke]) -> Vec<CharacterGroup> {
    if strokes.is_empty() {
        return Vec::new();
    }
    let mut ranges = Vec::new();
    split(&boxes(strokes), 0, strokes.len(), &mut ranges);
    build(strokes, ranges)
}

/// Stroke index ranges of [`group`] in time order.
pub fn group_ranges(strokes: &[Stroke]) -> Vec<(usize, usize)> {
    let mut ranges = Vec::new();
    if !strokes.is_empty() {
        split(&boxes(strokes), 0, strokes.len(), &mut ranges);
    }
    ranges
}

/// Brute force over every contiguous partition: keeps the one with the
/// most blocks where each cut has a positive stroke gap and every block lies
/// left of all later blocks.
pub fn group_exhaustive_oracle(strokes: &[Stroke]) -> Result<Vec<CharacterGroup>> {
    let n = strokes.len();
    if n > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge(n));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let b = boxes(strokes);
    let mut best: Option<Vec<(usize, usize)>> = None;
    for mask in 0u32..(1 << (n - 1)) {
        let mut ranges = Vec::new();
        let mut lo = 0;
        for i in 0..n - 1 {
            if mask & (1 << i) != 0 {
                ranges.push((lo, i + 1));
                lo = i + 1;
            }
        }
        ranges.push((lo, n));
        let positive = (0..n - 1).filter(|i| mask & (1 << i) != 0).all(|i| b[i + 1].min_x - b[i].max_x > 0.0);
        let extent = |&(lo, hi): &(usize, usize)| {
            let bb = BBox::union_all(&b[lo..hi]).expect("non-empty block");
            (bb.min_x, bb.max_x)
        };
        let ext: Vec<(f64, f64)> = ranges.iter().map(extent).collect();
        let ordered = (0..ext.len()).all(|i| (i + 1..ext.len()).all(|j| ext[i].1 <= ext[j].0));
        if positive && ordered && best.as_ref().is_none_or(|r| ranges.len() > r.len()) {
            best = Some(ranges);
        }
    }
    Ok(build(strokes, best.unwrap_or_else(|| vec![(0, n)])))
}
