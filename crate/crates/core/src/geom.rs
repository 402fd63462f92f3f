//! Small planar geometry helpers shared by segmentation and recognition.

use alloc::vec::Vec;

use crate::model::SamplePoint;

pub type Point = (f64, f64);

/// Centered moving average of the board-plane positions; the window is
/// truncated at both ends.
pub fn smooth_xy(samples: &[SamplePoint], window: usize) -> Vec<Point> {
    let pts: Vec<Point> = samples.iter().map(|s| (s.pos.x, s.pos.y)).collect();
    smooth_points(&pts, window)
}

pub fn smooth_points(pts: &[Point], window: usize) -> Vec<Point> {
    let half = window / 2;
    let n = pts.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            let k = (hi - lo) as f64;
            let (sx, sy) = pts[lo..hi].iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
            (sx / k, sy / k)
        })
        .collect()
}

pub fn dist(a: Point, b: Point) -> f64 {
    libm::hypot(b.0 - a.0, b.1 - a.1)
}

pub fn path_length(pts: &[Point]) -> f64 {
    pts.windows(2).map(|w| dist(w[0], w[1])).sum()
}

/// Keeps points spaced at least `step` apart along the path, always
/// including the first and last point.
pub fn resample_min_spacing(pts: &[Point], step: f64) -> Vec<Point> {
    let mut out = Vec::new();
    let Some(&first) = pts.first() else { return out };
    out.push(first);
    for &p in &pts[1..] {
        if dist(*out.last().unwrap(), p) >= step {
            out.push(p);
        }
    }
    let last = *pts.last().unwrap();
    if out.len() == 1 {
        if dist(first, last) > 0.0 {
            out.push(last);
        }
    } else if *out.last().unwrap() != last {
        let n = out.len();
        if dist(out[n - 2], last) >= step {
            out[n - 1] = last;
        } else {
            out.push(last);
        }
    }
    out
}

/// Wraps an angle in degrees into `(-180, 180]`.
pub fn wrap_deg(a: f64) -> f64 {
    let mut r = libm::fmod(a, 360.0);
    if r <= -180.0 {
        r += 360.0;
    } else if r > 180.0 {
        r -= 360.0;
    }
    r
}

/// Direction of a vector in degrees.
pub fn heading_deg(a: Point, b: Point) -> f64 {
    libm::atan2(b.1 - a.1, b.0 - a.0).to_degrees()
}

/// Undirected axis angle in `[0, 180)`.
pub fn fold_axis_deg(a: f64) -> f64 {
    let r = libm::fmod(a, 180.0);
    if r < 0.0 {
        r + 180.0
    } else {
        r
    }
}

/// Principal-axis angle of a point cloud in `[0, 180)`.
pub fn principal_axis_deg(pts: &[Point]) -> f64 {
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in pts {
        let (dx, dy) = (p.0 - mx, p.1 - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    fold_axis_deg(0.5 * libm::atan2(2.0 * sxy, sxx - syy).to_degrees())
}

/// Largest perpendicular distance of any point from the chord `a`–`b`.
pub fn max_chord_deviation(pts: &[Point], a: Point, b: Point) -> f64 {
    let len = dist(a, b);
    if len == 0.0 {
        return pts.iter().map(|&p| dist(a, p)).fold(0.0, f64::max);
    }
    let (ux, uy) = ((b.0 - a.0) / len, (b.1 - a.1) / len);
    pts.iter()
        .map(|p| libm::fabs((p.0 - a.0) * uy - (p.1 - a.1) * ux))
        .fold(0.0, f64::max)
}
