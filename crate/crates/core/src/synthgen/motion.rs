use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::geom::{self, Point};

/// Polyline with cumulative arc length for constant-time parametrization.
#[derive(Clone, Debug)]
pub(crate) struct ArcTable {
    pts: Vec<Point>,
    cum: Vec<f64>,
}

impl ArcTable {
    pub fn new(pts: Vec<Point>) -> Self {
        let mut cum = Vec::with_capacity(pts.len());
        let mut acc = 0.0;
        for (i, p) in pts.iter().enumerate() {
            if i > 0 {
                acc += geom::dist(pts[i - 1], *p);
            }
            cum.push(acc);
        }
        ArcTable { pts, cum }
    }

    pub fn length(&self) -> f64 {
        *self.cum.last().unwrap_or(&0.0)
    }

    pub fn at(&self, s: f64) -> Point {
        let s = s.clamp(0.0, self.length());
        let i = self.cum.partition_point(|&c| c < s);
        if i == 0 {
            return self.pts[0];
        }
        let (c0, c1) = (self.cum[i - 1], self.cum[i]);
        let u = if c1 > c0 { (s - c0) / (c1 - c0) } else { 0.0 };
        let (a, b) = (self.pts[i - 1], self.pts[i]);
        (a.0 + (b.0 - a.0) * u, a.1 + (b.1 - a.1) * u)
    }
}

/// Slow-start slow-end speed profile: raised-cosine ramps from `v0` to
/// `vmax` and back, with a cruise phase in between.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Profile {
    len: f64,
    v0: f64,
    vmax: f64,
    ramp: f64,
    cruise: f64,
}

impl Profile {
    pub fn new(len: f64, v0: f64, vmax: f64, ramp: f64) -> Self {
        let vmax = if len < ramp * (v0 + vmax) { (len / ramp - v0).max(v0) } else { vmax };
        let cruise = ((len - ramp * (v0 + vmax)) / vmax).max(0.0);
        Profile { len, v0, vmax, ramp, cruise }
    }

    pub fn duration(&self) -> f64 {
        2.0 * self.ramp + self.cruise
    }

    fn ramp_distance(&self, t: f64) -> f64 {
        let (v0, dv, tr) = (self.v0, self.vmax - self.v0, self.ramp);
        v0 * t + dv / 2.0 * (t - tr / PI * libm::sin(PI * t / tr))
    }

    /// Distance travelled after `t` seconds.
    pub fn distance(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.duration());
        let full_ramp = self.ramp_distance(self.ramp);
        let s = if t <= self.ramp {
            self.ramp_distance(t)
        } else if t <= self.ramp + self.cruise {
            full_ramp + (t - self.ramp) * self.vmax
        } else {
            let back = self.duration() - t;
            full_ramp * 2.0 + self.cruise * self.vmax - self.ramp_distance(back)
        };
        let total = 2.0 * full_ramp + self.cruise * self.vmax;
        if total > 0.0 {
            s * self.len / total
        } else {
            0.0
        }
    }

    /// Earliest time at which `distance(t) >= s`.
    pub fn time_at(&self, s: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, self.duration());
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.distance(mid) < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

/// Raised-cosine easing from 0 to 1 over `[0, 1]`.
pub(crate) fn ease(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    0.5 * (1.0 - libm::cos(PI * u))
}
