//! Axis-aligned integer rectangles on the square lattice.
//!
//! A `Rect` denotes the site set `[x0, x0+width) x [y0, y0+height)`. All window
//! geometry in this crate (configuration windows, frames, panes, road rectangles)
//! is expressed through this type. The y axis points up: "bottom" means minimal y,
//! "top" means maximal y.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Rect {
    pub x0: i64,
    pub y0: i64,
    pub width: u64,
    pub height: u64,
}

impl Rect {
    pub fn new(x0: i64, y0: i64, width: u64, height: u64) -> Self {
        Rect { x0, y0, width, height }
    }

    /// Exclusive right edge.
    pub fn x1(&self) -> i64 {
        self.x0 + self.width as i64
    }

    /// Exclusive top edge.
    pub fn y1(&self) -> i64 {
        self.y0 + self.height as i64
    }

    pub fn area(&self) -> u64 {
        self.width * self.height
    }

    pub fn contains(&self, site: (i64, i64)) -> bool {
        site.0 >= self.x0 && site.0 < self.x1() && site.1 >= self.y0 && site.1 < self.y1()
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        other.x0 >= self.x0 && other.x1() <= self.x1() && other.y0 >= self.y0 && other.y1() <= self.y1()
    }

    pub fn intersect(&self, other: &Rect) -> Option<Rect> {
        let x0 = self.x0.max(other.x0);
        let y0 = self.y0.max(other.y0);
        let x1 = self.x1().min(other.x1());
        let y1 = self.y1().min(other.y1());
        if x0 < x1 && y0 < y1 {
            Some(Rect::new(x0, y0, (x1 - x0) as u64, (y1 - y0) as u64))
        } else {
            None
        }
    }

    /// Sites in row-major order, bottom row first.
    pub fn sites(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let (x0, y0) = (self.x0, self.y0);
        let (w, h) = (self.width as i64, self.height as i64);
        (0..h).flat_map(move |dy| (0..w).map(move |dx| (x0 + dx, y0 + dy)))
    }

    /// Horizontal extent as a half-open interval.
    pub fn x_interval(&self) -> (i64, i64) {
        (self.x0, self.x1())
    }

    /// Vertical extent as a half-open interval.
    pub fn y_interval(&self) -> (i64, i64) {
        (self.y0, self.y1())
    }
}

/// Interval containment `a` inside `b`, both half-open.
pub fn interval_subset(a: (i64, i64), b: (i64, i64)) -> bool {
    a.0 >= b.0 && a.1 <= b.1
}
