//! Hierarchical grid construction: nested block progressions on each axis, the
//! windows they carve out, fork-shaped open sets inside those windows, and the
//! resulting two-phase site configuration.
//!
//! Level 0 lays down stripes of width `l0` separated by gaps of width `d0` on
//! both axes (union of vertical and horizontal bands = the level-0 grid). Each
//! later level places its stripes inside the gaps of the previous one: a level
//! k+1 stripe covers exactly one gap of level k, and one gap in every
//! `factor` consecutive gaps is covered. Gaps therefore nest, and a gap of
//! level k+1 always begins and ends with a level-k stripe.
//!
//! A level-k window is a surviving gap-pair of level k+1 (one not swallowed by
//! any higher stripe on either axis): the level-k stripes restricted to that
//! square form its frames. The fork keeps every vertical frame except the
//! leftmost plus the bottom frame, minus the top frame, producing a comb that
//! touches only the bottom and right edges of its square.

use crate::geom::Rect;
use crate::lattice::SiteConfig;
use crate::seeds::rng_from_seed;
use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("progression factor {0} at level {1} must be at least 2")]
    BadFactor(u64, usize),
    #[error("block length {0} and distance {1} must both be at least 1")]
    BadParams(u64, u64),
    #[error("parameter recursion overflowed 64-bit range at level {0}")]
    Overflow(usize),
    #[error("windows exist for levels 0..{top}; requested level {requested}")]
    LevelOutOfRange { requested: usize, top: usize },
    #[error("window with a single block per side has no fork")]
    DegenerateWindow,
}

/// Block length and block distance of one progression level.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GridParams {
    pub l: u64,
    pub d: u64,
}

impl GridParams {
    pub fn period(&self) -> u64 {
        self.l + self.d
    }
}

/// Parameter sequence (l_0,d_0), (l_1,d_1), ... with l_{k+1} = d_k and
/// d_{k+1} = L_{k+1} l_k + (L_{k+1} - 1) d_k, one entry per level 0..=K where
/// K = factors.len(). Each factor must be at least 2.
pub fn param_recursion(l0: u64, d0: u64, factors: &[u64]) -> Result<Vec<GridParams>, GridError> {
    if l0 < 1 || d0 < 1 {
        return Err(GridError::BadParams(l0, d0));
    }
    let mut params = vec![GridParams { l: l0, d: d0 }];
    for (i, &factor) in factors.iter().enumerate() {
        if factor < 2 {
            return Err(GridError::BadFactor(factor, i + 1));
        }
        let prev = params[i];
        let d = factor
            .checked_mul(prev.l)
            .and_then(|a| (factor - 1).checked_mul(prev.d).and_then(|b| a.checked_add(b)))
            .ok_or(GridError::Overflow(i + 1))?;
        params.push(GridParams { l: prev.d, d });
    }
    Ok(params)
}

/// Probability that a fixed site lies in a grid with parameter (l, d) under a
/// uniform translate: (l*d + l*(l+d)) / (l+d)^2, exact.
pub fn membership_prob(l: u64, d: u64) -> Ratio<u128> {
    assert!(l >= 1 && d >= 1, "degenerate grid parameter");
    let (l, d) = (l as u128, d as u128);
    Ratio::new(l * d + l * (l + d), (l + d) * (l + d))
}

/// A sampled grid hierarchy: per-level parameters, progression factors, and the
/// random per-axis offsets of each level's stripes. Level k stripes start at
/// `offsets[k]` and repeat with period `params[k].period()`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GridHierarchy {
    params: Vec<GridParams>,
    factors: Vec<u64>,
    offsets: Vec<(i64, i64)>,
}

/// Draw a hierarchy: the level-0 offset is uniform over the period on each axis;
/// each later level picks uniformly which gap of the previous level its first
/// stripe covers, independently per axis. Draw order is fixed (x then y, level
/// by level) so a seed pins the whole hierarchy.
pub fn sample_hierarchy(
    l0: u64,
    d0: u64,
    factors: &[u64],
    seed: u64,
) -> Result<GridHierarchy, GridError> {
    let params = param_recursion(l0, d0, factors)?;
    let mut rng = rng_from_seed(seed);
    let mut offsets = Vec::with_capacity(params.len());
    let p0 = params[0].period();
    let ox = rng.random_range(0..p0) as i64;
    let oy = rng.random_range(0..p0) as i64;
    offsets.push((ox, oy));
    for (k, &factor) in factors.iter().enumerate() {
        let prev = params[k];
        let period = prev.period() as i64;
        let (px, py) = offsets[k];
        let jx = rng.random_range(0..factor) as i64;
        let jy = rng.random_range(0..factor) as i64;
        // the new stripe covers the jx-th gap of level k, so it starts one
        // block length past that gap's preceding stripe
        offsets.push((px + prev.l as i64 + period * jx, py + prev.l as i64 + period * jy));
    }
    Ok(GridHierarchy { params, factors: factors.to_vec(), offsets })
}

impl GridHierarchy {
    /// Highest grid level, K. Windows exist for levels 0..K.
    pub fn top_level(&self) -> usize {
        self.factors.len()
    }

    pub fn params(&self) -> &[GridParams] {
        &self.params
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn offsets(&self) -> &[(i64, i64)] {
        &self.offsets
    }

    fn offset_on(&self, level: usize, axis: usize) -> i64 {
        if axis == 0 {
            self.offsets[level].0
        } else {
            self.offsets[level].1
        }
    }

    /// Is the coordinate inside a level-k stripe on the given axis (0 = x)?
    fn in_band(&self, level: usize, axis: usize, coord: i64) -> bool {
        let p = self.params[level];
        (coord - self.offset_on(level, axis)).rem_euclid(p.period() as i64) < p.l as i64
    }

    /// Highest level whose stripes cover the coordinate on this axis, if any.
    /// Stripes of different levels can nest (a high stripe covers a whole gap,
    /// lower stripes included), so the maximum is the meaningful value.
    fn axis_level(&self, axis: usize, coord: i64) -> Option<usize> {
        (0..=self.top_level()).rev().find(|&k| self.in_band(k, axis, coord))
    }

    /// Site membership in the level-k grid (either axis in a level-k stripe).
    pub fn in_grid(&self, level: usize, site: (i64, i64)) -> bool {
        self.in_band(level, 0, site.0) || self.in_band(level, 1, site.1)
    }

    /// Color of a site: the largest level whose grid contains it, or -1 when no
    /// grid does.
    pub fn color(&self, site: (i64, i64)) -> i32 {
        let cx = self.axis_level(0, site.0);
        let cy = self.axis_level(1, site.1);
        match cx.max(cy) {
            Some(k) => k as i32,
            None => -1,
        }
    }

    /// Start of the level-(k+1) gap containing the coordinate, or None when the
    /// coordinate sits inside a level-(k+1) stripe.
    fn gap_start(&self, level_above: usize, axis: usize, coord: i64) -> Option<i64> {
        let p = self.params[level_above];
        let base = self.offset_on(level_above, axis) + p.l as i64;
        let r = (coord - base).rem_euclid(p.period() as i64);
        if r < p.d as i64 {
            Some(coord - r)
        } else {
            None
        }
    }

    /// A gap of level k+1 hosts a level-k window only if no higher stripe
    /// swallowed it. Swallowing is all-or-nothing per gap, so testing the gap's
    /// first coordinate (a level-k stripe start) suffices: it reads level k
    /// exactly when the gap survived.
    fn gap_survives(&self, level: usize, axis: usize, gap_start: i64) -> bool {
        self.axis_level(axis, gap_start) == Some(level)
    }

    /// The level-k window whose square contains the site, if the site lies in a
    /// surviving gap-pair of level k+1.
    pub fn window_at(&self, level: usize, site: (i64, i64)) -> Option<WindowSpec> {
        if level >= self.top_level() {
            return None;
        }
        let gx = self.gap_start(level + 1, 0, site.0)?;
        let gy = self.gap_start(level + 1, 1, site.1)?;
        if !self.gap_survives(level, 0, gx) || !self.gap_survives(level, 1, gy) {
            return None;
        }
        Some(self.window_with_anchor(level, (gx, gy)))
    }

    fn window_with_anchor(&self, level: usize, anchor: (i64, i64)) -> WindowSpec {
        WindowSpec {
            level,
            anchor,
            q: self.factors[level],
            w: self.params[level].l,
            gap: self.params[level].d,
            s: self.params[level + 1].d,
        }
    }

    /// All level-k windows whose squares intersect the region, bottom-up
    /// row-major by anchor. Requires level < K.
    pub fn windows_of_level(&self, level: usize, region: Rect) -> Result<Vec<WindowSpec>, GridError> {
        let top = self.top_level();
        if level >= top {
            return Err(GridError::LevelOutOfRange { requested: level, top });
        }
        let above = self.params[level + 1];
        let period = above.period() as i64;
        let side = above.d as i64;
        let starts = |axis: usize, lo: i64, hi: i64| -> Vec<i64> {
            let base = self.offset_on(level + 1, axis) + above.l as i64;
            // all t with [base + t*period, +side) meeting [lo, hi)
            let t_min = (lo - side - base).div_euclid(period) + 1;
            let t_max = (hi - 1 - base).div_euclid(period);
            (t_min..=t_max)
                .map(|t| base + t * period)
                .filter(|&g| self.gap_survives(level, axis, g))
                .collect()
        };
        let xs = starts(0, region.x0, region.x1());
        let ys = starts(1, region.y0, region.y1());
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for &gy in &ys {
            for &gx in &xs {
                out.push(self.window_with_anchor(level, (gx, gy)));
            }
        }
        Ok(out)
    }

    /// The unique window one level up whose pane is this window's square, or
    /// None for windows of the top window level.
    pub fn parent_window(&self, window: &WindowSpec) -> Option<WindowSpec> {
        if window.level + 1 >= self.top_level() {
            return None;
        }
        let parent = self.window_at(window.level + 1, window.anchor)?;
        debug_assert!(parent.pane_index(window.shade()).is_some(), "child square must be a pane");
        Some(parent)
    }

    /// Anchor-side square of the first gap-pair of the top level at or after the
    /// offsets: the canonical simulation region, side d_K.
    pub fn canonical_shade(&self) -> Rect {
        let k = self.top_level();
        let p = self.params[k];
        let (ox, oy) = self.offsets[k];
        Rect::new(ox + p.l as i64, oy + p.l as i64, p.d, p.d)
    }

    /// Is the site open in the two-phase configuration, i.e. inside the fork of
    /// the window (of any level) whose square contains it?
    pub fn is_rf_open(&self, site: (i64, i64)) -> bool {
        debug_assert!(
            (0..self.top_level())
                .filter(|&k| {
                    self.window_at(k, site).is_some_and(|w| w.fork_contains(site))
                })
                .count()
                <= 1,
            "forks of distinct levels must not overlap"
        );
        (0..self.top_level())
            .any(|k| self.window_at(k, site).is_some_and(|w| w.fork_contains(site)))
    }

    /// Open/closed configuration over the region: open exactly on forks.
    pub fn rf_config(&self, region: Rect) -> SiteConfig {
        let values = region
            .sites()
            .map(|site| u8::from(self.is_rf_open(site)))
            .collect();
        SiteConfig::from_values((region.x0, region.y0), region.width as usize, region.height as usize, values)
            .expect("region sites produce bits")
    }

    /// Human-readable per-level description for run manifests.
    pub fn manifest(&self) -> serde_json::Value {
        let levels: Vec<serde_json::Value> = self
            .params
            .iter()
            .enumerate()
            .map(|(k, p)| {
                serde_json::json!({
                    "level": k,
                    "l": p.l,
                    "d": p.d,
                    "factor": if k == 0 { serde_json::Value::Null } else { self.factors[k - 1].into() },
                    "x_offset": self.offsets[k].0,
                    "y_offset": self.offsets[k].1,
                })
            })
            .collect();
        serde_json::json!({ "levels": levels })
    }
}

/// One window: a level-k grid patch inside a surviving gap-pair of level k+1.
/// `q` frames of width `w` per direction, `gap` apart, spanning side `s`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WindowSpec {
    pub level: usize,
    pub anchor: (i64, i64),
    pub q: u64,
    pub w: u64,
    pub gap: u64,
    pub s: u64,
}

impl WindowSpec {
    /// Build a window from first principles; `s` is derived as q*w + (q-1)*gap.
    pub fn new(level: usize, anchor: (i64, i64), q: u64, w: u64, gap: u64) -> Result<Self, GridError> {
        if q < 1 || w < 1 || gap < 1 {
            return Err(GridError::BadParams(w, gap));
        }
        let s = q
            .checked_mul(w)
            .and_then(|a| (q - 1).checked_mul(gap).and_then(|b| a.checked_add(b)))
            .ok_or(GridError::Overflow(level))?;
        Ok(WindowSpec { level, anchor, q, w, gap, s })
    }

    fn stride(&self) -> i64 {
        (self.w + self.gap) as i64
    }

    /// The s x s square spanned by the window.
    pub fn shade(&self) -> Rect {
        Rect::new(self.anchor.0, self.anchor.1, self.s, self.s)
    }

    /// i-th vertical frame, 0 = leftmost, i < q.
    pub fn v_frame(&self, i: u64) -> Rect {
        debug_assert!(i < self.q);
        Rect::new(self.anchor.0 + i as i64 * self.stride(), self.anchor.1, self.w, self.s)
    }

    /// j-th horizontal frame, 0 = bottom, j < q.
    pub fn h_frame(&self, j: u64) -> Rect {
        debug_assert!(j < self.q);
        Rect::new(self.anchor.0, self.anchor.1 + j as i64 * self.stride(), self.s, self.w)
    }

    /// gap x gap square between frames i..i+1 and j..j+1; i, j < q-1.
    pub fn pane(&self, i: u64, j: u64) -> Rect {
        debug_assert!(i + 1 < self.q && j + 1 < self.q);
        Rect::new(
            self.anchor.0 + self.w as i64 + i as i64 * self.stride(),
            self.anchor.1 + self.w as i64 + j as i64 * self.stride(),
            self.gap,
            self.gap,
        )
    }

    /// Which pane equals the given square, if any.
    pub fn pane_index(&self, square: Rect) -> Option<(u64, u64)> {
        if square.width != self.gap || square.height != self.gap {
            return None;
        }
        let rel_x = square.x0 - self.anchor.0 - self.w as i64;
        let rel_y = square.y0 - self.anchor.1 - self.w as i64;
        let stride = self.stride();
        if rel_x < 0 || rel_y < 0 || rel_x % stride != 0 || rel_y % stride != 0 {
            return None;
        }
        let (i, j) = ((rel_x / stride) as u64, (rel_y / stride) as u64);
        (i + 1 < self.q && j + 1 < self.q).then_some((i, j))
    }

    /// Fork membership: all vertical frames except the leftmost, plus the bottom
    /// frame, minus the leftmost vertical and topmost horizontal frames.
    pub fn fork_contains(&self, site: (i64, i64)) -> bool {
        let (rx, ry) = (site.0 - self.anchor.0, site.1 - self.anchor.1);
        let s = self.s as i64;
        let w = self.w as i64;
        if rx < 0 || ry < 0 || rx >= s || ry >= s {
            return false;
        }
        if rx < w || ry >= s - w {
            return false;
        }
        rx % self.stride() < w || ry < w
    }

    /// Fork site set, bottom-up row-major. Errors on a single-block window,
    /// whose fork would be empty by construction.
    pub fn fork_sites(&self) -> Result<Vec<(i64, i64)>, GridError> {
        if self.q < 2 {
            return Err(GridError::DegenerateWindow);
        }
        Ok(self.shade().sites().filter(|&p| self.fork_contains(p)).collect())
    }
}

/// Free-function form of [`WindowSpec::fork_sites`].
pub fn fork(window: &WindowSpec) -> Result<Vec<(i64, i64)>, GridError> {
    window.fork_sites()
}

/// Free-function form of [`GridHierarchy::rf_config`].
pub fn rf_config(hierarchy: &GridHierarchy, region: Rect) -> SiteConfig {
    hierarchy.rf_config(region)
}

/// Free-function form of [`GridHierarchy::color`].
pub fn color(hierarchy: &GridHierarchy, site: (i64, i64)) -> i32 {
    hierarchy.color(site)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::label_clusters;

    #[test]
    fn recursion_matches_hand_computation() {
        let seq = param_recursion(2, 2, &[2, 4]).unwrap();
        assert_eq!(seq[1], GridParams { l: 2, d: 6 });
        assert_eq!(seq[2], GridParams { l: 6, d: 26 });
        assert_eq!(seq[1].period(), 8);
        assert_eq!(seq[2].period(), 32);
        let other = param_recursion(1, 2, &[3]).unwrap();
        assert_eq!(other[1], GridParams { l: 2, d: 7 });
        assert_eq!(other[1].period(), 9);
    }

    #[test]
    fn recursion_period_identity() {
        // l_k + d_k = (product of factors through k) * (l_0 + d_0)
        let factors = [2u64, 4, 8, 3];
        let seq = param_recursion(2, 2, &factors).unwrap();
        let mut product = 1u64;
        for (k, params) in seq.iter().enumerate() {
            if k > 0 {
                product *= factors[k - 1];
                assert_eq!(params.l, seq[k - 1].d);
            }
            assert_eq!(params.period(), product * 4);
        }
    }

    #[test]
    fn recursion_rejects_small_factor() {
        assert!(matches!(param_recursion(2, 2, &[2, 1]), Err(GridError::BadFactor(1, 2))));
        assert!(matches!(param_recursion(0, 2, &[2]), Err(GridError::BadParams(0, 2))));
    }

    #[test]
    fn membership_prob_oracle_values() {
        assert_eq!(membership_prob(1, 1), Ratio::new(3u128, 4));
        assert_eq!(membership_prob(1, 3), Ratio::new(7u128, 16));
        for l in 1..6u64 {
            assert_eq!(membership_prob(l, l), Ratio::new(3u128, 4));
        }
    }

    #[test]
    fn stripes_nest_into_previous_gaps() {
        for seed in 0..30 {
            let h = sample_hierarchy(2, 2, &[2, 4, 3], seed).unwrap();
            for k in 0..h.top_level() {
                let prev = h.params()[k];
                let period = prev.period() as i64;
                for axis in 0..2 {
                    let delta = h.offset_on(k + 1, axis) - h.offset_on(k, axis) - prev.l as i64;
                    assert_eq!(delta.rem_euclid(period), 0);
                    let j = delta.div_euclid(period);
                    assert!((0..h.factors()[k] as i64).contains(&j));
                }
            }
        }
    }

    #[test]
    fn color_uses_the_largest_level() {
        // a level-2 stripe covers a whole level-1 gap, level-0 stripes included,
        // so some coordinate lies in bands of level 0 and level 2 at once
        let h = sample_hierarchy(2, 2, &[2, 2], 5).unwrap();
        let mut found = false;
        for x in -300..300i64 {
            if h.in_band(0, 0, x) && h.in_band(2, 0, x) {
                assert_eq!(h.color((x, h.offsets()[0].1)), 2);
                found = true;
                break;
            }
        }
        assert!(found, "nested double coverage must occur within one top period");
    }

    #[test]
    fn color_minus_one_outside_all_grids() {
        let h = sample_hierarchy(2, 3, &[2], 9).unwrap();
        let mut seen = false;
        for x in 0..40i64 {
            for y in 0..40i64 {
                let c = h.color((x, y));
                if c == -1 {
                    assert!(!h.in_grid(0, (x, y)) && !h.in_grid(1, (x, y)));
                    seen = true;
                }
            }
        }
        assert!(seen, "gap-pair sites exist in any sampled hierarchy");
    }

    #[test]
    fn windows_match_structural_sizes() {
        let region = Rect::new(-400, -400, 800, 800);
        for seed in 0..10 {
            let h = sample_hierarchy(2, 2, &[2, 4], seed).unwrap();
            for level in 0..h.top_level() {
                let windows = h.windows_of_level(level, region).unwrap();
                assert!(!windows.is_empty());
                for w in &windows {
                    assert_eq!(w.w, h.params()[level].l);
                    assert_eq!(w.s, h.params()[level + 1].d);
                    assert_eq!(w.q, h.factors()[level]);
                    assert_eq!(w.s, w.q * w.w + (w.q - 1) * w.gap);
                    // frame sites carry at least the window's level
                    for i in 0..w.q {
                        let f = w.v_frame(i);
                        assert!(h.color((f.x0, f.y0)) >= level as i32);
                    }
                }
                // squares of one level never overlap
                for (a, b) in windows.iter().zip(windows.iter().skip(1)) {
                    assert!(a.shade().intersect(&b.shade()).is_none());
                }
            }
        }
    }

    #[test]
    fn window_levels_out_of_range_error() {
        let h = sample_hierarchy(2, 2, &[2], 0).unwrap();
        let region = Rect::new(0, 0, 10, 10);
        assert!(matches!(
            h.windows_of_level(1, region),
            Err(GridError::LevelOutOfRange { requested: 1, top: 1 })
        ));
    }

    #[test]
    fn every_window_square_is_a_pane_of_its_parent() {
        let region = Rect::new(-600, -600, 1200, 1200);
        for seed in 0..10 {
            let h = sample_hierarchy(2, 2, &[2, 2, 2], seed).unwrap();
            for level in 0..h.top_level() - 1 {
                for w in h.windows_of_level(level, region).unwrap() {
                    let parent = h.parent_window(&w).expect("levels below the top have parents");
                    assert_eq!(parent.level, level + 1);
                    assert!(parent.pane_index(w.shade()).is_some());
                }
            }
        }
    }

    #[test]
    fn fork_avoids_left_and_top_frames() {
        let w = WindowSpec::new(0, (3, -5), 3, 1, 2).unwrap();
        assert_eq!(w.s, 7);
        let sites = w.fork_sites().unwrap();
        for &site in &sites {
            assert!(w.v_frame(0).intersect(&Rect::new(site.0, site.1, 1, 1)).is_none());
            assert!(w.h_frame(w.q - 1).intersect(&Rect::new(site.0, site.1, 1, 1)).is_none());
        }
        // bottom bar reaches the right edge, teeth stop below the top frame
        assert!(sites.contains(&(w.anchor.0 + 6, w.anchor.1)));
        assert!(sites.contains(&(w.anchor.0 + 6, w.anchor.1 + 5)));
        assert!(!sites.contains(&(w.anchor.0 + 6, w.anchor.1 + 6)));
    }

    #[test]
    fn fork_with_two_blocks_is_union_minus_frames() {
        let w = WindowSpec::new(0, (0, 0), 2, 2, 2).unwrap();
        let mut expected: Vec<(i64, i64)> = Vec::new();
        for site in w.shade().sites() {
            let in_v1 = w.v_frame(1).contains(site);
            let in_h0 = w.h_frame(0).contains(site);
            let in_v0 = w.v_frame(0).contains(site);
            let in_h1 = w.h_frame(1).contains(site);
            if (in_v1 || in_h0) && !(in_v0 || in_h1) {
                expected.push(site);
            }
        }
        assert_eq!(w.fork_sites().unwrap(), expected);
    }

    #[test]
    fn fork_sites_are_four_connected() {
        let w = WindowSpec::new(0, (0, 0), 3, 1, 2).unwrap();
        let sites = w.fork_sites().unwrap();
        let set: std::collections::HashSet<_> = sites.iter().copied().collect();
        let mut reached = std::collections::HashSet::new();
        let mut stack = vec![sites[0]];
        reached.insert(sites[0]);
        while let Some((x, y)) = stack.pop() {
            for nb in [(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)] {
                if set.contains(&nb) && reached.insert(nb) {
                    stack.push(nb);
                }
            }
        }
        assert_eq!(reached.len(), sites.len());
    }

    #[test]
    fn degenerate_window_has_no_fork() {
        let w = WindowSpec::new(0, (0, 0), 1, 2, 2).unwrap();
        assert!(matches!(w.fork_sites(), Err(GridError::DegenerateWindow)));
    }

    #[test]
    fn rf_opens_exactly_the_forks() {
        for seed in [1, 7, 40] {
            let h = sample_hierarchy(2, 2, &[2, 4], seed).unwrap();
            let shade = h.canonical_shade();
            assert_eq!(shade.width, 26);
            let config = h.rf_config(shade);
            // reference: union of fork site sets over all window levels
            let mut open = std::collections::HashSet::new();
            for level in 0..h.top_level() {
                for w in h.windows_of_level(level, shade).unwrap() {
                    for site in w.fork_sites().unwrap() {
                        assert!(open.insert(site), "fork overlap at {site:?}");
                    }
                }
            }
            for site in shade.sites() {
                let expect = open.contains(&site);
                assert_eq!(config.get(site) == Some(1), expect, "mismatch at {site:?}");
                if h.color(site) == -1 {
                    assert_eq!(config.get(site), Some(0));
                }
            }
            // both phases are nonempty on the canonical square
            let labeling = label_clusters(&config);
            assert!(labeling.components_of_phase(1).next().is_some());
            assert!(labeling.components_of_phase(0).next().is_some());
        }
    }

    #[test]
    fn manifest_lists_every_level() {
        let h = sample_hierarchy(2, 2, &[2, 4], 3).unwrap();
        let m = h.manifest();
        let levels = m["levels"].as_array().unwrap();
        assert_eq!(levels.len(), 3);
        assert_eq!(levels[2]["d"], 26);
        assert_eq!(levels[1]["factor"], 2);
        assert!(levels[0]["factor"].is_null());
    }
}
