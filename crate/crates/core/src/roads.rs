//! Escape-route geometry over a sampled grid hierarchy: rectangle sequences that
//! lead right-and-down inside the open fork phase or left-and-up inside the
//! closed phase, validation of the containment pattern that lets alternating
//! crossings chain, and the product-bound and series calculators used to judge
//! whether the per-level crossing costs stay summable.

use crate::geom::{interval_subset, Rect};
use crate::gridforks::{GridHierarchy, WindowSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RoadsError {
    #[error("index 1 is served by erb_first, which returns the fork itself")]
    UseErbFirst,
    #[error("escape-route index must be at least 2, got {0}")]
    IndexTooSmall(usize),
    #[error("window chain holds {len} windows but index {needed} is required")]
    ChainTooShort { needed: usize, len: usize },
    #[error("hierarchy has no window levels to chain")]
    NoWindows,
    #[error("window side {s} does not exceed frame width {w}")]
    DegenerateWindow { s: u64, w: u64 },
    #[error("contraction constant must lie strictly inside (0, 1), got {0}")]
    BadContraction(f64),
    #[error("need progression factors through index {needed}, got {got}")]
    TooFewFactors { needed: usize, got: usize },
    #[error("need block lengths through index {needed}, got {got}")]
    TooFewLengths { needed: usize, got: usize },
}

/// Which crossing a rectangle is meant to carry.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

impl std::fmt::Display for Orientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Orientation::Horizontal => "horizontal",
            Orientation::Vertical => "vertical",
        })
    }
}

/// A width x height rectangle of sites tagged with its intended crossing.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RectSpec {
    pub anchor: (i64, i64),
    pub width: u64,
    pub height: u64,
    pub orientation: Orientation,
}

impl RectSpec {
    pub fn new(anchor: (i64, i64), width: u64, height: u64, orientation: Orientation) -> Self {
        assert!(width >= 1 && height >= 1, "empty rectangle");
        RectSpec { anchor, width, height, orientation }
    }

    pub fn rect(&self) -> Rect {
        Rect::new(self.anchor.0, self.anchor.1, self.width, self.height)
    }
}

/// Where a road rectangle came from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum RoadRole {
    /// Right-attached vertical frame with its top band removed.
    CutFrame,
    /// Bottom bar of a fork, extended right into the next window's frame.
    ExtendedBottom,
    /// Leftmost frame column of the previous window, extended upward.
    LeftExtension,
    /// Topmost horizontal frame of a window.
    TopFrame,
    /// Wide strip of an aspect-ratio covering.
    CoveringStrip,
    /// Square overlap between consecutive covering strips.
    CoveringSquare,
}

impl std::fmt::Display for RoadRole {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RoadRole::CutFrame => "cut_frame",
            RoadRole::ExtendedBottom => "extended_bottom",
            RoadRole::LeftExtension => "left_extension",
            RoadRole::TopFrame => "top_frame",
            RoadRole::CoveringStrip => "covering_strip",
            RoadRole::CoveringSquare => "covering_square",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RoadProvenance {
    /// 1-based position in the window chain the rectangle was derived from
    /// (0 for plans not tied to a chain).
    pub chain_index: usize,
    pub window_anchor: (i64, i64),
    pub role: RoadRole,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RoadEntry {
    pub rect: RectSpec,
    pub provenance: RoadProvenance,
}

/// Ordered rectangle sequence meant to be crossed alternately.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct RoadPlan {
    pub entries: Vec<RoadEntry>,
}

impl RoadPlan {
    pub fn rects(&self) -> impl Iterator<Item = &RectSpec> {
        self.entries.iter().map(|e| &e.rect)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Smallest rectangle containing every planned rectangle.
    pub fn bounding_box(&self) -> Option<Rect> {
        let first = self.entries.first()?.rect.rect();
        let mut x0 = first.x0;
        let mut y0 = first.y0;
        let mut x1 = first.x1();
        let mut y1 = first.y1();
        for e in &self.entries[1..] {
            let r = e.rect.rect();
            x0 = x0.min(r.x0);
            y0 = y0.min(r.y0);
            x1 = x1.max(r.x1());
            y1 = y1.max(r.y1());
        }
        Some(Rect::new(x0, y0, (x1 - x0) as u64, (y1 - y0) as u64))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "index,crossing,anchor_x,anchor_y,width,height,chain_index,window_x,window_y,role\n",
        );
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                i,
                e.rect.orientation,
                e.rect.anchor.0,
                e.rect.anchor.1,
                e.rect.width,
                e.rect.height,
                e.provenance.chain_index,
                e.provenance.window_anchor.0,
                e.provenance.window_anchor.1,
                e.provenance.role,
            ));
        }
        out
    }
}

/// Ascending window chain W_1, W_2, ... where each window's square is the first
/// pane of the next. `window(k)` uses the 1-based chain position; W_k has grid
/// level k-1.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WindowChain {
    windows: Vec<WindowSpec>,
}

impl WindowChain {
    /// Descend from the canonical top-level window, taking pane (0, 0) at every
    /// step. Deterministic given the hierarchy.
    pub fn from_top(h: &GridHierarchy) -> Result<WindowChain, RoadsError> {
        let top = h.top_level();
        if top == 0 {
            return Err(RoadsError::NoWindows);
        }
        let shade = h.canonical_shade();
        let mut current = h
            .window_at(top - 1, (shade.x0, shade.y0))
            .expect("the canonical square hosts a top-level window");
        let mut windows = vec![current];
        while current.level > 0 {
            let pane = current.pane(0, 0);
            let child = h
                .window_at(current.level - 1, (pane.x0, pane.y0))
                .expect("panes of a surviving window survive");
            debug_assert_eq!(child.anchor, (pane.x0, pane.y0));
            windows.push(child);
            current = child;
        }
        windows.reverse();
        Ok(WindowChain { windows })
    }

    pub fn from_windows(windows: Vec<WindowSpec>) -> WindowChain {
        WindowChain { windows }
    }

    /// Number of windows; valid 1-based indices are 1..=len().
    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn windows(&self) -> &[WindowSpec] {
        &self.windows
    }

    pub fn window(&self, k: usize) -> Result<&WindowSpec, RoadsError> {
        if k == 0 || k > self.windows.len() {
            return Err(RoadsError::ChainTooShort { needed: k, len: self.windows.len() });
        }
        Ok(&self.windows[k - 1])
    }
}

fn checked_span(w: &WindowSpec) -> Result<u64, RoadsError> {
    if w.s <= w.w {
        return Err(RoadsError::DegenerateWindow { s: w.s, w: w.w });
    }
    Ok(w.s - w.w)
}

/// The vertical frame of `window` whose left edge abuts the given square from
/// the right. Grid geometry makes it unique; that is asserted at runtime.
fn right_attached_frame(window: &WindowSpec, square: Rect) -> Rect {
    let matches: Vec<Rect> = (0..window.q)
        .map(|i| window.v_frame(i))
        .filter(|f| f.x0 == square.x1())
        .collect();
    assert_eq!(matches.len(), 1, "exactly one frame can abut the square at its right edge");
    matches[0]
}

/// Escape route to the right and bottom for chain position k >= 2: the cut
/// right-attached frame (to be crossed vertically) and the extended bottom bar
/// (to be crossed horizontally).
///
/// The cut frame is w(W_k) x (s(W_k)-w(W_k)): the full frame minus its top band,
/// keeping it inside the fork. The extended bottom spans
/// (s(W_k)-w(W_k)+w(W_{k+1})) x w(W_k), running from the fork's bottom bar into
/// the right-attached frame of W_{k+1}.
pub fn erb(chain: &WindowChain, k: usize) -> Result<(RectSpec, RectSpec), RoadsError> {
    if k < 2 {
        return Err(RoadsError::UseErbFirst);
    }
    let prev = chain.window(k - 1)?;
    let cur = chain.window(k)?;
    let next = chain.window(k + 1)?;
    let span = checked_span(cur)?;
    let frame = right_attached_frame(cur, prev.shade());
    let cut = RectSpec::new((frame.x0, cur.anchor.1), cur.w, span, Orientation::Vertical);
    let bottom = RectSpec::new(
        (cur.anchor.0 + cur.w as i64, cur.anchor.1),
        span + next.w,
        cur.w,
        Orientation::Horizontal,
    );
    Ok((cut, bottom))
}

/// Escape route for chain position 1: the whole first fork plus its extended
/// bottom, as a site set (bottom-up row-major, deduplicated).
pub fn erb_first(chain: &WindowChain) -> Result<Vec<(i64, i64)>, RoadsError> {
    let first = chain.window(1)?;
    let second = chain.window(2)?;
    let span = checked_span(first)?;
    let mut sites: Vec<(i64, i64)> = first
        .fork_sites()
        .map_err(|_| RoadsError::DegenerateWindow { s: first.s, w: first.w })?;
    let bottom = Rect::new(
        first.anchor.0 + first.w as i64,
        first.anchor.1,
        span + second.w,
        first.w,
    );
    sites.extend(bottom.sites());
    sites.sort_by_key(|&(x, y)| (y, x));
    sites.dedup();
    Ok(sites)
}

/// Escape route to the left and top for chain position k >= 2: the previous
/// window's leftmost frame column extended upward through W_k's square (crossed
/// vertically) and W_k's topmost frame (crossed horizontally). Both stay in the
/// closed phase.
pub fn elt(chain: &WindowChain, k: usize) -> Result<(RectSpec, RectSpec), RoadsError> {
    if k < 2 {
        return Err(RoadsError::IndexTooSmall(k));
    }
    let prev = chain.window(k - 1)?;
    let cur = chain.window(k)?;
    let span = checked_span(cur)?;
    let ext = RectSpec::new(
        (prev.anchor.0, cur.anchor.1 + cur.w as i64),
        prev.w,
        span,
        Orientation::Vertical,
    );
    let top = RectSpec::new(
        (cur.anchor.0, cur.anchor.1 + span as i64),
        cur.s,
        cur.w,
        Orientation::Horizontal,
    );
    Ok((ext, top))
}

/// Concatenated escape-route plan through the open phase, positions 2..len-1.
/// Position len is omitted because its extended bottom would leave the last
/// window's frame structure; a two-window chain yields an empty plan.
pub fn erb_road(chain: &WindowChain) -> Result<RoadPlan, RoadsError> {
    let mut entries = Vec::new();
    for k in 2..chain.len() {
        let (cut, bottom) = erb(chain, k)?;
        let anchor = chain.window(k)?.anchor;
        entries.push(RoadEntry {
            rect: cut,
            provenance: RoadProvenance { chain_index: k, window_anchor: anchor, role: RoadRole::CutFrame },
        });
        entries.push(RoadEntry {
            rect: bottom,
            provenance: RoadProvenance {
                chain_index: k,
                window_anchor: anchor,
                role: RoadRole::ExtendedBottom,
            },
        });
    }
    Ok(RoadPlan { entries })
}

/// Concatenated escape-route plan through the closed phase, positions 2..=len.
pub fn elt_road(chain: &WindowChain) -> Result<RoadPlan, RoadsError> {
    let mut entries = Vec::new();
    for k in 2..=chain.len() {
        let (ext, top) = elt(chain, k)?;
        let anchor = chain.window(k)?.anchor;
        entries.push(RoadEntry {
            rect: ext,
            provenance: RoadProvenance {
                chain_index: k,
                window_anchor: anchor,
                role: RoadRole::LeftExtension,
            },
        });
        entries.push(RoadEntry {
            rect: top,
            provenance: RoadProvenance { chain_index: k, window_anchor: anchor, role: RoadRole::TopFrame },
        });
    }
    Ok(RoadPlan { entries })
}

/// Outcome of the pairwise containment validation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct JoinCheck {
    pub ok: bool,
    /// 1-based positions of the first offending pair.
    pub first_violation: Option<(usize, usize)>,
    pub reason: Option<String>,
}

/// A vertical rectangle followed by a horizontal one chain when the vertical's
/// x extent sits inside the horizontal's and the horizontal's y extent sits
/// inside the vertical's; the mirrored conditions apply the other way around.
/// Types must alternate. A plan of zero or one rectangle passes vacuously.
pub fn validate_well_joined(plan: &RoadPlan) -> JoinCheck {
    for i in 0..plan.entries.len().saturating_sub(1) {
        let a = &plan.entries[i].rect;
        let b = &plan.entries[i + 1].rect;
        let pair = (i + 1, i + 2);
        if a.orientation == b.orientation {
            return JoinCheck {
                ok: false,
                first_violation: Some(pair),
                reason: Some(format!("consecutive {} rectangles do not alternate", a.orientation)),
            };
        }
        let joined = match a.orientation {
            Orientation::Vertical => {
                interval_subset(a.rect().x_interval(), b.rect().x_interval())
                    && interval_subset(b.rect().y_interval(), a.rect().y_interval())
            }
            Orientation::Horizontal => {
                interval_subset(b.rect().x_interval(), a.rect().x_interval())
                    && interval_subset(a.rect().y_interval(), b.rect().y_interval())
            }
        };
        if !joined {
            return JoinCheck {
                ok: false,
                first_violation: Some(pair),
                reason: Some("containment fails for the consecutive pair".to_string()),
            };
        }
    }
    JoinCheck { ok: true, first_violation: None, reason: None }
}

/// Truncated product bound and its exponent budget.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct FkgBound {
    /// Product over i = 2..=i_max of c^(8 L_{i+1} L_i / l_i^gamma).
    pub product: f64,
    /// Total exponent applied to c.
    pub exponent_sum: f64,
    /// Geometric estimate of the exponent mass beyond i_max (infinite when the
    /// last observed term ratio is not below one).
    pub tail_exponent: f64,
    /// Exponent terms, index 0 corresponding to i = 2.
    pub terms: Vec<f64>,
}

/// Lower-bound product for surviving every escape-route crossing: each level i
/// contributes the factor c raised to 8 L_{i+1} L_i / l_i^gamma. `factors[j]`
/// holds L_{j+1} and `l_seq[i]` holds l_i.
pub fn fkg_product_bound(
    c: f64,
    gamma: f64,
    factors: &[f64],
    l_seq: &[f64],
    i_max: usize,
) -> Result<FkgBound, RoadsError> {
    if !(c > 0.0 && c < 1.0) {
        return Err(RoadsError::BadContraction(c));
    }
    if factors.len() < i_max + 1 {
        return Err(RoadsError::TooFewFactors { needed: i_max + 1, got: factors.len() });
    }
    if l_seq.len() < i_max + 1 {
        return Err(RoadsError::TooFewLengths { needed: i_max, got: l_seq.len() });
    }
    let mut terms = Vec::new();
    for i in 2..=i_max {
        terms.push(8.0 * factors[i] * factors[i - 1] / l_seq[i].powf(gamma));
    }
    let exponent_sum: f64 = terms.iter().sum();
    let tail_exponent = geometric_tail(&terms);
    Ok(FkgBound { product: c.powf(exponent_sum), exponent_sum, tail_exponent, terms })
}

fn geometric_tail(terms: &[f64]) -> f64 {
    match terms {
        [.., a, b] if *b < *a => {
            let r = b / a;
            b * r / (1.0 - r)
        }
        [] | [_] => 0.0,
        _ => f64::INFINITY,
    }
}

/// Whether successive terms shrink from some index on.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Convergence {
    pub converges: bool,
    /// First position (into the term vector) from which every successive ratio
    /// stays below one.
    pub ratio_below_one_from: Option<usize>,
}

fn convergence_of(terms: &[f64]) -> Convergence {
    if terms.len() < 2 {
        return Convergence { converges: false, ratio_below_one_from: None };
    }
    let mut from = terms.len() - 1;
    while from > 0 && terms[from] < terms[from - 1] {
        from -= 1;
    }
    if from + 1 < terms.len() {
        Convergence { converges: true, ratio_below_one_from: Some(from) }
    } else {
        Convergence { converges: false, ratio_below_one_from: None }
    }
}

/// Partial sums of the two crossing-cost series.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct RoadSums {
    /// Terms L_{i+1} L_i / l_i^gamma, index 0 corresponding to i = 2.
    pub right_bottom_terms: Vec<f64>,
    pub right_bottom_partial: Vec<f64>,
    pub right_bottom: Convergence,
    /// Terms L_{i+2} L_{i+1} L_i / l_i^gamma, index 0 corresponding to i = 1.
    pub left_top_terms: Vec<f64>,
    pub left_top_partial: Vec<f64>,
    pub left_top: Convergence,
}

/// Series diagnostics for both escape-route families. The right-and-bottom
/// series starts at i = 2, the left-and-top series at i = 1; `factors[j]` holds
/// L_{j+1} and `l_seq[i]` holds l_i. Any finite gamma is accepted so divergent
/// regimes can be demonstrated.
pub fn road_sums(
    factors: &[f64],
    l_seq: &[f64],
    gamma: f64,
    i_max: usize,
) -> Result<RoadSums, RoadsError> {
    if factors.len() < i_max + 2 {
        return Err(RoadsError::TooFewFactors { needed: i_max + 2, got: factors.len() });
    }
    if l_seq.len() < i_max + 1 {
        return Err(RoadsError::TooFewLengths { needed: i_max, got: l_seq.len() });
    }
    let mut rb_terms = Vec::new();
    for i in 2..=i_max {
        rb_terms.push(factors[i] * factors[i - 1] / l_seq[i].powf(gamma));
    }
    let mut lt_terms = Vec::new();
    for i in 1..=i_max {
        lt_terms.push(factors[i + 1] * factors[i] * factors[i - 1] / l_seq[i].powf(gamma));
    }
    let partial = |terms: &[f64]| {
        terms
            .iter()
            .scan(0.0f64, |acc, t| {
                *acc += t;
                Some(*acc)
            })
            .collect::<Vec<f64>>()
    };
    Ok(RoadSums {
        right_bottom_partial: partial(&rb_terms),
        right_bottom: convergence_of(&rb_terms),
        right_bottom_terms: rb_terms,
        left_top_partial: partial(&lt_terms),
        left_top: convergence_of(&lt_terms),
        left_top_terms: lt_terms,
    })
}

/// Block lengths l_0..=l_top in floating point; the integer recursion overflows
/// 64 bits near level 12 with doubling factors, floats keep going.
pub fn l_sequence_f64(l0: f64, d0: f64, factors: &[f64], top: usize) -> Result<Vec<f64>, RoadsError> {
    if factors.len() < top {
        return Err(RoadsError::TooFewFactors { needed: top, got: factors.len() });
    }
    let mut l = vec![l0];
    let mut d = d0;
    for &factor in factors.iter().take(top) {
        let prev_l = *l.last().expect("nonempty");
        l.push(d);
        d = factor * prev_l + (factor - 1.0) * d;
    }
    Ok(l)
}

/// Doubling factor sequence L_i = 2^i for i = 1..=count.
pub fn pow2_factors(count: usize) -> Vec<f64> {
    (1..=count).map(|i| 2f64.powi(i as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridforks::sample_hierarchy;

    fn chain_222(seed: u64) -> (GridHierarchy, WindowChain) {
        let h = sample_hierarchy(2, 2, &[2, 2, 2], seed).unwrap();
        let chain = WindowChain::from_top(&h).unwrap();
        (h, chain)
    }

    #[test]
    fn chain_descends_through_first_panes() {
        let (h, chain) = chain_222(11);
        assert_eq!(chain.len(), 3);
        for k in 1..chain.len() {
            let child = chain.window(k).unwrap();
            let parent = chain.window(k + 1).unwrap();
            assert_eq!(child.level + 1, parent.level);
            assert_eq!(parent.pane_index(child.shade()), Some((0, 0)));
        }
        assert_eq!(chain.window(3).unwrap().s, h.params()[3].d);
    }

    #[test]
    fn erb_sizes_follow_the_window_parameters() {
        let (_, chain) = chain_222(4);
        let (cut, bottom) = erb(&chain, 2).unwrap();
        let w2 = chain.window(2).unwrap();
        let w3 = chain.window(3).unwrap();
        assert_eq!((cut.width, cut.height), (w2.w, w2.s - w2.w));
        assert_eq!(cut.orientation, Orientation::Vertical);
        assert_eq!((bottom.width, bottom.height), (w2.s - w2.w + w3.w, w2.w));
        assert_eq!(bottom.orientation, Orientation::Horizontal);
        // the cut frame is the one just right of the previous window's square
        assert_eq!(cut.anchor.0, chain.window(1).unwrap().shade().x1());
        assert_eq!(cut.anchor.1, w2.anchor.1);
    }

    #[test]
    fn erb_boundary_indices() {
        let (_, chain) = chain_222(4);
        assert!(matches!(erb(&chain, 1), Err(RoadsError::UseErbFirst)));
        assert!(matches!(erb(&chain, 3), Err(RoadsError::ChainTooShort { needed: 4, len: 3 })));
    }

    #[test]
    fn erb_rects_live_in_the_open_phase() {
        for seed in 0..10 {
            let (h, chain) = chain_222(seed);
            let plan = erb_road(&chain).unwrap();
            assert_eq!(plan.len(), 2);
            for entry in &plan.entries {
                for site in entry.rect.rect().sites() {
                    assert!(h.is_rf_open(site), "{site:?} must be open in {:?}", entry.provenance.role);
                }
            }
            assert!(validate_well_joined(&plan).ok);
        }
    }

    #[test]
    fn erb_first_is_fork_plus_extended_bottom() {
        let (h, chain) = chain_222(7);
        let sites = erb_first(&chain).unwrap();
        let w1 = chain.window(1).unwrap();
        let w2 = chain.window(2).unwrap();
        for f in w1.fork_sites().unwrap() {
            assert!(sites.binary_search_by_key(&(f.1, f.0), |&(x, y)| (y, x)).is_ok());
        }
        // the extension pokes w(W_2) columns past the square's right edge
        let tip = (w1.shade().x1() + w2.w as i64 - 1, w1.anchor.1);
        assert!(sites.contains(&tip));
        for &site in &sites {
            assert!(h.is_rf_open(site));
            assert!(!w1.v_frame(0).contains(site));
        }
    }

    #[test]
    fn elt_sizes_and_closed_phase() {
        for seed in 0..10 {
            let (h, chain) = chain_222(seed);
            let plan = elt_road(&chain).unwrap();
            assert_eq!(plan.len(), 4);
            for k in 2..=chain.len() {
                let (ext, top) = elt(&chain, k).unwrap();
                let prev = chain.window(k - 1).unwrap();
                let cur = chain.window(k).unwrap();
                assert_eq!((ext.width, ext.height), (prev.w, cur.s - cur.w));
                assert_eq!((top.width, top.height), (cur.s, cur.w));
                // the extension contains the previous leftmost frame entirely
                assert!(ext.rect().contains_rect(&prev.v_frame(0)));
            }
            for entry in &plan.entries {
                for site in entry.rect.rect().sites() {
                    assert!(!h.is_rf_open(site), "{site:?} must be closed in {:?}", entry.provenance.role);
                }
            }
            assert!(validate_well_joined(&plan).ok);
        }
    }

    #[test]
    fn join_validation_flags_the_first_bad_pair() {
        let single = RoadPlan {
            entries: vec![RoadEntry {
                rect: RectSpec::new((0, 0), 3, 1, Orientation::Horizontal),
                provenance: RoadProvenance { chain_index: 0, window_anchor: (0, 0), role: RoadRole::CoveringStrip },
            }],
        };
        assert!(validate_well_joined(&single).ok);

        let prov = RoadProvenance { chain_index: 0, window_anchor: (0, 0), role: RoadRole::CoveringStrip };
        let disjoint = RoadPlan {
            entries: vec![
                RoadEntry { rect: RectSpec::new((0, 0), 2, 5, Orientation::Vertical), provenance: prov },
                RoadEntry { rect: RectSpec::new((40, 40), 5, 2, Orientation::Horizontal), provenance: prov },
            ],
        };
        let check = validate_well_joined(&disjoint);
        assert!(!check.ok);
        assert_eq!(check.first_violation, Some((1, 2)));

        let same_type = RoadPlan {
            entries: vec![
                RoadEntry { rect: RectSpec::new((0, 0), 2, 5, Orientation::Vertical), provenance: prov },
                RoadEntry { rect: RectSpec::new((0, 0), 2, 5, Orientation::Vertical), provenance: prov },
            ],
        };
        assert!(!validate_well_joined(&same_type).ok);

        let contained = RoadPlan {
            entries: vec![
                RoadEntry { rect: RectSpec::new((2, 0), 1, 4, Orientation::Vertical), provenance: prov },
                RoadEntry { rect: RectSpec::new((0, 1), 6, 2, Orientation::Horizontal), provenance: prov },
            ],
        };
        assert!(validate_well_joined(&contained).ok);
    }

    #[test]
    fn fkg_bound_basics() {
        let factors = pow2_factors(12);
        let l_seq = l_sequence_f64(2.0, 2.0, &factors, 11).unwrap();
        let bound = fkg_product_bound(0.9, 1.0, &factors, &l_seq, 10).unwrap();
        // first exponent term sits at i = 2
        let expected = 8.0 * factors[2] * factors[1] / l_seq[2];
        assert!((bound.terms[0] - expected).abs() < 1e-12);
        assert!(bound.product > 0.0 && bound.product < 1.0);
        assert!(bound.tail_exponent.is_finite());
        // nearly no contraction: bound close to one
        let soft = fkg_product_bound(1.0 - 1e-12, 1.0, &factors, &l_seq, 10).unwrap();
        assert!(soft.product > 1.0 - 1e-6);
        assert!(matches!(
            fkg_product_bound(1.0, 1.0, &factors, &l_seq, 10),
            Err(RoadsError::BadContraction(_))
        ));
        // truncation depth only shrinks the product
        let shallow = fkg_product_bound(0.9, 1.0, &factors, &l_seq, 5).unwrap();
        assert!(bound.product <= shallow.product);
    }

    #[test]
    fn series_terms_match_the_doubling_instantiation() {
        let factors = pow2_factors(14);
        let l_seq = l_sequence_f64(2.0, 2.0, &factors, 12).unwrap();
        let sums = road_sums(&factors, &l_seq, 1.0, 12).unwrap();
        for (j, term) in sums.right_bottom_terms.iter().enumerate() {
            let i = j + 2;
            let expected = 2f64.powi(2 * i as i32 + 1) / l_seq[i];
            assert!((term - expected).abs() / expected < 1e-12);
        }
        for (j, term) in sums.left_top_terms.iter().enumerate() {
            let i = j + 1;
            let expected = 2f64.powi(3 * i as i32 + 3) / l_seq[i];
            assert!((term - expected).abs() / expected < 1e-12);
        }
        assert!(sums.right_bottom.converges);
        assert!(sums.left_top.converges);
    }

    #[test]
    fn zero_exponent_series_diverges_and_kills_the_product() {
        let factors = pow2_factors(30);
        let l_seq = l_sequence_f64(2.0, 2.0, &factors, 28).unwrap();
        let sums = road_sums(&factors, &l_seq, 0.0, 28).unwrap();
        assert!(!sums.right_bottom.converges);
        assert!(!sums.left_top.converges);
        let bound = fkg_product_bound(0.9, 0.0, &factors, &l_seq, 28).unwrap();
        assert_eq!(bound.product, 0.0);
        let healthy = fkg_product_bound(0.9, 1.0, &factors, &l_seq, 28).unwrap();
        assert!(healthy.product > 0.0);
    }

    #[test]
    fn l_sequence_matches_integer_recursion_while_it_fits() {
        let factors_int = [2u64, 4, 8];
        let params = crate::gridforks::param_recursion(2, 2, &factors_int).unwrap();
        let factors: Vec<f64> = factors_int.iter().map(|&f| f as f64).collect();
        let l_seq = l_sequence_f64(2.0, 2.0, &factors, 3).unwrap();
        for (k, p) in params.iter().enumerate() {
            assert_eq!(l_seq[k], p.l as f64);
        }
    }
}
