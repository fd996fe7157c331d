//! Site and bond configurations on finite windows of the square lattice, cluster
//! labeling under 4-neighbor adjacency, and the portable-bitmap / CSV exchange
//! formats.
//!
//! A [`SiteConfig`] assigns every site of a rectangular window the value 1 (open)
//! or 0 (closed). A [`BondConfig`] marks nearest-neighbor bonds open or closed.
//! Clusters are maximal connected sets: same-value sites joined by lattice edges
//! for site configurations, sites joined by open bonds for bond configurations.
//! Each component records whether it touches the window boundary, the finite-window
//! stand-in for unbounded extent.

use crate::geom::Rect;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("bitmap parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// 0/1 site configuration on the window `[anchor.0, anchor.0+width) x [anchor.1, ..)`.
/// Values are stored row-major, bottom row first.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SiteConfig {
    anchor: (i64, i64),
    width: usize,
    height: usize,
    values: Vec<u8>,
}

impl SiteConfig {
    /// All-closed configuration. Width and height must be positive.
    pub fn new(anchor: (i64, i64), width: usize, height: usize) -> Self {
        assert!(width >= 1 && height >= 1, "window must be nonempty");
        SiteConfig { anchor, width, height, values: vec![0; width * height] }
    }

    pub fn from_values(
        anchor: (i64, i64),
        width: usize,
        height: usize,
        values: Vec<u8>,
    ) -> Result<Self, LatticeError> {
        if width < 1 || height < 1 {
            return Err(LatticeError::Invalid("window must be nonempty".into()));
        }
        if values.len() != width * height {
            return Err(LatticeError::Invalid(format!(
                "value count {} does not match {}x{} window",
                values.len(),
                width,
                height
            )));
        }
        if values.iter().any(|&v| v > 1) {
            return Err(LatticeError::Invalid("site values must be 0 or 1".into()));
        }
        Ok(SiteConfig { anchor, width, height, values })
    }

    pub fn anchor(&self) -> (i64, i64) {
        self.anchor
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn window(&self) -> Rect {
        Rect::new(self.anchor.0, self.anchor.1, self.width as u64, self.height as u64)
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    fn index(&self, site: (i64, i64)) -> Option<usize> {
        let dx = site.0 - self.anchor.0;
        let dy = site.1 - self.anchor.1;
        if dx < 0 || dy < 0 || dx >= self.width as i64 || dy >= self.height as i64 {
            None
        } else {
            Some(dy as usize * self.width + dx as usize)
        }
    }

    /// Value at an absolute site, None outside the window.
    pub fn get(&self, site: (i64, i64)) -> Option<u8> {
        self.index(site).map(|i| self.values[i])
    }

    /// Set an absolute site. Panics outside the window or on a non-bit value.
    pub fn set(&mut self, site: (i64, i64), value: u8) {
        assert!(value <= 1, "site values must be 0 or 1");
        let i = self.index(site).expect("site outside window");
        self.values[i] = value;
    }

    pub fn open_count(&self) -> usize {
        self.values.iter().filter(|&&v| v == 1).count()
    }

    /// The same configuration moved by `v`: the new window is the old one
    /// translated, values unchanged.
    pub fn translated(&self, v: (i64, i64)) -> SiteConfig {
        let mut c = self.clone();
        c.anchor = (self.anchor.0 + v.0, self.anchor.1 + v.1);
        c
    }

    /// Pointwise 0 <-> 1 swap.
    pub fn phase_flipped(&self) -> SiteConfig {
        let mut c = self.clone();
        for v in &mut c.values {
            *v = 1 - *v;
        }
        c
    }
}

/// Open/closed nearest-neighbor bonds on a width x height site window.
/// `horizontal[y*(width-1)+x]` is the bond (x,y)-(x+1,y) in window coordinates,
/// `vertical[y*width+x]` the bond (x,y)-(x,y+1).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BondConfig {
    anchor: (i64, i64),
    width: usize,
    height: usize,
    horizontal: Vec<bool>,
    vertical: Vec<bool>,
}

impl BondConfig {
    /// All-closed bond configuration. Width and height must be positive.
    pub fn new(anchor: (i64, i64), width: usize, height: usize) -> Self {
        assert!(width >= 1 && height >= 1, "window must be nonempty");
        BondConfig {
            anchor,
            width,
            height,
            horizontal: vec![false; (width - 1) * height],
            vertical: vec![false; width * (height - 1)],
        }
    }

    pub fn anchor(&self) -> (i64, i64) {
        self.anchor
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn window(&self) -> Rect {
        Rect::new(self.anchor.0, self.anchor.1, self.width as u64, self.height as u64)
    }

    pub fn horizontal_count(&self) -> usize {
        self.horizontal.len()
    }

    pub fn vertical_count(&self) -> usize {
        self.vertical.len()
    }

    pub fn open_count(&self) -> usize {
        self.horizontal.iter().filter(|&&b| b).count()
            + self.vertical.iter().filter(|&&b| b).count()
    }

    /// Bond (x,y)-(x+1,y) in window coordinates.
    pub fn h_bond(&self, x: usize, y: usize) -> bool {
        self.horizontal[y * (self.width - 1) + x]
    }

    pub fn set_h_bond(&mut self, x: usize, y: usize, open: bool) {
        self.horizontal[y * (self.width - 1) + x] = open;
    }

    /// Bond (x,y)-(x,y+1) in window coordinates.
    pub fn v_bond(&self, x: usize, y: usize) -> bool {
        self.vertical[y * self.width + x]
    }

    pub fn set_v_bond(&mut self, x: usize, y: usize, open: bool) {
        self.vertical[y * self.width + x] = open;
    }

    pub fn translated(&self, v: (i64, i64)) -> BondConfig {
        let mut c = self.clone();
        c.anchor = (self.anchor.0 + v.0, self.anchor.1 + v.1);
        c
    }
}

/// Summary of one connected component.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub size: usize,
    /// Site value shared by the component (always 1 for bond clusters, whose
    /// vertices carry no phase of their own).
    pub phase: u8,
    /// Whether any member site lies on the window boundary.
    pub touches_boundary: bool,
}

/// Per-site component ids plus per-component summaries. Component ids are compact
/// (0..component_count) and assigned in first-visit order of a bottom-up row-major
/// scan, which makes labelings of equal configurations identical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClusterLabeling {
    anchor: (i64, i64),
    width: usize,
    height: usize,
    labels: Vec<u32>,
    components: Vec<ComponentInfo>,
}

impl ClusterLabeling {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ComponentInfo] {
        &self.components
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Component id at an absolute site, None outside the window.
    pub fn label_at(&self, site: (i64, i64)) -> Option<u32> {
        let dx = site.0 - self.anchor.0;
        let dy = site.1 - self.anchor.1;
        if dx < 0 || dy < 0 || dx >= self.width as i64 || dy >= self.height as i64 {
            None
        } else {
            Some(self.labels[dy as usize * self.width + dx as usize])
        }
    }

    pub fn component(&self, id: u32) -> &ComponentInfo {
        &self.components[id as usize]
    }

    /// Components filtered by phase.
    pub fn components_of_phase(&self, phase: u8) -> impl Iterator<Item = (u32, &ComponentInfo)> {
        self.components
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.phase == phase)
            .map(|(i, c)| (i as u32, c))
    }
}

fn finish_labeling(
    anchor: (i64, i64),
    width: usize,
    height: usize,
    uf: &mut crate::unionfind::UnionFind,
    phase_of: impl Fn(usize) -> u8,
) -> ClusterLabeling {
    let n = width * height;
    let mut compact: Vec<u32> = vec![u32::MAX; n];
    let mut labels = vec![0u32; n];
    let mut components: Vec<ComponentInfo> = Vec::new();
    for i in 0..n {
        let root = uf.find(i as u32) as usize;
        if compact[root] == u32::MAX {
            compact[root] = components.len() as u32;
            components.push(ComponentInfo { size: 0, phase: phase_of(i), touches_boundary: false });
        }
        let id = compact[root];
        labels[i] = id;
        let comp = &mut components[id as usize];
        comp.size += 1;
        let (x, y) = (i % width, i / width);
        if x == 0 || y == 0 || x == width - 1 || y == height - 1 {
            comp.touches_boundary = true;
        }
    }
    ClusterLabeling { anchor, width, height, labels, components }
}

/// Connected components of same-value sites under 4-neighbor adjacency.
pub fn label_clusters(config: &SiteConfig) -> ClusterLabeling {
    let (w, h) = (config.width, config.height);
    let v = &config.values;
    let mut uf = crate::unionfind::UnionFind::new(w * h);
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if x + 1 < w && v[i] == v[i + 1] {
                uf.union(i as u32, (i + 1) as u32);
            }
            if y + 1 < h && v[i] == v[i + w] {
                uf.union(i as u32, (i + w) as u32);
            }
        }
    }
    finish_labeling(config.anchor, w, h, &mut uf, |i| v[i])
}

/// Connected components of sites joined by open bonds. Isolated sites form
/// singleton components.
pub fn label_bond_clusters(config: &BondConfig) -> ClusterLabeling {
    let (w, h) = (config.width, config.height);
    let mut uf = crate::unionfind::UnionFind::new(w * h);
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if x + 1 < w && config.h_bond(x, y) {
                uf.union(i as u32, (i + 1) as u32);
            }
            if y + 1 < h && config.v_bond(x, y) {
                uf.union(i as u32, (i + w) as u32);
            }
        }
    }
    finish_labeling(config.anchor, w, h, &mut uf, |_| 1)
}

/// Plain-text portable bitmap (P1), one row per line, top row first, 1 = open.
/// A nonzero anchor is recorded in a comment so the round trip is exact.
pub fn export_bitmap(config: &SiteConfig) -> String {
    let mut out = String::new();
    out.push_str("P1\n");
    if config.anchor != (0, 0) {
        out.push_str(&format!("# anchor {} {}\n", config.anchor.0, config.anchor.1));
    }
    out.push_str(&format!("{} {}\n", config.width, config.height));
    for y in (0..config.height).rev() {
        let row: Vec<&str> = (0..config.width)
            .map(|x| if config.values[y * config.width + x] == 1 { "1" } else { "0" })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parse the P1 text produced by [`export_bitmap`]. Also accepts general P1 input:
/// comments anywhere before the pixel data, pixels packed without separators.
pub fn import_bitmap(text: &str) -> Result<SiteConfig, LatticeError> {
    let mut anchor = (0i64, 0i64);
    let mut tokens: Vec<&str> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() == 3 && parts[0] == "anchor" {
                let ax = parts[1]
                    .parse()
                    .map_err(|_| LatticeError::Parse("bad anchor x".into()))?;
                let ay = parts[2]
                    .parse()
                    .map_err(|_| LatticeError::Parse("bad anchor y".into()))?;
                anchor = (ax, ay);
            }
            continue;
        }
        tokens.extend(line.split_whitespace());
    }
    let mut it = tokens.into_iter();
    match it.next() {
        Some("P1") => {}
        other => {
            return Err(LatticeError::Parse(format!(
                "expected P1 magic, found {:?}",
                other.unwrap_or("<eof>")
            )))
        }
    }
    let width: usize = it
        .next()
        .ok_or_else(|| LatticeError::Parse("missing width".into()))?
        .parse()
        .map_err(|_| LatticeError::Parse("bad width".into()))?;
    let height: usize = it
        .next()
        .ok_or_else(|| LatticeError::Parse("missing height".into()))?
        .parse()
        .map_err(|_| LatticeError::Parse("bad height".into()))?;
    if width < 1 || height < 1 {
        return Err(LatticeError::Parse("degenerate dimensions".into()));
    }
    let mut bits: Vec<u8> = Vec::with_capacity(width * height);
    for tok in it {
        for ch in tok.chars() {
            match ch {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => return Err(LatticeError::Parse(format!("unexpected pixel char '{ch}'"))),
            }
        }
    }
    if bits.len() != width * height {
        return Err(LatticeError::Parse(format!(
            "expected {} pixels, found {}",
            width * height,
            bits.len()
        )));
    }
    // rows arrive top first; storage is bottom first
    let mut values = vec![0u8; width * height];
    for (row_idx, chunk) in bits.chunks(width).enumerate() {
        let y = height - 1 - row_idx;
        values[y * width..(y + 1) * width].copy_from_slice(chunk);
    }
    SiteConfig::from_values(anchor, width, height, values)
}

/// Per-component CSV: id, phase, size, boundary flag.
pub fn labeling_csv(labeling: &ClusterLabeling) -> String {
    let mut out = String::from("component,phase,size,touches_boundary\n");
    for (i, c) in labeling.components().iter().enumerate() {
        out.push_str(&format!("{},{},{},{}\n", i, c.phase, c.size, c.touches_boundary));
    }
    out
}
