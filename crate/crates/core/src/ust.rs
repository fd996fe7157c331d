//! Uniform spanning trees of rectangular box graphs, their planar duals, the
//! doubled-scale site picture, and a local perturbation whose flip rate at a site
//! depends on how many interior sites its removal would strand.
//!
//! The picture construction doubles a spanning tree of the n x m box into a
//! (2n-1) x (2m-1) site configuration: tree vertices land on even-even sites
//! (open), tree edges on mixed-parity sites (open where the edge is present),
//! odd-odd sites are closed. The open phase is then a single tree-shaped cluster
//! and the closed phase is its dual forest hanging off the window boundary.

use crate::lattice::{label_clusters, ClusterLabeling, SiteConfig};
use crate::seeds::rng_from_seed;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum UstError {
    #[error("site ({0}, {1}) lies outside the configuration window")]
    OutOfRange(i64, i64),
}

/// Edge set of a spanning tree of the n x m box graph. Vertices are (x, y) with
/// 0 <= x < n, 0 <= y < m; `horizontal[y*(n-1)+x]` is the edge (x,y)-(x+1,y) and
/// `vertical[y*n+x]` the edge (x,y)-(x,y+1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeEdges {
    n: usize,
    m: usize,
    horizontal: Vec<bool>,
    vertical: Vec<bool>,
}

impl TreeEdges {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn has_h_edge(&self, x: usize, y: usize) -> bool {
        self.horizontal[y * (self.n - 1) + x]
    }

    pub fn has_v_edge(&self, x: usize, y: usize) -> bool {
        self.vertical[y * self.n + x]
    }

    pub fn edge_count(&self) -> usize {
        self.horizontal.iter().filter(|&&b| b).count()
            + self.vertical.iter().filter(|&&b| b).count()
    }

    /// Connectivity plus the edge count pin acyclicity.
    pub fn is_spanning_tree(&self) -> bool {
        let (n, m) = (self.n, self.m);
        if self.edge_count() != n * m - 1 {
            return false;
        }
        let mut uf = crate::unionfind::UnionFind::new(n * m);
        for y in 0..m {
            for x in 0..n {
                if x + 1 < n && self.has_h_edge(x, y) {
                    uf.union((y * n + x) as u32, (y * n + x + 1) as u32);
                }
                if y + 1 < m && self.has_v_edge(x, y) {
                    uf.union((y * n + x) as u32, ((y + 1) * n + x) as u32);
                }
            }
        }
        let root = uf.find(0);
        (1..n * m).all(|i| uf.find(i as u32) == root)
    }
}

/// Wilson's algorithm on the n x m box: loop-erased random walks from each vertex
/// in scan order, rooted at the lower-left corner. Walks move to a uniformly
/// random box neighbor (free boundary: 2 or 3 options on the rim).
pub fn wilson_ust(n: usize, m: usize, seed: u64) -> TreeEdges {
    assert!(n >= 1 && m >= 1, "box must be nonempty");
    let mut rng = rng_from_seed(seed);
    let total = n * m;
    let mut in_tree = vec![false; total];
    // next[v] = successor of v on the current walk; stale entries are harmless
    // because the retrace below only follows fresh ones.
    let mut next = vec![0usize; total];
    in_tree[0] = true;
    let mut tree = TreeEdges {
        n,
        m,
        horizontal: vec![false; (n - 1) * m],
        vertical: vec![false; n * (m - 1)],
    };
    let mut neighbors = [0usize; 4];
    for start in 0..total {
        if in_tree[start] {
            continue;
        }
        let mut v = start;
        while !in_tree[v] {
            let (x, y) = (v % n, v / n);
            let mut k = 0;
            if x > 0 {
                neighbors[k] = v - 1;
                k += 1;
            }
            if x + 1 < n {
                neighbors[k] = v + 1;
                k += 1;
            }
            if y > 0 {
                neighbors[k] = v - n;
                k += 1;
            }
            if y + 1 < m {
                neighbors[k] = v + n;
                k += 1;
            }
            next[v] = neighbors[rng.random_range(0..k)];
            v = next[v];
        }
        // retrace the loop-erased path and attach it
        let mut v = start;
        while !in_tree[v] {
            in_tree[v] = true;
            let u = next[v];
            let (xv, yv) = (v % n, v / n);
            let (xu, yu) = (u % n, u / n);
            if yv == yu {
                tree.horizontal[yv * (n - 1) + xv.min(xu)] = true;
            } else {
                tree.vertical[yv.min(yu) * n + xv] = true;
            }
            v = u;
        }
    }
    debug_assert!(tree.is_spanning_tree());
    tree
}

/// A vertex of the dual of the box graph: one per inner face (the unit cell with
/// lower-left corner (i, j)), plus the single outer face.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum DualVertex {
    Inner(usize, usize),
    Outer,
}

/// Dual edges crossing the primal edges absent from a spanning tree. Together they
/// form a spanning tree of the dual graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DualTreeEdges {
    n: usize,
    m: usize,
    pub edges: Vec<(DualVertex, DualVertex)>,
}

impl DualTreeEdges {
    /// Number of inner dual vertices, (n-1)(m-1).
    pub fn inner_vertex_count(&self) -> usize {
        (self.n - 1) * (self.m - 1)
    }

    pub fn present_count(&self) -> usize {
        self.edges.len()
    }

    /// The present dual edges must connect all inner faces and the outer face into
    /// a tree.
    pub fn is_spanning_tree_of_dual(&self) -> bool {
        let cells = self.inner_vertex_count();
        let vertices = cells + 1;
        if self.edges.len() != vertices - 1 {
            return false;
        }
        let outer = cells as u32;
        let idx = |v: DualVertex| match v {
            DualVertex::Inner(i, j) => (j * (self.n - 1) + i) as u32,
            DualVertex::Outer => outer,
        };
        let mut uf = crate::unionfind::UnionFind::new(vertices);
        for &(a, b) in &self.edges {
            uf.union(idx(a), idx(b));
        }
        let root = uf.find(0);
        (1..vertices).all(|i| uf.find(i as u32) == root)
    }
}

/// Dual configuration of a spanning tree: a dual edge is present exactly when the
/// primal edge it crosses is absent.
pub fn dual_tree(tree: &TreeEdges) -> DualTreeEdges {
    let (n, m) = (tree.n, tree.m);
    let mut edges = Vec::new();
    // horizontal primal edge (x,y)-(x+1,y) separates the cell below from the cell above
    for y in 0..m {
        for x in 0..n.saturating_sub(1) {
            if !tree.has_h_edge(x, y) {
                let below = if y == 0 { DualVertex::Outer } else { DualVertex::Inner(x, y - 1) };
                let above = if y + 1 == m { DualVertex::Outer } else { DualVertex::Inner(x, y) };
                edges.push((below, above));
            }
        }
    }
    // vertical primal edge (x,y)-(x,y+1) separates the cell on its left from the right
    for y in 0..m.saturating_sub(1) {
        for x in 0..n {
            if !tree.has_v_edge(x, y) {
                let left = if x == 0 { DualVertex::Outer } else { DualVertex::Inner(x - 1, y) };
                let right = if x + 1 == n { DualVertex::Outer } else { DualVertex::Inner(x, y) };
                edges.push((left, right));
            }
        }
    }
    let dual = DualTreeEdges { n, m, edges };
    debug_assert!(dual.is_spanning_tree_of_dual());
    dual
}

/// Doubled-scale picture of a spanning tree: a (2n-1) x (2m-1) site configuration
/// anchored at the origin. Even-even sites are open, odd-odd sites closed, and a
/// mixed-parity site is open exactly when the tree edge it subdivides is present.
pub fn scale2_picture(tree: &TreeEdges) -> SiteConfig {
    let (n, m) = (tree.n, tree.m);
    let (w, h) = (2 * n - 1, 2 * m - 1);
    let mut values = vec![0u8; w * h];
    for y in 0..h {
        for x in 0..w {
            let open = match (x % 2, y % 2) {
                (0, 0) => true,
                (1, 1) => false,
                (1, 0) => tree.has_h_edge((x - 1) / 2, y / 2),
                (0, 1) => tree.has_v_edge(x / 2, (y - 1) / 2),
                _ => unreachable!(),
            };
            if open {
                values[y * w + x] = 1;
            }
        }
    }
    SiteConfig::from_values((0, 0), w, h, values).expect("constructed values are bits")
}

/// The four unit shifts a doubled picture can be moved by.
pub const SHIFT_OFFSETS: [(i64, i64); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

/// Translate the configuration by an offset drawn uniformly from
/// {0,1} x {0,1}. The chosen offset is recoverable as the anchor difference.
pub fn random_shift(config: &SiteConfig, seed: u64) -> SiteConfig {
    let mut rng = rng_from_seed(seed);
    let offset = SHIFT_OFFSETS[rng.random_range(0..4)];
    config.translated(offset)
}

fn b_for_site(config: &SiteConfig, labeling: &ClusterLabeling, site: (i64, i64)) -> usize {
    let window = config.window();
    let cluster = labeling.label_at(site).expect("site inside window");
    let neighbors = [
        (site.0 - 1, site.1),
        (site.0 + 1, site.1),
        (site.0, site.1 - 1),
        (site.0, site.1 + 1),
    ];
    let mut visited: std::collections::HashSet<(i64, i64)> = std::collections::HashSet::new();
    visited.insert(site);
    let mut stranded = 0usize;
    let mut stack: Vec<(i64, i64)> = Vec::new();
    for nb in neighbors {
        if labeling.label_at(nb) != Some(cluster) || visited.contains(&nb) {
            continue;
        }
        // flood one component of the punctured cluster
        let mut size = 0usize;
        let mut touches = false;
        stack.push(nb);
        visited.insert(nb);
        while let Some((x, y)) = stack.pop() {
            size += 1;
            if x == window.x0 || y == window.y0 || x == window.x1() - 1 || y == window.y1() - 1 {
                touches = true;
            }
            for next in [(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)] {
                if labeling.label_at(next) == Some(cluster) && !visited.contains(&next) {
                    visited.insert(next);
                    stack.push(next);
                }
            }
        }
        if !touches {
            stranded += size;
        }
    }
    stranded
}

/// Number of same-phase sites in components of (cluster of `site` minus `site`)
/// that do not reach the window boundary. Within the finite window this counts the
/// sites that removing `site` would cut off from the unbounded part of its phase;
/// sites whose cluster only reaches the boundary near the rim are undercounted by
/// construction, which the perturbation accepts as a boundary effect.
pub fn compute_b(config: &SiteConfig, site: (i64, i64)) -> Result<usize, UstError> {
    if config.get(site).is_none() {
        return Err(UstError::OutOfRange(site.0, site.1));
    }
    let labeling = label_clusters(config);
    Ok(b_for_site(config, &labeling, site))
}

/// `compute_b` for every site, row-major bottom-up, sharing one labeling pass.
pub fn compute_b_all(config: &SiteConfig) -> Vec<usize> {
    let labeling = label_clusters(config);
    config.window().sites().map(|site| b_for_site(config, &labeling, site)).collect()
}

/// Flip each site independently with probability 2^-(b+1), where `b` is the
/// precomputed cut-off count for that site (order matches [`compute_b_all`]).
/// Exponents are capped at 61 to stay in double range; the skipped mass is below
/// 5e-19 per site. Returns the perturbed configuration and the flip count.
pub fn perturb_with_b(config: &SiteConfig, b: &[usize], seed: u64) -> (SiteConfig, usize) {
    assert_eq!(b.len(), config.width() * config.height(), "one b per site");
    let mut rng = rng_from_seed(seed);
    let mut out = config.clone();
    let mut flips = 0usize;
    for (site, &bx) in config.window().sites().zip(b) {
        let p = 0.5f64.powi(bx.min(60) as i32 + 1);
        if rng.random::<f64>() < p {
            let v = out.get(site).expect("site inside window");
            out.set(site, 1 - v);
            flips += 1;
        }
    }
    (out, flips)
}

/// One round of the finite-energy perturbation: computes b on the unperturbed
/// configuration, then flips each site independently with probability 2^-(b+1).
pub fn perturb_finite_energy(config: &SiteConfig, seed: u64) -> SiteConfig {
    let b = compute_b_all(config);
    perturb_with_b(config, &b, seed).0
}
