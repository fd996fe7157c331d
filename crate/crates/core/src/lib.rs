//! Core algorithms for two translation-invariant site-percolation constructions on
//! the square lattice, plus bond-percolation crossing machinery and seeded
//! experiment harnesses.
//!
//! Modules:
//! - [`lattice`]: site/bond configurations, cluster labeling, bitmap/CSV exchange
//! - [`ust`]: uniform spanning trees, planar duals, the doubled-scale picture and
//!   its finite-energy perturbation
//! - [`gridforks`]: hierarchical block-progression grids, windows, forks
//! - [`roads`]: crossing-road rectangles through the fork geometry and the
//!   associated product-bound arithmetic
//! - [`percolate`]: bond/site thinning, crossing detection, Monte Carlo and exact
//!   crossing probabilities, decay-exponent fitting
//! - [`harness`]: seeded experiments with JSON/CSV reports
//!
//! Everything is deterministic given the seeds passed in; see [`seeds`] for the
//! per-trial derivation scheme.

pub mod geom;
pub mod gridforks;
pub mod harness;
pub mod lattice;
pub mod percolate;
pub mod roads;
pub mod seeds;
pub mod stats;
pub mod ust;

mod unionfind;

pub use geom::Rect;
pub use gridforks::{GridHierarchy, GridParams, WindowSpec};
pub use lattice::{BondConfig, ClusterLabeling, ComponentInfo, SiteConfig};
pub use percolate::CrossingEstimate;
pub use roads::{Orientation, RectSpec, RoadPlan, WindowChain};
pub use ust::TreeEdges;
