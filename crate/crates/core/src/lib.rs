//! Top-k expected nearest neighbor queries under the L1 metric for uncertain query points.

pub mod bench;
mod bits;
pub mod drag;
pub mod engine;
pub mod enn1d;
pub mod error;
pub mod geometry;
pub mod hull;
pub mod instance;
mod layered;
pub mod oracle;
pub mod pointset;
pub mod profile;
pub mod skyline;
pub mod snapshot;
pub mod verify;

pub use drag::{build_drag, DragDirection, DragIndex, DragQuery, SegmentAxis};
pub use engine::{build_index, quadrant_topk, query_topk, EnnIndex, Neighbor, QueryStats, TopKResult};
pub use enn1d::{build_1d, query_1d, Index1D, Query1dResult};
pub use error::{Axis, EnnError, Result};
pub use geometry::{
    dominates, l1_distance, Boundary, Cell, CellSides, Point, PointId, QuadrantFrame, Span, UncertainQuery,
    WeightedLocation,
};
pub use hull::{build_hull, HullIndex};
pub use pointset::PointSet;
pub use profile::{build_profile, weighted_median, CellCoefficients, QueryProfile};
pub use skyline::{advance_cells, compute_c1, CellAddr, SkylineCellCursor, SkylineCellSet};
