//! Value types and L1 primitives shared across the crate.

use crate::error::{EnnError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Stable handle of a data point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub u64);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub id: PointId,
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(id: u64, x: f64, y: f64) -> Self {
        Point { id: PointId(id), x, y }
    }

    pub fn xy(&self) -> (f64, f64) {
        (self.x, self.y)
    }
}

/// Builds points from raw coordinates, numbering them by input order.
pub fn points_from_coords(coords: &[(f64, f64)]) -> Vec<Point> {
    coords
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| Point::new(i as u64, x, y))
        .collect()
}

/// One possible location of an uncertain query, with its (unnormalized) probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedLocation {
    pub x: f64,
    #[serde(default)]
    pub y: f64,
    pub w: f64,
}

impl WeightedLocation {
    pub fn new(x: f64, y: f64, w: f64) -> Self {
        WeightedLocation { x, y, w }
    }
}

/// A discrete uncertain query point: `m` weighted locations with total weight `W > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertainQuery {
    locations: Vec<WeightedLocation>,
    total_weight: f64,
}

impl UncertainQuery {
    pub fn new(locations: Vec<WeightedLocation>) -> Result<Self> {
        if locations.is_empty() {
            return Err(EnnError::InvalidQuery("query has no locations".into()));
        }
        let mut total = 0.0;
        for (i, loc) in locations.iter().enumerate() {
            if !loc.x.is_finite() || !loc.y.is_finite() {
                return Err(EnnError::InvalidQuery(format!("location {i} is not finite")));
            }
            if !loc.w.is_finite() || loc.w < 0.0 {
                return Err(EnnError::InvalidQuery(format!(
                    "location {i} has invalid weight {}",
                    loc.w
                )));
            }
            total += loc.w;
        }
        if total <= 0.0 {
            return Err(EnnError::InvalidQuery("total weight is zero".into()));
        }
        Ok(UncertainQuery {
            locations,
            total_weight: total,
        })
    }

    /// Convenience constructor from `(x, y, w)` triples.
    pub fn from_triples(triples: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(
            triples
                .iter()
                .map(|&(x, y, w)| WeightedLocation::new(x, y, w))
                .collect(),
        )
    }

    pub fn locations(&self) -> &[WeightedLocation] {
        &self.locations
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Expected L1 distance by direct summation.
    pub fn expected_distance_direct(&self, p: (f64, f64)) -> f64 {
        self.locations.iter().map(|q| q.w * l1_distance(p, (q.x, q.y))).sum()
    }
}

pub fn l1_distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).abs() + (p.1 - q.1).abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Boundary {
    Closed,
    Open,
}

impl Boundary {
    pub fn is_closed(self) -> bool {
        self == Boundary::Closed
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellSides {
    pub left: Boundary,
    pub right: Boundary,
    pub bottom: Boundary,
    pub top: Boundary,
}

impl CellSides {
    pub const CLOSED: CellSides = CellSides {
        left: Boundary::Closed,
        right: Boundary::Closed,
        bottom: Boundary::Closed,
        top: Boundary::Closed,
    };
}

/// Axis-parallel, possibly unbounded rectangle with per-side open/closed markers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub sides: CellSides,
}

impl Cell {
    pub fn closed(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Self {
        debug_assert!(x_lo <= x_hi && y_lo <= y_hi);
        Cell {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
            sides: CellSides::CLOSED,
        }
    }

    pub fn x_span(&self) -> Span {
        Span {
            lo: self.x_lo,
            hi: self.x_hi,
            lo_end: self.sides.left,
            hi_end: self.sides.right,
        }
    }

    pub fn y_span(&self) -> Span {
        Span {
            lo: self.y_lo,
            hi: self.y_hi,
            lo_end: self.sides.bottom,
            hi_end: self.sides.top,
        }
    }

    pub fn contains(&self, p: (f64, f64)) -> bool {
        self.x_span().contains(p.0) && self.y_span().contains(p.1)
    }

    /// Same bounds, ignoring the side markers.
    pub fn same_bounds(&self, other: &Cell) -> bool {
        self.x_lo == other.x_lo && self.x_hi == other.x_hi && self.y_lo == other.y_lo && self.y_hi == other.y_hi
    }
}

/// Interval on one axis with explicit end markers; ends may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
    pub lo_end: Boundary,
    pub hi_end: Boundary,
}

impl Span {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Span {
            lo,
            hi,
            lo_end: Boundary::Closed,
            hi_end: Boundary::Closed,
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        let above = match self.lo_end {
            Boundary::Closed => v >= self.lo,
            Boundary::Open => v > self.lo,
        };
        let below = match self.hi_end {
            Boundary::Closed => v <= self.hi,
            Boundary::Open => v < self.hi,
        };
        above && below
    }

    /// The span seen through a coordinate reflection `v -> -v` when `sign < 0`.
    pub fn reflect(self, sign: f64) -> Span {
        if sign > 0.0 {
            self
        } else {
            Span {
                lo: -self.hi,
                hi: -self.lo,
                lo_end: self.hi_end,
                hi_end: self.lo_end,
            }
        }
    }

    /// Index range `[a, b)` of the elements of an ascending slice that lie in the span.
    pub fn rank_range(&self, sorted: &[f64]) -> (usize, usize) {
        let a = match self.lo_end {
            Boundary::Closed => sorted.partition_point(|&v| v < self.lo),
            Boundary::Open => sorted.partition_point(|&v| v <= self.lo),
        };
        let b = match self.hi_end {
            Boundary::Closed => sorted.partition_point(|&v| v <= self.hi),
            Boundary::Open => sorted.partition_point(|&v| v < self.hi),
        };
        (a, b.max(a))
    }
}

/// One of the four closed quadrants around an origin, as a reflection of the first quadrant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadrantFrame {
    pub origin: (f64, f64),
    pub sign_x: f64,
    pub sign_y: f64,
}

impl QuadrantFrame {
    pub fn new(origin: (f64, f64), sign_x: f64, sign_y: f64) -> Self {
        assert!(
            (sign_x == 1.0 || sign_x == -1.0) && (sign_y == 1.0 || sign_y == -1.0),
            "frame signs must be exactly +1 or -1"
        );
        QuadrantFrame { origin, sign_x, sign_y }
    }

    pub fn identity() -> Self {
        QuadrantFrame::new((0.0, 0.0), 1.0, 1.0)
    }

    /// The four frames around `origin`, counter-clockwise from the north-east quadrant.
    pub fn all(origin: (f64, f64)) -> [QuadrantFrame; 4] {
        [
            QuadrantFrame::new(origin, 1.0, 1.0),
            QuadrantFrame::new(origin, -1.0, 1.0),
            QuadrantFrame::new(origin, -1.0, -1.0),
            QuadrantFrame::new(origin, 1.0, -1.0),
        ]
    }

    /// Reflected coordinates. The origin is not subtracted, so the mapping is exact in floating point.
    pub fn to_frame(&self, p: (f64, f64)) -> (f64, f64) {
        (self.sign_x * p.0, self.sign_y * p.1)
    }

    pub fn origin_in_frame(&self) -> (f64, f64) {
        self.to_frame(self.origin)
    }

    /// Membership in the closed quadrant.
    pub fn contains(&self, p: (f64, f64)) -> bool {
        let (fx, fy) = self.to_frame(p);
        let (ox, oy) = self.origin_in_frame();
        fx >= ox && fy >= oy
    }
}

/// `p1` dominates `p2` when both of its reflected coordinates are no larger.
pub fn dominates(p1: &Point, p2: &Point, frame: &QuadrantFrame) -> bool {
    let a = frame.to_frame(p1.xy());
    let b = frame.to_frame(p2.xy());
    a.0 <= b.0 && a.1 <= b.1
}
