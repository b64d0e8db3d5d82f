//! Dynamic segment dragging over a static point set with delete and reinsert.
//!
//! Two layered range trees: one keyed by x with y-sorted canonical subsets, one keyed
//! by y with x-sorted subsets. Deletion clears the point's slot in an alive bitset at
//! every level, so a drag visits `O(log n)` canonical nodes and does one bitset search
//! in each after a binary search.

use crate::bits::AliveBits;
use crate::error::{EnnError, Result};
use crate::geometry::{Point, PointId, Span};
use crate::layered::LayeredTree;
use crate::pointset::PointSet;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SegmentAxis {
    /// Segment parallel to the x-axis, dragged along y.
    Horizontal,
    /// Segment parallel to the y-axis, dragged along x.
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DragDirection {
    Positive,
    Negative,
}

/// A segment on the line `axis-perpendicular coordinate = fixed`, covering `span` along its
/// own axis, dragged in `direction`. A point on the segment itself is hit immediately.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DragQuery {
    pub axis: SegmentAxis,
    pub fixed: f64,
    pub span: Span,
    pub direction: DragDirection,
}

impl DragQuery {
    pub fn horizontal(y: f64, span: Span, direction: DragDirection) -> Self {
        DragQuery {
            axis: SegmentAxis::Horizontal,
            fixed: y,
            span,
            direction,
        }
    }

    pub fn vertical(x: f64, span: Span, direction: DragDirection) -> Self {
        DragQuery {
            axis: SegmentAxis::Vertical,
            fixed: x,
            span,
            direction,
        }
    }

    /// Whether `p` is in the region swept by the drag.
    pub fn reaches(&self, p: (f64, f64)) -> bool {
        let (along, across) = match self.axis {
            SegmentAxis::Horizontal => (p.0, p.1),
            SegmentAxis::Vertical => (p.1, p.0),
        };
        self.span.contains(along)
            && match self.direction {
                DragDirection::Positive => across >= self.fixed,
                DragDirection::Negative => across <= self.fixed,
            }
    }
}

#[derive(Clone, Debug)]
pub struct DragIndex {
    set: PointSet,
    by_x: Arc<LayeredTree>,
    by_y: Arc<LayeredTree>,
    alive_x: Vec<AliveBits>,
    alive_y: Vec<AliveBits>,
    alive: Vec<bool>,
    alive_count: usize,
}

impl DragIndex {
    pub fn build(points: Vec<Point>) -> Result<Self> {
        let set = PointSet::new(points)?;
        let (by_x, by_y) = build_trees(&set);
        Ok(Self::from_parts(set, Arc::new(by_x), Arc::new(by_y)))
    }

    pub(crate) fn from_parts(set: PointSet, by_x: Arc<LayeredTree>, by_y: Arc<LayeredTree>) -> Self {
        let n = set.len();
        let alive_x = (0..by_x.levels.len()).map(|_| AliveBits::full(n)).collect();
        let alive_y = (0..by_y.levels.len()).map(|_| AliveBits::full(n)).collect();
        DragIndex {
            set,
            by_x,
            by_y,
            alive_x,
            alive_y,
            alive: vec![true; n],
            alive_count: n,
        }
    }

    pub fn points(&self) -> &[Point] {
        self.set.points()
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn is_alive(&self, id: PointId) -> bool {
        self.set.index_of(id).is_some_and(|i| self.alive[i])
    }

    pub fn alive_ids(&self) -> Vec<PointId> {
        self.set
            .points()
            .iter()
            .zip(&self.alive)
            .filter(|(_, &a)| a)
            .map(|(p, _)| p.id)
            .collect()
    }

    pub(crate) fn is_alive_at(&self, i: usize) -> bool {
        self.alive[i]
    }

    pub(crate) fn index_of(&self, id: PointId) -> Option<usize> {
        self.set.index_of(id)
    }

    /// The first alive point hit by the drag.
    pub fn drag(&self, q: &DragQuery) -> Option<Point> {
        self.drag_index_of(q).map(|i| self.set.points()[i])
    }

    /// Point index of the first alive point hit by the drag.
    pub fn drag_index_of(&self, q: &DragQuery) -> Option<usize> {
        let (tree, alive) = match q.axis {
            SegmentAxis::Horizontal => (&self.by_x, &self.alive_x),
            SegmentAxis::Vertical => (&self.by_y, &self.alive_y),
        };
        let (a, b) = tree.primary_range(&q.span);
        let mut best: Option<(f64, u32)> = None;
        tree.canonical(a, b, &mut |d, lo, hi| {
            let level = &tree.levels[d];
            let slot = match q.direction {
                DragDirection::Positive => {
                    let start = lo + level.sec[lo..hi].partition_point(|&v| v < q.fixed);
                    alive[d].next_set(start).filter(|&s| s < hi)
                }
                DragDirection::Negative => {
                    let end = lo + level.sec[lo..hi].partition_point(|&v| v <= q.fixed);
                    if end == lo {
                        None
                    } else {
                        alive[d].prev_set(end - 1).filter(|&s| s >= lo)
                    }
                }
            };
            if let Some(s) = slot {
                let cand = (level.sec[s], level.items[s]);
                let better = match (best, q.direction) {
                    (None, _) => true,
                    (Some(b), DragDirection::Positive) => cand.0 < b.0,
                    (Some(b), DragDirection::Negative) => cand.0 > b.0,
                };
                if better {
                    best = Some(cand);
                }
            }
        });
        best.map(|(_, i)| i as usize)
    }

    pub fn delete(&mut self, id: PointId) -> Result<()> {
        let i = self.set.index_of(id).ok_or(EnnError::UnknownPoint(id))?;
        self.delete_at(i)
    }

    pub fn insert(&mut self, id: PointId) -> Result<()> {
        let i = self.set.index_of(id).ok_or(EnnError::UnknownPoint(id))?;
        self.insert_at(i)
    }

    pub(crate) fn delete_at(&mut self, i: usize) -> Result<()> {
        if !self.alive[i] {
            return Err(EnnError::State(format!(
                "point {} is already deleted",
                self.set.points()[i].id
            )));
        }
        self.alive[i] = false;
        self.alive_count -= 1;
        for (level, bits) in self.by_x.levels.iter().zip(&mut self.alive_x) {
            bits.clear(level.pos[i] as usize);
        }
        for (level, bits) in self.by_y.levels.iter().zip(&mut self.alive_y) {
            bits.clear(level.pos[i] as usize);
        }
        Ok(())
    }

    pub(crate) fn insert_at(&mut self, i: usize) -> Result<()> {
        if self.alive[i] {
            return Err(EnnError::State(format!(
                "point {} is already present",
                self.set.points()[i].id
            )));
        }
        self.alive[i] = true;
        self.alive_count += 1;
        for (level, bits) in self.by_x.levels.iter().zip(&mut self.alive_x) {
            bits.set(level.pos[i] as usize);
        }
        for (level, bits) in self.by_y.levels.iter().zip(&mut self.alive_y) {
            bits.set(level.pos[i] as usize);
        }
        Ok(())
    }
}

/// The x-keyed tree (y-sorted subsets) and the y-keyed tree (x-sorted subsets).
pub(crate) fn build_trees(set: &PointSet) -> (LayeredTree, LayeredTree) {
    let pts = set.points();
    let by_x = LayeredTree::build(
        set.x_order(),
        set.y_order(),
        |i| pts[i as usize].x,
        |i| pts[i as usize].y,
    );
    let by_y = LayeredTree::build(
        set.y_order(),
        set.x_order(),
        |i| pts[i as usize].y,
        |i| pts[i as usize].x,
    );
    (by_x, by_y)
}

pub fn build_drag(points: Vec<Point>) -> Result<DragIndex> {
    DragIndex::build(points)
}

/// Linear-scan reference for a drag over the given candidates.
pub fn drag_linear<'a>(points: impl IntoIterator<Item = &'a Point>, q: &DragQuery) -> Option<Point> {
    let key = |p: &Point| match q.axis {
        SegmentAxis::Horizontal => p.y,
        SegmentAxis::Vertical => p.x,
    };
    let mut best: Option<Point> = None;
    for p in points {
        if !q.reaches(p.xy()) {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => match q.direction {
                DragDirection::Positive => key(p) < key(&b),
                DragDirection::Negative => key(p) > key(&b),
            },
        };
        if better {
            best = Some(*p);
        }
    }
    best
}
