//! Top-k expected nearest neighbors in the plane.
//!
//! The plane is split into four closed quadrants around the global minimum `q*`. In each
//! quadrant the next answer is always a minimal point, and minimal points live in the
//! skyline cells. Every skyline cell is evaluated once with the rectangle extreme-point
//! query (the expected distance is affine on a cell). A reported point is removed from the
//! drag index so the skyline can advance, and from the static hull index by splitting its
//! cell into sub-cells whose interiors exclude it. One heap serves all four quadrants.

use crate::drag::{build_trees, DragIndex};
use crate::error::{EnnError, Result};
use crate::geometry::{Point, PointId, QuadrantFrame, UncertainQuery};
use crate::hull::{HullIndex, DEFAULT_LEAF_SIZE};
use crate::pointset::PointSet;
use crate::profile::QueryProfile;
use crate::skyline::{CellAddr, SkylineCellSet};
use serde::{Deserialize, Serialize};
use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Neighbor {
    pub id: PointId,
    pub x: f64,
    pub y: f64,
    pub expected_distance: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrantStats {
    /// Skyline cells before the first extraction.
    pub initial_cells: usize,
    /// Initial cells plus every cell that entered the skyline later.
    pub cumulative_cells: usize,
    pub reported: usize,
    pub drags: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryStats {
    pub min_linear_calls: usize,
    pub heap_pushes: usize,
    pub heap_pops: usize,
    /// Distinct arrangement cells evaluated over all quadrants.
    pub cells_visited: usize,
    pub quadrants: [QuadrantStats; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopKResult {
    /// Ascending by expected distance. Equal distances that meet in the candidate heap come out by id.
    pub items: Vec<Neighbor>,
    /// Set when `k` exceeded the number of points.
    pub truncated: bool,
    pub stats: QueryStats,
}

impl TopKResult {
    pub fn ids(&self) -> Vec<PointId> {
        self.items.iter().map(|n| n.id).collect()
    }
}

/// Prebuilt indexes over a point set. Cloning is cheap apart from the alive bitsets of
/// the drag index; the hull index and point data are shared.
#[derive(Clone, Debug)]
pub struct EnnIndex {
    set: PointSet,
    drag: DragIndex,
    hull: Arc<HullIndex>,
}

impl EnnIndex {
    pub fn build(points: Vec<Point>) -> Result<Self> {
        Self::from_point_set(PointSet::new(points)?)
    }

    pub fn from_point_set(set: PointSet) -> Result<Self> {
        if set.is_empty() {
            return Err(EnnError::InvalidQuery("empty point set".into()));
        }
        let (by_x, by_y) = build_trees(&set);
        let by_x = Arc::new(by_x);
        let hull = HullIndex::from_parts(set.clone(), Arc::clone(&by_x), DEFAULT_LEAF_SIZE);
        let drag = DragIndex::from_parts(set.clone(), by_x, Arc::new(by_y));
        Ok(EnnIndex {
            set,
            drag,
            hull: Arc::new(hull),
        })
    }

    pub fn points(&self) -> &[Point] {
        self.set.points()
    }

    pub fn point_set(&self) -> &PointSet {
        &self.set
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn drag_index(&self) -> &DragIndex {
        &self.drag
    }

    pub fn hull_index(&self) -> &HullIndex {
        &self.hull
    }

    pub fn query_topk(&mut self, q: &UncertainQuery, k: usize) -> Result<TopKResult> {
        if k == 0 {
            return Err(EnnError::InvalidQuery("k must be positive".into()));
        }
        let profile = QueryProfile::new(q);
        let frames = QuadrantFrame::all(profile.global_minimum());
        let truncated = k > self.len();
        let (found, stats) = self.run(&profile, &frames, k.min(self.len()))?;
        Ok(TopKResult {
            items: found,
            truncated,
            stats,
        })
    }

    /// Top `k` points of one closed quadrant. The frame origin must be the global minimum.
    pub fn quadrant_topk(&mut self, profile: &QueryProfile, frame: QuadrantFrame, k: usize) -> Result<Vec<Neighbor>> {
        if k == 0 {
            return Err(EnnError::InvalidQuery("k must be positive".into()));
        }
        if frame.origin != profile.global_minimum() {
            return Err(EnnError::InvalidQuery("frame origin is not the global minimum".into()));
        }
        Ok(self.run(profile, &[frame], k)?.0)
    }

    fn run(
        &mut self,
        profile: &QueryProfile,
        frames: &[QuadrantFrame],
        k: usize,
    ) -> Result<(Vec<Neighbor>, QueryStats)> {
        let mut deleted: Vec<usize> = Vec::with_capacity(k);
        let result = self.extract(profile, frames, k, &mut deleted);
        let mut restore = Ok(());
        for i in deleted {
            if let Err(e) = self.drag.insert_at(i) {
                restore = Err(e);
            }
        }
        let out = result?;
        restore?;
        Ok(out)
    }

    fn extract(
        &mut self,
        profile: &QueryProfile,
        frames: &[QuadrantFrame],
        k: usize,
        deleted: &mut Vec<usize>,
    ) -> Result<(Vec<Neighbor>, QueryStats)> {
        let mut stats = QueryStats::default();
        let mut heap = Heap {
            entries: BinaryHeap::new(),
            pushes: 0,
        };
        let mut runs = Vec::with_capacity(frames.len());
        for &frame in frames {
            let skyline = SkylineCellSet::compute(&self.drag, profile, frame)?;
            runs.push(QuadrantRun {
                skyline,
                ledger: HashMap::new(),
                stats: QuadrantStats::default(),
            });
        }
        let ctx = Ctx {
            hull: &self.hull,
            profile,
        };
        for run in &mut runs {
            run.stats.initial_cells = run.skyline.len();
            run.stats.cumulative_cells = run.skyline.len();
            let addrs: Vec<CellAddr> = run.skyline.cursors().map(|c| c.address).collect();
            for a in addrs {
                run.evaluate(a, &ctx, &mut heap, &mut stats);
            }
        }

        let points = self.set.points();
        let mut found = Vec::with_capacity(k);
        while found.len() < k {
            let Some(Reverse(entry)) = heap.entries.pop() else {
                break;
            };
            stats.heap_pops += 1;
            let z = entry.index as usize;
            if !self.drag.is_alive_at(z) {
                continue;
            }
            let p = points[z];
            found.push(Neighbor {
                id: p.id,
                x: p.x,
                y: p.y,
                expected_distance: entry.key,
            });
            self.drag.delete_at(z)?;
            deleted.push(z);
            for run in runs.iter_mut().filter(|r| r.skyline.frame().contains(p.xy())) {
                run.stats.reported += 1;
                run.on_extracted(z, &self.drag, &ctx, &mut heap, &mut stats)?;
            }
        }

        stats.heap_pushes = heap.pushes;
        for (slot, run) in stats.quadrants.iter_mut().zip(&runs) {
            *slot = run.stats;
            slot.drags = run.skyline.drag_count();
        }
        stats.cells_visited = runs.iter().map(|r| r.ledger.values().filter(|l| l.seen).count()).sum();
        Ok((found, stats))
    }
}

pub fn build_index(points: Vec<Point>) -> Result<EnnIndex> {
    EnnIndex::build(points)
}

pub fn query_topk(index: &mut EnnIndex, q: &UncertainQuery, k: usize) -> Result<TopKResult> {
    index.query_topk(q, k)
}

pub fn quadrant_topk(
    index: &mut EnnIndex,
    profile: &QueryProfile,
    frame: QuadrantFrame,
    k: usize,
) -> Result<Vec<Neighbor>> {
    index.quadrant_topk(profile, frame, k)
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    key: f64,
    id: PointId,
    index: u32,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.total_cmp(&other.key).then(self.id.cmp(&other.id))
    }
}

struct Heap {
    entries: BinaryHeap<Reverse<Entry>>,
    pushes: usize,
}

struct Ctx<'a> {
    hull: &'a HullIndex,
    profile: &'a QueryProfile,
}

#[derive(Default)]
struct CellLedger {
    seen: bool,
    /// Frame y of every reported point in the cell, ascending.
    splits: Vec<f64>,
}

struct QuadrantRun {
    skyline: SkylineCellSet,
    ledger: HashMap<CellAddr, CellLedger>,
    stats: QuadrantStats,
}

impl QuadrantRun {
    /// Pushes the best point of each sub-cell of `a`, the first time `a` is seen.
    fn evaluate(&mut self, a: CellAddr, ctx: &Ctx, heap: &mut Heap, stats: &mut QueryStats) {
        let entry = self.ledger.entry(a).or_default();
        if entry.seen {
            return;
        }
        entry.seen = true;
        let splits = entry.splits.clone();
        for j in 0..=splits.len() {
            let below = j.checked_sub(1).map(|i| splits[i]);
            let above = splits.get(j).copied();
            self.push_sub_cell(a, below, above, ctx, heap, stats);
        }
    }

    fn push_sub_cell(
        &self,
        a: CellAddr,
        below: Option<f64>,
        above: Option<f64>,
        ctx: &Ctx,
        heap: &mut Heap,
        stats: &mut QueryStats,
    ) {
        let grid = self.skyline.grid();
        let coeff = ctx.profile.cell_coefficients(&grid.cell(a, None, None));
        let rect = grid.cell(a, below, above);
        stats.min_linear_calls += 1;
        if let Some((i, _)) = ctx.hull.min_linear_index(&rect, coeff.a, coeff.b) {
            let p = ctx.hull.points()[i];
            heap.entries.push(Reverse(Entry {
                key: ctx.profile.expected_distance(p.xy()),
                id: p.id,
                index: i as u32,
            }));
            heap.pushes += 1;
        }
    }

    fn on_extracted(
        &mut self,
        z: usize,
        drag: &DragIndex,
        ctx: &Ctx,
        heap: &mut Heap,
        stats: &mut QueryStats,
    ) -> Result<()> {
        let p = drag.points()[z];
        let grid = self.skyline.grid();
        let a = grid.addr_of(&p);
        let y = grid.to_frame(&p).1;

        let entry = self.ledger.entry(a).or_default();
        let j = entry.splits.partition_point(|&s| s < y);
        let below = j.checked_sub(1).map(|i| entry.splits[i]);
        let above = entry.splits.get(j).copied();
        entry.splits.insert(j, y);
        if entry.seen {
            self.push_sub_cell(a, below, Some(y), ctx, heap, stats);
            self.push_sub_cell(a, Some(y), above, ctx, heap, stats);
        }

        // A point outside every skyline cell was not minimal here; its removal changes nothing.
        if self.skyline.contains(a) {
            let adv = self.skyline.advance_index(drag, z)?;
            self.stats.cumulative_cells += adv.fresh.len();
            for c in adv.fresh {
                self.evaluate(c.address, ctx, heap, stats);
            }
        }
        Ok(())
    }
}
