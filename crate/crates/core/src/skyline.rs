//! Arrangement cells crossed by the skyline of one quadrant, found with segment drags and
//! kept up to date while minimal points are deleted.
//!
//! All reasoning happens in frame coordinates, where the quadrant is `x' >= X0, y' >= Y0`
//! and a point dominates another when it is smaller in both coordinates. Drag queries are
//! converted back to world coordinates before they reach the drag index.
//!
//! A point lying on an arrangement line is treated as if it were shifted slightly right
//! (or up) in the frame: columns and rows are half-open `[lo, hi)`. This keeps every point
//! in exactly one cell and makes the drags below consistent with that assignment.
//!
//! Segments, in frame coordinates, all dragged in the positive direction:
//! - `s0`: `x' = X0`, `y'` in `[Y0, inf)`. Finds the leftmost quadrant point.
//! - `s1`: `y' = Y0`, `x'` over a column. Finds the lowest point of the column.
//! - `s2`: `x'` = column's left line, `y'` over a row. Finds a cell's skyline-left point.
//! - `s3`: `y'` = top line of the cell below, `x'` from the column's left line to the
//!   skyline-left point of the cell below. Finds the next cell's skyline-bottom point.
//! - `s4`: `x'` = column's right line, `y'` in `[Y0, y'(lowest point of the column)]`.
//!   Finds the skyline-left point of the next column's top cell. Classified as `s0`.

use crate::drag::{DragDirection, DragIndex, DragQuery};
use crate::error::{EnnError, Result};
use crate::geometry::{Boundary, Cell, CellSides, Point, PointId, QuadrantFrame, Span};
use crate::profile::QueryProfile;
use std::cmp::Reverse;
use std::collections::{BTreeMap, HashSet};
use std::ops::Bound;

/// Column and row of an arrangement cell, counted in frame coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellAddr {
    pub col: u32,
    pub row: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SegmentKind {
    S0,
    S1,
    S2,
    S3,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratingSegment {
    pub kind: SegmentKind,
    pub query: DragQuery,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkylinePoint {
    pub point: Point,
    pub segment: GeneratingSegment,
    pub(crate) index: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkylineCellCursor {
    pub address: CellAddr,
    pub cell: Cell,
    pub skyline_left: SkylinePoint,
    pub skyline_bottom: SkylinePoint,
}

impl SkylineCellCursor {
    pub fn column_id(&self) -> u32 {
        self.address.col
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemovedCellStatus {
    Retained,
    Dropped,
}

#[derive(Clone, Debug)]
pub struct Advance {
    /// Cells of the new set that were not in the previous one, in canonical order.
    pub fresh: Vec<SkylineCellCursor>,
    pub removed_cell: RemovedCellStatus,
}

/// Arrangement lines of one quadrant in frame coordinates.
#[derive(Clone, Debug)]
pub(crate) struct FrameGrid {
    pub frame: QuadrantFrame,
    xl: Vec<f64>,
    yl: Vec<f64>,
    x0: f64,
    y0: f64,
}

fn frame_lines(lines: &[f64], sign: f64) -> Vec<f64> {
    if sign > 0.0 {
        lines.to_vec()
    } else {
        lines.iter().rev().map(|&v| -v).collect()
    }
}

impl FrameGrid {
    pub fn new(profile: &QueryProfile, frame: QuadrantFrame) -> Result<Self> {
        let xl = frame_lines(profile.x().lines(), frame.sign_x);
        let yl = frame_lines(profile.y().lines(), frame.sign_y);
        let (x0, y0) = frame.origin_in_frame();
        let on_line = |lines: &[f64], v: f64| lines.binary_search_by(|l| l.total_cmp(&v)).is_ok();
        if !on_line(&xl, x0) || !on_line(&yl, y0) {
            return Err(EnnError::InvalidQuery(
                "frame origin is not an arrangement vertex".into(),
            ));
        }
        Ok(FrameGrid { frame, xl, yl, x0, y0 })
    }

    pub fn to_frame(&self, p: &Point) -> (f64, f64) {
        self.frame.to_frame(p.xy())
    }

    pub fn col_of(&self, x: f64) -> u32 {
        self.xl.partition_point(|&l| l <= x) as u32
    }

    pub fn row_of(&self, y: f64) -> u32 {
        self.yl.partition_point(|&l| l <= y) as u32
    }

    pub fn addr_of(&self, p: &Point) -> CellAddr {
        let (x, y) = self.to_frame(p);
        CellAddr {
            col: self.col_of(x),
            row: self.row_of(y),
        }
    }

    fn bounds(lines: &[f64], i: u32) -> (f64, f64) {
        let i = i as usize;
        let lo = if i == 0 { f64::NEG_INFINITY } else { lines[i - 1] };
        let hi = if i == lines.len() { f64::INFINITY } else { lines[i] };
        (lo, hi)
    }

    pub fn col_bounds(&self, col: u32) -> (f64, f64) {
        Self::bounds(&self.xl, col)
    }

    pub fn row_bounds(&self, row: u32) -> (f64, f64) {
        Self::bounds(&self.yl, row)
    }

    /// World rectangle of a cell, or of the part of it strictly between two split lines.
    pub fn cell(&self, addr: CellAddr, below: Option<f64>, above: Option<f64>) -> Cell {
        let (xlo, xhi) = self.col_bounds(addr.col);
        let (ylo, yhi) = self.row_bounds(addr.row);
        let xs = half_open(xlo, xhi).reflect(self.frame.sign_x);
        let mut ys = half_open(ylo, yhi);
        if let Some(s) = below {
            ys.lo = s;
            ys.lo_end = Boundary::Open;
        }
        if let Some(s) = above {
            ys.hi = s;
            ys.hi_end = Boundary::Open;
        }
        let ys = ys.reflect(self.frame.sign_y);
        Cell {
            x_lo: xs.lo,
            x_hi: xs.hi,
            y_lo: ys.lo,
            y_hi: ys.hi,
            sides: CellSides {
                left: xs.lo_end,
                right: xs.hi_end,
                bottom: ys.lo_end,
                top: ys.hi_end,
            },
        }
    }

    /// Vertical frame segment at `x'`, dragged towards larger `x'`.
    fn vertical(&self, x: f64, span: Span) -> DragQuery {
        DragQuery::vertical(
            self.frame.sign_x * x,
            span.reflect(self.frame.sign_y),
            direction(self.frame.sign_x),
        )
    }

    /// Horizontal frame segment at `y'`, dragged towards larger `y'`.
    fn horizontal(&self, y: f64, span: Span) -> DragQuery {
        DragQuery::horizontal(
            self.frame.sign_y * y,
            span.reflect(self.frame.sign_x),
            direction(self.frame.sign_y),
        )
    }

    fn s0(&self) -> GeneratingSegment {
        let q = self.vertical(self.x0, half_open(self.y0, f64::INFINITY));
        GeneratingSegment {
            kind: SegmentKind::S0,
            query: q,
        }
    }

    fn s1(&self, col: u32) -> GeneratingSegment {
        let (lo, hi) = self.col_bounds(col);
        GeneratingSegment {
            kind: SegmentKind::S1,
            query: self.horizontal(self.y0, half_open(lo, hi)),
        }
    }

    fn s2(&self, addr: CellAddr) -> GeneratingSegment {
        let (xlo, _) = self.col_bounds(addr.col);
        let (ylo, yhi) = self.row_bounds(addr.row);
        GeneratingSegment {
            kind: SegmentKind::S2,
            query: self.vertical(xlo, half_open(ylo, yhi)),
        }
    }

    fn s3(&self, below: CellAddr, left_x: f64) -> GeneratingSegment {
        let (xlo, _) = self.col_bounds(below.col);
        let (_, top) = self.row_bounds(below.row);
        GeneratingSegment {
            kind: SegmentKind::S3,
            query: self.horizontal(top, Span::closed(xlo, left_x)),
        }
    }

    fn s4(&self, col: u32, lowest_y: f64) -> GeneratingSegment {
        let (_, xhi) = self.col_bounds(col);
        GeneratingSegment {
            kind: SegmentKind::S0,
            query: self.vertical(xhi, Span::closed(self.y0, lowest_y)),
        }
    }
}

fn half_open(lo: f64, hi: f64) -> Span {
    Span {
        lo,
        hi,
        lo_end: Boundary::Closed,
        hi_end: Boundary::Open,
    }
}

fn direction(sign: f64) -> DragDirection {
    if sign > 0.0 {
        DragDirection::Positive
    } else {
        DragDirection::Negative
    }
}

type Key = (u32, Reverse<u32>);

fn key(a: CellAddr) -> Key {
    (a.col, Reverse(a.row))
}

fn addr(k: Key) -> CellAddr {
    CellAddr { col: k.0, row: k.1 .0 }
}

fn broken(what: &str) -> EnnError {
    EnnError::State(format!("skyline update: {what}"))
}

/// The skyline cells of one quadrant, in canonical order: columns left to right and,
/// within a column, cells top to bottom.
#[derive(Clone, Debug)]
pub struct SkylineCellSet {
    grid: FrameGrid,
    cells: BTreeMap<Key, SkylineCellCursor>,
    drags: usize,
    // Bookkeeping for the advance in progress.
    removed: Option<Key>,
    inserted: Vec<Key>,
}

impl SkylineCellSet {
    /// Walks the skyline column by column with drag queries.
    pub fn compute(drag: &DragIndex, profile: &QueryProfile, frame: QuadrantFrame) -> Result<Self> {
        let grid = FrameGrid::new(profile, frame)?;
        let mut set = SkylineCellSet {
            grid,
            cells: BTreeMap::new(),
            drags: 0,
            removed: None,
            inserted: Vec::new(),
        };
        let s0 = set.grid.s0();
        if let Some(p0) = set.hit(drag, s0) {
            set.sweep_from(drag, p0, None)?;
        }
        set.inserted.clear();
        Ok(set)
    }

    pub fn frame(&self) -> QuadrantFrame {
        self.grid.frame
    }

    pub(crate) fn grid(&self) -> &FrameGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Number of drag queries issued so far.
    pub fn drag_count(&self) -> usize {
        self.drags
    }

    pub fn cursors(&self) -> impl Iterator<Item = &SkylineCellCursor> {
        self.cells.values()
    }

    pub fn get(&self, a: CellAddr) -> Option<&SkylineCellCursor> {
        self.cells.get(&key(a))
    }

    pub fn contains(&self, a: CellAddr) -> bool {
        self.cells.contains_key(&key(a))
    }

    pub fn address_of(&self, p: &Point) -> CellAddr {
        self.grid.addr_of(p)
    }

    /// Updates the set after `removed`, a minimal point of the quadrant, was deleted from `drag`.
    pub fn advance(&mut self, drag: &DragIndex, removed: PointId) -> Result<Advance> {
        let i = drag.index_of(removed).ok_or(EnnError::UnknownPoint(removed))?;
        self.advance_index(drag, i)
    }

    pub(crate) fn advance_index(&mut self, drag: &DragIndex, z: usize) -> Result<Advance> {
        let zp = drag.points()[z];
        let at = self.grid.addr_of(&zp);
        let k = key(at);
        let cur = *self
            .cells
            .get(&k)
            .ok_or_else(|| EnnError::State(format!("point {} is not in a skyline cell", zp.id)))?;
        self.removed = None;
        self.inserted.clear();
        let result = self.advance_inner(drag, z, at, cur);
        let removed = self.removed.take();
        let inserted = std::mem::take(&mut self.inserted);
        result?;

        let mut seen = HashSet::new();
        let mut fresh: Vec<SkylineCellCursor> = inserted
            .into_iter()
            .filter(|k| Some(*k) != removed && seen.insert(*k))
            .filter_map(|k| self.cells.get(&k).copied())
            .collect();
        fresh.sort_by_key(|c| key(c.address));
        let removed_cell = if self.cells.contains_key(&k) {
            RemovedCellStatus::Retained
        } else {
            RemovedCellStatus::Dropped
        };
        Ok(Advance { fresh, removed_cell })
    }

    fn advance_inner(&mut self, drag: &DragIndex, z: usize, at: CellAddr, cur: SkylineCellCursor) -> Result<()> {
        let k = key(at);
        let is_left = cur.skyline_left.index == z;
        let is_bottom = cur.skyline_bottom.index == z;
        let prev = self.cells.range(..k).next_back().map(|(k, _)| addr(*k));
        let next = self
            .cells
            .range((Bound::Excluded(k), Bound::Unbounded))
            .next()
            .map(|(k, _)| addr(*k));
        let prev_in_column = || prev.filter(|p| p.col == at.col).ok_or_else(|| broken("no cell above"));

        match (is_left, is_bottom) {
            (false, false) => Ok(()),
            (true, false) => match cur.skyline_left.segment.kind {
                SegmentKind::S2 => {
                    let above = prev_in_column()?;
                    self.climb(drag, at.col, at.row, cur.skyline_bottom, above.row, None)
                }
                SegmentKind::S0 => {
                    let seg = cur.skyline_left.segment;
                    let h = self
                        .redrag(drag, seg)
                        .ok_or_else(|| broken("left drag found nothing"))?;
                    self.reconnect(drag, Some(h), Some(at))
                }
                _ => Err(broken("unexpected left segment")),
            },
            (false, true) => {
                let seg = cur.skyline_bottom.segment;
                let p = self
                    .redrag(drag, seg)
                    .ok_or_else(|| broken("bottom drag found nothing"))?;
                if self.grid.addr_of(&p.point) != at {
                    return Err(broken("new bottom left its cell"));
                }
                self.cells.get_mut(&k).expect("cell present").skyline_bottom = p;
                match seg.kind {
                    SegmentKind::S1 => self.after_column_bottom_changed(drag, at.col, &p, next),
                    SegmentKind::S3 => Ok(()),
                    _ => Err(broken("unexpected bottom segment")),
                }
            }
            (true, true) => {
                self.cells.remove(&k);
                self.removed = Some(k);
                match cur.skyline_left.segment.kind {
                    SegmentKind::S0 => {
                        let h = self.redrag(drag, cur.skyline_left.segment);
                        self.reconnect(drag, h, next)
                    }
                    SegmentKind::S2 => {
                        let above = prev_in_column()?;
                        let seg = cur.skyline_bottom.segment;
                        let p = self
                            .redrag(drag, seg)
                            .ok_or_else(|| broken("bottom drag found nothing"))?;
                        let row = self.grid.addr_of(&p.point).row;
                        self.climb(drag, at.col, row, p, above.row, None)?;
                        match seg.kind {
                            SegmentKind::S1 => self.after_column_bottom_changed(drag, at.col, &p, next),
                            SegmentKind::S3 => Ok(()),
                            _ => Err(broken("unexpected bottom segment")),
                        }
                    }
                    _ => Err(broken("unexpected left segment")),
                }
            }
        }
    }

    fn hit(&mut self, drag: &DragIndex, seg: GeneratingSegment) -> Option<SkylinePoint> {
        self.drags += 1;
        drag.drag_index_of(&seg.query).map(|i| SkylinePoint {
            point: drag.points()[i],
            segment: seg,
            index: i,
        })
    }

    fn redrag(&mut self, drag: &DragIndex, seg: GeneratingSegment) -> Option<SkylinePoint> {
        self.hit(drag, seg)
    }

    fn put(&mut self, a: CellAddr, left: SkylinePoint, bottom: SkylinePoint) {
        let k = key(a);
        if !self.cells.contains_key(&k) {
            self.inserted.push(k);
        }
        let cell = self.grid.cell(a, None, None);
        self.cells.insert(
            k,
            SkylineCellCursor {
                address: a,
                cell,
                skyline_left: left,
                skyline_bottom: bottom,
            },
        );
    }

    /// Walks up one column from the cell at `start_row`, whose skyline-bottom point is
    /// known, to `stop_row`. With `top_left` the stop cell is new and gets that left
    /// point; otherwise it exists and only its bottom point is replaced.
    fn climb(
        &mut self,
        drag: &DragIndex,
        col: u32,
        start_row: u32,
        mut bottom: SkylinePoint,
        stop_row: u32,
        top_left: Option<SkylinePoint>,
    ) -> Result<()> {
        let mut row = start_row;
        loop {
            let here = CellAddr { col, row };
            if row == stop_row {
                match top_left {
                    Some(left) => self.put(here, left, bottom),
                    None => {
                        let c = self
                            .cells
                            .get_mut(&key(here))
                            .ok_or_else(|| broken("climb target missing"))?;
                        c.skyline_bottom = bottom;
                    }
                }
                return Ok(());
            }
            if row > stop_row {
                return Err(broken("climb passed its target"));
            }
            let s2 = self.grid.s2(here);
            let left = self.hit(drag, s2).ok_or_else(|| broken("left drag found nothing"))?;
            if self.grid.addr_of(&left.point) != here {
                return Err(broken("left point outside its cell"));
            }
            self.put(here, left, bottom);
            let (lx, _) = self.grid.to_frame(&left.point);
            let s3 = self.grid.s3(here, lx);
            bottom = self.hit(drag, s3).ok_or_else(|| broken("climb found no cell above"))?;
            row = self.grid.addr_of(&bottom.point).row;
        }
    }

    /// Builds the whole column whose top cell has skyline-left point `top`.
    /// Returns the column's lowest point.
    fn column_from_top(&mut self, drag: &DragIndex, top: SkylinePoint) -> Result<SkylinePoint> {
        let at = self.grid.addr_of(&top.point);
        let s1 = self.grid.s1(at.col);
        let lowest = self
            .hit(drag, s1)
            .ok_or_else(|| broken("column without a lowest point"))?;
        let row = self.grid.addr_of(&lowest.point).row;
        self.climb(drag, at.col, row, lowest, at.row, Some(top))?;
        Ok(lowest)
    }

    /// Builds columns starting with the one holding `top` until the column `until` is
    /// reached (its top point is returned) or the skyline ends.
    fn sweep_from(
        &mut self,
        drag: &DragIndex,
        mut top: SkylinePoint,
        until: Option<u32>,
    ) -> Result<Option<SkylinePoint>> {
        loop {
            let col = self.grid.addr_of(&top.point).col;
            match until {
                Some(u) if col == u => return Ok(Some(top)),
                Some(u) if col > u => return Err(broken("sweep passed the next column")),
                _ => {}
            }
            let lowest = self.column_from_top(drag, top)?;
            let (_, ly) = self.grid.to_frame(&lowest.point);
            let s4 = self.grid.s4(col, ly);
            match self.hit(drag, s4) {
                Some(h) => top = h,
                None if until.is_none() => return Ok(None),
                None => return Err(broken("sweep lost the next column")),
            }
        }
    }

    /// `top` is the new skyline-left point of the top cell of the column holding `next`,
    /// the column's current top cell.
    fn enter_column_top(&mut self, drag: &DragIndex, top: SkylinePoint, next: CellAddr) -> Result<()> {
        let at = self.grid.addr_of(&top.point);
        let n = *self.cells.get(&key(next)).ok_or_else(|| broken("next cell missing"))?;
        if at.col != next.col {
            return Err(broken("top point in the wrong column"));
        }
        if at.row == next.row {
            self.cells.get_mut(&key(next)).expect("cell present").skyline_left = top;
            Ok(())
        } else if at.row > next.row {
            self.climb(drag, next.col, next.row, n.skyline_bottom, at.row, Some(top))
        } else {
            Err(broken("top point below the next cell"))
        }
    }

    fn reconnect(&mut self, drag: &DragIndex, hit: Option<SkylinePoint>, next: Option<CellAddr>) -> Result<()> {
        match (hit, next) {
            (None, None) => Ok(()),
            (None, Some(_)) => Err(broken("drag missed the next cell")),
            (Some(h), None) => self.sweep_from(drag, h, None).map(|_| ()),
            (Some(h), Some(n)) => {
                let top = self
                    .sweep_from(drag, h, Some(n.col))?
                    .ok_or_else(|| broken("sweep ended early"))?;
                self.enter_column_top(drag, top, n)
            }
        }
    }

    fn after_column_bottom_changed(
        &mut self,
        drag: &DragIndex,
        col: u32,
        lowest: &SkylinePoint,
        next: Option<CellAddr>,
    ) -> Result<()> {
        let (_, ly) = self.grid.to_frame(&lowest.point);
        let s4 = self.grid.s4(col, ly);
        let h = self.hit(drag, s4);
        self.reconnect(drag, h, next)
    }
}

pub fn compute_c1(drag: &DragIndex, profile: &QueryProfile, frame: QuadrantFrame) -> Result<SkylineCellSet> {
    SkylineCellSet::compute(drag, profile, frame)
}

/// Advances `set` in place after `removed` was deleted from `drag`.
pub fn advance_cells(set: &mut SkylineCellSet, removed: &Point, drag: &DragIndex) -> Result<Advance> {
    set.advance(drag, removed.id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{UncertainQuery, WeightedLocation};
    use crate::oracle::{oracle_skyline_cells, OracleCell};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn same(set: &SkylineCellSet, oracle: &[OracleCell]) -> bool {
        let ours: Vec<_> = set
            .cursors()
            .map(|c| (c.cell, c.skyline_left.point.id, c.skyline_bottom.point.id))
            .collect();
        ours.len() == oracle.len()
            && ours
                .iter()
                .zip(oracle)
                .all(|(a, b)| a.0 == b.cell && a.1 == b.left && a.2 == b.bottom)
    }

    fn random_instance(rng: &mut ChaCha8Rng, n: usize, m: usize, grid: bool) -> (Vec<Point>, UncertainQuery) {
        // On the grid variant points may share coordinates with query lines.
        let span = if grid { n as f64 } else { 1000.0 };
        let mut xs: Vec<f64> = (0..n).map(|i| i as f64 * span / n as f64).collect();
        let mut ys = xs.clone();
        xs.shuffle(rng);
        ys.shuffle(rng);
        let pts = (0..n).map(|i| Point::new(i as u64, xs[i], ys[i])).collect();
        let locs = (0..m)
            .map(|_| {
                let (x, y) = if grid {
                    (rng.gen_range(0..n) as f64, rng.gen_range(0..n) as f64)
                } else {
                    (rng.gen_range(0.0..span), rng.gen_range(0.0..span))
                };
                WeightedLocation::new(x, y, rng.gen_range(0.1..1.0))
            })
            .collect();
        (pts, UncertainQuery::new(locs).unwrap())
    }

    fn check_run(pts: Vec<Point>, q: &UncertainQuery, removals: usize, rng: &mut ChaCha8Rng) {
        let profile = QueryProfile::new(q);
        let m = profile.x().lines().len().max(profile.y().lines().len());
        let mut drag = DragIndex::build(pts.clone()).unwrap();
        for frame in QuadrantFrame::all(profile.global_minimum()) {
            let mut set = SkylineCellSet::compute(&drag, &profile, frame).unwrap();
            let mut removed: Vec<PointId> = Vec::new();
            let oracle = oracle_skyline_cells(&pts, q, &frame, &removed);
            assert!(same(&set, &oracle), "initial cells differ in {frame:?}");
            assert!(set.len() <= 2 * m + 1);
            let mut lambda = set.len();
            for step in 0..removals {
                if set.is_empty() {
                    break;
                }
                // Remove a random minimal point: a skyline-left, a skyline-bottom, or one in between.
                let cells: Vec<_> = set.cursors().copied().collect();
                let c = cells.choose(rng).unwrap();
                let candidates: Vec<PointId> = oracle_minimal_in(&oracle_skyline_points(&pts, &frame, &removed), c);
                let z = *candidates.choose(rng).unwrap();
                drag.delete(z).unwrap();
                removed.push(z);
                let before: HashSet<CellAddr> = cells.iter().map(|c| c.address).collect();
                let adv = set.advance(&drag, z).unwrap();
                let oracle = oracle_skyline_cells(&pts, q, &frame, &removed);
                assert!(same(&set, &oracle), "cells differ after step {step} in {frame:?}");
                let after: HashSet<CellAddr> = set.cursors().map(|c| c.address).collect();
                let fresh: HashSet<CellAddr> = adv.fresh.iter().map(|c| c.address).collect();
                assert_eq!(fresh, after.difference(&before).copied().collect());
                lambda += adv.fresh.len();
            }
            assert!(
                lambda <= 2 * q.len() + removed.len() + 2,
                "cumulative fresh cells {lambda} over the bound"
            );
            for id in removed {
                drag.insert(id).unwrap();
            }
        }
    }

    fn oracle_skyline_points(pts: &[Point], frame: &QuadrantFrame, removed: &[PointId]) -> Vec<Point> {
        let alive: Vec<&Point> = pts
            .iter()
            .filter(|p| frame.contains(p.xy()) && !removed.contains(&p.id))
            .collect();
        alive
            .iter()
            .filter(|p| {
                !alive
                    .iter()
                    .any(|o| o.id != p.id && crate::geometry::dominates(o, p, frame))
            })
            .map(|p| **p)
            .collect()
    }

    fn oracle_minimal_in(minimal: &[Point], c: &SkylineCellCursor) -> Vec<PointId> {
        minimal
            .iter()
            .filter(|p| c.cell.contains(p.xy()))
            .map(|p| p.id)
            .collect()
    }

    #[test]
    fn empty_quadrant() {
        let pts = vec![Point::new(0, -5.0, -5.0)];
        let q = UncertainQuery::from_triples(&[(0.0, 0.0, 1.0)]).unwrap();
        let profile = QueryProfile::new(&q);
        let drag = DragIndex::build(pts).unwrap();
        let set = SkylineCellSet::compute(&drag, &profile, QuadrantFrame::new((0.0, 0.0), 1.0, 1.0)).unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn origin_must_be_a_vertex() {
        let q = UncertainQuery::from_triples(&[(0.0, 0.0, 1.0)]).unwrap();
        let profile = QueryProfile::new(&q);
        let drag = DragIndex::build(vec![Point::new(0, 1.0, 1.0)]).unwrap();
        assert!(SkylineCellSet::compute(&drag, &profile, QuadrantFrame::new((0.5, 0.0), 1.0, 1.0)).is_err());
    }

    #[test]
    fn staircase_with_one_location() {
        let pts = vec![
            Point::new(0, 1.0, 3.0),
            Point::new(1, 2.0, 2.0),
            Point::new(2, 3.0, 1.0),
            Point::new(3, 4.0, 4.0),
        ];
        let q = UncertainQuery::from_triples(&[(0.0, 0.0, 1.0)]).unwrap();
        let profile = QueryProfile::new(&q);
        let drag = DragIndex::build(pts.clone()).unwrap();
        let frame = QuadrantFrame::new((0.0, 0.0), 1.0, 1.0);
        let set = SkylineCellSet::compute(&drag, &profile, frame).unwrap();
        assert_eq!(set.len(), 1);
        let c = set.cursors().next().unwrap();
        assert_eq!(c.skyline_left.point.id, PointId(0));
        assert_eq!(c.skyline_bottom.point.id, PointId(2));
        assert!(same(&set, &oracle_skyline_cells(&pts, &q, &frame, &[])));
    }

    #[test]
    fn interior_removal_changes_nothing() {
        let pts = vec![
            Point::new(0, 1.0, 3.0),
            Point::new(1, 2.0, 2.0),
            Point::new(2, 3.0, 1.0),
        ];
        let q = UncertainQuery::from_triples(&[(0.0, 0.0, 1.0)]).unwrap();
        let profile = QueryProfile::new(&q);
        let mut drag = DragIndex::build(pts).unwrap();
        let frame = QuadrantFrame::new((0.0, 0.0), 1.0, 1.0);
        let mut set = SkylineCellSet::compute(&drag, &profile, frame).unwrap();
        let before: Vec<_> = set.cursors().copied().collect();
        drag.delete(PointId(1)).unwrap();
        let adv = set.advance(&drag, PointId(1)).unwrap();
        assert!(adv.fresh.is_empty());
        assert_eq!(adv.removed_cell, RemovedCellStatus::Retained);
        assert_eq!(set.cursors().copied().collect::<Vec<_>>(), before);
    }

    #[test]
    fn anti_diagonal_removal_matches_oracle() {
        let pts: Vec<Point> = (1..=5)
            .map(|i| Point::new(i as u64, i as f64, 6.0 - i as f64))
            .collect();
        let q = UncertainQuery::from_triples(&[(0.0, 0.0, 1.0)]).unwrap();
        let profile = QueryProfile::new(&q);
        let mut drag = DragIndex::build(pts.clone()).unwrap();
        let frame = QuadrantFrame::new((0.0, 0.0), 1.0, 1.0);
        let mut set = SkylineCellSet::compute(&drag, &profile, frame).unwrap();
        let mut removed = Vec::new();
        // All five points tie in distance; remove them from the ends inwards.
        for id in [1u64, 5, 2, 4, 3] {
            drag.delete(PointId(id)).unwrap();
            removed.push(PointId(id));
            set.advance(&drag, PointId(id)).unwrap();
            assert!(same(&set, &oracle_skyline_cells(&pts, &q, &frame, &removed)));
        }
        assert!(set.is_empty());
    }

    #[test]
    fn random_sets_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for round in 0..12 {
            let grid = round % 3 == 0;
            let (pts, q) = random_instance(&mut rng, 300, 12, grid);
            check_run(pts, &q, 20, &mut rng);
        }
    }

    #[test]
    fn small_random_sets_match_oracle_to_exhaustion() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for round in 0..150 {
            let n = rng.gen_range(1..40);
            let m = rng.gen_range(1..6);
            let (pts, q) = random_instance(&mut rng, n, m, round % 2 == 0);
            check_run(pts, &q, n, &mut rng);
        }
    }
}
