//! Brute-force reference answers computed straight from the definitions.
//!
//! Nothing here uses the indexes or the query profile; only the plain geometry types.

use crate::geometry::{dominates, Boundary, Cell, CellSides, Point, PointId, QuadrantFrame, UncertainQuery};

#[derive(Clone, Debug, PartialEq)]
pub struct OracleTopK {
    /// `(id, expected distance)` ascending by distance, ties by id.
    pub items: Vec<(PointId, f64)>,
    pub truncated: bool,
}

/// One skyline cell: world bounds plus the ids of its leftmost and lowest minimal points
/// (in frame coordinates).
#[derive(Clone, Debug, PartialEq)]
pub struct OracleCell {
    pub col: usize,
    pub row: usize,
    pub cell: Cell,
    pub left: PointId,
    pub bottom: PointId,
}

/// Everything the oracle knows about one query, for reports and golden files.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub topk: OracleTopK,
    pub q_star: (f64, f64),
    pub x_lines: Vec<f64>,
    pub y_lines: Vec<f64>,
    pub quadrants: Vec<OracleQuadrant>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleQuadrant {
    pub frame: QuadrantFrame,
    pub topk: OracleTopK,
    pub skyline: Vec<PointId>,
    pub cells: Vec<OracleCell>,
}

fn ranked(mut all: Vec<(PointId, f64)>, k: usize) -> OracleTopK {
    all.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let truncated = k > all.len();
    all.truncate(k);
    OracleTopK { items: all, truncated }
}

pub fn oracle_topk(points: &[Point], q: &UncertainQuery, k: usize) -> OracleTopK {
    ranked(
        points
            .iter()
            .map(|p| (p.id, q.expected_distance_direct(p.xy())))
            .collect(),
        k,
    )
}

/// Top-k restricted to the closed quadrant of `frame`.
pub fn oracle_quadrant_topk(points: &[Point], q: &UncertainQuery, frame: &QuadrantFrame, k: usize) -> OracleTopK {
    let inside = points.iter().filter(|p| frame.contains(p.xy()));
    ranked(inside.map(|p| (p.id, q.expected_distance_direct(p.xy()))).collect(), k)
}

/// Weighted median by the prefix rule: the smallest value whose inclusive prefix weight
/// reaches half the total.
pub fn oracle_weighted_median(values: &[(f64, f64)]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = v.iter().map(|p| p.1).sum();
    let mut acc = 0.0;
    for &(c, w) in &v {
        acc += w;
        if acc >= total / 2.0 {
            return c;
        }
    }
    v[v.len() - 1].0
}

/// Minimal points of the alive part of the closed quadrant, in ascending frame x.
pub fn oracle_minimal_points(points: &[Point], frame: &QuadrantFrame, removed: &[PointId]) -> Vec<Point> {
    let alive: Vec<&Point> = points
        .iter()
        .filter(|p| frame.contains(p.xy()) && !removed.contains(&p.id))
        .collect();
    let mut out: Vec<Point> = alive
        .iter()
        .filter(|p| !alive.iter().any(|o| o.id != p.id && dominates(o, p, frame)))
        .map(|p| **p)
        .collect();
    out.sort_by(|a, b| frame.to_frame(a.xy()).0.total_cmp(&frame.to_frame(b.xy()).0));
    out
}

fn lines_in_frame(values: impl Iterator<Item = f64>, sign: f64) -> Vec<f64> {
    let mut v: Vec<f64> = values.map(|c| sign * c).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// `[lo, hi)` in frame coordinates, seen in world coordinates.
fn world_interval(lo: f64, hi: f64, sign: f64) -> (f64, f64, Boundary, Boundary) {
    if sign > 0.0 {
        (lo, hi, Boundary::Closed, Boundary::Open)
    } else {
        (-hi, -lo, Boundary::Open, Boundary::Closed)
    }
}

/// Skyline cells of the alive quadrant points in canonical order. A point on an
/// arrangement line belongs to the cell on the far side of the line from the origin.
pub fn oracle_skyline_cells(
    points: &[Point],
    q: &UncertainQuery,
    frame: &QuadrantFrame,
    removed: &[PointId],
) -> Vec<OracleCell> {
    let xl = lines_in_frame(q.locations().iter().map(|l| l.x), frame.sign_x);
    let yl = lines_in_frame(q.locations().iter().map(|l| l.y), frame.sign_y);
    let slot = |lines: &[f64], v: f64| lines.iter().filter(|&&l| l <= v).count();
    let bounds = |lines: &[f64], i: usize| {
        let lo = if i == 0 { f64::NEG_INFINITY } else { lines[i - 1] };
        let hi = if i == lines.len() { f64::INFINITY } else { lines[i] };
        (lo, hi)
    };

    let mut cells: Vec<OracleCell> = Vec::new();
    for p in oracle_minimal_points(points, frame, removed) {
        let (fx, fy) = frame.to_frame(p.xy());
        let (col, row) = (slot(&xl, fx), slot(&yl, fy));
        if let Some(c) = cells.iter_mut().find(|c| c.col == col && c.row == row) {
            let left = points.iter().find(|o| o.id == c.left).unwrap();
            let bottom = points.iter().find(|o| o.id == c.bottom).unwrap();
            if fx < frame.to_frame(left.xy()).0 {
                c.left = p.id;
            }
            if fy < frame.to_frame(bottom.xy()).1 {
                c.bottom = p.id;
            }
            continue;
        }
        let (clo, chi) = bounds(&xl, col);
        let (rlo, rhi) = bounds(&yl, row);
        let (x_lo, x_hi, left, right) = world_interval(clo, chi, frame.sign_x);
        let (y_lo, y_hi, bottom, top) = world_interval(rlo, rhi, frame.sign_y);
        cells.push(OracleCell {
            col,
            row,
            cell: Cell {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
                sides: CellSides {
                    left,
                    right,
                    bottom,
                    top,
                },
            },
            left: p.id,
            bottom: p.id,
        });
    }
    cells.sort_by(|a, b| a.col.cmp(&b.col).then(b.row.cmp(&a.row)));
    cells
}

/// Whether no arrangement vertex and no point of a 100 x 100 grid over the bounding box of
/// the locations has a smaller expected distance than `q_star`.
pub fn oracle_global_min_check(points: &[Point], q: &UncertainQuery, q_star: (f64, f64)) -> bool {
    let best = q.expected_distance_direct(q_star);
    let tol = 1e-12 * best.abs().max(1.0);
    let locs = q.locations();
    for a in locs {
        for b in locs {
            if q.expected_distance_direct((a.x, b.y)) < best - tol {
                return false;
            }
        }
    }
    let xs = locs.iter().map(|l| l.x).chain(points.iter().map(|p| p.x));
    let ys = locs.iter().map(|l| l.y).chain(points.iter().map(|p| p.y));
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let (y0, y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    for i in 0..100 {
        for j in 0..100 {
            let p = (x0 + (x1 - x0) * i as f64 / 99.0, y0 + (y1 - y0) * j as f64 / 99.0);
            if q.expected_distance_direct(p) < best - tol {
                return false;
            }
        }
    }
    true
}

pub fn oracle_report(points: &[Point], q: &UncertainQuery, k: usize) -> OracleReport {
    let xs: Vec<(f64, f64)> = q.locations().iter().map(|l| (l.x, l.w)).collect();
    let ys: Vec<(f64, f64)> = q.locations().iter().map(|l| (l.y, l.w)).collect();
    let q_star = (oracle_weighted_median(&xs), oracle_weighted_median(&ys));
    let quadrants = QuadrantFrame::all(q_star)
        .into_iter()
        .map(|frame| OracleQuadrant {
            frame,
            topk: oracle_quadrant_topk(points, q, &frame, k),
            skyline: oracle_minimal_points(points, &frame, &[])
                .iter()
                .map(|p| p.id)
                .collect(),
            cells: oracle_skyline_cells(points, q, &frame, &[]),
        })
        .collect();
    OracleReport {
        topk: oracle_topk(points, q, k),
        q_star,
        x_lines: lines_in_frame(xs.iter().map(|v| v.0), 1.0),
        y_lines: lines_in_frame(ys.iter().map(|v| v.0), 1.0),
        quadrants,
    }
}
