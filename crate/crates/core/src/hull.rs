//! Rectangle extreme-point queries: the point of `P ∩ R` minimizing `a*x + b*y`.
//!
//! Built on the x-keyed layered tree. Every primary node larger than the leaf size gets a
//! secondary halving tree over its y-sorted slice; each secondary node larger than the leaf
//! size stores the lower and upper hull chains of its subset. A query decomposes the
//! rectangle into `O(log^2 n)` hulls and binary-searches each one. Nodes at or below the
//! leaf size are scanned directly.

use crate::error::Result;
use crate::geometry::{Cell, Point, Span};
use crate::layered::LayeredTree;
use crate::pointset::PointSet;
use std::cmp::Ordering;
use std::sync::Arc;

pub const DEFAULT_LEAF_SIZE: usize = 8;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct SecNode {
    lower: (u32, u32),
    upper: (u32, u32),
    right: u32,
}

#[derive(Clone, Debug)]
pub struct HullIndex {
    set: PointSet,
    tree: Arc<LayeredTree>,
    leaf_size: usize,
    /// roots[d][lo]: secondary root of the primary node starting at `lo` on depth `d`.
    roots: Vec<Vec<u32>>,
    nodes: Vec<SecNode>,
    verts: Vec<u32>,
}

/// One stored hull with the subset it was built from, as point indices.
#[derive(Clone, Debug)]
pub struct StoredHull {
    pub subset: Vec<usize>,
    pub lower: Vec<usize>,
    pub upper: Vec<usize>,
}

impl HullIndex {
    pub fn build(points: Vec<Point>) -> Result<Self> {
        Self::build_with_leaf_size(points, DEFAULT_LEAF_SIZE)
    }

    pub fn build_with_leaf_size(points: Vec<Point>, leaf_size: usize) -> Result<Self> {
        let set = PointSet::new(points)?;
        let (by_x, _) = crate::drag::build_trees(&set);
        Ok(Self::from_parts(set, Arc::new(by_x), leaf_size))
    }

    pub(crate) fn from_parts(set: PointSet, tree: Arc<LayeredTree>, leaf_size: usize) -> Self {
        let leaf_size = leaf_size.max(1);
        let n = set.len();
        let mut idx = HullIndex {
            set,
            tree,
            leaf_size,
            roots: Vec::new(),
            nodes: Vec::new(),
            verts: Vec::new(),
        };
        let mut roots: Vec<Vec<u32>> = vec![vec![NONE; n]; idx.tree.levels.len()];
        let mut stack = vec![(0usize, 0usize, n)];
        while let Some((d, lo, hi)) = stack.pop() {
            if hi - lo <= leaf_size {
                continue;
            }
            roots[d][lo] = idx.build_sec(d, lo, hi);
            let mid = (lo + hi) / 2;
            stack.push((d + 1, lo, mid));
            stack.push((d + 1, mid, hi));
        }
        idx.roots = roots;
        idx
    }

    pub fn points(&self) -> &[Point] {
        self.set.points()
    }

    pub fn leaf_size(&self) -> usize {
        self.leaf_size
    }

    /// Total number of stored hull vertices over both chains.
    pub fn stored_vertices(&self) -> usize {
        self.verts.len()
    }

    fn build_sec(&mut self, d: usize, lo: usize, hi: usize) -> u32 {
        let me = self.nodes.len() as u32;
        self.nodes.push(SecNode {
            lower: (0, 0),
            upper: (0, 0),
            right: NONE,
        });
        let mid = (lo + hi) / 2;
        let mut cand = Vec::new();
        for (a, b) in [(lo, mid), (mid, hi)] {
            if b - a > self.leaf_size {
                let child = self.build_sec(d, a, b);
                if a == mid {
                    self.nodes[me as usize].right = child;
                }
                cand.extend(self.hull_vertices(child));
            } else {
                cand.extend_from_slice(&self.tree.levels[d].items[a..b]);
            }
        }
        let pts = self.set.points();
        let (lower, upper) = monotone_chain(&mut cand, |i| pts[i as usize].xy());
        let start = self.verts.len() as u32;
        self.verts.extend_from_slice(&lower);
        let mid_at = self.verts.len() as u32;
        self.verts.extend_from_slice(&upper);
        let node = &mut self.nodes[me as usize];
        node.lower = (start, mid_at);
        node.upper = (mid_at, self.verts.len() as u32);
        me
    }

    fn chain(&self, r: (u32, u32)) -> &[u32] {
        &self.verts[r.0 as usize..r.1 as usize]
    }

    fn hull_vertices(&self, node: u32) -> Vec<u32> {
        let n = &self.nodes[node as usize];
        let lower = self.chain(n.lower);
        let upper = self.chain(n.upper);
        let mut out = lower.to_vec();
        if upper.len() > 2 {
            out.extend_from_slice(&upper[1..upper.len() - 1]);
        }
        out
    }

    /// The point of `P ∩ rect` minimizing `a*x + b*y` (ties broken by id) and the value.
    /// With `a = b = 0` the lexicographically least point is returned with value 0.
    pub fn min_linear(&self, rect: &Cell, a: f64, b: f64) -> Option<(Point, f64)> {
        self.min_linear_index(rect, a, b)
            .map(|(i, v)| (self.set.points()[i], v))
    }

    pub(crate) fn min_linear_index(&self, rect: &Cell, a: f64, b: f64) -> Option<(usize, f64)> {
        let degenerate = a == 0.0 && b == 0.0;
        let (a, b) = if degenerate { (1.0, 0.0) } else { (a, b) };
        let mut best = Best {
            a,
            b,
            pts: self.set.points(),
            hit: None,
        };
        let (xa, xb) = self.tree.primary_range(&rect.x_span());
        let y_span = rect.y_span();
        self.tree.canonical(xa, xb, &mut |d, lo, hi| {
            let (ya, yb) = self.tree.secondary_range(d, lo, hi, &y_span);
            if ya >= yb {
                return;
            }
            if hi - lo > self.leaf_size {
                self.query_sec(d, self.roots[d][lo], lo, hi, ya, yb, &mut best);
            } else {
                best.scan(&self.tree.levels[d].items[ya..yb]);
            }
        });
        best.hit.map(|(i, v)| (i as usize, if degenerate { 0.0 } else { v }))
    }

    #[allow(clippy::too_many_arguments)]
    fn query_sec(&self, d: usize, node: u32, lo: usize, hi: usize, ya: usize, yb: usize, best: &mut Best) {
        if yb <= lo || hi <= ya {
            return;
        }
        let sec = &self.nodes[node as usize];
        if ya <= lo && hi <= yb {
            best.search_hull(self.chain(sec.lower), self.chain(sec.upper));
            return;
        }
        let mid = (lo + hi) / 2;
        if mid - lo > self.leaf_size {
            self.query_sec(d, node + 1, lo, mid, ya, yb, best);
        } else {
            best.scan(&self.tree.levels[d].items[lo.max(ya)..mid.min(yb).max(lo.max(ya))]);
        }
        if hi - mid > self.leaf_size {
            self.query_sec(d, sec.right, mid, hi, ya, yb, best);
        } else {
            best.scan(&self.tree.levels[d].items[mid.max(ya)..hi.min(yb).max(mid.max(ya))]);
        }
    }

    /// Every stored hull with its subset. Intended for verification.
    pub fn stored_hulls(&self) -> Vec<StoredHull> {
        let mut out = Vec::new();
        let n = self.set.len();
        let mut stack = vec![(0usize, 0usize, n)];
        while let Some((d, lo, hi)) = stack.pop() {
            if hi - lo <= self.leaf_size {
                continue;
            }
            self.collect_sec(d, self.roots[d][lo], lo, hi, &mut out);
            let mid = (lo + hi) / 2;
            stack.push((d + 1, lo, mid));
            stack.push((d + 1, mid, hi));
        }
        out
    }

    fn collect_sec(&self, d: usize, node: u32, lo: usize, hi: usize, out: &mut Vec<StoredHull>) {
        let sec = &self.nodes[node as usize];
        let as_usize = |s: &[u32]| s.iter().map(|&i| i as usize).collect::<Vec<_>>();
        out.push(StoredHull {
            subset: as_usize(&self.tree.levels[d].items[lo..hi]),
            lower: as_usize(self.chain(sec.lower)),
            upper: as_usize(self.chain(sec.upper)),
        });
        let mid = (lo + hi) / 2;
        if mid - lo > self.leaf_size {
            self.collect_sec(d, node + 1, lo, mid, out);
        }
        if hi - mid > self.leaf_size {
            self.collect_sec(d, sec.right, mid, hi, out);
        }
    }
}

struct Best<'a> {
    a: f64,
    b: f64,
    pts: &'a [Point],
    hit: Option<(u32, f64)>,
}

impl Best<'_> {
    fn value(&self, i: u32) -> f64 {
        let p = &self.pts[i as usize];
        self.a * p.x + self.b * p.y
    }

    fn offer(&mut self, i: u32) {
        let v = self.value(i);
        let better = match self.hit {
            None => true,
            Some((j, w)) => match v.total_cmp(&w) {
                Ordering::Less => true,
                Ordering::Equal => self.pts[i as usize].id < self.pts[j as usize].id,
                Ordering::Greater => false,
            },
        };
        if better {
            self.hit = Some((i, v));
        }
    }

    fn scan(&mut self, items: &[u32]) {
        for &i in items {
            self.offer(i);
        }
    }

    fn search_hull(&mut self, lower: &[u32], upper: &[u32]) {
        let chain = if self.b > 0.0 {
            lower
        } else if self.b < 0.0 {
            upper
        } else {
            if self.a > 0.0 {
                self.offer(lower[0]);
            } else {
                self.offer(lower[lower.len() - 1]);
            }
            return;
        };
        // Along a chain the objective is unimodal; find the first vertex not followed by a decrease.
        let (mut i, mut hi) = (0, chain.len() - 1);
        while i < hi {
            let mid = (i + hi) / 2;
            if self.value(chain[mid + 1]) < self.value(chain[mid]) {
                i = mid + 1;
            } else {
                hi = mid;
            }
        }
        self.offer(chain[i]);
        if i + 1 < chain.len() && self.value(chain[i + 1]) == self.value(chain[i]) {
            self.offer(chain[i + 1]);
        }
    }
}

/// Lower and upper hull chains, both in ascending x, of the given points.
/// Collinear points are dropped. `items` is reordered.
pub(crate) fn monotone_chain(items: &mut [u32], xy: impl Fn(u32) -> (f64, f64)) -> (Vec<u32>, Vec<u32>) {
    items.sort_by(|&a, &b| {
        let (pa, pb) = (xy(a), xy(b));
        pa.0.total_cmp(&pb.0).then(pa.1.total_cmp(&pb.1))
    });
    let cross = |o: u32, a: u32, b: u32| {
        let (o, a, b) = (xy(o), xy(a), xy(b));
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<u32> = Vec::with_capacity(items.len());
    for &p in items.iter() {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<u32> = Vec::with_capacity(items.len());
    for &p in items.iter() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) >= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    (lower, upper)
}

pub fn build_hull(points: Vec<Point>) -> Result<HullIndex> {
    HullIndex::build(points)
}

/// Linear-scan reference for [`HullIndex::min_linear`].
pub fn min_linear_scan(points: &[Point], rect: &Cell, a: f64, b: f64) -> Option<(Point, f64)> {
    let degenerate = a == 0.0 && b == 0.0;
    let (a, b) = if degenerate { (1.0, 0.0) } else { (a, b) };
    let mut best: Option<(Point, f64)> = None;
    for p in points.iter().filter(|p| rect.contains(p.xy())) {
        let v = a * p.x + b * p.y;
        let better = match best {
            None => true,
            Some((q, w)) => v < w || (v == w && p.id < q.id),
        };
        if better {
            best = Some((*p, v));
        }
    }
    best.map(|(p, v)| (p, if degenerate { 0.0 } else { v }))
}

/// A rectangle spanning two spans.
pub fn rect(x: Span, y: Span) -> Cell {
    Cell {
        x_lo: x.lo,
        x_hi: x.hi,
        y_lo: y.lo,
        y_hi: y.hi,
        sides: crate::geometry::CellSides {
            left: x.lo_end,
            right: x.hi_end,
            bottom: y.lo_end,
            top: y.hi_end,
        },
    }
}
