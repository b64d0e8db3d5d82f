//! Per-query preprocessing: sorted coordinate orders with prefix sums, so that the
//! expected distance, the affine form of the expected distance on an arrangement
//! cell, and the global minimum point are all available in `O(log m)`.

use crate::error::{EnnError, Result};
use crate::geometry::{Cell, UncertainQuery};

/// Sorted coordinates of the query along one axis with inclusive prefix sums of
/// `w` and `w * coord`.
#[derive(Clone, Debug)]
pub struct AxisProfile {
    order: Vec<usize>,
    coords: Vec<f64>,
    prefix_w: Vec<f64>,
    prefix_wc: Vec<f64>,
    lines: Vec<f64>,
}

impl AxisProfile {
    /// `values` are `(coordinate, weight)` pairs; ties keep input order.
    pub fn new(values: &[(f64, f64)]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].0.total_cmp(&values[b].0));
        Self::with_order(values, order)
    }

    /// Same as [`AxisProfile::new`] for input already sorted by coordinate.
    pub fn presorted(values: &[(f64, f64)]) -> Self {
        Self::with_order(values, (0..values.len()).collect())
    }

    fn with_order(values: &[(f64, f64)], order: Vec<usize>) -> Self {
        let coords: Vec<f64> = order.iter().map(|&i| values[i].0).collect();
        let mut prefix_w = Vec::with_capacity(order.len());
        let mut prefix_wc = Vec::with_capacity(order.len());
        let (mut sw, mut swc) = (0.0, 0.0);
        for &i in &order {
            let (c, w) = values[i];
            sw += w;
            swc += w * c;
            prefix_w.push(sw);
            prefix_wc.push(swc);
        }
        let mut lines = coords.clone();
        lines.dedup();
        AxisProfile {
            order,
            coords,
            prefix_w,
            prefix_wc,
            lines,
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Coordinates in ascending order.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn prefix_w(&self) -> &[f64] {
        &self.prefix_w
    }

    pub fn prefix_wc(&self) -> &[f64] {
        &self.prefix_wc
    }

    /// Distinct coordinates, ascending: the arrangement lines on this axis.
    pub fn lines(&self) -> &[f64] {
        &self.lines
    }

    pub fn total_w(&self) -> f64 {
        self.prefix_w.last().copied().unwrap_or(0.0)
    }

    pub fn total_wc(&self) -> f64 {
        self.prefix_wc.last().copied().unwrap_or(0.0)
    }

    /// Sums of `w` and `w * c` over the first `rank` sorted locations.
    #[inline]
    pub fn sums_below_rank(&self, rank: usize) -> (f64, f64) {
        if rank == 0 {
            (0.0, 0.0)
        } else {
            (self.prefix_w[rank - 1], self.prefix_wc[rank - 1])
        }
    }

    /// Number of locations with coordinate `<= v`.
    #[inline]
    pub fn rank_le(&self, v: f64) -> usize {
        self.coords.partition_point(|&c| c <= v)
    }

    /// Number of locations with coordinate `< v`.
    #[inline]
    pub fn rank_lt(&self, v: f64) -> usize {
        self.coords.partition_point(|&c| c < v)
    }

    /// `sum w * |v - c|` given the number of locations at or left of `v`.
    #[inline]
    pub fn ed_at_rank(&self, v: f64, rank: usize) -> f64 {
        let (wl, sl) = self.sums_below_rank(rank);
        let wr = self.total_w() - wl;
        let sr = self.total_wc() - sl;
        (wl * v - sl) + (sr - wr * v)
    }

    /// `sum w * |v - c|` over this axis.
    pub fn ed(&self, v: f64) -> f64 {
        self.ed_at_rank(v, self.rank_le(v))
    }

    /// Weighted median: the first sorted coordinate whose inclusive prefix weight reaches half the total.
    pub fn median(&self) -> f64 {
        let half = self.total_w() / 2.0;
        let r = self.prefix_w.partition_point(|&s| s < half);
        self.coords[r.min(self.coords.len() - 1)]
    }

    /// Coefficients `(slope, intercept)` of the 1-D expected distance on the closed interval `[lo, hi]`,
    /// assuming no location lies strictly inside it.
    fn interval_affine(&self, lo: f64, hi: f64) -> (f64, f64) {
        let (wl, sl) = self.sums_below_rank(self.rank_le(lo));
        let (wlt, slt) = self.sums_below_rank(self.rank_lt(hi));
        let wr = self.total_w() - wlt;
        let sr = self.total_wc() - slt;
        (wl - wr, sr - sl)
    }
}

/// Affine form `a * x + b * y + c` of the expected distance on one arrangement cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CellCoefficients {
    pub fn eval(&self, p: (f64, f64)) -> f64 {
        self.a * p.0 + self.b * p.1 + self.c
    }
}

#[derive(Clone, Debug)]
pub struct QueryProfile {
    x: AxisProfile,
    y: AxisProfile,
    total_weight: f64,
}

impl QueryProfile {
    pub fn new(q: &UncertainQuery) -> Self {
        let xs: Vec<(f64, f64)> = q.locations().iter().map(|l| (l.x, l.w)).collect();
        let ys: Vec<(f64, f64)> = q.locations().iter().map(|l| (l.y, l.w)).collect();
        QueryProfile {
            x: AxisProfile::new(&xs),
            y: AxisProfile::new(&ys),
            total_weight: q.total_weight(),
        }
    }

    pub fn x(&self) -> &AxisProfile {
        &self.x
    }

    pub fn y(&self) -> &AxisProfile {
        &self.y
    }

    pub fn m(&self) -> usize {
        self.x.coords.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn expected_distance(&self, p: (f64, f64)) -> f64 {
        self.x.ed(p.0) + self.y.ed(p.1)
    }

    pub fn cell_coefficients(&self, cell: &Cell) -> CellCoefficients {
        let (a, cx) = self.x.interval_affine(cell.x_lo, cell.x_hi);
        let (b, cy) = self.y.interval_affine(cell.y_lo, cell.y_hi);
        CellCoefficients { a, b, c: cx + cy }
    }

    /// The global minimum point: component-wise weighted medians.
    pub fn global_minimum(&self) -> (f64, f64) {
        (self.x.median(), self.y.median())
    }
}

pub fn build_profile(q: &UncertainQuery) -> QueryProfile {
    QueryProfile::new(q)
}

/// Weighted median of `(value, weight)` pairs; equal values are taken in input order.
pub fn weighted_median(values: &[(f64, f64)]) -> Result<f64> {
    if values.is_empty() {
        return Err(EnnError::InvalidQuery("weighted median of an empty set".into()));
    }
    if values.iter().any(|&(v, w)| !v.is_finite() || !w.is_finite() || w < 0.0) {
        return Err(EnnError::InvalidQuery("invalid value or weight".into()));
    }
    let profile = AxisProfile::new(values);
    if profile.total_w() <= 0.0 {
        return Err(EnnError::InvalidQuery("total weight is zero".into()));
    }
    Ok(profile.median())
}
