//! Validated point set with its x- and y-sorted orders.

use crate::error::{Axis, EnnError, Result};
use crate::geometry::{Point, PointId};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct PointSet {
    points: Arc<[Point]>,
    x_order: Arc<[u32]>,
    y_order: Arc<[u32]>,
    by_id: Arc<HashMap<PointId, u32>>,
}

impl PointSet {
    /// Validates coordinates and ids and sorts both axes.
    /// Distinct x- and distinct y-coordinates are required.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let mut x_order: Vec<u32> = (0..points.len() as u32).collect();
        let mut y_order = x_order.clone();
        x_order.sort_by(|&a, &b| points[a as usize].x.total_cmp(&points[b as usize].x));
        y_order.sort_by(|&a, &b| points[a as usize].y.total_cmp(&points[b as usize].y));
        Self::from_orders(points, x_order, y_order)
    }

    /// Accepts precomputed sort orders; they are verified in linear time.
    pub fn from_orders(points: Vec<Point>, x_order: Vec<u32>, y_order: Vec<u32>) -> Result<Self> {
        if points.len() > u32::MAX as usize {
            return Err(EnnError::InvalidQuery("too many points".into()));
        }
        let mut by_id = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(EnnError::NonFinite(p.id));
            }
            if by_id.insert(p.id, i as u32).is_some() {
                return Err(EnnError::DuplicateId(p.id));
            }
        }
        check_order(&points, &x_order, Axis::X)?;
        check_order(&points, &y_order, Axis::Y)?;
        Ok(PointSet {
            points: points.into(),
            x_order: x_order.into(),
            y_order: y_order.into(),
            by_id: Arc::new(by_id),
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn shared_points(&self) -> Arc<[Point]> {
        Arc::clone(&self.points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point indices in ascending x.
    pub fn x_order(&self) -> &[u32] {
        &self.x_order
    }

    /// Point indices in ascending y.
    pub fn y_order(&self) -> &[u32] {
        &self.y_order
    }

    pub fn index_of(&self, id: PointId) -> Option<usize> {
        self.by_id.get(&id).map(|&i| i as usize)
    }
}

fn check_order(points: &[Point], order: &[u32], axis: Axis) -> Result<()> {
    let coord = |i: u32| match axis {
        Axis::X => points[i as usize].x,
        Axis::Y => points[i as usize].y,
    };
    if order.len() != points.len() {
        return Err(EnnError::SnapshotFormat("sort order has the wrong length".into()));
    }
    let mut seen = vec![false; points.len()];
    for &i in order {
        if i as usize >= points.len() || std::mem::replace(&mut seen[i as usize], true) {
            return Err(EnnError::SnapshotFormat("sort order is not a permutation".into()));
        }
    }
    for w in order.windows(2) {
        let (a, b) = (coord(w[0]), coord(w[1]));
        if a == b {
            return Err(EnnError::GeneralPosition {
                axis,
                first: points[w[0] as usize].id,
                second: points[w[1] as usize].id,
                value: a,
            });
        }
        if a > b {
            return Err(EnnError::SnapshotFormat("sort order is not ascending".into()));
        }
    }
    Ok(())
}
