//! Top-k expected nearest neighbors on a line.
//!
//! The index is the sorted point array. A query splits it at the weighted median of
//! the query locations and scans outward on both sides; expected distance is
//! non-increasing towards the median, so each side is already in distance order and
//! a two-pointer merge yields the answer. Each scanned point's distance is evaluated
//! in O(1) by advancing a cursor into the sorted query prefix sums alongside it.

use crate::error::{Axis, EnnError, Result};
use crate::geometry::PointId;
use crate::profile::AxisProfile;

#[derive(Clone, Debug)]
pub struct Index1D {
    points_sorted: Vec<(f64, PointId)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Query1dResult {
    /// `(id, expected distance)` in ascending distance order.
    pub items: Vec<(PointId, f64)>,
    /// Set when `k` exceeded the number of points.
    pub truncated: bool,
}

impl Index1D {
    pub fn build(points: &[(f64, PointId)]) -> Result<Self> {
        if points.is_empty() {
            return Err(EnnError::InvalidQuery("empty point set".into()));
        }
        for &(x, id) in points {
            if !x.is_finite() {
                return Err(EnnError::NonFinite(id));
            }
        }
        let mut points_sorted = points.to_vec();
        points_sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in points_sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(EnnError::GeneralPosition {
                    axis: Axis::X,
                    first: w[0].1,
                    second: w[1].1,
                    value: w[0].0,
                });
            }
        }
        Ok(Index1D { points_sorted })
    }

    pub fn len(&self) -> usize {
        self.points_sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points_sorted.is_empty()
    }

    pub fn points_sorted(&self) -> &[(f64, PointId)] {
        &self.points_sorted
    }

    /// `q` holds `(coordinate, weight)` pairs. With `q_presorted` the caller promises
    /// ascending coordinates and the internal sort is skipped.
    pub fn query(&self, q: &[(f64, f64)], k: usize, q_presorted: bool) -> Result<Query1dResult> {
        if k == 0 {
            return Err(EnnError::InvalidQuery("k must be positive".into()));
        }
        if q.is_empty() {
            return Err(EnnError::InvalidQuery("query has no locations".into()));
        }
        if q.iter().any(|&(c, w)| !c.is_finite() || !w.is_finite() || w < 0.0) {
            return Err(EnnError::InvalidQuery("invalid location or weight".into()));
        }
        let profile = if q_presorted {
            if q.windows(2).any(|w| w[0].0 > w[1].0) {
                return Err(EnnError::InvalidQuery("query is not sorted".into()));
            }
            AxisProfile::presorted(q)
        } else {
            AxisProfile::new(q)
        };
        if profile.total_w() <= 0.0 {
            return Err(EnnError::InvalidQuery("total weight is zero".into()));
        }

        let n = self.points_sorted.len();
        let truncated = k > n;
        let k = k.min(n);
        let coords = profile.coords();
        let m = coords.len();
        let median = profile.median();
        let split = self.points_sorted.partition_point(|p| p.0 <= median);

        // Right side scans upwards from `split`, left side downwards from `split - 1`.
        let mut right = split;
        let mut left = split;
        let mut right_rank = profile.rank_le(median);
        let mut left_rank = right_rank;
        let mut right_head: Option<(f64, usize)> = None;
        let mut left_head: Option<(f64, usize)> = None;

        let mut items = Vec::with_capacity(k);
        while items.len() < k {
            if right_head.is_none() && right < n {
                let x = self.points_sorted[right].0;
                while right_rank < m && coords[right_rank] <= x {
                    right_rank += 1;
                }
                right_head = Some((profile.ed_at_rank(x, right_rank), right));
                right += 1;
            }
            if left_head.is_none() && left > 0 {
                left -= 1;
                let x = self.points_sorted[left].0;
                while left_rank > 0 && coords[left_rank - 1] > x {
                    left_rank -= 1;
                }
                left_head = Some((profile.ed_at_rank(x, left_rank), left));
            }
            let take_right = match (left_head, right_head) {
                (Some(l), Some(r)) => {
                    let (lid, rid) = (self.points_sorted[l.1].1, self.points_sorted[r.1].1);
                    (r.0, rid) < (l.0, lid)
                }
                (None, Some(_)) => true,
                (Some(_), None) => false,
                (None, None) => break,
            };
            let (d, i) = if take_right {
                right_head.take().unwrap()
            } else {
                left_head.take().unwrap()
            };
            items.push((self.points_sorted[i].1, d));
        }
        Ok(Query1dResult { items, truncated })
    }
}

pub fn build_1d(points: &[(f64, PointId)]) -> Result<Index1D> {
    Index1D::build(points)
}

pub fn query_1d(index: &Index1D, q: &[(f64, f64)], k: usize, q_presorted: bool) -> Result<Query1dResult> {
    index.query(q, k, q_presorted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pts(xs: &[f64]) -> Vec<(f64, PointId)> {
        xs.iter().enumerate().map(|(i, &x)| (x, PointId(i as u64))).collect()
    }

    fn brute(points: &[(f64, PointId)], q: &[(f64, f64)]) -> Vec<(PointId, f64)> {
        let mut all: Vec<(PointId, f64)> = points
            .iter()
            .map(|&(x, id)| (id, q.iter().map(|&(c, w)| w * (x - c).abs()).sum()))
            .collect();
        all.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        all
    }

    #[test]
    fn build_sorts_and_rejects_duplicates() {
        let idx = Index1D::build(&pts(&[5.0, 1.0, 3.0])).unwrap();
        let xs: Vec<f64> = idx.points_sorted().iter().map(|p| p.0).collect();
        assert_eq!(xs, vec![1.0, 3.0, 5.0]);
        assert_eq!(Index1D::build(&pts(&[2.0])).unwrap().len(), 1);
        assert!(matches!(
            Index1D::build(&pts(&[1.0, 2.0, 1.0])),
            Err(EnnError::GeneralPosition { .. })
        ));
    }

    #[test]
    fn random_build_is_sorted_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut xs: Vec<f64> = (0..100).map(|i| i as f64 * 1.5).collect();
        xs.shuffle(&mut rng);
        let idx = Index1D::build(&pts(&xs)).unwrap();
        let sorted = idx.points_sorted();
        assert!(sorted.windows(2).all(|w| w[0].0 < w[1].0));
        let mut ids: Vec<u64> = sorted.iter().map(|p| p.1 .0).collect();
        ids.sort();
        assert_eq!(ids, (0..100).collect::<Vec<_>>());
    }

    #[test]
    fn small_example() {
        let idx = Index1D::build(&pts(&[1.0, 3.0, 5.0, 7.0])).unwrap();
        let r = idx.query(&[(3.9, 1.0)], 2, true).unwrap();
        assert_eq!(r.items.len(), 2);
        assert_eq!(r.items[0].0, PointId(1));
        assert_eq!(r.items[1].0, PointId(2));
        assert!((r.items[0].1 - 0.9).abs() < 1e-12);
        assert!((r.items[1].1 - 1.1).abs() < 1e-12);
        assert!(!r.truncated);
    }

    #[test]
    fn k_equal_and_above_n() {
        let points = pts(&[1.0, 3.0, 5.0, 7.0, -2.0]);
        let idx = Index1D::build(&points).unwrap();
        let q = [(2.5, 0.3), (6.0, 0.7)];
        let r = idx.query(&q, 5, false).unwrap();
        let ids: Vec<PointId> = r.items.iter().map(|p| p.0).collect();
        let expect: Vec<PointId> = brute(&points, &q).iter().map(|p| p.0).collect();
        assert_eq!(ids, expect);
        let r = idx.query(&q, 9, false).unwrap();
        assert!(r.truncated);
        assert_eq!(r.items.len(), 5);
    }

    #[test]
    fn invalid_queries() {
        let idx = Index1D::build(&pts(&[1.0, 2.0])).unwrap();
        assert!(idx.query(&[(0.0, 0.0)], 1, false).is_err());
        assert!(idx.query(&[(0.0, 1.0)], 0, false).is_err());
        assert!(idx.query(&[(2.0, 1.0), (1.0, 1.0)], 1, true).is_err());
    }

    #[test]
    fn k_one_is_a_neighbor_of_the_median() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let xs: Vec<f64> = (0..50).map(|_| rng.gen_range(0.0..1000.0)).collect();
            let points = pts(&xs);
            let idx = Index1D::build(&points).unwrap();
            let q: Vec<(f64, f64)> = (0..5)
                .map(|_| (rng.gen_range(0.0..1000.0), rng.gen_range(0.1..1.0)))
                .collect();
            let r = idx.query(&q, 1, false).unwrap();
            let med = AxisProfile::new(&q).median();
            let split = idx.points_sorted().partition_point(|p| p.0 <= med);
            let neighbors: Vec<PointId> = [split.checked_sub(1), Some(split)]
                .into_iter()
                .flatten()
                .filter(|&i| i < idx.len())
                .map(|i| idx.points_sorted()[i].1)
                .collect();
            assert!(neighbors.contains(&r.items[0].0));
        }
    }

    #[test]
    fn random_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for round in 0..20 {
            let xs: Vec<f64> = (0..500).map(|_| rng.gen_range(-1e4..1e4)).collect();
            let points = pts(&xs);
            let idx = Index1D::build(&points).unwrap();
            let mut q: Vec<(f64, f64)> = (0..32)
                .map(|_| (rng.gen_range(-1e4..1e4), rng.gen_range(0.0..1.0)))
                .collect();
            let expect = brute(&points, &q);
            let r = idx.query(&q, 17, false).unwrap();
            for (got, want) in r.items.iter().zip(&expect) {
                assert_eq!(got.0, want.0, "round {round}");
                assert!((got.1 - want.1).abs() <= 1e-9 * want.1.max(1.0));
            }
            q.sort_by(|a, b| a.0.total_cmp(&b.0));
            let r2 = idx.query(&q, 17, true).unwrap();
            let ids: Vec<_> = r.items.iter().map(|p| p.0).collect();
            let ids2: Vec<_> = r2.items.iter().map(|p| p.0).collect();
            assert_eq!(ids, ids2);
            assert!(r.items.windows(2).all(|w| w[0].1 <= w[1].1));
        }
    }
}
