//! Static two-level range tree laid out level by level (a merge-sort tree).
//!
//! The primary tree splits primary ranks by halving. Level `d` stores, for every node at
//! depth `d`, the node's points sorted by secondary key in the slice `[lo, hi)` of one
//! shared array, so each level is a permutation of all points. Leaves are copied down
//! unchanged so every level has the same length.

use crate::geometry::Span;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    /// Secondary keys, ascending within each node's slice.
    pub sec: Vec<f64>,
    /// Point index at each slot.
    pub items: Vec<u32>,
    /// Slot of each point index at this level.
    pub pos: Vec<u32>,
}

#[derive(Clone, Debug)]
pub(crate) struct LayeredTree {
    /// Primary keys in ascending order.
    pub keys: Vec<f64>,
    pub levels: Vec<Level>,
}

impl LayeredTree {
    /// `primary_order` and `secondary_order` list point indices sorted by the respective key.
    pub fn build(
        primary_order: &[u32],
        secondary_order: &[u32],
        primary_key: impl Fn(u32) -> f64,
        secondary_key: impl Fn(u32) -> f64,
    ) -> Self {
        let n = primary_order.len();
        debug_assert_eq!(n, secondary_order.len());
        let keys: Vec<f64> = primary_order.iter().map(|&i| primary_key(i)).collect();
        let mut rank = vec![0u32; n];
        for (r, &i) in primary_order.iter().enumerate() {
            rank[i as usize] = r as u32;
        }
        let depth = if n <= 1 {
            1
        } else {
            (usize::BITS - (n - 1).leading_zeros()) as usize + 1
        };

        let mut items_by_level: Vec<Vec<u32>> = vec![vec![0; n]; depth];
        items_by_level[0] = secondary_order.to_vec();
        if n > 0 {
            split(&mut items_by_level, &rank, 0, 0, n);
        }

        let levels = items_by_level
            .into_iter()
            .map(|items| {
                let sec = items.iter().map(|&i| secondary_key(i)).collect();
                let mut pos = vec![0u32; n];
                for (slot, &i) in items.iter().enumerate() {
                    pos[i as usize] = slot as u32;
                }
                Level { sec, items, pos }
            })
            .collect();
        LayeredTree { keys, levels }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    /// Primary rank range of a span of primary keys.
    pub fn primary_range(&self, span: &Span) -> (usize, usize) {
        span.rank_range(&self.keys)
    }

    /// Calls `f(depth, lo, hi)` for each canonical node covering primary ranks `[a, b)`.
    pub fn canonical(&self, a: usize, b: usize, f: &mut impl FnMut(usize, usize, usize)) {
        if a < b {
            canonical_rec(0, 0, self.len(), a, b, f);
        }
    }

    /// Slot range `[a, b)` inside node `[lo, hi)` at depth `d` whose secondary keys lie in `span`.
    pub fn secondary_range(&self, d: usize, lo: usize, hi: usize, span: &Span) -> (usize, usize) {
        let (a, b) = span.rank_range(&self.levels[d].sec[lo..hi]);
        (lo + a, lo + b)
    }
}

fn split(levels: &mut [Vec<u32>], rank: &[u32], d: usize, lo: usize, hi: usize) {
    if d + 1 >= levels.len() {
        return;
    }
    let (upper, lower) = levels.split_at_mut(d + 1);
    let src = &upper[d][lo..hi];
    let dst = &mut lower[0];
    if hi - lo <= 1 {
        dst[lo..hi].copy_from_slice(src);
        split(levels, rank, d + 1, lo, hi);
        return;
    }
    let mid = (lo + hi) / 2;
    let (mut l, mut r) = (lo, mid);
    for &i in src {
        if (rank[i as usize] as usize) < mid {
            dst[l] = i;
            l += 1;
        } else {
            dst[r] = i;
            r += 1;
        }
    }
    split(levels, rank, d + 1, lo, mid);
    split(levels, rank, d + 1, mid, hi);
}

fn canonical_rec(d: usize, lo: usize, hi: usize, a: usize, b: usize, f: &mut impl FnMut(usize, usize, usize)) {
    if b <= lo || hi <= a {
        return;
    }
    if a <= lo && hi <= b {
        f(d, lo, hi);
        return;
    }
    let mid = (lo + hi) / 2;
    canonical_rec(d + 1, lo, mid, a, b, f);
    canonical_rec(d + 1, mid, hi, a, b, f);
}
