//! Hierarchical bitset with next/previous set-bit search in `O(log_64 n)`.

#[derive(Clone, Debug)]
pub(crate) struct AliveBits {
    len: usize,
    // levels[0] holds one bit per slot; levels[i + 1] has bit j set iff levels[i][j] != 0
    levels: Vec<Vec<u64>>,
}

impl AliveBits {
    /// All `len` slots set.
    pub fn full(len: usize) -> Self {
        let mut levels = Vec::new();
        let mut bits = len;
        loop {
            let words = bits.div_ceil(64).max(1);
            let mut level = vec![!0u64; words];
            let tail = bits % 64;
            if tail != 0 {
                level[words - 1] = (1u64 << tail) - 1;
            }
            if bits == 0 {
                level[0] = 0;
            }
            levels.push(level);
            if words == 1 {
                break;
            }
            bits = words;
        }
        AliveBits { len, levels }
    }

    #[cfg(test)]
    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.levels[0][i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        let mut idx = i;
        for level in &mut self.levels {
            let (w, b) = (idx / 64, idx % 64);
            let was_empty = level[w] == 0;
            level[w] |= 1u64 << b;
            if !was_empty {
                break;
            }
            idx = w;
        }
    }

    pub fn clear(&mut self, i: usize) {
        debug_assert!(i < self.len);
        let mut idx = i;
        for level in &mut self.levels {
            let (w, b) = (idx / 64, idx % 64);
            level[w] &= !(1u64 << b);
            if level[w] != 0 {
                break;
            }
            idx = w;
        }
    }

    /// Smallest set slot `>= i`.
    pub fn next_set(&self, i: usize) -> Option<usize> {
        if i >= self.len {
            return None;
        }
        let mut level = 0;
        let mut idx = i;
        loop {
            let (w, b) = (idx / 64, idx % 64);
            let words = &self.levels[level];
            if w >= words.len() {
                return None;
            }
            let word = words[w] & (!0u64 << b);
            if word != 0 {
                idx = w * 64 + word.trailing_zeros() as usize;
                break;
            }
            level += 1;
            if level == self.levels.len() {
                return None;
            }
            idx = w + 1;
        }
        while level > 0 {
            level -= 1;
            idx = idx * 64 + self.levels[level][idx].trailing_zeros() as usize;
        }
        Some(idx)
    }

    /// Largest set slot `<= i`.
    pub fn prev_set(&self, i: usize) -> Option<usize> {
        if self.len == 0 {
            return None;
        }
        let mut level = 0;
        let mut idx = i.min(self.len - 1);
        loop {
            let (w, b) = (idx / 64, idx % 64);
            let mask = if b == 63 { !0u64 } else { (1u64 << (b + 1)) - 1 };
            let word = self.levels[level][w] & mask;
            if word != 0 {
                idx = w * 64 + 63 - word.leading_zeros() as usize;
                break;
            }
            if w == 0 {
                return None;
            }
            level += 1;
            if level == self.levels.len() {
                return None;
            }
            idx = w - 1;
        }
        while level > 0 {
            level -= 1;
            idx = idx * 64 + 63 - self.levels[level][idx].leading_zeros() as usize;
        }
        Some(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_a_plain_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &len in &[0usize, 1, 63, 64, 65, 200, 4097, 70000] {
            let mut bits = AliveBits::full(len);
            let mut plain = vec![true; len];
            for _ in 0..2000 {
                if len > 0 {
                    let i = rng.gen_range(0..len);
                    if rng.gen_bool(0.7) {
                        bits.clear(i);
                        plain[i] = false;
                    } else {
                        bits.set(i);
                        plain[i] = true;
                    }
                }
                let probe = rng.gen_range(0..len + 2);
                let next = (probe..len).find(|&j| plain[j]);
                let prev = (0..=probe.min(len.saturating_sub(1)))
                    .rev()
                    .find(|&j| len > 0 && plain[j]);
                assert_eq!(bits.next_set(probe), next, "len {len} probe {probe}");
                assert_eq!(bits.prev_set(probe), prev, "len {len} probe {probe}");
                if probe < len {
                    assert_eq!(bits.get(probe), plain[probe]);
                }
            }
        }
    }

    #[test]
    fn empty_after_clearing_everything() {
        let mut bits = AliveBits::full(300);
        for i in 0..300 {
            bits.clear(i);
        }
        assert_eq!(bits.next_set(0), None);
        assert_eq!(bits.prev_set(299), None);
        bits.set(150);
        assert_eq!(bits.next_set(0), Some(150));
        assert_eq!(bits.prev_set(299), Some(150));
    }
}
