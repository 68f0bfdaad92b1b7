//! Subsets of a small ground set stored as bitmasks.
//!
//! Bit `i` of a mask stands for element `i + 1` of the ground set `[d]`.

use std::cmp::Ordering;

/// Maximum ground-set size representable by a `u64` mask.
pub const MAX_GROUND: usize = 64;

/// Compares two subsets by their indicator vectors `(x_1, ..., x_d)`,
/// lexicographically with `x_1` most significant.
pub fn lex_cmp(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    let low = diff & diff.wrapping_neg();
    if a & low == 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Indicator vector of `mask` in `Z^d`.
pub fn indicator(mask: u64, d: usize) -> Vec<i64> {
    (0..d).map(|i| ((mask >> i) & 1) as i64).collect()
}

pub fn full_mask(d: usize) -> u64 {
    if d >= 64 {
        u64::MAX
    } else {
        (1u64 << d) - 1
    }
}

/// Iterates the set bits of `mask` as 0-based indices.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// A deterministic, duplicate-free list of subsets of `[d]`, sorted
/// lexicographically by indicator vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetFamily {
    ground: usize,
    sets: Vec<u64>,
}

impl SubsetFamily {
    pub fn new(ground: usize, mut sets: Vec<u64>) -> Self {
        sets.sort_by(|a, b| lex_cmp(*a, *b));
        sets.dedup();
        Self { ground, sets }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.sets.iter().copied()
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.sets.binary_search_by(|s| lex_cmp(*s, mask)).is_ok()
    }

    /// Indicator vectors of all members, in family order.
    pub fn indicators(&self) -> Vec<Vec<i64>> {
        self.sets
            .iter()
            .map(|&s| indicator(s, self.ground))
            .collect()
    }

    /// Members as sorted lists of 1-based elements.
    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.sets
            .iter()
            .map(|&s| bits(s).map(|i| i + 1).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_matches_indicator_vectors() {
        // {1} = (1,0), {2} = (0,1)
        assert_eq!(lex_cmp(0b01, 0b10), Ordering::Greater);
        assert_eq!(lex_cmp(0b00, 0b10), Ordering::Less);
        let fam = SubsetFamily::new(2, vec![0b11, 0b01, 0b00, 0b10, 0b01]);
        assert_eq!(fam.masks(), &[0b00, 0b10, 0b01, 0b11]);
        assert!(fam.contains(0b10));
        assert!(!SubsetFamily::new(2, vec![0]).contains(0b01));
    }

    #[test]
    fn bit_iteration() {
        assert_eq!(bits(0b10110).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!(indicator(0b101, 4), vec![1, 0, 1, 0]);
    }
}
