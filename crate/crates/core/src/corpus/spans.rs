use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

/// A canonical set of character offsets: strictly increasing, no duplicates.
///
/// Offsets index Unicode scalar values of the owning text, not bytes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SpanSet {
    offsets: Vec<usize>,
}

impl SpanSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set from arbitrary offsets, sorting and deduplicating.
    pub fn from_offsets<I: IntoIterator<Item = usize>>(offsets: I) -> Self {
        let mut offsets: Vec<usize> = offsets.into_iter().collect();
        offsets.sort_unstable();
        offsets.dedup();
        Self { offsets }
    }

    /// Union of half-open ranges. Overlapping ranges are allowed; empty or
    /// inverted ranges are rejected.
    pub fn from_ranges(ranges: &[(usize, usize)]) -> Result<Self> {
        if let Some(&(start, end)) = ranges.iter().find(|(s, e)| s >= e) {
            return Err(Error::InvalidRange { start, end });
        }
        Ok(Self::from_offsets(ranges.iter().flat_map(|&(s, e)| s..e)))
    }

    /// Maximal contiguous half-open ranges, ascending, never adjacent.
    pub fn ranges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &o in &self.offsets {
            match out.last_mut() {
                Some(last) if last.1 == o => last.1 = o + 1,
                _ => out.push((o, o + 1)),
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn contains(&self, offset: usize) -> bool {
        self.offsets.binary_search(&offset).is_ok()
    }

    /// True when every offset of `range` is in the set.
    pub fn covers(&self, range: Range<usize>) -> bool {
        if range.is_empty() {
            return false;
        }
        match self.offsets.binary_search(&range.start) {
            // Contiguous run starting at `start` must reach `end - 1`.
            Ok(i) => {
                let need = range.end - range.start;
                i + need <= self.offsets.len() && self.offsets[i + need - 1] == range.end - 1
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.offsets.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.offsets
    }

    pub fn max(&self) -> Option<usize> {
        self.offsets.last().copied()
    }

    /// Size of the intersection, by a linear merge.
    pub fn intersection_len(&self, other: &SpanSet) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        let (a, b) = (&self.offsets, &other.offsets);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    pub fn union(&self, other: &SpanSet) -> SpanSet {
        SpanSet::from_offsets(self.iter().chain(other.iter()))
    }

    pub fn is_subset(&self, other: &SpanSet) -> bool {
        self.intersection_len(other) == self.len()
    }
}

impl FromIterator<usize> for SpanSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_offsets(iter)
    }
}

/// Formats as the dataset's offset list, e.g. `[0, 1, 2]` or `[]`.
impl fmt::Display for SpanSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, o) in self.offsets.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{o}")?;
        }
        f.write_str("]")
    }
}

/// Free-function form of [`SpanSet::ranges`].
pub fn offsets_to_ranges(set: &SpanSet) -> Vec<(usize, usize)> {
    set.ranges()
}

/// Free-function form of [`SpanSet::from_ranges`].
pub fn ranges_to_offsets(ranges: &[(usize, usize)]) -> Result<SpanSet> {
    SpanSet::from_ranges(ranges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ranges_merge_consecutive_offsets() {
        let s = SpanSet::from_offsets([0, 1, 2, 3, 4, 5, 34, 35, 36, 37, 38, 39]);
        assert_eq!(s.ranges(), vec![(0, 6), (34, 40)]);
        assert_eq!(SpanSet::new().ranges(), vec![]);
        assert_eq!(SpanSet::from_offsets(12..17).ranges(), vec![(12, 17)]);
    }

    #[test]
    fn from_ranges_unions() {
        assert_eq!(
            SpanSet::from_ranges(&[(0, 6)]).unwrap(),
            SpanSet::from_offsets(0..6)
        );
        assert_eq!(
            SpanSet::from_ranges(&[(0, 3), (2, 5)]).unwrap(),
            SpanSet::from_offsets(0..5)
        );
        assert!(SpanSet::from_ranges(&[]).unwrap().is_empty());
    }

    #[test]
    fn from_ranges_rejects_empty_range() {
        assert!(matches!(
            SpanSet::from_ranges(&[(3, 3)]),
            Err(Error::InvalidRange { start: 3, end: 3 })
        ));
        assert!(SpanSet::from_ranges(&[(0, 2), (5, 4)]).is_err());
    }

    #[test]
    fn display_matches_dataset_format() {
        assert_eq!(SpanSet::from_offsets([2, 0, 1, 1]).to_string(), "[0, 1, 2]");
        assert_eq!(SpanSet::new().to_string(), "[]");
    }

    #[test]
    fn covers_requires_every_offset() {
        let s = SpanSet::from_offsets([3, 4, 5, 7]);
        assert!(s.covers(3..6));
        assert!(s.covers(7..8));
        assert!(!s.covers(3..7));
        assert!(!s.covers(2..4));
        assert!(!s.covers(5..5));
    }

    proptest! {
        #[test]
        fn ranges_round_trip(offsets in proptest::collection::vec(0usize..200, 0..80)) {
            let s = SpanSet::from_offsets(offsets);
            let ranges = s.ranges();
            for w in ranges.windows(2) {
                // ascending, non-overlapping, non-adjacent
                prop_assert!(w[0].1 < w[1].0);
            }
            prop_assert_eq!(SpanSet::from_ranges(&ranges).unwrap(), s);
        }

        #[test]
        fn covers_agrees_with_contains(offsets in proptest::collection::vec(0usize..40, 0..30), a in 0usize..40, len in 1usize..6) {
            let s = SpanSet::from_offsets(offsets);
            let expected = (a..a + len).all(|o| s.contains(o));
            prop_assert_eq!(s.covers(a..a + len), expected);
        }
    }
}
