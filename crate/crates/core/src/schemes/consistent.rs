use super::{check_input_size, MonotoneScheme, Sample, SideInfo};
use crate::combin::index_subsets;
use crate::{Error, PointSet, Result};

/// Reconstructs a compressed sample as the first concept (in listing order)
/// containing it; compresses to the shortest index subset (lexicographically
/// first among equals) of size at most `d` whose reconstruction covers the whole sample.
#[derive(Clone, Debug)]
pub struct FirstConsistentScheme {
    concepts: Vec<PointSet>,
    d: usize,
}

impl FirstConsistentScheme {
    pub fn new(concepts: Vec<PointSet>, d: usize) -> Self {
        FirstConsistentScheme { concepts, d }
    }

    fn first_containing(&self, pts: &Sample) -> Option<&PointSet> {
        self.concepts.iter().find(|c| pts.iter().all(|p| c.contains(p)))
    }
}

impl MonotoneScheme for FirstConsistentScheme {
    fn size_bound(&self) -> usize {
        self.d
    }

    fn compress(&self, sample: &Sample) -> Result<(Sample, SideInfo)> {
        check_input_size(self.max_input(), sample)?;
        let mut candidates = index_subsets(sample.len(), self.d);
        candidates.sort_by_key(|idx| idx.len());
        candidates
            .iter()
            .map(|idx| sample.select(idx))
            .find(|sub| {
                self.first_containing(sub)
                    .is_some_and(|c| sample.iter().all(|p| c.contains(p)))
            })
            .map(|s| (s, SideInfo::NONE))
            .ok_or_else(|| Error::UnsupportedSample(format!("no subsample of size <= {} determines a cover of {sample:?}", self.d)))
    }

    fn reconstruct(&self, compressed: &Sample, side: SideInfo) -> Result<PointSet> {
        side.check_none()?;
        Ok(self.first_containing(compressed).cloned().unwrap_or_default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Point;

    #[test]
    fn picks_shortest_determining_subsample() {
        let set = |v: &[u64]| v.iter().copied().map(Point::nat).collect::<PointSet>();
        let s = FirstConsistentScheme::new(vec![set(&[0, 1]), set(&[0, 2]), set(&[0, 1, 2, 3])], 2);
        assert_eq!(s.compress(&Sample::nats(&[0])).unwrap().0, Sample::empty());
        assert_eq!(s.compress(&Sample::nats(&[0, 2])).unwrap().0, Sample::nats(&[2]));
        assert_eq!(s.compress(&Sample::nats(&[1, 2])).unwrap().0, Sample::nats(&[1, 2]));
        assert!(s.compress(&Sample::nats(&[4])).is_err());
    }
}
