use std::cmp::Ordering;

use super::{ConceptClass, Learner};
use crate::combin::any_index_subset;
use crate::schemes::{check_input_size, MonotoneScheme};
use crate::{Error, Point, PointSet, Result, Sample, SideInfo};

/// A monotone compression scheme built from a weak learner `G` with sample
/// size `d0` over a union-bounded class, valid for samples of size at most
/// `m`.
///
/// With `E'(S) = S ∪ ⋃{G(T) : T ⊆ S, |T| <= d0}` and `E(S)` the class member
/// chosen to contain `E'(S)`, the compressor drops an element `x` whenever
/// `x ∈ E'(S \ {x})`, and the reconstruction is `E` applied `m` times.
pub struct ExtractedScheme<L> {
    learner: L,
    class: ConceptClass,
    m: usize,
    d0: usize,
}

/// Builds the scheme; fails unless the class is union bounded.
pub fn extract_compression<L: Learner>(learner: L, class: ConceptClass, m: usize) -> Result<ExtractedScheme<L>> {
    if !class.is_union_bounded() {
        return Err(Error::NotUnionBounded);
    }
    let d0 = learner.sample_size();
    Ok(ExtractedScheme { learner, class, m, d0 })
}

impl<L: Learner> ExtractedScheme<L> {
    /// `⌈3·d0/2⌉`.
    pub fn bound(&self) -> usize {
        (3 * self.d0).div_ceil(2)
    }

    pub fn learner(&self) -> &L {
        &self.learner
    }

    fn e_prime(&self, sample: &Sample) -> Result<PointSet> {
        let mut out = sample.to_set();
        let mut err = None;
        any_index_subset(sample.len(), self.d0, |idx| match self.learner.learn(&sample.select(idx)) {
            Ok(h) => {
                out.extend(h);
                false
            }
            Err(e) => {
                err = Some(e);
                true
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// `E(S)`.
    pub fn e(&self, sample: &Sample) -> Result<PointSet> {
        self.class.dominating_member(self.e_prime(sample)?)
    }

    fn e_prime_contains(&self, sample: &Sample, x: &Point) -> Result<bool> {
        if sample.contains(x) {
            return Ok(true);
        }
        let mut res = Ok(false);
        any_index_subset(sample.len(), self.d0, |idx| {
            match self.learner.hypothesis_contains(&sample.select(idx), x) {
                Ok(false) => false,
                other => {
                    res = other;
                    true
                }
            }
        });
        res
    }

    fn pool_cmp(&self, a: &Point, b: &Point) -> Ordering {
        self.class.pool_order_key(a).cmp(&self.class.pool_order_key(b))
    }

    /// Iterates `E` from `set(compressed)` until every point of `targets` is
    /// covered, a fixed point is reached, or `m` rounds have run. The iterates
    /// increase, so the final set decides coverage exactly.
    fn iterate(&self, compressed: &Sample, targets: &[Point]) -> Result<PointSet> {
        let mut cur = compressed.to_set();
        for _ in 0..self.m {
            if !targets.is_empty() && targets.iter().all(|t| cur.contains(t)) {
                break;
            }
            let next = self.e(&Sample::canonical(&cur))?;
            if next == cur {
                break;
            }
            cur = next;
        }
        Ok(cur)
    }
}

impl<L: Learner> MonotoneScheme for ExtractedScheme<L> {
    fn size_bound(&self) -> usize {
        self.bound()
    }

    fn max_input(&self) -> Option<usize> {
        Some(self.m)
    }

    fn compress(&self, sample: &Sample) -> Result<(Sample, SideInfo)> {
        check_input_size(self.max_input(), sample)?;
        let mut cur = sample.0.clone();
        'shrink: loop {
            let mut candidates: Vec<&Point> = cur.iter().collect();
            candidates.sort_by(|a, b| self.pool_cmp(a, b));
            candidates.dedup();
            for x in candidates {
                let pos = cur.iter().position(|p| p == x).expect("candidate comes from cur");
                let mut without = cur.clone();
                without.remove(pos);
                let without = Sample(without);
                if self.e_prime_contains(&without, x)? {
                    cur = without.0;
                    continue 'shrink;
                }
            }
            break;
        }
        if cur.len() > self.bound() {
            return Err(Error::SizeBoundExceeded { size: cur.len(), bound: self.bound() });
        }
        Ok((Sample(cur), SideInfo::NONE))
    }

    fn reconstruct(&self, compressed: &Sample, side: SideInfo) -> Result<PointSet> {
        side.check_none()?;
        self.iterate(compressed, &[])
    }

    fn count_covered(&self, compressed: &Sample, side: SideInfo, points: &[Point]) -> Result<usize> {
        side.check_none()?;
        let reached = self.iterate(compressed, points)?;
        Ok(points.iter().filter(|p| reached.contains(p)).count())
    }
}
