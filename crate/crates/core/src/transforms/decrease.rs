use std::sync::Arc;

use itertools::Itertools;

use crate::combin::{binomial, check_cap};
use crate::schemes::{check_input_size, MonotoneScheme, DEFAULT_ENUMERATION_CAP};
use crate::{Error, Point, PointSet, Result, Sample, SideInfo};

/// The `k -> (k-1)` scheme on `X'` obtained from a `(k+1) -> k` scheme on
/// `X` by adjoining a fixed point `x*` outside every reconstruction of a
/// small sample from `X'`.
#[derive(Clone)]
pub struct DecreasedScheme {
    inner: Arc<dyn MonotoneScheme>,
    subpool: PointSet,
    fresh: Point,
    k: usize,
}

/// Picks `x*` as the least element of `X` outside
/// `Y = ⋃{η(S) : S ⊆ X', |S| <= k}` and returns the reduced scheme.
pub fn decrease_size(
    scheme: Arc<dyn MonotoneScheme>,
    pool: &PointSet,
    subpool: &PointSet,
    k: usize,
) -> Result<DecreasedScheme> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if !subpool.is_subset(pool) {
        return Err(Error::InvalidParameter("subpool is not contained in the pool".into()));
    }
    let n = subpool.len() as u64;
    let count = (0..=k as u64).map(|j| binomial(n, j)).fold(0u128, u128::saturating_add);
    check_cap(count, DEFAULT_ENUMERATION_CAP)?;

    let compressed: Vec<Sample> = (0..=k)
        .flat_map(|j| subpool.iter().cloned().combinations(j).map(Sample))
        .collect();
    let mut outside: Vec<Point> = pool.iter().cloned().collect();
    for c in &compressed {
        if outside.is_empty() {
            break;
        }
        let mut kept = Vec::with_capacity(outside.len());
        for x in outside {
            if !scheme.covers(c, SideInfo::NONE, &x)? {
                kept.push(x);
            }
        }
        outside = kept;
    }
    let fresh = outside.into_iter().next().ok_or(Error::NoFreshElement)?;
    Ok(DecreasedScheme { inner: scheme, subpool: subpool.clone(), fresh, k })
}

impl DecreasedScheme {
    /// The adjoined point `x*`.
    pub fn fresh(&self) -> &Point {
        &self.fresh
    }

    fn with_fresh(&self, s: &Sample) -> Sample {
        s.iter().cloned().chain([self.fresh.clone()]).collect()
    }
}

impl MonotoneScheme for DecreasedScheme {
    fn size_bound(&self) -> usize {
        self.k - 1
    }

    fn max_input(&self) -> Option<usize> {
        Some(self.k)
    }

    fn compress(&self, sample: &Sample) -> Result<(Sample, SideInfo)> {
        check_input_size(self.max_input(), sample)?;
        if let Some(p) = sample.iter().find(|p| !self.subpool.contains(p)) {
            return Err(Error::UnsupportedSample(format!("{p} is outside the subpool")));
        }
        let (c, side) = self.inner.compress(&self.with_fresh(sample))?;
        side.check_none()?;
        if !c.contains(&self.fresh) {
            return Err(Error::ContractViolated(format!(
                "compression of {sample:?} with {} dropped the fresh point",
                self.fresh
            )));
        }
        Ok((c.iter().filter(|p| **p != self.fresh).cloned().collect(), SideInfo::NONE))
    }

    fn reconstruct(&self, compressed: &Sample, side: SideInfo) -> Result<PointSet> {
        side.check_none()?;
        let rec = self.inner.reconstruct(&self.with_fresh(compressed), SideInfo::NONE)?;
        Ok(rec.intersection(&self.subpool).cloned().collect())
    }

    fn count_covered(&self, compressed: &Sample, side: SideInfo, points: &[Point]) -> Result<usize> {
        side.check_none()?;
        let inside: Vec<Point> = points.iter().filter(|p| self.subpool.contains(p)).cloned().collect();
        self.inner.count_covered(&self.with_fresh(compressed), SideInfo::NONE, &inside)
    }
}
