use std::collections::HashSet;
use std::sync::Arc;

use super::{ConceptClass, Distribution};
use crate::combin::index_subsets;
use crate::schemes::MonotoneScheme;
use crate::{Error, Point, PointSet, Result, Sample, SideInfo};

/// A proper learner: maps samples to members of its class.
pub trait Learner: Send + Sync {
    /// The sample size the learner is designed for.
    fn sample_size(&self) -> usize;

    fn learn(&self, sample: &Sample) -> Result<PointSet>;

    fn hypothesis_contains(&self, sample: &Sample, point: &Point) -> Result<bool> {
        Ok(self.learn(sample)?.contains(point))
    }

    /// `E_P` of the hypothesis learned from `sample`.
    fn hypothesis_mass(&self, sample: &Sample, dist: &Distribution) -> Result<f64> {
        Ok(dist.mass(&self.learn(sample)?))
    }

    /// Mass of the support outside the hypothesis. Summing only the missed
    /// weights keeps a full cover at exactly 0.
    fn uncovered_mass(&self, sample: &Sample, dist: &Distribution) -> Result<f64> {
        let h = self.learn(sample)?;
        Ok(dist.mass_where(|z| !h.contains(z)))
    }

    /// Known bound on the expected regret at sample size `m`.
    fn regret_bound(&self, _m: usize) -> Option<f64> {
        None
    }
}

impl<L: Learner + ?Sized> Learner for Arc<L> {
    fn sample_size(&self) -> usize {
        (**self).sample_size()
    }
    fn learn(&self, sample: &Sample) -> Result<PointSet> {
        (**self).learn(sample)
    }
    fn hypothesis_contains(&self, sample: &Sample, point: &Point) -> Result<bool> {
        (**self).hypothesis_contains(sample, point)
    }
    fn hypothesis_mass(&self, sample: &Sample, dist: &Distribution) -> Result<f64> {
        (**self).hypothesis_mass(sample, dist)
    }
    fn uncovered_mass(&self, sample: &Sample, dist: &Distribution) -> Result<f64> {
        (**self).uncovered_mass(sample, dist)
    }
    fn regret_bound(&self, m: usize) -> Option<f64> {
        (**self).regret_bound(m)
    }
}

/// Strictly increasing positions into a sample.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubsampleIndex(Vec<usize>);

impl SubsampleIndex {
    pub fn new(indices: Vec<usize>, sample_len: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!("{indices:?} is not strictly increasing")));
        }
        if indices.last().is_some_and(|&i| i >= sample_len) {
            return Err(Error::InvalidParameter(format!("{indices:?} out of range for {sample_len}")));
        }
        Ok(SubsampleIndex(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// `S_A`.
    pub fn select(&self, sample: &Sample) -> Sample {
        sample.select(&self.0)
    }

    /// `S_Ā`, the points at every other position.
    pub fn complement(&self, sample: &Sample) -> Vec<Point> {
        let mut skip = self.0.iter().peekable();
        sample
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                if skip.peek() == Some(&i) {
                    skip.next();
                    false
                } else {
                    true
                }
            })
            .map(|(_, p)| p.clone())
            .collect()
    }
}

/// Selects, among the reconstructions `η[S_A]` over all `|A| <= k`, the one
/// with the largest empirical mean on the held-out points `S_Ā`.
///
/// An empty hold-out counts as fully covered. Ties go to the
/// lexicographically least `A`.
pub fn lw_learn(scheme: &dyn MonotoneScheme, class: &ConceptClass, sample: &Sample) -> Result<PointSet> {
    let k = scheme.size_bound();
    let mut best: Option<(SubsampleIndex, usize, usize)> = None;
    for idx in index_subsets(sample.len(), k) {
        let a = SubsampleIndex(idx);
        let rest = a.complement(sample);
        let (hits, total) = if rest.is_empty() {
            (1, 1)
        } else {
            (scheme.count_covered(&a.select(sample), SideInfo::NONE, &rest)?, rest.len())
        };
        let better = match &best {
            None => true,
            Some((_, bh, bt)) => hits * bt > bh * total,
        };
        if better {
            best = Some((a, hits, total));
        }
    }
    let (a, _, _) = best.expect("the empty index set is always a candidate");
    let h = scheme.reconstruct(&a.select(sample), SideInfo::NONE)?;
    if !class.contains_concept(&h) {
        return Err(Error::NotInClass(format!("reconstruction of {:?}", a.select(sample))));
    }
    Ok(h)
}

/// Distinct subsequences of length at most `d`.
fn small_subsamples(sample: &Sample, d: usize) -> Vec<Sample> {
    let mut seen = HashSet::new();
    index_subsets(sample.len(), d)
        .into_iter()
        .map(|idx| sample.select(&idx))
        .filter(|s| seen.insert(s.clone()))
        .collect()
}

fn reconstruction_union(scheme: &dyn MonotoneScheme, sample: &Sample) -> Result<PointSet> {
    let mut union = PointSet::new();
    for sub in small_subsamples(sample, scheme.size_bound()) {
        union.extend(scheme.reconstruct(&sub, SideInfo::NONE)?);
    }
    Ok(union)
}

/// Returns a member containing `⋃ {η[S'] : S' ⊆ S, |S'| <= d}`: the union
/// itself for `fin_subsets`, the smallest such member otherwise.
pub fn loo_learn(scheme: &dyn MonotoneScheme, class: &ConceptClass, sample: &Sample) -> Result<PointSet> {
    class.dominating_member(reconstruction_union(scheme, sample)?)
}

/// [`lw_learn`] as a [`Learner`].
#[derive(Clone)]
pub struct LwLearner {
    scheme: Arc<dyn MonotoneScheme>,
    class: ConceptClass,
    sample_size: usize,
}

impl LwLearner {
    pub fn new(scheme: Arc<dyn MonotoneScheme>, class: ConceptClass, sample_size: usize) -> Self {
        LwLearner { scheme, class, sample_size }
    }
}

impl Learner for LwLearner {
    fn sample_size(&self) -> usize {
        self.sample_size
    }

    fn learn(&self, sample: &Sample) -> Result<PointSet> {
        lw_learn(self.scheme.as_ref(), &self.class, sample)
    }
}

/// [`loo_learn`] as a [`Learner`], with expected regret at most `d/(m+1)`.
#[derive(Clone)]
pub struct LooLearner {
    scheme: Arc<dyn MonotoneScheme>,
    class: ConceptClass,
    sample_size: usize,
}

impl LooLearner {
    pub fn new(scheme: Arc<dyn MonotoneScheme>, class: ConceptClass, sample_size: usize) -> Self {
        LooLearner { scheme, class, sample_size }
    }

    fn subsamples(&self, sample: &Sample) -> Vec<Sample> {
        small_subsamples(sample, self.scheme.size_bound())
    }

    fn union_contains(&self, subs: &[Sample], z: &Point) -> Result<bool> {
        if let ConceptClass::FinSubsets { scaffold } = self.class {
            scaffold.check(z)?;
        }
        for sub in subs {
            if self.scheme.covers(sub, SideInfo::NONE, z)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl Learner for LooLearner {
    fn sample_size(&self) -> usize {
        self.sample_size
    }

    fn learn(&self, sample: &Sample) -> Result<PointSet> {
        loo_learn(self.scheme.as_ref(), &self.class, sample)
    }

    fn hypothesis_contains(&self, sample: &Sample, point: &Point) -> Result<bool> {
        match self.class {
            ConceptClass::FinSubsets { .. } => self.union_contains(&self.subsamples(sample), point),
            ConceptClass::Extensional { .. } => Ok(self.learn(sample)?.contains(point)),
        }
    }

    // For fin_subsets the hypothesis is the union itself, so its mass can be
    // summed by membership without materializing the reconstructions.
    fn hypothesis_mass(&self, sample: &Sample, dist: &Distribution) -> Result<f64> {
        match self.class {
            ConceptClass::FinSubsets { .. } => {
                let subs = self.subsamples(sample);
                dist.try_mass_where(|z| self.union_contains(&subs, z))
            }
            ConceptClass::Extensional { .. } => Ok(dist.mass(&self.learn(sample)?)),
        }
    }

    fn uncovered_mass(&self, sample: &Sample, dist: &Distribution) -> Result<f64> {
        match self.class {
            ConceptClass::FinSubsets { .. } => {
                let subs = self.subsamples(sample);
                dist.try_mass_where(|z| Ok(!self.union_contains(&subs, z)?))
            }
            ConceptClass::Extensional { .. } => {
                let h = self.learn(sample)?;
                Ok(dist.mass_where(|z| !h.contains(z)))
            }
        }
    }

    fn regret_bound(&self, m: usize) -> Option<f64> {
        Some(self.scheme.size_bound() as f64 / (m as f64 + 1.0))
    }
}

/// `G(S) = {0, ..., max S}` on the naturals (empty on the empty sample).
///
/// With sample size `d0` it is a `(1/3, 1/3)` learner for finite subsets of
/// the naturals whenever `(2/3)^d0 < 1/3`.
#[derive(Clone, Copy, Debug)]
pub struct MaxLearner {
    d0: usize,
}

impl MaxLearner {
    pub fn new(d0: usize) -> Self {
        MaxLearner { d0 }
    }

    fn max(sample: &Sample) -> Result<Option<u64>> {
        let mut best = None;
        for p in sample.iter() {
            if p.arity() != 1 {
                return Err(Error::ArityMismatch { expected: 1, found: p.arity() });
            }
            best = best.max(Some(p.0[0]));
        }
        Ok(best)
    }
}

impl Learner for MaxLearner {
    fn sample_size(&self) -> usize {
        self.d0
    }

    fn learn(&self, sample: &Sample) -> Result<PointSet> {
        Ok(match Self::max(sample)? {
            Some(x) => (0..=x).map(Point::nat).collect(),
            None => PointSet::new(),
        })
    }

    fn hypothesis_contains(&self, sample: &Sample, point: &Point) -> Result<bool> {
        Ok(point.arity() == 1 && Self::max(sample)?.is_some_and(|x| point.0[0] <= x))
    }
}

/// Ignores its input and always outputs the same set.
#[derive(Clone, Debug)]
pub struct ConstantLearner {
    set: PointSet,
    d0: usize,
}

impl ConstantLearner {
    pub fn new(set: PointSet, d0: usize) -> Self {
        ConstantLearner { set, d0 }
    }
}

impl Learner for ConstantLearner {
    fn sample_size(&self) -> usize {
        self.d0
    }

    fn learn(&self, _: &Sample) -> Result<PointSet> {
        Ok(self.set.clone())
    }

    fn hypothesis_contains(&self, _: &Sample, point: &Point) -> Result<bool> {
        Ok(self.set.contains(point))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{validate, LadderScheme};
    use crate::Scaffold;
    use proptest::prelude::*;

    fn upto(n: u64) -> PointSet {
        (0..=n).map(Point::nat).collect()
    }

    #[test]
    fn subsample_index() {
        let s = Sample::nats(&[5, 2, 9, 2]);
        let a = SubsampleIndex::new(vec![1, 3], 4).unwrap();
        assert_eq!(a.select(&s), Sample::nats(&[2, 2]));
        assert_eq!(a.complement(&s), Sample::nats(&[5, 9]).0);
        assert!(SubsampleIndex::new(vec![2, 1], 4).is_err());
        assert!(SubsampleIndex::new(vec![4], 4).is_err());
    }

    #[test]
    fn lw_examples() {
        let omega = LadderScheme::omega();
        let fin = ConceptClass::fin_subsets(0);
        assert_eq!(lw_learn(&omega, &fin, &Sample::nats(&[5, 2, 9, 2])).unwrap(), upto(9));
        assert_eq!(lw_learn(&omega, &fin, &Sample::nats(&[6])).unwrap(), upto(6));
    }

    #[test]
    fn lw_ties_go_to_empty_index() {
        // Reconstructions only ever cover the compressed points themselves,
        // so every candidate scores 0 on a sample of distinct points.
        struct Tight;
        impl MonotoneScheme for Tight {
            fn size_bound(&self) -> usize {
                1
            }
            fn compress(&self, s: &Sample) -> Result<(Sample, SideInfo)> {
                Ok((s.select(&[0]), SideInfo::NONE))
            }
            fn reconstruct(&self, c: &Sample, _: SideInfo) -> Result<PointSet> {
                Ok(c.to_set())
            }
        }
        let h = lw_learn(&Tight, &ConceptClass::fin_subsets(0), &Sample::nats(&[1, 2, 3])).unwrap();
        assert!(h.is_empty());
    }

    #[test]
    fn lw_rejects_foreign_reconstruction() {
        let class = ConceptClass::extensional((0..10).map(Point::nat).collect(), vec![upto(3)]).unwrap();
        assert!(matches!(
            lw_learn(&LadderScheme::omega(), &class, &Sample::nats(&[5, 2])),
            Err(Error::NotInClass(_))
        ));
    }

    #[test]
    fn loo_examples() {
        let omega = LadderScheme::omega();
        let fin = ConceptClass::fin_subsets(0);
        assert_eq!(loo_learn(&omega, &fin, &Sample::nats(&[5, 2, 9])).unwrap(), upto(9));
        assert!(loo_learn(&omega, &fin, &Sample::empty()).unwrap().is_empty());
        let l = LooLearner::new(Arc::new(omega), fin, 9);
        assert_eq!(l.regret_bound(9), Some(0.1));
    }

    #[test]
    fn loo_extensional_needs_a_dominating_member() {
        let pool: Vec<Point> = (0..4).map(Point::nat).collect();
        let class = ConceptClass::extensional(pool, vec![upto(1), upto(3)]).unwrap();
        let omega = LadderScheme::omega();
        assert_eq!(loo_learn(&omega, &class, &Sample::nats(&[1, 0])).unwrap(), upto(1));
        assert_eq!(loo_learn(&omega, &class, &Sample::nats(&[2])).unwrap(), upto(3));
        assert_eq!(loo_learn(&omega, &class, &Sample::nats(&[7])), Err(Error::NoDominatingConcept));
    }

    #[test]
    fn loo_mass_matches_materialized() {
        let d = Distribution::uniform_nats(30).unwrap();
        let l = LooLearner::new(Arc::new(LadderScheme::omega()), ConceptClass::fin_subsets(0), 5);
        let s = Sample::nats(&[3, 17, 4, 4, 11]);
        assert_eq!(l.hypothesis_mass(&s, &d).unwrap(), d.mass(&l.learn(&s).unwrap()));
        assert!(l.hypothesis_contains(&s, &Point::nat(17)).unwrap());
        assert!(!l.hypothesis_contains(&s, &Point::nat(18)).unwrap());
    }

    #[test]
    fn max_learner() {
        let g = MaxLearner::new(3);
        assert_eq!(g.learn(&Sample::nats(&[7, 3])).unwrap(), upto(7));
        assert!(g.learn(&Sample::empty()).unwrap().is_empty());
        assert!(g.hypothesis_contains(&Sample::nats(&[7, 3]), &Point::nat(7)).unwrap());
        assert!(!g.hypothesis_contains(&Sample::empty(), &Point::nat(0)).unwrap());
    }

    proptest! {
        #[test]
        fn ladder_loo_covers_sample(
            pts in prop::collection::vec((0u64..50, 0u64..50), 0..15),
        ) {
            let s: Sample = pts.into_iter().map(|(a, b)| Point::new(vec![a, b])).collect();
            let ladder = LadderScheme::new(Scaffold::canonical(1));
            prop_assert!(validate(&ladder, &s).is_valid());
            let h = loo_learn(&ladder, &ConceptClass::fin_subsets(1), &s).unwrap();
            prop_assert!(s.iter().all(|p| h.contains(p)));
        }
    }
}
