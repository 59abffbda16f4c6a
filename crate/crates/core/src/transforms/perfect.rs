use std::collections::BTreeMap;

use itertools::Itertools;

use crate::combin::{binomial, check_cap};
use crate::schemes::{check_input_size, MonotoneScheme, DEFAULT_ENUMERATION_CAP};
use crate::search::{PqrCertificate, PqrInstance};
use crate::{Error, Point, PointSet, Result, Sample, SideInfo};

/// A tabulated `(p, q, r)` pair on a finite pool: `σ` on every `p`-subset,
/// `η` on every `q`-subset (missing entries read as `∅`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PqrCompression {
    pool: PointSet,
    p: usize,
    q: usize,
    r: usize,
    sigma: BTreeMap<PointSet, PointSet>,
    eta: BTreeMap<PointSet, PointSet>,
}

impl PqrCompression {
    /// Tabulates `sigma` and `eta` over the pool and checks the contract on
    /// every `p`-subset.
    pub fn tabulate(
        pool: PointSet,
        (p, q, r): (usize, usize, usize),
        sigma: impl Fn(&PointSet) -> PointSet,
        eta: impl Fn(&PointSet) -> PointSet,
    ) -> Result<Self> {
        let n = pool.len() as u64;
        check_cap(binomial(n, p as u64).saturating_add(binomial(n, q as u64)), DEFAULT_ENUMERATION_CAP)?;
        let subsets = |k| pool.iter().cloned().combinations(k).map(PointSet::from_iter).collect_vec();
        let sigma = subsets(p).into_iter().map(|s| {
                let t = sigma(&s);
                (s, t)
            })
            .collect();
        let eta = subsets(q).into_iter().map(|t| {
                let e = eta(&t);
                (t, e)
            })
            .collect();
        let c = PqrCompression { pool, p, q, r, sigma, eta };
        c.check()?;
        Ok(c)
    }

    /// Reads a search certificate over the pool `{0, ..., n-1}`.
    pub fn from_certificate(inst: &PqrInstance, cert: &PqrCertificate) -> Result<Self> {
        let set = |v: &[usize]| v.iter().map(|&x| Point::nat(x as u64)).collect::<PointSet>();
        let c = PqrCompression {
            pool: (0..inst.n as u64).map(Point::nat).collect(),
            p: inst.p,
            q: inst.q,
            r: inst.r,
            sigma: cert.sigma.iter().map(|(s, t)| (set(s), set(t))).collect(),
            eta: cert.eta.iter().map(|(t, e)| (set(t), set(e))).collect(),
        };
        c.check()?;
        Ok(c)
    }

    pub fn params(&self) -> (usize, usize, usize) {
        (self.p, self.q, self.r)
    }

    pub fn pool(&self) -> &PointSet {
        &self.pool
    }

    pub fn sigma(&self, s: &PointSet) -> Option<&PointSet> {
        self.sigma.get(s)
    }

    pub fn eta(&self, t: &PointSet) -> PointSet {
        self.eta.get(t).cloned().unwrap_or_default()
    }

    /// `σ(S) ⊆ S`, `|σ(S)| = q` and `|η(σ(S)) ∩ S| >= r` for every
    /// `p`-subset `S` of the pool.
    pub fn check(&self) -> Result<()> {
        if !(self.p >= self.r && self.r >= self.q && self.q > 0) {
            return Err(Error::InvalidParameter(format!(
                "need p >= r >= q > 0, got p={} q={} r={}",
                self.p, self.q, self.r
            )));
        }
        for s in self.pool.iter().cloned().combinations(self.p) {
            let s: PointSet = s.into_iter().collect();
            let Some(t) = self.sigma.get(&s) else {
                return Err(Error::ContractViolated(format!("σ undefined on {s:?}")));
            };
            if t.len() != self.q || !t.is_subset(&s) {
                return Err(Error::ContractViolated(format!("σ({s:?}) = {t:?} is not a {}-subset", self.q)));
            }
            if self.eta(t).intersection(&s).count() < self.r {
                return Err(Error::ContractViolated(format!("η({t:?}) meets {s:?} in fewer than {} points", self.r)));
            }
        }
        Ok(())
    }
}

/// The `p -> (p-1) -> p` scheme built from a `(p, q, q+1)` pair: drop
/// `α_S`, the least element of `(η(σ(S)) \ σ(S)) ∩ S`, and reconstruct `U`
/// as `U ∪ ⋃{η(T) : T ⊆ U, |T| = q}`.
#[derive(Clone, Debug)]
pub struct PerfectedScheme {
    base: PqrCompression,
    alpha: BTreeMap<PointSet, Point>,
}

pub fn imperfect_to_perfect(base: PqrCompression) -> Result<PerfectedScheme> {
    if base.r != base.q + 1 {
        return Err(Error::InvalidParameter(format!("need r = q + 1, got q={} r={}", base.q, base.r)));
    }
    let alpha = base
        .sigma
        .iter()
        .map(|(s, t)| {
            let eta = base.eta(t);
            let a = s
                .iter()
                .find(|x| eta.contains(x) && !t.contains(x))
                .ok_or_else(|| Error::ContractViolated(format!("no α for {s:?}")))?;
            Ok((s.clone(), a.clone()))
        })
        .collect::<Result<_>>()?;
    Ok(PerfectedScheme { base, alpha })
}

impl PerfectedScheme {
    pub fn alpha(&self, s: &PointSet) -> Option<&Point> {
        self.alpha.get(s)
    }

    pub fn base(&self) -> &PqrCompression {
        &self.base
    }
}

impl MonotoneScheme for PerfectedScheme {
    fn size_bound(&self) -> usize {
        self.base.p - 1
    }

    fn max_input(&self) -> Option<usize> {
        Some(self.base.p)
    }

    fn compress(&self, sample: &Sample) -> Result<(Sample, SideInfo)> {
        check_input_size(self.max_input(), sample)?;
        let set = sample.to_set();
        let Some(a) = self.alpha.get(&set).filter(|_| sample.len() == self.base.p) else {
            return Err(Error::UnsupportedSample(format!("{sample:?} is not a {}-subset of the pool", self.base.p)));
        };
        Ok((sample.iter().filter(|x| *x != a).cloned().collect(), SideInfo::NONE))
    }

    fn reconstruct(&self, compressed: &Sample, side: SideInfo) -> Result<PointSet> {
        side.check_none()?;
        let u = compressed.to_set();
        let mut out = u.clone();
        for t in u.iter().cloned().combinations(self.base.q) {
            out.extend(self.base.eta(&t.into_iter().collect()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{exhaustive_validate, Verdict};
    use crate::search::search_pqr;

    fn nats(r: std::ops::RangeInclusive<u64>) -> PointSet {
        r.map(Point::nat).collect()
    }

    fn max_scheme(r: usize) -> Result<PqrCompression> {
        PqrCompression::tabulate(
            nats(0..=9),
            (3, 1, r),
            |s| [s.last().unwrap().clone()].into(),
            |t| nats(0..=t.first().unwrap().0[0]),
        )
    }

    #[test]
    fn max_element_trace() {
        let s = imperfect_to_perfect(max_scheme(2).unwrap()).unwrap();
        let sample = Sample::nats(&[2, 5, 8]);
        assert_eq!(s.alpha(&sample.to_set()), Some(&Point::nat(2)));
        let (c, _) = s.compress(&sample).unwrap();
        assert_eq!(c, Sample::nats(&[5, 8]));
        assert_eq!(s.reconstruct(&c, SideInfo::NONE).unwrap(), nats(0..=8));
        assert_eq!(exhaustive_validate(&s, &nats(0..=9), 3, 1000).unwrap(), Verdict::Valid);
    }

    #[test]
    fn compressions_have_exactly_p_minus_one() {
        let s = imperfect_to_perfect(max_scheme(2).unwrap()).unwrap();
        for sub in nats(0..=9).into_iter().combinations(3) {
            assert_eq!(s.compress(&Sample(sub)).unwrap().0.len(), 2);
        }
    }

    #[test]
    fn wrong_r_rejected() {
        assert!(matches!(
            imperfect_to_perfect(max_scheme(3).unwrap()),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn broken_pair_rejected() {
        let r = PqrCompression::tabulate(nats(0..=5), (2, 1, 2), |s| [s.first().unwrap().clone()].into(), |t| t.clone());
        assert!(matches!(r, Err(Error::ContractViolated(_))));
    }

    #[test]
    fn from_search_certificate() {
        for (n, b) in [(4, 3), (5, 4), (6, 5)] {
            let inst = PqrInstance::new(n, 3, 1, 2, b).unwrap();
            let out = search_pqr(&inst, 1000).unwrap();
            let cert = out.certificate().expect("feasible");
            let s = imperfect_to_perfect(PqrCompression::from_certificate(&inst, cert).unwrap()).unwrap();
            let pool = (0..n as u64).map(Point::nat).collect();
            assert_eq!(exhaustive_validate(&s, &pool, 3, 1000).unwrap(), Verdict::Valid);
        }
    }

    #[test]
    fn other_samples_unsupported() {
        let s = imperfect_to_perfect(max_scheme(2).unwrap()).unwrap();
        assert!(matches!(s.compress(&Sample::nats(&[1, 2])), Err(Error::UnsupportedSample(_))));
        assert!(matches!(s.compress(&Sample::nats(&[1, 2, 2])), Err(Error::UnsupportedSample(_))));
        assert!(s.compress(&Sample::nats(&[1, 2, 3, 4])).is_err());
    }
}
