use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::combin::bit_length;
use crate::schemes::{self, MonotoneScheme};
use crate::{Error, Point, PointSet, Result, Sample, SideInfo};

/// A monotone map on the naturals that tends to infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthFunction {
    Identity,
    /// `base^n`.
    Power {
        #[serde(default = "two")]
        base: u64,
    },
    /// `t(0) = 1`, `t(n+1) = base^t(n)`.
    Tower {
        #[serde(default = "two")]
        base: u64,
    },
}

fn two() -> u64 {
    2
}

impl GrowthFunction {
    pub fn check(&self) -> Result<()> {
        match *self {
            GrowthFunction::Power { base } | GrowthFunction::Tower { base } if base < 2 => {
                Err(Error::InvalidParameter(format!("growth base must be at least 2, got {base}")))
            }
            _ => Ok(()),
        }
    }

    /// `f(n)`, saturating at `u64::MAX`.
    pub fn eval(&self, n: u64) -> u64 {
        match *self {
            GrowthFunction::Identity => n,
            GrowthFunction::Power { base } => pow_sat(base, n),
            GrowthFunction::Tower { base } => {
                let mut t = 1u64;
                for _ in 0..n {
                    if t == u64::MAX {
                        break;
                    }
                    t = pow_sat(base, t);
                }
                t
            }
        }
    }

    /// The least `n` with `f(n) >= m`.
    pub fn least_preimage(&self, m: u64) -> Result<u64> {
        self.check()?;
        if let GrowthFunction::Identity = self {
            return Ok(m);
        }
        // f grows at least exponentially here, so this stops within 64 steps
        Ok((0..).find(|&n| self.eval(n) >= m).expect("unbounded growth"))
    }
}

fn pow_sat(base: u64, exp: u64) -> u64 {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e)).unwrap_or(u64::MAX)
}

/// One scheme per sample size, all of the same size `d`.
#[derive(Clone, Default)]
pub struct SchemeFamily {
    d: usize,
    per_m: BTreeMap<u64, Arc<dyn MonotoneScheme>>,
}

impl SchemeFamily {
    pub fn new(d: usize) -> Self {
        SchemeFamily { d, per_m: BTreeMap::new() }
    }

    /// Builds members `make(m)` for every `m` in `range`.
    pub fn from_fn(
        d: usize,
        range: impl IntoIterator<Item = u64>,
        mut make: impl FnMut(u64) -> Result<Arc<dyn MonotoneScheme>>,
    ) -> Result<Self> {
        let mut fam = SchemeFamily::new(d);
        for m in range {
            fam.insert(m, make(m)?)?;
        }
        Ok(fam)
    }

    pub fn insert(&mut self, m: u64, scheme: Arc<dyn MonotoneScheme>) -> Result<()> {
        if scheme.size_bound() > self.d {
            return Err(Error::InvalidParameter(format!(
                "member for m = {m} has size {}, family size is {}",
                scheme.size_bound(),
                self.d
            )));
        }
        if scheme.max_input().is_some_and(|max| (max as u64) < m) {
            return Err(Error::InvalidParameter(format!("member for m = {m} does not accept size-{m} samples")));
        }
        self.per_m.insert(m, scheme);
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.d
    }

    pub fn get(&self, m: u64) -> Result<&Arc<dyn MonotoneScheme>> {
        self.per_m.get(&m).ok_or(Error::FamilyGap(m))
    }

    pub fn sizes(&self) -> impl Iterator<Item = u64> + '_ {
        self.per_m.keys().copied()
    }
}

/// A single scheme with side information built from a family: a size-`m`
/// sample is handled by the member for `f(m')`, `m'` the least preimage of
/// `m`, and `m'` is sent along in `bit_length(m')` bits.
#[derive(Clone)]
pub struct UniformizedScheme {
    family: SchemeFamily,
    f: GrowthFunction,
}

pub fn uniformize(family: SchemeFamily, f: GrowthFunction) -> Result<UniformizedScheme> {
    f.check()?;
    Ok(UniformizedScheme { family, f })
}

impl UniformizedScheme {
    pub fn growth(&self) -> GrowthFunction {
        self.f
    }

    /// The side value `m'` used for a size-`m` sample.
    pub fn side_for(&self, m: usize) -> Result<SideInfo> {
        let m1 = self.f.least_preimage(m as u64)?;
        SideInfo::new(m1, bit_length(m1))
    }

    fn member(&self, side: SideInfo) -> Result<&Arc<dyn MonotoneScheme>> {
        side.check()?;
        self.family.get(self.f.eval(side.value))
    }
}

impl MonotoneScheme for UniformizedScheme {
    fn size_bound(&self) -> usize {
        self.family.size()
    }

    fn compress(&self, sample: &Sample) -> Result<(Sample, SideInfo)> {
        let side = self.side_for(sample.len())?;
        let (c, inner) = schemes::compress(self.member(side)?.as_ref(), sample)?;
        inner.check_none()?;
        Ok((c, side))
    }

    fn reconstruct(&self, compressed: &Sample, side: SideInfo) -> Result<PointSet> {
        self.member(side)?.reconstruct(compressed, SideInfo::NONE)
    }

    fn count_covered(&self, compressed: &Sample, side: SideInfo, points: &[Point]) -> Result<usize> {
        self.member(side)?.count_covered(compressed, SideInfo::NONE, points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{exhaustive_validate_upto, validate, LadderScheme, TableScheme};
    use itertools::Itertools;

    #[test]
    fn growth_values() {
        let pow = GrowthFunction::Power { base: 2 };
        let tower = GrowthFunction::Tower { base: 2 };
        assert_eq!((0..6).map(|n| pow.eval(n)).collect_vec(), [1, 2, 4, 8, 16, 32]);
        assert_eq!((0..5).map(|n| tower.eval(n)).collect_vec(), [1, 2, 4, 16, 65536]);
        assert_eq!(tower.eval(5), u64::MAX);
        assert_eq!(pow.eval(64), u64::MAX);
        assert_eq!(pow.least_preimage(7).unwrap(), 3);
        assert_eq!(pow.least_preimage(8).unwrap(), 3);
        assert_eq!(pow.least_preimage(1).unwrap(), 0);
        assert_eq!(GrowthFunction::Identity.least_preimage(7).unwrap(), 7);
        assert_eq!(tower.least_preimage(5).unwrap(), 3);
        assert!(GrowthFunction::Power { base: 1 }.least_preimage(3).is_err());
    }

    #[test]
    fn growth_json() {
        let f: GrowthFunction = serde_json::from_str(r#"{"kind":"power"}"#).unwrap();
        assert_eq!(f, GrowthFunction::Power { base: 2 });
        let f: GrowthFunction = serde_json::from_str(r#"{"kind":"identity"}"#).unwrap();
        assert_eq!(f, GrowthFunction::Identity);
        assert_eq!(
            serde_json::to_string(&GrowthFunction::Tower { base: 3 }).unwrap(),
            r#"{"kind":"tower","base":3}"#
        );
    }

    fn omega_family(range: impl IntoIterator<Item = u64>) -> SchemeFamily {
        SchemeFamily::from_fn(1, range, |_| Ok(Arc::new(LadderScheme::omega()))).unwrap()
    }

    #[test]
    fn side_values() {
        let s = uniformize(omega_family(0..=20), GrowthFunction::Identity).unwrap();
        let (_, side) = s.compress(&Sample::nats(&[3, 1, 4, 1, 5, 9, 2])).unwrap();
        assert_eq!(side, SideInfo::new(7, 3).unwrap());

        let s = uniformize(omega_family([1, 2, 4, 8]), GrowthFunction::Power { base: 2 }).unwrap();
        let (c, side) = s.compress(&Sample::nats(&[3, 1, 4, 1, 5, 9, 2])).unwrap();
        assert_eq!(side, SideInfo::new(3, 2).unwrap());
        assert_eq!(c, Sample::nats(&[9]));
        assert!(s.covers(&c, side, &Point::nat(2)).unwrap());
    }

    #[test]
    fn missing_member() {
        let s = uniformize(omega_family([1, 2, 4]), GrowthFunction::Power { base: 2 }).unwrap();
        assert_eq!(s.compress(&Sample::nats(&[0; 5])), Err(Error::FamilyGap(8)));
        assert_eq!(s.reconstruct(&Sample::empty(), SideInfo::new(3, 2).unwrap()), Err(Error::FamilyGap(8)));
    }

    #[test]
    fn member_size_checked() {
        let mut fam = SchemeFamily::new(0);
        assert!(fam.insert(3, Arc::new(LadderScheme::omega())).is_err());
        let mut fam = SchemeFamily::new(1);
        let small = TableScheme::new(1).with_max_input(2);
        assert!(fam.insert(3, Arc::new(small)).is_err());
    }

    /// Member `m` only knows the samples of size at most `m` from the pool.
    fn tabulated_family(pool: &PointSet, sizes: &[u64]) -> SchemeFamily {
        SchemeFamily::from_fn(1, sizes.iter().copied(), |m| {
            let samples = (0..=m as usize)
                .flat_map(|k| pool.iter().cloned().combinations(k).map(Sample))
                .collect_vec();
            let t = TableScheme::tabulate(&LadderScheme::omega(), &samples)?.with_max_input(m as usize);
            Ok(Arc::new(t))
        })
        .unwrap()
    }

    #[test]
    fn exhaustive_on_ten_points() {
        let pool: PointSet = (0..10).map(Point::nat).collect();
        for (f, sizes) in [
            (GrowthFunction::Identity, vec![0, 1, 2, 3, 4]),
            (GrowthFunction::Power { base: 2 }, vec![1, 2, 4]),
            (GrowthFunction::Tower { base: 2 }, vec![1, 2, 4]),
        ] {
            let s = uniformize(tabulated_family(&pool, &sizes), f).unwrap();
            assert_eq!(exhaustive_validate_upto(&s, &pool, 4, 1 << 20).unwrap(), schemes::Verdict::Valid);
        }
    }

    #[test]
    fn power_dispatch_uses_larger_member() {
        let pool: PointSet = (0..10).map(Point::nat).collect();
        let s = uniformize(tabulated_family(&pool, &[1, 2, 4]), GrowthFunction::Power { base: 2 }).unwrap();
        // size 3 goes to the member for 4, which tabulated it
        assert!(validate(&s, &Sample::nats(&[2, 7, 5])).is_valid());
        assert!(!validate(&s, &Sample::nats(&[2, 7, 5, 1, 0])).is_valid());
    }
}
