//! Monotone compression schemes.
//!
//! A scheme of size `d` pairs a compressor, which keeps a subsequence of at
//! most `d` elements of its input (plus optional side information), with a
//! reconstructor whose finite output must contain every element of the
//! original input.

mod consistent;
mod ladder;
mod table;

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::combin::{binomial, check_cap};
use crate::{Error, Point, PointSet, Result};

pub use consistent::FirstConsistentScheme;
pub use ladder::LadderScheme;
pub use table::TableScheme;

/// Default cap on the number of samples enumerated by exhaustive checks.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

/// A finite sequence of points. Order is significant and repeats are legal.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sample(pub Vec<Point>);

impl Sample {
    pub fn new(points: Vec<Point>) -> Self {
        Sample(points)
    }

    pub fn empty() -> Self {
        Sample(Vec::new())
    }

    /// A depth-0 sample from naturals.
    pub fn nats(ns: &[u64]) -> Self {
        Sample(ns.iter().copied().map(Point::nat).collect())
    }

    /// The sorted, de-duplicated form used for set-valued inputs.
    pub fn canonical(set: &PointSet) -> Self {
        Sample(set.iter().cloned().collect())
    }

    pub fn to_set(&self) -> PointSet {
        self.0.iter().cloned().collect()
    }

    /// The subsample at the given positions.
    pub fn select(&self, idx: &[usize]) -> Sample {
        Sample(idx.iter().map(|&i| self.0[i].clone()).collect())
    }

    /// Whether `sub` embeds into `self` as a subsequence (respecting
    /// multiplicity and order).
    pub fn has_subsequence(&self, sub: &Sample) -> bool {
        let mut it = self.0.iter();
        sub.0.iter().all(|s| it.any(|x| x == s))
    }

    /// The single arity shared by all points, if any.
    pub fn arity(&self) -> Result<Option<usize>> {
        let mut arity = None;
        for p in &self.0 {
            match arity {
                None => arity = Some(p.arity()),
                Some(a) if a != p.arity() => {
                    return Err(Error::ArityMismatch { expected: a, found: p.arity() })
                }
                _ => {}
            }
        }
        Ok(arity)
    }
}

impl Deref for Sample {
    type Target = [Point];

    fn deref(&self) -> &[Point] {
        &self.0
    }
}

impl fmt::Debug for Sample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl FromIterator<Point> for Sample {
    fn from_iter<I: IntoIterator<Item = Point>>(iter: I) -> Self {
        Sample(iter.into_iter().collect())
    }
}

/// Extra bits accompanying a compressed sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SideInfo {
    pub value: u64,
    pub bits: u32,
}

impl SideInfo {
    pub const NONE: SideInfo = SideInfo { value: 0, bits: 0 };

    pub fn new(value: u64, bits: u32) -> Result<Self> {
        let s = SideInfo { value, bits };
        s.check()?;
        Ok(s)
    }

    pub fn is_valid(&self) -> bool {
        self.bits >= 64 || self.value < (1u64 << self.bits)
    }

    pub fn check(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidSideInfo { value: self.value, bits: self.bits })
        }
    }

    /// For schemes that carry no side information.
    pub fn check_none(&self) -> Result<()> {
        self.check()?;
        if self.value != 0 {
            return Err(Error::InvalidSideInfo { value: self.value, bits: 0 });
        }
        Ok(())
    }
}

/// A compressor/reconstructor pair of declared size.
///
/// `compress` must return a subsequence of its input of length at most
/// [`size_bound`](Self::size_bound); `reconstruct` must return a finite set
/// containing every element of any sample that compresses to its argument.
pub trait MonotoneScheme: Send + Sync {
    fn size_bound(&self) -> usize;

    /// Largest admissible input size; `None` for uniform schemes.
    fn max_input(&self) -> Option<usize> {
        None
    }

    fn compress(&self, sample: &Sample) -> Result<(Sample, SideInfo)>;

    fn reconstruct(&self, compressed: &Sample, side: SideInfo) -> Result<PointSet>;

    /// How many of `points` lie in `reconstruct(compressed, side)`.
    ///
    /// Schemes whose reconstructions are large but have cheap membership
    /// override this to avoid materializing them.
    fn count_covered(&self, compressed: &Sample, side: SideInfo, points: &[Point]) -> Result<usize> {
        let rec = self.reconstruct(compressed, side)?;
        Ok(points.iter().filter(|p| rec.contains(p)).count())
    }

    fn is_uniform(&self) -> bool {
        self.max_input().is_none()
    }

    fn covers(&self, compressed: &Sample, side: SideInfo, point: &Point) -> Result<bool> {
        Ok(self.count_covered(compressed, side, std::slice::from_ref(point))? == 1)
    }
}

impl<S: MonotoneScheme + ?Sized> MonotoneScheme for Box<S> {
    fn size_bound(&self) -> usize {
        (**self).size_bound()
    }
    fn max_input(&self) -> Option<usize> {
        (**self).max_input()
    }
    fn compress(&self, sample: &Sample) -> Result<(Sample, SideInfo)> {
        (**self).compress(sample)
    }
    fn reconstruct(&self, compressed: &Sample, side: SideInfo) -> Result<PointSet> {
        (**self).reconstruct(compressed, side)
    }
    fn count_covered(&self, compressed: &Sample, side: SideInfo, points: &[Point]) -> Result<usize> {
        (**self).count_covered(compressed, side, points)
    }
}

impl<S: MonotoneScheme + ?Sized> MonotoneScheme for std::sync::Arc<S> {
    fn size_bound(&self) -> usize {
        (**self).size_bound()
    }
    fn max_input(&self) -> Option<usize> {
        (**self).max_input()
    }
    fn compress(&self, sample: &Sample) -> Result<(Sample, SideInfo)> {
        (**self).compress(sample)
    }
    fn reconstruct(&self, compressed: &Sample, side: SideInfo) -> Result<PointSet> {
        (**self).reconstruct(compressed, side)
    }
    fn count_covered(&self, compressed: &Sample, side: SideInfo, points: &[Point]) -> Result<usize> {
        (**self).count_covered(compressed, side, points)
    }
}

/// The size-0 scheme `η(∅) = set`: everything compresses to the empty sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantScheme {
    set: PointSet,
}

impl ConstantScheme {
    pub fn new(set: PointSet) -> Self {
        ConstantScheme { set }
    }
}

impl MonotoneScheme for ConstantScheme {
    fn size_bound(&self) -> usize {
        0
    }

    fn compress(&self, _: &Sample) -> Result<(Sample, SideInfo)> {
        Ok((Sample::empty(), SideInfo::NONE))
    }

    fn reconstruct(&self, compressed: &Sample, side: SideInfo) -> Result<PointSet> {
        side.check_none()?;
        if compressed.is_empty() {
            Ok(self.set.clone())
        } else {
            Ok(PointSet::new())
        }
    }
}

pub(crate) fn check_input_size(max_input: Option<usize>, sample: &Sample) -> Result<()> {
    match max_input {
        Some(max) if sample.len() > max => Err(Error::SampleTooLarge { size: sample.len(), max }),
        _ => Ok(()),
    }
}

pub fn compress(scheme: &dyn MonotoneScheme, sample: &Sample) -> Result<(Sample, SideInfo)> {
    check_input_size(scheme.max_input(), sample)?;
    scheme.compress(sample)
}

pub fn reconstruct(scheme: &dyn MonotoneScheme, compressed: &Sample, side: SideInfo) -> Result<PointSet> {
    side.check()?;
    scheme.reconstruct(compressed, side)
}

/// Outcome of checking a scheme on one sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Checks the monotone compression contract on a single sample.
pub fn validate(scheme: &dyn MonotoneScheme, sample: &Sample) -> Verdict {
    let (compressed, side) = match compress(scheme, sample) {
        Ok(c) => c,
        Err(e) => return Verdict::Invalid(format!("compress failed: {e}")),
    };
    if compressed.len() > scheme.size_bound() {
        return Verdict::Invalid(format!(
            "compression has {} elements, bound is {}",
            compressed.len(),
            scheme.size_bound()
        ));
    }
    if !sample.has_subsequence(&compressed) {
        return Verdict::Invalid(format!("{compressed:?} is not a subsequence of {sample:?}"));
    }
    if !side.is_valid() {
        return Verdict::Invalid(format!("side information {side:?} exceeds its budget"));
    }
    let distinct: Vec<Point> = sample.to_set().into_iter().collect();
    match scheme.count_covered(&compressed, side, &distinct) {
        Ok(n) if n == distinct.len() => Verdict::Valid,
        Ok(n) => Verdict::Invalid(format!(
            "reconstruction of {compressed:?} covers {n} of {} sample elements",
            distinct.len()
        )),
        Err(e) => Verdict::Invalid(format!("reconstruct failed: {e}")),
    }
}

/// Validates every size-`p` sample of distinct pool elements, each in
/// ascending order. Returns the first failure, if any.
pub fn exhaustive_validate(
    scheme: &dyn MonotoneScheme,
    pool: &PointSet,
    p: usize,
    cap: u128,
) -> Result<Verdict> {
    use itertools::Itertools;
    check_cap(binomial(pool.len() as u64, p as u64), cap)?;
    for subset in pool.iter().cloned().combinations(p) {
        let sample = Sample(subset);
        if let Verdict::Invalid(why) = validate(scheme, &sample) {
            return Ok(Verdict::Invalid(format!("{sample:?}: {why}")));
        }
    }
    Ok(Verdict::Valid)
}

/// [`exhaustive_validate`] for every size from 0 to `max_p`.
pub fn exhaustive_validate_upto(
    scheme: &dyn MonotoneScheme,
    pool: &PointSet,
    max_p: usize,
    cap: u128,
) -> Result<Verdict> {
    for p in 0..=max_p.min(pool.len()) {
        let v = exhaustive_validate(scheme, pool, p, cap)?;
        if !v.is_valid() {
            return Ok(v);
        }
    }
    Ok(Verdict::Valid)
}
