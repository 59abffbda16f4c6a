use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{check_input_size, MonotoneScheme, Sample, SideInfo};
use crate::{Point, PointSet, Result, Scaffold};

/// The recursive `(depth+1)`-size scheme over a scaffold.
///
/// The compressor keeps the maximal element `x`, re-indexes everything below
/// `x` into the scaffold one level down and recurses there. At depth 0 it
/// keeps only the maximum, and the reconstruction of `x` is `{y : y ⪯ x}`
/// (the omega scheme).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderScheme {
    scaffold: Scaffold,
}

impl LadderScheme {
    pub fn new(scaffold: Scaffold) -> Self {
        LadderScheme { scaffold }
    }

    /// The size-1 scheme on the naturals.
    pub fn omega() -> Self {
        LadderScheme::new(Scaffold::canonical(0))
    }

    pub fn scaffold(&self) -> Scaffold {
        self.scaffold
    }

    fn check_points<'a>(&self, pts: impl IntoIterator<Item = &'a Point>) -> Result<()> {
        pts.into_iter().try_for_each(|p| self.scaffold.check(p))
    }

    fn select(scaffold: Scaffold, items: Vec<(usize, Point)>) -> Result<Vec<usize>> {
        let Some(top) = max_index(scaffold, items.iter().map(|(_, p)| p)) else {
            return Ok(Vec::new());
        };
        let (top_pos, x) = items[top].clone();
        if scaffold.depth() == 0 {
            return Ok(vec![top_pos]);
        }
        let lower = scaffold.lower()?;
        let rest = items
            .into_iter()
            .filter(|(_, y)| scaffold.cmp_unchecked(y, &x) == Ordering::Less)
            .map(|(i, y)| Ok((i, scaffold.segment_index(&x, &y)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut chosen = Self::select(lower, rest)?;
        chosen.push(top_pos);
        Ok(chosen)
    }

    /// Splits a compressed sample into its maximum and the re-indexed rest.
    fn split(scaffold: Scaffold, pts: &[Point]) -> Result<Option<(Point, Vec<Point>)>> {
        let Some(top) = max_index(scaffold, pts.iter()) else {
            return Ok(None);
        };
        let x = pts[top].clone();
        if scaffold.depth() == 0 {
            return Ok(Some((x, Vec::new())));
        }
        let rest = pts
            .iter()
            .filter(|y| **y != x)
            .map(|y| scaffold.segment_index(&x, y))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some((x, rest)))
    }

    fn expand(scaffold: Scaffold, pts: &[Point]) -> Result<PointSet> {
        let Some((x, rest)) = Self::split(scaffold, pts)? else {
            return Ok(PointSet::new());
        };
        if scaffold.depth() == 0 {
            return Ok((0..=x.0[0]).map(Point::nat).collect());
        }
        let mut out = PointSet::new();
        for w in Self::expand(scaffold.lower()?, &rest)? {
            if let Some(y) = scaffold.segment_preimage(&x, &w)? {
                out.insert(y);
            }
        }
        out.insert(x);
        Ok(out)
    }

    fn member(scaffold: Scaffold, pts: &[Point], z: &Point) -> Result<bool> {
        let Some((x, rest)) = Self::split(scaffold, pts)? else {
            return Ok(false);
        };
        match scaffold.cmp_unchecked(z, &x) {
            Ordering::Equal => Ok(true),
            Ordering::Greater => Ok(false),
            Ordering::Less if scaffold.depth() == 0 => Ok(true),
            Ordering::Less => Self::member(scaffold.lower()?, &rest, &scaffold.segment_index(&x, z)?),
        }
    }
}

// First position of the maximum.
fn max_index<'a>(scaffold: Scaffold, pts: impl Iterator<Item = &'a Point>) -> Option<usize> {
    let mut best: Option<(usize, &Point)> = None;
    for (i, p) in pts.enumerate() {
        match best {
            Some((_, b)) if scaffold.cmp_unchecked(p, b) != Ordering::Greater => {}
            _ => best = Some((i, p)),
        }
    }
    best.map(|(i, _)| i)
}

impl MonotoneScheme for LadderScheme {
    fn size_bound(&self) -> usize {
        self.scaffold.depth() + 1
    }

    fn compress(&self, sample: &Sample) -> Result<(Sample, SideInfo)> {
        check_input_size(self.max_input(), sample)?;
        self.check_points(sample.iter())?;
        let items = sample.iter().cloned().enumerate().collect();
        let mut chosen = Self::select(self.scaffold, items)?;
        chosen.sort_unstable();
        Ok((sample.select(&chosen), SideInfo::NONE))
    }

    fn reconstruct(&self, compressed: &Sample, side: SideInfo) -> Result<PointSet> {
        side.check_none()?;
        self.check_points(compressed.iter())?;
        Self::expand(self.scaffold, compressed)
    }

    fn count_covered(&self, compressed: &Sample, side: SideInfo, points: &[Point]) -> Result<usize> {
        side.check_none()?;
        self.check_points(compressed.iter().chain(points))?;
        let mut n = 0;
        for z in points {
            if Self::member(self.scaffold, compressed, z)? {
                n += 1;
            }
        }
        Ok(n)
    }
}
