use std::collections::HashSet;

use crate::combin::{check_cap, colex_masks};
use crate::emx::ConceptClass;
use crate::schemes::MonotoneScheme;
use crate::{Error, Point, PointSet, Result, Sample, SideInfo};

/// `(x, label)` as a point one coordinate longer than `x`.
pub fn lift_point(x: &Point, label: bool) -> Point {
    let mut c = x.coords().to_vec();
    c.push(label as u64);
    Point::new(c)
}

/// Inverse of [`lift_point`].
pub fn unlift_point(p: &Point) -> Result<(Point, bool)> {
    match p.coords().split_last() {
        Some((&l, rest)) if l <= 1 && !rest.is_empty() => Ok((Point::new(rest.to_vec()), l == 1)),
        _ => Err(Error::UnsupportedSample(format!("{p} is not a labeled point"))),
    }
}

/// `S_h = {(x, h(x)) : x ∈ X}` for a concept `h` over the pool `X`.
pub fn lift_concept(pool: &[Point], h: &PointSet) -> PointSet {
    pool.iter().map(|x| lift_point(x, h.contains(x))).collect()
}

/// The class `{S_h : h ∈ H}` over `X × {0,1}`.
pub fn labeled_lift(class: &ConceptClass) -> Result<ConceptClass> {
    let (Some(pool), Some(concepts)) = (class.pool(), class.concepts()) else {
        return Err(Error::InvalidParameter("labeled lift needs an extensional class".into()));
    };
    let lifted_pool = pool.iter().flat_map(|x| [lift_point(x, false), lift_point(x, true)]).collect();
    let lifted = concepts.iter().map(|h| lift_concept(pool, h)).collect();
    ConceptClass::extensional(lifted_pool, lifted)
}

/// Largest size of a pool subset on which the class realizes every
/// labeling. Extensional classes only.
pub fn vc_dimension(class: &ConceptClass) -> Result<usize> {
    let (Some(pool), Some(concepts)) = (class.pool(), class.concepts()) else {
        return Err(Error::InvalidParameter("VC dimension needs an extensional class".into()));
    };
    if pool.len() > 24 {
        return Err(Error::InvalidParameter(format!("pool of {} points is too large", pool.len())));
    }
    check_cap(1u128 << pool.len(), 1 << 24)?;
    let masks: Vec<u64> = concepts
        .iter()
        .map(|h| pool.iter().enumerate().filter(|(_, x)| h.contains(x)).fold(0, |m, (i, _)| m | 1 << i))
        .collect();
    if masks.is_empty() {
        return Ok(0);
    }
    let shattered = |a: u64| masks.iter().map(|m| m & a).collect::<HashSet<_>>().len() == 1 << a.count_ones();
    let mut dim = 0;
    for k in 1..=pool.len() as u32 {
        if !colex_masks(pool.len() as u32, k).any(shattered) {
            break;
        }
        dim = k as usize;
    }
    Ok(dim)
}

/// Proper compression for `H` on labeled samples, read off a monotone scheme
/// for the lifted class whose reconstructions are lifted concepts.
pub struct ProperAdapter<S> {
    scheme: S,
    pool: Vec<Point>,
    concepts: Vec<PointSet>,
}

impl<S: MonotoneScheme> ProperAdapter<S> {
    /// `class` is `H` itself; `scheme` works on its lift.
    pub fn new(scheme: S, class: &ConceptClass) -> Result<Self> {
        let (Some(pool), Some(concepts)) = (class.pool(), class.concepts()) else {
            return Err(Error::InvalidParameter("proper compression needs an extensional class".into()));
        };
        Ok(ProperAdapter { scheme, pool: pool.to_vec(), concepts: concepts.to_vec() })
    }

    pub fn size_bound(&self) -> usize {
        self.scheme.size_bound()
    }

    pub fn compress(&self, labeled: &[(Point, bool)]) -> Result<(Vec<(Point, bool)>, SideInfo)> {
        let lifted: Sample = labeled.iter().map(|(x, l)| lift_point(x, *l)).collect();
        let (c, side) = self.scheme.compress(&lifted)?;
        Ok((c.iter().map(unlift_point).collect::<Result<_>>()?, side))
    }

    /// The member `h ∈ H` whose lift is the reconstruction.
    pub fn hypothesis(&self, compressed: &[(Point, bool)], side: SideInfo) -> Result<PointSet> {
        let lifted: Sample = compressed.iter().map(|(x, l)| lift_point(x, *l)).collect();
        let rec = self.scheme.reconstruct(&lifted, side)?;
        self.concepts
            .iter()
            .find(|h| lift_concept(&self.pool, h) == rec)
            .cloned()
            .ok_or_else(|| Error::NotInClass(format!("{rec:?} is not a lifted concept")))
    }
}
