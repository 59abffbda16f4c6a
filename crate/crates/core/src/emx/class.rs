use serde::{Deserialize, Serialize};

use super::Distribution;
use crate::{Error, Point, PointSet, Result, Scaffold};

/// A class of finite sets of points.
///
/// JSON forms: `{"kind":"fin_subsets","depth":k}` and
/// `{"kind":"extensional","pool":[...],"concepts":[[...],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ClassFile", into = "ClassFile")]
pub enum ConceptClass {
    /// An explicit list of concepts over a finite pool. Listing order is the
    /// tie-break order wherever a member must be chosen.
    Extensional {
        pool: Vec<Point>,
        concepts: Vec<PointSet>,
        union_bounded_hint: Option<bool>,
    },
    /// Every finite subset of a scaffold domain.
    FinSubsets { scaffold: Scaffold },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ClassFile {
    Extensional {
        pool: Vec<Point>,
        concepts: Vec<PointSet>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        union_bounded_hint: Option<bool>,
    },
    FinSubsets {
        depth: usize,
    },
}

impl TryFrom<ClassFile> for ConceptClass {
    type Error = Error;

    fn try_from(f: ClassFile) -> Result<Self> {
        match f {
            ClassFile::Extensional { pool, concepts, union_bounded_hint } => {
                let mut class = ConceptClass::extensional(pool, concepts)?;
                if let ConceptClass::Extensional { union_bounded_hint: h, .. } = &mut class {
                    *h = union_bounded_hint;
                }
                Ok(class)
            }
            ClassFile::FinSubsets { depth } => Ok(ConceptClass::fin_subsets(depth)),
        }
    }
}

impl From<ConceptClass> for ClassFile {
    fn from(c: ConceptClass) -> Self {
        match c {
            ConceptClass::Extensional { pool, concepts, union_bounded_hint } => {
                ClassFile::Extensional { pool, concepts, union_bounded_hint }
            }
            ConceptClass::FinSubsets { scaffold } => ClassFile::FinSubsets { depth: scaffold.depth() },
        }
    }
}

impl ConceptClass {
    pub fn extensional(pool: Vec<Point>, concepts: Vec<PointSet>) -> Result<Self> {
        let pool_set: PointSet = pool.iter().cloned().collect();
        if pool_set.len() != pool.len() {
            return Err(Error::InvalidParameter("repeated pool point".into()));
        }
        for c in &concepts {
            if let Some(p) = c.iter().find(|p| !pool_set.contains(*p)) {
                return Err(Error::NotInClass(format!("concept point {p} is outside the pool")));
            }
        }
        Ok(ConceptClass::Extensional { pool, concepts, union_bounded_hint: None })
    }

    pub fn fin_subsets(depth: usize) -> Self {
        ConceptClass::FinSubsets { scaffold: Scaffold::canonical(depth) }
    }

    pub fn contains_concept(&self, h: &PointSet) -> bool {
        match self {
            ConceptClass::Extensional { concepts, .. } => concepts.contains(h),
            ConceptClass::FinSubsets { scaffold } => h.iter().all(|p| scaffold.check(p).is_ok()),
        }
    }

    /// `Opt_P(F)`: the largest mass of a member. A finite set covers the
    /// whole support, so the answer for `fin_subsets` is 1.
    pub fn opt(&self, dist: &Distribution) -> Result<f64> {
        match self {
            ConceptClass::Extensional { concepts, .. } => concepts
                .iter()
                .map(|c| dist.mass(c))
                .reduce(f64::max)
                .ok_or(Error::EmptyClass),
            ConceptClass::FinSubsets { scaffold } => {
                for p in dist.support() {
                    scaffold.check(p)?;
                }
                Ok(1.0)
            }
        }
    }

    /// Whether every pairwise union is contained in some member.
    pub fn is_union_bounded(&self) -> bool {
        match self {
            ConceptClass::FinSubsets { .. } => true,
            ConceptClass::Extensional { concepts, .. } => concepts.iter().enumerate().all(|(i, a)| {
                concepts[i..].iter().all(|b| {
                    concepts.iter().any(|c| a.is_subset(c) && b.is_subset(c))
                })
            }),
        }
    }

    /// The member chosen to contain `union`: the set itself for
    /// `fin_subsets`, otherwise the smallest member containing it (first
    /// listed among equals).
    pub fn dominating_member(&self, union: PointSet) -> Result<PointSet> {
        match self {
            ConceptClass::FinSubsets { scaffold } => {
                if let Some(p) = union.iter().find(|p| scaffold.check(p).is_err()) {
                    return Err(Error::NotInClass(format!("{p} is not a point of the scaffold")));
                }
                Ok(union)
            }
            ConceptClass::Extensional { concepts, .. } => concepts
                .iter()
                .filter(|c| union.is_subset(c))
                .min_by_key(|c| c.len())
                .cloned()
                .ok_or(Error::NoDominatingConcept),
        }
    }

    /// Rank of a point in the class's fixed pool order: pool position for
    /// extensional classes, scaffold order otherwise.
    pub(crate) fn pool_order_key(&self, p: &Point) -> (usize, Point) {
        match self {
            ConceptClass::Extensional { pool, .. } => {
                (pool.iter().position(|q| q == p).unwrap_or(usize::MAX), p.clone())
            }
            ConceptClass::FinSubsets { .. } => (0, p.clone()),
        }
    }

    pub fn pool(&self) -> Option<&[Point]> {
        match self {
            ConceptClass::Extensional { pool, .. } => Some(pool),
            ConceptClass::FinSubsets { .. } => None,
        }
    }

    pub fn concepts(&self) -> Option<&[PointSet]> {
        match self {
            ConceptClass::Extensional { concepts, .. } => Some(concepts),
            ConceptClass::FinSubsets { .. } => None,
        }
    }
}
