//! Stratified well-ordered domains.
//!
//! A depth-`k` scaffold is the set of `(k+1)`-tuples of naturals under the
//! lexicographic order. At depth 0 this is an order of type ω: every point has
//! finitely many predecessors. At depth `k ≥ 1` initial segments are infinite,
//! but each one embeds into the depth-`(k-1)` scaffold through
//! [`Scaffold::segment_index`], which pairs the two leading coordinates with
//! the Cantor pairing function. The ladder compression scheme recurses along
//! these embeddings.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A tuple of naturals. Serialized as a JSON array, e.g. `[2,5]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<u64>);

pub type PointSet = BTreeSet<Point>;

impl Point {
    pub fn new(coords: impl Into<Vec<u64>>) -> Self {
        Point(coords.into())
    }

    /// A depth-0 point.
    pub fn nat(n: u64) -> Self {
        Point(vec![n])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Cantor pairing `π(a, b) = (a+b)(a+b+1)/2 + b`.
pub fn cantor_pair(a: u64, b: u64) -> Result<u64> {
    let s = a.checked_add(b).ok_or(Error::Overflow)?;
    let tri = if s % 2 == 0 {
        (s / 2).checked_mul(s + 1)
    } else {
        s.checked_mul(s.div_ceil(2))
    };
    tri.and_then(|t| t.checked_add(b)).ok_or(Error::Overflow)
}

/// Inverse of [`cantor_pair`].
pub fn cantor_unpair(z: u64) -> (u64, u64) {
    // w is the largest integer with w(w+1)/2 <= z.
    let z128 = z as u128;
    let mut w = (((8 * z128 + 1).isqrt() - 1) / 2) as u64;
    while (w as u128) * (w as u128 + 1) / 2 > z128 {
        w -= 1;
    }
    let t = ((w as u128) * (w as u128 + 1) / 2) as u64;
    let b = z - t;
    (w - b, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderKind {
    /// Tuples under lexicographic order, segments indexed by Cantor pairing.
    Canonical,
}

/// A depth-`k` stratified well-order over `(k+1)`-tuples.
///
/// Only canonical scaffolds exist today; the order kind is carried so other
/// well-orders can be added without changing callers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scaffold {
    depth: usize,
    #[serde(default = "canonical", skip_serializing)]
    order: OrderKind,
}

fn canonical() -> OrderKind {
    OrderKind::Canonical
}

impl Scaffold {
    pub fn canonical(depth: usize) -> Self {
        Scaffold { depth, order: OrderKind::Canonical }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn order_kind(&self) -> OrderKind {
        self.order
    }

    /// Tuple length of the points of this scaffold.
    pub fn arity(&self) -> usize {
        self.depth + 1
    }

    /// The scaffold one level down, into which initial segments embed.
    pub fn lower(&self) -> Result<Scaffold> {
        match self.depth {
            0 => Err(Error::DepthUnsupported(0)),
            d => Ok(Scaffold { depth: d - 1, order: self.order }),
        }
    }

    pub fn check(&self, x: &Point) -> Result<()> {
        if x.arity() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: x.arity() });
        }
        Ok(())
    }

    pub fn compare(&self, x: &Point, y: &Point) -> Result<Ordering> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.cmp_unchecked(x, y))
    }

    pub(crate) fn cmp_unchecked(&self, x: &Point, y: &Point) -> Ordering {
        match self.order {
            OrderKind::Canonical => x.0.cmp(&y.0),
        }
    }

    /// All strict predecessors of `x`; only finite at depth 0.
    pub fn predecessors(&self, x: &Point) -> Result<PointSet> {
        self.check(x)?;
        if self.depth != 0 {
            return Err(Error::DepthUnsupported(self.depth));
        }
        Ok((0..x.0[0]).map(Point::nat).collect())
    }

    /// The embedding `idx_x` of the initial segment below `x` into the
    /// scaffold one level down, evaluated at `y`.
    pub fn segment_index(&self, x: &Point, y: &Point) -> Result<Point> {
        if self.depth == 0 {
            return Err(Error::DepthUnsupported(0));
        }
        if self.compare(y, x)? != Ordering::Less {
            return Err(Error::NotAPredecessor { x: x.to_string(), y: y.to_string() });
        }
        self.embed(y)
    }

    /// The point `y ≺ x` with `segment_index(x, y) = w`, if one exists.
    pub fn segment_preimage(&self, x: &Point, w: &Point) -> Result<Option<Point>> {
        if self.depth == 0 {
            return Err(Error::DepthUnsupported(0));
        }
        self.check(x)?;
        self.lower()?.check(w)?;
        let y = self.unembed(w);
        Ok((self.cmp_unchecked(&y, x) == Ordering::Less).then_some(y))
    }

    // The canonical embedding does not depend on x: (y0, y1, rest..) maps to
    // (π(y0, y1), rest..), a bijection from (k+1)-tuples onto k-tuples.
    fn embed(&self, y: &Point) -> Result<Point> {
        let mut coords = Vec::with_capacity(self.depth);
        coords.push(cantor_pair(y.0[0], y.0[1])?);
        coords.extend_from_slice(&y.0[2..]);
        Ok(Point(coords))
    }

    fn unembed(&self, w: &Point) -> Point {
        let (a, b) = cantor_unpair(w.0[0]);
        let mut coords = Vec::with_capacity(self.arity());
        coords.push(a);
        coords.push(b);
        coords.extend_from_slice(&w.0[1..]);
        Point(coords)
    }
}
