use std::collections::BTreeSet;

use rand::distributions::{Distribution as _, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Point, PointSet, Result, Sample};

/// Tolerance on the total mass of a distribution.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// A probability mass function with finite support.
///
/// JSON form: `{"support": [[0],[1]], "weights": [0.5, 0.5]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "DistFile", into = "DistFile")]
pub struct Distribution {
    support: Vec<Point>,
    weights: Vec<f64>,
    sampler: WeightedIndex<f64>,
}

#[derive(Serialize, Deserialize)]
struct DistFile {
    support: Vec<Point>,
    weights: Vec<f64>,
}

impl TryFrom<DistFile> for Distribution {
    type Error = Error;

    fn try_from(f: DistFile) -> Result<Self> {
        Distribution::new(f.support, f.weights)
    }
}

impl From<Distribution> for DistFile {
    fn from(d: Distribution) -> Self {
        DistFile { support: d.support, weights: d.weights }
    }
}

impl PartialEq for Distribution {
    fn eq(&self, other: &Self) -> bool {
        self.support == other.support && self.weights == other.weights
    }
}

impl Distribution {
    pub fn new(support: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidParameter("empty support".into()));
        }
        if support.len() != weights.len() {
            return Err(Error::InvalidParameter(format!(
                "{} support points but {} weights",
                support.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidParameter(format!("weight {w} is not strictly positive")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidParameter(format!("weights sum to {total}, not 1")));
        }
        let arity = support[0].arity();
        if let Some(p) = support.iter().find(|p| p.arity() != arity) {
            return Err(Error::ArityMismatch { expected: arity, found: p.arity() });
        }
        if support.iter().collect::<BTreeSet<_>>().len() != support.len() {
            return Err(Error::InvalidParameter("repeated support point".into()));
        }
        let sampler = WeightedIndex::new(&weights).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        Ok(Distribution { support, weights, sampler })
    }

    pub fn uniform(support: Vec<Point>) -> Result<Self> {
        let n = support.len();
        Distribution::new(support, vec![1.0 / n as f64; n])
    }

    /// Uniform on `{(0), ..., (n-1)}`.
    pub fn uniform_nats(n: u64) -> Result<Self> {
        Distribution::uniform((0..n).map(Point::nat).collect())
    }

    pub fn point_mass(p: Point) -> Self {
        Distribution::new(vec![p], vec![1.0]).expect("a point mass is a distribution")
    }

    /// Random support of `size` distinct points from `pool` with weights
    /// drawn uniformly from `(0, 1]` and normalized.
    pub fn random(pool: &[Point], size: usize, rng: &mut impl Rng) -> Result<Self> {
        use rand::seq::SliceRandom;
        if size == 0 || size > pool.len() {
            return Err(Error::InvalidParameter(format!("support size {size} out of range")));
        }
        let mut support: Vec<Point> = pool.choose_multiple(rng, size).cloned().collect();
        support.sort();
        let raw: Vec<f64> = (0..size).map(|_| 1.0 - rng.gen::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        // push rounding error into the last weight
        let head: f64 = weights[..size - 1].iter().sum();
        weights[size - 1] = 1.0 - head;
        Distribution::new(support, weights)
    }

    pub fn support(&self) -> &[Point] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `E_P(h)`, summed over the support in order.
    pub fn mass(&self, h: &PointSet) -> f64 {
        self.mass_where(|p| h.contains(p))
    }

    pub fn mass_where(&self, mut pred: impl FnMut(&Point) -> bool) -> f64 {
        self.support
            .iter()
            .zip(&self.weights)
            .filter(|(p, _)| pred(p))
            .map(|(_, w)| *w)
            .sum()
    }

    pub fn try_mass_where(&self, mut pred: impl FnMut(&Point) -> Result<bool>) -> Result<f64> {
        let mut total = 0.0;
        for (p, w) in self.support.iter().zip(&self.weights) {
            if pred(p)? {
                total += *w;
            }
        }
        Ok(total)
    }

    pub fn sample(&self, m: usize, rng: &mut impl Rng) -> Sample {
        Sample((0..m).map(|_| self.support[self.sampler.sample(rng)].clone()).collect())
    }
}
