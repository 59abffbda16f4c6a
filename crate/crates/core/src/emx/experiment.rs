use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ConceptClass, Distribution, Learner};
use crate::{Error, Result};

/// Generator for one trial. Each trial gets its own ChaCha stream of the
/// seeded key, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Summary of a Monte Carlo regret run. Per-trial values are kept for CSV
/// output but not serialized into the JSON summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegretReport {
    pub trials: usize,
    pub m: usize,
    pub mean_regret: f64,
    pub stderr: f64,
    pub bound: Option<f64>,
    pub seed: u64,
    #[serde(skip)]
    pub regrets: Vec<f64>,
}

impl RegretReport {
    fn from_regrets(regrets: Vec<f64>, m: usize, seed: u64, bound: Option<f64>) -> Self {
        let n = regrets.len() as f64;
        let mean = regrets.iter().sum::<f64>() / n;
        let stderr = if regrets.len() > 1 {
            let var = regrets.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        RegretReport { trials: regrets.len(), m, mean_regret: mean, stderr, bound, seed, regrets }
    }

    /// `mean <= bound + 3·stderr`, when a bound is known.
    pub fn within_bound(&self) -> Option<bool> {
        self.bound.map(|b| self.mean_regret <= b + 3.0 * self.stderr)
    }

    /// Fraction of trials whose regret exceeds `eps`.
    pub fn exceed_frequency(&self, eps: f64) -> f64 {
        self.regrets.iter().filter(|&&r| r > eps).count() as f64 / self.regrets.len() as f64
    }

    /// Per-trial rows: header `trial,regret`, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,regret\n");
        for (i, r) in self.regrets.iter().enumerate() {
            writeln!(out, "{i},{r}").unwrap();
        }
        out
    }
}

/// Draws `trials` samples of size `m` from `dist` and records the regret
/// `Opt_P(F) - E_P(learner(S))` of each, evaluated exactly on the support.
/// For `fin_subsets`, where `Opt_P = 1`, this is the uncovered mass.
pub fn regret_experiment(
    learner: &dyn Learner,
    dist: &Distribution,
    class: &ConceptClass,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<RegretReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let opt = class.opt(dist)?;
    let regrets = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let sample = dist.sample(m, &mut trial_rng(seed, t));
            match class {
                ConceptClass::FinSubsets { .. } => learner.uncovered_mass(&sample, dist),
                // mass can exceed opt by rounding in the last place
                ConceptClass::Extensional { .. } => Ok((opt - learner.hypothesis_mass(&sample, dist)?).max(0.0)),
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(RegretReport::from_regrets(regrets, m, seed, learner.regret_bound(m)))
}
