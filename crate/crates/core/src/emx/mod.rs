//! Expectation maximization (EMX) learning over finite-support
//! distributions.
//!
//! A learner receives an i.i.d. sample from an unknown distribution `P` and
//! must output a member `h` of a concept class whose mass `E_P(h)` is close
//! to `Opt_P = sup_h E_P(h)`. Two learners are built from a monotone
//! compression scheme (empirical-risk selection over subsamples, and the
//! union-of-reconstructions learner), and [`extract_compression`] goes the
//! other way, turning a weak learner into a compression scheme.

mod class;
mod distribution;
mod experiment;
mod extract;
mod learners;
mod sample_size;

pub use class::ConceptClass;
pub use distribution::Distribution;
pub use experiment::{regret_experiment, trial_rng, RegretReport};
pub use extract::{extract_compression, ExtractedScheme};
pub use learners::{
    loo_learn, lw_learn, ConstantLearner, Learner, LooLearner, LwLearner, MaxLearner, SubsampleIndex,
};
pub use sample_size::{lw_deviation, sample_size};
