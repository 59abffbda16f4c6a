//! Monotone sample compression schemes and the learning procedures built on
//! top of them.
//!
//! The crate is organised bottom-up:
//!
//! - [`scaffold`]: stratified well-ordered domains of tuples of naturals,
//!   with Cantor-pairing enumerations of initial segments.
//! - [`schemes`]: the [`MonotoneScheme`](schemes::MonotoneScheme) contract,
//!   validation, and the recursive ladder scheme.
//! - [`transforms`]: scheme-to-scheme reductions (uniformization, size
//!   decrease, imperfect-to-perfect, labeled lift).
//! - [`emx`]: finite-support distributions, concept classes, the
//!   compression-based learners, regret experiments, and extraction of a
//!   compression scheme from a learner.
//! - [`search`]: exact feasibility search for bounded `(p, q, r)`
//!   reconstruction on finite pools.

pub mod combin;
pub mod emx;
mod error;
pub mod scaffold;
pub mod schemes;
pub mod search;
pub mod transforms;

pub use error::{Error, Result};
pub use scaffold::{Point, PointSet, Scaffold};
pub use schemes::{MonotoneScheme, Sample, SideInfo};
