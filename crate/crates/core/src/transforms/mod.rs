//! Scheme-to-scheme reductions.

mod decrease;
mod lift;
mod perfect;
mod uniformize;

pub use decrease::{decrease_size, DecreasedScheme};
pub use lift::{labeled_lift, lift_concept, lift_point, unlift_point, vc_dimension, ProperAdapter};
pub use perfect::{imperfect_to_perfect, PerfectedScheme, PqrCompression};
pub use uniformize::{uniformize, GrowthFunction, SchemeFamily, UniformizedScheme};
