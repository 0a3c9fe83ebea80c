//! Bounded-propagation operators on finite ground sets.

mod crossed;
mod ghost;
mod norm;
mod onl;
mod operator;
mod property_a;
pub mod random;
mod rank_one;

pub use crossed::{crossed_decompose, translation, CrossedDecomposition, CrossedError};
pub use ghost::{ghost_profile, initial_segments, GhostError, GhostProfile};
pub use norm::{dense_spectral_norm, dense_top_singular, spectral_norm, top_singular, DENSE_LIMIT};
pub use onl::{localize, onl_probe, probe_one, ratio_table, BallRatio, OnlError, OnlReport, OnlSample, RATIO_SLACK};
pub use operator::{OperatorError, SparseOperator};
pub use property_a::{check_property_a_witness, property_a_witness_holds, window_vectors, PropertyAFailure};
pub use rank_one::{rank_one_norm_identity_check, rank_one_norm_sides, IDENTITY_TOL};
