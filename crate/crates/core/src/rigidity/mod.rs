//! Recovering a coarse equivalence from an isometry between ground sets.
//!
//! The pipeline: check `U*U = 1`, compute locator sets, check that columns
//! and rows of `U` concentrate on them, select maps `f: X → Y` and
//! `g: Y → X` from the locators, measure their distortion and closeness to
//! inverses, and optionally straighten them into a bijection.

mod distortion;
mod locators;
mod maps;
mod pipeline;

use thiserror::Error;

use crate::coarse::FiltrationError;

pub use distortion::{
    closeness_level, entourage_union_level, source_union_level, verify_coarse_expanding, DistortionEntry,
    DistortionReport,
};
pub use locators::{
    check_isometry, concentration_check, dual_locator_value_dense, isometry_defect, locator_sets,
    locator_sets_dense, locator_value, locator_value_dense, ConcentrationReport, IsometryData, Locators,
    DEFAULT_ISOMETRY_TOL,
};
pub use maps::{cantor_bernstein, embed_from_map, recover_maps, PointMap, RecoveredMaps};
pub use pipeline::{full_pipeline, PipelineConfig, PipelineOutcome, RecoveredEquivalence, Stage, StageRecord, StageStatus};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RigidityError {
    #[error("operator is {got:?}, expected {expected:?} (rows, cols)")]
    Shape { expected: (usize, usize), got: (usize, usize) },
    #[error("operator is not an isometry: ||U*U - 1|| = {defect:e} > {tol:e}")]
    NotIsometry { defect: f64, tol: f64 },
    #[error("locator threshold must be positive, got {0}")]
    BadDelta(f64),
    #[error("points with empty locators: sources {sources:?}, targets {targets:?}")]
    EmptyLocators { sources: Vec<usize>, targets: Vec<usize> },
    #[error("no injective selection: sets {sets:?} have union {union:?}")]
    HallDeficiency { side: String, sets: Vec<usize>, union: Vec<usize> },
    #[error("map is not injective: {0} and {1} share an image")]
    NotInjective(usize, usize),
    #[error("map is not total: point {0} has no image")]
    NotTotal(usize),
    #[error("image {image} of point {point} is outside a codomain of size {codomain}")]
    ImageOutOfRange { point: usize, image: usize, codomain: usize },
    #[error("map domain has {got} points, filtration has {expected}")]
    DomainMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
}
