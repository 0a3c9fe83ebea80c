//! Finite combinatorics: matchings, colorings, and partitions of relations.

mod claim;
mod coloring;
mod decompose;
mod matching;

pub use claim::{claim_partitions, locator_union, verify_claim_partition, ClaimError, ClaimPartition, ClaimViolation};
pub use coloring::{adjacency, greedy_coloring, Coloring, ColoringError};
pub use decompose::{decompose_partial_bijections, decompose_with, DecomposeStrategy, PartialBijection};
pub use matching::{alternating_reach, hall_selector, maximum_matching, Matching, SelectorResult};
