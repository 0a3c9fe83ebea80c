//! Computational coarse geometry on finite spaces.
//!
//! * [`coarse`]: relations, filtrations standing in for coarse structures,
//!   metric, group, filter-restricted, amplified and operator-induced
//!   constructions.
//! * [`combinatorics`]: partial-bijection decomposition, colorings, Hall
//!   selectors, locator partitions.
//! * [`roe`]: sparse operators, norms, ghost profiles, operator-norm
//!   localization, property-A witnesses, crossed-product coefficients.
//! * [`rigidity`]: recovering a coarse equivalence from an isometry that
//!   conjugates one Roe truncation into another.
//! * [`cli`]: scenarios, generators, reports.

pub mod cli;
pub mod coarse;
pub mod combinatorics;
pub mod rigidity;
pub mod roe;
