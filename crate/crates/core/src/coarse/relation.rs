//! Finite relations on a ground set `{0, .., size-1}`.
//!
//! A [`Relation`] is the entourage datum: a set of ordered index pairs.
//! Pairs are kept in a `BTreeSet`, so iteration is row-major and every
//! serialization is deterministic.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("domain mismatch: relation on {left} points composed with relation on {right} points")]
    DomainMismatch { left: usize, right: usize },
    #[error("pair ({row}, {col}) is out of range for a ground set of size {size}")]
    OutOfRange { row: usize, col: usize, size: usize },
    #[error("ground set must be nonempty")]
    EmptyGroundSet,
    #[error("labels: expected {expected} distinct labels, got {got}")]
    BadLabels { expected: usize, got: usize },
    #[error("distance table: {0}")]
    BadDistanceTable(String),
}

/// A finite ground set with optional display labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<Self, RelationError> {
        if size == 0 {
            return Err(RelationError::EmptyGroundSet);
        }
        Ok(Self { size, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self, RelationError> {
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if labels.is_empty() {
            return Err(RelationError::EmptyGroundSet);
        }
        if distinct.len() != labels.len() {
            return Err(RelationError::BadLabels {
                expected: labels.len(),
                got: distinct.len(),
            });
        }
        Ok(Self {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }
}

/// A set of ordered pairs `(row, col)` over `{0, .., size-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RelationLiteral", into = "RelationLiteral")]
pub struct Relation {
    size: usize,
    pairs: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationLiteral {
    size: usize,
    pairs: Vec<[usize; 2]>,
}

impl TryFrom<RelationLiteral> for Relation {
    type Error = RelationError;
    fn try_from(lit: RelationLiteral) -> Result<Self, Self::Error> {
        Relation::from_pairs(lit.size, lit.pairs.into_iter().map(|[r, c]| (r, c)))
    }
}

impl From<Relation> for RelationLiteral {
    fn from(rel: Relation) -> Self {
        RelationLiteral {
            size: rel.size,
            pairs: rel.pairs.into_iter().map(|(r, c)| [r, c]).collect(),
        }
    }
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        Self {
            size,
            pairs: BTreeSet::new(),
        }
    }

    /// The diagonal Δ.
    pub fn diagonal(size: usize) -> Self {
        Self {
            size,
            pairs: (0..size).map(|i| (i, i)).collect(),
        }
    }

    /// Every pair of `X × X`.
    pub fn full(size: usize) -> Self {
        Self {
            size,
            pairs: (0..size)
                .flat_map(|i| (0..size).map(move |j| (i, j)))
                .collect(),
        }
    }

    /// Builds a relation, rejecting out-of-range indices. Duplicates collapse.
    pub fn from_pairs<I>(size: usize, pairs: I) -> Result<Self, RelationError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (row, col) in pairs {
            if row >= size || col >= size {
                return Err(RelationError::OutOfRange { row, col, size });
            }
            set.insert((row, col));
        }
        Ok(Self { size, pairs: set })
    }

    /// The graph `{(x, f(x))}` of a total map.
    pub fn graph_of(size: usize, map: &[usize]) -> Result<Self, RelationError> {
        Self::from_pairs(size, map.iter().copied().enumerate())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.pairs.contains(&(row, col))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn insert(&mut self, row: usize, col: usize) -> Result<bool, RelationError> {
        if row >= self.size || col >= self.size {
            return Err(RelationError::OutOfRange {
                row,
                col,
                size: self.size,
            });
        }
        Ok(self.pairs.insert((row, col)))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// First pair of `self` not in `other`, if any.
    pub fn first_outside(&self, other: &Relation) -> Option<(usize, usize)> {
        self.pairs.difference(&other.pairs).next().copied()
    }

    /// Row sections as adjacency lists: `out[x] = {y : (x, y) ∈ E}`.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.size];
        for &(r, c) in &self.pairs {
            out[r].push(c);
        }
        out
    }

    /// Column sections: `out[y] = {x : (x, y) ∈ E}`.
    pub fn cols(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.size];
        for &(r, c) in &self.pairs {
            out[c].push(r);
        }
        out
    }

    /// `E ∘ F = {(x, z) : ∃y, (x, y) ∈ E, (y, z) ∈ F}`.
    pub fn compose(&self, other: &Relation) -> Result<Relation, RelationError> {
        self.check_domain(other)?;
        let other_rows = other.rows();
        let mut pairs = BTreeSet::new();
        for &(x, y) in &self.pairs {
            for &z in &other_rows[y] {
                pairs.insert((x, z));
            }
        }
        Ok(Relation {
            size: self.size,
            pairs,
        })
    }

    /// `E⁻¹`, the pairwise swap.
    pub fn inverse(&self) -> Relation {
        Relation {
            size: self.size,
            pairs: self.pairs.iter().map(|&(r, c)| (c, r)).collect(),
        }
    }

    pub fn union(&self, other: &Relation) -> Result<Relation, RelationError> {
        self.check_domain(other)?;
        Ok(Relation {
            size: self.size,
            pairs: self.pairs.union(&other.pairs).copied().collect(),
        })
    }

    /// `E ∪ E⁻¹ ∪ Δ`.
    pub fn symmetric_reflexive_closure(&self) -> Relation {
        let mut pairs = self.pairs.clone();
        pairs.extend(self.pairs.iter().map(|&(r, c)| (c, r)));
        pairs.extend((0..self.size).map(|i| (i, i)));
        Relation {
            size: self.size,
            pairs,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs.iter().all(|&(r, c)| self.pairs.contains(&(c, r)))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size).all(|i| self.pairs.contains(&(i, i)))
    }

    /// Largest row section and largest column section.
    pub fn section_bounds(&self) -> (usize, usize) {
        let mut row = vec![0usize; self.size];
        let mut col = vec![0usize; self.size];
        for &(r, c) in &self.pairs {
            row[r] += 1;
            col[c] += 1;
        }
        (
            row.into_iter().max().unwrap_or(0),
            col.into_iter().max().unwrap_or(0),
        )
    }

    /// Whether `A × A ⊆ E`.
    pub fn bounds_set(&self, set: &[usize]) -> bool {
        set.iter()
            .all(|&a| set.iter().all(|&b| self.pairs.contains(&(a, b))))
    }

    /// Splitting points for the index order:
    /// `n` such that no pair of `E` (in either orientation) has `i < n <= j`.
    ///
    /// A pair `(i, j)` with `i < j` blocks exactly the interval `i+1 ..= j`,
    /// so a difference array over the blocked intervals gives the answer in
    /// linear time.
    pub fn splitting_points(&self) -> BTreeSet<usize> {
        let mut diff = vec![0i64; self.size + 1];
        for &(r, c) in &self.pairs {
            let (lo, hi) = if r < c { (r, c) } else { (c, r) };
            if lo < hi {
                diff[lo + 1] += 1;
                diff[hi + 1] -= 1;
            }
        }
        let mut out = BTreeSet::new();
        let mut running = 0i64;
        for (n, d) in diff.iter().take(self.size).enumerate() {
            running += d;
            if running == 0 {
                out.insert(n);
            }
        }
        out
    }

    fn check_domain(&self, other: &Relation) -> Result<(), RelationError> {
        if self.size != other.size {
            return Err(RelationError::DomainMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, (r, c)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({r},{c})")?;
        }
        write!(f, "}}")
    }
}
