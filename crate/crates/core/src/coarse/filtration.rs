//! Coarse structures on finite sets, represented as filtrations.
//!
//! On a finite set every relation lies in the connected coarse structure, so
//! the interesting quantity is *how many* steps of a generator are needed to
//! cover a relation. A [`CoarseFiltration`] stores a symmetric reflexive
//! generator `G` and exposes `level(k) = G∘…∘G` (k factors, `level(0) = Δ`)
//! up to a hard cap `max_level`.
//!
//! Two routes compute the same thing: [`CoarseFiltration::level`] composes
//! relations and caches the result, while membership queries use
//! breadth-first distances in the generator graph. Tests check they agree.

use std::collections::{BTreeSet, VecDeque};
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::metric::band;
use super::relation::{Relation, RelationError};
use crate::roe::SparseOperator;

pub const DEFAULT_MAX_LEVEL: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FiltrationError {
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("level {requested} exceeds max_level {max_level}")]
    LevelAboveCap { requested: usize, max_level: usize },
    #[error("filter base element {index} contains out-of-range point {point}")]
    BaseOutOfRange { index: usize, point: usize },
    #[error("filter base is not directed: no element inside the intersection of {0} and {1}")]
    NotDirected(usize, usize),
    #[error("operator {index} is {rows}x{cols}, expected a square operator on {size} points")]
    OperatorShape {
        index: usize,
        rows: usize,
        cols: usize,
        size: usize,
    },
    #[error("threshold must be positive, got {0}")]
    BadThreshold(f64),
    #[error("amplification factor must be positive")]
    ZeroAmplification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiltrationKind {
    Metric,
    Group,
    Filter,
    Explicit,
    Amplified,
    OperatorInduced,
}

/// Why a relation was refused.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum RefusalWitness {
    /// This pair is not in `level(max_level)`.
    UncoveredPair { pair: (usize, usize), max_level: usize },
    /// The relation is metrically bounded but its splitting set contains
    /// no base element. `missing[i]` is a point of base element `i`
    /// absent from the splitting set.
    FilterMiss {
        level: usize,
        splitting_points: Vec<usize>,
        missing: Vec<(usize, usize)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MembershipCertificate {
    /// `level` is the minimal k with `E ⊆ level(k)`; `base_index` names the
    /// base element contained in `S(E)` for filter-restricted structures.
    Contained {
        level: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base_index: Option<usize>,
    },
    Refused { witness: RefusalWitness },
}

impl MembershipCertificate {
    pub fn level(&self) -> Option<usize> {
        match self {
            MembershipCertificate::Contained { level, .. } => Some(*level),
            MembershipCertificate::Refused { .. } => None,
        }
    }

    pub fn is_contained(&self) -> bool {
        self.level().is_some()
    }
}

/// A finite coarse structure given by a generator and a level cap.
#[derive(Debug, Serialize, Deserialize)]
#[serde(try_from = "FiltrationLiteral", into = "FiltrationLiteral")]
pub struct CoarseFiltration {
    kind: FiltrationKind,
    generator: Relation,
    max_level: usize,
    filter_base: Option<Vec<BTreeSet<usize>>>,
    levels: RwLock<Vec<Arc<Relation>>>,
    distances: OnceLock<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiltrationLiteral {
    kind: FiltrationKind,
    generator: Relation,
    max_level: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    filter_base: Option<Vec<Vec<usize>>>,
}

impl TryFrom<FiltrationLiteral> for CoarseFiltration {
    type Error = FiltrationError;
    fn try_from(lit: FiltrationLiteral) -> Result<Self, Self::Error> {
        let base = lit
            .filter_base
            .map(|b| b.into_iter().map(|s| s.into_iter().collect()).collect());
        CoarseFiltration::build(lit.kind, lit.generator, lit.max_level, base)
    }
}

impl From<CoarseFiltration> for FiltrationLiteral {
    fn from(f: CoarseFiltration) -> Self {
        FiltrationLiteral {
            kind: f.kind,
            generator: f.generator,
            max_level: f.max_level,
            filter_base: f
                .filter_base
                .map(|b| b.into_iter().map(|s| s.into_iter().collect()).collect()),
        }
    }
}

impl Clone for CoarseFiltration {
    fn clone(&self) -> Self {
        let levels = self.levels.read().expect("level cache poisoned").clone();
        Self {
            kind: self.kind,
            generator: self.generator.clone(),
            max_level: self.max_level,
            filter_base: self.filter_base.clone(),
            levels: RwLock::new(levels),
            distances: self.distances.clone(),
        }
    }
}

impl PartialEq for CoarseFiltration {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.generator == other.generator
            && self.max_level == other.max_level
            && self.filter_base == other.filter_base
    }
}

impl CoarseFiltration {
    fn build(
        kind: FiltrationKind,
        generator: Relation,
        max_level: usize,
        filter_base: Option<Vec<BTreeSet<usize>>>,
    ) -> Result<Self, FiltrationError> {
        if generator.size() == 0 {
            return Err(RelationError::EmptyGroundSet.into());
        }
        if let Some(base) = &filter_base {
            check_filter_base(generator.size(), base)?;
        }
        let generator = generator.symmetric_reflexive_closure();
        let size = generator.size();
        Ok(Self {
            kind,
            generator,
            max_level,
            filter_base,
            levels: RwLock::new(vec![Arc::new(Relation::diagonal(size))]),
            distances: OnceLock::new(),
        })
    }

    /// Structure generated by an arbitrary relation.
    pub fn explicit(generator: Relation, max_level: usize) -> Result<Self, FiltrationError> {
        Self::build(FiltrationKind::Explicit, generator, max_level, None)
    }

    /// Structure generated by a metric entourage `{d <= r}`.
    pub fn metric(entourage: Relation, max_level: usize) -> Result<Self, FiltrationError> {
        Self::build(FiltrationKind::Metric, entourage, max_level, None)
    }

    /// The line `{0, .., n-1}` with generator the radius-`r` band.
    pub fn band(n: usize, r: usize, max_level: usize) -> Result<Self, FiltrationError> {
        Self::metric(band(n, r), max_level)
    }

    /// Structure generated by a group entourage `E_S`.
    pub fn group(entourage: Relation, max_level: usize) -> Result<Self, FiltrationError> {
        Self::build(FiltrationKind::Group, entourage, max_level, None)
    }

    /// `E_F = {E bounded for |·| : S(E) ∈ F}` on `{0, .., n-1}`, where the
    /// filter `F` is generated by `base`.
    pub fn filter_restricted(
        n: usize,
        base: Vec<BTreeSet<usize>>,
        max_level: usize,
    ) -> Result<Self, FiltrationError> {
        Self::build(FiltrationKind::Filter, band(n, 1), max_level, Some(base))
    }

    /// `Y × {0, .., n-1}`, with `(y, i)` at index `y·n + i`. A pair is in the
    /// generator iff its projection to `Y × Y` is.
    pub fn amplify(&self, n: usize) -> Result<Self, FiltrationError> {
        if n == 0 {
            return Err(FiltrationError::ZeroAmplification);
        }
        let pairs = self.generator.iter().flat_map(|(a, b)| {
            (0..n).flat_map(move |i| (0..n).map(move |j| (a * n + i, b * n + j)))
        });
        let generator = Relation::from_pairs(self.size() * n, pairs)?;
        Self::build(FiltrationKind::Amplified, generator, self.max_level, None)
    }

    /// Generator `{(x, y) : |entry(y, x)| > eps}` over all operators,
    /// symmetrized and made reflexive.
    pub fn from_operators(
        size: usize,
        ops: &[SparseOperator],
        eps: f64,
        max_level: usize,
    ) -> Result<Self, FiltrationError> {
        if size == 0 {
            return Err(RelationError::EmptyGroundSet.into());
        }
        if !(eps > 0.0) {
            return Err(FiltrationError::BadThreshold(eps));
        }
        let mut pairs = BTreeSet::new();
        for (index, op) in ops.iter().enumerate() {
            if op.rows() != size || op.cols() != size {
                return Err(FiltrationError::OperatorShape {
                    index,
                    rows: op.rows(),
                    cols: op.cols(),
                    size,
                });
            }
            for ((y, x), v) in op.iter() {
                if v.norm() > eps {
                    pairs.insert((x, y));
                }
            }
        }
        let generator = Relation::from_pairs(size, pairs)?;
        Self::build(FiltrationKind::OperatorInduced, generator, max_level, None)
    }

    pub fn kind(&self) -> FiltrationKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.generator.size()
    }

    pub fn generator(&self) -> &Relation {
        &self.generator
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn filter_base(&self) -> Option<&[BTreeSet<usize>]> {
        self.filter_base.as_deref()
    }

    /// `level(k)`, computed by repeated composition and cached.
    pub fn level(&self, k: usize) -> Result<Arc<Relation>, FiltrationError> {
        if k > self.max_level {
            return Err(FiltrationError::LevelAboveCap {
                requested: k,
                max_level: self.max_level,
            });
        }
        if let Some(rel) = self.levels.read().expect("level cache poisoned").get(k) {
            return Ok(Arc::clone(rel));
        }
        let mut cache = self.levels.write().expect("level cache poisoned");
        while cache.len() <= k {
            let next = cache
                .last()
                .expect("level 0 is always cached")
                .compose(&self.generator)?;
            cache.push(Arc::new(next));
        }
        Ok(Arc::clone(&cache[k]))
    }

    /// Levels computed so far, starting at level 0.
    pub fn cached_levels(&self) -> Vec<Arc<Relation>> {
        self.levels.read().expect("level cache poisoned").clone()
    }

    /// Seeds the level cache with previously computed levels `0, 1, ..`.
    /// Levels that do not match the recursion are rejected.
    pub fn preload_levels(&self, levels: Vec<Relation>) -> Result<usize, FiltrationError> {
        let mut cache = self.levels.write().expect("level cache poisoned");
        let mut accepted = cache.len();
        for (k, rel) in levels.into_iter().enumerate().skip(cache.len()) {
            if k > self.max_level || k != cache.len() {
                break;
            }
            if cache[k - 1].compose(&self.generator)? != rel {
                break;
            }
            cache.push(Arc::new(rel));
            accepted = cache.len();
        }
        Ok(accepted)
    }

    /// Generator-graph distances between all pairs; `usize::MAX` when
    /// disconnected.
    fn distances(&self) -> &Vec<Vec<usize>> {
        self.distances.get_or_init(|| {
            let adj = self.generator.rows();
            (0..self.size()).map(|s| bfs(&adj, s)).collect()
        })
    }

    /// Minimal `k` with `(x, y) ∈ level(k)`, ignoring the cap.
    pub fn distance(&self, x: usize, y: usize) -> Option<usize> {
        let d = self.distances()[x][y];
        (d != usize::MAX).then_some(d)
    }

    /// `{y : (x, y) ∈ level(k)}` in increasing order.
    pub fn ball(&self, x: usize, k: usize) -> Vec<usize> {
        self.distances()[x]
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d <= k)
            .map(|(y, _)| y)
            .collect()
    }

    /// Largest finite generator distance, i.e. the least level containing
    /// every connected pair.
    pub fn diameter(&self) -> usize {
        self.distances()
            .iter()
            .flatten()
            .copied()
            .filter(|&d| d != usize::MAX)
            .max()
            .unwrap_or(0)
    }

    /// Minimal metric level of `pairs`, or the first pair beyond the cap.
    fn metric_level<I>(&self, pairs: I) -> MembershipCertificate
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let dist = self.distances();
        let mut level = 0;
        for (x, y) in pairs {
            let d = dist[x][y];
            if d > self.max_level {
                return MembershipCertificate::Refused {
                    witness: RefusalWitness::UncoveredPair {
                        pair: (x, y),
                        max_level: self.max_level,
                    },
                };
            }
            level = level.max(d);
        }
        MembershipCertificate::Contained {
            level,
            base_index: None,
        }
    }

    /// Minimal `k <= max_level` with `E ⊆ level(k)`, or a refusal with a
    /// witness. For filter-restricted structures this is
    /// [`filter_membership`](Self::filter_membership).
    pub fn membership_level(&self, e: &Relation) -> Result<MembershipCertificate, FiltrationError> {
        self.check_size(e)?;
        if self.kind == FiltrationKind::Filter {
            return self.filter_membership(e);
        }
        Ok(self.metric_level(e.iter()))
    }

    /// Membership in `E_F`: `E` must be metrically bounded within the cap
    /// and `S(E)` must contain some base element.
    pub fn filter_membership(&self, e: &Relation) -> Result<MembershipCertificate, FiltrationError> {
        self.check_size(e)?;
        let cert = self.metric_level(e.iter());
        let level = match cert.level() {
            Some(k) => k,
            None => return Ok(cert),
        };
        let base = self.filter_base.as_deref().unwrap_or(&[]);
        let splitting = e.splitting_points();
        let mut missing = Vec::new();
        for (index, element) in base.iter().enumerate() {
            match element.iter().find(|p| !splitting.contains(p)) {
                None => {
                    return Ok(MembershipCertificate::Contained {
                        level,
                        base_index: Some(index),
                    })
                }
                Some(&p) => missing.push((index, p)),
            }
        }
        Ok(MembershipCertificate::Refused {
            witness: RefusalWitness::FilterMiss {
                level,
                splitting_points: splitting.into_iter().collect(),
                missing,
            },
        })
    }

    fn check_size(&self, e: &Relation) -> Result<(), FiltrationError> {
        if e.size() != self.size() {
            return Err(RelationError::DomainMismatch {
                left: e.size(),
                right: self.size(),
            }
            .into());
        }
        Ok(())
    }
}

fn bfs(adj: &[Vec<usize>], source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn check_filter_base(size: usize, base: &[BTreeSet<usize>]) -> Result<(), FiltrationError> {
    for (index, element) in base.iter().enumerate() {
        if let Some(&point) = element.iter().find(|&&p| p >= size) {
            return Err(FiltrationError::BaseOutOfRange { index, point });
        }
    }
    for (i, a) in base.iter().enumerate() {
        for (j, b) in base.iter().enumerate().skip(i + 1) {
            let meet: BTreeSet<usize> = a.intersection(b).copied().collect();
            if !base.iter().any(|c| c.is_subset(&meet)) {
                return Err(FiltrationError::NotDirected(i, j));
            }
        }
    }
    Ok(())
}
