//! Maps between ground sets selected from locators.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::locators::{IsometryData, Locators};
use super::RigidityError;
use crate::combinatorics::{hall_selector, SelectorResult};
use crate::roe::SparseOperator;

/// Targets with `‖U*δ_y‖` at most this are outside the range of `UU*` and
/// need no preimage.
pub const RANGE_WEIGHT_TOL: f64 = 1e-9;

/// A possibly partial map `{0..domain} → {0..codomain}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointMap {
    pub codomain: usize,
    pub images: Vec<Option<usize>>,
}

impl PointMap {
    pub fn total(codomain: usize, images: &[usize]) -> Result<Self, RigidityError> {
        if let Some((point, &image)) = images.iter().enumerate().find(|&(_, &i)| i >= codomain) {
            return Err(RigidityError::ImageOutOfRange { point, image, codomain });
        }
        Ok(Self {
            codomain,
            images: images.iter().map(|&i| Some(i)).collect(),
        })
    }

    pub fn domain_size(&self) -> usize {
        self.images.len()
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.images.get(x).copied().flatten()
    }

    pub fn is_total(&self) -> bool {
        self.images.iter().all(Option::is_some)
    }

    /// Points where the map is defined.
    pub fn domain(&self) -> Vec<usize> {
        (0..self.images.len()).filter(|&x| self.images[x].is_some()).collect()
    }

    /// Images of a total map, or the first point without one.
    pub fn to_total(&self) -> Result<Vec<usize>, RigidityError> {
        self.images
            .iter()
            .enumerate()
            .map(|(x, i)| i.ok_or(RigidityError::NotTotal(x)))
            .collect()
    }

    /// First two points sharing an image, if any.
    pub fn collision(&self) -> Option<(usize, usize)> {
        let mut seen = vec![None; self.codomain];
        for (x, image) in self.images.iter().enumerate() {
            if let Some(y) = *image {
                if let Some(prev) = seen[y] {
                    return Some((prev, x));
                }
                seen[y] = Some(x);
            }
        }
        None
    }

    /// Partial inverse of an injective map.
    pub fn inverse(&self) -> Result<PointMap, RigidityError> {
        if let Some((a, b)) = self.collision() {
            return Err(RigidityError::NotInjective(a, b));
        }
        let mut images = vec![None; self.codomain];
        for (x, image) in self.images.iter().enumerate() {
            if let Some(y) = *image {
                images[y] = Some(x);
            }
        }
        Ok(PointMap {
            codomain: self.images.len(),
            images,
        })
    }

    /// `self ∘ other`, defined where both steps are.
    pub fn after(&self, other: &PointMap) -> PointMap {
        PointMap {
            codomain: self.codomain,
            images: other.images.iter().map(|i| i.and_then(|y| self.get(y))).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveredMaps {
    pub f: PointMap,
    pub g: PointMap,
    /// Targets outside the range of `UU*`, where `g` is left undefined.
    pub uncovered_targets: Vec<usize>,
}

/// `f(x) ∈ Y_{x,δ}` and `g(y) ∈ X_{y,δ}`. With `require_injective` both
/// come from Hall selectors; otherwise the smallest element is taken.
/// `g` is only defined on targets in the range of `UU*`.
pub fn recover_maps(loc: &Locators, require_injective: bool) -> Result<RecoveredMaps, RigidityError> {
    let sources = loc.empty_sources();
    let (covered, uncovered_targets): (Vec<usize>, Vec<usize>) =
        (0..loc.target_size()).partition(|&y| loc.row_weight[y] > RANGE_WEIGHT_TOL);
    let targets: Vec<usize> = covered.iter().copied().filter(|&y| loc.x_of[y].is_empty()).collect();
    if !sources.is_empty() || !targets.is_empty() {
        return Err(RigidityError::EmptyLocators { sources, targets });
    }

    let g_family: Vec<BTreeSet<usize>> = covered.iter().map(|&y| loc.x_of[y].clone()).collect();
    let (f_images, g_images) = if require_injective {
        (
            select(&loc.y_of, "source", |i| i)?,
            select(&g_family, "target", |i| covered[i])?,
        )
    } else {
        let first = |s: &BTreeSet<usize>| *s.first().expect("checked nonempty");
        (
            loc.y_of.iter().map(first).collect(),
            g_family.iter().map(first).collect(),
        )
    };

    let mut g = vec![None; loc.target_size()];
    for (&y, x) in covered.iter().zip(g_images) {
        g[y] = Some(x);
    }
    Ok(RecoveredMaps {
        f: PointMap::total(loc.target_size(), &f_images)?,
        g: PointMap {
            codomain: loc.source_size(),
            images: g,
        },
        uncovered_targets,
    })
}

fn select(
    family: &[BTreeSet<usize>],
    side: &str,
    original: impl Fn(usize) -> usize,
) -> Result<Vec<usize>, RigidityError> {
    match hall_selector(family) {
        SelectorResult::Selector { selector } => Ok(selector),
        SelectorResult::Deficiency { sets, union } => Err(RigidityError::HallDeficiency {
            side: side.to_string(),
            sets: sets.into_iter().map(original).collect(),
            union,
        }),
    }
}

/// A bijection `h: X → Y` from injections `f: X → Y` and `g: Y → X`.
///
/// Each `x` is traced backwards along `x ← g(y) ← f(x') ← …`. Chains that
/// stop in `X` or cycle use `f`; chains that stop in `Y` use `g⁻¹`. On
/// finite sets every chain cycles, so the result equals `f`.
pub fn cantor_bernstein(f: &PointMap, g: &PointMap) -> Result<PointMap, RigidityError> {
    let (nx, ny) = (f.domain_size(), g.domain_size());
    if f.codomain != ny || g.codomain != nx {
        return Err(RigidityError::DomainMismatch { expected: ny, got: f.codomain });
    }
    let f_total = f.to_total()?;
    let g_total = g.to_total()?;
    let f_inv = f.inverse()?;
    let g_inv = g.inverse()?;

    let mut h = Vec::with_capacity(nx);
    for x in 0..nx {
        let mut cur = x;
        let mut use_g = false;
        for _ in 0..=nx + ny {
            let Some(y) = g_inv.get(cur) else { break };
            let Some(prev) = f_inv.get(y) else {
                use_g = true;
                break;
            };
            cur = prev;
            if cur == x {
                break;
            }
        }
        h.push(if use_g { g_inv.get(x).expect("chain passed through g") } else { f_total[x] });
    }
    debug_assert_eq!(g_total.len(), ny);
    let h = PointMap::total(ny, &h)?;
    if let Some((a, b)) = h.collision() {
        return Err(RigidityError::NotInjective(a, b));
    }
    Ok(h)
}

/// The 0/1 isometry `δ_x ↦ δ_{f(x)}` of an injective map.
pub fn embed_from_map(f: &[usize], target_size: usize) -> Result<IsometryData, RigidityError> {
    let map = PointMap::total(target_size, f)?;
    if let Some((a, b)) = map.collision() {
        return Err(RigidityError::NotInjective(a, b));
    }
    let mut u = SparseOperator::zeros(target_size, f.len());
    for (x, &y) in f.iter().enumerate() {
        u.set(y, x, Complex64::new(1.0, 0.0));
    }
    IsometryData::check(&u, 0.0)
}
