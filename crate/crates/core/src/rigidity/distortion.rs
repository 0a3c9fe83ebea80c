//! Distortion tables and closeness of maps between filtered ground sets.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::locators::Locators;
use super::maps::PointMap;
use super::RigidityError;
use crate::coarse::{CoarseFiltration, MembershipCertificate, Relation};
use crate::combinatorics::locator_union;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistortionEntry {
    pub k: usize,
    pub certificate: MembershipCertificate,
}

impl DistortionEntry {
    pub fn level(&self) -> Option<usize> {
        self.certificate.level()
    }
}

/// `forward[k]`: least `k'` with `(f×f)[level_X(k)] ⊆ level_Y(k')`.
/// `backward[k]`: least `k''` with `(f×f)⁻¹[level_Y(k)] ⊆ level_X(k'')`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub forward: Vec<DistortionEntry>,
    pub backward: Vec<DistortionEntry>,
}

impl DistortionReport {
    /// Every forward entry contained: the map is bounded up to the cap.
    pub fn is_bounded(&self) -> bool {
        self.forward.iter().all(|e| e.certificate.is_contained())
    }

    /// Every backward entry contained: the map is expanding up to the cap.
    pub fn is_expanding(&self) -> bool {
        self.backward.iter().all(|e| e.certificate.is_contained())
    }

    pub fn is_coarse_embedding(&self) -> bool {
        self.is_bounded() && self.is_expanding()
    }

    /// Levels never decrease and a refusal is never followed by a success.
    pub fn is_monotone(&self) -> bool {
        fn mono(t: &[DistortionEntry]) -> bool {
            t.windows(2).all(|w| match (w[0].level(), w[1].level()) {
                (Some(a), Some(b)) => a <= b,
                (None, Some(_)) => false,
                _ => true,
            })
        }
        mono(&self.forward) && mono(&self.backward)
    }
}

fn check_shapes(map: &PointMap, source: &CoarseFiltration, target: &CoarseFiltration) -> Result<(), RigidityError> {
    if map.domain_size() != source.size() {
        return Err(RigidityError::DomainMismatch {
            expected: source.size(),
            got: map.domain_size(),
        });
    }
    if map.codomain != target.size() {
        return Err(RigidityError::DomainMismatch {
            expected: target.size(),
            got: map.codomain,
        });
    }
    Ok(())
}

/// Fills both distortion tables for `k = 0..=k_max` (clipped to each
/// filtration's cap). Undefined points of a partial map are ignored.
pub fn verify_coarse_expanding(
    map: &PointMap,
    source: &CoarseFiltration,
    target: &CoarseFiltration,
    k_max: usize,
) -> Result<DistortionReport, RigidityError> {
    check_shapes(map, source, target)?;
    let mut forward = Vec::new();
    for k in 0..=k_max.min(source.max_level()) {
        let level = source.level(k)?;
        let image = Relation::from_pairs(
            target.size(),
            level
                .iter()
                .filter_map(|(a, b)| Some((map.get(a)?, map.get(b)?))),
        )
        .expect("images are in range");
        forward.push(DistortionEntry {
            k,
            certificate: target.membership_level(&image)?,
        });
    }

    let mut fibres = vec![Vec::new(); target.size()];
    for x in map.domain() {
        fibres[map.get(x).expect("in domain")].push(x);
    }
    let mut backward = Vec::new();
    for k in 0..=k_max.min(target.max_level()) {
        let level = target.level(k)?;
        let mut pre = BTreeSet::new();
        for (a, b) in level.iter() {
            for &x in &fibres[a] {
                for &x2 in &fibres[b] {
                    pre.insert((x, x2));
                }
            }
        }
        let pre = Relation::from_pairs(source.size(), pre).expect("preimages are in range");
        backward.push(DistortionEntry {
            k,
            certificate: source.membership_level(&pre)?,
        });
    }
    Ok(DistortionReport { forward, backward })
}

/// Least level containing `{(a(x), b(x))}` over points where both are
/// defined.
pub fn closeness_level(
    a: &PointMap,
    b: &PointMap,
    filtration: &CoarseFiltration,
) -> Result<MembershipCertificate, RigidityError> {
    for m in [a, b] {
        if m.codomain != filtration.size() {
            return Err(RigidityError::DomainMismatch {
                expected: filtration.size(),
                got: m.codomain,
            });
        }
    }
    let pairs = (0..a.domain_size().min(b.domain_size())).filter_map(|x| Some((a.get(x)?, b.get(x)?)));
    let rel = Relation::from_pairs(filtration.size(), pairs).expect("images are in range");
    Ok(filtration.membership_level(&rel)?)
}

/// Level of `⋃_x Y_{x,δ} × Y_{x,δ}` in the target.
pub fn entourage_union_level(
    loc: &Locators,
    target: &CoarseFiltration,
) -> Result<MembershipCertificate, RigidityError> {
    Ok(target.membership_level(&locator_union(loc))?)
}

/// Level of `⋃_y X_{y,δ} × X_{y,δ}` in the source.
pub fn source_union_level(
    loc: &Locators,
    source: &CoarseFiltration,
) -> Result<MembershipCertificate, RigidityError> {
    let rel = Relation::from_pairs(
        loc.source_size(),
        loc.x_of
            .iter()
            .flat_map(|xs| xs.iter().flat_map(move |&a| xs.iter().map(move |&b| (a, b)))),
    )
    .expect("locators index the source");
    Ok(source.membership_level(&rel)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarse::RefusalWitness;

    #[test]
    fn identity_has_identity_tables() {
        let f = CoarseFiltration::band(20, 1, 10).unwrap();
        let id = PointMap::total(20, &(0..20).collect::<Vec<_>>()).unwrap();
        let r = verify_coarse_expanding(&id, &f, &f, 10).unwrap();
        for (k, e) in r.forward.iter().enumerate() {
            assert_eq!(e.level(), Some(k));
        }
        assert_eq!(r.forward, r.backward);
        assert!(r.is_coarse_embedding() && r.is_monotone());
    }

    #[test]
    fn squaring_is_refused_at_level_one() {
        let source = CoarseFiltration::band(32, 1, 64).unwrap();
        let target = CoarseFiltration::band(962, 1, 10).unwrap();
        let images: Vec<usize> = (0..32).map(|x| x * x).collect();
        let sq = PointMap::total(962, &images).unwrap();
        let r = verify_coarse_expanding(&sq, &source, &target, 5).unwrap();
        assert_eq!(r.forward[0].level(), Some(0));
        match &r.forward[1].certificate {
            MembershipCertificate::Refused {
                witness: RefusalWitness::UncoveredPair { pair, max_level },
            } => {
                assert_eq!(*max_level, 10);
                let d = pair.0.abs_diff(pair.1);
                assert!(d > 10);
            }
            other => panic!("{other:?}"),
        }
        assert!(!r.is_bounded());
        assert!(r.is_monotone());
    }

    #[test]
    fn doubling_into_twice_as_many_points() {
        let source = CoarseFiltration::band(16, 1, 64).unwrap();
        let target = CoarseFiltration::band(32, 1, 64).unwrap();
        let f = PointMap::total(32, &(0..16).map(|x| 2 * x).collect::<Vec<_>>()).unwrap();
        let r = verify_coarse_expanding(&f, &source, &target, 8).unwrap();
        for e in &r.forward {
            assert_eq!(e.level(), Some(2 * e.k));
        }
        // (f×f)⁻¹[level_Y(k)] = level_X(⌊k/2⌋)
        for e in &r.backward {
            assert_eq!(e.level(), Some(e.k / 2));
        }
    }

    #[test]
    fn closeness_of_shifted_identity() {
        let f = CoarseFiltration::band(10, 1, 64).unwrap();
        let id = PointMap::total(10, &(0..10).collect::<Vec<_>>()).unwrap();
        let shift = PointMap::total(10, &(0..10).map(|x| (x + 3).min(9)).collect::<Vec<_>>()).unwrap();
        assert_eq!(closeness_level(&id, &shift, &f).unwrap().level(), Some(3));
        assert_eq!(closeness_level(&id, &id, &f).unwrap().level(), Some(0));
    }
}
