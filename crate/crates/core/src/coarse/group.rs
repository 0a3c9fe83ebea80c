//! Finite groups given by multiplication tables, and the translation-invariant
//! entourages `E_S = {(g, h) : g·h⁻¹ ∈ S}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::relation::Relation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("table is not square or is empty")]
    Shape,
    #[error("product {a}·{b} = {value} is out of range")]
    NotClosed { a: usize, b: usize, value: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("element {element} is out of range for a group of order {order}")]
    ElementOutOfRange { element: usize, order: usize },
}

/// A validated finite group; `mul[a][b] = a·b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct GroupTable {
    mul: Vec<Vec<usize>>,
    identity: usize,
    inv: Vec<usize>,
}

impl TryFrom<Vec<Vec<usize>>> for GroupTable {
    type Error = GroupError;
    fn try_from(t: Vec<Vec<usize>>) -> Result<Self, Self::Error> {
        GroupTable::new(t)
    }
}

impl From<GroupTable> for Vec<Vec<usize>> {
    fn from(g: GroupTable) -> Self {
        g.mul
    }
}

impl GroupTable {
    /// Validates closure, identity, inverses and associativity.
    pub fn new(mul: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = mul.len();
        if n == 0 || mul.iter().any(|row| row.len() != n) {
            return Err(GroupError::Shape);
        }
        for (a, row) in mul.iter().enumerate() {
            for (b, &value) in row.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::NotClosed { a, b, value });
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a))
            .ok_or(GroupError::NoIdentity)?;
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| mul[a][b] == identity && mul[b][a] == identity)
                .ok_or(GroupError::NoInverse(a))?;
            inv.push(b);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a][b];
                for c in 0..n {
                    if mul[ab][c] != mul[a][mul[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(Self { mul, identity, inv })
    }

    /// `Z_n` under addition.
    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Self::new(mul).expect("cyclic table is a group")
    }

    /// The dihedral group of order `2n`. Element `e·n + k` encodes `r^k s^e`.
    pub fn dihedral(n: usize) -> Self {
        let order = 2 * n;
        let mut mul = vec![vec![0; order]; order];
        for (x, row) in mul.iter_mut().enumerate() {
            let (e, a) = (x / n, x % n);
            for (y, slot) in row.iter_mut().enumerate() {
                let (f, b) = (y / n, y % n);
                // r^a s^e r^b s^f = r^(a ± b) s^(e+f)
                let k = if e == 0 { (a + b) % n } else { (a + n - b) % n };
                *slot = ((e + f) % 2) * n + k;
            }
        }
        Self::new(mul).expect("dihedral table is a group")
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn check_subset(&self, s: &BTreeSet<usize>) -> Result<(), GroupError> {
        match s.iter().find(|&&g| g >= self.order()) {
            Some(&element) => Err(GroupError::ElementOutOfRange {
                element,
                order: self.order(),
            }),
            None => Ok(()),
        }
    }

    /// `S·T = {st}`.
    pub fn product_set(&self, s: &BTreeSet<usize>, t: &BTreeSet<usize>) -> BTreeSet<usize> {
        s.iter()
            .flat_map(|&a| t.iter().map(move |&b| self.mul(a, b)))
            .collect()
    }

    pub fn inverse_set(&self, s: &BTreeSet<usize>) -> BTreeSet<usize> {
        s.iter().map(|&a| self.inv(a)).collect()
    }
}

/// `E_S = {(g, h) : g·h⁻¹ ∈ S}`; every section has at most `|S|` elements.
pub fn group_entourage(group: &GroupTable, s: &BTreeSet<usize>) -> Result<Relation, GroupError> {
    group.check_subset(s)?;
    let n = group.order();
    // For fixed h the pairs are (s·h, h), one per s ∈ S.
    let pairs = (0..n).flat_map(|h| s.iter().map(move |&g| (group.mul(g, h), h)));
    Ok(Relation::from_pairs(n, pairs).expect("group products are in range"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    fn brute_entourage(group: &GroupTable, s: &BTreeSet<usize>) -> Relation {
        let n = group.order();
        let mut pairs = Vec::new();
        for g in 0..n {
            for h in 0..n {
                if s.contains(&group.mul(g, group.inv(h))) {
                    pairs.push((g, h));
                }
            }
        }
        Relation::from_pairs(n, pairs).unwrap()
    }

    #[test]
    fn z4_shift_by_one() {
        let e = group_entourage(&GroupTable::cyclic(4), &set(&[1])).unwrap();
        assert_eq!(
            e,
            Relation::from_pairs(4, [(1, 0), (2, 1), (3, 2), (0, 3)]).unwrap()
        );
    }

    #[test]
    fn empty_generating_set_gives_empty_relation() {
        assert!(group_entourage(&GroupTable::cyclic(5), &set(&[]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn z12_band_matches_enumeration() {
        let g = GroupTable::cyclic(12);
        let s = set(&[0, 1, 11]);
        let e = group_entourage(&g, &s).unwrap();
        assert_eq!(e, brute_entourage(&g, &s));
        assert!(e.is_symmetric() && e.is_reflexive());
        assert_eq!(e.section_bounds(), (3, 3));
    }

    #[test]
    fn out_of_range_element_is_rejected() {
        assert!(matches!(
            group_entourage(&GroupTable::cyclic(3), &set(&[3])),
            Err(GroupError::ElementOutOfRange { element: 3, order: 3 })
        ));
    }

    #[test]
    fn invalid_tables_are_rejected() {
        assert_eq!(
            GroupTable::new(vec![vec![0, 1], vec![1, 1]]),
            Err(GroupError::NoInverse(1))
        );
        assert_eq!(GroupTable::new(vec![vec![0, 1]]), Err(GroupError::Shape));
        // a·b := b has no two-sided identity
        assert_eq!(
            GroupTable::new(vec![vec![0, 1], vec![0, 1]]),
            Err(GroupError::NoIdentity)
        );
    }

    #[test]
    fn dihedral_is_nonabelian() {
        let d4 = GroupTable::dihedral(4);
        assert_eq!(d4.order(), 8);
        let (r, s) = (1, 4);
        assert_ne!(d4.mul(r, s), d4.mul(s, r));
    }

    #[test]
    fn inverse_and_product_laws_by_enumeration() {
        let groups = [
            GroupTable::cyclic(7),
            GroupTable::cyclic(12),
            GroupTable::dihedral(4),
            GroupTable::dihedral(6),
            GroupTable::dihedral(12),
        ];
        let subsets = [set(&[1]), set(&[0, 2]), set(&[1, 3, 5]), set(&[0, 4, 6])];
        for g in &groups {
            for s in &subsets {
                let s: BTreeSet<usize> = s.iter().map(|x| x % g.order()).collect();
                let es = group_entourage(g, &s).unwrap();
                let (rows, cols) = es.section_bounds();
                assert!(rows <= s.len() && cols <= s.len());
                assert_eq!(es.inverse(), group_entourage(g, &g.inverse_set(&s)).unwrap());
                for t in &subsets {
                    let t: BTreeSet<usize> = t.iter().map(|x| x % g.order()).collect();
                    let et = group_entourage(g, &t).unwrap();
                    let est = group_entourage(g, &g.product_set(&s, &t)).unwrap();
                    assert_eq!(es.compose(&et).unwrap(), est);
                }
            }
        }
    }
}
