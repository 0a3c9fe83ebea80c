//! Maximum bipartite matching (Hopcroft–Karp) and Hall selectors.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

const FREE: usize = usize::MAX;

/// A maximum matching between `left` and `right` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub left_to_right: Vec<Option<usize>>,
    pub right_to_left: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.left_to_right.iter().filter(|m| m.is_some()).count()
    }
}

/// Hopcroft–Karp on adjacency lists `adj[l] = right neighbours of l`.
pub fn maximum_matching(adj: &[Vec<usize>], right: usize) -> Matching {
    let left = adj.len();
    let mut ml = vec![FREE; left];
    let mut mr = vec![FREE; right];
    let mut dist = vec![0usize; left];
    loop {
        // layered BFS from free left vertices
        let mut queue = VecDeque::new();
        for l in 0..left {
            if ml[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = mr[r];
                if next == FREE {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        for l in 0..left {
            if ml[l] == FREE {
                augment(adj, &mut ml, &mut mr, &mut dist, l);
            }
        }
    }
    let wrap = |v: Vec<usize>| v.into_iter().map(|m| (m != FREE).then_some(m)).collect();
    Matching {
        left_to_right: wrap(ml),
        right_to_left: wrap(mr),
    }
}

fn augment(adj: &[Vec<usize>], ml: &mut [usize], mr: &mut [usize], dist: &mut [usize], l: usize) -> bool {
    for &r in &adj[l] {
        let next = mr[r];
        let ok = next == FREE
            || (dist[next] == dist[l].wrapping_add(1) && augment(adj, ml, mr, dist, next));
        if ok {
            ml[l] = r;
            mr[r] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

/// Left vertices reachable from free left vertices by alternating paths.
/// When the matching is maximum and some left vertex is free, this set `L`
/// has `|N(L)| < |L|`.
pub fn alternating_reach(adj: &[Vec<usize>], m: &Matching) -> BTreeSet<usize> {
    let mut seen_left = BTreeSet::new();
    let mut seen_right = BTreeSet::new();
    let mut queue: VecDeque<usize> = (0..adj.len()).filter(|&l| m.left_to_right[l].is_none()).collect();
    seen_left.extend(queue.iter().copied());
    while let Some(l) = queue.pop_front() {
        for &r in &adj[l] {
            if seen_right.insert(r) {
                if let Some(next) = m.right_to_left[r] {
                    if seen_left.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    seen_left
}

/// Outcome of searching for a system of distinct representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SelectorResult {
    /// `selector[i] ∈ family[i]`, pairwise distinct.
    Selector { selector: Vec<usize> },
    /// Family indices whose union is smaller than their number.
    Deficiency { sets: Vec<usize>, union: Vec<usize> },
}

impl SelectorResult {
    pub fn selector(&self) -> Option<&[usize]> {
        match self {
            SelectorResult::Selector { selector } => Some(selector),
            SelectorResult::Deficiency { .. } => None,
        }
    }
}

/// Injective selector for a finite family of finite sets, or a subfamily
/// violating Hall's condition read off the alternating-reachability cut.
pub fn hall_selector(family: &[BTreeSet<usize>]) -> SelectorResult {
    let universe = family
        .iter()
        .flat_map(|s| s.iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    let adj: Vec<Vec<usize>> = family.iter().map(|s| s.iter().copied().collect()).collect();
    let m = maximum_matching(&adj, universe);
    if m.size() == family.len() {
        return SelectorResult::Selector {
            selector: m.left_to_right.iter().map(|r| r.expect("perfect on left")).collect(),
        };
    }
    let sets = alternating_reach(&adj, &m);
    let union: BTreeSet<usize> = sets.iter().flat_map(|&i| family[i].iter().copied()).collect();
    SelectorResult::Deficiency {
        sets: sets.into_iter().collect(),
        union: union.into_iter().collect(),
    }
}
