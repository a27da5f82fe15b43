//! Orthogonal double covers of `K_{2^k}` built from the translates of a
//! rainbow tree in `K_{Z_2^k}`.
//!
//! Over `Z_2^k` translation preserves colours (`2g = 0`), so two translates
//! `f(T)+g` and `f(T)+h` share exactly the edge of colour `g+h`, and every
//! edge of `K_{2^k}` lies in exactly two translates.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cayley::{verify_rainbow, CayleyError, Embedding, TargetSets};
use crate::group::GroupSpec;
use crate::tree::Tree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OdcError {
    #[error("{0} is not Z_2^k with k >= 2")]
    NotElementaryTwo(String),
    #[error("tree has {tree} vertices but the group has order {group}")]
    OrderMismatch { tree: usize, group: usize },
    #[error("embedding is not rainbow")]
    NotRainbow,
    #[error(transparent)]
    Cayley(#[from] CayleyError),
}

pub type Edge = (u32, u32);

/// `2^k` spanning subgraphs of `K_{2^k}`, each a sorted edge list over the
/// element indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub group: GroupSpec,
    /// Canonical code of the tree every copy should be isomorphic to.
    pub base_id: String,
    pub copies: Vec<Vec<Edge>>,
}

impl Cover {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cover serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OdcViolation {
    /// Copies `i` and `j` share `common` edges instead of one.
    Intersection { i: usize, j: usize, common: usize },
    /// An edge of the complete graph covered `count` times instead of twice.
    Coverage { edge: Edge, count: usize },
    /// A copy is not a spanning tree isomorphic to the base tree.
    NotIsomorphic { copy: usize },
    /// A copy uses a vertex outside the group or a loop.
    BadEdge { copy: usize, edge: Edge },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OdcReport {
    pub verdict: bool,
    pub copies: usize,
    /// Sum of the copies' edge counts; `2·e(K_n)` for a valid cover.
    pub edge_slots: usize,
    pub violations: Vec<OdcViolation>,
}

impl OdcReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn normalized(a: u32, b: u32) -> Edge {
    (a.min(b), a.max(b))
}

/// The `2^k` translates `f(T) + g`.
pub fn translates_cover(tree: &Tree, f: &Embedding) -> Result<Cover, OdcError> {
    let spec = f.spec();
    if !spec.is_elementary_two_rank_at_least_two() {
        return Err(OdcError::NotElementaryTwo(spec.to_string()));
    }
    if tree.n() != spec.order() {
        return Err(OdcError::OrderMismatch {
            tree: tree.n(),
            group: spec.order(),
        });
    }
    if !verify_rainbow(tree, f, &TargetSets::full_minus_zero(spec))?.verdict {
        return Err(OdcError::NotRainbow);
    }
    let images = f.total_images()?;
    let copies = spec
        .elements()
        .map(|g| {
            let mut edges: Vec<Edge> = tree
                .edges()
                .iter()
                .map(|&(u, v)| normalized(spec.add(images[u], g).index(), spec.add(images[v], g).index()))
                .collect();
            edges.sort_unstable();
            edges
        })
        .collect();
    Ok(Cover {
        group: spec.clone(),
        base_id: tree.canonical_id(),
        copies,
    })
}

fn common_edges(a: &[Edge], b: &[Edge]) -> usize {
    // Both lists are sorted and duplicate-free.
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Exhaustive check: pairwise intersections of size one, every edge covered
/// twice, and every copy isomorphic to the base tree.
pub fn verify_odc(cover: &Cover) -> OdcReport {
    let n = cover.group.order();
    let mut copies: Vec<Vec<Edge>> = cover.copies.clone();
    for c in &mut copies {
        for e in c.iter_mut() {
            *e = normalized(e.0, e.1);
        }
        c.sort_unstable();
        c.dedup();
    }
    let mut violations = Vec::new();

    for (i, c) in copies.iter().enumerate() {
        if let Some(&edge) = c.iter().find(|&&(a, b)| a == b || b as usize >= n) {
            violations.push(OdcViolation::BadEdge { copy: i, edge });
            continue;
        }
        let edges: Vec<(usize, usize)> = c.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
        let iso = Tree::from_edges(n, &edges).is_ok_and(|t| t.canonical_id() == cover.base_id);
        if !iso {
            violations.push(OdcViolation::NotIsomorphic { copy: i });
        }
    }

    let pairs: Vec<OdcViolation> = (0..copies.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let copies = &copies;
            (i + 1..copies.len()).filter_map(move |j| {
                let common = common_edges(&copies[i], &copies[j]);
                (common != 1).then_some(OdcViolation::Intersection { i, j, common })
            })
        })
        .collect();
    violations.extend(pairs);

    let mut count = vec![0usize; n * n];
    for c in &copies {
        for &(a, b) in c.iter().filter(|&&(a, b)| a != b && (b as usize) < n) {
            count[a as usize * n + b as usize] += 1;
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let k = count[a * n + b];
            if k != 2 {
                violations.push(OdcViolation::Coverage {
                    edge: (a as u32, b as u32),
                    count: k,
                });
            }
        }
    }

    OdcReport {
        verdict: violations.is_empty(),
        copies: copies.len(),
        edge_slots: cover.copies.iter().map(Vec::len).sum(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;
    use crate::solve::{find_rainbow, SearchConfig, SolveOutcome};

    fn star_cover() -> Cover {
        let spec = GroupSpec::elementary_two(2).unwrap();
        let f = Embedding::from_images(spec.clone(), spec.elements().collect()).unwrap();
        translates_cover(&Tree::star(3), &f).unwrap()
    }

    #[test]
    fn k4_star_cover_is_the_stars() {
        let cover = star_cover();
        assert_eq!(cover.copies.len(), 4);
        for (g, copy) in cover.copies.iter().enumerate() {
            let g = g as u32;
            let mut star: Vec<Edge> = (0..4).filter(|&h| h != g).map(|h| normalized(g, h)).collect();
            star.sort();
            assert_eq!(copy, &star);
        }
        let report = verify_odc(&cover);
        assert!(report.verdict, "{:?}", report.violations);
        assert_eq!(report.edge_slots, 4 * 3);
    }

    #[test]
    fn star_copies_share_their_connecting_edge() {
        let cover = star_cover();
        for g in 0..4u32 {
            for h in g + 1..4 {
                let a = &cover.copies[g as usize];
                let b = &cover.copies[h as usize];
                let shared: Vec<_> = a.iter().filter(|e| b.contains(e)).collect();
                assert_eq!(shared, vec![&(g, h)]);
            }
        }
    }

    #[test]
    fn duplicate_copies_fail() {
        let mut cover = star_cover();
        cover.copies[1] = cover.copies[0].clone();
        let report = verify_odc(&cover);
        assert!(!report.verdict);
        assert!(report
            .violations
            .contains(&OdcViolation::Intersection { i: 0, j: 1, common: 3 }));
    }

    #[test]
    fn solver_tree_in_z2_cubed() {
        let spec = GroupSpec::elementary_two(3).unwrap();
        // Legs of lengths 1, 2 and 4: the even-degree vertices have no perfect matching.
        let t = Tree::from_edges(8, &[(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6), (6, 7)]).unwrap();
        let f = match find_rainbow(&t, &spec, &TargetSets::full_minus_zero(&spec), &SearchConfig::decide()).unwrap() {
            SolveOutcome::Found(f) => f,
            other => panic!("{other:?}"),
        };
        let cover = translates_cover(&t, &f).unwrap();
        let report = verify_odc(&cover);
        assert!(report.verdict, "{:?}", report.violations);
        assert_eq!(report.edge_slots, 8 * 7);
    }

    #[test]
    fn rejects_bad_inputs() {
        let z4 = GroupSpec::cyclic(4).unwrap();
        let f = Embedding::from_images(z4.clone(), z4.elements().collect()).unwrap();
        assert!(matches!(
            translates_cover(&Tree::path(4), &f),
            Err(OdcError::NotElementaryTwo(_))
        ));
        let spec = GroupSpec::elementary_two(2).unwrap();
        let e = GroupElement::from_index;
        let path = Embedding::from_images(spec, vec![e(0), e(1), e(2), e(3)]).unwrap();
        assert_eq!(translates_cover(&Tree::path(4), &path), Err(OdcError::NotRainbow));
    }
}
