use serde::Serialize;
use thiserror::Error;

use super::core::degree_classes;
use super::{Core, Tree};

/// Minimum count of degree-`d` vertices that must stay outside the core
/// and inside the approximation for every non-exhausted `d`.
const KEEP_OUTSIDE: usize = 6;

/// Path length `⌈2 log⁷ n⌉` from the asymptotic setting; far too large to
/// be useful for small trees, so every function here takes `t` explicitly.
pub fn asymptotic_path_length(n: usize) -> usize {
    (2.0 * (n.max(2) as f64).ln().powi(7)).ceil() as usize
}

/// Either a leaf matching (pairs `(leaf, parent)`, distinct parents) or a
/// family of vertex-disjoint bare paths of a fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LeavesOrPaths {
    LeafMatching(Vec<(usize, usize)>),
    BarePaths(Vec<Vec<usize>>),
}

/// Maximal runs `[a, x1, ..., xk, b]` whose interior vertices all have degree 2.
fn maximal_bare_paths(tree: &Tree) -> Vec<Vec<usize>> {
    let n = tree.n();
    if n == 1 {
        return Vec::new();
    }
    let junction = |v: usize| tree.degree(v) != 2;
    let mut out = Vec::new();
    for a in (0..n).filter(|&v| junction(v)) {
        for &first in tree.neighbors(a) {
            let mut run = vec![a, first];
            let mut prev = a;
            let mut cur = first;
            while !junction(cur) {
                let next = *tree
                    .neighbors(cur)
                    .iter()
                    .find(|&&w| w != prev)
                    .expect("degree-2 vertex has a second neighbour");
                prev = cur;
                cur = next;
                run.push(cur);
            }
            if a < cur {
                out.push(run);
            }
        }
    }
    out
}

/// Vertex-disjoint bare paths with `t` edges whose interior avoids `blocked`.
fn disjoint_bare_paths(tree: &Tree, t: usize, blocked: &[bool]) -> Vec<Vec<usize>> {
    let mut used = vec![false; tree.n()];
    let mut out = Vec::new();
    for run in maximal_bare_paths(tree) {
        let mut start = 0;
        while start + t < run.len() {
            let window = &run[start..=start + t];
            let interior_ok = window[1..t].iter().all(|&v| !blocked[v]);
            if window.iter().all(|&v| !used[v]) && interior_ok {
                for &v in window {
                    used[v] = true;
                }
                out.push(window.to_vec());
                start += t + 1;
            } else {
                start += 1;
            }
        }
    }
    out
}

/// Leaf edges with pairwise distinct parents, lowest leaf index first.
fn leaf_matching(tree: &Tree, blocked: &[bool]) -> Vec<(usize, usize)> {
    let mut parent_used = vec![false; tree.n()];
    let mut out = Vec::new();
    if tree.n() < 2 {
        return out;
    }
    for leaf in tree.leaves() {
        let parent = tree.neighbors(leaf)[0];
        if !blocked[leaf] && !parent_used[parent] && tree.degree(parent) != 1 {
            parent_used[parent] = true;
            out.push((leaf, parent));
        }
    }
    if out.is_empty() && tree.n() == 2 && !blocked[0] {
        out.push((0, 1));
    }
    out
}

/// A leaf matching with at least `n/(10·Δ·t)` edges or at least `n/(10·t)`
/// disjoint bare paths of length `t`. Bare paths are preferred when their
/// bound is met.
pub fn leaves_or_bare_paths(tree: &Tree, t: usize) -> LeavesOrPaths {
    let t = t.max(1);
    let n = tree.n();
    let none = vec![false; n];
    let paths = disjoint_bare_paths(tree, t, &none);
    if !paths.is_empty() && paths.len() * 10 * t >= n {
        return LeavesOrPaths::BarePaths(paths);
    }
    let matching = leaf_matching(tree, &none);
    if matching.len() * 10 * tree.max_degree().max(1) * t >= n || paths.is_empty() {
        LeavesOrPaths::LeafMatching(matching)
    } else {
        LeavesOrPaths::BarePaths(paths)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproximationKind {
    Matching,
    Path,
}

/// A subforest of the tree obtained by deleting a leaf matching or the
/// interiors of disjoint bare paths, with its endpoint sets `U1`, `U2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Approximation {
    pub kind: ApproximationKind,
    pub kept_vertices: Vec<usize>,
    pub u1: Vec<usize>,
    pub u2: Vec<usize>,
    /// Deleted edges: the leaf edges, or every edge of every deleted path.
    pub removed_edges: Vec<(usize, usize)>,
    /// Deleted paths (path kind only).
    pub removed_paths: Vec<Vec<usize>>,
    pub t: usize,
}

impl Approximation {
    /// Vertices outside the approximation.
    pub fn removed_vertex_count(&self, n: usize) -> usize {
        n - self.kept_vertices.len()
    }

    /// Checks the ratio identities between deleted vertices `p·n`, endpoint
    /// class size `q·n` and deleted edges `r·n`, as exact integer equalities.
    pub fn ratio_identities_hold(&self, n: usize) -> bool {
        let p = self.removed_vertex_count(n);
        let q = self.u1.len();
        let r = self.removed_edges.len();
        if self.u1.len() != self.u2.len() {
            return false;
        }
        match self.kind {
            ApproximationKind::Matching => r == p && p == 2 * q,
            ApproximationKind::Path => p == (self.t - 1) * q && r == p + q,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApproximationError {
    #[error("path length t must be at least 2 for path approximations, got {0}")]
    BadLength(usize),
    #[error("no approximation avoiding the core: at most {found} removable structures")]
    NothingRemovable { found: usize },
}

/// Finds an approximation that keeps the core, preferring bare paths with
/// `t` edges and falling back to a leaf matching.
///
/// At least two structures are removed, up to `2⌈n/(40t)⌉` paths or
/// `2⌈n/(40Δt)⌉` leaf edges, stopping early rather than leaving fewer than
/// six vertices of a non-exhausted degree in `V(T_appr) \ core`.
pub fn find_approximation(tree: &Tree, core: &Core, t: usize) -> Result<Approximation, ApproximationError> {
    if t < 2 {
        return Err(ApproximationError::BadLength(t));
    }
    let n = tree.n();
    let in_core = core.mask(n);
    let classes = degree_classes(tree);
    let mut spare = vec![0usize; tree.max_degree() + 1];
    for (&d, vs) in &classes {
        if !core.exhausted_degrees.contains(&d) {
            spare[d] = vs.iter().filter(|&&v| !in_core[v]).count().saturating_sub(KEEP_OUTSIDE);
        }
    }

    // path kind: only degree-2 interiors are deleted
    let path_target = (2 * n.div_ceil(40 * t)).max(2);
    let mut paths = Vec::new();
    let mut budget = spare.get(2).copied().unwrap_or(0);
    for path in disjoint_bare_paths(tree, t, &in_core) {
        if paths.len() == path_target || budget < t - 1 {
            break;
        }
        budget -= t - 1;
        paths.push(path);
    }
    if paths.len() >= 2 {
        return Ok(path_approximation(n, paths, t));
    }

    // matching kind: an even number of leaf edges
    let delta = tree.max_degree().max(1);
    let matching_target = (2 * n.div_ceil(40 * delta * t)).max(2);
    let leaf_budget = spare.get(1).copied().unwrap_or(0);
    let mut matching: Vec<(usize, usize)> = leaf_matching(tree, &in_core)
        .into_iter()
        .take(matching_target.min(leaf_budget))
        .collect();
    if matching.len() % 2 == 1 {
        matching.pop();
    }
    if matching.len() < 2 {
        return Err(ApproximationError::NothingRemovable {
            found: paths.len().max(matching.len()),
        });
    }
    Ok(matching_approximation(n, matching, t))
}

fn path_approximation(n: usize, paths: Vec<Vec<usize>>, t: usize) -> Approximation {
    let mut removed = vec![false; n];
    let mut removed_edges = Vec::new();
    for path in &paths {
        for &v in &path[1..t] {
            removed[v] = true;
        }
        for w in path.windows(2) {
            removed_edges.push((w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    Approximation {
        kind: ApproximationKind::Path,
        kept_vertices: (0..n).filter(|&v| !removed[v]).collect(),
        u1: paths.iter().map(|p| p[0]).collect(),
        u2: paths.iter().map(|p| p[t]).collect(),
        removed_edges,
        removed_paths: paths,
        t,
    }
}

fn matching_approximation(n: usize, matching: Vec<(usize, usize)>, t: usize) -> Approximation {
    let mut removed = vec![false; n];
    for &(leaf, _) in &matching {
        removed[leaf] = true;
    }
    let half = matching.len() / 2;
    Approximation {
        kind: ApproximationKind::Matching,
        kept_vertices: (0..n).filter(|&v| !removed[v]).collect(),
        u1: matching[..half].iter().map(|&(_, p)| p).collect(),
        u2: matching[half..].iter().map(|&(_, p)| p).collect(),
        removed_edges: matching.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect(),
        removed_paths: Vec::new(),
        t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::find_core;

    fn caterpillar(spine: usize, leaves_per: usize) -> Tree {
        let mut edges: Vec<_> = (1..spine).map(|i| (i - 1, i)).collect();
        let mut next = spine;
        for s in 0..spine {
            for _ in 0..leaves_per {
                edges.push((s, next));
                next += 1;
            }
        }
        Tree::from_edges(next, &edges).unwrap()
    }

    fn spider(legs: usize, len: usize) -> Tree {
        let mut edges = Vec::new();
        let mut next = 1;
        for _ in 0..legs {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Tree::from_edges(next, &edges).unwrap()
    }

    fn check_bare(tree: &Tree, paths: &[Vec<usize>], t: usize) {
        let mut seen = vec![false; tree.n()];
        for p in paths {
            assert_eq!(p.len(), t + 1);
            for w in p.windows(2) {
                assert!(tree.has_edge(w[0], w[1]));
            }
            for &v in &p[1..t] {
                assert_eq!(tree.degree(v), 2);
            }
            for &v in p {
                assert!(!seen[v]);
                seen[v] = true;
            }
        }
    }

    #[test]
    fn long_path_gives_bare_paths() {
        let p = Tree::path(20);
        match leaves_or_bare_paths(&p, 3) {
            LeavesOrPaths::BarePaths(paths) => {
                assert!(!paths.is_empty() && paths.len() * 30 >= 20);
                check_bare(&p, &paths, 3);
            }
            other => panic!("expected bare paths, got {other:?}"),
        }
    }

    #[test]
    fn star_gives_leaf_matching() {
        let s = Tree::star(9);
        match leaves_or_bare_paths(&s, 3) {
            LeavesOrPaths::LeafMatching(m) => assert!(m.len() * 10 * 9 * 3 >= 10),
            other => panic!("expected a leaf matching, got {other:?}"),
        }
    }

    #[test]
    fn spider_gives_bare_paths() {
        let s = spider(3, 5);
        match leaves_or_bare_paths(&s, 4) {
            LeavesOrPaths::BarePaths(paths) => {
                assert!(paths.len() * 40 >= s.n());
                check_bare(&s, &paths, 4);
            }
            other => panic!("expected bare paths, got {other:?}"),
        }
    }

    #[test]
    fn path_approximation_avoids_core() {
        let p = Tree::path(60);
        let core = find_core(&p, None).unwrap();
        let appr = find_approximation(&p, &core, 3).unwrap();
        assert_eq!(appr.kind, ApproximationKind::Path);
        assert!(appr.removed_paths.len() >= 2);
        assert!(core.vertices.iter().all(|v| appr.kept_vertices.contains(v)));
        assert!(appr.ratio_identities_hold(60));
        check_bare(&p, &appr.removed_paths, 3);
        let spare_deg2 = appr
            .kept_vertices
            .iter()
            .filter(|&&v| p.degree(v) == 2 && !core.contains(v))
            .count();
        assert!(spare_deg2 >= 6);
    }

    #[test]
    fn caterpillar_gives_matching_approximation() {
        let c = caterpillar(10, 2);
        assert_eq!(c.leaves().len(), 20);
        let core = find_core(&c, None).unwrap();
        let appr = find_approximation(&c, &core, 3).unwrap();
        assert_eq!(appr.kind, ApproximationKind::Matching);
        assert!(appr.removed_edges.len() >= 2 && appr.removed_edges.len().is_multiple_of(2));
        assert!(appr.ratio_identities_hold(c.n()));
        assert!(core.vertices.iter().all(|v| appr.kept_vertices.contains(v)));
    }

    #[test]
    fn whole_tree_core_leaves_nothing() {
        let s = Tree::star(4);
        let core = find_core(&s, None).unwrap();
        assert!(matches!(
            find_approximation(&s, &core, 3),
            Err(ApproximationError::NothingRemovable { .. })
        ));
    }
}
