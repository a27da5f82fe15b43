use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use super::Tree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("component size bound m={m} must satisfy 1 <= m <= n/10 for n={n}")]
    BoundOutOfRange { m: usize, n: usize },
    #[error("forest component of size {size} exceeds m={m}")]
    ComponentTooLarge { size: usize, m: usize },
    #[error("invalid forest: {0}")]
    InvalidForest(String),
    #[error("vertex {0} lies in none or several of the three parts")]
    BadPartition(usize),
}

/// An acyclic graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Forest {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, DecomposeError> {
        let mut adj = vec![Vec::new(); n];
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut stored = Vec::new();
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(DecomposeError::InvalidForest(format!("bad edge {u}-{v}")));
            }
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return Err(DecomposeError::InvalidForest(format!("cycle at {u}-{v}")));
            }
            parent[a] = b;
            adj[u].push(v);
            adj[v].push(u);
            stored.push((u.min(v), u.max(v)));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Forest { adj, edges: stored })
    }

    /// `T - removed`, keeping the original vertex numbering.
    pub fn tree_minus(tree: &Tree, removed: &[usize]) -> Self {
        let mut gone = vec![false; tree.n()];
        for &v in removed {
            gone[v] = true;
        }
        let edges: Vec<_> = tree
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| !gone[u] && !gone[v])
            .collect();
        Forest::from_edges(tree.n(), &edges).expect("subgraph of a tree is a forest")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Components, each as a sorted vertex list, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                for &w in &self.adj[comp[i]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Component sizes of `T - removed`, ignoring the removed vertices.
pub fn component_sizes_without(tree: &Tree, removed: &[usize]) -> Vec<usize> {
    let mut gone = vec![false; tree.n()];
    for &v in removed {
        gone[v] = true;
    }
    Forest::tree_minus(tree, removed)
        .components()
        .into_iter()
        .filter(|c| !gone[c[0]] || c.len() > 1)
        .map(|c| c.len())
        .collect()
}

/// A set `I` with `|I| <= 3n/m` such that every component of `T - I` has at
/// most `m` vertices.
///
/// Repeatedly takes the deepest vertex `v` with at least `⌈m/3⌉`
/// descendants, detaches child subtrees of `v` until at least `⌈m/3⌉`
/// vertices are cut off (each child subtree has fewer than `⌈m/3⌉`
/// descendants, so at most `2⌈m/3⌉ <= m` vertices go), and adds `v` to `I`.
/// For `m = 1` the smaller side of the bipartition is returned.
pub fn split_small_components(tree: &Tree, m: usize) -> Result<Vec<usize>, DecomposeError> {
    let n = tree.n();
    if m == 0 || 10 * m > n {
        return Err(DecomposeError::BoundOutOfRange { m, n });
    }
    if m == 1 {
        let (parent, order) = tree.bfs(0);
        let mut depth = vec![0usize; n];
        for &v in &order {
            if let Some(p) = parent[v] {
                depth[v] = depth[p] + 1;
            }
        }
        let even: Vec<usize> = (0..n).filter(|&v| depth[v].is_multiple_of(2)).collect();
        let odd: Vec<usize> = (0..n).filter(|&v| depth[v] % 2 == 1).collect();
        return Ok(if even.len() <= odd.len() { even } else { odd });
    }

    let target = m.div_ceil(3);
    let (parent, order) = tree.bfs(0);
    let mut alive = vec![true; n];
    let mut remaining = n;
    let mut cut: BTreeSet<usize> = BTreeSet::new();
    while remaining > m {
        // live descendant counts, children before parents
        let mut desc = vec![0usize; n];
        for &v in order.iter().rev() {
            if !alive[v] {
                continue;
            }
            if let Some(p) = parent[v] {
                desc[p] += desc[v] + 1;
            }
        }
        let v = *order
            .iter()
            .rev()
            .find(|&&v| alive[v] && desc[v] >= target)
            .expect("the root has enough descendants");
        let mut detached = 0;
        for &c in tree.neighbors(v) {
            if parent[c] != Some(v) || !alive[c] {
                continue;
            }
            let size = desc[c] + 1;
            let mut stack = vec![c];
            while let Some(x) = stack.pop() {
                alive[x] = false;
                for &y in tree.neighbors(x) {
                    if parent[y] == Some(x) && alive[y] {
                        stack.push(y);
                    }
                }
            }
            detached += size;
            if detached >= target {
                break;
            }
        }
        remaining -= detached;
        cut.insert(v);
    }
    Ok(cut.into_iter().collect())
}

/// Layers `V_0, V_1, ...` of a forest with matchings `M_i` (`M_0` empty)
/// such that every edge of `M_i` joins `V_i` to an earlier layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeredDecomposition {
    pub layers: Vec<Vec<usize>>,
    pub matchings: Vec<Vec<(usize, usize)>>,
}

impl LayeredDecomposition {
    /// Checks the layering against `forest`: the layers partition the
    /// vertices, each `M_i` is a matching from `V_i` into earlier layers,
    /// and the matchings together are exactly the edge set.
    pub fn is_valid_for(&self, forest: &Forest) -> bool {
        let n = forest.n();
        let mut layer_of = vec![usize::MAX; n];
        for (i, layer) in self.layers.iter().enumerate() {
            for &v in layer {
                if v >= n || layer_of[v] != usize::MAX {
                    return false;
                }
                layer_of[v] = i;
            }
        }
        if layer_of.contains(&usize::MAX) || self.matchings.len() != self.layers.len() {
            return false;
        }
        let mut all = Vec::new();
        for (i, m) in self.matchings.iter().enumerate() {
            let mut touched = BTreeSet::new();
            for &(a, b) in m {
                if layer_of[a] != i || layer_of[b] >= i {
                    return false;
                }
                if !touched.insert(a) || !touched.insert(b) {
                    return false;
                }
                all.push((a.min(b), a.max(b)));
            }
        }
        let mut expected = forest.edges().to_vec();
        expected.sort_unstable();
        all.sort_unstable();
        all == expected
    }
}

/// Peels one lowest-index leaf from every component with an edge left, so a
/// forest whose components have at most `m` vertices needs at most `m`
/// layers. With `parts`, each peeled layer is split by part, so every layer
/// lies inside one part and there are at most `3m` layers.
pub fn layered_matching_decomposition(
    forest: &Forest,
    m: usize,
    parts: Option<&[Vec<usize>; 3]>,
) -> Result<LayeredDecomposition, DecomposeError> {
    let n = forest.n();
    let components = forest.components();
    if let Some(big) = components.iter().find(|c| c.len() > m) {
        return Err(DecomposeError::ComponentTooLarge { size: big.len(), m });
    }
    let part_of = match parts {
        Some(parts) => {
            let mut part_of = vec![usize::MAX; n];
            for (j, part) in parts.iter().enumerate() {
                for &v in part {
                    if v >= n || part_of[v] != usize::MAX {
                        return Err(DecomposeError::BadPartition(v));
                    }
                    part_of[v] = j;
                }
            }
            if let Some(v) = part_of.iter().position(|&j| j == usize::MAX) {
                return Err(DecomposeError::BadPartition(v));
            }
            Some(part_of)
        }
        None => None,
    };

    let mut degree: Vec<usize> = forest.adj.iter().map(Vec::len).collect();
    let mut alive = vec![true; n];
    let mut comps: Vec<Vec<usize>> = components;
    // peeled[r] lists (leaf, neighbour) removed in round r
    let mut peeled: Vec<Vec<(usize, usize)>> = Vec::new();
    loop {
        let mut round = Vec::new();
        for comp in &mut comps {
            if comp.len() < 2 {
                continue;
            }
            let pos = comp
                .iter()
                .position(|&v| degree[v] == 1)
                .expect("a tree with an edge has a leaf");
            let leaf = comp.remove(pos);
            let nb = *forest.adj[leaf]
                .iter()
                .find(|&&w| alive[w])
                .expect("leaf has a live neighbour");
            alive[leaf] = false;
            degree[nb] -= 1;
            round.push((leaf, nb));
        }
        if round.is_empty() {
            break;
        }
        peeled.push(round);
    }

    let roots: Vec<usize> = comps.into_iter().flatten().collect();
    // (layer vertices, matching into earlier layers)
    type Layer = (Vec<usize>, Vec<(usize, usize)>);
    let mut raw_layers: Vec<Layer> = vec![(roots.clone(), Vec::new())];
    for round in peeled.into_iter().rev() {
        let vs = round.iter().map(|&(l, _)| l).collect();
        raw_layers.push((vs, round));
    }

    let mut layers = Vec::new();
    let mut matchings = Vec::new();
    for (vs, edges) in raw_layers {
        match &part_of {
            None => {
                layers.push(vs);
                matchings.push(edges);
            }
            Some(part_of) => {
                for j in 0..3 {
                    let sub: Vec<usize> = vs.iter().copied().filter(|&v| part_of[v] == j).collect();
                    if sub.is_empty() {
                        continue;
                    }
                    let sub_edges = edges.iter().copied().filter(|&(l, _)| part_of[l] == j).collect();
                    layers.push(sub);
                    matchings.push(sub_edges);
                }
            }
        }
    }
    if layers.is_empty() {
        layers.push(Vec::new());
        matchings.push(Vec::new());
    }
    Ok(LayeredDecomposition { layers, matchings })
}
