//! Trees on vertices `0..n`, with enumeration, cores, approximations and
//! the small-component decompositions.

mod approx;
mod canonical;
mod core;
mod decompose;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use self::approx::{
    asymptotic_path_length, find_approximation, leaves_or_bare_paths, Approximation, ApproximationError,
    ApproximationKind, LeavesOrPaths,
};
pub use self::canonical::{enumerate_trees, MAX_ENUMERATION_ORDER};
pub use self::core::{find_core, find_independent_core, Core, CoreError};
pub use self::decompose::{
    component_sizes_without, layered_matching_decomposition, split_small_components, DecomposeError, Forest,
    LayeredDecomposition,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("malformed tree text: {0}")]
    Malformed(String),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge {0}-{1} closes a cycle")]
    Cycle(usize, usize),
    #[error("graph is disconnected: {edges} edges on {n} vertices")]
    Disconnected { n: usize, edges: usize },
    #[error("tree enumeration is limited to n <= {max}, got {n}")]
    EnumerationBound { n: usize, max: usize },
}

/// A finite tree on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Tree {
    /// Validates and builds a tree from `n` and an edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut seen = HashSet::new();
        let mut parent: Vec<usize> = (0..n).collect();
        let mut adj = vec![Vec::new(); n];
        let mut stored = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(TreeError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(TreeError::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(TreeError::DuplicateEdge(key.0, key.1));
            }
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return Err(TreeError::Cycle(u, v));
            }
            parent[ru] = rv;
            adj[u].push(v);
            adj[v].push(u);
            stored.push(key);
        }
        if stored.len() != n - 1 {
            return Err(TreeError::Disconnected { n, edges: stored.len() });
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Tree { adj, edges: stored })
    }

    /// Decodes a Prüfer sequence over `0..len+2`.
    pub fn from_prufer(seq: &[usize]) -> Result<Self, TreeError> {
        let n = seq.len() + 2;
        let mut degree = vec![1usize; n];
        for &x in seq {
            if x >= n {
                return Err(TreeError::VertexOutOfRange { vertex: x, n });
            }
            degree[x] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        let mut leaves: std::collections::BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        for &x in seq {
            let leaf = *leaves.iter().next().expect("a leaf always remains");
            leaves.remove(&leaf);
            edges.push((leaf, x));
            degree[x] -= 1;
            if degree[x] == 1 {
                leaves.insert(x);
            }
        }
        let rest: Vec<usize> = leaves.into_iter().collect();
        edges.push((rest[0], rest[1]));
        Tree::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Tree::from_edges(n.max(1), &edges).expect("path is a tree")
    }

    /// The star `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Tree::from_edges(leaves + 1, &edges).expect("star is a tree")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.degree(v) == 1).collect()
    }

    /// True for paths, including the one- and two-vertex trees.
    pub fn is_path(&self) -> bool {
        self.n() <= 2 || self.leaves().len() == 2
    }

    pub fn even_degree_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.degree(v).is_multiple_of(2)).collect()
    }

    /// Whether the induced subgraph on `set` has a perfect matching.
    pub fn has_perfect_matching_on(&self, set: &[usize]) -> bool {
        fn go(tree: &Tree, rest: &mut Vec<usize>) -> bool {
            let Some(first) = rest.pop() else {
                return true;
            };
            for i in 0..rest.len() {
                if tree.has_edge(first, rest[i]) {
                    let other = rest.swap_remove(i);
                    let ok = go(tree, rest);
                    rest.push(other);
                    let last = rest.len() - 1;
                    rest.swap(i, last);
                    if ok {
                        rest.push(first);
                        return true;
                    }
                }
            }
            rest.push(first);
            false
        }
        if set.len() % 2 == 1 {
            return false;
        }
        let mut rest = set.to_vec();
        go(self, &mut rest)
    }

    /// Edges of the subgraph induced by vertices with `inside[v]` set.
    pub fn induced_edges(&self, inside: &[bool]) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .copied()
            .filter(|&(u, v)| inside[u] && inside[v])
            .collect()
    }

    /// Deletes a leaf and renumbers the rest; returns the new tree and, for
    /// each new index, the original vertex.
    pub fn remove_leaf(&self, leaf: usize) -> Option<(Tree, Vec<usize>)> {
        if self.n() < 2 || self.degree(leaf) != 1 {
            return None;
        }
        let old: Vec<usize> = (0..self.n()).filter(|&v| v != leaf).collect();
        let new_index = |v: usize| if v < leaf { v } else { v - 1 };
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| u != leaf && v != leaf)
            .map(|&(u, v)| (new_index(u), new_index(v)))
            .collect();
        Some((Tree::from_edges(self.n() - 1, &edges).ok()?, old))
    }

    /// Parent array of a traversal rooted at `root` (`None` at the root),
    /// together with the BFS order.
    pub fn bfs(&self, root: usize) -> (Vec<Option<usize>>, Vec<usize>) {
        let mut parent = vec![None; self.n()];
        let mut seen = vec![false; self.n()];
        let mut order = Vec::with_capacity(self.n());
        seen[root] = true;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    order.push(w);
                }
            }
        }
        (parent, order)
    }

    /// Edge-list text: `n` on the first line, then one `u v` per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// AHU encoding rooted at the centroid; equal for isomorphic trees.
    pub fn canonical_id(&self) -> String {
        canonical::canonical_id(self)
    }

    pub fn centroids(&self) -> Vec<usize> {
        canonical::centroids(self)
    }
}

impl FromStr for Tree {
    type Err = TreeError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| TreeError::Malformed("missing vertex count".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| TreeError::Malformed(format!("bad vertex count {header:?}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| TreeError::Malformed(format!("bad edge line {line:?}")))?;
            match nums[..] {
                [u, v] => edges.push((u, v)),
                _ => return Err(TreeError::Malformed(format!("bad edge line {line:?}"))),
            }
        }
        Tree::from_edges(n, &edges)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

/// Parses a comma-separated Prüfer sequence, e.g. `1,1`.
pub fn parse_prufer(text: &str) -> Result<Tree, TreeError> {
    let text = text.trim();
    let seq: Vec<usize> = if text.is_empty() {
        Vec::new()
    } else {
        text.split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| TreeError::Malformed(format!("bad Prüfer sequence {text:?}")))?
    };
    Tree::from_prufer(&seq)
}
