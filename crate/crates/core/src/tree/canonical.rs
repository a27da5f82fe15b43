use std::collections::BTreeSet;

use super::{Tree, TreeError};

/// Largest order accepted by [`enumerate_trees`].
pub const MAX_ENUMERATION_ORDER: usize = 12;

pub(super) fn centroids(tree: &Tree) -> Vec<usize> {
    let n = tree.n();
    let (parent, order) = tree.bfs(0);
    let mut size = vec![1usize; n];
    for &v in order.iter().rev() {
        if let Some(p) = parent[v] {
            size[p] += size[v];
        }
    }
    let mut out = Vec::new();
    for v in 0..n {
        let mut worst = n - size[v];
        for &w in tree.neighbors(v) {
            if parent[w] == Some(v) {
                worst = worst.max(size[w]);
            }
        }
        if 2 * worst <= n {
            out.push(v);
        }
    }
    out
}

fn encode(tree: &Tree, v: usize, from: Option<usize>) -> String {
    let mut children: Vec<String> = tree
        .neighbors(v)
        .iter()
        .filter(|&&w| Some(w) != from)
        .map(|&w| encode(tree, w, Some(v)))
        .collect();
    children.sort_unstable();
    let mut s = String::with_capacity(2 + children.iter().map(String::len).sum::<usize>());
    s.push('(');
    for c in children {
        s.push_str(&c);
    }
    s.push(')');
    s
}

pub(super) fn canonical_id(tree: &Tree) -> String {
    centroids(tree)
        .into_iter()
        .map(|c| encode(tree, c, None))
        .min()
        .expect("every tree has a centroid")
}

/// Rebuilds a tree from its parenthesis encoding, numbering vertices in preorder.
fn decode(code: &str) -> Tree {
    let mut edges = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut next = 0;
    for ch in code.chars() {
        if ch == '(' {
            if let Some(&p) = stack.last() {
                edges.push((p, next));
            }
            stack.push(next);
            next += 1;
        } else {
            stack.pop();
        }
    }
    Tree::from_edges(next, &edges).expect("encoding describes a tree")
}

/// One representative per isomorphism class of `n`-vertex trees with maximum
/// degree at most `max_degree`, sorted by canonical encoding.
///
/// Each representative is numbered in preorder of its canonical rooting.
pub fn enumerate_trees(n: usize, max_degree: usize) -> Result<Vec<Tree>, TreeError> {
    if n == 0 {
        return Err(TreeError::Empty);
    }
    if n > MAX_ENUMERATION_ORDER {
        return Err(TreeError::EnumerationBound {
            n,
            max: MAX_ENUMERATION_ORDER,
        });
    }
    let mut level: BTreeSet<String> = BTreeSet::new();
    level.insert(canonical_id(&Tree::path(1)));
    for size in 2..=n {
        let mut next = BTreeSet::new();
        for code in &level {
            let tree = decode(code);
            for v in 0..tree.n() {
                if tree.degree(v) >= max_degree {
                    continue;
                }
                let mut edges = tree.edges().to_vec();
                edges.push((v, size - 1));
                let grown = Tree::from_edges(size, &edges).expect("adding a leaf keeps a tree");
                next.insert(canonical_id(&grown));
            }
        }
        level = next;
    }
    Ok(level.iter().map(|c| decode(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_counts() {
        let counts: Vec<usize> = (1..=10).map(|n| enumerate_trees(n, n).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
        assert_eq!(enumerate_trees(4, 3).unwrap().len(), 2);
        assert_eq!(enumerate_trees(12, 11).unwrap().len(), 551);
        assert!(enumerate_trees(13, 4).is_err());
    }

    #[test]
    fn degree_bound_filters() {
        // only the path survives max degree 2
        for n in 1..=9 {
            let trees = enumerate_trees(n, 2).unwrap();
            assert_eq!(trees.len(), 1);
            assert!(trees[0].is_path());
        }
        assert!(enumerate_trees(9, 3).unwrap().iter().all(|t| t.max_degree() <= 3));
    }

    #[test]
    fn canonical_id_ignores_labelling() {
        let a = Tree::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let b = Tree::from_edges(5, &[(4, 3), (3, 2), (3, 0), (0, 1)]).unwrap();
        assert_eq!(a.canonical_id(), b.canonical_id());
        assert_ne!(a.canonical_id(), Tree::path(5).canonical_id());
        assert_eq!(Tree::path(4).centroids(), vec![1, 2]);
        assert_eq!(Tree::star(4).centroids(), vec![0]);
    }

    #[test]
    fn decode_round_trips() {
        for t in enumerate_trees(8, 7).unwrap() {
            assert_eq!(decode(&t.canonical_id()).canonical_id(), t.canonical_id());
        }
    }
}
