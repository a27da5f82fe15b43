use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use super::Tree;

/// Vertex counts at or below this are taken whole into a core.
const TAKE_ALL: usize = 12;
/// Vertices of a non-exhausted degree kept inside, and required outside.
const SAMPLE: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("requested core size {requested} is below the minimum {minimum}")]
    TooSmall { requested: usize, minimum: usize },
    #[error("cannot pad to {requested}: at most {available} vertices are available while keeping {SAMPLE} outside")]
    CannotPad { requested: usize, available: usize },
}

/// A vertex subset such that every degree is either exhausted (all vertices
/// of that degree inside) or has at least six vertices on each side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Core {
    pub vertices: Vec<usize>,
    pub exhausted_degrees: BTreeSet<usize>,
}

impl Core {
    /// Builds a core from a vertex set, deriving the exhausted degrees.
    pub fn from_vertices(tree: &Tree, vertices: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = vertices.into_iter().collect();
        let by_degree = degree_classes(tree);
        let exhausted_degrees = by_degree
            .iter()
            .filter(|(_, vs)| vs.iter().all(|v| set.contains(v)))
            .map(|(&d, _)| d)
            .collect();
        Core {
            vertices: set.into_iter().collect(),
            exhausted_degrees,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut inside = vec![false; n];
        for &v in &self.vertices {
            inside[v] = true;
        }
        inside
    }

    /// Checks the per-degree rule and that `exhausted_degrees` is accurate.
    pub fn is_valid_for(&self, tree: &Tree) -> bool {
        if self.vertices.windows(2).any(|w| w[0] >= w[1]) || self.vertices.iter().any(|&v| v >= tree.n()) {
            return false;
        }
        let mut derived = BTreeSet::new();
        for (d, vs) in degree_classes(tree) {
            let inside = vs.iter().filter(|&&v| self.contains(v)).count();
            if inside == vs.len() {
                derived.insert(d);
            } else if inside < SAMPLE || vs.len() - inside < SAMPLE {
                return false;
            }
        }
        derived == self.exhausted_degrees
    }

    /// Non-exhausted degrees that occur in the tree.
    pub fn open_degrees(&self, tree: &Tree) -> Vec<usize> {
        degree_classes(tree)
            .into_keys()
            .filter(|d| !self.exhausted_degrees.contains(d))
            .collect()
    }
}

pub(super) fn degree_classes(tree: &Tree) -> BTreeMap<usize, Vec<usize>> {
    let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..tree.n() {
        by_degree.entry(tree.degree(v)).or_default().push(v);
    }
    by_degree
}

/// The smallest core: every degree with at most twelve vertices is taken
/// whole, every other degree contributes its six lowest-index vertices.
///
/// With `exact_size`, the core is padded with further vertices of the most
/// frequent degree, keeping at least six of that degree outside.
pub fn find_core(tree: &Tree, exact_size: Option<usize>) -> Result<Core, CoreError> {
    let classes = degree_classes(tree);
    let mut inside: BTreeSet<usize> = BTreeSet::new();
    for vs in classes.values() {
        let take = if vs.len() <= TAKE_ALL { vs.len() } else { SAMPLE };
        inside.extend(&vs[..take]);
    }
    if let Some(requested) = exact_size {
        if requested < inside.len() {
            return Err(CoreError::TooSmall {
                requested,
                minimum: inside.len(),
            });
        }
        let extra = requested - inside.len();
        if extra > 0 {
            // most frequent degree, lowest degree on ties
            let (_, popular) = classes
                .iter()
                .filter(|(_, vs)| vs.len() > TAKE_ALL)
                .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(a.0)))
                .ok_or(CoreError::CannotPad {
                    requested,
                    available: inside.len(),
                })?;
            let available = popular.len() - 2 * SAMPLE;
            if extra > available {
                return Err(CoreError::CannotPad {
                    requested,
                    available: inside.len() + available,
                });
            }
            inside.extend(&popular[SAMPLE..SAMPLE + extra]);
        }
    }
    Ok(Core::from_vertices(tree, inside))
}

/// A core whose vertices are pairwise nonadjacent, chosen greedily by lowest
/// index; `None` when an exhausted degree class is not independent or a
/// class has too few usable vertices.
pub fn find_independent_core(tree: &Tree) -> Option<Core> {
    let classes = degree_classes(tree);
    let mut inside = vec![false; tree.n()];
    let blocked = |inside: &[bool], v: usize| tree.neighbors(v).iter().any(|&w| inside[w]);
    for vs in classes.values().filter(|vs| vs.len() <= TAKE_ALL) {
        for &v in vs {
            if blocked(&inside, v) {
                return None;
            }
            inside[v] = true;
        }
    }
    for vs in classes.values().filter(|vs| vs.len() > TAKE_ALL) {
        let mut taken = 0;
        for &v in vs {
            if taken == SAMPLE {
                break;
            }
            if !blocked(&inside, v) {
                inside[v] = true;
                taken += 1;
            }
        }
        if taken < SAMPLE {
            return None;
        }
    }
    let core = Core::from_vertices(tree, (0..tree.n()).filter(|&v| inside[v]));
    core.is_valid_for(tree).then_some(core)
}
