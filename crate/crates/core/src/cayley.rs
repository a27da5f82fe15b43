//! The complete graph `K_G` on a group, coloured by `c(xy) = x + y`, and
//! embeddings of trees into it.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupElement, GroupError, GroupSpec};
use crate::tree::Tree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyError {
    #[error("K_G has no loops: both endpoints are {0:?}")]
    Loop(GroupElement),
    #[error("embedding is partial: vertex {0} is unassigned")]
    Partial(usize),
    #[error("embedding covers {got} vertices but the tree has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("element {0:?} is assigned to two vertices")]
    NotInjective(GroupElement),
    #[error("colour 0 is not allowed as a target over Z2^k with k >= 2")]
    ZeroColorTarget,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("bad embedding JSON: {0}")]
    Json(String),
}

/// The colour of the edge `xy` in `K_G`.
pub fn color(spec: &GroupSpec, x: GroupElement, y: GroupElement) -> Result<GroupElement, CayleyError> {
    if x == y {
        return Err(CayleyError::Loop(x));
    }
    Ok(spec.add(x, y))
}

/// An injective, possibly partial, map from tree vertices to a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    spec: GroupSpec,
    map: Vec<Option<GroupElement>>,
}

impl Embedding {
    /// An empty map on `n` vertices.
    pub fn new(spec: GroupSpec, n: usize) -> Self {
        Embedding {
            spec,
            map: vec![None; n],
        }
    }

    /// A total map; fails if two vertices share an image.
    pub fn from_images(spec: GroupSpec, images: Vec<GroupElement>) -> Result<Self, CayleyError> {
        Self::from_partial(spec, images.into_iter().map(Some).collect())
    }

    pub fn from_partial(spec: GroupSpec, map: Vec<Option<GroupElement>>) -> Result<Self, CayleyError> {
        let mut seen = BTreeSet::new();
        for a in map.iter().flatten() {
            if !spec.contains(*a) {
                return Err(GroupError::SpecMismatch(spec.to_string()).into());
            }
            if !seen.insert(*a) {
                return Err(CayleyError::NotInjective(*a));
            }
        }
        Ok(Embedding { spec, map })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<GroupElement> {
        self.map[v]
    }

    /// Assigns `v`, rejecting an image already used by another vertex.
    pub fn set(&mut self, v: usize, a: GroupElement) -> Result<(), CayleyError> {
        if self.map.iter().enumerate().any(|(u, &b)| u != v && b == Some(a)) {
            return Err(CayleyError::NotInjective(a));
        }
        self.map[v] = Some(a);
        Ok(())
    }

    pub fn unset(&mut self, v: usize) {
        self.map[v] = None;
    }

    pub fn is_total(&self) -> bool {
        self.map.iter().all(Option::is_some)
    }

    pub fn as_slice(&self) -> &[Option<GroupElement>] {
        &self.map
    }

    /// Every image, failing on the first unassigned vertex.
    pub fn total_images(&self) -> Result<Vec<GroupElement>, CayleyError> {
        self.map
            .iter()
            .enumerate()
            .map(|(v, a)| a.ok_or(CayleyError::Partial(v)))
            .collect()
    }

    /// Assigned `(vertex, image)` pairs in vertex order.
    pub fn assigned(&self) -> impl Iterator<Item = (usize, GroupElement)> + '_ {
        self.map.iter().enumerate().filter_map(|(v, a)| a.map(|a| (v, a)))
    }

    pub fn image_set(&self) -> BTreeSet<GroupElement> {
        self.map.iter().flatten().copied().collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&EmbeddingJson::from(self)).expect("embedding serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CayleyError> {
        let raw: EmbeddingJson = serde_json::from_str(text).map_err(|e| CayleyError::Json(e.to_string()))?;
        raw.try_into()
    }
}

/// Wire form: `{"group": "<spec>", "map": [[vertex, [residues]], ...]}`.
#[derive(Serialize, Deserialize)]
struct EmbeddingJson {
    group: GroupSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    map: Vec<(usize, Vec<i64>)>,
}

impl From<&Embedding> for EmbeddingJson {
    fn from(f: &Embedding) -> Self {
        EmbeddingJson {
            group: f.spec.clone(),
            n: (!f.is_total()).then_some(f.len()),
            map: f
                .assigned()
                .map(|(v, a)| (v, f.spec.residues(a).into_iter().map(i64::from).collect()))
                .collect(),
        }
    }
}

impl TryFrom<EmbeddingJson> for Embedding {
    type Error = CayleyError;

    fn try_from(raw: EmbeddingJson) -> Result<Self, CayleyError> {
        let n = raw
            .n
            .unwrap_or_else(|| raw.map.iter().map(|(v, _)| v + 1).max().unwrap_or(0));
        let mut map = vec![None; n];
        for (v, residues) in &raw.map {
            if *v >= n {
                return Err(CayleyError::Json(format!("vertex {v} out of range")));
            }
            map[*v] = Some(raw.group.element(residues)?);
        }
        Embedding::from_partial(raw.group, map)
    }
}

impl Serialize for Embedding {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EmbeddingJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Embedding {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        EmbeddingJson::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

/// Allowed vertex images and allowed edge colours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetSets {
    pub v_target: BTreeSet<GroupElement>,
    pub c_target: BTreeSet<GroupElement>,
}

impl TargetSets {
    /// Builds target sets. With `zero_free_check`, colour 0 is rejected over
    /// `Z_2^k` (`k >= 2`), where no edge of `K_G` has colour 0.
    pub fn new(
        spec: &GroupSpec,
        v_target: BTreeSet<GroupElement>,
        c_target: BTreeSet<GroupElement>,
        zero_free_check: bool,
    ) -> Result<Self, CayleyError> {
        if v_target.iter().chain(&c_target).any(|&a| !spec.contains(a)) {
            return Err(GroupError::SpecMismatch(spec.to_string()).into());
        }
        if zero_free_check && spec.is_elementary_two_rank_at_least_two() && c_target.contains(&spec.identity()) {
            return Err(CayleyError::ZeroColorTarget);
        }
        Ok(TargetSets { v_target, c_target })
    }

    /// All of `G` for both vertices and colours.
    pub fn full(spec: &GroupSpec) -> Self {
        let all: BTreeSet<_> = spec.elements().collect();
        TargetSets {
            v_target: all.clone(),
            c_target: all,
        }
    }

    /// All vertices; every colour except `missing`.
    pub fn full_minus_color(spec: &GroupSpec, missing: GroupElement) -> Self {
        let mut t = Self::full(spec);
        t.c_target.remove(&missing);
        t
    }

    /// All vertices; colours `G \ {0}`.
    pub fn full_minus_zero(spec: &GroupSpec) -> Self {
        Self::full_minus_color(spec, spec.identity())
    }

    /// The default targets for spanning trees: `G \ {0}` colours over
    /// `Z_2^k` with `k >= 2`, and every colour otherwise.
    pub fn spanning_default(spec: &GroupSpec) -> Self {
        if spec.is_elementary_two_rank_at_least_two() {
            Self::full_minus_zero(spec)
        } else {
            Self::full(spec)
        }
    }

    pub fn v_is_whole_group(&self, spec: &GroupSpec) -> bool {
        self.v_target.len() == spec.order()
    }

    /// Whether `c_target + 2g = c_target` for every `g`, so translating an
    /// embedding keeps it inside the targets.
    pub fn colors_translation_closed(&self, spec: &GroupSpec) -> bool {
        let doubles: BTreeSet<_> = spec.elements().map(|g| spec.add(g, g)).collect();
        doubles
            .iter()
            .all(|&h| self.c_target.iter().all(|&c| self.c_target.contains(&spec.add(c, h))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Two vertices share an image.
    DuplicateVertexImage {
        u: usize,
        v: usize,
    },
    /// Two edges share a colour.
    DuplicateColor {
        e: (usize, usize),
        f: (usize, usize),
    },
    VertexOutsideTarget {
        v: usize,
    },
    ColorOutsideTarget {
        e: (usize, usize),
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RainbowReport {
    pub verdict: bool,
    pub violations: Vec<Violation>,
}

impl RainbowReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn edge_colors(tree: &Tree, images: &[GroupElement], spec: &GroupSpec) -> Vec<GroupElement> {
    tree.edges()
        .iter()
        .map(|&(u, v)| spec.add(images[u], images[v]))
        .collect()
}

/// Lists every injectivity, rainbow and target violation of a total map.
pub fn verify_rainbow(tree: &Tree, f: &Embedding, targets: &TargetSets) -> Result<RainbowReport, CayleyError> {
    if f.len() != tree.n() {
        return Err(CayleyError::SizeMismatch {
            expected: tree.n(),
            got: f.len(),
        });
    }
    let images = f.total_images()?;
    let spec = f.spec();
    let mut violations = Vec::new();

    let mut first_with: HashMap<GroupElement, usize> = HashMap::new();
    for (v, &a) in images.iter().enumerate() {
        match first_with.get(&a) {
            Some(&u) => violations.push(Violation::DuplicateVertexImage { u, v }),
            None => {
                first_with.insert(a, v);
            }
        }
    }
    for (v, a) in images.iter().enumerate() {
        if !targets.v_target.contains(a) {
            violations.push(Violation::VertexOutsideTarget { v });
        }
    }
    let colors = edge_colors(tree, &images, spec);
    let edges = tree.edges();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if colors[i] == colors[j] {
                violations.push(Violation::DuplicateColor {
                    e: edges[i],
                    f: edges[j],
                });
            }
        }
    }
    for (i, c) in colors.iter().enumerate() {
        if !targets.c_target.contains(c) {
            violations.push(Violation::ColorOutsideTarget { e: edges[i] });
        }
    }
    Ok(RainbowReport {
        verdict: violations.is_empty(),
        violations,
    })
}

/// `Σ_v d_T(v)·f(v)`.
pub fn weighted_vertex_sum(tree: &Tree, f: &Embedding) -> Result<GroupElement, CayleyError> {
    let spec = f.spec();
    let images = f.total_images()?;
    Ok(spec.sum(
        images
            .iter()
            .enumerate()
            .map(|(v, &a)| spec.scalar_mul(tree.degree(v) as i64, a)),
    ))
}

/// Sum of the colours of all edges of `f(T)`.
pub fn edge_color_sum(tree: &Tree, f: &Embedding) -> Result<GroupElement, CayleyError> {
    let images = f.total_images()?;
    Ok(f.spec().sum(edge_colors(tree, &images, f.spec())))
}

/// Injective, image exactly `v_target`, and `Σ d(v)f(v) = Σ c_target`.
/// Rainbowness is not required.
pub fn is_pseudoembedding(tree: &Tree, f: &Embedding, targets: &TargetSets) -> bool {
    if f.len() != tree.n() || !f.is_total() {
        return false;
    }
    if f.image_set() != targets.v_target || targets.v_target.len() != tree.n() {
        return false;
    }
    let spec = f.spec();
    weighted_vertex_sum(tree, f).ok() == Some(spec.sum(targets.c_target.iter().copied()))
}

/// Shifts every assigned image by `g`; every edge colour moves by `2g`.
pub fn translate_embedding(f: &Embedding, g: GroupElement) -> Embedding {
    let spec = f.spec().clone();
    let map = f.as_slice().iter().map(|a| a.map(|a| spec.add(a, g))).collect();
    Embedding { spec, map }
}
