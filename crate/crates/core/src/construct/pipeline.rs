use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::json;

use crate::cayley::{is_pseudoembedding, Embedding, TargetSets};
use crate::classify::{classify, mod_g_congruent};
use crate::group::{GroupElement, GroupSpec};
use crate::solve::{check_core_condition, core_condition_search, SolveError};
use crate::tree::{Core, Tree};

use super::star::{find_simple_xast, zero_sum_bipartition_z2k};
use super::sums::{find_pair_sum, find_s_sum, partition_zero_sum};
use super::{ConstructError, SEARCH_BUDGET};

type Set = BTreeSet<GroupElement>;

/// Per-colour node limit of the fallback search in [`build_core_embedding`].
const FALLBACK_LIMIT: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoreEmbeddingMethod {
    Constructive,
    Search,
}

/// A core embedding together with the targets it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreEmbeddingResult {
    /// Assigned exactly on the core vertices.
    pub phi: Embedding,
    /// The one colour of `G` left out of `targets.c_target`.
    pub c_special: GroupElement,
    pub targets: TargetSets,
    pub method: CoreEmbeddingMethod,
    /// `n > 3|core|^3 + |core|`, the slack the greedy steps are sized for.
    pub slack_bound_holds: bool,
    /// Why the constructive route was abandoned, if it was.
    pub fallback_reason: Option<String>,
}

impl CoreEmbeddingResult {
    pub fn to_json(&self) -> String {
        let spec = self.phi.spec();
        let res = |a: &GroupElement| spec.residues(*a);
        let value = json!({
            "group": spec.to_string(),
            "method": self.method,
            "c_special": res(&self.c_special),
            "phi": self.phi,
            "targets": {
                "v_target": self.targets.v_target.iter().map(res).collect::<Vec<_>>(),
                "c_target": self.targets.c_target.iter().map(res).collect::<Vec<_>>(),
            },
            "slack_bound_holds": self.slack_bound_holds,
            "fallback_reason": self.fallback_reason,
        });
        serde_json::to_string_pretty(&value).expect("result serializes")
    }
}

/// A partial embedding grown one vertex at a time, rainbow on the edges
/// between placed vertices and inside fixed targets.
struct Placement<'a> {
    tree: &'a Tree,
    spec: &'a GroupSpec,
    phi: Embedding,
    used: Set,
    colors: Set,
    targets: TargetSets,
}

impl<'a> Placement<'a> {
    fn new(tree: &'a Tree, spec: &'a GroupSpec, targets: TargetSets) -> Self {
        Placement {
            tree,
            spec,
            phi: Embedding::new(spec.clone(), tree.n()),
            used: Set::new(),
            colors: Set::new(),
            targets,
        }
    }

    fn new_colors(&self, v: usize, a: GroupElement) -> Vec<GroupElement> {
        self.tree
            .neighbors(v)
            .iter()
            .filter_map(|&w| self.phi.get(w))
            .map(|b| self.spec.add(a, b))
            .collect()
    }

    fn fits(&self, v: usize, a: GroupElement) -> bool {
        self.phi.get(v).is_none()
            && self.targets.v_target.contains(&a)
            && !self.used.contains(&a)
            && self
                .new_colors(v, a)
                .iter()
                .all(|c| self.targets.c_target.contains(c) && !self.colors.contains(c))
    }

    fn place(&mut self, v: usize, a: GroupElement) -> Vec<GroupElement> {
        debug_assert!(self.fits(v, a));
        let new = self.new_colors(v, a);
        self.phi.set(v, a).expect("fits checked injectivity");
        self.used.insert(a);
        self.colors.extend(&new);
        new
    }

    fn unplace(&mut self, v: usize, new: &[GroupElement]) {
        if let Some(a) = self.phi.get(v) {
            self.used.remove(&a);
        }
        self.phi.unset(v);
        for c in new {
            self.colors.remove(c);
        }
    }

    /// `im ∪ (im + im - im) ∪ (c - im)`.
    fn forbidden(&self, c_special: GroupElement) -> Set {
        let s = self.spec;
        let mut f = self.used.clone();
        for &a in &self.used {
            f.insert(s.sub(c_special, a));
            for &b in &self.used {
                for &c in &self.used {
                    f.insert(s.sub(s.add(a, b), c));
                }
            }
        }
        f
    }
}

/// [`build_core_embedding_with`] at the default fallback limit.
pub fn build_core_embedding(tree: &Tree, core: &Core, spec: &GroupSpec) -> Result<CoreEmbeddingResult, ConstructError> {
    build_core_embedding_with(tree, core, spec, Some(FALLBACK_LIMIT))
}

/// Embeds the core so that the core condition holds against targets
/// `V = G`, `C = G \ {c_special}`.
///
/// Outside `Z_2^k`, core vertices are split into those with degree
/// `≢ 1 (mod G)`, which get a simple `x*_T v` and define `c_special`; the
/// remaining non-leaves, placed greedily; and the leaves, whose images are
/// chosen to make the core sum `ΣG`. Over `Z_2^k`, odd- and even-degree core
/// vertices become two zero-sum blocks and `c_special = 0`.
///
/// When a constructive step fails, the result comes from an exact search
/// over `c_special` in index order, each run limited to `node_limit` nodes.
/// Obstructed instances are rejected up front.
pub fn build_core_embedding_with(
    tree: &Tree,
    core: &Core,
    spec: &GroupSpec,
    node_limit: Option<u64>,
) -> Result<CoreEmbeddingResult, ConstructError> {
    if tree.n() != spec.order() {
        return Err(ConstructError::Precondition(format!(
            "tree has {} vertices but {spec} has order {}",
            tree.n(),
            spec.order()
        )));
    }
    if !core.is_valid_for(tree) {
        return Err(ConstructError::Precondition("not a core of the tree".into()));
    }
    let report = classify(tree, spec).map_err(|e| ConstructError::Precondition(e.to_string()))?;
    if report.obstructed {
        let names: Vec<&str> = ["o1", "o2", "o3", "o4"]
            .into_iter()
            .zip(report.flags())
            .filter_map(|(n, f)| f.then_some(n))
            .collect();
        return Err(ConstructError::Obstructed(names.join(",")));
    }
    let k = core.len();
    let slack_bound_holds = (tree.n() as u128) > 3 * (k as u128).pow(3) + k as u128;
    let attempt = if spec.is_elementary_two_rank_at_least_two() {
        z2k_branch(tree, core, spec)
    } else {
        general_branch(tree, core, spec)
    };
    let reason = match attempt {
        Ok((phi, c_special, targets)) if check_core_condition(tree, core, &phi, &targets) => {
            return Ok(CoreEmbeddingResult {
                phi,
                c_special,
                targets,
                method: CoreEmbeddingMethod::Constructive,
                slack_bound_holds,
                fallback_reason: None,
            });
        }
        Ok(_) => "constructed map fails the core condition".to_string(),
        Err(e) => e.to_string(),
    };
    let colors: Vec<GroupElement> = if spec.is_elementary_two_rank_at_least_two() {
        vec![spec.identity()]
    } else {
        spec.elements().collect()
    };
    let mut inconclusive = None;
    for c in colors {
        let targets = TargetSets::full_minus_color(spec, c);
        match core_condition_search(tree, core, spec, &targets, node_limit) {
            Ok(Some(phi)) => {
                return Ok(CoreEmbeddingResult {
                    phi,
                    c_special: c,
                    targets,
                    method: CoreEmbeddingMethod::Search,
                    slack_bound_holds,
                    fallback_reason: Some(reason),
                })
            }
            Ok(None) => {}
            Err(SolveError::Inconclusive { nodes }) => inconclusive = Some(nodes),
            Err(e) => return Err(e.into()),
        }
    }
    match inconclusive {
        Some(nodes) => Err(ConstructError::Budget(format!(
            "core search stopped after {nodes} nodes ({reason})"
        ))),
        None => Err(ConstructError::Exhausted(format!(
            "no core embedding satisfies the core condition ({reason})"
        ))),
    }
}

type Built = (Embedding, GroupElement, TargetSets);

fn z2k_branch(tree: &Tree, core: &Core, spec: &GroupSpec) -> Result<Built, ConstructError> {
    let k = spec.elementary_two_rank().expect("caller checked Z_2^k");
    let (odd, even): (Vec<usize>, Vec<usize>) = core.vertices.iter().partition(|&&v| tree.degree(v) % 2 == 1);
    let f = zero_sum_bipartition_z2k(tree, &odd, &even, k)?;
    Ok((f, spec.identity(), TargetSets::full_minus_zero(spec)))
}

fn general_branch(tree: &Tree, core: &Core, spec: &GroupSpec) -> Result<Built, ConstructError> {
    let mut vs = Vec::new();
    let mut ws = Vec::new();
    let mut us = Vec::new();
    for &v in &core.vertices {
        let d = tree.degree(v);
        if !mod_g_congruent(d as i64, 1, spec) {
            vs.push(v);
        } else if d == 1 {
            us.push(v);
        } else {
            ws.push(v);
        }
    }

    // Simple x*_T v fixes c_special and a rainbow start avoiding it.
    let x = find_simple_xast(tree, &vs, spec)?;
    let c_special = spec.sum(
        vs.iter()
            .zip(&x)
            .map(|(&v, &a)| spec.scalar_mul(1 - tree.degree(v) as i64, a)),
    );
    let targets = TargetSets::full_minus_color(spec, c_special);
    let mut p = Placement::new(tree, spec, targets.clone());
    for (&v, &a) in vs.iter().zip(&x) {
        if !p.fits(v, a) {
            return Err(ConstructError::Invalid("x*_T v placement is not rainbow".into()));
        }
        p.place(v, a);
    }

    // Greedy placement outside im ∪ (im+im-im) ∪ (c_special-im).
    for &w in &ws {
        let forbidden = p.forbidden(c_special);
        let pick = spec
            .elements()
            .filter(|a| !forbidden.contains(a))
            .chain(spec.elements().filter(|a| forbidden.contains(a)))
            .find(|&a| p.fits(w, a))
            .ok_or_else(|| ConstructError::Exhausted(format!("no image for vertex {w}")))?;
        p.place(w, pick);
    }

    // Leaves fix the core sum to ΣG.
    let g = spec.sub(spec.sum_all(), spec.sum(p.used.iter().copied()));
    place_leaves(&mut p, &us, g, c_special)?;
    Ok((p.phi, c_special, targets))
}

fn place_leaves(
    p: &mut Placement<'_>,
    us: &[usize],
    g: GroupElement,
    c_special: GroupElement,
) -> Result<(), ConstructError> {
    let spec = p.spec;
    let neighbors: Set = us
        .iter()
        .flat_map(|&u| p.tree.neighbors(u).iter().filter_map(|&w| p.phi.get(w)))
        .collect();
    let f1 = p.forbidden(c_special);
    let mut f2: Set = neighbors
        .iter()
        .flat_map(|&a| neighbors.iter().map(move |&b| spec.sub(a, b)))
        .collect();
    f2.insert(spec.identity());
    let proposal = match us.len() {
        0 => Ok(Vec::new()),
        1 => Ok(vec![g]),
        2 if neighbors.is_empty() => find_pair_sum(spec, g, &f1).map(|(a, b)| vec![a, b]),
        2 => Err(ConstructError::Precondition(
            "two core leaves with core neighbours".into(),
        )),
        s => find_s_sum(spec, g, s, &f1, &f2),
    };
    if let Ok(ys) = proposal {
        if try_assign(p, us, &ys) {
            return Ok(());
        }
    }
    let mut nodes = 0;
    match leaf_search(p, us, g, &mut nodes) {
        Some(true) => Ok(()),
        Some(false) => Err(ConstructError::Exhausted("no leaf images reach the core sum".into())),
        None => Err(ConstructError::Budget("leaf placement search".into())),
    }
}

/// Places `ys` on `us` if every step fits, else leaves `p` unchanged.
fn try_assign(p: &mut Placement<'_>, us: &[usize], ys: &[GroupElement]) -> bool {
    let mut done: Vec<(usize, Vec<GroupElement>)> = Vec::new();
    for (&u, &y) in us.iter().zip(ys) {
        if !p.fits(u, y) {
            for (v, c) in done.iter().rev() {
                p.unplace(*v, c);
            }
            return false;
        }
        done.push((u, p.place(u, y)));
    }
    true
}

/// Exhaustive search over leaf images with the last image forced by the sum.
fn leaf_search(p: &mut Placement<'_>, us: &[usize], g: GroupElement, nodes: &mut u64) -> Option<bool> {
    *nodes += 1;
    if *nodes > SEARCH_BUDGET {
        return None;
    }
    let spec = p.spec;
    match us {
        [] => Some(g == spec.identity()),
        [u] => {
            if p.fits(*u, g) {
                p.place(*u, g);
                Some(true)
            } else {
                Some(false)
            }
        }
        [u, rest @ ..] => {
            for a in spec.elements() {
                if !p.fits(*u, a) {
                    continue;
                }
                let new = p.place(*u, a);
                match leaf_search(p, rest, spec.sub(g, a), nodes) {
                    Some(false) => p.unplace(*u, &new),
                    other => return other,
                }
            }
            Some(false)
        }
    }
}

fn core_sums_hold(tree: &Tree, core: &Core, phi: &Embedding, targets: &TargetSets) -> bool {
    let spec = phi.spec();
    let Some(images) = core.vertices.iter().map(|&v| phi.get(v)).collect::<Option<Vec<_>>>() else {
        return false;
    };
    let weighted = spec.sum(
        core.vertices
            .iter()
            .zip(&images)
            .map(|(&v, &a)| spec.scalar_mul(tree.degree(v) as i64, a)),
    );
    weighted == spec.sum(targets.c_target.iter().copied())
        && spec.sum(images) == spec.sum(targets.v_target.iter().copied())
}

/// Extends a core embedding satisfying both core sums to a bijection onto
/// `v_target` whose degree-weighted sum is `Σ c_target`.
///
/// The unused targets are split into zero-sum parts, one per degree with
/// vertices outside the core, and each part goes to that degree class.
pub fn extend_to_pseudoembedding(
    tree: &Tree,
    core: &Core,
    phi: &Embedding,
    targets: &TargetSets,
) -> Result<Embedding, ConstructError> {
    let spec = phi.spec();
    let n = tree.n();
    if phi.len() != n || phi.assigned().map(|(v, _)| v).collect::<Vec<_>>() != core.vertices {
        return Err(ConstructError::Precondition(
            "phi must be assigned exactly on the core".into(),
        ));
    }
    if targets.v_target.len() != n {
        return Err(ConstructError::Precondition(format!(
            "v_target has {} elements for {n} vertices",
            targets.v_target.len()
        )));
    }
    if !phi.image_set().is_subset(&targets.v_target) || !core_sums_hold(tree, core, phi, targets) {
        return Err(ConstructError::Precondition("phi violates the core sums".into()));
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in (0..n).filter(|&v| !core.contains(v)) {
        classes.entry(tree.degree(v)).or_default().push(v);
    }
    let rest: Set = targets.v_target.difference(&phi.image_set()).copied().collect();
    let sizes: Vec<usize> = classes.values().map(Vec::len).collect();
    let parts = partition_zero_sum(spec, &rest, &sizes)?;
    let mut h = phi.clone();
    for (vs, part) in classes.values().zip(parts) {
        for (&v, a) in vs.iter().zip(part) {
            h.set(v, a)?;
        }
    }
    if !is_pseudoembedding(tree, &h, targets) {
        return Err(ConstructError::Invalid("extension is not a pseudoembedding".into()));
    }
    Ok(h)
}

/// A core embedding derived from a full rainbow embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreCertificate {
    pub phi: Embedding,
    /// The image and the colour set of the source embedding.
    pub targets: TargetSets,
    /// For each non-exhausted degree, the independent triple re-placed.
    pub triples: Vec<(usize, [usize; 3])>,
}

/// Turns a rainbow embedding `f` of `T` into a core embedding satisfying the
/// core condition against `f`'s own image and colour set.
///
/// For every non-exhausted degree `d` an independent triple of degree-`d`
/// core vertices is re-placed so that it absorbs `σ_d`, the sum of `f` over
/// the triple and the degree-`d` vertices outside the core; all other core
/// vertices keep their `f` image. Triples are re-placed by exact search.
pub fn core_certificate_from_embedding(
    tree: &Tree,
    f: &Embedding,
    core: &Core,
    spec: &GroupSpec,
) -> Result<CoreCertificate, ConstructError> {
    let n = tree.n();
    if f.len() != n || f.spec() != spec || !core.is_valid_for(tree) {
        return Err(ConstructError::Precondition("size, group or core mismatch".into()));
    }
    let images = f.total_images()?;
    let colors: Set = tree
        .edges()
        .iter()
        .map(|&(u, v)| spec.add(images[u], images[v]))
        .collect();
    if colors.len() + 1 != n.max(1) {
        return Err(ConstructError::Precondition("f is not rainbow".into()));
    }
    let targets = TargetSets {
        v_target: images.iter().copied().collect(),
        c_target: colors,
    };

    let mut triples = Vec::new();
    for d in core.open_degrees(tree) {
        let class: Vec<usize> = core.vertices.iter().copied().filter(|&v| tree.degree(v) == d).collect();
        let t = independent_triple(tree, &class)
            .ok_or_else(|| ConstructError::Precondition(format!("no independent triple of degree {d} in the core")))?;
        triples.push((d, t));
    }
    let moved: BTreeSet<usize> = triples.iter().flat_map(|(_, t)| *t).collect();
    let sigmas: Vec<GroupElement> = triples
        .iter()
        .map(|&(d, _)| {
            spec.sum(
                (0..n)
                    .filter(|&v| tree.degree(v) == d && (!core.contains(v) || moved.contains(&v)))
                    .map(|v| images[v]),
            )
        })
        .collect();

    let mut p = Placement::new(tree, spec, targets.clone());
    for &v in core.vertices.iter().filter(|v| !moved.contains(v)) {
        p.place(v, images[v]);
    }
    let mut nodes = 0;
    match place_triples(&mut p, &triples, &sigmas, &mut nodes) {
        Some(true) => {}
        Some(false) => return Err(ConstructError::Exhausted("no re-placement of the triples".into())),
        None => return Err(ConstructError::Budget("triple re-placement search".into())),
    }
    if !check_core_condition(tree, core, &p.phi, &targets) {
        return Err(ConstructError::Invalid("certificate fails the core condition".into()));
    }
    Ok(CoreCertificate {
        phi: p.phi,
        targets,
        triples,
    })
}

fn independent_triple(tree: &Tree, class: &[usize]) -> Option<[usize; 3]> {
    for i in 0..class.len() {
        for j in i + 1..class.len() {
            if tree.has_edge(class[i], class[j]) {
                continue;
            }
            for &c in &class[j + 1..] {
                if !tree.has_edge(class[i], c) && !tree.has_edge(class[j], c) {
                    return Some([class[i], class[j], c]);
                }
            }
        }
    }
    None
}

fn place_triples(
    p: &mut Placement<'_>,
    triples: &[(usize, [usize; 3])],
    sigmas: &[GroupElement],
    nodes: &mut u64,
) -> Option<bool> {
    let Some(&(_, [a, b, c])) = triples.first() else {
        return Some(true);
    };
    let spec = p.spec;
    let sigma = sigmas[0];
    let elems: Vec<GroupElement> = p.targets.v_target.iter().copied().collect();
    for &x in &elems {
        if !p.fits(a, x) {
            continue;
        }
        let cx = p.place(a, x);
        for &y in &elems {
            *nodes += 1;
            if *nodes > SEARCH_BUDGET {
                return None;
            }
            if !p.fits(b, y) {
                continue;
            }
            let cy = p.place(b, y);
            let z = spec.sub(spec.sub(sigma, x), y);
            if p.fits(c, z) {
                let cz = p.place(c, z);
                match place_triples(p, &triples[1..], &sigmas[1..], nodes) {
                    Some(false) => p.unplace(c, &cz),
                    other => return other,
                }
            }
            p.unplace(b, &cy);
        }
        p.unplace(a, &cx);
    }
    Some(false)
}
