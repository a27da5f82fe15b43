//! Exact search for rainbow embeddings, and the core-condition search.

mod engine;

use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::cayley::{verify_rainbow, CayleyError, Embedding, TargetSets};
use crate::group::{GroupElement, GroupSpec};
use crate::tree::{Core, Tree};

pub(crate) use engine::BitSet;
use engine::{run, LinearConstraint, Problem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("search stopped at the node limit after {nodes} nodes")]
    Inconclusive { nodes: u64 },
    #[error("translation symmetry needs v_target = G and colours closed under c -> c + 2g")]
    SymmetryNotPermitted,
    #[error("tree has {tree} vertices but only {targets} target elements")]
    TooFewTargets { tree: usize, targets: usize },
    #[error("partial embedding is invalid: {0}")]
    InvalidPartial(String),
    #[error("core embedding does not satisfy the core condition")]
    CoreConditionFailed,
    #[error(transparent)]
    Cayley(#[from] CayleyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexOrder {
    /// Static breadth-first order from a vertex of maximum degree.
    #[default]
    BfsFromMaxDegree,
    /// Dynamic: the anchored vertex with fewest feasible images next.
    MostConstrained,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    #[default]
    Decide,
    Count,
    Enumerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SearchConfig {
    pub vertex_order: VertexOrder,
    /// Fix the root image to 0, valid only for translation-closed targets.
    pub symmetry_reduction: bool,
    pub node_limit: Option<u64>,
    pub mode: SearchMode,
}

impl SearchConfig {
    pub fn decide() -> Self {
        Self::default()
    }

    pub fn count() -> Self {
        SearchConfig {
            mode: SearchMode::Count,
            ..Self::default()
        }
    }

    pub fn enumerate() -> Self {
        SearchConfig {
            mode: SearchMode::Enumerate,
            ..Self::default()
        }
    }

    pub fn with_symmetry(mut self, on: bool) -> Self {
        self.symmetry_reduction = on;
        self
    }

    pub fn with_node_limit(mut self, limit: Option<u64>) -> Self {
        self.node_limit = limit;
        self
    }

    pub fn with_order(mut self, order: VertexOrder) -> Self {
        self.vertex_order = order;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub solutions_found: u64,
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Found(Embedding),
    NotFound,
    /// The node limit was reached before the search finished.
    Inconclusive,
}

impl SolveOutcome {
    pub fn witness(&self) -> Option<&Embedding> {
        match self {
            SolveOutcome::Found(f) => Some(f),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SolveOutcome::Found(_) => "found",
            SolveOutcome::NotFound => "none",
            SolveOutcome::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub outcome: SolveOutcome,
    pub stats: SearchStats,
    /// Every embedding, in enumerate mode only.
    pub solutions: Vec<Embedding>,
    /// Exact count in count and enumerate modes (already multiplied out
    /// when symmetry reduction is on).
    pub count: Option<u64>,
}

/// Drops colour 0 over `Z_2^k` (`k >= 2`); no edge of `K_G` has colour 0
/// there, so this changes neither the search nor any answer.
pub fn normalize_targets(spec: &GroupSpec, targets: &TargetSets) -> TargetSets {
    let mut t = targets.clone();
    if spec.is_elementary_two_rank_at_least_two() {
        t.c_target.remove(&spec.identity());
    }
    t
}

fn bitset_of(spec: &GroupSpec, set: &std::collections::BTreeSet<GroupElement>) -> BitSet {
    let mut b = BitSet::new(spec.order());
    for a in set {
        b.set(a.index());
    }
    b
}

fn symmetry_permitted(spec: &GroupSpec, targets: &TargetSets) -> bool {
    targets.v_is_whole_group(spec) && targets.colors_translation_closed(spec)
}

fn max_degree_root(tree: &Tree) -> usize {
    (0..tree.n())
        .max_by_key(|&v| (tree.degree(v), std::cmp::Reverse(v)))
        .unwrap_or(0)
}

/// Exhaustive search for rainbow embeddings of `tree` into `targets`,
/// optionally extending `partial`.
///
/// In decide mode the first witness is returned; in count and enumerate
/// modes the search runs to completion. Hitting the node limit yields
/// [`SolveOutcome::Inconclusive`], never [`SolveOutcome::NotFound`].
pub fn solve_exact(
    tree: &Tree,
    spec: &GroupSpec,
    targets: &TargetSets,
    partial: Option<&Embedding>,
    cfg: &SearchConfig,
) -> Result<SolveReport, SolveError> {
    let targets = normalize_targets(spec, targets);
    if targets.v_target.len() < tree.n() {
        return Err(SolveError::TooFewTargets {
            tree: tree.n(),
            targets: targets.v_target.len(),
        });
    }
    let mut fixed = vec![None; tree.n()];
    if let Some(f) = partial {
        if f.len() != tree.n() || f.spec() != spec {
            return Err(SolveError::InvalidPartial("wrong size or group".into()));
        }
        for (v, a) in f.assigned() {
            fixed[v] = Some(a.index());
        }
        if !partial_is_consistent(tree, f, &targets) {
            return Err(SolveError::InvalidPartial("not rainbow or outside the targets".into()));
        }
    }
    let symmetric = cfg.symmetry_reduction;
    if symmetric {
        if !symmetry_permitted(spec, &targets) || partial.is_some_and(|f| f.assigned().count() > 0) {
            return Err(SolveError::SymmetryNotPermitted);
        }
        fixed[max_degree_root(tree)] = Some(spec.identity().index());
    }
    let problem = Problem {
        spec,
        adj: (0..tree.n()).map(|v| tree.neighbors(v).to_vec()).collect(),
        allowed_elems: bitset_of(spec, &targets.v_target),
        allowed_cols: bitset_of(spec, &targets.c_target),
        fixed,
        constraints: Vec::new(),
        order: cfg.vertex_order,
        mode: cfg.mode,
        node_limit: cfg.node_limit,
    };
    let edges_fit = tree.n() <= 1 || targets.c_target.len() >= tree.n() - 1;
    let result = if edges_fit {
        run(&problem)
    } else {
        engine::EngineResult {
            count: 0,
            solutions: Vec::new(),
            nodes: 0,
            limit_hit: false,
            elapsed: Duration::ZERO,
        }
    };
    let multiplier = if symmetric { spec.order() as u64 } else { 1 };
    let to_embedding = |img: &Vec<u32>| {
        Embedding::from_images(spec.clone(), img.iter().map(|&x| GroupElement::from_index(x)).collect())
            .expect("search produces injective maps")
    };
    let mut solutions: Vec<Embedding> = result.solutions.iter().map(to_embedding).collect();
    if symmetric && cfg.mode == SearchMode::Enumerate {
        let base = std::mem::take(&mut solutions);
        for g in spec.elements() {
            solutions.extend(base.iter().map(|f| crate::cayley::translate_embedding(f, g)));
        }
    }
    let outcome = if let Some(first) = solutions.first() {
        SolveOutcome::Found(first.clone())
    } else if result.limit_hit {
        SolveOutcome::Inconclusive
    } else {
        SolveOutcome::NotFound
    };
    let count = (cfg.mode != SearchMode::Decide && !result.limit_hit).then_some(result.count * multiplier);
    let found = match cfg.mode {
        SearchMode::Decide => solutions.len().min(1) as u64,
        _ => result.count * multiplier,
    };
    if cfg.mode == SearchMode::Count {
        solutions.clear();
    }
    Ok(SolveReport {
        outcome,
        stats: SearchStats {
            nodes_expanded: result.nodes,
            solutions_found: found,
            elapsed: result.elapsed,
        },
        solutions: if cfg.mode == SearchMode::Enumerate {
            solutions
        } else {
            Vec::new()
        },
        count,
    })
}

fn partial_is_consistent(tree: &Tree, f: &Embedding, targets: &TargetSets) -> bool {
    let spec = f.spec();
    let mut colors = std::collections::BTreeSet::new();
    for (_, a) in f.assigned() {
        if !targets.v_target.contains(&a) {
            return false;
        }
    }
    for &(u, v) in tree.edges() {
        if let (Some(a), Some(b)) = (f.get(u), f.get(v)) {
            let c = spec.add(a, b);
            if !targets.c_target.contains(&c) || !colors.insert(c) {
                return false;
            }
        }
    }
    true
}

/// Exact number of rainbow embeddings into `targets`.
pub fn count_embeddings(
    tree: &Tree,
    spec: &GroupSpec,
    targets: &TargetSets,
    cfg: &SearchConfig,
) -> Result<(u64, SearchStats), SolveError> {
    let cfg = SearchConfig {
        mode: SearchMode::Count,
        ..*cfg
    };
    let report = solve_exact(tree, spec, targets, None, &cfg)?;
    match report.count {
        Some(c) => Ok((c, report.stats)),
        None => Err(SolveError::Inconclusive {
            nodes: report.stats.nodes_expanded,
        }),
    }
}

/// The two sums a core embedding must hit: `Σ d_T(v)φ(v) = Σ c_target` and
/// `Σ φ(v) = Σ v_target` over the core.
fn core_constraints(tree: &Tree, core: &Core, spec: &GroupSpec, targets: &TargetSets) -> Vec<LinearConstraint> {
    vec![
        LinearConstraint {
            coeffs: core.vertices.iter().map(|&v| tree.degree(v) as i64).collect(),
            target: spec.sum(targets.c_target.iter().copied()),
        },
        LinearConstraint {
            coeffs: vec![1; core.len()],
            target: spec.sum(targets.v_target.iter().copied()),
        },
    ]
}

/// Whether `phi` (assigned exactly on the core) is a rainbow embedding of
/// the induced core forest into `targets` with both core sums correct.
pub fn check_core_condition(tree: &Tree, core: &Core, phi: &Embedding, targets: &TargetSets) -> bool {
    let spec = phi.spec();
    if phi.len() != tree.n() {
        return false;
    }
    let assigned: Vec<usize> = phi.assigned().map(|(v, _)| v).collect();
    if assigned != core.vertices || !partial_is_consistent(tree, phi, targets) {
        return false;
    }
    let images: Vec<GroupElement> = core.vertices.iter().map(|&v| phi.get(v).unwrap()).collect();
    core_constraints(tree, core, spec, targets).iter().all(|c| {
        let s = spec.sum(c.coeffs.iter().zip(&images).map(|(&k, &a)| spec.scalar_mul(k, a)));
        s == c.target
    })
}

/// Searches for a core embedding satisfying both core sums; the result is
/// a partial embedding of the whole tree, assigned exactly on the core.
pub fn core_condition_search(
    tree: &Tree,
    core: &Core,
    spec: &GroupSpec,
    targets: &TargetSets,
    node_limit: Option<u64>,
) -> Result<Option<Embedding>, SolveError> {
    let targets = normalize_targets(spec, targets);
    if targets.v_target.len() < core.len() {
        return Err(SolveError::TooFewTargets {
            tree: core.len(),
            targets: targets.v_target.len(),
        });
    }
    let local: std::collections::HashMap<usize, usize> =
        core.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<usize>> = core
        .vertices
        .iter()
        .map(|&v| tree.neighbors(v).iter().filter_map(|w| local.get(w).copied()).collect())
        .collect();
    let problem = Problem {
        spec,
        adj,
        allowed_elems: bitset_of(spec, &targets.v_target),
        allowed_cols: bitset_of(spec, &targets.c_target),
        fixed: vec![None; core.len()],
        constraints: core_constraints(tree, core, spec, &targets),
        order: VertexOrder::BfsFromMaxDegree,
        mode: SearchMode::Decide,
        node_limit,
    };
    let result = run(&problem);
    if let Some(img) = result.solutions.first() {
        let mut map = vec![None; tree.n()];
        for (i, &v) in core.vertices.iter().enumerate() {
            map[v] = Some(GroupElement::from_index(img[i]));
        }
        return Ok(Some(Embedding::from_partial(spec.clone(), map)?));
    }
    if result.limit_hit {
        return Err(SolveError::Inconclusive { nodes: result.nodes });
    }
    Ok(None)
}

/// Complete search for a rainbow embedding extending a core embedding that
/// satisfies the core condition.
pub fn solve_with_core(
    tree: &Tree,
    core: &Core,
    spec: &GroupSpec,
    targets: &TargetSets,
    phi: &Embedding,
    cfg: &SearchConfig,
) -> Result<SolveReport, SolveError> {
    let targets = normalize_targets(spec, targets);
    if !check_core_condition(tree, core, phi, &targets) {
        return Err(SolveError::CoreConditionFailed);
    }
    let cfg = SearchConfig {
        symmetry_reduction: false,
        ..*cfg
    };
    solve_exact(tree, spec, &targets, Some(phi), &cfg)
}

/// Decide-mode search returning the witness, after verifying it.
pub fn find_rainbow(
    tree: &Tree,
    spec: &GroupSpec,
    targets: &TargetSets,
    cfg: &SearchConfig,
) -> Result<SolveOutcome, SolveError> {
    let cfg = SearchConfig {
        mode: SearchMode::Decide,
        ..*cfg
    };
    let report = solve_exact(tree, spec, targets, None, &cfg)?;
    if let SolveOutcome::Found(f) = &report.outcome {
        debug_assert!(verify_rainbow(tree, f, targets)?.verdict);
    }
    Ok(report.outcome)
}
