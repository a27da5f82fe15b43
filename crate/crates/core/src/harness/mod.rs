//! Cross-checks of the obstruction classifier against exhaustive search over
//! a grid of small instances, with CSV and JSON reporting.

mod harmonious;

use std::collections::BTreeSet;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cayley::{CayleyError, TargetSets};
use crate::classify::classify;
use crate::group::{enumerate_abelian_groups, GroupError, GroupSpec};
use crate::solve::{solve_exact, SearchConfig, SearchMode, SolveError};
use crate::tree::{enumerate_trees, Tree, TreeError, MAX_ENUMERATION_ORDER};

pub use harmonious::{check_harmonious, harmonious_from_rainbow, HarmoniousLabelling};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("grid order {0} exceeds the enumeration limit {MAX_ENUMERATION_ORDER}")]
    GridTooLarge(usize),
    #[error("duplicate row for n={0}, group {1}, tree {2}")]
    DuplicateRow(usize, String, String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
}

/// Which colours a spanning tree may use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ColorPolicy {
    /// `G \ {0}` over `Z_2^k` (`k >= 2`), all of `G` otherwise.
    #[default]
    SpanningDefault,
    /// All of `G`, always.
    Full,
}

impl ColorPolicy {
    pub fn targets(self, spec: &GroupSpec) -> TargetSets {
        match self {
            ColorPolicy::SpanningDefault => TargetSets::spanning_default(spec),
            ColorPolicy::Full => TargetSets::full(spec),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GridConfig {
    pub n_max: usize,
    pub delta_max: usize,
    pub policy: ColorPolicy,
    /// Count every embedding instead of stopping at the first.
    pub count: bool,
    pub node_limit: Option<u64>,
}

impl GridConfig {
    pub fn new(n_max: usize, delta_max: usize) -> Self {
        GridConfig {
            n_max,
            delta_max,
            policy: ColorPolicy::default(),
            count: false,
            node_limit: None,
        }
    }
}

/// One (tree, group) instance: classifier flags next to the search verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentRow {
    pub n: usize,
    pub group: String,
    pub tree_id: String,
    pub delta: usize,
    pub o1: bool,
    pub o2: bool,
    pub o3: bool,
    pub o4: bool,
    /// `found`, `none` or `inconclusive`.
    pub solver_result: String,
    pub count: Option<u64>,
    pub nodes: u64,
    pub ms: u128,
}

impl ExperimentRow {
    pub fn obstructed(&self) -> bool {
        self.o1 || self.o2 || self.o3 || self.o4
    }

    /// Obstructed yet embeddable: impossible unless something is broken.
    pub fn is_hard_violation(&self) -> bool {
        self.obstructed() && self.solver_result == "found"
    }

    fn key(&self) -> (usize, &str, &str) {
        (self.n, &self.group, &self.tree_id)
    }
}

/// Classifies and searches one instance.
pub fn run_instance(tree: &Tree, spec: &GroupSpec, cfg: &GridConfig) -> Result<ExperimentRow, HarnessError> {
    let report = classify(tree, spec).map_err(|e| HarnessError::Invalid(e.to_string()))?;
    let targets = cfg.policy.targets(spec);
    let search = SearchConfig {
        mode: if cfg.count {
            SearchMode::Count
        } else {
            SearchMode::Decide
        },
        ..SearchConfig::default()
    }
    .with_symmetry(true)
    .with_node_limit(cfg.node_limit);
    let r = solve_exact(tree, spec, &targets, None, &search)?;
    let [o1, o2, o3, o4] = report.flags();
    let solver_result = if cfg.count {
        match r.count {
            Some(0) => "none",
            Some(_) => "found",
            None => "inconclusive",
        }
    } else {
        r.outcome.label()
    };
    Ok(ExperimentRow {
        n: tree.n(),
        group: spec.to_string(),
        tree_id: tree.canonical_id(),
        delta: tree.max_degree(),
        o1,
        o2,
        o3,
        o4,
        solver_result: solver_result.to_string(),
        count: r.count,
        nodes: r.stats.nodes_expanded,
        ms: r.stats.elapsed.as_millis(),
    })
}

/// Every tree on `1..=n_max` vertices with maximum degree at most
/// `delta_max`, against every abelian group of that order. Rows are sorted
/// by `(n, group, tree_id)` whatever the thread count.
pub fn experiment_cross_check(cfg: &GridConfig) -> Result<Vec<ExperimentRow>, HarnessError> {
    if cfg.n_max > MAX_ENUMERATION_ORDER {
        return Err(HarnessError::GridTooLarge(cfg.n_max));
    }
    let mut instances = Vec::new();
    for n in 1..=cfg.n_max {
        let trees = enumerate_trees(n, cfg.delta_max)?;
        for spec in enumerate_abelian_groups(n as u64)? {
            for t in &trees {
                instances.push((t.clone(), spec.clone()));
            }
        }
    }
    let mut rows = instances
        .par_iter()
        .map(|(t, spec)| run_instance(t, spec, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|a, b| a.key().cmp(&b.key()));
    Ok(rows)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GridSummary {
    pub rows: usize,
    pub obstructed: usize,
    pub found: usize,
    pub none: usize,
    pub inconclusive: usize,
    /// Obstructed rows with an embedding; must be 0.
    pub hard_violations: usize,
    /// Unobstructed rows with a conclusive verdict.
    pub unobstructed_conclusive: usize,
    pub unobstructed_found: usize,
    /// Unobstructed rows where complete search found nothing.
    pub converse_failures: usize,
    /// `unobstructed_found / unobstructed_conclusive`; inconclusive rows
    /// count toward neither.
    pub converse_rate: Option<f64>,
}

impl GridSummary {
    pub fn from_rows(rows: &[ExperimentRow]) -> Self {
        let mut s = GridSummary {
            rows: rows.len(),
            ..Self::default()
        };
        for r in rows {
            match r.solver_result.as_str() {
                "found" => s.found += 1,
                "none" => s.none += 1,
                _ => s.inconclusive += 1,
            }
            if r.obstructed() {
                s.obstructed += 1;
            } else if r.solver_result != "inconclusive" {
                s.unobstructed_conclusive += 1;
                if r.solver_result == "found" {
                    s.unobstructed_found += 1;
                } else {
                    s.converse_failures += 1;
                }
            }
            if r.is_hard_violation() {
                s.hard_violations += 1;
            }
        }
        s.converse_rate =
            (s.unobstructed_conclusive > 0).then(|| s.unobstructed_found as f64 / s.unobstructed_conclusive as f64);
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

pub const CSV_HEADER: [&str; 12] = [
    "n",
    "group",
    "tree_id",
    "delta",
    "o1",
    "o2",
    "o3",
    "o4",
    "solver_result",
    "count",
    "nodes",
    "ms",
];

/// Writes the rows as CSV (header always present) and returns the summary.
/// Duplicate `(n, group, tree_id)` keys are rejected before anything is
/// written.
pub fn run_report<W: Write>(rows: &[ExperimentRow], out: W) -> Result<GridSummary, HarnessError> {
    let mut seen = BTreeSet::new();
    for r in rows {
        if !seen.insert(r.key()) {
            return Err(HarnessError::DuplicateRow(r.n, r.group.clone(), r.tree_id.clone()));
        }
    }
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(GridSummary::from_rows(rows))
}
