//! Backtracking over injective colour-distinct labellings of a forest.

use std::time::Instant;

use crate::group::{GroupElement, GroupSpec};

use super::{SearchMode, VertexOrder};

const UNSET: u32 = u32::MAX;
/// Addition tables are built up to this group order.
const TABLE_LIMIT: usize = 1024;

#[derive(Clone, Debug)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub(crate) fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    pub(crate) fn get(&self, i: u32) -> bool {
        self.words[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: u32) {
        self.words[(i >> 6) as usize] |= 1 << (i & 63);
    }

    #[inline]
    pub(crate) fn clear(&mut self, i: u32) {
        self.words[(i >> 6) as usize] &= !(1 << (i & 63));
    }
}

/// `Σ coeffs[v]·img[v] = target` over all vertices of the problem.
#[derive(Clone, Debug)]
pub(crate) struct LinearConstraint {
    pub coeffs: Vec<i64>,
    pub target: GroupElement,
}

pub(crate) struct Problem<'a> {
    pub spec: &'a GroupSpec,
    pub adj: Vec<Vec<usize>>,
    pub allowed_elems: BitSet,
    pub allowed_cols: BitSet,
    pub fixed: Vec<Option<u32>>,
    pub constraints: Vec<LinearConstraint>,
    pub order: VertexOrder,
    pub mode: SearchMode,
    pub node_limit: Option<u64>,
}

pub(crate) struct EngineResult {
    pub count: u64,
    pub solutions: Vec<Vec<u32>>,
    pub nodes: u64,
    pub limit_hit: bool,
    pub elapsed: std::time::Duration,
}

enum Adder {
    Table { n: usize, table: Vec<u32> },
    Direct,
}

struct Search<'p, 'a> {
    p: &'p Problem<'a>,
    adder: Adder,
    img: Vec<u32>,
    used_e: BitSet,
    used_c: BitSet,
    sums: Vec<GroupElement>,
    unassigned: usize,
    nodes: u64,
    limit_hit: bool,
    stop: bool,
    count: u64,
    solutions: Vec<Vec<u32>>,
    static_order: Vec<usize>,
}

impl<'p, 'a> Search<'p, 'a> {
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        match &self.adder {
            Adder::Table { n, table } => table[a as usize * n + b as usize],
            Adder::Direct => self
                .p
                .spec
                .add(GroupElement::from_index(a), GroupElement::from_index(b))
                .index(),
        }
    }

    /// Whether `x` can be placed at `v` given the current partial labelling.
    #[inline]
    fn feasible(&self, v: usize, x: u32) -> bool {
        if self.used_e.get(x) || !self.p.allowed_elems.get(x) {
            return false;
        }
        for &w in &self.p.adj[v] {
            let y = self.img[w];
            if y != UNSET {
                let c = self.add(x, y);
                if self.used_c.get(c) || !self.p.allowed_cols.get(c) {
                    return false;
                }
            }
        }
        true
    }

    fn place(&mut self, v: usize, x: u32) {
        self.img[v] = x;
        self.used_e.set(x);
        for i in 0..self.p.adj[v].len() {
            let y = self.img[self.p.adj[v][i]];
            if y != UNSET {
                let c = self.add(x, y);
                self.used_c.set(c);
            }
        }
        let spec = self.p.spec;
        for (k, con) in self.p.constraints.iter().enumerate() {
            let term = spec.scalar_mul(con.coeffs[v], GroupElement::from_index(x));
            self.sums[k] = spec.add(self.sums[k], term);
        }
        self.unassigned -= 1;
    }

    fn unplace(&mut self, v: usize) {
        let x = self.img[v];
        self.img[v] = UNSET;
        self.used_e.clear(x);
        for i in 0..self.p.adj[v].len() {
            let y = self.img[self.p.adj[v][i]];
            if y != UNSET {
                let c = self.add(x, y);
                self.used_c.clear(c);
            }
        }
        let spec = self.p.spec;
        for (k, con) in self.p.constraints.iter().enumerate() {
            let term = spec.scalar_mul(con.coeffs[v], GroupElement::from_index(x));
            self.sums[k] = spec.sub(self.sums[k], term);
        }
        self.unassigned += 1;
    }

    fn constraints_hold(&self) -> bool {
        self.p.constraints.iter().zip(&self.sums).all(|(c, &s)| s == c.target)
    }

    /// Candidate images for `v`; when `v` is the last vertex and a constraint
    /// has coefficient 1 there, the image is forced.
    fn candidates(&self, v: usize) -> Vec<u32> {
        if self.unassigned == 1 {
            if let Some((k, _)) = self.p.constraints.iter().enumerate().find(|(_, c)| c.coeffs[v] == 1) {
                let need = self.p.spec.sub(self.p.constraints[k].target, self.sums[k]).index();
                return if self.feasible(v, need) { vec![need] } else { Vec::new() };
            }
        }
        (0..self.p.spec.order() as u32)
            .filter(|&x| self.feasible(v, x))
            .collect()
    }

    fn record(&mut self) {
        if !self.constraints_hold() {
            return;
        }
        self.count += 1;
        match self.p.mode {
            SearchMode::Decide => {
                self.solutions.push(self.img.clone());
                self.stop = true;
            }
            SearchMode::Enumerate => self.solutions.push(self.img.clone()),
            SearchMode::Count => {}
        }
    }

    fn next_vertex(&self, depth: usize) -> usize {
        match self.p.order {
            VertexOrder::BfsFromMaxDegree => self.static_order[depth],
            VertexOrder::MostConstrained => {
                let mut best: Option<(usize, usize, usize)> = None;
                for v in 0..self.img.len() {
                    if self.img[v] != UNSET {
                        continue;
                    }
                    let anchored = self.p.adj[v].iter().any(|&w| self.img[w] != UNSET);
                    let options = if anchored {
                        (0..self.p.spec.order() as u32).filter(|&x| self.feasible(v, x)).count()
                    } else {
                        usize::MAX - self.p.adj[v].len()
                    };
                    let key = (options, usize::MAX - self.p.adj[v].len(), v);
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
                best.expect("an unassigned vertex remains").2
            }
        }
    }

    fn go(&mut self, depth: usize) {
        if self.unassigned == 0 {
            self.record();
            return;
        }
        let v = self.next_vertex(depth);
        for x in self.candidates(v) {
            if let Some(limit) = self.p.node_limit {
                if self.nodes >= limit {
                    self.limit_hit = true;
                    self.stop = true;
                    return;
                }
            }
            self.nodes += 1;
            self.place(v, x);
            self.go(depth + 1);
            self.unplace(v);
            if self.stop {
                return;
            }
        }
    }
}

/// BFS order over the unfixed vertices: first outward from fixed vertices,
/// then each remaining component from its highest-degree vertex.
fn bfs_order(adj: &[Vec<usize>], fixed: &[Option<u32>]) -> Vec<usize> {
    let n = adj.len();
    let mut seen: Vec<bool> = fixed.iter().map(Option::is_some).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&v| seen[v]).collect();
    let mut order = Vec::new();
    let mut head = 0;
    loop {
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push(w);
                    order.push(w);
                }
            }
        }
        let root = (0..n)
            .filter(|&v| !seen[v])
            .max_by_key(|&v| (adj[v].len(), std::cmp::Reverse(v)));
        match root {
            Some(r) => {
                seen[r] = true;
                queue.push(r);
                order.push(r);
            }
            None => break,
        }
    }
    order
}

pub(crate) fn run(p: &Problem<'_>) -> EngineResult {
    let start = Instant::now();
    let n = p.spec.order();
    let adder = if n <= TABLE_LIMIT {
        let mut table = vec![0u32; n * n];
        for a in p.spec.elements() {
            for b in p.spec.elements() {
                table[a.as_usize() * n + b.as_usize()] = p.spec.add(a, b).index();
            }
        }
        Adder::Table { n, table }
    } else {
        Adder::Direct
    };
    let k = p.adj.len();
    let mut s = Search {
        p,
        adder,
        img: vec![UNSET; k],
        used_e: BitSet::new(n),
        used_c: BitSet::new(n),
        sums: vec![p.spec.identity(); p.constraints.len()],
        unassigned: k,
        nodes: 0,
        limit_hit: false,
        stop: false,
        count: 0,
        solutions: Vec::new(),
        static_order: bfs_order(&p.adj, &p.fixed),
    };
    let mut consistent = true;
    for (v, x) in p.fixed.iter().enumerate() {
        if let Some(x) = *x {
            if s.feasible(v, x) {
                s.place(v, x);
            } else {
                consistent = false;
            }
        }
    }
    if consistent {
        s.go(0);
    }
    EngineResult {
        count: s.count,
        solutions: s.solutions,
        nodes: s.nodes,
        limit_hit: s.limit_hit,
        elapsed: start.elapsed(),
    }
}
