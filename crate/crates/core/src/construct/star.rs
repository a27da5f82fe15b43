use std::collections::BTreeMap;

use crate::cayley::Embedding;
use crate::classify::mod_g_congruent;
use crate::group::{GroupElement, GroupSpec};
use crate::tree::Tree;

use super::{ConstructError, SEARCH_BUDGET};

/// The multiset `x*d`: all pairwise sums `x_i + x_j` (`i < j`), or only those
/// along tree edges for `x*_T v`, together with one weighted sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarMultiset {
    /// Sorted, with repetitions.
    pub entries: Vec<GroupElement>,
}

impl StarMultiset {
    /// `{x_i + x_j : i < j} ∪ {Σ d_i x_i}`, of size `C(k,2) + 1`.
    pub fn x_ast_d(spec: &GroupSpec, x: &[GroupElement], d: &[i64]) -> Self {
        let mut entries = Vec::new();
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                entries.push(spec.add(x[i], x[j]));
            }
        }
        entries.push(weighted(spec, x, d));
        Self::sorted(entries)
    }

    /// `{x_i + x_j : v_i v_j ∈ E(T)} ∪ {Σ (1 - d_T(v_i)) x_i}`, of size
    /// `e(T[v]) + 1`.
    pub fn x_ast_tree(spec: &GroupSpec, tree: &Tree, v: &[usize], x: &[GroupElement]) -> Self {
        let mut entries = Vec::new();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if tree.has_edge(v[i], v[j]) {
                    entries.push(spec.add(x[i], x[j]));
                }
            }
        }
        entries.push(weighted(spec, x, &star_coefficients(tree, v)));
        Self::sorted(entries)
    }

    fn sorted(mut entries: Vec<GroupElement>) -> Self {
        entries.sort();
        StarMultiset { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every entry occurs once.
    pub fn is_simple(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] != w[1])
    }

    pub fn multiplicities(&self) -> BTreeMap<GroupElement, usize> {
        let mut m = BTreeMap::new();
        for &a in &self.entries {
            *m.entry(a).or_insert(0) += 1;
        }
        m
    }
}

fn weighted(spec: &GroupSpec, x: &[GroupElement], d: &[i64]) -> GroupElement {
    spec.sum(x.iter().zip(d).map(|(&a, &k)| spec.scalar_mul(k, a)))
}

/// `1 - d_T(v_i)` for each listed vertex.
fn star_coefficients(tree: &Tree, v: &[usize]) -> Vec<i64> {
    v.iter().map(|&u| 1 - tree.degree(u) as i64).collect()
}

fn is_simple_sequence(x: &[GroupElement]) -> bool {
    let mut s = x.to_vec();
    s.sort();
    s.windows(2).all(|w| w[0] != w[1])
}

/// `(Δ + 1)·2^(k+1) < m`, the range in which powers of two cannot collide.
fn powers_fit(delta: i64, k: usize, m: u64) -> bool {
    let Some(p) = 1u128.checked_shl(k as u32 + 1) else {
        return false;
    };
    (delta as u128 + 1).saturating_mul(p) < m as u128
}

fn check_coefficients(d: &[i64]) -> Result<i64, ConstructError> {
    if let Some(&bad) = d.iter().find(|&&di| di > -1) {
        return Err(ConstructError::Precondition(format!(
            "coefficient {bad} is not in [-Δ, -1]"
        )));
    }
    Ok(d.iter().map(|&di| -di).max().unwrap_or(1))
}

/// `x = (2, 4, ..., 2^k)` in a cyclic group `Z_n`, valid when
/// `(Δ + 1)·2^(k+1) < n`: pair sums lie in `[2, 2^(k+1)]` while the
/// weighted sum lies in `[-Δ·2^(k+1), -2]`.
pub fn xastd_cyclic(spec: &GroupSpec, d: &[i64]) -> Result<Vec<GroupElement>, ConstructError> {
    if !spec.is_cyclic() {
        return Err(ConstructError::Precondition(format!("{spec} is not cyclic")));
    }
    let delta = check_coefficients(d)?;
    let k = d.len();
    if !powers_fit(delta, k, spec.order() as u64) {
        return Err(ConstructError::Precondition(format!(
            "(Δ+1)·2^(k+1) < n fails for Δ = {delta}, k = {k}, n = {}",
            spec.order()
        )));
    }
    let x: Vec<GroupElement> = (1..=k).map(|i| spec.from_integer(1i64 << i)).collect();
    verify_x_ast_d(spec, &x, d)?;
    Ok(x)
}

/// Powers of two placed on one cyclic factor, zero elsewhere.
fn powers_on_factor(spec: &GroupSpec, factor: usize, k: usize) -> Vec<GroupElement> {
    (1..=k)
        .map(|i| spec.scalar_mul(1i64 << i, spec.basis(factor)))
        .collect()
}

fn verify_x_ast_d(spec: &GroupSpec, x: &[GroupElement], d: &[i64]) -> Result<(), ConstructError> {
    if !is_simple_sequence(x) || !StarMultiset::x_ast_d(spec, x, d).is_simple() {
        return Err(ConstructError::Invalid("x*d is not simple".into()));
    }
    Ok(())
}

/// A simple `x` with `x*_T v` simple, for distinct vertices whose degrees
/// are all `≢ 1 (mod G)`.
///
/// One vertex takes 0. Two non-adjacent vertices take the first distinct
/// pair. Two adjacent vertices take the first distinct pair with
/// `d(v_1)x_1 + d(v_2)x_2 != 0`, which fails only when both degrees are
/// `≡ 0`. Three or more use powers of two on a large enough cyclic factor,
/// and otherwise an exhaustive search.
pub fn find_simple_xast(tree: &Tree, v: &[usize], spec: &GroupSpec) -> Result<Vec<GroupElement>, ConstructError> {
    if v.iter().collect::<std::collections::BTreeSet<_>>().len() != v.len() {
        return Err(ConstructError::Precondition("vertices are not distinct".into()));
    }
    if let Some(&u) = v.iter().find(|&&u| mod_g_congruent(tree.degree(u) as i64, 1, spec)) {
        return Err(ConstructError::Precondition(format!("vertex {u} has degree ≡ 1 mod G")));
    }
    let x = match v.len() {
        0 => Vec::new(),
        1 => vec![spec.identity()],
        2 => pair_xast(tree, v, spec)?,
        _ => many_xast(tree, v, spec)?,
    };
    if !is_simple_sequence(&x) || !StarMultiset::x_ast_tree(spec, tree, v, &x).is_simple() {
        return Err(ConstructError::Invalid("x*_T v is not simple".into()));
    }
    Ok(x)
}

fn pair_xast(tree: &Tree, v: &[usize], spec: &GroupSpec) -> Result<Vec<GroupElement>, ConstructError> {
    let (a, b) = (v[0], v[1]);
    let adjacent = tree.has_edge(a, b);
    let (da, db) = (tree.degree(a) as i64, tree.degree(b) as i64);
    if adjacent && mod_g_congruent(da, 0, spec) && mod_g_congruent(db, 0, spec) {
        return Err(ConstructError::ExceptionalPair(a, b));
    }
    for x1 in spec.elements() {
        for x2 in spec.elements().filter(|&x2| x2 != x1) {
            // f(x1, x2) = -d(a)x1 - d(b)x2 must be nonzero for adjacent pairs.
            let f = spec.add(spec.scalar_mul(-da, x1), spec.scalar_mul(-db, x2));
            if !adjacent || f != spec.identity() {
                return Ok(vec![x1, x2]);
            }
        }
    }
    Err(ConstructError::Exhausted("no distinct pair".into()))
}

fn many_xast(tree: &Tree, v: &[usize], spec: &GroupSpec) -> Result<Vec<GroupElement>, ConstructError> {
    let d = star_coefficients(tree, v);
    let k = v.len();
    if spec.is_cyclic() {
        if let Ok(x) = xastd_cyclic(spec, &d) {
            return Ok(x);
        }
    }
    let delta = check_coefficients(&d)?;
    let widest = (0..spec.factors().len()).max_by_key(|&i| (spec.factors()[i], std::cmp::Reverse(i)));
    if let Some(f) = widest {
        if powers_fit(delta, k, spec.factors()[f] as u64) {
            let x = powers_on_factor(spec, f, k);
            if verify_x_ast_d(spec, &x, &d).is_ok() {
                return Ok(x);
            }
        }
    }
    search_xast(tree, v, spec, &d)
}

/// Exhaustive index-order search for `x` with `x*_T v` simple.
fn search_xast(tree: &Tree, v: &[usize], spec: &GroupSpec, d: &[i64]) -> Result<Vec<GroupElement>, ConstructError> {
    struct State<'a> {
        tree: &'a Tree,
        v: &'a [usize],
        spec: &'a GroupSpec,
        d: &'a [i64],
        x: Vec<GroupElement>,
        colors: Vec<GroupElement>,
        nodes: u64,
    }
    fn go(s: &mut State<'_>) -> Option<bool> {
        s.nodes += 1;
        if s.nodes > SEARCH_BUDGET {
            return None;
        }
        let i = s.x.len();
        if i == s.v.len() {
            let w = weighted(s.spec, &s.x, s.d);
            return Some(!s.colors.contains(&w));
        }
        for a in s.spec.elements() {
            if s.x.contains(&a) {
                continue;
            }
            let new: Vec<GroupElement> = (0..i)
                .filter(|&j| s.tree.has_edge(s.v[i], s.v[j]))
                .map(|j| s.spec.add(a, s.x[j]))
                .collect();
            let fresh = new.iter().all(|c| !s.colors.contains(c)) && is_simple_sequence(&new);
            if !fresh {
                continue;
            }
            s.x.push(a);
            s.colors.extend(&new);
            match go(s) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            s.colors.truncate(s.colors.len() - new.len());
            s.x.pop();
        }
        Some(false)
    }
    let mut s = State {
        tree,
        v,
        spec,
        d,
        x: Vec::new(),
        colors: Vec::new(),
        nodes: 0,
    };
    match go(&mut s) {
        Some(true) => Ok(s.x),
        Some(false) => Err(ConstructError::Exhausted("no x with x*_T v simple".into())),
        None => Err(ConstructError::Budget("x*_T v search".into())),
    }
}

/// Images for one block: nothing, `{0}`, or `e_o, ..., e_{o+m-2}` and their sum.
fn block_images(spec: &GroupSpec, size: usize, offset: usize) -> Vec<GroupElement> {
    match size {
        0 => Vec::new(),
        1 => vec![spec.identity()],
        m => {
            let mut img: Vec<GroupElement> = (0..m - 1).map(|i| spec.basis(offset + i)).collect();
            img.push(spec.sum(img.iter().copied()));
            img
        }
    }
}

/// Embeds `A ∪ B` into `Z_2^k` so that both `A` and `B` have image sum 0
/// and the induced forest is rainbow.
///
/// `A` takes `e_1, ..., e_{a-1}` and their sum (or `{0}` when `|A| = 1`);
/// `B` takes `e_{a+1}, ..., e_{a+b-1}` and their sum. Distinct blocks have
/// distinct supports, so pair sums can only collide inside a block of
/// four with a perfect matching.
pub fn zero_sum_bipartition_z2k(tree: &Tree, a: &[usize], b: &[usize], k: usize) -> Result<Embedding, ConstructError> {
    let spec = GroupSpec::elementary_two(k).map_err(|e| ConstructError::Precondition(e.to_string()))?;
    let (na, nb) = (a.len(), b.len());
    if k < na + nb {
        return Err(ConstructError::Precondition(format!(
            "k = {k} is below |A|+|B| = {}",
            na + nb
        )));
    }
    if na + nb < 10 {
        return Err(ConstructError::Precondition(format!(
            "|A|+|B| = {} is below 10",
            na + nb
        )));
    }
    if na == 2 || nb == 2 {
        return Err(ConstructError::Precondition("a block has exactly two vertices".into()));
    }
    for (name, block) in [("A", a), ("B", b)] {
        if block.len() == 4 && tree.has_perfect_matching_on(block) {
            return Err(ConstructError::Precondition(format!(
                "T[{name}] has four vertices and a perfect matching"
            )));
        }
    }
    let mut f = Embedding::new(spec.clone(), tree.n());
    let images = block_images(&spec, na, 0)
        .into_iter()
        .chain(block_images(&spec, nb, na));
    for (&v, img) in a.iter().chain(b).zip(images) {
        f.set(v, img)?;
    }
    let mut seen = std::collections::BTreeSet::new();
    for &(u, w) in tree.edges() {
        if let (Some(x), Some(y)) = (f.get(u), f.get(w)) {
            if !seen.insert(spec.add(x, y)) {
                return Err(ConstructError::Invalid("induced forest is not rainbow".into()));
            }
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn multiset_sizes() {
        let z = g("Z11");
        let x: Vec<_> = (1..=4).map(|i| z.from_integer(i)).collect();
        assert_eq!(StarMultiset::x_ast_d(&z, &x, &[-1; 4]).len(), 7);
        let t = Tree::path(6);
        assert_eq!(StarMultiset::x_ast_tree(&z, &t, &[1, 2, 4], &x[..3]).len(), 2);
    }

    #[test]
    fn xastd_on_z100() {
        let z = GroupSpec::cyclic(100).unwrap();
        let x = xastd_cyclic(&z, &[-1, -1, -1]).unwrap();
        assert_eq!(x, [2, 4, 8].map(|i| z.from_integer(i)));
        let m = StarMultiset::x_ast_d(&z, &x, &[-1, -1, -1]);
        let mut want: Vec<_> = [6, 10, 12, 86].map(|i| z.from_integer(i)).to_vec();
        want.sort();
        assert_eq!(m.entries, want);
        assert!(m.is_simple());
    }

    #[test]
    fn xastd_on_z1000() {
        let z = GroupSpec::cyclic(1000).unwrap();
        let x = xastd_cyclic(&z, &[-2; 4]).unwrap();
        assert_eq!(x, [2, 4, 8, 16].map(|i| z.from_integer(i)));
        let m = StarMultiset::x_ast_d(&z, &x, &[-2; 4]);
        assert!(m.multiplicities().contains_key(&z.from_integer(940)));
        assert!(m.is_simple());
    }

    #[test]
    fn xastd_bound_enforced() {
        let z = GroupSpec::cyclic(10).unwrap();
        assert!(matches!(
            xastd_cyclic(&z, &[-2, -1, -1]),
            Err(ConstructError::Precondition(_))
        ));
        assert!(xastd_cyclic(&g("Z2xZ4"), &[-1]).is_err());
        assert!(xastd_cyclic(&GroupSpec::cyclic(99).unwrap(), &[0]).is_err());
    }

    #[test]
    fn simple_xast_small_cases() {
        let z5 = g("Z5");
        // Star with centre 0: degree 4 centre, leaves degree 1.
        let star = Tree::star(4);
        assert_eq!(find_simple_xast(&star, &[0], &z5).unwrap(), vec![z5.identity()]);
        // Path 0-1-2-3-4: vertices 1 and 3 are non-adjacent, degree 2.
        let p = Tree::path(5);
        let e = GroupElement::from_index;
        assert_eq!(find_simple_xast(&p, &[1, 3], &z5).unwrap(), vec![e(0), e(1)]);
        // Adjacent degrees (2, 3).
        let t = Tree::from_edges(5, &[(0, 1), (1, 2), (1, 3), (0, 4)]).unwrap();
        assert_eq!((t.degree(0), t.degree(1)), (2, 3));
        let x = find_simple_xast(&t, &[0, 1], &z5).unwrap();
        assert_eq!(x, vec![e(0), e(1)]);
        assert!(find_simple_xast(&t, &[2], &z5).is_err(), "leaf has degree 1");
    }

    #[test]
    fn exceptional_pair_rejected() {
        // Two adjacent degree-3 vertices over Z3.
        let t = Tree::from_edges(6, &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]).unwrap();
        assert_eq!(
            find_simple_xast(&t, &[0, 1], &g("Z3")),
            Err(ConstructError::ExceptionalPair(0, 1))
        );
        assert!(find_simple_xast(&t, &[0, 1], &g("Z5")).is_ok());
    }

    #[test]
    fn many_vertices_small_group_uses_search() {
        // Spider with three legs of length two: centre degree 3, middles degree 2.
        let t = Tree::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        let z = g("Z3xZ3");
        let v = [0, 1, 3, 5];
        let x = find_simple_xast(&t, &v, &z).unwrap();
        assert!(StarMultiset::x_ast_tree(&z, &t, &v, &x).is_simple());
        let big = GroupSpec::cyclic(4096).unwrap();
        let x = find_simple_xast(&t, &v, &big).unwrap();
        assert_eq!(x[0], big.from_integer(2));
    }

    #[test]
    fn bipartition_with_singleton() {
        let t = Tree::star(9);
        let a = [0];
        let b: Vec<usize> = (1..10).collect();
        let f = zero_sum_bipartition_z2k(&t, &a, &b, 10).unwrap();
        let spec = f.spec().clone();
        assert_eq!(f.get(0), Some(spec.identity()));
        assert_eq!(spec.sum(b.iter().map(|&v| f.get(v).unwrap())), spec.identity());
    }

    #[test]
    fn bipartition_three_seven() {
        let t = Tree::path(10);
        let a = [0, 4, 9];
        let b = [1, 2, 3, 5, 6, 7, 8];
        let f = zero_sum_bipartition_z2k(&t, &a, &b, 10).unwrap();
        let spec = f.spec().clone();
        let imgs = f.image_set();
        assert_eq!(imgs.len(), 10);
        for block in [&a[..], &b[..]] {
            assert_eq!(spec.sum(block.iter().map(|&v| f.get(v).unwrap())), spec.identity());
        }
        let colors: Vec<_> = t
            .edges()
            .iter()
            .map(|&(u, v)| spec.add(f.get(u).unwrap(), f.get(v).unwrap()))
            .collect();
        let distinct: std::collections::BTreeSet<_> = colors.iter().collect();
        assert_eq!(distinct.len(), colors.len());
        assert!(!distinct.contains(&spec.identity()));
    }

    #[test]
    fn bipartition_rejects_matched_four() {
        let t = Tree::path(12);
        let a = [0, 1, 2, 3];
        let b: Vec<usize> = (4..12).collect();
        assert!(matches!(
            zero_sum_bipartition_z2k(&t, &a, &b, 12),
            Err(ConstructError::Precondition(_))
        ));
        assert!(zero_sum_bipartition_z2k(&t, &[0, 1], &b, 12).is_err());
        assert!(zero_sum_bipartition_z2k(&t, &[0, 2, 4], &[1, 3, 5], 12).is_err());
    }
}
