use std::collections::BTreeSet;

use crate::group::{GroupElement, GroupSpec};

use super::{ConstructError, SEARCH_BUDGET};

type Set = BTreeSet<GroupElement>;

/// First `(x, y, z)` in index order with `x + y + z = b`, all three in
/// `X \ U`, and the translates `x + N`, `y + N`, `z + N` pairwise disjoint
/// and inside `X \ U`. Triples are non-decreasing, strictly increasing
/// when `require_distinct` is set.
pub fn find_triple_prescribed_sum(
    spec: &GroupSpec,
    x_set: &Set,
    u_set: &Set,
    n_set: &Set,
    b: GroupElement,
    require_distinct: bool,
) -> Result<(GroupElement, GroupElement, GroupElement), ConstructError> {
    let free: Vec<GroupElement> = x_set.difference(u_set).copied().collect();
    let free_set: Set = free.iter().copied().collect();
    let translate = |a: GroupElement| -> Option<Set> {
        let t: Set = n_set.iter().map(|&m| spec.add(a, m)).collect();
        t.is_subset(&free_set).then_some(t)
    };
    for (i, &x) in free.iter().enumerate() {
        let Some(tx) = translate(x) else { continue };
        let start = if require_distinct { i + 1 } else { i };
        for &y in &free[start..] {
            let z = spec.sub(spec.sub(b, x), y);
            let ordered = if require_distinct { z > y } else { z >= y };
            if !ordered || !free_set.contains(&z) {
                continue;
            }
            let Some(ty) = translate(y) else { continue };
            let Some(tz) = translate(z) else { continue };
            if tx.is_disjoint(&ty) && tx.is_disjoint(&tz) && ty.is_disjoint(&tz) {
                return Ok((x, y, z));
            }
        }
    }
    Err(ConstructError::NoTriple)
}

/// First `y1` in index order with `y2 = g - y1 != y1` and neither in `F1`.
///
/// Requires a group other than `Z_2^k` and `4|F1| < n`, under which more
/// than `n/2` ordered solutions exist and at least one avoids `F1`.
pub fn find_pair_sum(
    spec: &GroupSpec,
    g: GroupElement,
    f1: &Set,
) -> Result<(GroupElement, GroupElement), ConstructError> {
    if spec.elementary_two_rank().is_some() {
        return Err(ConstructError::Precondition(format!(
            "{spec} is an elementary abelian 2-group"
        )));
    }
    if 4 * f1.len() >= spec.order() {
        return Err(ConstructError::Precondition(format!(
            "|F1| = {} is not below n/4 = {}/4",
            f1.len(),
            spec.order()
        )));
    }
    spec.elements()
        .map(|y1| (y1, spec.sub(g, y1)))
        .find(|&(y1, y2)| y1 != y2 && !f1.contains(&y1) && !f1.contains(&y2))
        .ok_or_else(|| ConstructError::Exhausted("no pair avoids F1".into()))
}

/// `y_1 + ... + y_s = g` with every `y_i` outside `F1` and every difference
/// `y_i - y_j` (`i != j`) outside `F2`. The returned tuple is sorted; the
/// first sorted solution in index order is returned.
pub fn find_s_sum(
    spec: &GroupSpec,
    g: GroupElement,
    s: usize,
    f1: &Set,
    f2: &Set,
) -> Result<Vec<GroupElement>, ConstructError> {
    if s < 3 {
        return Err(ConstructError::Precondition(format!("s = {s} is below 3")));
    }
    let candidates: Vec<GroupElement> = spec.elements().filter(|y| !f1.contains(y)).collect();
    let mut chosen = Vec::with_capacity(s);
    let mut nodes = 0u64;
    let found = s_sum_dfs(spec, g, s, f2, &candidates, 0, &mut chosen, &mut nodes);
    match found {
        Some(true) => Ok(chosen),
        Some(false) => Err(ConstructError::Exhausted(format!("no {s}-term solution"))),
        None => Err(ConstructError::Budget(format!("{s}-term sum search"))),
    }
}

fn differences_ok(spec: &GroupSpec, f2: &Set, chosen: &[GroupElement], y: GroupElement) -> bool {
    chosen
        .iter()
        .all(|&c| !f2.contains(&spec.sub(y, c)) && !f2.contains(&spec.sub(c, y)))
}

/// `Some(found)` when the search completed, `None` on budget exhaustion.
#[allow(clippy::too_many_arguments)]
fn s_sum_dfs(
    spec: &GroupSpec,
    g: GroupElement,
    s: usize,
    f2: &Set,
    candidates: &[GroupElement],
    from: usize,
    chosen: &mut Vec<GroupElement>,
    nodes: &mut u64,
) -> Option<bool> {
    *nodes += 1;
    if *nodes > SEARCH_BUDGET {
        return None;
    }
    if chosen.len() == s - 1 {
        let last = spec.sub(g, spec.sum(chosen.iter().copied()));
        let sorted_tail = chosen.last().is_none_or(|&p| last >= p);
        let ok = sorted_tail && candidates.binary_search(&last).is_ok() && differences_ok(spec, f2, chosen, last);
        if ok {
            chosen.push(last);
        }
        return Some(ok);
    }
    for i in from..candidates.len() {
        let y = candidates[i];
        if !differences_ok(spec, f2, chosen, y) {
            continue;
        }
        chosen.push(y);
        match s_sum_dfs(spec, g, s, f2, candidates, i, chosen, nodes) {
            Some(true) => return Some(true),
            None => return None,
            Some(false) => {}
        }
        chosen.pop();
    }
    Some(false)
}

/// Splits a zero-sum set into zero-sum parts of the given sizes (each at
/// least 3), returned in the order of `sizes`.
///
/// The fast path fills every part but the largest with all but three of its
/// elements, then repairs each with a distinct triple drawn from a reserved
/// pool; whatever remains of the pool forms the largest part. If a repair
/// triple does not exist, a complete backtracking search takes over.
pub fn partition_zero_sum(spec: &GroupSpec, set: &Set, sizes: &[usize]) -> Result<Vec<Set>, ConstructError> {
    if let Some(&m) = sizes.iter().find(|&&m| m < 3) {
        return Err(ConstructError::Precondition(format!("part size {m} is below 3")));
    }
    if sizes.iter().sum::<usize>() != set.len() {
        return Err(ConstructError::Precondition(format!(
            "sizes sum to {} but the set has {} elements",
            sizes.iter().sum::<usize>(),
            set.len()
        )));
    }
    if spec.sum(set.iter().copied()) != spec.identity() {
        return Err(ConstructError::Precondition("the set does not sum to 0".into()));
    }
    if sizes.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(parts) = greedy_partition(spec, set, sizes) {
        return Ok(parts);
    }
    backtrack_partition(spec, set, sizes)
}

fn greedy_partition(spec: &GroupSpec, set: &Set, sizes: &[usize]) -> Option<Vec<Set>> {
    let p = sizes.len();
    let big = (0..p).max_by_key(|&j| (sizes[j], std::cmp::Reverse(j)))?;
    let elems: Vec<GroupElement> = set.iter().copied().collect();
    let reserve = sizes[big] + 3 * (p - 1);
    let mut pool: Set = elems[..reserve].iter().copied().collect();
    let mut rest = elems[reserve..].iter().copied();
    let mut parts = vec![Set::new(); p];
    for j in (0..p).filter(|&j| j != big) {
        let mut part: Set = rest.by_ref().take(sizes[j] - 3).collect();
        let need = spec.neg(spec.sum(part.iter().copied()));
        let (x, y, z) = find_triple_prescribed_sum(spec, &pool, &Set::new(), &Set::new(), need, true).ok()?;
        for a in [x, y, z] {
            pool.remove(&a);
            part.insert(a);
        }
        parts[j] = part;
    }
    parts[big] = pool;
    Some(parts)
}

fn backtrack_partition(spec: &GroupSpec, set: &Set, sizes: &[usize]) -> Result<Vec<Set>, ConstructError> {
    let mut remaining: Vec<GroupElement> = set.iter().copied().collect();
    let mut parts: Vec<Vec<GroupElement>> = Vec::new();
    let mut nodes = 0u64;
    match fill_parts(spec, sizes, &mut remaining, &mut parts, &mut nodes) {
        Some(true) => Ok(parts.into_iter().map(|p| p.into_iter().collect()).collect()),
        Some(false) => Err(ConstructError::NoPartition),
        None => Err(ConstructError::Budget("zero-sum partition search".into())),
    }
}

fn fill_parts(
    spec: &GroupSpec,
    sizes: &[usize],
    remaining: &mut Vec<GroupElement>,
    parts: &mut Vec<Vec<GroupElement>>,
    nodes: &mut u64,
) -> Option<bool> {
    let j = parts.len();
    if j + 1 == sizes.len() {
        // The final part is what is left, and sums to 0 automatically.
        parts.push(remaining.clone());
        return Some(true);
    }
    let mut current = Vec::with_capacity(sizes[j]);
    choose_part(spec, sizes, remaining, parts, &mut current, 0, nodes)
}

fn choose_part(
    spec: &GroupSpec,
    sizes: &[usize],
    remaining: &mut Vec<GroupElement>,
    parts: &mut Vec<Vec<GroupElement>>,
    current: &mut Vec<GroupElement>,
    from: usize,
    nodes: &mut u64,
) -> Option<bool> {
    *nodes += 1;
    if *nodes > SEARCH_BUDGET {
        return None;
    }
    let size = sizes[parts.len()];
    if current.len() + 1 == size {
        let last = spec.neg(spec.sum(current.iter().copied()));
        let Ok(pos) = remaining.binary_search(&last) else {
            return Some(false);
        };
        if pos < from {
            return Some(false);
        }
        current.push(last);
        let snapshot = remaining.clone();
        remaining.retain(|a| !current.contains(a));
        parts.push(current.clone());
        let result = fill_parts(spec, sizes, remaining, parts, nodes);
        if result != Some(true) {
            parts.pop();
            *remaining = snapshot;
            current.pop();
        }
        return result;
    }
    for i in from..remaining.len() {
        current.push(remaining[i]);
        let r = choose_part(spec, sizes, remaining, parts, current, i + 1, nodes);
        if r != Some(false) {
            return r;
        }
        current.pop();
    }
    Some(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn e(i: u32) -> GroupElement {
        GroupElement::from_index(i)
    }

    fn set(ix: &[u32]) -> Set {
        ix.iter().map(|&i| e(i)).collect()
    }

    #[test]
    fn triple_in_z7_is_first_lexicographic() {
        let z7 = g("Z7");
        let all: Set = z7.elements().collect();
        let (x, y, z) = find_triple_prescribed_sum(&z7, &all, &Set::new(), &Set::new(), e(0), true).unwrap();
        assert_eq!((x, y, z), (e(0), e(1), e(6)));
        assert_eq!(z7.sum([x, y, z]), e(0));
    }

    #[test]
    fn triple_in_z5_avoiding_zero_does_not_exist() {
        let z5 = g("Z5");
        let all: Set = z5.elements().collect();
        let r = find_triple_prescribed_sum(&z5, &all, &set(&[0]), &Set::new(), e(0), true);
        assert_eq!(r, Err(ConstructError::NoTriple));
    }

    #[test]
    fn triple_in_z2_cubed_is_the_basis() {
        let z = g("Z2^3");
        let all: Set = z.elements().collect();
        let b = z.element(&[1, 1, 1]).unwrap();
        let first = find_triple_prescribed_sum(&z, &all, &Set::new(), &Set::new(), b, true).unwrap();
        assert_eq!(first, (e(0), e(1), e(6)));
        let (x, y, w) = find_triple_prescribed_sum(&z, &all, &set(&[0]), &Set::new(), b, true).unwrap();
        assert_eq!([x, y, w], [z.basis(2), z.basis(1), z.basis(0)]);
    }

    #[test]
    fn triple_translates_are_disjoint() {
        let z = g("Z31");
        let all: Set = z.elements().collect();
        let n = set(&[0, 1, 5]);
        let (x, y, w) = find_triple_prescribed_sum(&z, &all, &set(&[3]), &n, e(4), true).unwrap();
        let tr = |a| n.iter().map(|&m| z.add(a, m)).collect::<Set>();
        assert!(tr(x).is_disjoint(&tr(y)) && tr(y).is_disjoint(&tr(w)) && tr(x).is_disjoint(&tr(w)));
        assert!([x, y, w].iter().all(|a| !tr(*a).contains(&e(3))));
        assert_eq!(z.sum([x, y, w]), e(4));
    }

    #[test]
    fn pair_sum_examples() {
        let z5 = g("Z5");
        assert_eq!(find_pair_sum(&z5, e(0), &Set::new()).unwrap(), (e(1), e(4)));
        let z4 = g("Z4");
        assert_eq!(find_pair_sum(&z4, e(2), &Set::new()), Ok((e(0), e(2))));
        assert!(find_pair_sum(&z4, e(2), &set(&[1])).is_err(), "|F1| = n/4");
        let z8 = g("Z8");
        assert_eq!(find_pair_sum(&z8, e(2), &set(&[1])), Ok((e(0), e(2))));
        assert!(matches!(
            find_pair_sum(&g("Z2^3"), e(3), &Set::new()),
            Err(ConstructError::Precondition(_))
        ));
    }

    #[test]
    fn s_sum_examples() {
        let z7 = g("Z7");
        assert_eq!(
            find_s_sum(&z7, e(0), 3, &Set::new(), &set(&[0])).unwrap(),
            vec![e(0), e(1), e(6)]
        );
        let z8 = g("Z8");
        let y = find_s_sum(&z8, e(1), 3, &set(&[0]), &set(&[0])).unwrap();
        assert_eq!(y, vec![e(1), e(2), e(6)]);
        assert!(find_s_sum(&z8, e(1), 2, &Set::new(), &Set::new()).is_err());
    }

    #[test]
    fn s_sum_respects_differences() {
        let z = g("Z3xZ5");
        let f2 = set(&[0, 1, 14]);
        let y = find_s_sum(&z, e(7), 4, &set(&[0, 4]), &f2).unwrap();
        assert_eq!(z.sum(y.iter().copied()), e(7));
        for i in 0..4 {
            assert!(!set(&[0, 4]).contains(&y[i]));
            for j in 0..4 {
                if i != j {
                    assert!(!f2.contains(&z.sub(y[i], y[j])));
                }
            }
        }
    }

    #[test]
    fn partition_whole_set() {
        let z5 = g("Z5");
        let all: Set = z5.elements().collect();
        assert_eq!(partition_zero_sum(&z5, &all, &[5]).unwrap(), vec![all]);
    }

    #[test]
    fn partition_z7() {
        let z7 = g("Z7");
        let all: Set = z7.elements().collect();
        let parts = partition_zero_sum(&z7, &all, &[3, 4]).unwrap();
        assert_eq!(parts[0], set(&[0, 1, 6]));
        assert_eq!(parts[1], set(&[2, 3, 4, 5]));
    }

    #[test]
    fn partition_z9_without_zero() {
        let z9 = g("Z9");
        let s: Set = z9.elements().skip(1).collect();
        let parts = partition_zero_sum(&z9, &s, &[4, 4]).unwrap();
        assert_eq!(parts.iter().map(Set::len).collect::<Vec<_>>(), vec![4, 4]);
        for p in &parts {
            assert_eq!(z9.sum(p.iter().copied()), e(0));
        }
    }

    #[test]
    fn backtracking_agrees_with_existence() {
        let z5 = g("Z5");
        let s: Set = z5.elements().skip(1).collect();
        assert_eq!(partition_zero_sum(&z5, &s, &[4]).unwrap(), vec![s.clone()]);
        let z = g("Z3^2");
        let all: Set = z.elements().collect();
        let parts = backtrack_partition(&z, &all, &[3, 3, 3]).unwrap();
        let union: Set = parts.iter().flatten().copied().collect();
        assert_eq!(union, all);
        for p in &parts {
            assert_eq!(p.len(), 3);
            assert_eq!(z.sum(p.iter().copied()), e(0));
        }
    }

    #[test]
    fn partition_preconditions() {
        let z7 = g("Z7");
        let all: Set = z7.elements().collect();
        assert!(partition_zero_sum(&z7, &all, &[2, 5]).is_err());
        assert!(partition_zero_sum(&z7, &all, &[3, 3]).is_err());
        let s: Set = z7.elements().skip(1).take(3).collect();
        assert!(partition_zero_sum(&z7, &s, &[3]).is_err());
    }
}
