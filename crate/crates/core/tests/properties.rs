//! Property tests for the structural invariants.

use std::collections::BTreeSet;

use proptest::prelude::*;

use cayley_rainbow::cayley::{edge_color_sum, weighted_vertex_sum, Embedding};
use cayley_rainbow::construct::{find_pair_sum, partition_zero_sum};
use cayley_rainbow::group::{GroupElement, GroupSpec};
use cayley_rainbow::tree::{
    component_sizes_without, find_core, layered_matching_decomposition, split_small_components, Forest, Tree,
};

fn prufer(max_n: usize) -> impl Strategy<Value = Tree> {
    (3..=max_n).prop_flat_map(|n| proptest::collection::vec(0..n, n - 2).prop_map(|s| Tree::from_prufer(&s).unwrap()))
}

fn group() -> impl Strategy<Value = GroupSpec> {
    proptest::collection::vec(2u64..=9, 1..=3).prop_map(|f| GroupSpec::from_cyclic_factors(&f).unwrap())
}

/// A group, a tree on at most `|G|` vertices and an injective map into `G`.
fn injective_instance() -> impl Strategy<Value = (GroupSpec, Tree, Vec<GroupElement>)> {
    group()
        .prop_flat_map(|spec| {
            let order = spec.order();
            let elems: Vec<GroupElement> = spec.elements().collect();
            (Just(spec), prufer(order.clamp(3, 40)), Just(elems).prop_shuffle())
        })
        .prop_filter_map("tree larger than the group", |(spec, tree, mut elems)| {
            (tree.n() <= elems.len()).then(|| {
                elems.truncate(tree.n());
                (spec, tree, elems)
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn edge_colour_sum_is_degree_weighted((spec, tree, images) in injective_instance()) {
        let f = Embedding::from_images(spec, images).unwrap();
        prop_assert_eq!(edge_color_sum(&tree, &f).unwrap(), weighted_vertex_sum(&tree, &f).unwrap());
    }

    #[test]
    fn pair_sum_avoids_forbidden(n in 3u64..60, g in any::<u32>(), picks in proptest::collection::vec(any::<u32>(), 0..15)) {
        let spec = GroupSpec::cyclic(n).unwrap();
        prop_assume!(spec.elementary_two_rank().is_none());
        let f1: BTreeSet<GroupElement> = picks.iter()
            .map(|&p| GroupElement::from_index(p % n as u32))
            .take((n as usize - 1) / 4)
            .collect();
        let g = GroupElement::from_index(g % n as u32);
        let (y1, y2) = find_pair_sum(&spec, g, &f1).unwrap();
        prop_assert_ne!(y1, y2);
        prop_assert_eq!(spec.add(y1, y2), g);
        prop_assert!(!f1.contains(&y1) && !f1.contains(&y2));
    }

    #[test]
    fn zero_sum_partition_random(n in 9u64..=50, sizes_seed in any::<u64>(), drop_seed in any::<u64>()) {
        let spec = GroupSpec::cyclic(n).unwrap();
        // Remove a zero-sum pair (or nothing) so the set still sums to 0.
        let mut set: BTreeSet<GroupElement> = spec.elements().collect();
        let total = spec.sum_all();
        if total != spec.identity() {
            set.remove(&total);
        }
        let a = spec.from_integer((drop_seed % n) as i64);
        let b = spec.neg(a);
        if a != b && set.contains(&a) && set.contains(&b) && set.len() >= 11 {
            set.remove(&a);
            set.remove(&b);
        }
        let m = set.len();
        let mut sizes = Vec::new();
        let mut left = m;
        let mut s = sizes_seed;
        while left >= 6 {
            let take = 3 + (s % (left as u64 - 5)) as usize;
            sizes.push(take);
            left -= take;
            s /= 7;
        }
        if left > 0 {
            match sizes.last_mut() {
                Some(last) if left < 3 => *last += left,
                _ => sizes.push(left),
            }
        }
        let parts = partition_zero_sum(&spec, &set, &sizes).unwrap();
        prop_assert_eq!(parts.len(), sizes.len());
        let mut union = BTreeSet::new();
        for (p, &size) in parts.iter().zip(&sizes) {
            prop_assert_eq!(p.len(), size);
            prop_assert_eq!(spec.sum(p.iter().copied()), spec.identity());
            union.extend(p.iter().copied());
        }
        prop_assert_eq!(union, set);
    }

    #[test]
    fn cores_are_valid_and_small(tree in prufer(120)) {
        let core = find_core(&tree, None).unwrap();
        prop_assert!(core.is_valid_for(&tree));
        prop_assert!(core.len() <= 12 * tree.max_degree());
    }

    #[test]
    fn splits_and_layers(tree in prufer(200), m_pick in any::<usize>()) {
        let n = tree.n();
        prop_assume!(n >= 10);
        let m = 1 + m_pick % (n / 10);
        let cut = split_small_components(&tree, m).unwrap();
        prop_assert!(cut.len() * m <= 3 * n);
        prop_assert!(component_sizes_without(&tree, &cut).iter().all(|&s| s <= m));
        let forest = Forest::tree_minus(&tree, &cut);
        let layered = layered_matching_decomposition(&forest, m, None).unwrap();
        prop_assert!(layered.is_valid_for(&forest));
        prop_assert!(layered.layers.len() <= m.max(1));
        let mut edges: Vec<(usize, usize)> = layered.matchings.iter().flatten()
            .map(|&(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        let mut expected: Vec<(usize, usize)> = forest.edges().iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        expected.sort_unstable();
        prop_assert_eq!(edges, expected);
    }

    #[test]
    fn group_laws(spec in group(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>(), d in -40i64..40) {
        let n = spec.order() as u32;
        let (a, b, c) = (GroupElement::from_index(a % n), GroupElement::from_index(b % n), GroupElement::from_index(c % n));
        prop_assert_eq!(spec.add(a, b), spec.add(b, a));
        prop_assert_eq!(spec.add(spec.add(a, b), c), spec.add(a, spec.add(b, c)));
        prop_assert_eq!(spec.add(a, spec.neg(a)), spec.identity());
        let mut rep = spec.identity();
        for _ in 0..d.unsigned_abs() {
            rep = spec.add(rep, a);
        }
        if d < 0 {
            rep = spec.neg(rep);
        }
        prop_assert_eq!(spec.scalar_mul(d, a), rep);
    }
}
