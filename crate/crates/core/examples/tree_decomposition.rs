// Structural tools: cores, approximations, small-component splits and
// layered matching decompositions.

use cayley_rainbow::tree::{
    component_sizes_without, find_approximation, find_core, layered_matching_decomposition, split_small_components,
    Forest, Tree,
};

/// A caterpillar-like tree with long bare paths hanging off a spine.
fn sample_tree() -> Tree {
    let mut edges = Vec::new();
    let spine = 12;
    for i in 1..spine {
        edges.push((i - 1, i));
    }
    let mut next = spine;
    for i in 0..spine {
        // a leg of length 4 from every spine vertex
        let mut prev = i;
        for _ in 0..4 {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        if i % 2 == 0 {
            edges.push((i, next));
            next += 1;
        }
    }
    Tree::from_edges(next, &edges).expect("valid tree")
}

pub fn run_example() {
    let t = sample_tree();
    let n = t.n();
    println!("tree with {n} vertices, max degree {}", t.max_degree());

    let core = find_core(&t, None).expect("core exists");
    assert!(core.is_valid_for(&t));
    println!(
        "core: {} vertices (bound 12*Delta = {}), exhausted degrees {:?}, open degrees {:?}",
        core.len(),
        12 * t.max_degree(),
        core.exhausted_degrees,
        core.open_degrees(&t)
    );

    match find_approximation(&t, &core, 3) {
        Ok(a) => println!(
            "{:?} approximation keeps {} vertices, removes {} edges, identities hold: {}",
            a.kind,
            a.kept_vertices.len(),
            a.removed_edges.len(),
            a.ratio_identities_hold(n)
        ),
        Err(e) => println!("no approximation: {e}"),
    }

    let m = n / 10;
    let cut = split_small_components(&t, m).expect("m within range");
    let sizes = component_sizes_without(&t, &cut);
    println!(
        "split with m = {m}: |I| = {} (bound {}), largest component {}",
        cut.len(),
        3 * n / m,
        sizes.iter().max().copied().unwrap_or(0)
    );

    let forest = Forest::tree_minus(&t, &cut);
    let layered = layered_matching_decomposition(&forest, m, None).expect("components fit");
    assert!(layered.is_valid_for(&forest));
    println!(
        "layered decomposition: {} layers covering {} edges",
        layered.layers.len(),
        layered.matchings.iter().map(Vec::len).sum::<usize>()
    );
}

#[allow(dead_code)]
fn main() {
    run_example();
}
