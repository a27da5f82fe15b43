// Exact backtracking search: decide, count and enumerate rainbow embeddings.

use cayley_rainbow::cayley::{verify_rainbow, TargetSets};
use cayley_rainbow::group::GroupSpec;
use cayley_rainbow::solve::{count_embeddings, solve_exact, SearchConfig, SolveOutcome, VertexOrder};
use cayley_rainbow::tree::Tree;

pub fn run_example() {
    let spec = GroupSpec::cyclic(7).expect("valid order");
    let tree = Tree::from_edges(7, &[(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (4, 6)]).expect("valid tree");
    let targets = TargetSets::full(&spec);

    let report = solve_exact(&tree, &spec, &targets, None, &SearchConfig::decide()).expect("valid instance");
    if let SolveOutcome::Found(f) = &report.outcome {
        let check = verify_rainbow(&tree, f, &targets).expect("total embedding");
        println!(
            "found {} after {} nodes, verified: {}",
            f.to_json(),
            report.stats.nodes_expanded,
            check.verdict
        );
    }

    let plain = count_embeddings(&tree, &spec, &targets, &SearchConfig::count()).expect("valid instance");
    let reduced =
        count_embeddings(&tree, &spec, &targets, &SearchConfig::count().with_symmetry(true)).expect("valid instance");
    println!("embeddings: {} plain, {} with translation symmetry", plain.0, reduced.0);
    assert_eq!(plain.0, reduced.0);

    // Paths of length 2^k never embed over Z2^k.
    for k in [2usize, 3] {
        let z = GroupSpec::elementary_two(k).expect("valid rank");
        let p = Tree::path(1 << k);
        let (count, _) =
            count_embeddings(&p, &z, &TargetSets::full_minus_zero(&z), &SearchConfig::count()).expect("valid instance");
        println!("P{} over {z}: {count} embeddings", 1 << k);
    }

    // A node limit turns a hard search into an inconclusive answer.
    let big = GroupSpec::cyclic(11).expect("valid order");
    let cfg = SearchConfig::count()
        .with_node_limit(Some(50))
        .with_order(VertexOrder::MostConstrained);
    let r = solve_exact(&Tree::path(11), &big, &TargetSets::full(&big), None, &cfg).expect("valid instance");
    println!("P11 over Z11 with 50 nodes: {}", r.outcome.label());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
