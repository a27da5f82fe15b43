// Deterministic core embeddings, their extension to pseudoembeddings and
// the certificate recovered from a full rainbow embedding.

use cayley_rainbow::cayley::{is_pseudoembedding, TargetSets};
use cayley_rainbow::construct::{
    build_core_embedding, core_certificate_from_embedding, extend_to_pseudoembedding, find_simple_xast, StarMultiset,
};
use cayley_rainbow::group::GroupSpec;
use cayley_rainbow::solve::{find_rainbow, SearchConfig, SolveOutcome};
use cayley_rainbow::tree::{find_core, Tree};

pub fn run_example() {
    let spec = GroupSpec::cyclic(30).expect("valid order");
    let tree = Tree::path(30);
    let core = find_core(&tree, None).expect("core exists");
    let result = build_core_embedding(&tree, &core, &spec).expect("path over Z30 embeds");
    println!(
        "path over Z30: {:?} core map on {} vertices, c_special = {}, slack bound holds: {}",
        result.method,
        result.phi.assigned().count(),
        spec.format_element(result.c_special),
        result.slack_bound_holds
    );

    let f = extend_to_pseudoembedding(&tree, &core, &result.phi, &result.targets).expect("extension exists");
    assert!(is_pseudoembedding(&tree, &f, &result.targets));
    println!("pseudoembedding covers {} vertices", f.assigned().count());

    // Distinct degree-weighted sums for the high-degree core vertices.
    let spider = Tree::from_edges(
        10,
        &[(0, 1), (0, 2), (0, 3), (3, 4), (3, 5), (3, 6), (6, 7), (6, 8), (6, 9)],
    )
    .expect("valid tree");
    let z31 = GroupSpec::cyclic(31).expect("valid order");
    let v = [0, 3, 6];
    let x = find_simple_xast(&spider, &v, &z31).expect("simple multiset exists");
    let star = StarMultiset::x_ast_tree(&z31, &spider, &v, &x);
    let shown: Vec<String> = x.iter().map(|&a| z31.format_element(a)).collect();
    println!(
        "x = [{}], multiset of size {} simple: {}",
        shown.join(", "),
        star.len(),
        star.is_simple()
    );

    // Any rainbow embedding restricts to a certificate on a core.
    let z8 = GroupSpec::cyclic(8).expect("valid order");
    let t8 = Tree::from_edges(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (5, 6), (3, 7)]).expect("valid tree");
    let core8 = find_core(&t8, None).expect("core exists");
    if let SolveOutcome::Found(g) =
        find_rainbow(&t8, &z8, &TargetSets::full(&z8), &SearchConfig::decide()).expect("valid instance")
    {
        let cert = core_certificate_from_embedding(&t8, &g, &core8, &z8).expect("certificate exists");
        println!(
            "certificate: core map {} with {} triples",
            cert.phi.to_json(),
            cert.triples.len()
        );
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
