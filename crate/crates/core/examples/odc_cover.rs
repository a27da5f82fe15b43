// Orthogonal double covers of `K_{2^k}` from the translates of a rainbow tree.

use cayley_rainbow::cayley::{Embedding, TargetSets};
use cayley_rainbow::group::GroupSpec;
use cayley_rainbow::odc::{translates_cover, verify_odc};
use cayley_rainbow::solve::{find_rainbow, SearchConfig, SolveOutcome};
use cayley_rainbow::tree::Tree;

pub fn run_example() {
    // The star on four vertices: each translate is the star at a vertex.
    let z2_2 = GroupSpec::elementary_two(2).expect("valid rank");
    let f = Embedding::from_images(z2_2.clone(), z2_2.elements().collect()).expect("valid map");
    let cover = translates_cover(&Tree::star(3), &f).expect("rainbow star");
    for (g, copy) in cover.copies.iter().enumerate() {
        println!(
            "translate by {}: {copy:?}",
            z2_2.format_element(z2_2.elements().nth(g).expect("in range"))
        );
    }
    println!("K4 verdict: {}", verify_odc(&cover).verdict);

    // A 16-vertex spider over Z2^4.
    let z2_4 = GroupSpec::elementary_two(4).expect("valid rank");
    let mut edges = Vec::new();
    let mut next = 1;
    for len in [1, 2, 3, 4, 5] {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    let tree = Tree::from_edges(next, &edges).expect("valid tree");
    let cfg = SearchConfig::decide().with_symmetry(true);
    match find_rainbow(&tree, &z2_4, &TargetSets::full_minus_zero(&z2_4), &cfg).expect("valid instance") {
        SolveOutcome::Found(f) => {
            let cover = translates_cover(&tree, &f).expect("rainbow tree");
            let report = verify_odc(&cover);
            println!(
                "spider over {z2_4}: {} copies, {} edge slots, verdict {}",
                report.copies, report.edge_slots, report.verdict
            );
        }
        other => println!("spider over {z2_4}: {}", other.label()),
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
