// Enumerating non-isomorphic trees, canonical codes and Prüfer input.

use cayley_rainbow::tree::{enumerate_trees, parse_prufer, Tree};

pub fn run_example() {
    for n in 1..=10 {
        let all = enumerate_trees(n, usize::MAX).expect("small order");
        let low = enumerate_trees(n, 3).expect("small order");
        println!("n = {n:2}: {:3} trees, {:3} with max degree <= 3", all.len(), low.len());
    }

    let a = parse_prufer("3,3,3,4").expect("valid sequence");
    let b = Tree::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (4, 5)]).expect("valid tree");
    println!("prufer 3,3,3,4 -> {}", a.canonical_id());
    println!("star with a tail -> {}", b.canonical_id());
    assert_eq!(a.canonical_id(), b.canonical_id());

    let t: Tree = "5\n0 1\n1 2\n2 3\n1 4\n".parse().expect("valid edge list");
    println!(
        "degrees {:?}, leaves {:?}, centroids {:?}",
        t.degrees(),
        t.leaves(),
        t.centroids()
    );
    print!("{t}");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
