// Harmonious labellings of a tree from a rainbow embedding of the tree with
// one leaf removed.

use cayley_rainbow::cayley::TargetSets;
use cayley_rainbow::group::GroupSpec;
use cayley_rainbow::harness::{check_harmonious, harmonious_from_rainbow};
use cayley_rainbow::solve::{find_rainbow, SearchConfig, SolveOutcome};
use cayley_rainbow::tree::{enumerate_trees, Tree};

fn labelling_for(t_plus: &Tree) -> Option<Vec<u64>> {
    let leaf = *t_plus.leaves().first()?;
    let (tree, _) = t_plus.remove_leaf(leaf)?;
    let spec = GroupSpec::cyclic(tree.n() as u64).ok()?;
    let cfg = SearchConfig::decide().with_symmetry(true);
    match find_rainbow(&tree, &spec, &TargetSets::full(&spec), &cfg).ok()? {
        SolveOutcome::Found(f) => harmonious_from_rainbow(t_plus, leaf, &f).ok().map(|h| h.labels),
        _ => None,
    }
}

pub fn run_example() {
    let t = Tree::from_edges(7, &[(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (4, 6)]).expect("valid tree");
    if let Some(labels) = labelling_for(&t) {
        println!("labels {labels:?}, harmonious: {}", check_harmonious(&t, &labels));
    }
    let mut total = 0;
    let mut ok = 0;
    for t in enumerate_trees(8, usize::MAX).expect("small order") {
        total += 1;
        if labelling_for(&t).is_some_and(|l| check_harmonious(&t, &l)) {
            ok += 1;
        }
    }
    println!("{ok} of {total} trees on 8 vertices labelled harmoniously");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
