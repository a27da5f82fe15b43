// The core condition: a rainbow core embedding whose weighted sum and image
// sum match the targets, then the completion of the whole tree from it.

use cayley_rainbow::cayley::TargetSets;
use cayley_rainbow::group::GroupSpec;
use cayley_rainbow::solve::{check_core_condition, core_condition_search, solve_with_core, SearchConfig};
use cayley_rainbow::tree::{find_core, Tree};

pub fn run_example() {
    let spec = GroupSpec::cyclic(8).expect("valid order");
    let tree = Tree::from_edges(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (5, 6), (3, 7)]).expect("valid tree");
    let core = find_core(&tree, None).expect("core exists");
    println!(
        "core {:?}, exhausted degrees {:?}",
        core.vertices, core.exhausted_degrees
    );

    // Leave out each colour in turn.
    for c in spec.elements() {
        let targets = TargetSets::full_minus_color(&spec, c);
        match core_condition_search(&tree, &core, &spec, &targets, Some(1_000_000)).expect("valid instance") {
            Some(phi) => {
                assert!(check_core_condition(&tree, &core, &phi, &targets));
                let ext = solve_with_core(&tree, &core, &spec, &targets, &phi, &SearchConfig::decide())
                    .expect("condition holds");
                println!(
                    "missing colour {}: core map {} -> extension {}",
                    spec.format_element(c),
                    phi.to_json(),
                    ext.outcome.label()
                );
            }
            None => println!("missing colour {}: no core map", spec.format_element(c)),
        }
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
