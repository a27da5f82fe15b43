// The four obstructions to a rainbow spanning tree in `K_G`.

use cayley_rainbow::classify::classify;
use cayley_rainbow::group::GroupSpec;
use cayley_rainbow::tree::Tree;

pub fn run_example() {
    let z2_2 = GroupSpec::elementary_two(2).expect("valid rank");
    let z2_3 = GroupSpec::elementary_two(3).expect("valid rank");
    let z3_2: GroupSpec = "Z3^2".parse().expect("valid group");

    let cases = [
        ("path P4", Tree::path(4), z2_2.clone()),
        ("path P4", Tree::path(4), GroupSpec::cyclic(4).expect("valid order")),
        ("star K1,3", Tree::star(3), z2_2),
        (
            "four even vertices matched",
            Tree::from_edges(8, &[(0, 1), (0, 2), (2, 3), (0, 4), (0, 5), (1, 6), (3, 7)]).expect("valid tree"),
            z2_3,
        ),
        (
            "adjacent degrees divisible by 3",
            Tree::from_edges(9, &[(0, 1), (1, 2), (0, 3), (0, 4), (1, 5), (2, 6), (2, 7), (2, 8)]).expect("valid tree"),
            z3_2,
        ),
    ];
    for (name, tree, spec) in cases {
        let report = classify(&tree, &spec).expect("spanning instance");
        let [o1, o2, o3, o4] = report.flags();
        println!(
            "{name} over {spec}: o1={o1} o2={o2} o3={o3} o4={o4} -> obstructed={}",
            report.obstructed
        );
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
