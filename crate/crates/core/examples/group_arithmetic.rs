// Finite abelian group arithmetic: canonical forms, parsing, sums and the
// pair-solution counts used by the constructions.

use cayley_rainbow::group::{enumerate_abelian_groups, GroupSpec};

pub fn run_example() {
    let g: GroupSpec = "Z2xZ6".parse().expect("valid group");
    // Z2 x Z6 is stored as Z2 x Z2 x Z3, and elements use that form.
    println!("{g}: order {}, exponent {}", g.order(), g.characteristic());

    let a = g.parse_element("(1,1,2)").expect("valid element");
    let b = g.element(&[1, 0, -1]).expect("valid element");
    let s = g.add(a, b);
    println!(
        "{} + {} = {}",
        g.format_element(a),
        g.format_element(b),
        g.format_element(s)
    );
    println!("-5*{} = {}", g.format_element(a), g.format_element(g.scalar_mul(-5, a)));
    println!("sum of all elements: {}", g.format_element(g.sum_all()));

    let z30 = GroupSpec::cyclic(30).expect("valid order");
    assert!(z30.is_cyclic());
    let seven = z30.from_integer(7);
    println!("7 in Z30 has residues {:?}", z30.residues(seven));

    for n in [8u64, 12, 16] {
        let groups = enumerate_abelian_groups(n).expect("positive order");
        let names: Vec<String> = groups.iter().map(ToString::to_string).collect();
        println!("groups of order {n}: {}", names.join(", "));
    }

    // y1 + y2 = g with y1 != y2 has more than n/2 ordered solutions unless G = Z2^k.
    for spec in enumerate_abelian_groups(12).expect("positive order") {
        let worst = spec
            .elements()
            .map(|x| spec.ordered_pair_solutions(x))
            .min()
            .unwrap_or(0);
        println!(
            "{spec}: fewest ordered pair solutions {worst} (n/2 = {})",
            spec.order() / 2
        );
        assert!(2 * worst > spec.order());
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
