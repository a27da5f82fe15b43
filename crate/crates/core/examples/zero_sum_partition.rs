// Zero-sum partitions and prescribed-sum tuples.

use std::collections::BTreeSet;

use cayley_rainbow::construct::{find_pair_sum, find_s_sum, find_triple_prescribed_sum, partition_zero_sum};
use cayley_rainbow::group::GroupSpec;

pub fn run_example() {
    let z13 = GroupSpec::cyclic(13).expect("valid order");
    let all: BTreeSet<_> = z13.elements().collect();
    let parts = partition_zero_sum(&z13, &all, &[3, 4, 6]).expect("partition exists");
    for p in &parts {
        let shown: Vec<String> = p.iter().map(|&a| z13.format_element(a)).collect();
        println!(
            "part {{{}}} sums to {}",
            shown.join(", "),
            z13.format_element(z13.sum(p.iter().copied()))
        );
    }

    let z7 = GroupSpec::cyclic(7).expect("valid order");
    let x: BTreeSet<_> = z7.elements().collect();
    let (a, b, c) = find_triple_prescribed_sum(&z7, &x, &BTreeSet::new(), &[z7.identity()].into(), z7.identity(), true)
        .expect("triple exists");
    println!(
        "distinct triple summing to 0 in Z7: {}, {}, {}",
        a.index(),
        b.index(),
        c.index()
    );

    let z5 = GroupSpec::cyclic(5).expect("valid order");
    let (y1, y2) = find_pair_sum(&z5, z5.identity(), &BTreeSet::new()).expect("pair exists");
    println!(
        "pair summing to 0 in Z5: {}, {}",
        z5.format_element(y1),
        z5.format_element(y2)
    );

    let z8 = GroupSpec::cyclic(8).expect("valid order");
    let f2: BTreeSet<_> = [z8.identity()].into();
    let ys = find_s_sum(&z8, z8.from_integer(1), 3, &BTreeSet::new(), &f2).expect("tuple exists");
    let shown: Vec<String> = ys.iter().map(|&a| z8.format_element(a)).collect();
    println!("three distinct elements of Z8 summing to 1: {}", shown.join(", "));
}

#[allow(dead_code)]
fn main() {
    run_example();
}
