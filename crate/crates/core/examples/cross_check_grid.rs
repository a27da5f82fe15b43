// Classifier against exhaustive search over every small tree and group,
// reported as CSV plus a JSON summary.

use cayley_rainbow::harness::{experiment_cross_check, run_report, GridConfig};

pub fn run_example() {
    let rows = experiment_cross_check(&GridConfig::new(7, 4)).expect("grid within limits");
    let mut csv = Vec::new();
    let summary = run_report(&rows, &mut csv).expect("rows are unique");
    let text = String::from_utf8(csv).expect("csv is utf-8");
    for line in text.lines().take(6) {
        println!("{line}");
    }
    println!("...");
    println!("{}", summary.to_json());
    assert_eq!(summary.hard_violations, 0);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
