//! The pretzel quotient tangle: det τ′(n) = 4n + 11, each closure certified.

use qalink::families::{pretzel_quotient_tangle, verify_family};

pub fn run_example() -> String {
    let t = pretzel_quotient_tangle(3).unwrap();
    let report = verify_family(&t, 6, 1).unwrap();
    assert!(report.passed());
    report.to_text()
}

fn main() {
    print!("{}", run_example());
}
