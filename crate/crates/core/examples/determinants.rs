//! Determinants of a few classic diagrams, computed two independent ways.

use qalink::{determinant, determinant_oracle, parse_pd};

const DIAGRAMS: &[(&str, &str)] = &[
    ("trefoil", "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)"),
    ("figure-eight", "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"),
    ("Hopf link", "X(4,1,3,2) X(2,3,1,4)"),
    ("unlink of two", "O O"),
];

pub fn run_example() -> String {
    let mut out = String::new();
    for (name, pd) in DIAGRAMS {
        let d = parse_pd(pd).expect("valid PD");
        let (goeritz, alexander) = (determinant(&d), determinant_oracle(&d));
        assert_eq!(goeritz, alexander);
        out += &format!("{name:<14} {goeritz}\n");
    }
    out
}

fn main() {
    print!("{}", run_example());
}
