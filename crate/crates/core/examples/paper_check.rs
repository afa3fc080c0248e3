//! Recompute every published constant, then rerun the check with a corrupted
//! pretzel tangle to see the affected rows fail.

use qalink::cli::{paper_check, PaperFixtures};
use qalink::tangle::Tangle;
use qalink::Slope;

pub fn run_example() -> String {
    let report = paper_check(&PaperFixtures::default());
    assert!(report.passed());

    let corrupted = Tangle::rational(Slope::new(1, 4).unwrap())
        .stack(&Tangle::rational(Slope::new(2, 5).unwrap()))
        .sum(&Tangle::integer_twists(-1));
    let bad = paper_check(&PaperFixtures { pretzel: corrupted });
    let failing: Vec<_> = bad.rows.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    format!("{report}corrupted fixture fails: {}\n", failing.join("; "))
}

fn main() {
    print!("{}", run_example());
}
