//! Fill a Seifert-fibered tangle along 7/3, find a new framed tangle for the
//! result, and check the determinant of its 13/9 closure.

use qalink::families::{iterate_fill, seifert_tangle};
use qalink::{determinant, Slope};

pub fn run_example() -> String {
    let base = seifert_tangle(&[Slope::new(1, 2).unwrap(), Slope::new(-1, 5).unwrap()], 0).unwrap();
    let next = iterate_fill(&base, Slope::new(7, 3).unwrap()).unwrap();
    let r = Slope::new(13, 9).unwrap();
    let d = next.closure(r).unwrap();
    format!(
        "base {:?}\nnext {:?}\ntau({r}) det={} predicted={}\n",
        base.invariants(),
        next.invariants(),
        determinant(&d),
        next.predicted_det(r)
    )
}

fn main() {
    print!("{}", run_example());
}
