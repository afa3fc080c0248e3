//! Two-bridge links from continued fractions, and closures of a Montesinos
//! tangle at several slopes.

use qalink::slopes::cf_expand;
use qalink::tangle::{montesinos_tangle, two_bridge_diagram};
use qalink::{determinant, Slope};

pub fn run_example() -> String {
    let mut out = String::new();
    for r in ["5/2", "7/3", "13/10"] {
        let r: Slope = r.parse().unwrap();
        let d = two_bridge_diagram(r).unwrap();
        out += &format!(
            "b({r}) cf={} crossings={} det={}\n",
            cf_expand(r).unwrap(),
            d.crossing_count(),
            determinant(&d)
        );
    }

    let t = montesinos_tangle(0, &["1/2".parse().unwrap(), "-1/5".parse().unwrap()]).unwrap();
    for r in ["1/0", "0", "1", "7/3"] {
        let r: Slope = r.parse().unwrap();
        out += &format!("tau({r}) det={}\n", determinant(&t.closure(r).unwrap()));
    }
    out
}

fn main() {
    print!("{}", run_example());
}
