//! Slope arithmetic: distances, cable surgery images, and the orbifold of a
//! Seifert-fibered filling.

use qalink::slopes::{cable_image_slope, heil_orbifold, slope_distance};
use qalink::Slope;

pub fn run_example() -> String {
    let mut out = String::new();
    let (a, b) = (Slope::new(7, 3).unwrap(), Slope::new(5, 2).unwrap());
    out += &format!("distance({a}, {b}) = {}\n", slope_distance(a, b));
    for p in [3, 5, 7] {
        let (r, img) = cable_image_slope(p, 2, 1, -1).unwrap();
        out += &format!("C(2,{p}): {r} -> {img}\n");
    }
    out += &format!("{}\n", heil_orbifold(&[2, 5], a, Slope::ZERO));
    out
}

fn main() {
    print!("{}", run_example());
}
