//! Runs every crate example in-process and checks its headline output.

#[allow(dead_code)]
#[path = "../examples/determinants.rs"]
mod determinants;
#[allow(dead_code)]
#[path = "../examples/rational_closures.rs"]
mod rational_closures;
#[allow(dead_code)]
#[path = "../examples/certify.rs"]
mod certify;
#[allow(dead_code)]
#[path = "../examples/pretzel_family.rs"]
mod pretzel_family;
#[allow(dead_code)]
#[path = "../examples/seifert_iteration.rs"]
mod seifert_iteration;
#[allow(dead_code)]
#[path = "../examples/surgery_arithmetic.rs"]
mod surgery_arithmetic;
#[allow(dead_code)]
#[path = "../examples/paper_check.rs"]
mod paper_check;

#[test]
fn determinants_example() {
    let out = determinants::run_example();
    assert!(out.contains("trefoil        3"));
    assert!(out.contains("figure-eight   5"));
    assert!(out.contains("unlink of two  0"));
}

#[test]
fn rational_closures_example() {
    let out = rational_closures::run_example();
    assert!(out.contains("b(13/10) cf=[1,3,3] crossings=7 det=13"));
    assert!(out.contains("tau(7/3) det=51"));
}

#[test]
fn certify_example() {
    let out = certify::run_example();
    assert!(out.starts_with("root=Some([51, 35, 16])"));
    assert!(out.contains("unlink certified=false"));
}

#[test]
fn pretzel_family_example() {
    let out = pretzel_family::run_example();
    assert!(out.contains("6/1 det=35 pred=35 split=31+4 cert=ok"));
}

#[test]
fn seifert_iteration_example() {
    assert!(seifert_iteration::run_example().contains("tau(13/9) det=1293 predicted=1293"));
}

#[test]
fn surgery_arithmetic_example() {
    let out = surgery_arithmetic::run_example();
    assert!(out.contains("C(2,5): 9/1 -> 9/4"));
    assert!(out.contains("S²(2,5,7)"));
}

#[test]
fn paper_check_example() {
    let out = paper_check::run_example();
    assert!(out.contains("24/24 rows pass"));
    let failing = out.lines().last().unwrap();
    for name in ["τ′(1/0)", "τ′(0)", "τ′(1)", "root certificate split"] {
        assert!(failing.contains(name), "{failing}");
    }
    assert!(!failing.contains("Seifert"));
}
