//! Search for a quasi-alternating certificate, check it independently, and
//! show that a split link is reported as inconclusive.

use qalink::qa::{certify_qa, verify_certificate, QACertificate, DEFAULT_BUDGET};
use qalink::tangle::montesinos_tangle;
use qalink::{LinkDiagram, Slope};

pub fn run_example() -> String {
    let t = montesinos_tangle(0, &[Slope::new(1, 2).unwrap(), Slope::new(-1, 5).unwrap()]).unwrap();
    let knot = t.closure(Slope::new(7, 3).unwrap()).unwrap();
    let outcome = certify_qa(&knot, DEFAULT_BUDGET).unwrap();
    let cert = outcome.certificate().expect("certified");
    assert!(verify_certificate(cert));

    let json = cert.to_json();
    let back = QACertificate::from_json(&json).unwrap();
    assert_eq!(&back, cert);

    let unlink = certify_qa(&LinkDiagram::unlink(2), DEFAULT_BUDGET).unwrap();
    format!(
        "root={:?} nodes={} depth={}\nunlink certified={}\n",
        cert.det_triple(),
        cert.node_count(),
        cert.depth(),
        unlink.is_certified()
    )
}

fn main() {
    print!("{}", run_example());
}
