//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::Command;

use num_bigint::BigUint;
use num_integer::Integer;
use qalink::families::{corpus, iterate_fill, pretzel_quotient_tangle, seifert_tangle, verify_family};
use qalink::qa::{certify_qa, certify_qa_at, verify_certificate, BaseKind, CertKind, Det, QACertificate, DEFAULT_BUDGET};
use qalink::slopes::{cable_image_slope, cf_evaluate, cf_expand, cf_resolve_last, heil_orbifold, ContinuedFraction};
use qalink::tangle::{final_ladder_crossing, montesinos_tangle, two_bridge_diagram};
use qalink::{determinant, determinant_oracle, parse_pd, LinkDiagram, Slope};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn s(p: i64, q: i64) -> Slope {
    Slope::new(p, q).unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg.into()) }
}

fn det_u64(d: &LinkDiagram) -> u64 {
    determinant(d).try_into().expect("small determinant")
}

fn two_bridge_dets() -> Outcome {
    let mut cases = 0;
    for p in 2..=50i64 {
        for q in (1..p).filter(|q| q.gcd(&p) == 1) {
            let d = two_bridge_diagram(s(p, q)).map_err(|e| e.to_string())?;
            ensure(det_u64(&d) == p as u64, format!("det b({p}/{q}) = {}", determinant(&d)))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} two-bridge links"))
}

fn oracle_equivalence() -> Outcome {
    let entries = corpus(16);
    ensure(entries.len() >= 200, format!("corpus has only {} diagrams", entries.len()))?;
    for e in &entries {
        ensure(e.diagram.crossing_count() <= 16, format!("{} is too large", e.name))?;
        let (a, b) = (determinant(&e.diagram), determinant_oracle(&e.diagram));
        ensure(a == b, format!("{}: goeritz {a} vs colouring {b}", e.name))?;
    }
    Ok(format!("{} diagrams", entries.len()))
}

fn root_split(d: &LinkDiagram, crossing: usize) -> Result<[u64; 3], String> {
    let outcome = certify_qa_at(d, crossing, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let cert = outcome.certificate().ok_or("inconclusive")?;
    ensure(verify_certificate(cert), "certificate does not verify")?;
    cert.det_triple().ok_or_else(|| "root is a leaf".to_string())
}

fn pretzel_constants() -> Outcome {
    let t = pretzel_quotient_tangle(3).map_err(|e| e.to_string())?;
    let det = |r: Slope| det_u64(&t.closure(r).unwrap());
    ensure(det(Slope::INFINITY) == 4, "det τ′(1/0) ≠ 4")?;
    ensure(det(Slope::ZERO) == 11, "det τ′(0) ≠ 11")?;
    for n in 0..=10 {
        ensure(det(Slope::integer(n)) == (4 * n + 11) as u64, format!("det τ′({n}) ≠ {}", 4 * n + 11))?;
    }
    let one = t.closure(s(1, 1)).unwrap();
    let split = root_split(&one, final_ladder_crossing(s(1, 1)).unwrap())?;
    ensure(split == [15, 11, 4], format!("root split {split:?}"))?;
    Ok("4, 11, 4n+11, 15 = 11 + 4".into())
}

fn seifert_constants() -> Outcome {
    let fractions = [s(1, 2), s(-1, 5)];
    let t = montesinos_tangle(0, &fractions).map_err(|e| e.to_string())?;
    for (r, expected) in [(Slope::INFINITY, 3), (Slope::ZERO, 10), (s(1, 1), 13), (s(7, 3), 51)] {
        let got = det_u64(&t.closure(r).unwrap());
        ensure(got == expected, format!("det τ({r}) = {got}, expected {expected}"))?;
    }
    let knot = t.closure(s(7, 3)).unwrap();
    let split = root_split(&knot, final_ladder_crossing(s(7, 3)).unwrap())?;
    ensure(split == [51, 35, 16], format!("root split {split:?}"))?;
    let base = seifert_tangle(&fractions, 0).map_err(|e| e.to_string())?;
    let next = iterate_fill(&base, s(7, 3)).map_err(|e| e.to_string())?;
    ensure(next.invariants().d_zero == 70, format!("iterated d_zero = {}", next.invariants().d_zero))?;
    let big = determinant(&next.closure(s(13, 9)).unwrap());
    ensure(big == BigUint::from(1293u32), format!("det τ(13/9) = {big}"))?;
    Ok("3, 10, 13, 51 = 35 + 16, 70, 1293".into())
}

fn all_expansions(max_len: usize, max_term: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<u64>> = (0..=max_term).map(|a| vec![a]).collect();
    while let Some(t) = frontier.pop() {
        if *t.last().unwrap() > 0 {
            out.push(t.clone());
        }
        if t.len() < max_len {
            frontier.extend((1..=max_term).map(|a| [t.as_slice(), &[a]].concat()));
        }
    }
    out
}

fn continued_fractions() -> Outcome {
    for (r, terms) in [(s(13, 10), vec![1, 3, 3]), (s(7, 3), vec![2, 3]), (s(13, 9), vec![1, 2, 4])] {
        let cf = cf_expand(r).map_err(|e| e.to_string())?;
        ensure(cf.terms() == terms.as_slice(), format!("{r} expands to {cf}"))?;
    }
    let mut trips = 0;
    for p in 0..=200i64 {
        for q in (1..=200i64).filter(|q| q.gcd(&p) == 1) {
            let r = s(p, q);
            ensure(cf_evaluate(&cf_expand(r).unwrap()) == r, format!("{r} does not round trip"))?;
            trips += 1;
        }
    }
    let expansions = all_expansions(6, 6);
    for terms in &expansions {
        let cf = ContinuedFraction::new(terms.clone()).unwrap();
        let r = cf_evaluate(&cf);
        // Independent recomputation of the two neighbours by direct evaluation.
        let mut lower = terms.clone();
        *lower.last_mut().unwrap() -= 1;
        let upper = &terms[..terms.len() - 1];
        let eval = |t: &[u64]| t.iter().rev().fold((1i64, 0i64), |(p, q), &a| (a as i64 * p + q, p));
        let (r0, r1) = cf_resolve_last(&cf).map_err(|e| e.to_string())?;
        let (a, b) = ((r0.p(), r0.q()), (r1.p(), r1.q()));
        ensure(a.0 + b.0 == r.p() && a.1 + b.1 == r.q(), format!("{cf}: {r0} ⊕ {r1} ≠ {r}"))?;
        let mut expected = [eval(&lower), eval(upper)];
        expected.sort();
        let mut got = [a, b];
        got.sort();
        ensure(normalise(expected) == normalise(got), format!("{cf}: neighbours {got:?} vs {expected:?}"))?;
    }
    Ok(format!("{trips} round trips, {} expansions", expansions.len()))
}

fn normalise(mut pairs: [(i64, i64); 2]) -> [(i64, i64); 2] {
    for (p, q) in pairs.iter_mut() {
        let g = p.gcd(q).max(1);
        *p /= g;
        *q /= g;
    }
    pairs.sort();
    pairs
}

fn determinant_formula_grids() -> Outcome {
    let pretzel = pretzel_quotient_tangle(3).map_err(|e| e.to_string())?;
    let report = verify_family(&pretzel, 12, 1).map_err(|e| e.to_string())?;
    ensure(report.rows.len() == 14, format!("pretzel grid has {} rows", report.rows.len()))?;
    if let Some(row) = report.failures().next() {
        return Err(format!("pretzel {row}"));
    }
    let base = seifert_tangle(&[s(1, 2), s(-1, 5)], 0).map_err(|e| e.to_string())?;
    let report = verify_family(&base, 13, 10).map_err(|e| e.to_string())?;
    let expected = (0..=13i64).flat_map(|p| (1..=10i64).map(move |q| (p, q))).filter(|(p, q)| p.gcd(q) == 1).count() + 1;
    ensure(report.rows.len() == expected, format!("base grid has {} rows, expected {expected}", report.rows.len()))?;
    for row in &report.rows {
        let (p, q) = (row.slope.p() as u64, row.slope.q() as u64);
        ensure(row.det.0 == BigUint::from(3 * p + 10 * q), format!("base {row}"))?;
    }
    if let Some(row) = report.failures().next() {
        return Err(format!("base {row}"));
    }
    Ok(format!("14 pretzel rows, {expected} base rows"))
}

fn surgery_arithmetic() -> Outcome {
    let mut cases = 0;
    for q in 2..=7i64 {
        let mut previous: Option<(i64, i64)> = None;
        for p in (2..=50i64).filter(|p| p.gcd(&q) == 1) {
            let (r, image) = cable_image_slope(p, q, 1, -1).map_err(|e| e.to_string())?;
            let n = p * q - 1;
            ensure(r == Slope::integer(n), format!("C({q},{p}) slope {r}"))?;
            let g = n.gcd(&(q * q));
            ensure(image.p() == n / g && image.q() == q * q / g, format!("C({q},{p}) image {image}"))?;
            if let Some((a, b)) = previous {
                ensure(image.p() * b > a * image.q(), format!("image not increasing at p = {p}, q = {q}"))?;
            }
            previous = Some((image.p(), image.q()));
            cases += 1;
        }
    }
    let orbifold = heil_orbifold(&[2, 5], s(7, 3), Slope::ZERO).to_string();
    ensure(orbifold == "S²(2,5,7)", format!("orbifold {orbifold}"))?;
    Ok(format!("{cases} cables, S²(2,5,7)"))
}

fn mutations(cert: &QACertificate) -> Vec<(&'static str, QACertificate)> {
    fn node_mut(c: &mut QACertificate) -> (&mut usize, &mut Vec<QACertificate>) {
        match &mut c.kind {
            CertKind::Node { crossing, children } => (crossing, children),
            CertKind::Leaf { .. } => panic!("expected an internal node"),
        }
    }
    fn first_leaf(c: &mut QACertificate) -> &mut QACertificate {
        if c.is_leaf() {
            return c;
        }
        first_leaf(&mut node_mut(c).1[0])
    }
    fn bump(d: &mut Det, by: u32) {
        d.0 += by;
    }
    let trefoil = certify_qa(&parse_pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap(), DEFAULT_BUDGET)
        .unwrap()
        .certificate()
        .cloned()
        .unwrap();

    let mut out: Vec<(&'static str, QACertificate)> = Vec::new();
    let mut push = |name, f: &dyn Fn(&mut QACertificate)| {
        let mut c = cert.clone();
        f(&mut c);
        out.push((name, c));
    };
    push("root det raised", &|c| bump(&mut c.det[0], 1));
    push("first child det raised", &|c| bump(&mut c.det[1], 1));
    push("second child det raised", &|c| bump(&mut c.det[2], 2));
    push("child dets swapped", &|c| c.det.swap(1, 2));
    push("root det truncated", &|c| c.det.truncate(1));
    push("crossing index shifted", &|c| *node_mut(c).0 += 1);
    push("crossing index out of range", &|c| *node_mut(c).0 = 10_000);
    push("smoothing label flipped", &|c| {
        let child = &mut node_mut(c).1[0];
        child.smoothing = child.smoothing.map(|s| 1 - s);
    });
    push("smoothing label removed", &|c| node_mut(c).1[1].smoothing = None);
    push("smoothing label invalid", &|c| node_mut(c).1[1].smoothing = Some(7));
    push("child dropped", &|c| {
        node_mut(c).1.pop();
    });
    push("child duplicated", &|c| {
        let children = node_mut(c).1;
        children[1] = children[0].clone();
    });
    push("children swapped", &|c| node_mut(c).1.swap(0, 1));
    push("root PD replaced", &|c| c.pd = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)".into());
    push("root PD malformed", &|c| c.pd = "X(1,2,3)".into());
    push("leaf base kind changed", &|c| {
        let leaf = first_leaf(c);
        leaf.kind = match leaf.kind {
            CertKind::Leaf { base: BaseKind::Unknot } => CertKind::Leaf { base: BaseKind::ReducedAlternatingConnected },
            _ => CertKind::Leaf { base: BaseKind::Unknot },
        };
    });
    push("leaf det raised", &|c| bump(&mut first_leaf(c).det[0], 1));
    push("leaf replaced by split unlink", &|c| {
        let leaf = first_leaf(c);
        leaf.pd = "O O".into();
        leaf.det = vec![Det(0u32.into())];
    });
    push("grandchild det raised", &|c| {
        let child = &mut node_mut(c).1[0];
        if child.is_leaf() {
            bump(&mut child.det[0], 3);
        } else {
            bump(&mut node_mut(child).1[0].det[0], 3);
        }
    });
    push("subtree grafted from another link", &|c| {
        let smoothing = node_mut(c).1[1].smoothing;
        node_mut(c).1[1] = QACertificate { smoothing, ..trefoil.clone() };
    });
    out
}

fn negative_controls() -> Outcome {
    let unlink = parse_pd("O O").map_err(|e| e.to_string())?;
    ensure(determinant(&unlink) == BigUint::from(0u32), "det of split unlink ≠ 0")?;
    ensure(!certify_qa(&unlink, DEFAULT_BUDGET).unwrap().is_certified(), "split unlink certified")?;
    let knot = montesinos_tangle(0, &[s(1, 2), s(-1, 5)]).unwrap().closure(s(7, 3)).unwrap();
    let cert = certify_qa(&knot, DEFAULT_BUDGET).unwrap().certificate().cloned().ok_or("τ(7/3) not certified")?;
    ensure(verify_certificate(&cert), "untampered certificate rejected")?;
    let fixtures = mutations(&cert);
    ensure(fixtures.len() == 20, format!("{} mutation fixtures", fixtures.len()))?;
    for (name, tampered) in &fixtures {
        ensure(tampered != &cert, format!("mutation `{name}` left the certificate unchanged"))?;
        ensure(!verify_certificate(tampered), format!("mutation `{name}` accepted"))?;
        let round_trip = QACertificate::from_json(&tampered.to_json()).map_err(|e| e.to_string())?;
        ensure(!verify_certificate(&round_trip), format!("mutation `{name}` accepted after JSON round trip"))?;
    }
    Ok("split unlink det 0 and inconclusive, 20/20 tampered certificates rejected".into())
}

fn paper_check_cli() -> Outcome {
    let output = Command::new(env!("CARGO_BIN_EXE_qalink")).arg("paper-check").output().map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&output.stdout);
    ensure(output.status.code() == Some(0), format!("exit status {:?}\n{stdout}", output.status.code()))?;
    let rows = stdout.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).count();
    ensure(rows >= 15 && !stdout.contains("FAIL"), format!("{rows} rows\n{stdout}"))?;
    Ok(format!("{rows} rows, exit 0"))
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("two-bridge determinants", two_bridge_dets),
        ("determinant oracle equivalence", oracle_equivalence),
        ("pretzel family constants", pretzel_constants),
        ("Seifert family constants", seifert_constants),
        ("continued fractions", continued_fractions),
        ("determinant formula over slope grids", determinant_formula_grids),
        ("surgery arithmetic", surgery_arithmetic),
        ("negative controls", negative_controls),
        ("paper-check command", paper_check_cli),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                println!("FAIL criterion {}: {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
