//! Command-line front end: `det`, `certify`, `closure`, `family` and
//! `paper-check`.
//!
//! Exit status is 0 on success, 1 when a check fails or certification is
//! inconclusive, and 2 on usage errors or malformed input.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use crate::determinant::determinant;
use crate::diagram::{parse_pd, LinkDiagram};
use crate::families::{iterate_fill, pretzel_template, seifert_tangle, verify_family, FramedQATangle};
use crate::qa::{certify_qa, certify_qa_at, verify_certificate, CertifyOutcome, DEFAULT_BUDGET};
use crate::slopes::{
    cable_image_slope, cf_evaluate, cf_expand, cf_resolve_last, heil_orbifold, predicted_det,
    ContinuedFraction, FramedTangleInvariants, Slope,
};
use crate::tangle::{final_ladder_crossing, montesinos_tangle, Tangle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qalink", version, about = "Link determinants, rational closures and quasi-alternating certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the determinant of a diagram given as PD text, a file, or `-` for stdin.
    Det { input: String },
    /// Search for a quasi-alternating certificate and print it as JSON.
    Certify {
        input: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Print the PD code of a rational closure of a tangle.
    Closure {
        #[arg(long)]
        tangle: TangleSpec,
        #[arg(long)]
        slope: Slope,
    },
    /// Verify the determinant formula and certificates over a slope grid.
    Family {
        #[arg(long, value_enum)]
        name: FamilyName,
        #[arg(long, default_value_t = 12)]
        max_p: i64,
        #[arg(long, default_value_t = 1)]
        max_q: i64,
        /// Override the default member of the family.
        #[arg(long)]
        tangle: Option<TangleSpec>,
        #[arg(long)]
        json: bool,
    },
    /// Recompute every published constant and report pass or fail per row.
    PaperCheck {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    Pretzel,
    Seifert,
}

/// `seifert:f1,f2,...[:frame]` or `pretzel:q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TangleSpec {
    Seifert { fractions: Vec<Slope>, frame: i64 },
    Pretzel { q: i64 },
}

impl FromStr for TangleSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| format!("bad tangle spec `{s}`: {why}");
        let mut parts = s.trim().split(':');
        match parts.next() {
            Some("seifert") => {
                let list = parts.next().ok_or_else(|| bad("missing fraction list"))?;
                let fractions = list
                    .split(',')
                    .map(|f| f.parse::<Slope>().map_err(|e| bad(&e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(f) = fractions.iter().find(|f| f.q() < 2) {
                    return Err(bad(&format!("fraction {f} needs a denominator of at least 2")));
                }
                let frame = match parts.next() {
                    Some(k) => k.parse().map_err(|_| bad("frame must be an integer"))?,
                    None => 0,
                };
                if parts.next().is_some() {
                    return Err(bad("too many fields"));
                }
                Ok(TangleSpec::Seifert { fractions, frame })
            }
            Some("pretzel") => {
                let q: i64 = parts.next().and_then(|q| q.parse().ok()).ok_or_else(|| bad("expected pretzel:q"))?;
                if q < 3 || q % 2 == 0 || parts.next().is_some() {
                    return Err(bad("q must be odd and at least 3"));
                }
                Ok(TangleSpec::Pretzel { q })
            }
            _ => Err(bad("expected seifert:... or pretzel:q")),
        }
    }
}

impl TangleSpec {
    pub fn tangle(&self) -> Tangle {
        match self {
            TangleSpec::Seifert { fractions, frame } => {
                montesinos_tangle(0, fractions).expect("denominators checked when parsed").add_framing_twists(*frame)
            }
            TangleSpec::Pretzel { .. } => pretzel_template(),
        }
    }

    pub fn framed(&self) -> Result<FramedQATangle, String> {
        match self {
            TangleSpec::Seifert { fractions, frame } => seifert_tangle(fractions, *frame),
            TangleSpec::Pretzel { q } => crate::families::pretzel_quotient_tangle(*q),
        }
        .map_err(|e| e.to_string())
    }
}

fn read_diagram(input: &str, stdin: &mut dyn Read) -> Result<LinkDiagram, String> {
    let text = if input == "-" {
        let mut buf = String::new();
        stdin.read_to_string(&mut buf).map_err(|e| format!("reading stdin: {e}"))?;
        buf
    } else if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| format!("reading {input}: {e}"))?
    } else {
        input.to_string()
    };
    parse_pd(&text).map_err(|e| e.to_string())
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, stdin, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    match cmd {
        Command::Det { input } => {
            let d = read_diagram(&input, stdin)?;
            writeln!(out, "{}", determinant(&d)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Certify { input, budget } => {
            let d = read_diagram(&input, stdin)?;
            match certify_qa(&d, budget).map_err(|e| e.to_string())? {
                CertifyOutcome::Certified(c) => {
                    writeln!(out, "{}", c.to_json()).map_err(io)?;
                    Ok(EXIT_OK)
                }
                CertifyOutcome::Inconclusive { .. } => {
                    writeln!(out, "inconclusive").map_err(io)?;
                    Ok(EXIT_CHECK_FAILED)
                }
            }
        }
        Command::Closure { tangle, slope } => {
            let d = tangle.tangle().closure(slope).map_err(|e| e.to_string())?;
            writeln!(out, "{d}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Family { name, max_p, max_q, tangle, json } => {
            if max_p < 0 || max_q < 0 || (max_p == 0 && max_q == 0) {
                return Err("grid bounds must be nonnegative and not both zero".into());
            }
            let spec = tangle.unwrap_or(match name {
                FamilyName::Pretzel => TangleSpec::Pretzel { q: 3 },
                FamilyName::Seifert => TangleSpec::Seifert {
                    fractions: vec![Slope::new(1, 2).expect("valid"), Slope::new(-1, 5).expect("valid")],
                    frame: 0,
                },
            });
            let t = match spec.framed() {
                Ok(t) => t,
                Err(e) => {
                    writeln!(out, "FAIL {e}").map_err(io)?;
                    return Ok(EXIT_CHECK_FAILED);
                }
            };
            let report = verify_family(&t, max_p, max_q).map_err(|e| e.to_string())?;
            let text = if json { format!("{}\n", report.to_json()) } else { report.to_text() };
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::PaperCheck { json } => {
            let report = paper_check(&PaperFixtures::default());
            let text = if json { format!("{}\n", report.to_json()) } else { report.to_string() };
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}

/// Inputs that `paper_check` builds on, replaceable for negative controls.
#[derive(Debug, Clone)]
pub struct PaperFixtures {
    pub pretzel: Tangle,
}

impl Default for PaperFixtures {
    fn default() -> Self {
        PaperFixtures { pretzel: pretzel_template() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PaperCheckReport {
    pub rows: Vec<CheckRow>,
    pub passed: bool,
}

impl PaperCheckReport {
    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn row(&self, name: &str) -> Option<&CheckRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

impl fmt::Display for PaperCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let mark = if r.pass { "PASS" } else { "FAIL" };
            writeln!(f, "{mark} {}: expected {} computed {}", r.name, r.expected, r.computed)?;
        }
        let passed = self.rows.iter().filter(|r| r.pass).count();
        writeln!(f, "{passed}/{} rows pass", self.rows.len())
    }
}

struct Rows(Vec<CheckRow>);

impl Rows {
    fn push(&mut self, name: &str, expected: impl fmt::Display, computed: impl fmt::Display) {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let pass = expected == computed;
        self.0.push(CheckRow { name: name.into(), expected, computed, pass });
    }
}

fn s(p: i64, q: i64) -> Slope {
    Slope::new(p, q).expect("constant slope")
}

fn det_at(t: &Tangle, r: Slope) -> BigUint {
    determinant(&t.closure(r).expect("nonnegative slope"))
}

fn error_text(e: impl fmt::Display) -> String {
    format!("error: {e}")
}

/// Root determinant triple of a verified certificate for `τ(r)` that splits
/// at the final ladder crossing.
fn ladder_root_split(t: &Tangle, r: Slope) -> String {
    let d = t.closure(r).expect("nonnegative slope");
    let c = final_ladder_crossing(r).expect("slope has a ladder crossing");
    match certify_qa_at(&d, c, DEFAULT_BUDGET).expect("budget is positive") {
        CertifyOutcome::Certified(cert) if verify_certificate(&cert) => match cert.det_triple() {
            Some([a, b, c]) => format!("{a}={b}+{c}"),
            None => "leaf".into(),
        },
        CertifyOutcome::Certified(_) => "certificate failed verification".into(),
        CertifyOutcome::Inconclusive { .. } => "inconclusive".into(),
    }
}

fn cf_text(r: Slope) -> String {
    cf_expand(r).map(|c| c.to_string()).unwrap_or_else(error_text)
}

/// Recomputes the published constants: the pretzel family, the Seifert
/// family and its iteration, continued fractions, and surgery arithmetic.
pub fn paper_check(fixtures: &PaperFixtures) -> PaperCheckReport {
    let mut rows = Rows(Vec::new());
    let pretzel = &fixtures.pretzel;

    rows.push("pretzel det τ′(1/0)", 4, det_at(pretzel, Slope::INFINITY));
    rows.push("pretzel det τ′(0)", 11, det_at(pretzel, Slope::ZERO));
    rows.push("pretzel det τ′(1)", 15, det_at(pretzel, s(1, 1)));
    let measured: Vec<String> = (0..=10).map(|n| det_at(pretzel, Slope::integer(n)).to_string()).collect();
    let expected: Vec<String> = (0..=10).map(|n| (4 * n + 11).to_string()).collect();
    rows.push("pretzel det τ′(n) = 4n+11, n = 0..10", expected.join(","), measured.join(","));
    rows.push("pretzel τ′(1) root certificate split", "15=11+4", ladder_root_split(pretzel, s(1, 1)));

    let base_tangle = montesinos_tangle(0, &[s(1, 2), s(-1, 5)]).expect("denominators ≥ 2");
    for (r, expected) in [(Slope::INFINITY, 3u32), (Slope::ZERO, 10), (s(1, 1), 13), (s(7, 3), 51)] {
        rows.push(&format!("Seifert det τ({r})"), expected, det_at(&base_tangle, r));
    }
    rows.push("Seifert τ(7/3) root certificate split", "51=35+16", ladder_root_split(&base_tangle, s(7, 3)));
    let base_cm = FramedTangleInvariants::from_closure_dets(
        det_at(&base_tangle, Slope::INFINITY).try_into().unwrap_or(0),
        det_at(&base_tangle, Slope::ZERO).try_into().unwrap_or(0),
    )
    .map(|inv| inv.c_m.to_string())
    .unwrap_or_else(error_text);
    rows.push("Seifert c_M", 1, base_cm);
    match seifert_tangle(&[s(1, 2), s(-1, 5)], 0).and_then(|b| iterate_fill(&b, s(7, 3))) {
        Ok(next) => {
            rows.push("iterated d_inf", 51, next.invariants().d_inf);
            rows.push("iterated d_zero", 70, next.invariants().d_zero);
            rows.push("iterated det τ(13/9)", 1293, det_at(next.tangle(), s(13, 9)));
        }
        Err(e) => {
            for (name, expected) in [("iterated d_inf", 51), ("iterated d_zero", 70), ("iterated det τ(13/9)", 1293)] {
                rows.push(name, expected, error_text(&e));
            }
        }
    }
    let inv = FramedTangleInvariants::from_closure_dets(51, 70).expect("coprime values");
    rows.push("formula 13·51 + 9·70", 1293, predicted_det(&inv, s(13, 9)));

    rows.push("continued fraction of 13/10", "[1,3,3]", cf_text(s(13, 10)));
    rows.push("continued fraction of 7/3", "[2,3]", cf_text(s(7, 3)));
    rows.push("continued fraction of 13/9", "[1,2,4]", cf_text(s(13, 9)));
    let mut trips = 0;
    for p in 0..=200i64 {
        for q in 1..=200i64 {
            if p.gcd(&q) == 1 && cf_expand(s(p, q)).map(|c| cf_evaluate(&c)) == Ok(s(p, q)) {
                trips += 1;
            }
        }
    }
    let coprime = (0..=200i64).flat_map(|p| (1..=200i64).map(move |q| (p, q))).filter(|(p, q)| p.gcd(q) == 1).count();
    rows.push("continued fraction round trips, p, q ≤ 200", coprime, trips);
    let (mut mediant_total, mut mediant_ok) = (0, 0);
    for cf in expansions(6, 6) {
        mediant_total += 1;
        let r = cf_evaluate(&cf);
        if let Ok((r0, r1)) = cf_resolve_last(&cf) {
            if r0.p() + r1.p() == r.p() && r0.q() + r1.q() == r.q() {
                mediant_ok += 1;
            }
        }
    }
    rows.push("mediant property, terms ≤ 6, length ≤ 6", mediant_total, mediant_ok);

    let cable = cable_image_slope(5, 2, 1, -1).map(|(r, img)| format!("{r} {img}")).unwrap_or_else(error_text);
    rows.push("cable (5,2) surgery slope and image", "9/1 9/4", cable);
    let (mut cable_total, mut cable_ok, mut monotone) = (0, 0, true);
    for q in 2..=7i64 {
        let mut prev: Option<Slope> = None;
        for p in (2..=50i64).filter(|p| p.gcd(&q) == 1) {
            cable_total += 1;
            let Ok((r, img)) = cable_image_slope(p, q, 1, -1) else { continue };
            if r == Slope::integer(p * q - 1) && img == s(p * q - 1, q * q) {
                cable_ok += 1;
            }
            if let Some(prev) = prev {
                monotone &= (img.p() as i128) * (prev.q() as i128) > (prev.p() as i128) * (img.q() as i128);
            }
            prev = Some(img);
        }
    }
    rows.push("cable images (pq−1)/q², p = 2..50, q = 2..7", cable_total, cable_ok);
    rows.push("cable image increasing in p", true, monotone);
    rows.push("orbifold of the 7/3 filling over D²(2,5)", "S²(2,5,7)", heil_orbifold(&[2, 5], s(7, 3), Slope::ZERO));

    let passed = rows.0.iter().all(|r| r.pass);
    PaperCheckReport { rows: rows.0, passed }
}

/// Every expansion `[a_1, …, a_ℓ]` with `ℓ ≤ max_len`, `a_1 ≤ max_term` and
/// `1 ≤ a_i ≤ max_term` otherwise, whose last term is nonzero.
fn expansions(max_len: usize, max_term: u64) -> Vec<ContinuedFraction> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u64>> = (0..=max_term).map(|a| vec![a]).collect();
    while let Some(terms) = stack.pop() {
        if terms.last().is_some_and(|&a| a > 0) {
            out.push(ContinuedFraction::new(terms.clone()).expect("terms after the first are positive"));
        }
        if terms.len() < max_len {
            for a in 1..=max_term {
                let mut next = terms.clone();
                next.push(a);
                stack.push(next);
            }
        }
    }
    out
}
