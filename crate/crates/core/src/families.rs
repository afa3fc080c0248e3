//! Framed quasi-alternating tangles and the families built from them: the
//! pretzel quotient tangle, sums of rational tangles over a disk with cone
//! points, and iterated fillings. Also the grid verification of
//! `det τ(p/q) = p·d_inf + q·d_zero` and a corpus of test diagrams.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::determinant::determinant;
use crate::diagram::{LinkDiagram, Smoothing};
use crate::qa::{certify_qa, verify_certificate, Det, DEFAULT_BUDGET};
use crate::slopes::{
    cf_expand, cf_resolve_last, predicted_det, FramedTangleInvariants, Slope, SlopeError,
};
use crate::tangle::{final_ladder_crossing, montesinos_diagram, two_bridge_diagram, Tangle, TangleError};

/// Diagram of the pretzel quotient tangle `T′`: a rational tangle of
/// fraction 3 stacked on one of fraction 5/2, plus a single negative twist,
/// after one Reidemeister III move that makes every closure certifiable.
pub const PRETZEL_TEMPLATE: &str = "TANGLE{pd=X(1,2,3,4) X(4,3,5,6) X(7,8,9,10) X(2,11,12,13) \
X(11,14,15,12) X(13,15,9,16) X(17,7,18,6) X(16,8,17,5); open=(1,18,14,10); frame=0}";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error(transparent)]
    Slope(#[from] SlopeError),
    #[error("pretzel index q = {0} must be odd and at least 3")]
    BadPretzelIndex(i64),
    #[error("closure at {0} has no certificate within the search budget")]
    NotCertified(Slope),
    #[error("det τ(1) = {tau_one} but d_inf + d_zero = {expected}: not a quasi-alternating framing")]
    NotFramed { tau_one: BigUint, expected: u64 },
    #[error("closure determinant {0} does not fit in 64 bits")]
    TooLarge(BigUint),
    #[error("filling slope {0} needs p ≥ 1 and q ≥ 1")]
    BadFillSlope(Slope),
    #[error("tangle has no rational summands to extend")]
    NotASum,
    #[error("no numerator x with |x| ≤ {bound} gives det {target} for the {slope} filling")]
    NoNumerator { slope: Slope, target: BigUint, bound: i64 },
}

/// A tangle whose two basic closures are certified quasi-alternating and
/// whose closures satisfy the determinant formula with the recorded
/// invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedQATangle {
    tangle: Tangle,
    invariants: FramedTangleInvariants,
    provenance: String,
    summands: Vec<Slope>,
    branch_slope: Option<Slope>,
}

fn det_u64(d: &LinkDiagram) -> Result<u64, FamilyError> {
    let v = determinant(d);
    v.to_u64().ok_or(FamilyError::TooLarge(v))
}

impl FramedQATangle {
    /// Measures both closures, checks `det τ(1) = d_inf + d_zero`, and
    /// certifies `τ(1/0)` and `τ(0)`.
    pub fn new(tangle: Tangle, provenance: impl Into<String>) -> Result<Self, FamilyError> {
        let d_inf = det_u64(&tangle.closure_inf())?;
        let d_zero = det_u64(&tangle.closure_zero())?;
        let invariants = FramedTangleInvariants::from_closure_dets(d_inf, d_zero)?;
        let tau_one = determinant(&tangle.closure(Slope::integer(1))?);
        if tau_one != BigUint::from(d_inf + d_zero) {
            return Err(FamilyError::NotFramed { tau_one, expected: d_inf + d_zero });
        }
        for r in [Slope::INFINITY, Slope::ZERO] {
            let out = certify_qa(&tangle.closure(r)?, DEFAULT_BUDGET).expect("budget is positive");
            if !out.is_certified() {
                return Err(FamilyError::NotCertified(r));
            }
        }
        Ok(FramedQATangle { tangle, invariants, provenance: provenance.into(), summands: Vec::new(), branch_slope: None })
    }

    pub fn tangle(&self) -> &Tangle {
        &self.tangle
    }

    pub fn invariants(&self) -> &FramedTangleInvariants {
        &self.invariants
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Rational summands `β/α`, for tangles built as sums.
    pub fn summands(&self) -> &[Slope] {
        &self.summands
    }

    /// The slope whose closure is the branch set of interest, when the
    /// family member singles one out.
    pub fn branch_slope(&self) -> Option<Slope> {
        self.branch_slope
    }

    pub fn closure(&self, r: Slope) -> Result<LinkDiagram, FamilyError> {
        Ok(self.tangle.closure(r)?)
    }

    pub fn predicted_det(&self, r: Slope) -> BigUint {
        predicted_det(&self.invariants, r)
    }
}

pub fn pretzel_template() -> Tangle {
    PRETZEL_TEMPLATE.parse().expect("template is a valid tangle")
}

/// The quotient tangle for the `(−2, 3, q)` pretzel knot. Its closure at
/// `n = (q − 3)/2` is the branch set of `(2q + 5)`-surgery.
pub fn pretzel_quotient_tangle(q: i64) -> Result<FramedQATangle, FamilyError> {
    if q < 3 || q % 2 == 0 {
        return Err(FamilyError::BadPretzelIndex(q));
    }
    let mut t = FramedQATangle::new(pretzel_template(), format!("pretzel T′ for P({q})"))?;
    t.branch_slope = Some(Slope::integer((q - 3) / 2));
    Ok(t)
}

fn cone_list(fractions: &[Slope]) -> String {
    fractions.iter().map(|f| f.q().to_string()).collect::<Vec<_>>().join(",")
}

/// Sum of the rational tangles `β_i/α_i` with `frame` framing twists.
pub fn seifert_tangle(fractions: &[Slope], frame: i64) -> Result<FramedQATangle, FamilyError> {
    let tangle = crate::tangle::montesinos_tangle(0, fractions)?.add_framing_twists(frame);
    let mut t = FramedQATangle::new(tangle, format!("Seifert D²({})", cone_list(fractions)))?;
    t.summands = fractions.to_vec();
    Ok(t)
}

/// Alternating search order `1, −1, 2, −2, …` up to `bound`.
fn numerators(bound: i64) -> impl Iterator<Item = i64> {
    (1..=bound).flat_map(|x| [x, -x])
}

/// Fills along `r = p/q` and re-opens the result as a tangle with one more
/// rational summand of denominator `p`. The numerator is the first in the
/// order `1, −1, 2, −2, …` (bounded by `p + q`) that reproduces the measured
/// determinant of the filling with a valid framing.
pub fn iterate_fill(t: &FramedQATangle, r: Slope) -> Result<FramedQATangle, FamilyError> {
    if t.summands.is_empty() {
        return Err(FamilyError::NotASum);
    }
    let (p, q) = (r.p(), r.q());
    if p < 1 || q < 1 {
        return Err(FamilyError::BadFillSlope(r));
    }
    let target = determinant(&t.tangle.closure(r)?);
    let zero_target = BigUint::from(t.invariants.d_zero) * BigUint::from(p as u64);
    let bound = p + q;
    for x in numerators(bound).filter(|x| x.gcd(&p) == 1) {
        let summand = Slope::new(x, p)?;
        let candidate = t.tangle.sum(&Tangle::montesinos_summand(summand));
        let d_inf = determinant(&candidate.closure_inf());
        let d_zero = determinant(&candidate.closure_zero());
        if d_inf != target || d_zero != zero_target {
            continue;
        }
        let tau_one = determinant(&candidate.closure(Slope::integer(1))?);
        if tau_one != &d_inf + &d_zero {
            continue;
        }
        let mut summands = t.summands.clone();
        summands.push(summand);
        let mut next = FramedQATangle::new(candidate, format!("Seifert D²({})", cone_list(&summands)))?;
        next.summands = summands;
        return Ok(next);
    }
    Err(FamilyError::NoNumerator { slope: r, target, bound })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub slope: Slope,
    pub det: Det,
    pub predicted: Det,
    /// Determinants of the two smoothings of the final ladder crossing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<[Det; 2]>,
    /// Predicted determinants at the two resolved slopes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_split: Option<[Det; 2]>,
    pub certified: bool,
    pub verified: bool,
    pub certificate_nodes: usize,
}

impl FamilyRow {
    pub fn split_matches(&self) -> bool {
        match (&self.split, &self.expected_split) {
            (Some([a, b]), Some([c, d])) => (a == c && b == d) || (a == d && b == c),
            (None, None) => true,
            _ => false,
        }
    }

    pub fn passed(&self) -> bool {
        self.det == self.predicted && self.split_matches() && self.certified && self.verified
    }
}

impl fmt::Display for FamilyRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let split = match &self.split {
            Some([a, b]) => format!("{}+{}", a.0, b.0),
            None => "-".to_string(),
        };
        let cert = if self.certified && self.verified { "ok" } else { "FAIL" };
        write!(f, "{} det={} pred={} split={split} cert={cert}", self.slope, self.det.0, self.predicted.0)?;
        if self.det != self.predicted {
            f.write_str(" det-mismatch")?;
        }
        if !self.split_matches() {
            f.write_str(" split-mismatch")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub provenance: String,
    pub invariants: FramedTangleInvariants,
    pub rows: Vec<FamilyRow>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(FamilyRow::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FamilyRow> {
        self.rows.iter().filter(|r| !r.passed())
    }

    pub fn to_text(&self) -> String {
        self.rows.iter().map(|r| format!("{r}\n")).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

fn check_slope(t: &FramedQATangle, r: Slope) -> Result<FamilyRow, FamilyError> {
    let d = t.closure(r)?;
    let det = determinant(&d);
    let predicted = t.predicted_det(r);
    let (split, expected_split) = match final_ladder_crossing(r) {
        Some(c) if !r.is_infinite() && !r.is_zero() => {
            let [a, b] = [Smoothing::Zero, Smoothing::One]
                .map(|s| Det(determinant(&d.resolve_crossing(c, s).expect("ladder crossing exists"))));
            let (r0, r1) = cf_resolve_last(&cf_expand(r)?)?;
            (Some([a, b]), Some([Det(t.predicted_det(r0)), Det(t.predicted_det(r1))]))
        }
        _ => (None, None),
    };
    let outcome = certify_qa(&d, DEFAULT_BUDGET).expect("budget is positive");
    let cert = outcome.certificate();
    Ok(FamilyRow {
        slope: r,
        det: Det(det),
        predicted: Det(predicted),
        split,
        expected_split,
        certified: cert.is_some(),
        verified: cert.is_some_and(verify_certificate),
        certificate_nodes: cert.map_or(0, |c| c.node_count()),
    })
}

/// Slopes `p/q` with `0 ≤ p ≤ max_p`, `0 ≤ q ≤ max_q` and `gcd(p, q) = 1`,
/// sorted by `(q, p)`.
pub fn slope_grid(max_p: i64, max_q: i64) -> Vec<Slope> {
    let mut out = Vec::new();
    for q in 0..=max_q {
        for p in 0..=max_p {
            if p.gcd(&q) == 1 {
                out.push(Slope::new(p, q).expect("coprime pair"));
            }
        }
    }
    out
}

/// Checks every slope of the grid: measured against predicted determinant,
/// the split at the final ladder crossing, and a verified certificate.
/// Slopes are processed in parallel; rows are ordered by `(q, p)`.
pub fn verify_family(t: &FramedQATangle, max_p: i64, max_q: i64) -> Result<FamilyReport, FamilyError> {
    let rows = slope_grid(max_p, max_q)
        .into_par_iter()
        .map(|r| check_slope(t, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FamilyReport { provenance: t.provenance.clone(), invariants: t.invariants.clone(), rows })
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub diagram: LinkDiagram,
}

/// Diagrams with at most `max_crossings` crossings: two-bridge links and
/// their mirrors, Montesinos links, closures of the family tangles, and
/// smoothings of these. Duplicates (by PD text) are dropped.
pub fn corpus(max_crossings: usize) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |out: &mut Vec<CorpusEntry>, name: String, d: LinkDiagram| {
        if d.crossing_count() <= max_crossings && seen.insert(d.to_string()) {
            out.push(CorpusEntry { name, diagram: d });
        }
    };
    for p in 2..=19i64 {
        for q in 1..p {
            if p.gcd(&q) != 1 {
                continue;
            }
            let r = Slope::new(p, q).expect("coprime pair");
            let d = two_bridge_diagram(r).expect("p ≥ 1");
            if q % 3 == 0 {
                push(&mut out, format!("mirror b({p},{q})"), d.mirror());
            }
            push(&mut out, format!("b({p},{q})"), d);
        }
    }
    let pieces = [(1, 2), (-1, 2), (1, 3), (-1, 3), (2, 5), (-1, 5), (3, 7)];
    for e in -1..=1 {
        for (i, a) in pieces.iter().enumerate() {
            for b in &pieces[i..] {
                for c in &pieces[..3] {
                    let fr = [a, b, c].map(|&(x, y)| Slope::new(x, y).expect("nonzero denominator"));
                    let d = montesinos_diagram(e, &fr).expect("denominators ≥ 2");
                    push(&mut out, format!("M({e}; {}, {}, {})", fr[0], fr[1], fr[2]), d);
                }
            }
        }
    }
    let base = crate::tangle::montesinos_tangle(0, &[Slope::new(1, 2).unwrap(), Slope::new(-1, 5).unwrap()])
        .expect("denominators ≥ 2");
    let pretzel = pretzel_template();
    for r in slope_grid(5, 3) {
        push(&mut out, format!("base τ({r})"), base.closure(r).expect("nonnegative slope"));
        push(&mut out, format!("pretzel τ({r})"), pretzel.closure(r).expect("nonnegative slope"));
    }
    let snapshot: Vec<(String, LinkDiagram)> =
        out.iter().take(60).map(|e| (e.name.clone(), e.diagram.clone())).collect();
    for (name, d) in snapshot {
        for s in [Smoothing::Zero, Smoothing::One] {
            if d.crossing_count() > 0 {
                push(&mut out, format!("{name} smoothed {}", s.label()), d.resolve_crossing(0, s).expect("crossing 0"));
            }
        }
    }
    push(&mut out, "unknot".into(), LinkDiagram::unknot());
    push(&mut out, "unlink(2)".into(), LinkDiagram::unlink(2));
    out
}
