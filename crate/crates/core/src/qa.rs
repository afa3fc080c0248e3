//! Quasi-alternating certificates: base cases, search and verification.
//!
//! A certificate is a binary tree. Every internal node names a crossing whose
//! two smoothings have positive determinants adding up to the node's
//! determinant, and every leaf is an unknot or a connected, reduced
//! alternating diagram.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::determinant::{determinant, determinant_oracle};
use crate::diagram::{parse_pd, LinkDiagram, Smoothing};

pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QaError {
    #[error("search budget must be at least 1")]
    ZeroBudget,
    #[error("crossing {index} out of range for a diagram with {count} crossings")]
    InvalidCrossing { index: usize, count: usize },
    #[error("certificate JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseKind {
    Unknot,
    ReducedAlternatingConnected,
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseKind::Unknot => "unknot",
            BaseKind::ReducedAlternatingConnected => "reduced-alternating-connected",
        })
    }
}

/// A determinant in certificate JSON: a number when it fits in `u64`,
/// otherwise a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Det(pub BigUint);

impl Serialize for Det {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Det {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Small(u64),
            Big(String),
        }
        match Raw::deserialize(d)? {
            Raw::Small(v) => Ok(Det(BigUint::from(v))),
            Raw::Big(s) => s.parse().map(Det).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CertKind {
    Node { crossing: usize, children: Vec<QACertificate> },
    Leaf { base: BaseKind },
}

/// One node of a certificate tree. `det` is `[d]` at a leaf and
/// `[d, d0, d1]` at an internal node, where `d0` and `d1` are the
/// determinants of the two children in the order listed (larger first).
/// Children record which smoothing produced them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QACertificate {
    pub pd: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothing: Option<u8>,
    pub det: Vec<Det>,
    #[serde(flatten)]
    pub kind: CertKind,
}

impl QACertificate {
    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, CertKind::Leaf { .. })
    }

    pub fn children(&self) -> &[QACertificate] {
        match &self.kind {
            CertKind::Node { children, .. } => children,
            CertKind::Leaf { .. } => &[],
        }
    }

    pub fn root_det(&self) -> Option<&BigUint> {
        self.det.first().map(|d| &d.0)
    }

    /// The determinant triple of an internal node.
    pub fn det_triple(&self) -> Option<[u64; 3]> {
        match self.det.as_slice() {
            [a, b, c] if !self.is_leaf() => Some([a.0.to_u64()?, b.0.to_u64()?, c.0.to_u64()?]),
            _ => None,
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(QACertificate::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(QACertificate::depth).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, QaError> {
        serde_json::from_str(text).map_err(|e| QaError::Json(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertifyOutcome {
    Certified(QACertificate),
    /// No certificate found. Not a proof that the link is not
    /// quasi-alternating.
    Inconclusive { explored: usize, budget_exhausted: bool },
}

impl CertifyOutcome {
    pub fn certificate(&self) -> Option<&QACertificate> {
        match self {
            CertifyOutcome::Certified(c) => Some(c),
            CertifyOutcome::Inconclusive { .. } => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.certificate().is_some()
    }
}

pub fn is_qa_base(d: &LinkDiagram) -> Option<BaseKind> {
    let r = d.reduce();
    let props = r.properties();
    if r.crossing_count() == 0 {
        return (props.components == 1).then_some(BaseKind::Unknot);
    }
    (props.connected && props.alternating && props.reduced).then_some(BaseKind::ReducedAlternatingConnected)
}

struct Search {
    budget: usize,
    explored: usize,
    exhausted: bool,
    failed: HashSet<String>,
    found: HashMap<String, QACertificate>,
}

impl Search {
    fn run(&mut self, d: &LinkDiagram, det: &BigUint) -> Option<QACertificate> {
        if self.explored >= self.budget {
            self.exhausted = true;
            return None;
        }
        self.explored += 1;
        let pd = d.to_string();
        if let Some(c) = self.found.get(&pd) {
            return Some(c.clone());
        }
        if let Some(base) = is_qa_base(d) {
            let leaf = QACertificate {
                pd: pd.clone(),
                smoothing: None,
                det: vec![Det(det.clone())],
                kind: CertKind::Leaf { base },
            };
            self.found.insert(pd, leaf.clone());
            return Some(leaf);
        }
        if det.is_zero() {
            return None;
        }
        let key = d.canonical_key();
        if self.failed.contains(&key) {
            return None;
        }
        for c in 0..d.crossing_count() {
            if let Some(node) = self.split_at(d, det, c, &pd) {
                self.found.insert(pd, node.clone());
                return Some(node);
            }
            if self.exhausted {
                return None;
            }
        }
        if !self.exhausted {
            self.failed.insert(key);
        }
        None
    }

    fn new(budget: usize) -> Self {
        Search { budget, explored: 0, exhausted: false, failed: HashSet::new(), found: HashMap::new() }
    }

    /// An internal node at crossing `c`, if its smoothings are
    /// determinant-additive with positive children that both certify.
    fn split_at(&mut self, d: &LinkDiagram, det: &BigUint, c: usize, pd: &str) -> Option<QACertificate> {
        let mut kids = [Smoothing::Zero, Smoothing::One].map(|s| {
            let child = d.resolve_crossing(c, s).expect("index in range");
            let det = determinant(&child);
            (s, child, det)
        });
        if kids.iter().any(|k| k.2.is_zero()) || &(&kids[0].2 + &kids[1].2) != det {
            return None;
        }
        if kids[1].2 > kids[0].2 {
            kids.swap(0, 1);
        }
        let mut certs = Vec::with_capacity(2);
        for (s, child, cdet) in &kids {
            let mut cert = self.run(child, cdet)?;
            cert.smoothing = Some(s.label());
            certs.push(cert);
        }
        Some(QACertificate {
            pd: pd.to_string(),
            smoothing: None,
            det: vec![Det(det.clone()), Det(kids[0].2.clone()), Det(kids[1].2.clone())],
            kind: CertKind::Node { crossing: c, children: certs },
        })
    }

    fn outcome(&self, cert: Option<QACertificate>) -> CertifyOutcome {
        match cert {
            Some(c) => CertifyOutcome::Certified(c),
            None => CertifyOutcome::Inconclusive { explored: self.explored, budget_exhausted: self.exhausted },
        }
    }
}

/// Searches for a certificate, trying crossings in index order among those
/// whose smoothings are determinant-additive with positive children.
/// `budget` bounds the total number of explored nodes.
pub fn certify_qa(d: &LinkDiagram, budget: usize) -> Result<CertifyOutcome, QaError> {
    if budget == 0 {
        return Err(QaError::ZeroBudget);
    }
    let (rep, mirrored) = chiral_representative(d);
    let mut search = Search::new(budget);
    let cert = search.run(&rep, &determinant(&rep));
    Ok(search.outcome(cert.map(|c| if mirrored { replay_mirrored(d, &c) } else { c })))
}

/// Like [`certify_qa`], but the root node must split at `crossing`, even
/// when the diagram is already a base case.
pub fn certify_qa_at(d: &LinkDiagram, crossing: usize, budget: usize) -> Result<CertifyOutcome, QaError> {
    if budget == 0 {
        return Err(QaError::ZeroBudget);
    }
    if crossing >= d.crossing_count() {
        return Err(QaError::InvalidCrossing { index: crossing, count: d.crossing_count() });
    }
    let (rep, mirrored) = chiral_representative(d);
    let mut search = Search::new(budget);
    search.explored = 1;
    let cert = search.split_at(&rep, &determinant(&rep), crossing, &rep.to_string());
    Ok(search.outcome(cert.map(|c| if mirrored { replay_mirrored(d, &c) } else { c })))
}

/// The search runs on whichever of `d` and its mirror serializes first, so
/// a diagram and its mirror explore the same tree.
fn chiral_representative(d: &LinkDiagram) -> (LinkDiagram, bool) {
    let m = d.mirror();
    if m.to_string() < d.to_string() {
        (m, true)
    } else {
        (d.clone(), false)
    }
}

/// Transfers a certificate of `mirror(d)` to `d`. Crossing indices carry
/// over unchanged and each smoothing trades places with the other.
fn replay_mirrored(d: &LinkDiagram, cert: &QACertificate) -> QACertificate {
    let kind = match &cert.kind {
        CertKind::Leaf { base } => CertKind::Leaf { base: *base },
        CertKind::Node { crossing, children } => CertKind::Node {
            crossing: *crossing,
            children: children
                .iter()
                .map(|child| {
                    let s = match child.smoothing {
                        Some(0) => Smoothing::One,
                        _ => Smoothing::Zero,
                    };
                    let resolved = d.resolve_crossing(*crossing, s).expect("index in range");
                    let mut c = replay_mirrored(&resolved, child);
                    c.smoothing = Some(s.label());
                    c
                })
                .collect(),
        },
    };
    QACertificate { pd: d.to_string(), smoothing: None, det: cert.det.clone(), kind }
}

/// Rechecks a certificate from scratch using the arc-colouring determinant.
pub fn verify_certificate(cert: &QACertificate) -> bool {
    let Ok(d) = parse_pd(&cert.pd) else {
        return false;
    };
    let det = determinant_oracle(&d);
    if cert.det.first().map(|x| &x.0) != Some(&det) {
        return false;
    }
    match &cert.kind {
        CertKind::Leaf { base } => cert.det.len() == 1 && !det.is_zero() && is_qa_base(&d) == Some(*base),
        CertKind::Node { crossing, children } => {
            let [_, d0, d1] = cert.det.as_slice() else {
                return false;
            };
            if children.len() != 2 || d0.0.is_zero() || d1.0.is_zero() || &d0.0 + &d1.0 != det {
                return false;
            }
            if children[0].smoothing == children[1].smoothing {
                return false;
            }
            children.iter().zip([d0, d1]).all(|(child, expected)| {
                let Some(s) = child.smoothing.and_then(|l| Smoothing::from_label(l).ok()) else {
                    return false;
                };
                let Ok(resolved) = d.resolve_crossing(*crossing, s) else {
                    return false;
                };
                resolved.to_string() == child.pd
                    && child.det.first() == Some(expected)
                    && verify_certificate(child)
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = "X(4,1,3,2) X(2,3,1,4)";
    const TREFOIL: &str = "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)";

    fn cert(pd: &str) -> QACertificate {
        let d = parse_pd(pd).unwrap();
        certify_qa(&d, DEFAULT_BUDGET).unwrap().certificate().cloned().expect("certified")
    }

    #[test]
    fn base_cases() {
        assert_eq!(is_qa_base(&parse_pd("X(1,1,2,2)").unwrap()), Some(BaseKind::Unknot));
        assert_eq!(is_qa_base(&parse_pd(TREFOIL).unwrap()), Some(BaseKind::ReducedAlternatingConnected));
        assert_eq!(is_qa_base(&LinkDiagram::unlink(2)), None);
    }

    #[test]
    fn hopf_certificate_is_a_node_over_two_unknots() {
        // A Hopf diagram is itself alternating, so resolve one crossing by hand.
        let d = parse_pd(HOPF).unwrap();
        let c = cert(HOPF);
        assert!(c.is_leaf());
        let mut xs = d.crossings().to_vec();
        xs[1] = crate::diagram::mirror_crossing(xs[1]);
        let clasp = LinkDiagram::new(xs, 0).unwrap();
        assert_eq!(determinant(&clasp), BigUint::zero());
        let node = QACertificate {
            pd: d.to_string(),
            smoothing: None,
            det: vec![Det(2u32.into()), Det(1u32.into()), Det(1u32.into())],
            kind: CertKind::Node {
                crossing: 0,
                children: [Smoothing::Zero, Smoothing::One]
                    .map(|s| {
                        let child = d.resolve_crossing(0, s).unwrap();
                        QACertificate {
                            pd: child.to_string(),
                            smoothing: Some(s.label()),
                            det: vec![Det(1u32.into())],
                            kind: CertKind::Leaf { base: BaseKind::Unknot },
                        }
                    })
                    .to_vec(),
            },
        };
        assert!(verify_certificate(&node));
        assert_eq!(node.det_triple(), Some([2, 1, 1]));
        let mut bad = node.clone();
        bad.det[2] = Det(2u32.into());
        assert!(!verify_certificate(&bad));
    }

    #[test]
    fn split_unlink_is_inconclusive() {
        let out = certify_qa(&LinkDiagram::unlink(2), DEFAULT_BUDGET).unwrap();
        assert!(matches!(out, CertifyOutcome::Inconclusive { budget_exhausted: false, .. }));
        assert_eq!(certify_qa(&LinkDiagram::unknot(), 0), Err(QaError::ZeroBudget));
    }

    #[test]
    fn certificates_round_trip_through_json() {
        let c = cert(TREFOIL);
        let back = QACertificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        let big = Det("123456789012345678901234567890".parse().unwrap());
        let text = serde_json::to_string(&big).unwrap();
        assert_eq!(text, "\"123456789012345678901234567890\"");
        assert_eq!(serde_json::from_str::<Det>(&text).unwrap(), big);
        assert_eq!(serde_json::to_string(&Det(7u32.into())).unwrap(), "7");
    }

    #[test]
    fn leaf_replaced_by_split_unlink_fails() {
        let mut c = cert(TREFOIL);
        c.pd = "O O".into();
        assert!(!verify_certificate(&c));
    }

    #[test]
    fn mirror_images_need_the_same_budget() {
        let d = parse_pd(
            "X(32,3,1,4) X(4,31,5,32) X(5,25,6,24) X(25,7,26,6) X(7,27,8,26) X(27,9,28,8) X(9,29,10,28) \
             X(29,11,30,10) X(11,31,12,30) X(23,14,24,15) X(15,22,16,23) X(21,16,22,17) X(13,20,14,21) \
             X(17,12,18,13) X(2,19,3,20) X(18,1,19,2)",
        )
        .unwrap();
        for dd in [d.clone(), d.mirror()] {
            assert!(!certify_qa(&dd, 1899).unwrap().is_certified());
            let c = certify_qa(&dd, 1900).unwrap();
            assert!(verify_certificate(c.certificate().unwrap()));
        }
    }
}
