//! Four-ended tangles, rational twist ladders and their closures.
//!
//! Boundary points are NW, NE, SW, SE. The closure `τ(1/0)` joins NW–NE and
//! SW–SE; the closure `τ(0)` joins NW–SW and NE–SE. The sum `T1 + T2` places
//! `T2` to the right of `T1`, so the `τ(0)` closure of a sum is the connected
//! sum of the summands' `τ(0)` closures. `τ(r)` is the `τ(1/0)` closure of
//! `T + R(r)`, where `R(r)` is the rational twist ladder of `r`; its
//! determinant is `p·det τ(1/0) + q·det τ(0)` for a correctly framed `T`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diagram::{mirror_crossing, parse_tokens, DiagramError, EdgeId, LinkDiagram};
use crate::slopes::{cf_expand, Slope, SlopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangleError {
    #[error(transparent)]
    Slope(#[from] SlopeError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("edge {edge} occurs {count} times counting open ends (expected 2)")]
    EdgeMultiplicity { edge: EdgeId, count: usize },
    #[error("cannot close at negative slope {0}: mirror first")]
    NegativeSlope(Slope),
    #[error("Montesinos fraction {0} needs a denominator of at least {1}")]
    SmallDenominator(Slope, i64),
    #[error("malformed tangle `{0}`")]
    Malformed(String),
}

/// Boundary positions, in the order used by `open`.
pub const NW: usize = 0;
pub const NE: usize = 1;
pub const SW: usize = 2;
pub const SE: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tangle {
    crossings: Vec<[EdgeId; 4]>,
    /// Edge ids at NW, NE, SW, SE.
    open: [EdgeId; 4],
    loops: usize,
    framing_twists: i64,
}

/// Handedness of a twist crossing: `Positive` puts the SW–NE strand over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Hand {
    Positive,
    Negative,
}

impl Hand {
    fn of(sign: i64) -> Hand {
        if sign >= 0 {
            Hand::Positive
        } else {
            Hand::Negative
        }
    }
}

/// Crossing from its four darts given by direction.
fn crossing(ne: EdgeId, nw: EdgeId, sw: EdgeId, se: EdgeId, hand: Hand) -> [EdgeId; 4] {
    match hand {
        // SW–NE over: start at the understrand dart NW.
        Hand::Positive => [nw, sw, se, ne],
        Hand::Negative => [sw, se, ne, nw],
    }
}

fn join(crossings: &mut [[EdgeId; 4]], open: &mut [EdgeId], pairs: &[(EdgeId, EdgeId)]) -> usize {
    let mut pending = pairs.to_vec();
    let mut loops = 0;
    for k in 0..pending.len() {
        let (u, v) = pending[k];
        if u == v {
            loops += 1;
            continue;
        }
        let swap = |e: &mut EdgeId| {
            if *e == v {
                *e = u;
            }
        };
        crossings.iter_mut().flat_map(|x| x.iter_mut()).for_each(swap);
        open.iter_mut().for_each(swap);
        for p in pending.iter_mut().skip(k + 1) {
            swap(&mut p.0);
            swap(&mut p.1);
        }
    }
    loops
}

impl Tangle {
    /// Validates edge multiplicities and that both closures are planar.
    pub fn new(
        crossings: Vec<[EdgeId; 4]>,
        open: [EdgeId; 4],
        loops: usize,
        framing_twists: i64,
    ) -> Result<Self, TangleError> {
        let mut counts: HashMap<EdgeId, usize> = HashMap::new();
        for &e in crossings.iter().flatten().chain(open.iter()) {
            *counts.entry(e).or_default() += 1;
        }
        if let Some((&edge, &count)) = counts.iter().find(|(&e, &c)| c != 2 || e == 0) {
            return Err(TangleError::EdgeMultiplicity { edge, count });
        }
        let t = Tangle { crossings, open, loops, framing_twists };
        for (a, b, c, d) in [(NW, NE, SW, SE), (NW, SW, NE, SE)] {
            let mut xs = t.crossings.clone();
            let mut o = t.open;
            let pairs = [(o[a], o[b]), (o[c], o[d])];
            let extra = join(&mut xs, &mut o, &pairs);
            let mut relabel: HashMap<EdgeId, EdgeId> = HashMap::new();
            for e in xs.iter_mut().flatten() {
                let next = relabel.len() as EdgeId + 1;
                *e = *relabel.entry(*e).or_insert(next);
            }
            LinkDiagram::new(xs, t.loops + extra)?;
        }
        Ok(t.normalized())
    }

    /// Horizontal arcs NW–NE and SW–SE.
    fn horizontal_arcs() -> Self {
        Tangle { crossings: Vec::new(), open: [1, 1, 2, 2], loops: 0, framing_twists: 0 }
    }

    /// Vertical arcs NW–SW and NE–SE.
    fn vertical_arcs() -> Self {
        Tangle { crossings: Vec::new(), open: [1, 2, 1, 2], loops: 0, framing_twists: 0 }
    }

    fn next_id(&self) -> EdgeId {
        self.crossings.iter().flatten().chain(self.open.iter()).copied().max().unwrap_or(0) + 1
    }

    /// Twists the right-hand endpoints NE and SE around each other.
    fn twist_right(&mut self, hand: Hand) {
        let (ne, se) = (self.next_id(), self.next_id() + 1);
        self.crossings.push(crossing(ne, self.open[NE], self.open[SE], se, hand));
        self.open[NE] = ne;
        self.open[SE] = se;
    }

    /// Twists the bottom endpoints SW and SE around each other.
    fn twist_bottom(&mut self, hand: Hand) {
        let (sw, se) = (self.next_id(), self.next_id() + 1);
        self.crossings.push(crossing(self.open[SE], self.open[SW], sw, se, hand));
        self.open[SW] = sw;
        self.open[SE] = se;
    }

    fn normalized(mut self) -> Self {
        let mut relabel: HashMap<EdgeId, EdgeId> = HashMap::new();
        for e in self.crossings.iter_mut().flatten().chain(self.open.iter_mut()) {
            let next = relabel.len() as EdgeId + 1;
            *e = *relabel.entry(*e).or_insert(next);
        }
        self
    }

    pub fn crossings(&self) -> &[[EdgeId; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn open_ends(&self) -> [EdgeId; 4] {
        self.open
    }

    pub fn loops(&self) -> usize {
        self.loops
    }

    pub fn framing_twists(&self) -> i64 {
        self.framing_twists
    }

    pub fn mirror(&self) -> Self {
        Tangle {
            crossings: self.crossings.iter().map(|x| mirror_crossing(*x)).collect(),
            open: self.open,
            loops: self.loops,
            framing_twists: -self.framing_twists,
        }
    }

    /// The rational tangle of `r`: a twist ladder built from the greedy
    /// expansion `[a_1, …, a_ℓ]`, innermost term first. Negative slopes give
    /// the mirror of `rational(-r)`.
    pub fn rational(r: Slope) -> Self {
        if r.is_negative() {
            return Tangle::rational(-r).mirror();
        }
        let terms = if r.is_infinite() {
            Vec::new()
        } else {
            cf_expand(r).expect("nonnegative finite slope").terms().to_vec()
        };
        let len = terms.len();
        let mut t = if len % 2 == 1 { Tangle::vertical_arcs() } else { Tangle::horizontal_arcs() };
        for (i, &a) in terms.iter().enumerate().rev() {
            for _ in 0..a {
                // Odd positions (1-based) add one to the slope, even ones
                // add one to its reciprocal.
                if i % 2 == 0 {
                    t.twist_bottom(Hand::Positive);
                } else {
                    t.twist_right(Hand::Positive);
                }
            }
        }
        t.normalized()
    }

    /// Rational summand of a Montesinos tangle written as `β/α`: the
    /// rational tangle whose `τ(0)` closure is the two-bridge link `b(α, β)`.
    pub fn montesinos_summand(fraction: Slope) -> Self {
        let alpha = fraction.q();
        let beta = fraction.p();
        let slope = Slope::new(alpha, beta.abs()).expect("fraction is never 0/0");
        let t = Tangle::rational(slope);
        if beta < 0 {
            t.mirror()
        } else {
            t
        }
    }

    /// `n` twists of the right-hand endpoints; the integer tangle of a
    /// Montesinos presentation.
    pub fn integer_twists(n: i64) -> Self {
        let mut t = Tangle::horizontal_arcs();
        for _ in 0..n.unsigned_abs() {
            t.twist_right(Hand::of(n));
        }
        t.normalized()
    }

    /// Places `other` to the right of `self`, joining NE/SE to NW/SW.
    pub fn sum(&self, other: &Tangle) -> Tangle {
        let (mut xs, o1, o2, loops) = combine(self, other);
        let mut rest = [o1[NW], o2[NE], o1[SW], o2[SE]];
        let extra = join(&mut xs, &mut rest, &[(o1[NE], o2[NW]), (o1[SE], o2[SW])]);
        Tangle {
            crossings: xs,
            open: rest,
            loops: loops + extra,
            framing_twists: 0,
        }
        .normalized()
    }

    /// Places `below` underneath `self`, joining SW/SE to NW/NE.
    pub fn stack(&self, below: &Tangle) -> Tangle {
        let (mut xs, o1, o2, loops) = combine(self, below);
        let mut rest = [o1[NW], o1[NE], o2[SW], o2[SE]];
        let extra = join(&mut xs, &mut rest, &[(o1[SW], o2[NW]), (o1[SE], o2[NE])]);
        Tangle {
            crossings: xs,
            open: rest,
            loops: loops + extra,
            framing_twists: 0,
        }
        .normalized()
    }

    pub fn add_framing_twists(&self, k: i64) -> Tangle {
        Tangle { framing_twists: self.framing_twists + k, ..self.clone() }
    }

    /// The tangle with its framing twists realised as crossings.
    fn framed(&self) -> Tangle {
        let mut t = Tangle { framing_twists: 0, ..self.clone() };
        for _ in 0..self.framing_twists.unsigned_abs() {
            t.twist_bottom(Hand::of(self.framing_twists));
        }
        t
    }

    /// The link `τ(r)`. Crossings of the twist ladder come first, starting
    /// with those of the final continued-fraction term.
    pub fn closure(&self, r: Slope) -> Result<LinkDiagram, TangleError> {
        if r.is_negative() {
            return Err(TangleError::NegativeSlope(r));
        }
        let ladder = Tangle::rational(r);
        let body = self.framed();
        let (mut xs, l, b, loops) = combine(&ladder, &body);
        let mut none: [EdgeId; 0] = [];
        let extra = join(
            &mut xs,
            &mut none,
            &[(b[NE], l[NW]), (b[SE], l[SW]), (b[NW], l[NE]), (b[SW], l[SE])],
        );
        Ok(LinkDiagram::from_arbitrary_labels(xs, loops + extra))
    }

    pub fn closure_inf(&self) -> LinkDiagram {
        self.closure(Slope::INFINITY).expect("1/0 is a valid closure slope")
    }

    pub fn closure_zero(&self) -> LinkDiagram {
        self.closure(Slope::ZERO).expect("0 is a valid closure slope")
    }
}

/// Index of the crossing in `closure(_, r)` that belongs to the last term of
/// the twist ladder, when that term is nonzero.
pub fn final_ladder_crossing(r: Slope) -> Option<usize> {
    if r.is_infinite() || r.is_negative() {
        return None;
    }
    let cf = cf_expand(r).ok()?;
    match cf.terms().last() {
        Some(&a) if a > 0 => Some(0),
        _ => None,
    }
}

/// Concatenates crossings (first tangle first) with disjoint edge ids.
fn combine(a: &Tangle, b: &Tangle) -> (Vec<[EdgeId; 4]>, [EdgeId; 4], [EdgeId; 4], usize) {
    let a = a.framed();
    let b = b.framed();
    let offset = a.next_id();
    let mut xs = a.crossings.clone();
    xs.extend(b.crossings.iter().map(|x| x.map(|e| e + offset)));
    (xs, a.open, b.open.map(|e| e + offset), a.loops + b.loops)
}

pub fn rational_tangle(r: Slope) -> Tangle {
    Tangle::rational(r)
}

pub fn tangle_sum(t1: &Tangle, t2: &Tangle) -> Tangle {
    t1.sum(t2)
}

pub fn add_framing_twists(t: &Tangle, k: i64) -> Tangle {
    t.add_framing_twists(k)
}

pub fn closure(t: &Tangle, r: Slope) -> Result<LinkDiagram, TangleError> {
    t.closure(r)
}

/// The two-bridge link `b(p, q)` as the `τ(0)` closure of `R(p/q)`.
pub fn two_bridge_diagram(r: Slope) -> Result<LinkDiagram, TangleError> {
    if r.p() < 1 {
        return Err(TangleError::Slope(SlopeError::Negative(r)));
    }
    Tangle::rational(r).closure(Slope::ZERO)
}

/// Sum of the Montesinos summands `β_i/α_i` plus `e` integer twists, closed
/// with `τ(1/0)`.
pub fn montesinos_tangle(e: i64, fractions: &[Slope]) -> Result<Tangle, TangleError> {
    let mut t = Tangle::integer_twists(e);
    for &f in fractions {
        if f.q() < 2 {
            return Err(TangleError::SmallDenominator(f, 2));
        }
        t = t.sum(&Tangle::montesinos_summand(f));
    }
    Ok(t)
}

pub fn montesinos_diagram(e: i64, fractions: &[Slope]) -> Result<LinkDiagram, TangleError> {
    Ok(montesinos_tangle(e, fractions)?.closure_inf())
}

impl fmt::Display for Tangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("TANGLE{pd=")?;
        let mut first = true;
        for x in &self.crossings {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "X({},{},{},{})", x[0], x[1], x[2], x[3])?;
        }
        for _ in 0..self.loops {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str("O")?;
        }
        let [a, b, c, d] = self.open;
        write!(f, "; open=({a},{b},{c},{d}); frame={}}}", self.framing_twists)
    }
}

impl FromStr for Tangle {
    type Err = TangleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TangleError::Malformed(s.to_string());
        let body = s.trim().strip_prefix("TANGLE{").and_then(|b| b.strip_suffix('}')).ok_or_else(bad)?;
        let mut parts = body.split(';').map(str::trim);
        let pd = parts.next().and_then(|p| p.strip_prefix("pd=")).ok_or_else(bad)?;
        let open = parts.next().and_then(|p| p.strip_prefix("open=")).ok_or_else(bad)?;
        let frame = parts.next().and_then(|p| p.strip_prefix("frame=")).ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let (crossings, loops) = parse_tokens(pd)?;
        let ids: Vec<EdgeId> = open
            .strip_prefix('(')
            .and_then(|o| o.strip_suffix(')'))
            .ok_or_else(bad)?
            .split(',')
            .map(|v| v.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let open: [EdgeId; 4] = ids.try_into().map_err(|_| bad())?;
        let frame: i64 = frame.parse().map_err(|_| bad())?;
        Tangle::new(crossings, open, loops, frame)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determinant::determinant;
    use num_bigint::BigUint;

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    fn det(d: &LinkDiagram) -> u64 {
        let v = determinant(d);
        u64::try_from(&v).unwrap()
    }

    fn base_tangle() -> Tangle {
        montesinos_tangle(0, &[s(1, 2), s(-1, 5)]).unwrap()
    }

    #[test]
    fn zero_tangle_has_no_crossings() {
        let t = Tangle::rational(Slope::ZERO);
        assert_eq!(t.crossing_count(), 0);
        assert_eq!(det(&t.closure_zero()), 0);
        assert_eq!(det(&t.closure_inf()), 1);
    }

    #[test]
    fn rational_closures() {
        assert_eq!(det(&Tangle::rational(s(11, 2)).closure_zero()), 11);
        let hopf = Tangle::rational(s(2, 1)).closure_zero();
        assert_eq!(hopf.crossing_count(), 2);
        assert_eq!(det(&hopf), 2);
        assert_eq!(hopf.components(), 2);
    }

    #[test]
    fn two_bridge_small_cases() {
        assert_eq!(det(&two_bridge_diagram(s(3, 1)).unwrap()), 3);
        assert_eq!(det(&two_bridge_diagram(s(13, 10)).unwrap()), 13);
        assert_eq!(det(&two_bridge_diagram(s(1, 1)).unwrap()), 1);
        let p = two_bridge_diagram(s(13, 10)).unwrap().properties();
        assert!(p.alternating && p.connected);
    }

    #[test]
    fn base_tangle_closures() {
        let t = base_tangle();
        assert_eq!(det(&t.closure_inf()), 3);
        assert_eq!(det(&t.closure_zero()), 10);
        assert_eq!(det(&t.closure(s(1, 1)).unwrap()), 13);
        assert_eq!(det(&t.closure(s(7, 3)).unwrap()), 51);
    }

    #[test]
    fn sum_with_the_zero_closure_identity() {
        let t = base_tangle();
        let id = Tangle::rational(Slope::INFINITY);
        let summed = t.sum(&id);
        assert_eq!(det(&summed.closure_inf()), 3);
        assert_eq!(det(&summed.closure_zero()), 10);
    }

    #[test]
    fn connected_sum_multiplies() {
        let t = Tangle::montesinos_summand(s(1, 2)).sum(&Tangle::montesinos_summand(s(-1, 5)));
        assert_eq!(det(&t.closure_zero()), 10);
        for a in [s(3, 1), s(5, 2), s(7, 3)] {
            for b in [s(2, 1), s(4, 1), s(8, 3)] {
                let (ta, tb) = (Tangle::rational(a), Tangle::rational(b));
                let lhs = det(&ta.sum(&tb).closure_zero());
                assert_eq!(lhs, det(&ta.closure_zero()) * det(&tb.closure_zero()), "{a} + {b}");
            }
        }
    }

    #[test]
    fn framing_twist_shifts_integer_slopes() {
        let t = base_tangle();
        let twisted = t.add_framing_twists(1);
        for n in 0..=10 {
            assert_eq!(
                det(&twisted.closure(Slope::integer(n)).unwrap()),
                det(&t.closure(Slope::integer(n + 1)).unwrap()),
                "n = {n}"
            );
        }
        assert_eq!(t.add_framing_twists(0), t);
        assert_eq!(t.add_framing_twists(-3).add_framing_twists(3).to_string(), t.to_string());
    }

    #[test]
    fn crossing_count_of_closures() {
        let t = base_tangle().add_framing_twists(2);
        let d = t.closure(s(13, 10)).unwrap();
        assert_eq!(d.crossing_count(), t.crossing_count() + 2 + 7);
    }

    #[test]
    fn montesinos_determinants() {
        let cases: [(i64, Vec<Slope>, u64); 3] = [
            (0, vec![s(1, 2), s(-1, 5)], 3),
            (0, vec![s(1, 2), s(-1, 5), s(3, 7)], 51),
            (1, vec![s(1, 2)], 3),
        ];
        for (e, fr, expected) in cases {
            assert_eq!(det(&montesinos_diagram(e, &fr).unwrap()), expected, "{e} {fr:?}");
        }
        assert!(montesinos_diagram(0, &[s(1, 1)]).is_err());
    }

    #[test]
    fn serialization_round_trips() {
        for t in [base_tangle(), Tangle::rational(Slope::ZERO), base_tangle().add_framing_twists(-2)] {
            let text = t.to_string();
            let back: Tangle = text.parse().unwrap();
            assert_eq!(back.to_string(), text);
        }
        assert!("TANGLE{pd=X(1,2,3,4); open=(1,2,3,9); frame=0}".parse::<Tangle>().is_err());
        assert!("TANGLE{pd=; open=(1,1,2,2)}".parse::<Tangle>().is_err());
    }

    #[test]
    fn negative_slopes_are_rejected() {
        assert!(matches!(base_tangle().closure(s(-1, 2)), Err(TangleError::NegativeSlope(_))));
        assert_eq!(final_ladder_crossing(s(7, 3)), Some(0));
        assert_eq!(final_ladder_crossing(Slope::ZERO), None);
        let _ = BigUint::from(0u32);
    }
}
