//! Planar diagrams stored as PD codes.
//!
//! A crossing is a quadruple of edge identifiers listed counterclockwise,
//! starting at an understrand dart. Positions 0 and 2 carry the understrand,
//! positions 1 and 3 the overstrand. Crossing-free unknotted components are
//! kept as a plain counter.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub type EdgeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("empty diagram")]
    Empty,
    #[error("edge {edge} occurs {count} times (expected exactly 2)")]
    EdgeMultiplicity { edge: EdgeId, count: usize },
    #[error("face trace is not planar: {faces} faces for {crossings} crossings in {pieces} pieces")]
    NonPlanar { crossings: usize, faces: usize, pieces: usize },
    #[error("crossing index {index} out of range for a {count}-crossing diagram")]
    InvalidCrossing { index: usize, count: usize },
    #[error("smoothing choice must be 0 or 1, got {0}")]
    InvalidChoice(u8),
}

/// The two smoothings of a crossing `X(a,b,c,d)`.
///
/// `Zero` joins `a` to its counterclockwise neighbour `b` (and `c` to `d`);
/// `One` joins `a` to `d` (and `b` to `c`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Smoothing {
    Zero,
    One,
}

impl Smoothing {
    pub fn from_label(label: u8) -> Result<Self, DiagramError> {
        match label {
            0 => Ok(Smoothing::Zero),
            1 => Ok(Smoothing::One),
            other => Err(DiagramError::InvalidChoice(other)),
        }
    }

    pub fn label(self) -> u8 {
        match self {
            Smoothing::Zero => 0,
            Smoothing::One => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinkDiagram {
    crossings: Vec<[EdgeId; 4]>,
    n_edges: usize,
    trivial_loops: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramProperties {
    /// Connectivity of the diagram itself, not splitness of the link.
    pub connected: bool,
    pub alternating: bool,
    /// No nugatory crossing.
    pub reduced: bool,
    pub components: usize,
}

/// A dart is one of the four ends of a crossing: `(crossing, position)`.
type Dart = (usize, usize);

impl LinkDiagram {
    /// Builds a diagram and checks every structural invariant.
    pub fn new(crossings: Vec<[EdgeId; 4]>, trivial_loops: usize) -> Result<Self, DiagramError> {
        if crossings.is_empty() && trivial_loops == 0 {
            return Err(DiagramError::Empty);
        }
        let mut counts: HashMap<EdgeId, usize> = HashMap::new();
        for x in &crossings {
            for &e in x {
                *counts.entry(e).or_default() += 1;
            }
        }
        let n_edges = 2 * crossings.len();
        for e in 1..=n_edges as EdgeId {
            let count = counts.get(&e).copied().unwrap_or(0);
            if count != 2 {
                return Err(DiagramError::EdgeMultiplicity { edge: e, count });
            }
        }
        if let Some((&edge, &count)) = counts.iter().find(|(&e, _)| e == 0 || e as usize > n_edges) {
            return Err(DiagramError::EdgeMultiplicity { edge, count });
        }
        let d = LinkDiagram { crossings, n_edges, trivial_loops };
        d.check_planar()?;
        Ok(d)
    }

    /// The unknot with no crossings.
    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    /// `count` disjoint crossing-free circles.
    pub fn unlink(count: usize) -> Self {
        assert!(count >= 1, "an unlink needs at least one component");
        LinkDiagram { crossings: Vec::new(), n_edges: 0, trivial_loops: count }
    }

    /// Builds a diagram from crossings over arbitrary (nonzero) edge labels,
    /// relabelling edges consecutively along each component.
    pub(crate) fn from_arbitrary_labels(crossings: Vec<[EdgeId; 4]>, trivial_loops: usize) -> Self {
        let d = LinkDiagram { n_edges: 2 * crossings.len(), crossings, trivial_loops };
        let d = d.relabelled();
        debug_assert!(LinkDiagram::new(d.crossings.clone(), d.trivial_loops).is_ok());
        d
    }

    pub fn crossings(&self) -> &[[EdgeId; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn trivial_loops(&self) -> usize {
        self.trivial_loops
    }

    fn darts_of_edges(&self) -> HashMap<EdgeId, [Dart; 2]> {
        let mut seen: HashMap<EdgeId, Vec<Dart>> = HashMap::new();
        for (c, x) in self.crossings.iter().enumerate() {
            for (i, &e) in x.iter().enumerate() {
                seen.entry(e).or_default().push((c, i));
            }
        }
        seen.into_iter().map(|(e, v)| (e, [v[0], v[1]])).collect()
    }

    /// For every dart, the dart at the other end of its edge.
    pub(crate) fn opposite_darts(&self) -> Vec<[Dart; 4]> {
        let by_edge = self.darts_of_edges();
        self.crossings
            .iter()
            .enumerate()
            .map(|(c, x)| {
                let mut out = [(0, 0); 4];
                for i in 0..4 {
                    let [d0, d1] = by_edge[&x[i]];
                    out[i] = if d0 == (c, i) { d1 } else { d0 };
                }
                out
            })
            .collect()
    }

    /// Partitions corners into faces. Corner `(c, i)` is the region between
    /// darts `i` and `i+1` of crossing `c`. Returns the face index of every
    /// corner and the number of faces.
    pub(crate) fn faces(&self) -> (Vec<[usize; 4]>, usize) {
        let opp = self.opposite_darts();
        let mut face = vec![[usize::MAX; 4]; self.crossings.len()];
        let mut count = 0;
        for c in 0..self.crossings.len() {
            for i in 0..4 {
                if face[c][i] != usize::MAX {
                    continue;
                }
                let (mut cc, mut ii) = (c, i);
                while face[cc][ii] == usize::MAX {
                    face[cc][ii] = count;
                    let (nc, nj) = opp[cc][(ii + 1) % 4];
                    cc = nc;
                    ii = nj;
                }
                count += 1;
            }
        }
        (face, count)
    }

    /// Connected pieces of the crossing graph (free loops excluded), as a
    /// piece index per crossing plus the number of pieces.
    pub(crate) fn crossing_pieces(&self) -> (Vec<usize>, usize) {
        let n = self.crossings.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (e, [a, b]) in self.darts_of_edges() {
            let _ = e;
            let (ra, rb) = (find(&mut parent, a.0), find(&mut parent, b.0));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut index = HashMap::new();
        let mut piece = vec![0; n];
        for (c, slot) in piece.iter_mut().enumerate() {
            let r = find(&mut parent, c);
            let next = index.len();
            *slot = *index.entry(r).or_insert(next);
        }
        (piece, index.len())
    }

    fn check_planar(&self) -> Result<(), DiagramError> {
        if self.crossings.is_empty() {
            return Ok(());
        }
        let (_, faces) = self.faces();
        let (_, pieces) = self.crossing_pieces();
        // V - E + F = 2 per piece, with E = 2V.
        if faces != self.crossings.len() + 2 * pieces {
            return Err(DiagramError::NonPlanar { crossings: self.crossings.len(), faces, pieces });
        }
        Ok(())
    }

    /// Relabels edges 1..n consecutively along each component and rotates
    /// every crossing so that position 0 is the incoming understrand.
    fn relabelled(&self) -> Self {
        let n = self.crossings.len();
        if n == 0 {
            return LinkDiagram { crossings: Vec::new(), n_edges: 0, trivial_loops: self.trivial_loops };
        }
        let opp = self.opposite_darts();
        let mut label = vec![[0 as EdgeId; 4]; n];
        let mut incoming = vec![[false; 4]; n];
        let mut next: EdgeId = 1;
        for c in 0..n {
            for i in 0..4 {
                if label[c][i] != 0 {
                    continue;
                }
                // Leave crossing c through dart i and walk the strand.
                let (mut cc, mut ii) = (c, i);
                while label[cc][ii] == 0 {
                    let (oc, oi) = opp[cc][ii];
                    label[cc][ii] = next;
                    label[oc][oi] = next;
                    incoming[oc][oi] = true;
                    next += 1;
                    cc = oc;
                    ii = (oi + 2) % 4;
                }
            }
        }
        let crossings = (0..n)
            .map(|c| {
                let l = label[c];
                if incoming[c][2] && !incoming[c][0] {
                    [l[2], l[3], l[0], l[1]]
                } else {
                    l
                }
            })
            .collect();
        LinkDiagram { crossings, n_edges: 2 * n, trivial_loops: self.trivial_loops }
    }

    /// Replaces crossing `index` by one of its two smoothings.
    pub fn resolve_crossing(&self, index: usize, choice: Smoothing) -> Result<Self, DiagramError> {
        if index >= self.crossings.len() {
            return Err(DiagramError::InvalidCrossing { index, count: self.crossings.len() });
        }
        let [a, b, c, d] = self.crossings[index];
        let pairs = match choice {
            Smoothing::Zero => [(a, b), (c, d)],
            Smoothing::One => [(a, d), (b, c)],
        };
        let mut crossings = self.crossings.clone();
        crossings.remove(index);
        let loops = splice(&mut crossings, &pairs);
        Ok(LinkDiagram::from_arbitrary_labels(crossings, self.trivial_loops + loops))
    }

    /// Mirror image: every crossing is rotated by one position so that the
    /// over- and understrands trade places. The rotation direction is chosen
    /// per crossing so that mirroring twice restores the exact quadruple.
    pub fn mirror(&self) -> Self {
        let crossings = self.crossings.iter().map(|x| mirror_crossing(*x)).collect();
        LinkDiagram { crossings, n_edges: self.n_edges, trivial_loops: self.trivial_loops }
    }

    /// Applies crossing-removing Reidemeister I and II moves until none is left.
    pub fn reduce(&self) -> Self {
        let mut current = self.clone();
        let mut changed = false;
        while let Some(next) = current.remove_kink().or_else(|| current.remove_bigon()) {
            current = next;
            changed = true;
        }
        if changed {
            current.relabelled()
        } else {
            current
        }
    }

    pub(crate) fn remove_kink(&self) -> Option<Self> {
        for (k, x) in self.crossings.iter().enumerate() {
            for i in 0..4 {
                if x[i] == x[(i + 1) % 4] {
                    let pair = (x[(i + 2) % 4], x[(i + 3) % 4]);
                    let mut crossings = self.crossings.clone();
                    crossings.remove(k);
                    let loops = splice(&mut crossings, &[pair]);
                    return Some(LinkDiagram {
                        n_edges: 2 * crossings.len(),
                        crossings,
                        trivial_loops: self.trivial_loops + loops,
                    });
                }
            }
        }
        None
    }

    /// Finds the first bigon face whose two edges each keep the same level
    /// (over or under) at both ends, and cancels its two crossings.
    pub(crate) fn remove_bigon(&self) -> Option<Self> {
        let (face, count) = self.faces();
        let mut corners: Vec<Vec<Dart>> = vec![Vec::new(); count];
        for (c, f) in face.iter().enumerate() {
            for (i, &id) in f.iter().enumerate() {
                corners[id].push((c, i));
            }
        }
        for corner in corners.iter().filter(|v| v.len() == 2) {
            let (c1, i1) = corner[0];
            let (c2, i2) = corner[1];
            if c1 == c2 {
                continue;
            }
            // Walking the face from (c1, i1) reaches (c2, i2) over the edge at
            // dart (c1, i1+1); that edge sits at dart (c2, i2).
            let (c1, i1, c2, i2) = {
                let opp = self.opposite_darts();
                if opp[c1][(i1 + 1) % 4] == (c2, i2) {
                    (c1, i1, c2, i2)
                } else {
                    (c2, i2, c1, i1)
                }
            };
            if (i1 + 1) % 2 != i2 % 2 {
                continue;
            }
            let x1 = self.crossings[c1];
            let x2 = self.crossings[c2];
            let pairs = [(x1[(i1 + 3) % 4], x2[(i2 + 2) % 4]), (x1[(i1 + 2) % 4], x2[(i2 + 3) % 4])];
            let crossings: Vec<[EdgeId; 4]> = self
                .crossings
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != c1 && *k != c2)
                .map(|(_, x)| *x)
                .collect();
            let mut crossings = crossings;
            let loops = splice(&mut crossings, &pairs);
            return Some(LinkDiagram {
                n_edges: 2 * crossings.len(),
                crossings,
                trivial_loops: self.trivial_loops + loops,
            });
        }
        None
    }

    pub fn properties(&self) -> DiagramProperties {
        let n = self.crossings.len();
        let connected = if n == 0 {
            self.trivial_loops == 1
        } else {
            self.trivial_loops == 0 && self.crossing_pieces().1 == 1
        };
        let opp = self.opposite_darts();
        let alternating = (0..n).all(|c| (0..4).all(|i| opp[c][i].1 % 2 != i % 2));
        let (face, _) = self.faces();
        let reduced = face.iter().all(|f| f[0] != f[2] && f[1] != f[3]);
        DiagramProperties { connected, alternating, reduced, components: self.components() }
    }

    /// Number of link components, by strand tracing.
    pub fn components(&self) -> usize {
        let n = self.crossings.len();
        let opp = if n > 0 { self.opposite_darts() } else { Vec::new() };
        let mut seen = vec![[false; 4]; n];
        let mut count = self.trivial_loops;
        for c in 0..n {
            for i in 0..4 {
                if seen[c][i] {
                    continue;
                }
                count += 1;
                let (mut cc, mut ii) = (c, i);
                while !seen[cc][ii] {
                    seen[cc][ii] = true;
                    let (oc, oi) = opp[cc][ii];
                    seen[oc][oi] = true;
                    cc = oc;
                    ii = (oi + 2) % 4;
                }
            }
        }
        count
    }

    /// Minimal serialization over traversal-based relabellings, used as a
    /// memo key. Isomorphic diagrams usually, though not always, collide.
    pub fn canonical_key(&self) -> String {
        let n = self.crossings.len();
        if n == 0 {
            return self.to_string();
        }
        let opp = self.opposite_darts();
        let mut best: Option<Vec<[EdgeId; 4]>> = None;
        for start_c in 0..n {
            for start_i in 0..4 {
                let mut label = vec![[0 as EdgeId; 4]; n];
                let mut next: EdgeId = 1;
                let order = std::iter::once((start_c, start_i))
                    .chain((0..n).flat_map(|c| (0..4).map(move |i| (c, i))));
                for (c, i) in order {
                    let (mut cc, mut ii) = (c, i);
                    while label[cc][ii] == 0 {
                        let (oc, oi) = opp[cc][ii];
                        label[cc][ii] = next;
                        label[oc][oi] = next;
                        next += 1;
                        cc = oc;
                        ii = (oi + 2) % 4;
                    }
                }
                let mut quads: Vec<[EdgeId; 4]> = label
                    .iter()
                    .map(|l| if l[0] <= l[2] { *l } else { [l[2], l[3], l[0], l[1]] })
                    .collect();
                quads.sort_unstable();
                if best.as_ref().is_none_or(|b| quads < *b) {
                    best = Some(quads);
                }
            }
        }
        let crossings = best.unwrap_or_default();
        LinkDiagram { crossings, n_edges: self.n_edges, trivial_loops: self.trivial_loops }.to_string()
    }
}

/// Joins edge ends across a removed region. Each pair `(u, v)` says that the
/// strand entering the region along `u` leaves it along `v`. Returns how
/// many closed crossing-free loops were produced.
pub(crate) fn splice(crossings: &mut [[EdgeId; 4]], pairs: &[(EdgeId, EdgeId)]) -> usize {
    let mut pending: Vec<(EdgeId, EdgeId)> = pairs.to_vec();
    let mut loops = 0;
    for k in 0..pending.len() {
        let (u, v) = pending[k];
        if u == v {
            loops += 1;
            continue;
        }
        for x in crossings.iter_mut() {
            for e in x.iter_mut() {
                if *e == v {
                    *e = u;
                }
            }
        }
        for p in pending.iter_mut().skip(k + 1) {
            if p.0 == v {
                p.0 = u;
            }
            if p.1 == v {
                p.1 = u;
            }
        }
    }
    loops
}

pub(crate) fn mirror_crossing(x: [EdgeId; 4]) -> [EdgeId; 4] {
    let [a, b, c, d] = x;
    let under = (a.min(c), a.max(c));
    let over = (b.min(d), b.max(d));
    let forward = if under == over { a == b } else { under < over };
    if forward {
        [b, c, d, a]
    } else {
        [d, a, b, c]
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in &self.crossings {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "X({},{},{},{})", x[0], x[1], x[2], x[3])?;
        }
        for _ in 0..self.trivial_loops {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str("O")?;
        }
        Ok(())
    }
}

pub(crate) fn parse_tokens(text: &str) -> Result<(Vec<[EdgeId; 4]>, usize), DiagramError> {
    let mut crossings = Vec::new();
    let mut loops = 0;
    for token in text.split_whitespace() {
        if token == "O" {
            loops += 1;
            continue;
        }
        let inner = token
            .strip_prefix("X(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| DiagramError::MalformedToken(token.to_string()))?;
        let ids: Vec<EdgeId> = inner
            .split(',')
            .map(|s| s.parse::<EdgeId>())
            .collect::<Result<_, _>>()
            .map_err(|_| DiagramError::MalformedToken(token.to_string()))?;
        let quad: [EdgeId; 4] =
            ids.try_into().map_err(|_| DiagramError::MalformedToken(token.to_string()))?;
        crossings.push(quad);
    }
    Ok((crossings, loops))
}

/// Parses whitespace-separated `X(a,b,c,d)` and `O` tokens.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
    let (crossings, loops) = parse_tokens(text)?;
    LinkDiagram::new(crossings, loops)
}

impl FromStr for LinkDiagram {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pd(s)
    }
}
