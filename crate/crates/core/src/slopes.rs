//! Slope and continued-fraction arithmetic for Dehn fillings.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("0/0 is not a slope")]
    Indeterminate,
    #[error("cannot parse slope `{0}`")]
    Parse(String),
    #[error("negative slope {0}: pass to the mirror first")]
    Negative(Slope),
    #[error("the slope 1/0 has no finite expansion")]
    Infinite,
    #[error("empty continued fraction")]
    EmptyExpansion,
    #[error("term {index} of a continued fraction must be at least 1")]
    BadTerm { index: usize },
    #[error("{p} and {q} are not coprime")]
    NotCoprime { p: i64, q: i64 },
    #[error("cable parameter {0}")]
    BadCable(&'static str),
    #[error("invariants are inconsistent: {0}")]
    Inconsistent(String),
}

/// A reduced fraction `p/q` with `q ≥ 0`; `1/0` is the only slope with `q = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };
    pub const ZERO: Slope = Slope { p: 0, q: 1 };

    /// Reduces `p/q`, moving the sign to the numerator.
    pub fn new(p: i64, q: i64) -> Result<Self, SlopeError> {
        if p == 0 && q == 0 {
            return Err(SlopeError::Indeterminate);
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub fn integer(n: i64) -> Self {
        Slope { p: n, q: 1 }
    }

    pub fn p(self) -> i64 {
        self.p
    }

    pub fn q(self) -> i64 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.p == 0
    }

    pub fn is_infinite(self) -> bool {
        self.q == 0
    }

    pub fn is_negative(self) -> bool {
        self.p < 0
    }

    pub fn reciprocal(self) -> Self {
        Slope::new(self.q, self.p).expect("a slope is never 0/0")
    }
}

impl std::ops::Neg for Slope {
    type Output = Slope;

    fn neg(self) -> Slope {
        if self.q == 0 {
            self
        } else {
            Slope { p: -self.p, q: self.q }
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = SlopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || SlopeError::Parse(s.to_string());
        match s.split_once('/') {
            Some((p, q)) => {
                let p = p.trim().parse().map_err(|_| bad())?;
                let q = q.trim().parse().map_err(|_| bad())?;
                Slope::new(p, q)
            }
            None => Ok(Slope::integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl TryFrom<String> for Slope {
    type Error = SlopeError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Slope> for String {
    fn from(s: Slope) -> String {
        s.to_string()
    }
}

/// Terms `[a_1, …, a_ℓ]` of `a_1 + 1/(a_2 + 1/(… + 1/a_ℓ))`.
/// The empty expansion stands for `1/0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ContinuedFraction {
    terms: Vec<u64>,
}

impl ContinuedFraction {
    /// Requires every term after the first to be at least 1.
    pub fn new(terms: Vec<u64>) -> Result<Self, SlopeError> {
        if let Some(index) = terms.iter().skip(1).position(|&a| a == 0) {
            return Err(SlopeError::BadTerm { index: index + 1 });
        }
        Ok(ContinuedFraction { terms })
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Normal form: the last term is at least 2 whenever there are two or more.
    pub fn is_normal(&self) -> bool {
        self.terms.len() < 2 || *self.terms.last().unwrap_or(&0) >= 2
    }

    /// Sum of the terms: the number of crossings of the twist ladder.
    pub fn crossing_count(&self) -> u64 {
        self.terms.iter().sum()
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

/// Greedy expansion of a nonnegative finite slope.
pub fn cf_expand(r: Slope) -> Result<ContinuedFraction, SlopeError> {
    if r.is_infinite() {
        return Err(SlopeError::Infinite);
    }
    if r.is_negative() {
        return Err(SlopeError::Negative(r));
    }
    let (mut p, mut q) = (r.p, r.q);
    let mut terms = Vec::new();
    loop {
        terms.push((p / q) as u64);
        let rem = p % q;
        if rem == 0 {
            break;
        }
        p = q;
        q = rem;
    }
    Ok(ContinuedFraction { terms })
}

/// Evaluates terms from the back with integer pairs, which also makes sense
/// for a trailing zero term.
fn evaluate_terms(terms: &[u64]) -> Slope {
    let (mut num, mut den) = (1i64, 0i64);
    for &a in terms.iter().rev() {
        let next = a as i64 * num + den;
        den = num;
        num = next;
    }
    Slope::new(num, den).expect("continued fraction convergents are never 0/0")
}

pub fn cf_evaluate(cf: &ContinuedFraction) -> Slope {
    evaluate_terms(&cf.terms)
}

/// The two slopes reached by resolving the final crossing of the twist
/// ladder: `[a_1,…,a_{ℓ-1}]` and `[a_1,…,a_ℓ − 1]`.
pub fn cf_resolve_last(cf: &ContinuedFraction) -> Result<(Slope, Slope), SlopeError> {
    let (last, init) = cf.terms.split_last().ok_or(SlopeError::EmptyExpansion)?;
    if *last == 0 {
        return Err(SlopeError::BadTerm { index: cf.terms.len() - 1 });
    }
    let r0 = evaluate_terms(init);
    let mut shortened = cf.terms.clone();
    *shortened.last_mut().expect("nonempty") -= 1;
    Ok((r0, evaluate_terms(&shortened)))
}

/// Minimal geometric intersection number `|p_a q_b − p_b q_a|`.
pub fn slope_distance(a: Slope, b: Slope) -> u64 {
    (a.p as i128 * b.q as i128 - b.p as i128 * a.q as i128).unsigned_abs() as u64
}

/// Data attached to a framed tangle: `c_M`, the rational longitude in the
/// `(α, β)` basis, and the determinants of the two basic closures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramedTangleInvariants {
    pub c_m: u64,
    /// `(m, n)` with `λ_M = mα + nβ`.
    pub lambda: (i64, i64),
    pub d_inf: u64,
    pub d_zero: u64,
}

impl FramedTangleInvariants {
    pub fn new(c_m: u64, lambda: (i64, i64), d_inf: u64, d_zero: u64) -> Result<Self, SlopeError> {
        let inv = FramedTangleInvariants { c_m, lambda, d_inf, d_zero };
        inv.validate()?;
        Ok(inv)
    }

    /// Recovers `c_M` and `λ_M` from the two closure determinants. Since
    /// `λ_M` is primitive, `c_M = gcd(d_inf, d_zero)`.
    pub fn from_closure_dets(d_inf: u64, d_zero: u64) -> Result<Self, SlopeError> {
        let c = d_inf.gcd(&d_zero);
        if c == 0 {
            return Err(SlopeError::Inconsistent("both closure determinants vanish".into()));
        }
        Self::new(c, (-((d_zero / c) as i64), (d_inf / c) as i64), d_inf, d_zero)
    }

    pub fn validate(&self) -> Result<(), SlopeError> {
        let (m, n) = self.lambda;
        if self.c_m == 0 {
            return Err(SlopeError::Inconsistent("c_M must be positive".into()));
        }
        if n <= 0 || m >= 0 {
            return Err(SlopeError::Inconsistent(format!(
                "orientation requires α·λ > 0 and β·λ > 0, got λ = ({m}, {n})"
            )));
        }
        let lambda = Slope { p: m, q: n };
        let inf = self.c_m * slope_distance(Slope::INFINITY, lambda);
        let zero = self.c_m * slope_distance(Slope::ZERO, lambda);
        if inf != self.d_inf || zero != self.d_zero {
            return Err(SlopeError::Inconsistent(format!(
                "c_M·Δ gives ({inf}, {zero}) but closures have ({}, {})",
                self.d_inf, self.d_zero
            )));
        }
        Ok(())
    }
}

/// `c_M · Δ(pα + qβ, λ_M)`.
pub fn predicted_det(inv: &FramedTangleInvariants, r: Slope) -> BigUint {
    let (m, n) = inv.lambda;
    let cross = BigInt::from(r.p) * BigInt::from(n) - BigInt::from(r.q) * BigInt::from(m);
    (cross.abs() * BigInt::from(inv.c_m)).to_biguint().expect("absolute value is nonnegative")
}

/// Surgery coefficient `r = (kpq ± 1)/k` on the `(q, p)`-cable, and the slope
/// `r/q²` on the companion giving the same manifold.
pub fn cable_image_slope(p: i64, q: i64, k: i64, sign: i8) -> Result<(Slope, Slope), SlopeError> {
    if q < 2 {
        return Err(SlopeError::BadCable("q must be at least 2"));
    }
    if k < 1 {
        return Err(SlopeError::BadCable("k must be positive"));
    }
    if sign != 1 && sign != -1 {
        return Err(SlopeError::BadCable("sign must be ±1"));
    }
    if p.gcd(&q) != 1 {
        return Err(SlopeError::NotCoprime { p, q });
    }
    let num = k * p * q + sign as i64;
    Ok((Slope::new(num, k)?, Slope::new(num, k * q * q)?))
}

/// Outcome of filling a Seifert fibered space over a disk with cone points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Orbifold {
    /// Filling along the fiber: a connected sum of this many lens spaces.
    LensSpaceSum(usize),
    /// Seifert fibered over `S²` with these cone orders, the last one being
    /// `Δ(fill, fiber)`.
    Sphere(Vec<u64>),
}

impl fmt::Display for Orbifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orbifold::LensSpaceSum(n) => write!(f, "connect sum of {n} lens spaces"),
            Orbifold::Sphere(cones) => {
                f.write_str("S²(")?;
                for (i, c) in cones.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub fn heil_orbifold(cone_points: &[u64], fill: Slope, fiber: Slope) -> Orbifold {
    match slope_distance(fill, fiber) {
        0 => Orbifold::LensSpaceSum(cone_points.len()),
        delta => {
            let mut cones = cone_points.to_vec();
            cones.push(delta);
            Orbifold::Sphere(cones)
        }
    }
}
