//! Ramification types `[m_1, ..., m_r]`, the quantities Θ and α, the finite
//! set of admissible types and the candidate triples `(m, T1, T2)`.
//!
//! All admissibility decisions are made in exact rational arithmetic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::snf;

pub type Rational = Ratio<i64>;

/// Upper bound on the group order of any candidate triple: α ≤ 168 on both sides.
pub const MAX_GROUP_ORDER: u64 = 14112;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("a type needs at least 3 entries, got {0}")]
    TooShort(usize),
    #[error("branching orders must be at least 2, got {0}")]
    OrderBelowTwo(u32),
    #[error("cannot parse type `{0}`")]
    Parse(String),
}

/// Why a tuple fails to be an admissible type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeRejection {
    #[error("theta = {0} is not positive")]
    NonPositiveTheta(Rational),
    #[error("4/theta = {0} is not an integer")]
    NonIntegralAlpha(Rational),
    #[error("branching order {order} does not divide alpha = {alpha}")]
    OrderDoesNotDivideAlpha { order: u32, alpha: u32 },
    #[error("|G| * theta = {0} is not a positive even integer")]
    BadGenus(Rational),
}

/// A sorted tuple of branching orders.
///
/// Ordered first by length, then lexicographically on the orders, which is
/// the canonical order used to store unordered pairs of types.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeTuple(Vec<u32>);

impl TypeTuple {
    pub fn new(mut orders: Vec<u32>) -> Result<Self, TypeError> {
        if orders.len() < 3 {
            return Err(TypeError::TooShort(orders.len()));
        }
        if let Some(&m) = orders.iter().find(|&&m| m < 2) {
            return Err(TypeError::OrderBelowTwo(m));
        }
        orders.sort_unstable();
        Ok(TypeTuple(orders))
    }

    pub fn orders(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_pure_involution(&self) -> bool {
        self.0.iter().all(|&m| m == 2)
    }

    /// Distinct orders with multiplicities, ascending.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &m in &self.0 {
            match out.last_mut() {
                Some((o, k)) if *o == m => *k += 1,
                _ => out.push((m, 1)),
            }
        }
        out
    }

    /// Plain comma form `[2,2,4,4]`, as used in CLI arguments.
    pub fn expanded(&self) -> String {
        let inner: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        format!("[{}]", inner.join(","))
    }
}

impl Ord for TypeTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for TypeTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exponent notation: `[2^3,4]`.
impl fmt::Display for TypeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .multiplicities()
            .into_iter()
            .map(|(m, k)| if k == 1 { m.to_string() } else { format!("{m}^{k}") })
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for TypeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `[2,3,7]`, `2,3,7`, `[2^3,4]` and whitespace variants.
impl FromStr for TypeTuple {
    type Err = TypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TypeError::Parse(s.to_string());
        let body = s.trim();
        let body = body.strip_prefix('[').unwrap_or(body);
        let body = body.strip_suffix(']').unwrap_or(body);
        let mut orders = Vec::new();
        for part in body.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(bad());
            }
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<usize>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let m: u32 = base.parse().map_err(|_| bad())?;
            orders.extend(std::iter::repeat_n(m, exp));
        }
        TypeTuple::new(orders)
    }
}

/// Θ(T) = −2 + Σ (1 − 1/m_i).
pub fn theta(t: &TypeTuple) -> Rational {
    t.orders().iter().fold(Rational::from_integer(-2), |acc, &m| acc + Rational::new(m as i64 - 1, m as i64))
}

/// α(T) = 4/Θ(T) when that is a positive integer.
pub fn alpha(t: &TypeTuple) -> Result<u32, TypeRejection> {
    let th = theta(t);
    if th <= Rational::from_integer(0) {
        return Err(TypeRejection::NonPositiveTheta(th));
    }
    let a = Rational::from_integer(4) / th;
    if !a.is_integer() {
        return Err(TypeRejection::NonIntegralAlpha(a));
    }
    Ok(a.to_integer() as u32)
}

/// A type satisfying all admissibility conditions.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AdmissibleType {
    pub ty: TypeTuple,
    #[serde(with = "ratio_serde")]
    pub theta: Rational,
    pub alpha: u32,
}

impl AdmissibleType {
    pub fn new(ty: TypeTuple) -> Result<Self, TypeRejection> {
        let alpha = alpha(&ty)?;
        if let Some(&order) = ty.orders().iter().find(|&&m| alpha % m != 0) {
            return Err(TypeRejection::OrderDoesNotDivideAlpha { order, alpha });
        }
        let theta = theta(&ty);
        Ok(AdmissibleType { ty, theta, alpha })
    }

    pub fn len(&self) -> usize {
        self.ty.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ty.is_empty()
    }
}

impl Ord for AdmissibleType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ty.cmp(&other.ty)
    }
}

impl PartialOrd for AdmissibleType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AdmissibleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.ty, self.alpha)
    }
}

mod ratio_serde {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Search ranges for the brute-force type enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationBounds {
    /// `r ≤ 8`; for `r = 3`: `m_2 ≥ 3`, `m_3 ≤ 30`; for `r ≥ 4`: `m_r ≤ 10/(r−3)`.
    Proof,
    /// Every nondecreasing tuple with `len ≤ max_len` and entries `≤ max_order`.
    Wide { max_len: usize, max_order: u32 },
}

/// The finite set of admissible types, ordered by (length, orders).
pub fn enumerate_admissible_types() -> Vec<AdmissibleType> {
    enumerate_admissible_types_within(EnumerationBounds::Proof)
}

pub fn enumerate_admissible_types_within(bounds: EnumerationBounds) -> Vec<AdmissibleType> {
    let mut out = Vec::new();
    let mut buf = Vec::new();
    match bounds {
        EnumerationBounds::Proof => {
            for r in 3..=8usize {
                let hi = if r == 3 { 30 } else { (10 / (r - 3)) as u32 };
                scan(r, hi, &mut buf, &mut |t| {
                    if r == 3 && t[1] < 3 {
                        return;
                    }
                    push_if_admissible(t, &mut out);
                });
            }
        }
        EnumerationBounds::Wide { max_len, max_order } => {
            for r in 3..=max_len {
                scan(r, max_order, &mut buf, &mut |t| push_if_admissible(t, &mut out));
            }
        }
    }
    out.sort();
    out
}

fn push_if_admissible(t: &[u32], out: &mut Vec<AdmissibleType>) {
    let ty = TypeTuple(t.to_vec());
    if let Ok(a) = AdmissibleType::new(ty) {
        out.push(a);
    }
}

/// Visits nondecreasing tuples of length `r` with entries in `2..=hi`.
///
/// Prunes once Σ(1 − 1/m_i) exceeds 4: then Θ > 2 and α < 2 ≤ m_r, so no
/// extension can be admissible.
fn scan(r: usize, hi: u32, buf: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    fn rec(r: usize, lo: u32, hi: u32, sum: Rational, buf: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
        if buf.len() == r {
            visit(buf);
            return;
        }
        for m in lo..=hi {
            let s = sum + Rational::new(m as i64 - 1, m as i64);
            // every remaining entry adds at least 1/2
            let rest = Rational::new((r - buf.len() - 1) as i64, 2);
            if s + rest > Rational::from_integer(4) {
                break;
            }
            buf.push(m);
            rec(r, m, hi, s, buf, visit);
            buf.pop();
        }
    }
    buf.clear();
    rec(r, 2, hi, Rational::from_integer(0), buf, visit);
}

/// Genus g of a curve with a G-action of type `t`: 2g − 2 = |G|·Θ(t).
pub fn genus_from_type(t: &AdmissibleType, group_order: u64) -> Result<u64, TypeRejection> {
    let twice = t.theta * Rational::from_integer(group_order as i64);
    if !twice.is_integer() || twice.to_integer() <= 0 || twice.to_integer() % 2 != 0 {
        return Err(TypeRejection::BadGenus(twice));
    }
    Ok(twice.to_integer() as u64 / 2 + 1)
}

/// A triple `(m, T1, T2)` with `m = α(T1)α(T2)/2`, stored with `t1 ≤ t2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct CandidateTriple {
    pub group_order: u64,
    pub t1: AdmissibleType,
    pub t2: AdmissibleType,
}

impl CandidateTriple {
    /// Builds the triple if α(t1)α(t2) is even; orders the pair canonically.
    pub fn new(a: AdmissibleType, b: AdmissibleType) -> Option<Self> {
        let prod = a.alpha as u64 * b.alpha as u64;
        if !prod.is_multiple_of(2) {
            return None;
        }
        let (t1, t2) = if a <= b { (a, b) } else { (b, a) };
        Some(CandidateTriple { group_order: prod / 2, t1, t2 })
    }

    /// Genus of C1, the curve on which G acts with type `t1`.
    pub fn g1(&self) -> u64 {
        self.t2.alpha as u64 + 1
    }

    /// Genus of C2, the curve on which G acts with type `t2`.
    pub fn g2(&self) -> u64 {
        self.t1.alpha as u64 + 1
    }
}

impl Ord for CandidateTriple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.group_order
            .cmp(&other.group_order)
            .then_with(|| self.t1.cmp(&other.t1))
            .then_with(|| self.t2.cmp(&other.t2))
    }
}

impl PartialOrd for CandidateTriple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Per-genus maximal automorphism group orders (`g max_aut_order` lines).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenusBounds {
    max_order: BTreeMap<u64, u64>,
}

const BUNDLED_GENUS_BOUNDS: &str = include_str!("../data/genus_bounds.txt");

impl GenusBounds {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_GENUS_BOUNDS).expect("bundled genus bounds are well formed")
    }

    pub fn load(path: &Path) -> Result<Self, BoundsError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self, BoundsError> {
        let mut max_order = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| BoundsError::Syntax { line: i + 1, msg: msg.to_string() };
            let mut it = line.split_whitespace();
            let g: u64 = it.next().and_then(|x| x.parse().ok()).ok_or_else(|| err("bad genus"))?;
            let m: u64 = it.next().and_then(|x| x.parse().ok()).ok_or_else(|| err("bad order"))?;
            if it.next().is_some() {
                return Err(err("trailing fields"));
            }
            if !(2..=48).contains(&g) {
                return Err(err("genus outside 2..=48"));
            }
            max_order.insert(g, m);
        }
        Ok(GenusBounds { max_order })
    }

    /// Largest admissible |Aut(C)| for a curve of genus `g`.
    pub fn max_aut_order(&self, g: u64) -> u64 {
        self.max_order.get(&g).copied().unwrap_or(84 * (g - 1))
    }

    pub fn len(&self) -> usize {
        self.max_order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.max_order.is_empty()
    }
}

/// Which pruning rules `candidate_triples_with` applies.
#[derive(Clone, Debug, Default)]
pub struct TripleFilter {
    /// Drop triples with `m > 84(g − 1)` for one of the induced genera.
    pub hurwitz: bool,
    /// Per-genus bounds, applied when at least one genus lies in 2..=48.
    pub genus_bounds: Option<GenusBounds>,
}

impl TripleFilter {
    pub fn none() -> Self {
        TripleFilter { hurwitz: false, genus_bounds: None }
    }

    pub fn hurwitz_only() -> Self {
        TripleFilter { hurwitz: true, genus_bounds: None }
    }

    pub fn with_bundled_bounds() -> Self {
        TripleFilter { hurwitz: true, genus_bounds: Some(GenusBounds::bundled()) }
    }

    pub fn accepts(&self, t: &CandidateTriple) -> bool {
        let m = t.group_order;
        if m > MAX_GROUP_ORDER {
            return false;
        }
        for g in [t.g1(), t.g2()] {
            if self.hurwitz && m > 84 * (g - 1) {
                return false;
            }
            if let Some(b) = &self.genus_bounds {
                if (2..=48).contains(&g) && m > b.max_aut_order(g) {
                    return false;
                }
            }
        }
        true
    }
}

/// All unordered pairs of admissible types with integral group order, with
/// the Hurwitz bound and the bundled genus bounds applied.
pub fn candidate_triples() -> Vec<CandidateTriple> {
    candidate_triples_with(&TripleFilter::with_bundled_bounds())
}

pub fn candidate_triples_with(filter: &TripleFilter) -> Vec<CandidateTriple> {
    let types = enumerate_admissible_types();
    let mut out = Vec::new();
    for (i, a) in types.iter().enumerate() {
        for b in &types[i..] {
            if let Some(t) = CandidateTriple::new(a.clone(), b.clone()) {
                if filter.accepts(&t) {
                    out.push(t);
                }
            }
        }
    }
    out.sort();
    out
}

/// Invariant factors of the abelianized polygonal group
/// `T(m_1, ..., m_r)^ab = Z^r / ⟨m_i e_i, e_1 + ... + e_r⟩`.
pub fn polygonal_abelianization(t: &TypeTuple) -> Vec<u64> {
    let r = t.len();
    let mut rows: Vec<Vec<i64>> = t
        .orders()
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let mut row = vec![0; r];
            row[i] = m as i64;
            row
        })
        .collect();
    rows.push(vec![1; r]);
    snf::invariant_factors(&rows, r)
}
