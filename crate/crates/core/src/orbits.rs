//! Hurwitz and automorphism actions, orbit decomposition, and the count of
//! orbits of the combined action on disjoint pairs.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{generating_subset, Automorphism, ClassSet, ConjugacyClassTable, Elem, FiniteGroup};
use crate::spherical::{allowed_classes, stabilizer_set, SearchError, SystemSearch, SystemSet};
use crate::typesys::TypeTuple;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrbitError {
    #[error("braid index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("set is not closed under the action")]
    NotClosed,
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("pair closure exceeded {0} pairs")]
    PairLimit(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

/// `σ_i` or its inverse, `i` counted from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BraidMove {
    pub index: usize,
    pub direction: Direction,
}

impl BraidMove {
    pub fn forward(index: usize) -> Self {
        BraidMove { index, direction: Direction::Forward }
    }

    pub fn inverse(index: usize) -> Self {
        BraidMove { index, direction: Direction::Inverse }
    }
}

/// `(.., a, b, ..) ↦ (.., a b a^-1, a, ..)` at 0-based position `i`.
#[inline]
pub fn sigma_in_place(g: &FiniteGroup, t: &mut [Elem], i: usize) {
    let (a, b) = (t[i], t[i + 1]);
    t[i] = g.mul(g.mul(a, b), g.inv(a));
    t[i + 1] = a;
}

/// Inverse of [`sigma_in_place`]: `(.., a, b, ..) ↦ (.., b, b^-1 a b, ..)`.
#[inline]
pub fn sigma_inv_in_place(g: &FiniteGroup, t: &mut [Elem], i: usize) {
    let (a, b) = (t[i], t[i + 1]);
    t[i] = b;
    t[i + 1] = g.conj(a, g.inv(b));
}

pub fn hurwitz_move(g: &FiniteGroup, a: &[Elem], m: BraidMove) -> Result<Vec<Elem>, OrbitError> {
    if m.index == 0 || m.index >= a.len() {
        return Err(OrbitError::IndexOutOfRange { index: m.index, len: a.len() });
    }
    let mut t = a.to_vec();
    match m.direction {
        Direction::Forward => sigma_in_place(g, &mut t, m.index - 1),
        Direction::Inverse => sigma_inv_in_place(g, &mut t, m.index - 1),
    }
    Ok(t)
}

pub fn apply_automorphism(phi: &Automorphism, a: &[Elem]) -> Vec<Elem> {
    a.iter().map(|&x| phi.apply(x)).collect()
}

/// Union-find whose roots are always the minimum of their component.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        true
    }

    /// Component index per element, components numbered by their minimum.
    pub fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let mut class_of = vec![0u32; n];
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        for x in 0..n as u32 {
            let r = self.find(x);
            if r == x {
                class_of[x as usize] = representatives.len() as u32;
                representatives.push(x as usize);
                sizes.push(0);
            } else {
                class_of[x as usize] = class_of[r as usize];
            }
            sizes[class_of[x as usize] as usize] += 1;
        }
        Partition { class_of, representatives, sizes }
    }
}

/// A partition of `0..n` with each part represented by its minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub class_of: Vec<u32>,
    pub representatives: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Orbits on a [`SystemSet`]; representatives are orbit minima.
pub type OrbitSet = Partition;

#[derive(Clone, Copy, Debug)]
pub enum Action<'a> {
    BraidOnly,
    BraidAndAut(&'a [Automorphism]),
}

const CHUNK: usize = 1 << 18;

/// Orbits of the Hurwitz action, optionally joined with automorphisms.
pub fn orbit_decompose(g: &FiniteGroup, set: &SystemSet, action: Action) -> Result<OrbitSet, OrbitError> {
    let r = set.packer().len();
    let auts: &[Automorphism] = match action {
        Action::BraidOnly => &[],
        Action::BraidAndAut(a) => a,
    };
    let degree = r - 1 + auts.len();
    let mut uf = UnionFind::new(set.len());
    let packer = set.packer();
    for start in (0..set.len()).step_by(CHUNK) {
        let end = (start + CHUNK).min(set.len());
        let edges: Vec<u32> = (start..end)
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut t = vec![0; r];
                packer.unpack_into(set.keys()[i], &mut t);
                let mut out = Vec::with_capacity(degree);
                for k in 0..r - 1 {
                    let mut u = t.clone();
                    sigma_in_place(g, &mut u, k);
                    out.push(set.index_of(&u).map_or(u32::MAX, |j| j as u32));
                }
                for phi in auts {
                    let u: Vec<Elem> = t.iter().map(|&x| phi.apply(x)).collect();
                    out.push(set.index_of(&u).map_or(u32::MAX, |j| j as u32));
                }
                out
            })
            .collect();
        for (off, chunk) in edges.chunks(degree.max(1)).enumerate() {
            for &j in chunk {
                if j == u32::MAX {
                    return Err(OrbitError::NotClosed);
                }
                uf.union((start + off) as u32, j);
            }
        }
    }
    Ok(uf.into_partition())
}

/// Joins orbits mapped onto each other by the given automorphisms.
///
/// With `strict`, every image must lie in `set`; otherwise images outside
/// are ignored, which computes the connected components of the partial
/// action on the subset.
pub fn merge_orbits(
    set: &SystemSet,
    orbits: &OrbitSet,
    auts: &[Automorphism],
    strict: bool,
) -> Result<Partition, OrbitError> {
    let images: Vec<Vec<u32>> = orbits
        .representatives
        .par_iter()
        .map(|&i| {
            let t = set.get(i);
            auts.iter()
                .map(|phi| set.index_of(&apply_automorphism(phi, &t)).map_or(u32::MAX, |j| orbits.class_of[j]))
                .collect()
        })
        .collect();
    let mut uf = UnionFind::new(orbits.len());
    for (k, row) in images.iter().enumerate() {
        for &o in row {
            if o == u32::MAX {
                if strict {
                    return Err(OrbitError::NotClosed);
                }
                continue;
            }
            uf.union(k as u32, o);
        }
    }
    Ok(uf.into_partition())
}

/// Which type of a pair was enumerated in full.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, Debug)]
pub struct CountConfig {
    /// Largest number of tuples materialized for one set.
    pub max_tuples: usize,
    /// Apply the factor-exchange identification when the types agree.
    pub exchange: bool,
    /// Also evaluate the two-stage bounds with the roles of the types
    /// swapped when they do not collapse and that side is affordable.
    pub retry_swapped: bool,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig { max_tuples: 400_000_000, exchange: true, retry_swapped: true }
    }
}

/// Result of counting orbits of the combined action on disjoint pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCount {
    /// Orbits of braids × braids × Aut(G).
    pub orbits: u64,
    /// Orbits after also identifying `(A, B)` with `(B, A)` when `t1 = t2`.
    pub n: u64,
    pub lower: u64,
    pub upper: u64,
    /// Bounds from the other orientation, when computed.
    pub swapped_bounds: Option<(u64, u64)>,
    pub enumerated: Side,
    /// `|B(G, T)|` for the enumerated type.
    pub systems: u64,
    pub hurwitz_orbits: u64,
    /// Representatives of the Aut-classes of Hurwitz orbits on that side.
    pub first_stage_reps: u64,
    pub exchange_checked: bool,
    /// One pair `(A1, A2)` per orbit, in `(t1, t2)` orientation.
    pub representatives: Vec<(Vec<Elem>, Vec<Elem>)>,
}

impl ComponentCount {
    pub fn bounds_collapse(&self) -> bool {
        self.lower == self.upper || self.swapped_bounds.is_some_and(|(l, u)| l == u)
    }
}

/// Group data shared by all counts over one group.
pub struct OrbitContext<'g> {
    pub group: &'g FiniteGroup,
    pub classes: &'g ConjugacyClassTable,
    pub automorphisms: &'g [Automorphism],
}

/// Rough size of the backtracking tree for `t`, for picking a side.
pub fn search_cost(ctx: &OrbitContext, t: &TypeTuple) -> f64 {
    let hist = ctx.group.order_histogram();
    let mut c: Vec<f64> = t.orders().iter().map(|m| *hist.get(m).unwrap_or(&0) as f64).collect();
    c.sort_by(|a, b| a.partial_cmp(b).unwrap());
    c.pop();
    c.iter().product()
}

struct Restricted {
    set: SystemSet,
    hurwitz: OrbitSet,
    partial_aut: Partition,
}

/// Per-representative data of the enumerated side.
struct FirstStage {
    set: SystemSet,
    hurwitz: OrbitSet,
    /// Aut-class of each Hurwitz orbit.
    aut_class: Partition,
    reps: Vec<Rep>,
    restricted: Vec<Restricted>,
}

struct Rep {
    tuple: Vec<Elem>,
    restricted: usize,
    /// K_A-class of each Hurwitz orbit of the restricted set.
    components: Partition,
}

impl FirstStage {
    fn hurwitz_orbit_of(&self, t: &[Elem]) -> Option<u32> {
        self.set.index_of(t).map(|i| self.hurwitz.class_of[i])
    }
}

fn first_stage(ctx: &OrbitContext, p: &TypeTuple, q: &TypeTuple, cfg: &CountConfig) -> Result<FirstStage, OrbitError> {
    let g = ctx.group;
    let set = SystemSearch::new(g, ctx.classes, p).collect(cfg.max_tuples)?;
    let hurwitz = orbit_decompose(g, &set, Action::BraidOnly)?;
    let aut_class = merge_orbits(&set, &hurwitz, ctx.automorphisms, true)?;
    let mut restricted: Vec<Restricted> = Vec::new();
    let mut by_allowed: HashMap<ClassSet, usize> = HashMap::new();
    let mut reps = Vec::new();
    for &orbit in &aut_class.representatives {
        let a = set.get(hurwitz.representatives[orbit]);
        let allowed = allowed_classes(ctx.classes, &stabilizer_set(ctx.classes, &a));
        let slot = match by_allowed.get(&allowed) {
            Some(&s) => s,
            None => {
                let rset = SystemSearch::restricted(g, ctx.classes, q, &allowed).collect(cfg.max_tuples)?;
                let rh = orbit_decompose(g, &rset, Action::BraidOnly)?;
                let partial_aut = merge_orbits(&rset, &rh, ctx.automorphisms, false)?;
                restricted.push(Restricted { set: rset, hurwitz: rh, partial_aut });
                by_allowed.insert(allowed, restricted.len() - 1);
                restricted.len() - 1
            }
        };
        let own = hurwitz.class_of[set.index_of(&a).expect("representative is in the set")];
        let stab: Vec<Automorphism> = ctx
            .automorphisms
            .iter()
            .filter(|phi| set.index_of(&apply_automorphism(phi, &a)).map(|i| hurwitz.class_of[i]) == Some(own))
            .cloned()
            .collect();
        let r = &restricted[slot];
        let components = merge_orbits(&r.set, &r.hurwitz, &stab, true)?;
        reps.push(Rep { tuple: a, restricted: slot, components });
    }
    Ok(FirstStage { set, hurwitz, aut_class, reps, restricted })
}

impl FirstStage {
    fn orbit_count(&self) -> u64 {
        self.reps.iter().map(|r| r.components.len() as u64).sum()
    }

    fn bounds(&self) -> (u64, u64) {
        let mut lower = 0;
        let mut upper = 0;
        for r in &self.reps {
            let res = &self.restricted[r.restricted];
            lower += res.partial_aut.len() as u64;
            upper += res.hurwitz.len() as u64;
        }
        (lower, upper)
    }

    /// `(rep index, component)` identifying the orbit of `(a, b)`, where
    /// `a` is of the enumerated type.
    fn pair_invariant(&self, ctx: &OrbitContext, a: &[Elem], b: &[Elem]) -> Option<(usize, u32)> {
        let cls = self.aut_class.class_of[self.hurwitz_orbit_of(a)? as usize] as usize;
        let rep = &self.reps[cls];
        let target = self.hurwitz_orbit_of(&rep.tuple)?;
        let phi =
            ctx.automorphisms.iter().find(|phi| self.hurwitz_orbit_of(&apply_automorphism(phi, a)) == Some(target))?;
        let res = &self.restricted[rep.restricted];
        let j = res.set.index_of(&apply_automorphism(phi, b))?;
        Some((cls, rep.components.class_of[res.hurwitz.class_of[j] as usize]))
    }

    fn representatives(&self) -> Vec<(Vec<Elem>, Vec<Elem>)> {
        let mut out = Vec::new();
        for rep in &self.reps {
            let res = &self.restricted[rep.restricted];
            for &orbit in &rep.components.representatives {
                out.push((rep.tuple.clone(), res.set.get(res.hurwitz.representatives[orbit])));
            }
        }
        out
    }
}

/// The number of orbits of braids × braids × Aut(G) on disjoint pairs in
/// `B(G, t1) × B(G, t2)`.
///
/// The cheaper type `P` is enumerated in full and split into
/// Aut-classes of Hurwitz orbits with representatives `A`. For each `A`,
/// the partners are the systems of the other type built only from classes
/// compatible with `Σ(A)`; their Hurwitz orbits are then merged by the
/// automorphisms that keep `A` in its Hurwitz orbit. The sum over `A` is
/// exact. The two-stage bounds are reported alongside.
pub fn count_component_orbits(
    ctx: &OrbitContext,
    t1: &TypeTuple,
    t2: &TypeTuple,
    cfg: &CountConfig,
) -> Result<ComponentCount, OrbitError> {
    let swap = search_cost(ctx, t2) < search_cost(ctx, t1);
    let (p, q, side) = if swap { (t2, t1, Side::Second) } else { (t1, t2, Side::First) };
    let stage = first_stage(ctx, p, q, cfg)?;
    let orbits = stage.orbit_count();
    let (lower, upper) = stage.bounds();
    let mut representatives = stage.representatives();
    if swap {
        for (a, b) in representatives.iter_mut() {
            std::mem::swap(a, b);
        }
    }
    let mut swapped_bounds = None;
    if cfg.retry_swapped && lower != upper && t1 != t2 {
        let other = first_stage(ctx, q, p, cfg);
        if let Ok(o) = other {
            debug_assert_eq!(o.orbit_count(), orbits);
            swapped_bounds = Some(o.bounds());
        }
    }
    let mut n = orbits;
    let exchange_checked = cfg.exchange && t1 == t2 && orbits >= 2;
    if exchange_checked {
        n = exchange_classes(ctx, &stage, &representatives);
    }
    Ok(ComponentCount {
        orbits,
        n,
        lower,
        upper,
        swapped_bounds,
        enumerated: side,
        systems: stage.set.len() as u64,
        hurwitz_orbits: stage.hurwitz.len() as u64,
        first_stage_reps: stage.reps.len() as u64,
        exchange_checked,
        representatives,
    })
}

/// Orbits of `⟨swap⟩` on the orbit representatives.
fn exchange_classes(ctx: &OrbitContext, stage: &FirstStage, reps: &[(Vec<Elem>, Vec<Elem>)]) -> u64 {
    let index: HashMap<(usize, u32), usize> = reps
        .iter()
        .enumerate()
        .map(|(k, (a, b))| (stage.pair_invariant(ctx, a, b).expect("representative is classified"), k))
        .collect();
    let mut uf = UnionFind::new(reps.len());
    for (k, (a, b)) in reps.iter().enumerate() {
        let inv = stage.pair_invariant(ctx, b, a).expect("swapped pair is classified");
        uf.union(k as u32, index[&inv] as u32);
    }
    uf.into_partition().len() as u64
}

/// Classifies pairs for a fixed type when `t1 = t2`.
pub struct SymmetricPairIndex<'c, 'g> {
    ctx: &'c OrbitContext<'g>,
    stage: FirstStage,
}

impl<'c, 'g> SymmetricPairIndex<'c, 'g> {
    pub fn new(ctx: &'c OrbitContext<'g>, t: &TypeTuple, cfg: &CountConfig) -> Result<Self, OrbitError> {
        Ok(SymmetricPairIndex { ctx, stage: first_stage(ctx, t, t, cfg)? })
    }

    pub fn same_orbit(&self, p1: (&[Elem], &[Elem]), p2: (&[Elem], &[Elem])) -> bool {
        let i1 = self.stage.pair_invariant(self.ctx, p1.0, p1.1);
        i1.is_some() && i1 == self.stage.pair_invariant(self.ctx, p2.0, p2.1)
    }

    /// Whether `p2` lies in the orbit of `p1` with its factors exchanged.
    pub fn exchange_equivalent(&self, p1: (&[Elem], &[Elem]), p2: (&[Elem], &[Elem])) -> bool {
        self.same_orbit((p1.1, p1.0), p2)
    }

    pub fn representatives(&self) -> Vec<(Vec<Elem>, Vec<Elem>)> {
        self.stage.representatives()
    }
}

/// Direct closure of one pair under braids on both factors and
/// simultaneous automorphisms, stopping early on `target`.
///
/// Returns `Ok(true)` if `target` is reached.
pub fn pair_orbit_contains(
    g: &FiniteGroup,
    automorphisms: &[Automorphism],
    start: (&[Elem], &[Elem]),
    target: (&[Elem], &[Elem]),
    limit: usize,
) -> Result<bool, OrbitError> {
    let key = |a: &[Elem], b: &[Elem]| -> Vec<Elem> { a.iter().chain(b).copied().collect() };
    let r = start.0.len();
    let goal = key(target.0, target.1);
    let first = key(start.0, start.1);
    if first == goal {
        return Ok(true);
    }
    let mut seen: HashSet<Vec<Elem>> = HashSet::from([first.clone()]);
    let mut queue = VecDeque::from([first]);
    while let Some(p) = queue.pop_front() {
        let mut next = Vec::new();
        for i in 0..p.len() - 1 {
            if i + 1 == r {
                continue;
            }
            let mut u = p.clone();
            sigma_in_place(g, &mut u, i);
            next.push(u);
        }
        for phi in automorphisms {
            next.push(apply_automorphism(phi, &p));
        }
        for u in next {
            if u == goal {
                return Ok(true);
            }
            if seen.insert(u.clone()) {
                if seen.len() > limit {
                    return Err(OrbitError::PairLimit(limit));
                }
                queue.push_back(u);
            }
        }
    }
    Ok(false)
}

/// Orbit count on all disjoint pairs by brute-force closure, for tests.
///
/// With `exchange`, `(A, B)` is also joined with `(B, A)`.
pub fn count_pair_orbits_bruteforce(
    g: &FiniteGroup,
    cc: &ConjugacyClassTable,
    automorphisms: &[Automorphism],
    t1: &TypeTuple,
    t2: &TypeTuple,
    exchange: bool,
    limit: usize,
) -> Result<u64, OrbitError> {
    let b1: Vec<Vec<Elem>> = SystemSearch::new(g, cc, t1).iter().collect();
    let b2: Vec<Vec<Elem>> = SystemSearch::new(g, cc, t2).iter().collect();
    let idx1: HashMap<&[Elem], usize> = b1.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let idx2: HashMap<&[Elem], usize> = b2.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let s1: Vec<ClassSet> = b1.iter().map(|t| stabilizer_set(cc, t).classes).collect();
    let s2: Vec<ClassSet> = b2.iter().map(|t| stabilizer_set(cc, t).classes).collect();
    let pairs: Vec<(usize, usize)> = (0..b1.len())
        .flat_map(|i| (0..b2.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| s1[i].is_disjoint(&s2[j]))
        .collect();
    if pairs.len() > limit {
        return Err(OrbitError::PairLimit(limit));
    }
    let automorphisms = generating_subset(automorphisms);
    let pair_idx: HashMap<(usize, usize), u32> = pairs.iter().enumerate().map(|(k, &p)| (p, k as u32)).collect();
    let mut uf = UnionFind::new(pairs.len());
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let mut images = Vec::new();
        for s in 0..t1.len() - 1 {
            let mut u = b1[i].clone();
            sigma_in_place(g, &mut u, s);
            images.push((idx1[u.as_slice()], j));
        }
        for s in 0..t2.len() - 1 {
            let mut u = b2[j].clone();
            sigma_in_place(g, &mut u, s);
            images.push((i, idx2[u.as_slice()]));
        }
        for phi in &automorphisms {
            images.push((
                idx1[apply_automorphism(phi, &b1[i]).as_slice()],
                idx2[apply_automorphism(phi, &b2[j]).as_slice()],
            ));
        }
        if exchange && t1 == t2 {
            images.push((j, i));
        }
        for im in images {
            uf.union(k as u32, *pair_idx.get(&im).ok_or(OrbitError::NotClosed)?);
        }
    }
    Ok(uf.into_partition().len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::groups::{automorphism_group, conjugacy_classes};
    use crate::spherical::disjoint;

    fn setup(key: &str) -> (FiniteGroup, ConjugacyClassTable, Vec<Automorphism>) {
        let g = (*Catalog::bundled().realize(key).unwrap().group).clone();
        let cc = conjugacy_classes(&g);
        let auts = automorphism_group(&g).unwrap();
        (g, cc, auts)
    }

    fn ty(s: &str) -> TypeTuple {
        s.parse().unwrap()
    }

    #[test]
    fn move_and_inverse() {
        let (g, cc, _) = setup("A5");
        for a in SystemSearch::new(&g, &cc, &ty("[5,5,5]")).iter().take(200) {
            for i in 1..3 {
                let b = hurwitz_move(&g, &a, BraidMove::forward(i)).unwrap();
                assert_eq!(hurwitz_move(&g, &b, BraidMove::inverse(i)).unwrap(), a);
            }
        }
        assert!(hurwitz_move(&g, &[0, 0, 0], BraidMove::forward(3)).is_err());
    }

    #[test]
    fn union_find_roots_are_minima() {
        let mut uf = UnionFind::new(6);
        uf.union(4, 2);
        uf.union(5, 4);
        uf.union(1, 3);
        let p = uf.into_partition();
        assert_eq!(p.representatives, vec![0, 1, 2]);
        assert_eq!(p.class_of, vec![0, 1, 2, 1, 2, 2]);
        assert_eq!(p.sizes, vec![1, 2, 3]);
    }

    #[test]
    fn stabilizer_method_matches_bruteforce() {
        let cases = [
            ("A5", "[5,5,5]", "[2,2,3,3]"),
            ("G16_3", "[2^2,4^2]", "[2^3,4^2]"),
            ("C2^3", "[2^6]", "[2^6]"),
            ("C3^2", "[3^4]", "[3^4]"),
        ];
        for (key, a, b) in cases {
            let (g, cc, auts) = setup(key);
            let ctx = OrbitContext { group: &g, classes: &cc, automorphisms: &auts };
            let (t1, t2) = (ty(a), ty(b));
            let cfg = CountConfig { retry_swapped: true, ..CountConfig::default() };
            let c = count_component_orbits(&ctx, &t1, &t2, &cfg).unwrap();
            let brute = count_pair_orbits_bruteforce(&g, &cc, &auts, &t1, &t2, false, 10_000_000).unwrap();
            assert_eq!(c.orbits, brute, "{key} {a} {b}");
            let ex = count_pair_orbits_bruteforce(&g, &cc, &auts, &t1, &t2, true, 10_000_000).unwrap();
            assert_eq!(c.n, ex, "{key} {a} {b} with exchange");
            assert!(c.lower <= c.orbits && c.orbits <= c.upper);
            for (x, y) in &c.representatives {
                assert!(disjoint(&cc, x, y));
            }
        }
    }
}
