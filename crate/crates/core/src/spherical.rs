//! Spherical systems of generators: backtracking search, stabilizer sets and
//! disjointness.
//!
//! A spherical system of type `[m_1..m_r]` is a tuple `(g_1..g_r)` with
//! product one, generating the group, whose element orders are a permutation
//! of the type. Entries may be restricted to a set of allowed conjugacy
//! classes; this is how disjointness from a fixed partner system is imposed
//! during the search rather than afterwards.

use rayon::prelude::*;
use thiserror::Error;

use crate::groups::{ClassSet, ConjugacyClassTable, Elem, FiniteGroup, SubgroupLattice};
use crate::typesys::TypeTuple;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("more than {limit} systems (memory cap)")]
    MemoryCap { limit: usize },
    #[error("type of length {len} with {bits}-bit entries does not fit a 128-bit key")]
    TooWide { len: usize, bits: u32 },
}

/// A tuple of element ids claimed to be a spherical system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SphericalSystem(pub Vec<Elem>);

/// Why a tuple fails to be a spherical system of a given type.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SystemDefect {
    #[error("length {0} does not match the type")]
    Length(usize),
    #[error("entry orders do not match the type")]
    Orders,
    #[error("product is not the identity")]
    Product,
    #[error("entries generate a proper subgroup of order {0}")]
    Generation(usize),
}

impl SphericalSystem {
    pub fn entries(&self) -> &[Elem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks all three defining conditions from scratch.
    pub fn validate(&self, g: &FiniteGroup, t: &TypeTuple) -> Result<(), SystemDefect> {
        if self.0.len() != t.len() {
            return Err(SystemDefect::Length(self.0.len()));
        }
        let mut orders: Vec<u32> = self.0.iter().map(|&x| g.elem_order(x)).collect();
        orders.sort_unstable();
        if orders != t.orders() {
            return Err(SystemDefect::Orders);
        }
        if self.0.iter().fold(g.identity(), |p, &x| g.mul(p, x)) != g.identity() {
            return Err(SystemDefect::Product);
        }
        let h = g.subgroup_bits(&self.0).count_ones(..);
        if h != g.order() {
            return Err(SystemDefect::Generation(h));
        }
        Ok(())
    }
}

/// `Σ(A)`: all conjugates of all powers of the entries, held as a set of
/// conjugacy classes. The identity class is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerSet {
    pub classes: ClassSet,
}

impl StabilizerSet {
    /// Element ids of `Σ`, identity included, sorted.
    pub fn members(&self, cc: &ConjugacyClassTable) -> Vec<Elem> {
        let mut with_identity = self.classes.clone();
        with_identity.insert(0);
        cc.elements_of(&with_identity)
    }

    pub fn contains(&self, cc: &ConjugacyClassTable, x: Elem) -> bool {
        let c = cc.class_of(x);
        c == 0 || self.classes.contains(c)
    }
}

pub fn stabilizer_set(cc: &ConjugacyClassTable, entries: &[Elem]) -> StabilizerSet {
    let mut classes = cc.empty_set();
    for &x in entries {
        classes.union_with(cc.power_classes(cc.class_of(x)));
    }
    StabilizerSet { classes }
}

/// Brute-force `Σ(A)` straight from the definition, for tests.
pub fn stabilizer_set_naive(g: &FiniteGroup, entries: &[Elem]) -> Vec<Elem> {
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    for &x in entries {
        for j in 1..=g.elem_order(x) as i64 {
            let p = g.pow(x, j);
            for h in g.elements() {
                seen[g.conj(p, h) as usize] = true;
            }
        }
    }
    (0..g.order() as Elem).filter(|&x| seen[x as usize]).collect()
}

/// `Σ(A1) ∩ Σ(A2) = {1}`.
pub fn disjoint(cc: &ConjugacyClassTable, a1: &[Elem], a2: &[Elem]) -> bool {
    stabilizer_set(cc, a1).classes.is_disjoint(&stabilizer_set(cc, a2).classes)
}

/// Classes whose elements can appear in a system disjoint from one with
/// stabilizer set `sigma`: those none of whose nontrivial powers lie in it.
pub fn allowed_classes(cc: &ConjugacyClassTable, sigma: &StabilizerSet) -> ClassSet {
    let mut out = cc.empty_set();
    for c in 1..cc.len() {
        if cc.power_classes(c).is_disjoint(&sigma.classes) {
            out.insert(c);
        }
    }
    out
}

/// All nontrivial classes.
pub fn all_classes(cc: &ConjugacyClassTable) -> ClassSet {
    let mut out = cc.empty_set();
    out.insert_range(1..cc.len());
    out
}

/// Fixed-width packing of tuples into `u128`, entry 0 in the most
/// significant slot, so numeric order is lexicographic order on ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Packer {
    bits: u32,
    len: usize,
}

impl Packer {
    pub fn new(group_order: usize, len: usize) -> Result<Self, SearchError> {
        let bits = (usize::BITS - (group_order.max(2) - 1).leading_zeros()).max(1);
        if bits as usize * len > 128 {
            return Err(SearchError::TooWide { len, bits });
        }
        Ok(Packer { bits, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn total_bits(&self) -> u32 {
        self.bits * self.len as u32
    }

    #[inline]
    pub fn pack(&self, t: &[Elem]) -> u128 {
        debug_assert_eq!(t.len(), self.len);
        t.iter().fold(0u128, |acc, &x| (acc << self.bits) | x as u128)
    }

    #[inline]
    pub fn unpack_into(&self, key: u128, out: &mut [Elem]) {
        let mask = (1u128 << self.bits) - 1;
        for i in 0..self.len {
            let shift = self.bits * (self.len - 1 - i) as u32;
            out[i] = ((key >> shift) & mask) as Elem;
        }
    }

    pub fn unpack(&self, key: u128) -> Vec<Elem> {
        let mut v = vec![0; self.len];
        self.unpack_into(key, &mut v);
        v
    }
}

/// A sorted, deduplicated set of packed tuples with O(1) bucket lookup.
#[derive(Clone, Debug)]
pub struct SystemSet {
    packer: Packer,
    keys: Vec<u128>,
    shift: u32,
    buckets: Vec<u32>,
}

const BUCKET_BITS: u32 = 20;

impl SystemSet {
    /// `keys` must be sorted and free of duplicates.
    pub fn from_sorted(packer: Packer, keys: Vec<u128>) -> Self {
        debug_assert!(keys.windows(2).all(|w| w[0] < w[1]));
        let size_bits = usize::BITS - keys.len().leading_zeros();
        let b = packer.total_bits().min(BUCKET_BITS).min(size_bits + 1);
        let shift = packer.total_bits() - b;
        let mut buckets = vec![0u32; (1usize << b) + 1];
        let mut i = 0usize;
        for (bucket, slot) in buckets.iter_mut().enumerate() {
            while i < keys.len() && ((keys[i] >> shift) as usize) < bucket {
                i += 1;
            }
            *slot = i as u32;
        }
        SystemSet { packer, keys, shift, buckets }
    }

    pub fn from_unsorted(packer: Packer, mut keys: Vec<u128>) -> Self {
        keys.sort_unstable();
        keys.dedup();
        Self::from_sorted(packer, keys)
    }

    pub fn packer(&self) -> Packer {
        self.packer
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[u128] {
        &self.keys
    }

    pub fn get(&self, i: usize) -> Vec<Elem> {
        self.packer.unpack(self.keys[i])
    }

    #[inline]
    pub fn index_of_key(&self, key: u128) -> Option<usize> {
        let b = (key >> self.shift) as usize;
        if b + 1 >= self.buckets.len() {
            return None;
        }
        let (lo, hi) = (self.buckets[b] as usize, self.buckets[b + 1] as usize);
        self.keys[lo..hi].binary_search(&key).ok().map(|i| lo + i)
    }

    pub fn index_of(&self, t: &[Elem]) -> Option<usize> {
        self.index_of_key(self.packer.pack(t))
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        self.keys.iter().map(|&k| self.packer.unpack(k))
    }

    /// Approximate heap footprint in bytes.
    pub fn heap_bytes(&self) -> usize {
        self.keys.len() * 16 + self.buckets.len() * 4
    }
}

/// Search parameters for spherical systems of one type.
#[derive(Clone)]
pub struct SystemSearch<'g> {
    group: &'g FiniteGroup,
    ty: TypeTuple,
    /// Multiplicity of each distinct order of the type.
    counts: Vec<u8>,
    /// `slot[x]` indexes `orders` for allowed `x`, `NONE` otherwise.
    slot: Vec<u8>,
    candidates: Vec<Elem>,
    first: Option<Vec<Elem>>,
}

const NONE: u8 = u8::MAX;

impl<'g> SystemSearch<'g> {
    pub fn new(group: &'g FiniteGroup, cc: &ConjugacyClassTable, ty: &TypeTuple) -> Self {
        Self::restricted(group, cc, ty, &all_classes(cc))
    }

    /// Only elements of the `allowed` classes may appear.
    pub fn restricted(group: &'g FiniteGroup, cc: &ConjugacyClassTable, ty: &TypeTuple, allowed: &ClassSet) -> Self {
        let mult = ty.multiplicities();
        let orders: Vec<u32> = mult.iter().map(|&(o, _)| o).collect();
        let counts: Vec<u8> = mult.iter().map(|&(_, k)| k as u8).collect();
        let mut slot = vec![NONE; group.order()];
        let mut candidates = Vec::new();
        for x in group.elements() {
            if !allowed.contains(cc.class_of(x)) {
                continue;
            }
            if let Some(s) = orders.iter().position(|&o| o == group.elem_order(x)) {
                slot[x as usize] = s as u8;
                candidates.push(x);
            }
        }
        SystemSearch { group, ty: ty.clone(), counts, slot, candidates, first: None }
    }

    /// Additionally requires the first entry to lie in `classes`.
    pub fn first_entry_in(mut self, cc: &ConjugacyClassTable, classes: &ClassSet) -> Self {
        self.first = Some(self.candidates.iter().copied().filter(|&x| classes.contains(cc.class_of(x))).collect());
        self
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn ty(&self) -> &TypeTuple {
        &self.ty
    }

    /// Elements allowed in position 0.
    fn first_choices(&self) -> Vec<Elem> {
        self.first.clone().unwrap_or_else(|| self.candidates.clone())
    }

    /// Sequential stream in lexicographic order.
    pub fn iter(&self) -> SystemIter<'_, 'g> {
        self.iter_with(self.first_choices(), SubgroupLattice::new(self.group))
    }

    fn iter_with(&self, first: Vec<Elem>, lattice: SubgroupLattice<'g>) -> SystemIter<'_, 'g> {
        let r = self.ty.len();
        SystemIter {
            search: self,
            first,
            lattice,
            entries: vec![0; r],
            prod: vec![0; r],
            node: vec![SubgroupLattice::TRIVIAL; r],
            cursor: vec![0; r],
            remaining: self.counts.clone(),
            depth: 0,
            done: false,
        }
    }

    /// `|B(G, T)|` (restricted), counted in parallel without storing tuples.
    pub fn count(&self) -> u64 {
        self.first_choices()
            .par_iter()
            .map_init(
                || Some(SubgroupLattice::new(self.group)),
                |lat, &x| {
                    let mut it = self.iter_with(vec![x], lat.take().unwrap());
                    let n = it.by_ref().count() as u64;
                    *lat = Some(it.into_lattice());
                    n
                },
            )
            .sum()
    }

    /// Materializes the stream as a [`SystemSet`], failing beyond `cap` tuples.
    pub fn collect(&self, cap: usize) -> Result<SystemSet, SearchError> {
        let packer = Packer::new(self.group.order(), self.ty.len())?;
        let total = std::sync::atomic::AtomicUsize::new(0);
        let parts: Vec<Result<Vec<u128>, SearchError>> = self
            .first_choices()
            .par_iter()
            .map_init(
                || Some(SubgroupLattice::new(self.group)),
                |lat, &x| {
                    let mut it = self.iter_with(vec![x], lat.take().unwrap());
                    let mut keys = Vec::new();
                    let mut result = Ok(());
                    for t in it.by_ref() {
                        keys.push(packer.pack(&t));
                        if keys.len() % 4096 == 0
                            && total.fetch_add(4096, std::sync::atomic::Ordering::Relaxed) + 4096 > cap
                        {
                            result = Err(SearchError::MemoryCap { limit: cap });
                            break;
                        }
                    }
                    *lat = Some(it.into_lattice());
                    result.map(|_| keys)
                },
            )
            .collect();
        let mut keys = Vec::new();
        for p in parts {
            keys.extend(p?);
        }
        if keys.len() > cap {
            return Err(SearchError::MemoryCap { limit: cap });
        }
        // first entries ascend and each part is in lexicographic order
        Ok(SystemSet::from_sorted(packer, keys))
    }
}

/// Backtracking iterator over systems; the last entry is forced.
pub struct SystemIter<'s, 'g> {
    search: &'s SystemSearch<'g>,
    first: Vec<Elem>,
    lattice: SubgroupLattice<'g>,
    entries: Vec<Elem>,
    /// `prod[d]` and `node[d]` describe the prefix of length `d`.
    prod: Vec<Elem>,
    node: Vec<u32>,
    cursor: Vec<usize>,
    remaining: Vec<u8>,
    depth: usize,
    done: bool,
}

impl<'g> SystemIter<'_, 'g> {
    pub fn into_lattice(self) -> SubgroupLattice<'g> {
        self.lattice
    }

    /// Next candidate for the current depth, advancing its cursor.
    fn next_candidate(&mut self) -> Option<Elem> {
        let d = self.depth;
        let list: &[Elem] = if d == 0 { &self.first } else { &self.search.candidates };
        while self.cursor[d] < list.len() {
            let x = list[self.cursor[d]];
            self.cursor[d] += 1;
            if self.remaining[self.search.slot[x as usize] as usize] > 0 {
                return Some(x);
            }
        }
        None
    }
}

impl Iterator for SystemIter<'_, '_> {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        let g = self.search.group;
        let last = self.entries.len() - 1;
        while !self.done {
            let d = self.depth;
            let Some(x) = self.next_candidate() else {
                if d == 0 {
                    self.done = true;
                    return None;
                }
                self.depth -= 1;
                let prev = self.entries[self.depth];
                self.remaining[self.search.slot[prev as usize] as usize] += 1;
                continue;
            };
            let s = self.search.slot[x as usize] as usize;
            self.entries[d] = x;
            let p = g.mul(self.prod[d], x);
            let h = self.lattice.join(self.node[d], x);
            if d + 1 < last {
                self.remaining[s] -= 1;
                self.prod[d + 1] = p;
                self.node[d + 1] = h;
                self.depth += 1;
                self.cursor[d + 1] = 0;
                continue;
            }
            // d + 1 == last: the final entry is forced
            let y = g.inv(p);
            let sy = self.search.slot[y as usize];
            if sy == NONE || !self.lattice.is_full(h) {
                continue;
            }
            self.remaining[s] -= 1;
            let ok = self.remaining[sy as usize] == 1;
            self.remaining[s] += 1;
            if ok {
                self.entries[last] = y;
                return Some(self.entries.clone());
            }
        }
        None
    }
}

/// All spherical systems of type `t`, in lexicographic order.
pub fn enumerate_systems(g: &FiniteGroup, cc: &ConjugacyClassTable, t: &TypeTuple) -> Vec<SphericalSystem> {
    SystemSearch::new(g, cc, t).iter().map(SphericalSystem).collect()
}

pub fn count_systems(g: &FiniteGroup, cc: &ConjugacyClassTable, t: &TypeTuple) -> u64 {
    SystemSearch::new(g, cc, t).count()
}

/// Systems of a pure-involution type avoiding one involution class.
pub fn enumerate_restricted<'g>(
    g: &'g FiniteGroup,
    cc: &ConjugacyClassTable,
    t: &TypeTuple,
    excluded_class: usize,
) -> SystemSearch<'g> {
    let mut allowed = all_classes(cc);
    allowed.set(excluded_class, false);
    SystemSearch::restricted(g, cc, t, &allowed)
}

/// Exhaustive product over all candidate tuples, for tests on tiny cases.
pub fn enumerate_systems_naive(g: &FiniteGroup, t: &TypeTuple) -> Vec<Vec<Elem>> {
    let r = t.len();
    let n = g.order() as u64;
    let mut out = Vec::new();
    let total = n.pow(r as u32);
    let mut tuple = vec![0 as Elem; r];
    for code in 0..total {
        let mut c = code;
        for slot in tuple.iter_mut().rev() {
            *slot = (c % n) as Elem;
            c /= n;
        }
        if SphericalSystem(tuple.clone()).validate(g, t).is_ok() {
            out.push(tuple.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::groups::conjugacy_classes;

    fn ty(s: &str) -> TypeTuple {
        s.parse().unwrap()
    }

    fn group(key: &str) -> FiniteGroup {
        (*Catalog::bundled().realize(key).unwrap().group).clone()
    }

    #[test]
    fn packer_orders_lexicographically() {
        let p = Packer::new(48, 4).unwrap();
        let a = p.pack(&[1, 47, 0, 3]);
        let b = p.pack(&[2, 0, 0, 0]);
        assert!(a < b);
        assert_eq!(p.unpack(a), vec![1, 47, 0, 3]);
        assert!(Packer::new(1 << 20, 8).is_err());
    }

    #[test]
    fn system_set_lookup() {
        let p = Packer::new(10, 3).unwrap();
        let keys: Vec<u128> = [[0, 1, 2], [3, 3, 3], [9, 0, 1]].iter().map(|t| p.pack(t)).collect();
        let s = SystemSet::from_unsorted(p, keys);
        assert_eq!(s.index_of(&[3, 3, 3]), Some(1));
        assert_eq!(s.index_of(&[3, 3, 4]), None);
        assert_eq!(s.index_of(&[9, 0, 1]), Some(2));
    }

    #[test]
    fn matches_naive_on_small_groups() {
        for key in ["C2^3", "S3", "D4", "C3^2"] {
            let g = group(key);
            let cc = conjugacy_classes(&g);
            for t in ["[2,2,2,2]", "[2^5]", "[3,3,3]", "[2,2,3,3]", "[2,4,4]", "[2,2,2,3]"] {
                let t = ty(t);
                let fast: Vec<Vec<Elem>> = SystemSearch::new(&g, &cc, &t).iter().collect();
                assert_eq!(fast, enumerate_systems_naive(&g, &t), "{key} {t}");
                assert_eq!(SystemSearch::new(&g, &cc, &t).count(), fast.len() as u64);
            }
        }
    }

    #[test]
    fn collect_is_sorted_and_complete() {
        let g = group("S4");
        let cc = conjugacy_classes(&g);
        let t = ty("[2,2,3,3]");
        let s = SystemSearch::new(&g, &cc, &t);
        let set = s.collect(usize::MAX).unwrap();
        let seq: Vec<Vec<Elem>> = s.iter().collect();
        assert_eq!(set.iter().collect::<Vec<_>>(), seq);
        assert!(matches!(s.collect(10), Err(SearchError::MemoryCap { .. })));
    }

    #[test]
    fn stabilizer_set_matches_definition() {
        let g = group("A5");
        let cc = conjugacy_classes(&g);
        for sys in SystemSearch::new(&g, &cc, &ty("[2,5,5]")).iter().take(50) {
            assert_eq!(stabilizer_set(&cc, &sys).members(&cc), stabilizer_set_naive(&g, &sys));
        }
    }

    #[test]
    fn a5_has_no_237_systems() {
        let g = group("A5");
        let cc = conjugacy_classes(&g);
        assert_eq!(count_systems(&g, &cc, &ty("[2,3,7]")), 0);
    }
}
