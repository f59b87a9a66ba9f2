//! Finite groups over dense element ids.
//!
//! Every construction (permutations, pc presentations, matrices, products)
//! ends in a [`FiniteGroup`]: ids `0..order`, identity `0`, and a
//! multiplication table for orders up to [`TABLE_LIMIT`]. Larger permutation
//! groups fall back to composing the underlying permutations.

mod autom;
mod classes;
mod coset;
mod lattice;
mod matrix;
mod pc;
mod perm;
mod product;

pub use autom::{automorphism_group, automorphism_group_capped, extend_homomorphism, generating_subset, Automorphism};
pub use classes::{conjugacy_classes, ClassSet, ConjugacyClassTable};
pub use coset::{coset_enumerate, CosetTable, Relator};
pub use lattice::SubgroupLattice;
pub use matrix::from_unitriangular;
pub use pc::{from_power_commutator, from_power_commutator_with_vectors, PcPresentation};
pub use perm::{from_permutation_generators, parse_cycles, Permutation, DEFAULT_ORDER_CAP};
pub use product::{direct_product, semidirect_product, SemidirectAction};

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::hash::Hash;

use fixedbitset::FixedBitSet;
use thiserror::Error;

pub type Elem = u32;

/// Largest order for which a full multiplication table is stored.
pub const TABLE_LIMIT: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order exceeds the cap of {cap}")]
    OrderCap { cap: usize },
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),
    #[error("automorphism enumeration is capped at order {cap}, group has order {order}")]
    AutCap { cap: usize, order: usize },
    #[error("invalid action: {0}")]
    BadAction(String),
    #[error("coset enumeration exceeded {0} cosets")]
    CosetLimit(usize),
}

#[derive(Clone)]
enum Backend {
    Table(Vec<Elem>),
    Action { perms: Vec<Vec<u32>>, index: HashMap<Vec<u32>, Elem> },
}

/// An immutable finite group on the ids `0..order`.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    backend: Backend,
    inv: Vec<Elem>,
    elem_order: Vec<u32>,
    gens: Vec<Elem>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup").field("order", &self.order).field("gens", &self.gens).finish()
    }
}

impl FiniteGroup {
    /// Closes `gens` under right multiplication and tabulates the result.
    ///
    /// Ids follow breadth-first discovery order starting from `identity`.
    pub fn from_closure<T, F>(identity: T, gens: &[T], mul: F, cap: usize) -> Result<Self, GroupError>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        Self::from_closure_with_elements(identity, gens, mul, cap).map(|(g, _)| g)
    }

    /// As [`FiniteGroup::from_closure`], also returning the element behind each id.
    pub fn from_closure_with_elements<T, F>(
        identity: T,
        gens: &[T],
        mul: F,
        cap: usize,
    ) -> Result<(Self, Vec<T>), GroupError>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let cap = cap.min(TABLE_LIMIT);
        let (elements, right) = close(identity, gens, &mul, cap)?;
        let k = gens.len();
        let gen_ids: Vec<Elem> = (0..k).map(|j| right[j]).collect();
        Ok((Self::from_right_action(elements.len(), &right, k, gen_ids), elements))
    }

    /// Builds the table from `right[x * k + j] = x * s_j`.
    fn from_right_action(n: usize, right: &[Elem], k: usize, gens: Vec<Elem>) -> Self {
        let tree = schreier_tree_from_right(n, right, k);
        let mut table = vec![0 as Elem; n * n];
        for a in 0..n {
            table[a * n] = a as Elem;
        }
        for &(b, parent, j) in &tree {
            for a in 0..n {
                let ap = table[a * n + parent as usize] as usize;
                table[a * n + b as usize] = right[ap * k + j];
            }
        }
        Self::from_table_unchecked(n, table, gens)
    }

    /// Wraps a multiplication table; `table[a * n + b] = a * b`, identity `0`.
    ///
    /// Panics if the table has the wrong size or `0` is not a two-sided identity.
    pub fn from_table(n: usize, table: Vec<Elem>, gens: Vec<Elem>) -> Self {
        assert_eq!(table.len(), n * n, "table size");
        for a in 0..n {
            assert!(table[a] == a as Elem && table[a * n] == a as Elem, "0 is not the identity");
        }
        Self::from_table_unchecked(n, table, gens)
    }

    fn from_table_unchecked(n: usize, table: Vec<Elem>, gens: Vec<Elem>) -> Self {
        let mut g =
            FiniteGroup { order: n, backend: Backend::Table(table), inv: Vec::new(), elem_order: Vec::new(), gens };
        g.fill_orders();
        g
    }

    fn from_action(perms: Vec<Vec<u32>>, gens: Vec<Elem>) -> Self {
        let index = perms.iter().enumerate().map(|(i, p)| (p.clone(), i as Elem)).collect();
        let mut g = FiniteGroup {
            order: perms.len(),
            backend: Backend::Action { perms, index },
            inv: Vec::new(),
            elem_order: Vec::new(),
            gens,
        };
        g.fill_orders();
        g
    }

    fn fill_orders(&mut self) {
        let n = self.order;
        let mut inv = vec![0; n];
        let mut ord = vec![1u32; n];
        for a in 1..n as Elem {
            let mut prev = a;
            let mut x = a;
            let mut k = 1;
            // bounded so that a malformed table cannot loop forever
            while x != 0 && k <= n + 1 {
                prev = x;
                x = self.mul(x, a);
                k += 1;
            }
            ord[a as usize] = if x == 0 { k as u32 } else { 0 };
            inv[a as usize] = prev;
        }
        self.inv = inv;
        self.elem_order = ord;
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.backend {
            Backend::Table(t) => t[a as usize * self.order + b as usize],
            Backend::Action { perms, index } => {
                let (pa, pb) = (&perms[a as usize], &perms[b as usize]);
                let c: Vec<u32> = pa.iter().map(|&x| pb[x as usize]).collect();
                index[&c]
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    #[inline]
    pub fn elem_order(&self, a: Elem) -> u32 {
        self.elem_order[a as usize]
    }

    /// `h a h^-1`.
    #[inline]
    pub fn conj(&self, a: Elem, h: Elem) -> Elem {
        self.mul(self.mul(h, a), self.inv(h))
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let m = self.elem_order(a) as i64;
        let e = k.rem_euclid(m);
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    /// The generators used to build the group (not necessarily minimal).
    pub fn generators(&self) -> &[Elem] {
        &self.gens
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order as Elem
    }

    pub fn table(&self) -> Option<&[Elem]> {
        match &self.backend {
            Backend::Table(t) => Some(t),
            Backend::Action { .. } => None,
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().all(|&a| self.gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Multiplicity of each element order, ascending by order.
    pub fn order_histogram(&self) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for &o in &self.elem_order {
            *h.entry(o).or_insert(0) += 1;
        }
        h
    }

    /// Right-regular permutations of the stored generators, points `1..=order`.
    pub fn regular_permutations(&self) -> Vec<Vec<u32>> {
        self.gens.iter().map(|&s| self.elements().map(|x| self.mul(x, s) + 1).collect()).collect()
    }

    /// Closure of `seeds` as a bitset over element ids.
    pub fn subgroup_bits(&self, seeds: &[Elem]) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.order);
        bits.insert(0);
        let mut list = vec![0];
        let seeds: Vec<Elem> = seeds.iter().copied().filter(|&s| s != 0).collect();
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &s in &seeds {
                let y = self.mul(x, s);
                if !bits.put(y as usize) {
                    list.push(y);
                }
            }
            i += 1;
        }
        bits
    }

    /// Sorted ids of `⟨seeds⟩`.
    pub fn subgroup_generated(&self, seeds: &[Elem]) -> Vec<Elem> {
        self.subgroup_bits(seeds).ones().map(|x| x as Elem).collect()
    }

    /// Whether `seeds` generate the whole group.
    pub fn generates(&self, seeds: &[Elem]) -> bool {
        self.subgroup_bits(seeds).count_ones(..) == self.order
    }

    /// `[G,G]`, sorted. The set of commutators is conjugation invariant, so
    /// the subgroup it generates is already normal.
    pub fn commutator_subgroup(&self) -> Vec<Elem> {
        let mut seeds = FixedBitSet::with_capacity(self.order);
        for a in self.elements() {
            for b in self.elements() {
                seeds.insert(self.commutator(a, b) as usize);
            }
        }
        let seeds: Vec<Elem> = seeds.ones().map(|x| x as Elem).collect();
        self.subgroup_generated(&seeds)
    }

    /// Invariant factors of `G/[G,G]`, ascending in divisibility order.
    ///
    /// For each prime p the counts `|A[p^k]|` of the abelian quotient A
    /// determine its p-primary part; the parts are then merged.
    pub fn abelianization_invariants(&self) -> Vec<u64> {
        let derived = self.commutator_subgroup();
        let mut in_derived = FixedBitSet::with_capacity(self.order);
        for &d in &derived {
            in_derived.insert(d as usize);
        }
        let q = (self.order / derived.len()) as u64;
        // order of each coset gG' in the quotient, counted over elements of G
        let mut quotient_orders: BTreeMap<u64, u64> = BTreeMap::new();
        for a in self.elements() {
            let mut x = a;
            let mut k = 1u64;
            while !in_derived.contains(x as usize) {
                x = self.mul(x, a);
                k += 1;
            }
            *quotient_orders.entry(k).or_insert(0) += 1;
        }
        let per_coset = derived.len() as u64;
        let mut partitions: Vec<(u64, Vec<u32>)> = Vec::new();
        for p in prime_factors(q) {
            // log_p |A[p^k]| for k = 0, 1, ...
            let mut logs = vec![0u32];
            let mut pk = 1u64;
            loop {
                pk *= p;
                let count: u64 =
                    quotient_orders.iter().filter(|(&o, _)| pk.is_multiple_of(o)).map(|(_, &c)| c / per_coset).sum();
                let l = ilog(count, p);
                if l == *logs.last().unwrap() {
                    break;
                }
                logs.push(l);
            }
            // λ_k = #{cyclic factors of order ≥ p^k}
            let lambda: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
            let cyclic_count = lambda[0] as usize;
            let exps: Vec<u32> =
                (0..cyclic_count).map(|i| lambda.iter().filter(|&&l| l as usize > i).count() as u32).collect();
            partitions.push((p, exps));
        }
        let width = partitions.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; width];
        for (p, exps) in &partitions {
            // exps is descending; align to the largest factor
            for (i, &e) in exps.iter().enumerate() {
                factors[width - 1 - i] *= p.pow(e);
            }
        }
        factors
    }

    /// Breadth-first spanning tree w.r.t. `gens`: entries `(x, parent, j)`
    /// with `x = parent * gens[j]`, in discovery order.
    pub fn schreier_tree(&self, gens: &[Elem]) -> Vec<(Elem, Elem, usize)> {
        let mut seen = FixedBitSet::with_capacity(self.order);
        seen.insert(0);
        let mut queue = VecDeque::from([0 as Elem]);
        let mut tree = Vec::new();
        while let Some(x) = queue.pop_front() {
            for (j, &s) in gens.iter().enumerate() {
                let y = self.mul(x, s);
                if !seen.put(y as usize) {
                    tree.push((y, x, j));
                    queue.push_back(y);
                }
            }
        }
        tree
    }

    /// Checks associativity, identity and inverse laws on every triple.
    pub fn check_axioms_exhaustive(&self) -> bool {
        let n = self.order as Elem;
        for a in 0..n {
            if self.mul(a, 0) != a
                || self.mul(0, a) != a
                || self.mul(a, self.inv(a)) != 0
                || self.mul(self.inv(a), a) != 0
            {
                return false;
            }
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Breadth-first closure; returns the elements and `right[x * k + j]`.
fn close<T, F>(identity: T, gens: &[T], mul: &F, cap: usize) -> Result<(Vec<T>, Vec<Elem>), GroupError>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<T, Elem> = HashMap::from([(identity, 0)]);
    let mut right = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        for s in gens {
            let y = mul(&elements[i], s);
            let id = match index.get(&y) {
                Some(&id) => id,
                None => {
                    if elements.len() >= cap {
                        return Err(GroupError::OrderCap { cap });
                    }
                    let id = elements.len() as Elem;
                    index.insert(y.clone(), id);
                    elements.push(y);
                    id
                }
            };
            right.push(id);
        }
        i += 1;
    }
    Ok((elements, right))
}

fn schreier_tree_from_right(n: usize, right: &[Elem], k: usize) -> Vec<(Elem, Elem, usize)> {
    let mut seen = FixedBitSet::with_capacity(n);
    seen.insert(0);
    let mut queue = VecDeque::from([0 as Elem]);
    let mut tree = Vec::with_capacity(n);
    while let Some(x) = queue.pop_front() {
        for j in 0..k {
            let y = right[x as usize * k + j];
            if !seen.put(y as usize) {
                tree.push((y, x, j));
                queue.push_back(y);
            }
        }
    }
    tree
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn ilog(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        debug_assert_eq!(n % p, 0);
        n /= p;
        k += 1;
    }
    k
}
