use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{Elem, FiniteGroup};

const UNKNOWN: u32 = u32::MAX;

struct Node {
    bits: FixedBitSet,
    elements: Vec<Elem>,
    gens: Vec<Elem>,
    joins: Vec<u32>,
}

/// Interned subgroups with memoized joins `⟨H, x⟩`.
///
/// Backtracking searches extend a prefix one element at a time; the
/// subgroup generated by each prefix is then a table lookup after warm-up.
/// Not thread-safe; use one lattice per worker.
pub struct SubgroupLattice<'g> {
    g: &'g FiniteGroup,
    nodes: Vec<Node>,
    index: HashMap<FixedBitSet, u32>,
}

impl<'g> SubgroupLattice<'g> {
    pub fn new(g: &'g FiniteGroup) -> Self {
        let mut lat = SubgroupLattice { g, nodes: Vec::new(), index: HashMap::new() };
        let mut bits = FixedBitSet::with_capacity(g.order());
        bits.insert(0);
        lat.intern(bits, vec![0], Vec::new());
        lat
    }

    /// Id of the trivial subgroup.
    pub const TRIVIAL: u32 = 0;

    fn intern(&mut self, bits: FixedBitSet, elements: Vec<Elem>, gens: Vec<Elem>) -> u32 {
        if let Some(&id) = self.index.get(&bits) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.index.insert(bits.clone(), id);
        let joins = vec![UNKNOWN; self.g.order()];
        self.nodes.push(Node { bits, elements, gens, joins });
        id
    }

    #[inline]
    pub fn join(&mut self, h: u32, x: Elem) -> u32 {
        let cached = self.nodes[h as usize].joins[x as usize];
        if cached != UNKNOWN {
            return cached;
        }
        let id = self.compute_join(h, x);
        self.nodes[h as usize].joins[x as usize] = id;
        id
    }

    fn compute_join(&mut self, h: u32, x: Elem) -> u32 {
        let node = &self.nodes[h as usize];
        if node.bits.contains(x as usize) {
            return h;
        }
        let mut gens = node.gens.clone();
        gens.push(x);
        let mut bits = node.bits.clone();
        let mut list = node.elements.clone();
        let mut i = 0;
        while i < list.len() {
            let y = list[i];
            for &s in &gens {
                let z = self.g.mul(y, s);
                if !bits.put(z as usize) {
                    list.push(z);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        self.intern(bits, list, gens)
    }

    pub fn size(&self, h: u32) -> usize {
        self.nodes[h as usize].elements.len()
    }

    #[inline]
    pub fn is_full(&self, h: u32) -> bool {
        self.nodes[h as usize].elements.len() == self.g.order()
    }

    pub fn elements(&self, h: u32) -> &[Elem] {
        &self.nodes[h as usize].elements
    }

    pub fn contains(&self, h: u32, x: Elem) -> bool {
        self.nodes[h as usize].bits.contains(x as usize)
    }

    /// Number of distinct subgroups met so far.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
