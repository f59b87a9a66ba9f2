use fixedbitset::FixedBitSet;

use super::{Elem, FiniteGroup};

/// A set of conjugacy-class indices.
pub type ClassSet = FixedBitSet;

/// Conjugacy classes ordered by their minimal element; class 0 is `{1}`.
#[derive(Clone, Debug)]
pub struct ConjugacyClassTable {
    classes: Vec<Vec<Elem>>,
    class_of: Vec<u32>,
    /// Classes met by the nontrivial powers of each class representative.
    power_classes: Vec<ClassSet>,
}

impl ConjugacyClassTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<Elem>] {
        &self.classes
    }

    pub fn class(&self, c: usize) -> &[Elem] {
        &self.classes[c]
    }

    #[inline]
    pub fn class_of(&self, a: Elem) -> usize {
        self.class_of[a as usize] as usize
    }

    pub fn representative(&self, c: usize) -> Elem {
        self.classes[c][0]
    }

    pub fn representatives(&self) -> Vec<Elem> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    /// Classes of `g, g^2, ...` for `g` in class `c`, identity excluded.
    pub fn power_classes(&self, c: usize) -> &ClassSet {
        &self.power_classes[c]
    }

    pub fn empty_set(&self) -> ClassSet {
        FixedBitSet::with_capacity(self.len())
    }

    /// Element ids of the union of the given classes, sorted.
    pub fn elements_of(&self, set: &ClassSet) -> Vec<Elem> {
        let mut out: Vec<Elem> = set.ones().flat_map(|c| self.classes[c].iter().copied()).collect();
        out.sort_unstable();
        out
    }
}

pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyClassTable {
    let n = g.order();
    let gens: Vec<Elem> = g.generators().iter().copied().filter(|&s| s != 0).collect();
    let mut class_of = vec![u32::MAX; n];
    let mut classes: Vec<Vec<Elem>> = Vec::new();
    for a in g.elements() {
        if class_of[a as usize] != u32::MAX {
            continue;
        }
        let idx = classes.len() as u32;
        class_of[a as usize] = idx;
        let mut members = vec![a];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &s in &gens {
                let y = g.conj(x, s);
                if class_of[y as usize] == u32::MAX {
                    class_of[y as usize] = idx;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        classes.push(members);
    }
    let k = classes.len();
    let power_classes = classes
        .iter()
        .map(|c| {
            let rep = c[0];
            let mut set = FixedBitSet::with_capacity(k);
            let mut x = rep;
            while x != 0 {
                set.insert(class_of[x as usize] as usize);
                x = g.mul(x, rep);
            }
            set
        })
        .collect();
    ConjugacyClassTable { classes, class_of, power_classes }
}
