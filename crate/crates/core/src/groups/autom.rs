use std::cmp::Reverse;
use std::collections::{HashMap, HashSet};

use super::{conjugacy_classes, Elem, FiniteGroup, GroupError};

/// Default order cap for [`automorphism_group`].
pub const DEFAULT_AUT_CAP: usize = 512;

/// A bijective homomorphism `G → G`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    images: Vec<Elem>,
}

impl Automorphism {
    pub fn identity(order: usize) -> Self {
        Automorphism { images: (0..order as Elem).collect() }
    }

    /// `x ↦ h x h^-1`.
    pub fn inner(g: &FiniteGroup, h: Elem) -> Self {
        Automorphism { images: g.elements().map(|x| g.conj(x, h)).collect() }
    }

    /// Wraps an image list after checking that it is an automorphism of `g`.
    pub fn from_images(g: &FiniteGroup, images: Vec<Elem>) -> Option<Self> {
        let a = Automorphism { images };
        a.is_automorphism_of(g).then_some(a)
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.images[x as usize]
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Automorphism) -> Automorphism {
        Automorphism { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as Elem;
        }
        Automorphism { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as Elem == x)
    }

    pub fn is_automorphism_of(&self, g: &FiniteGroup) -> bool {
        let n = g.order();
        if self.images.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &y in &self.images {
            if y as usize >= n || std::mem::replace(&mut seen[y as usize], true) {
                return false;
            }
        }
        g.elements().all(|a| g.elements().all(|b| self.apply(g.mul(a, b)) == g.mul(self.apply(a), self.apply(b))))
    }
}

/// Extends `gens[i] ↦ images[i]` to a homomorphism `g → target`.
///
/// Returns the image list, or `None` if the assignment does not respect the
/// relations of `g`. `gens` must generate `g`.
pub fn extend_homomorphism(g: &FiniteGroup, gens: &[Elem], images: &[Elem], target: &FiniteGroup) -> Option<Vec<Elem>> {
    let tree = g.schreier_tree(gens);
    extend_along(g, gens, images, target, &tree)
}

fn extend_along(
    g: &FiniteGroup,
    gens: &[Elem],
    images: &[Elem],
    target: &FiniteGroup,
    tree: &[(Elem, Elem, usize)],
) -> Option<Vec<Elem>> {
    if tree.len() + 1 != g.order() {
        return None;
    }
    let mut map = vec![u32::MAX; g.order()];
    map[0] = 0;
    for &(x, parent, j) in tree {
        map[x as usize] = target.mul(map[parent as usize], images[j]);
    }
    // φ(x s) = φ(x) φ(s) for all x and generators s gives a homomorphism
    for x in g.elements() {
        for (j, &s) in gens.iter().enumerate() {
            if map[g.mul(x, s) as usize] != target.mul(map[x as usize], images[j]) {
                return None;
            }
        }
    }
    Some(map)
}

/// All automorphisms of `g`, sorted by image list (identity first).
pub fn automorphism_group(g: &FiniteGroup) -> Result<Vec<Automorphism>, GroupError> {
    automorphism_group_capped(g, DEFAULT_AUT_CAP)
}

/// Fixes a short generating sequence and tries every image tuple whose
/// entries match the (element order, class size) fingerprint of the
/// corresponding generator.
pub fn automorphism_group_capped(g: &FiniteGroup, cap: usize) -> Result<Vec<Automorphism>, GroupError> {
    if g.order() > cap {
        return Err(GroupError::AutCap { cap, order: g.order() });
    }
    let classes = conjugacy_classes(g);
    let fingerprint = |x: Elem| (g.elem_order(x), classes.class(classes.class_of(x)).len());
    let mut buckets: HashMap<(u32, usize), Vec<Elem>> = HashMap::new();
    for x in g.elements() {
        buckets.entry(fingerprint(x)).or_default().push(x);
    }
    let gens = greedy_generating_sequence(g, |x| buckets[&fingerprint(x)].len());
    let candidates: Vec<&[Elem]> = gens.iter().map(|&s| buckets[&fingerprint(s)].as_slice()).collect();
    let tree = g.schreier_tree(&gens);

    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    let mut images = vec![0 as Elem; gens.len()];
    // odometer over the candidate product
    'outer: loop {
        for (i, &c) in choice.iter().enumerate() {
            images[i] = candidates[i][c];
        }
        if let Some(map) = extend_along(g, &gens, &images, g, &tree) {
            let mut seen = vec![false; g.order()];
            if map.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true)) {
                out.push(Automorphism { images: map });
            }
        }
        for i in (0..choice.len()).rev() {
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                continue 'outer;
            }
            choice[i] = 0;
        }
        break;
    }
    out.sort();
    Ok(out)
}

/// Greedily picks elements that enlarge the generated subgroup the most,
/// preferring elements with few fingerprint candidates.
fn greedy_generating_sequence(g: &FiniteGroup, cost: impl Fn(Elem) -> usize) -> Vec<Elem> {
    let mut gens: Vec<Elem> = Vec::new();
    let mut size = 1;
    while size < g.order() {
        let current = g.subgroup_bits(&gens);
        let mut best: Option<(usize, Reverse<usize>, Elem)> = None;
        for x in g.elements().filter(|&x| !current.contains(x as usize)) {
            let mut trial = gens.clone();
            trial.push(x);
            let key = (g.subgroup_bits(&trial).count_ones(..), Reverse(cost(x)));
            if best.as_ref().is_none_or(|b| key > (b.0, b.1)) {
                best = Some((key.0, key.1, x));
            }
        }
        let (s, _, x) = best.expect("proper subgroup has an element outside");
        gens.push(x);
        size = s;
    }
    gens
}

/// A subset of `auts` generating the same group, chosen greedily in order.
pub fn generating_subset(auts: &[Automorphism]) -> Vec<Automorphism> {
    let Some(first) = auts.first() else { return Vec::new() };
    let n = first.images.len();
    let mut gens: Vec<Automorphism> = Vec::new();
    let mut group: HashSet<Automorphism> = HashSet::from([Automorphism::identity(n)]);
    for a in auts {
        if group.contains(a) {
            continue;
        }
        gens.push(a.clone());
        let mut list: Vec<Automorphism> = group.iter().cloned().collect();
        let mut i = 0;
        while i < list.len() {
            for s in &gens {
                let y = list[i].then(s);
                if group.insert(y.clone()) {
                    list.push(y);
                }
            }
            i += 1;
        }
        if group.len() == auts.len() {
            break;
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::super::{from_permutation_generators, parse_cycles, DEFAULT_ORDER_CAP};
    use super::*;

    fn perm_group(degree: usize, gens: &[&str]) -> FiniteGroup {
        let gens: Vec<_> = gens.iter().map(|s| parse_cycles(s, degree).unwrap()).collect();
        from_permutation_generators(degree, &gens, DEFAULT_ORDER_CAP).unwrap()
    }

    #[test]
    fn s3_is_complete() {
        let g = perm_group(3, &["(1,2,3)", "(1,2)"]);
        let auts = automorphism_group(&g).unwrap();
        assert_eq!(auts.len(), 6);
        assert!(auts[0].is_identity());
        for h in g.elements() {
            assert!(auts.contains(&Automorphism::inner(&g, h)));
        }
    }

    #[test]
    fn klein_four_has_gl2() {
        let g = perm_group(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let auts = automorphism_group(&g).unwrap();
        assert_eq!(auts.len(), 6);
        let gens = generating_subset(&auts);
        assert!(gens.len() <= 2);
    }

    #[test]
    fn cap_is_enforced() {
        let g = perm_group(5, &["(1,2,3,4,5)", "(1,2)"]);
        assert_eq!(automorphism_group_capped(&g, 100).unwrap_err(), GroupError::AutCap { cap: 100, order: 120 });
    }

    #[test]
    fn extension_rejects_non_homomorphism() {
        // s -> s^2 is an endomorphism of C4; C4 -> C3 with s -> order 3 is not a map
        let g = perm_group(4, &["(1,2,3,4)"]);
        let s = g.generators()[0];
        let sq = g.mul(s, s);
        assert!(extend_homomorphism(&g, &[s], &[sq], &g).is_some());
        let h = perm_group(3, &["(1,2,3)"]);
        assert!(extend_homomorphism(&g, &[s], &[h.generators()[0]], &h).is_none());
    }
}
