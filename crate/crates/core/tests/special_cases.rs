//! Cases where the general count is backed by a separate, class-based
//! argument: no disjoint pairs for PSL(2,7) and ⟨96,64⟩ against `[2^8]`,
//! the restricted `[2^8]` sets of S4 × Z2, and the exchange check for
//! G(128,36).

use isoprod::catalog::Catalog;
use isoprod::groups::{
    automorphism_group, conjugacy_classes, Automorphism, ClassSet, ConjugacyClassTable, Elem, FiniteGroup,
};
use isoprod::orbits::{
    apply_automorphism, count_component_orbits, orbit_decompose, Action, CountConfig, OrbitContext, SymmetricPairIndex,
};
use isoprod::spherical::{disjoint, enumerate_restricted, SystemSearch, SystemSet};
use isoprod::typesys::TypeTuple;

fn setup(key: &str) -> (FiniteGroup, ConjugacyClassTable, Vec<Automorphism>) {
    let g = (*Catalog::bundled().realize(key).unwrap().group).clone();
    let cc = conjugacy_classes(&g);
    let auts = automorphism_group(&g).unwrap();
    (g, cc, auts)
}

fn ty(s: &str) -> TypeTuple {
    s.parse().unwrap()
}

fn involution_classes(g: &FiniteGroup, cc: &ConjugacyClassTable) -> Vec<usize> {
    (0..cc.len()).filter(|&c| g.elem_order(cc.representative(c)) == 2).collect()
}

fn class_set(cc: &ConjugacyClassTable, classes: &[usize]) -> ClassSet {
    let mut s = cc.empty_set();
    for &c in classes {
        s.insert(c);
    }
    s
}

#[test]
fn psl27_single_involution_class_blocks_2_8_against_2_3_7() {
    let (g, cc, auts) = setup("PSL27");
    // class argument: both types need an involution, and there is only one class
    let inv = involution_classes(&g, &cc);
    assert_eq!(inv.len(), 1);
    assert!(SystemSearch::new(&g, &cc, &ty("[2,3,7]")).count() > 0);
    // full count
    let ctx = OrbitContext { group: &g, classes: &cc, automorphisms: &auts };
    let c = count_component_orbits(&ctx, &ty("[2^8]"), &ty("[2,3,7]"), &CountConfig::default()).unwrap();
    assert_eq!(c.n, 0);
}

#[test]
fn g96_64_small_involution_class_blocks_2_8_against_2_3_8() {
    let (g, cc, auts) = setup("G96_64");
    let inv = involution_classes(&g, &cc);
    assert_eq!(inv.len(), 2);
    let k2 = *inv.iter().find(|&&c| cc.class(c).len() == 3).expect("an involution class of size 3");
    // ⟨K2⟩ is a Klein four-group, so every [2^8] system meets the other class
    let span = g.subgroup_generated(cc.class(k2));
    assert_eq!(span.len(), 4);
    assert!(span.iter().all(|&x| x == 0 || g.elem_order(x) == 2));
    // and no [2,3,8] system starts in K2
    let k2_set = class_set(&cc, &[k2]);
    assert_eq!(SystemSearch::new(&g, &cc, &ty("[2,3,8]")).first_entry_in(&cc, &k2_set).count(), 0);
    assert!(SystemSearch::new(&g, &cc, &ty("[2,3,8]")).count() > 0);
    let ctx = OrbitContext { group: &g, classes: &cc, automorphisms: &auts };
    let c = count_component_orbits(&ctx, &ty("[2^8]"), &ty("[2,3,8]"), &CountConfig::default()).unwrap();
    assert_eq!(c.n, 0);
}

/// Restricted sets `B_l` of `[2^8]` systems avoiding one of the two
/// involution classes of size 6, their Hurwitz orbits, and the pairs they
/// form with the two Hurwitz orbits of `[2,4,6]` systems.
#[test]
fn s4xc2_restricted_involution_sets() {
    let (g, cc, auts) = setup("S4xC2");
    let inv = involution_classes(&g, &cc);
    let mut sizes: Vec<usize> = inv.iter().map(|&c| cc.class(c).len()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![1, 3, 3, 6, 6]);
    assert_eq!(sizes.iter().sum::<usize>(), 19);
    assert_eq!(g.order_histogram()[&2], 19);
    let big: Vec<usize> = inv.iter().copied().filter(|&c| cc.class(c).len() == 6).collect();

    let b246 = SystemSearch::new(&g, &cc, &ty("[2,4,6]")).collect(usize::MAX).unwrap();
    // the involution of every [2,4,6] system lies in one of the size-6 classes
    for a in b246.iter() {
        let i = a.iter().position(|&x| g.elem_order(x) == 2).unwrap();
        assert!(big.contains(&cc.class_of(a[i])));
    }
    let h246 = orbit_decompose(&g, &b246, Action::BraidOnly).unwrap();
    assert_eq!(h246.len(), 2);
    let reps246: Vec<Vec<Elem>> = h246.representatives.iter().map(|&i| b246.get(i)).collect();

    let t28 = ty("[2^8]");
    let mut keys = Vec::new();
    let mut pairs = Vec::new();
    let mut packer = None;
    for &l in &big {
        let search = enumerate_restricted(&g, &cc, &t28, l);
        let set = search.collect(usize::MAX).unwrap();
        assert_eq!(set.len(), 9_213_120);
        let orbits = orbit_decompose(&g, &set, Action::BraidOnly).unwrap();
        assert_eq!(orbits.len(), 10);
        let reps: Vec<Vec<Elem>> = orbits.representatives.iter().map(|&i| set.get(i)).collect();
        let disjoint_pairs: Vec<(Vec<Elem>, Vec<Elem>)> = reps246
            .iter()
            .flat_map(|a| reps.iter().map(move |r| (a.clone(), r.clone())))
            .filter(|(a, r)| disjoint(&cc, a, r))
            .collect();
        assert_eq!(disjoint_pairs.len(), 2);
        pairs.extend(disjoint_pairs);
        keys.extend_from_slice(set.keys());
        packer = Some(set.packer());
    }

    // Identify the four pairs: (A, R) ~ (A', R') iff some automorphism maps
    // the Hurwitz orbit of A onto that of A' and that of R onto that of R'.
    let union = SystemSet::from_unsorted(packer.unwrap(), keys);
    let h28 = orbit_decompose(&g, &union, Action::BraidOnly).unwrap();
    let orbit246 = |a: &[Elem]| h246.class_of[b246.index_of(a).unwrap()];
    let orbit28 = |r: &[Elem]| h28.class_of[union.index_of(r).unwrap()];
    let mut classes: Vec<usize> = (0..pairs.len()).collect();
    for i in 0..pairs.len() {
        for j in 0..i {
            let (a, r) = &pairs[i];
            let (b, s) = &pairs[j];
            let equivalent = auts.iter().any(|phi| {
                orbit246(&apply_automorphism(phi, a)) == orbit246(b)
                    && orbit28(&apply_automorphism(phi, r)) == orbit28(s)
            });
            if equivalent {
                classes[i] = classes[j];
                break;
            }
        }
    }
    classes.sort();
    classes.dedup();
    assert_eq!(classes.len(), 2);

    let ctx = OrbitContext { group: &g, classes: &cc, automorphisms: &auts };
    let c = count_component_orbits(&ctx, &ty("[2,4,6]"), &t28, &CountConfig::default()).unwrap();
    assert_eq!(c.n, 2);
}

#[test]
fn g128_36_orbits_stay_apart_under_exchange() {
    let (g, cc, auts) = setup("G128_36");
    let t = ty("[4^3]");
    let ctx = OrbitContext { group: &g, classes: &cc, automorphisms: &auts };
    let cfg = CountConfig::default();
    let c = count_component_orbits(&ctx, &t, &t, &cfg).unwrap();
    assert_eq!(c.orbits, 2);
    assert!(c.exchange_checked);
    assert_eq!(c.n, 2);

    let index = SymmetricPairIndex::new(&ctx, &t, &cfg).unwrap();
    let reps = index.representatives();
    assert_eq!(reps.len(), 2);
    let (a, b) = (&reps[0], &reps[1]);
    assert!(!index.same_orbit((&a.0, &a.1), (&b.0, &b.1)));
    // (A2, A1) is not in the orbit of (B1, B2)
    assert!(!index.exchange_equivalent((&a.0, &a.1), (&b.0, &b.1)));
    assert!(!index.exchange_equivalent((&b.0, &b.1), (&a.0, &a.1)));
    // so the exchange maps each orbit to itself
    assert!(index.same_orbit((&a.1, &a.0), (&a.0, &a.1)));
    assert!(index.same_orbit((&b.1, &b.0), (&b.0, &b.1)));
}
