use std::sync::OnceLock;

use isoprod::catalog::Catalog;
use isoprod::groups::{automorphism_group, conjugacy_classes, Automorphism, ConjugacyClassTable, Elem, FiniteGroup};
use isoprod::orbits::{apply_automorphism, hurwitz_move, BraidMove};
use isoprod::spherical::{disjoint, enumerate_systems, stabilizer_set, stabilizer_set_naive, SphericalSystem};
use isoprod::typesys::TypeTuple;
use proptest::prelude::*;

struct Fixture {
    g: FiniteGroup,
    cc: ConjugacyClassTable,
    auts: Vec<Automorphism>,
    ty: TypeTuple,
    systems: Vec<Vec<Elem>>,
    /// Systems of a second type, for disjointness.
    partners: Vec<Vec<Elem>>,
}

const CASES: &[(&str, &str, &str)] = &[
    ("A5", "[2,5,5]", "[3,3,5]"),
    ("S4", "[3,4,4]", "[2^2,3^2]"),
    ("G16_3", "[2^2,4^2]", "[2^3,4^2]"),
    ("D4xC2", "[2^3,4]", "[2^5]"),
    ("C2^3", "[2^5]", "[2^6]"),
    ("C3^2", "[3^4]", "[3^5]"),
    ("G32_27", "[2^3,4]", "[2^2,4^2]"),
];

fn fixtures() -> &'static [Fixture] {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| {
        let catalog = Catalog::bundled();
        CASES
            .iter()
            .map(|&(key, t, u)| {
                let g = (*catalog.realize(key).unwrap().group).clone();
                let cc = conjugacy_classes(&g);
                let auts = automorphism_group(&g).unwrap();
                let ty: TypeTuple = t.parse().unwrap();
                let other: TypeTuple = u.parse().unwrap();
                let systems: Vec<Vec<Elem>> = enumerate_systems(&g, &cc, &ty).into_iter().map(|s| s.0).collect();
                let partners: Vec<Vec<Elem>> = enumerate_systems(&g, &cc, &other).into_iter().map(|s| s.0).collect();
                assert!(!systems.is_empty() && !partners.is_empty(), "{key} {t} {u}");
                Fixture { g, cc, auts, ty, systems, partners }
            })
            .collect()
    })
}

fn pick(seed: (usize, usize)) -> (&'static Fixture, &'static [Elem]) {
    let f = &fixtures()[seed.0 % CASES.len()];
    (f, &f.systems[seed.1 % f.systems.len()])
}

fn seed() -> impl Strategy<Value = (usize, usize)> {
    (any::<usize>(), any::<usize>())
}

fn moves(f: &Fixture, a: &[Elem], path: &[(usize, bool)]) -> Vec<Elem> {
    let r = a.len();
    path.iter().fold(a.to_vec(), |t, &(i, fwd)| {
        let i = 1 + i % (r - 1);
        let m = if fwd { BraidMove::forward(i) } else { BraidMove::inverse(i) };
        hurwitz_move(&f.g, &t, m).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn braid_relations_hold(s in seed(), i in any::<usize>(), j in any::<usize>()) {
        let (f, a) = pick(s);
        let r = a.len();
        let sig = |t: &[Elem], k: usize| hurwitz_move(&f.g, t, BraidMove::forward(k)).unwrap();
        let inv = |t: &[Elem], k: usize| hurwitz_move(&f.g, t, BraidMove::inverse(k)).unwrap();
        let i = 1 + i % (r - 1);
        prop_assert_eq!(inv(&sig(a, i), i), a.to_vec());
        prop_assert_eq!(sig(&inv(a, i), i), a.to_vec());
        if i + 1 < r {
            prop_assert_eq!(sig(&sig(&sig(a, i), i + 1), i), sig(&sig(&sig(a, i + 1), i), i + 1));
        }
        let j = 1 + j % (r - 1);
        if i.abs_diff(j) >= 2 {
            prop_assert_eq!(sig(&sig(a, i), j), sig(&sig(a, j), i));
        }
    }

    #[test]
    fn automorphisms_commute_with_hurwitz_moves(s in seed(), k in any::<usize>(), path in prop::collection::vec((any::<usize>(), any::<bool>()), 1..6)) {
        let (f, a) = pick(s);
        let phi = &f.auts[k % f.auts.len()];
        prop_assert_eq!(apply_automorphism(phi, &moves(f, a, &path)), moves(f, &apply_automorphism(phi, a), &path));
    }

    #[test]
    fn moves_preserve_system_and_sigma(s in seed(), k in any::<usize>(), path in prop::collection::vec((any::<usize>(), any::<bool>()), 0..8)) {
        let (f, a) = pick(s);
        let b = moves(f, a, &path);
        prop_assert_eq!(SphericalSystem(b.clone()).validate(&f.g, &f.ty), Ok(()));
        prop_assert_eq!(stabilizer_set(&f.cc, a), stabilizer_set(&f.cc, &b));
        prop_assert_eq!(stabilizer_set_naive(&f.g, a), stabilizer_set_naive(&f.g, &b));
        let phi = &f.auts[k % f.auts.len()];
        let c = apply_automorphism(phi, a);
        prop_assert_eq!(SphericalSystem(c).validate(&f.g, &f.ty), Ok(()));
    }

    #[test]
    fn sigma_by_classes_matches_naive(s in seed()) {
        let (f, a) = pick(s);
        prop_assert_eq!(stabilizer_set(&f.cc, a).members(&f.cc), stabilizer_set_naive(&f.g, a));
    }

    #[test]
    fn disjointness_is_orbit_invariant(
        s in seed(), p in any::<usize>(), k in any::<usize>(),
        path1 in prop::collection::vec((any::<usize>(), any::<bool>()), 0..6),
        path2 in prop::collection::vec((any::<usize>(), any::<bool>()), 0..6),
    ) {
        let (f, a) = pick(s);
        let b = &f.partners[p % f.partners.len()];
        let before = disjoint(&f.cc, a, b);
        let naive = {
            let (x, y) = (stabilizer_set_naive(&f.g, a), stabilizer_set_naive(&f.g, b));
            x.iter().filter(|e| y.contains(e)).count() == 1
        };
        prop_assert_eq!(before, naive);
        let phi = &f.auts[k % f.auts.len()];
        let a2 = apply_automorphism(phi, &moves(f, a, &path1));
        let b2 = apply_automorphism(phi, &moves(f, b, &path2));
        prop_assert_eq!(disjoint(&f.cc, &a2, &b2), before);
    }
}
