//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use isoprod::catalog::Catalog;
use isoprod::classify::{compare_tables, read_csv, surface_invariants, ClassificationRow, GOLDEN_CSV};
use isoprod::groups::{automorphism_group, conjugacy_classes, Automorphism, ConjugacyClassTable, Elem, FiniteGroup};
use isoprod::orbits::{
    apply_automorphism, count_component_orbits, count_pair_orbits_bruteforce, hurwitz_move, orbit_decompose, Action,
    BraidMove, CountConfig, OrbitContext, SymmetricPairIndex,
};
use isoprod::spherical::{
    count_systems, disjoint, enumerate_restricted, enumerate_systems, stabilizer_set, SphericalSystem, SystemSearch,
};
use isoprod::typesys::{enumerate_admissible_types, polygonal_abelianization, TypeTuple};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const REFERENCE_ORIENTATION: &str = include_str!("../../core/tests/data/reference_orientation.csv");

const PUBLISHED_TYPES: &str = "[2,3,7]_168 [2,3,8]_96 [2,4,5]_80 [2,3,9]_72 [2,3,10]_60 [2,3,12]_48 [2,4,6]_48 \
    [3^2,4]_48 [2,3,14]_42 [2,5^2]_40 [2,3,18]_36 [2,4,8]_32 [2,3,30]_30 [2,5,6]_30 [3^2,5]_30 [2,4,12]_24 \
    [2,6^2]_24 [3,4^2]_24 [3^2,6]_24 [2^3,3]_24 [3^2,7]_21 [2,4,20]_20 [2,5,10]_20 [2,6,9]_18 [3^2,9]_18 \
    [2,8^2]_16 [4^3]_16 [2^3,4]_16 [3,5^2]_15 [3^2,15]_15 [2,7,14]_14 [2,12^2]_12 [3,4,12]_12 [3,6^2]_12 \
    [4^2,6]_12 [2^3,6]_12 [2^2,3^2]_12 [5^3]_10 [2^3,10]_10 [3,9^2]_9 [4,8^2]_8 [2^2,4^2]_8 [2^5]_8 [7^3]_7 \
    [2^2,6^2]_6 [2,3^2,6]_6 [3^4]_6 [2^4,3]_6 [4^4]_4 [2^3,4^2]_4 [2^6]_4 [3^5]_3 [2^8]_2";

const PUBLISHED_EXCEPTIONAL: &[(u64, &str, &str)] = &[
    (4608, "[2,3,8]", "[2,3,8]"),
    (3840, "[2,3,8]", "[2,4,5]"),
    (3456, "[2,3,8]", "[2,3,9]"),
    (3200, "[2,4,5]", "[2,4,5]"),
    (2880, "[2,3,9]", "[2,4,5]"),
    (2880, "[2,3,8]", "[2,3,10]"),
    (2592, "[2,3,9]", "[2,3,9]"),
    (2400, "[2,3,10]", "[2,4,5]"),
    (2304, "[2,3,8]", "[2,4,6]"),
    (2304, "[2,3,8]", "[3,3,4]"),
    (2304, "[2,3,8]", "[2,3,12]"),
    (2160, "[2,3,9]", "[2,3,10]"),
];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_isoprod"))
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let out = bin().args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "isoprod {} exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn ty(s: &str) -> TypeTuple {
    s.parse().unwrap()
}

fn setup(key: &str) -> (FiniteGroup, ConjugacyClassTable, Vec<Automorphism>) {
    let g = (*Catalog::bundled().realize(key).unwrap().group).clone();
    let cc = conjugacy_classes(&g);
    let auts = automorphism_group(&g).unwrap();
    (g, cc, auts)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn involution_classes(g: &FiniteGroup, cc: &ConjugacyClassTable) -> Vec<usize> {
    (0..cc.len()).filter(|&c| g.elem_order(cc.representative(c)) == 2).collect()
}

fn criterion_types() -> Outcome {
    let start = Instant::now();
    let out = run_cli(&["types"])?;
    let secs = start.elapsed().as_secs_f64();
    let got: Vec<&str> = out.lines().collect();
    let got_set: BTreeSet<&str> = got.iter().copied().collect();
    let want: BTreeSet<&str> = PUBLISHED_TYPES.split_whitespace().collect();
    ensure(got.len() == 53 && want.len() == 53, || format!("{} lines", got.len()))?;
    ensure(got_set == want, || {
        format!(
            "differs: extra {:?}, missing {:?}",
            got_set.difference(&want).collect::<Vec<_>>(),
            want.difference(&got_set).collect::<Vec<_>>()
        )
    })?;
    ensure(secs < 1.0, || format!("took {secs:.2}s"))?;
    Ok(format!("53 types with alpha values, {secs:.2}s"))
}

fn criterion_table() -> Outcome {
    let dir = std::env::temp_dir().join(format!("isoprod-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let out: PathBuf = dir.join("table.csv");
    let start = Instant::now();
    run_cli(&["classify", "--catalog", "default", "--out", out.to_str().unwrap(), "--jobs", "8"])?;
    let secs = start.elapsed().as_secs_f64();
    let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
    let verify = bin().args(["verify", "--table"]).arg(&out).output().map_err(|e| e.to_string())?.status;
    let _ = std::fs::remove_dir_all(&dir);
    ensure(verify.success(), || format!("verify exited with {verify}"))?;
    ensure(text == GOLDEN_CSV, || "CSV differs from the committed golden table".into())?;
    let rows = read_csv(text.as_bytes()).map_err(|e| e.to_string())?;
    let reference = read_csv(REFERENCE_ORIENTATION.as_bytes()).map_err(|e| e.to_string())?;
    let diff = compare_tables(&reference, &rows);
    ensure(diff.is_empty(), || diff.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))?;
    let total: u64 = rows.iter().map(|r| r.n).sum();
    ensure(rows.len() == 32 && total == 49, || format!("{} rows, total n = {total}", rows.len()))?;
    ensure(secs < 600.0, || format!("took {secs:.0}s"))?;
    Ok(format!("32 rows, total n = 49, byte-identical CSV in {secs:.1}s"))
}

fn criterion_s4xc2() -> Outcome {
    let (g, cc, auts) = setup("S4xC2");
    let inv = involution_classes(&g, &cc);
    let mut sizes: Vec<usize> = inv.iter().map(|&c| cc.class(c).len()).collect();
    sizes.sort();
    ensure(g.order_histogram()[&2] == 19 && sizes == [1, 3, 3, 6, 6], || format!("involution classes {sizes:?}"))?;
    let t28 = ty("[2^8]");
    let mut report = Vec::new();
    for c in inv.into_iter().filter(|&c| cc.class(c).len() == 6) {
        let set = enumerate_restricted(&g, &cc, &t28, c).collect(usize::MAX).map_err(|e| e.to_string())?;
        let orbits = orbit_decompose(&g, &set, Action::BraidOnly).map_err(|e| e.to_string())?;
        ensure(set.len() == 9_213_120 && orbits.len() == 10, || {
            format!("|B| = {}, |R| = {}", set.len(), orbits.len())
        })?;
        report.push(set.len());
    }
    let ctx = OrbitContext { group: &g, classes: &cc, automorphisms: &auts };
    let c = count_component_orbits(&ctx, &ty("[2,4,6]"), &t28, &CountConfig::default()).map_err(|e| e.to_string())?;
    ensure(c.n == 2, || format!("n = {}", c.n))?;
    Ok(format!("19 involutions in classes 1,3,3,6,6; |B4| = |B5| = {}; |R4| = |R5| = 10; n = 2", report[0]))
}

fn criterion_nonexistence() -> Outcome {
    let (g, cc, auts) = setup("PSL27");
    ensure(involution_classes(&g, &cc).len() == 1, || "PSL(2,7) involution classes != 1".into())?;
    let ctx = OrbitContext { group: &g, classes: &cc, automorphisms: &auts };
    let n1 = count_component_orbits(&ctx, &ty("[2^8]"), &ty("[2,3,7]"), &CountConfig::default())
        .map_err(|e| e.to_string())?
        .n;

    let (g, cc, auts) = setup("G96_64");
    let inv = involution_classes(&g, &cc);
    let k2 = *inv.iter().find(|&&c| cc.class(c).len() == 3).ok_or("no involution class of size 3")?;
    let span = g.subgroup_generated(cc.class(k2)).len();
    let mut k2_set = cc.empty_set();
    k2_set.insert(k2);
    let first_in_k2 = SystemSearch::new(&g, &cc, &ty("[2,3,8]")).first_entry_in(&cc, &k2_set).count();
    ensure(inv.len() == 2 && span == 4 && first_in_k2 == 0, || {
        format!("classes {}, |<K2>| = {span}, first-in-K2 {first_in_k2}", inv.len())
    })?;
    let ctx = OrbitContext { group: &g, classes: &cc, automorphisms: &auts };
    let n2 = count_component_orbits(&ctx, &ty("[2^8]"), &ty("[2,3,8]"), &CountConfig::default())
        .map_err(|e| e.to_string())?
        .n;
    ensure(n1 == 0 && n2 == 0, || format!("n = {n1}, {n2}"))?;
    Ok("<168,42>: one involution class, n = 0; <96,64>: |K2| = 3, |<K2>| = 4, no [2,3,8] system starts in K2, n = 0"
        .into())
}

fn criterion_exchange() -> Outcome {
    let (g, cc, auts) = setup("G128_36");
    let t = ty("[4^3]");
    let ctx = OrbitContext { group: &g, classes: &cc, automorphisms: &auts };
    let cfg = CountConfig::default();
    let c = count_component_orbits(&ctx, &t, &t, &cfg).map_err(|e| e.to_string())?;
    let index = SymmetricPairIndex::new(&ctx, &t, &cfg).map_err(|e| e.to_string())?;
    let reps = index.representatives();
    ensure(reps.len() == 2, || format!("{} representatives", reps.len()))?;
    let (a, b) = (&reps[0], &reps[1]);
    let swapped_apart = !index.exchange_equivalent((&a.0, &a.1), (&b.0, &b.1));
    ensure(c.orbits == 2 && c.n == 2 && swapped_apart, || format!("orbits {}, n {}", c.orbits, c.n))?;
    let brute = count_pair_orbits_bruteforce(&g, &cc, &auts, &t, &t, true, 5_000_000).map_err(|e| e.to_string())?;
    ensure(brute == 2, || format!("direct closure gives {brute}"))?;
    Ok("two orbits; (A2,A1) not equivalent to (B1,B2); n = 2 (also by direct closure)".into())
}

fn criterion_exceptional() -> Outcome {
    let json = run_cli(&["exceptional", "--json"])?;
    let v: serde_json::Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    let rows = v["rows"].as_array().ok_or("no rows")?;
    let got: BTreeSet<(u64, TypeTuple, TypeTuple)> = rows
        .iter()
        .map(|r| {
            let t = |k: &str| -> TypeTuple { serde_json::from_value(r[k].clone()).unwrap() };
            (r["order"].as_u64().unwrap(), t("t1"), t("t2"))
        })
        .collect();
    let want: BTreeSet<(u64, TypeTuple, TypeTuple)> = PUBLISHED_EXCEPTIONAL
        .iter()
        .map(|&(m, a, b)| {
            let (a, b) = (ty(a), ty(b));
            if a <= b {
                (m, a, b)
            } else {
                (m, b, a)
            }
        })
        .collect();
    ensure(rows.len() == 12 && got == want, || format!("{} rows, set equal: {}", rows.len(), got == want))?;
    let ab = |s: &str| polygonal_abelianization(&ty(s));
    ensure(ab("[2,3,8]") == [2] && ab("[3,3,4]") == [3] && ab("[2,3,7]").is_empty(), || "abelianizations".into())?;
    let chain = &rows[0]["chain"];
    let steps = chain["steps"].as_array().ok_or("no chain on the 4608 row")?;
    ensure(
        rows[0]["order"] == 4608
            && steps[0]["derived_order"] == 2304
            && steps[1]["derived_order"] == 768
            && chain["cited_not_verified"].as_str().is_some_and(|s| s.contains("768")),
        || "4608 chain".into(),
    )?;
    Ok("12 triples; T(2,3,8)^ab = Z2, T(3,3,4)^ab = Z3, T(2,3,7)^ab = 1; 4608 -> 2304 -> 768, last step cited".into())
}

/// Exhaustive over small fixtures rather than sampled.
fn criterion_properties() -> Outcome {
    let start = Instant::now();
    let catalog = Catalog::bundled();
    for (key, t, u) in [("A5", "[2,5,5]", "[3,3,5]"), ("G16_3", "[2^2,4^2]", "[2^3,4^2]"), ("C3^2", "[3^4]", "[3^5]")] {
        let (g, cc, auts) = setup(key);
        let (t, u) = (ty(t), ty(u));
        let sys: Vec<Vec<Elem>> = enumerate_systems(&g, &cc, &t).into_iter().map(|s| s.0).collect();
        let partners: Vec<Vec<Elem>> = enumerate_systems(&g, &cc, &u).into_iter().map(|s| s.0).collect();
        let r = t.len();
        let sig = |a: &[Elem], i: usize| hurwitz_move(&g, a, BraidMove::forward(i)).unwrap();
        for a in sys.iter().take(2000) {
            for i in 1..r {
                ensure(hurwitz_move(&g, &sig(a, i), BraidMove::inverse(i)).unwrap() == *a, || {
                    format!("{key}: inverse")
                })?;
                if i + 1 < r {
                    ensure(sig(&sig(&sig(a, i), i + 1), i) == sig(&sig(&sig(a, i + 1), i), i + 1), || {
                        format!("{key}: braid relation")
                    })?;
                }
                for j in i + 2..r {
                    ensure(sig(&sig(a, i), j) == sig(&sig(a, j), i), || format!("{key}: far commutation"))?;
                }
                let b = sig(a, i);
                ensure(SphericalSystem(b.clone()).validate(&g, &t).is_ok(), || format!("{key}: move broke system"))?;
                ensure(stabilizer_set(&cc, a) == stabilizer_set(&cc, &b), || format!("{key}: move changed sigma"))?;
                for phi in auts.iter().take(16) {
                    ensure(apply_automorphism(phi, &b) == sig(&apply_automorphism(phi, a), i), || {
                        format!("{key}: aut/braid")
                    })?;
                }
                for p in partners.iter().take(20) {
                    ensure(disjoint(&cc, a, p) == disjoint(&cc, &b, p), || format!("{key}: disjointness"))?;
                }
            }
        }
    }
    let mut counted = 0;
    let types: Vec<_> = enumerate_admissible_types().into_iter().filter(|t| t.len() <= 6).collect();
    for entry in catalog.realize_all().map_err(|e| e.to_string())? {
        let g = &entry.group;
        let key = &entry.definition.key;
        if g.order() <= 128 {
            ensure(g.check_axioms_exhaustive(), || format!("{key}: axioms"))?;
        }
        if g.order() <= 64 {
            let comms: HashSet<Elem> =
                g.elements().flat_map(|a| g.elements().map(move |b| g.commutator(a, b))).collect();
            let mut h: HashSet<Elem> = comms.clone();
            h.insert(0);
            loop {
                let next: HashSet<Elem> =
                    h.iter().flat_map(|&x| comms.iter().map(move |&c| g.mul(x, c))).chain(h.iter().copied()).collect();
                if next.len() == h.len() {
                    break;
                }
                h = next;
            }
            let inv = g.abelianization_invariants();
            let order: u64 = inv.iter().product();
            ensure(order == (g.order() / h.len()) as u64, || format!("{key}: |G/G'|"))?;
            let exponent = inv.last().copied().unwrap_or(1);
            ensure(g.elements().all(|x| h.contains(&g.pow(x, exponent as i64))), || {
                format!("{key}: exponent of G/G'")
            })?;
            let cc = conjugacy_classes(g);
            for t in &types {
                let n = count_systems(g, &cc, &t.ty);
                ensure(n as usize == enumerate_systems(g, &cc, &t.ty).len(), || format!("{key} {}: count", t.ty))?;
                counted += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 120.0, || format!("took {secs:.0}s"))?;
    Ok(format!("braid, Aut, sigma and disjointness checks; axioms up to 128; abelianizations up to 64; {counted} count/enumerate pairs; {secs:.1}s"))
}

fn criterion_invariants() -> Outcome {
    let rows = read_csv(GOLDEN_CSV.as_bytes()).map_err(|e| e.to_string())?;
    for r in &rows {
        let inv = surface_invariants(r.order, &r.t1, &r.t2).map_err(|e| format!("{r}: {e}"))?;
        ensure((inv.k_squared, inv.euler, inv.chi) == (16, 8, 2), || format!("{r}"))?;
        ensure(
            r.d == ClassificationRow::dimension(&r.t1, &r.t2) && r.d as usize == r.t1.len() + r.t2.len() - 6,
            || format!("{r}: d"),
        )?;
    }
    let d_of = |a: &str, b: &str| {
        rows.iter().find(|r| (r.t1 == ty(a) && r.t2 == ty(b)) || (r.t1 == ty(b) && r.t2 == ty(a))).map(|r| r.d)
    };
    ensure(d_of("[2,3,14]", "[4^3]") == Some(0) && d_of("[2^6]", "[2^6]") == Some(6), || "dimension examples".into())?;
    Ok(format!("{} rows give (K^2, e, chi) = (16, 8, 2) and d = l(T1) + l(T2) - 6", rows.len()))
}

/// Written to the process stdout directly so the lines show up even when
/// the test harness captures output.
fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("1 type enumeration", criterion_types),
        ("2 full table", criterion_table),
        ("3 S4 x Z2 restricted sets", criterion_s4xc2),
        ("4 nonexistence cases", criterion_nonexistence),
        ("5 factor exchange", criterion_exchange),
        ("6 exceptional report", criterion_exceptional),
        ("7 property suite", criterion_properties),
        ("8 invariant arithmetic", criterion_invariants),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(msg) => report(&format!("PASS  criterion {name}: {msg} [{secs:.1}s]")),
            Err(msg) => {
                failed += 1;
                report(&format!("FAIL  criterion {name}: {msg} [{secs:.1}s]"));
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
