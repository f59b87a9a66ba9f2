//! Candidate triples above the catalog range that need a separate
//! argument, with the abelianization data that argument starts from.

use std::fmt;

use serde::Serialize;

use crate::typesys::{candidate_triples_with, polygonal_abelianization, TripleFilter, TypeTuple};

/// Orders above this are out of reach of exhaustive group scans.
pub const EXCEPTIONAL_ORDER: u64 = 2000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalRow {
    pub order: u64,
    pub t1: TypeTuple,
    pub t2: TypeTuple,
    pub ab1: Vec<u64>,
    pub ab2: Vec<u64>,
    /// Invariant factors of the largest common quotient of both
    /// abelianizations; `G^ab` is a quotient of it.
    pub common_ab: Vec<u64>,
    /// `common_ab` is trivial, so any such `G` is perfect; those orders are
    /// settled by the perfect-groups library, which is cited, not rerun.
    pub forces_perfect: bool,
    pub chain: Option<DerivedChain>,
}

/// A step-by-step reduction through the derived series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivedChain {
    pub steps: Vec<ChainStep>,
    /// The final fact the argument rests on, not checked here.
    pub cited_not_verified: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    /// Type of the polygonal group the current subgroup is a quotient of.
    pub polygonal: TypeTuple,
    /// Its abelianization, computed by Smith normal form.
    pub abelianization: Vec<u64>,
    /// Order of the next derived subgroup.
    pub derived_order: u64,
    /// Type of the polygonal group isomorphic to the commutator subgroup.
    pub derived_polygonal: TypeTuple,
    /// Cited isomorphism for the commutator subgroup, not checked here.
    pub cited: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalReport {
    pub rows: Vec<ExceptionalRow>,
}

fn is_237(t: &TypeTuple) -> bool {
    t.orders() == [2, 3, 7]
}

/// Largest common quotient of two finite abelian groups given by
/// invariant factors: align both lists at the largest factor and take gcds.
pub fn common_quotient(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> =
        a.iter().rev().zip(b.iter().rev()).map(|(&x, &y)| num_integer::gcd(x, y)).filter(|&g| g > 1).collect();
    out.reverse();
    out
}

/// Triples of order above 2000 in which neither type is `[2,3,7]` (those
/// force a perfect group), largest order first.
pub fn exceptional_report(filter: &TripleFilter) -> ExceptionalReport {
    let mut rows: Vec<ExceptionalRow> = candidate_triples_with(filter)
        .into_iter()
        .filter(|t| t.group_order > EXCEPTIONAL_ORDER && !is_237(&t.t1.ty) && !is_237(&t.t2.ty))
        .map(|t| {
            let ab1 = polygonal_abelianization(&t.t1.ty);
            let ab2 = polygonal_abelianization(&t.t2.ty);
            let common_ab = common_quotient(&ab1, &ab2);
            let chain = (t.group_order == 4608 && t.t1.ty.orders() == [2, 3, 8] && t.t2.ty == t.t1.ty)
                .then(|| chain_4608(t.group_order));
            let forces_perfect = common_ab.is_empty();
            ExceptionalRow {
                order: t.group_order,
                t1: t.t1.ty,
                t2: t.t2.ty,
                ab1,
                ab2,
                common_ab,
                forces_perfect,
                chain,
            }
        })
        .collect();
    rows.sort_by(|a, b| b.order.cmp(&a.order).then_with(|| (&a.t1, &a.t2).cmp(&(&b.t1, &b.t2))));
    ExceptionalReport { rows }
}

fn paren(t: &TypeTuple) -> String {
    let e = t.expanded();
    format!("({})", &e[1..e.len() - 1])
}

fn ty(v: &[u32]) -> TypeTuple {
    TypeTuple::new(v.to_vec()).expect("valid type")
}

/// `G` is a non-perfect quotient of T(2,3,8), `G'` of T(3,3,4), `G''` of T(4,4,4).
fn chain_4608(order: u64) -> DerivedChain {
    let mut steps = Vec::new();
    let mut current = order;
    for (from, to) in [(ty(&[2, 3, 8]), ty(&[3, 3, 4])), (ty(&[3, 3, 4]), ty(&[4, 4, 4]))] {
        let ab = polygonal_abelianization(&from);
        let size: u64 = ab.iter().product();
        current /= size;
        steps.push(ChainStep {
            cited: format!("T{}' ≅ T{}", paren(&from), paren(&to)),
            polygonal: from,
            abelianization: ab,
            derived_order: current,
            derived_polygonal: to,
        });
    }
    DerivedChain { steps, cited_not_verified: format!("no group of order {current} is a quotient of T(4,4,4)") }
}

impl fmt::Display for ExceptionalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[u64]| {
            if v.is_empty() {
                "1".to_string()
            } else {
                v.iter().map(|m| format!("Z{m}")).collect::<Vec<_>>().join(" x ")
            }
        };
        for r in &self.rows {
            writeln!(
                f,
                "{:>5}  {:<10} {:<10}  ab: {} | {}  common: {}",
                r.order,
                r.t1.to_string(),
                r.t2.to_string(),
                show(&r.ab1),
                show(&r.ab2),
                show(&r.common_ab)
            )?;
            if r.forces_perfect {
                writeln!(f, "       G would be perfect (perfect-groups library, cited)")?;
            }
            if let Some(c) = &r.chain {
                for s in &c.steps {
                    writeln!(
                        f,
                        "       T{}^ab = {} (computed)  ->  |derived| = {}, {} (cited)",
                        paren(&s.polygonal),
                        show(&s.abelianization),
                        s.derived_order,
                        s.cited
                    )?;
                }
                writeln!(f, "       cited, not verified: {}", c.cited_not_verified)?;
            }
        }
        Ok(())
    }
}
