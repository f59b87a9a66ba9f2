use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::typesys::{alpha, TypeTuple};

#[derive(Debug, Error)]
pub enum TableError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}: bad type `{text}`")]
    BadType { row: usize, text: String },
    #[error("row {row}: {message}")]
    Invariant { row: usize, message: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvariantError {
    #[error("2|G| = {twice_order} but α(T1)α(T2) = {product}")]
    OrderMismatch { twice_order: u64, product: u64 },
    #[error("type {0} is not admissible")]
    NotAdmissible(String),
    #[error("unexpected invariants K²={k_squared}, e={euler}, χ={chi}")]
    Unexpected { k_squared: i64, euler: i64, chi: i64 },
}

/// Numerical invariants of `S = (C1 × C2)/G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub chi: i64,
    pub k_squared: i64,
    pub euler: i64,
    pub q: i64,
    pub p_g: i64,
}

/// `K² = 8(g1−1)(g2−1)/|G|`, `e = K²/2`, `χ = K²/8`, with `q = 0` since
/// both quotient curves are rational. Fails unless the result is
/// `(16, 8, 2)`.
pub fn surface_invariants(order: u64, t1: &TypeTuple, t2: &TypeTuple) -> Result<SurfaceInvariants, InvariantError> {
    let a1 = alpha(t1).map_err(|_| InvariantError::NotAdmissible(t1.to_string()))? as u64;
    let a2 = alpha(t2).map_err(|_| InvariantError::NotAdmissible(t2.to_string()))? as u64;
    if 2 * order != a1 * a2 {
        return Err(InvariantError::OrderMismatch { twice_order: 2 * order, product: a1 * a2 });
    }
    let (g1, g2) = (a2 + 1, a1 + 1);
    let k_squared = (8 * (g1 - 1) * (g2 - 1) / order) as i64;
    let inv = SurfaceInvariants { chi: k_squared / 8, k_squared, euler: k_squared / 2, q: 0, p_g: k_squared / 8 - 1 };
    if (inv.k_squared, inv.euler, inv.chi) != (16, 8, 2) {
        return Err(InvariantError::Unexpected { k_squared: inv.k_squared, euler: inv.euler, chi: inv.chi });
    }
    Ok(inv)
}

/// One line of the classification table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub g1: u64,
    pub g2: u64,
    pub group_name: String,
    pub order: u64,
    pub id: u32,
    pub t1: TypeTuple,
    pub t2: TypeTuple,
    pub n: u64,
    pub d: u64,
}

impl ClassificationRow {
    pub fn dimension(t1: &TypeTuple, t2: &TypeTuple) -> u64 {
        (t1.len() + t2.len() - 6) as u64
    }

    /// Checks the genus, order, dimension and invariant relations.
    pub fn check(&self) -> Result<(), String> {
        let a1 = alpha(&self.t1).map_err(|e| e.to_string())? as u64;
        let a2 = alpha(&self.t2).map_err(|e| e.to_string())? as u64;
        if self.g1 != a2 + 1 || self.g2 != a1 + 1 {
            return Err(format!("genera ({}, {}) do not match α = ({a1}, {a2})", self.g1, self.g2));
        }
        if 2 * self.order != (self.g1 - 1) * (self.g2 - 1) {
            return Err(format!("2·{} != ({}−1)({}−1)", self.order, self.g1, self.g2));
        }
        if self.d != Self::dimension(&self.t1, &self.t2) {
            return Err(format!("d = {} but l(T1)+l(T2)−6 = {}", self.d, Self::dimension(&self.t1, &self.t2)));
        }
        if self.n == 0 {
            return Err("n = 0".into());
        }
        surface_invariants(self.order, &self.t1, &self.t2).map_err(|e| e.to_string())?;
        Ok(())
    }

    /// The same row with the two factors exchanged.
    pub fn exchanged(&self) -> Self {
        ClassificationRow { g1: self.g2, g2: self.g1, t1: self.t2.clone(), t2: self.t1.clone(), ..self.clone() }
    }

    /// Orientation with `t1 ≤ t2`.
    pub fn canonical(&self) -> Self {
        if self.t1 <= self.t2 {
            self.clone()
        } else {
            self.exchanged()
        }
    }

    /// Descending order, then id, then types.
    pub fn table_cmp(a: &Self, b: &Self) -> std::cmp::Ordering {
        b.order.cmp(&a.order).then(a.id.cmp(&b.id)).then_with(|| (&a.t1, &a.t2).cmp(&(&b.t1, &b.t2)))
    }
}

impl fmt::Display for ClassificationRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>3} {:>3}  {:<22} <{},{}>  {:<12} {:<12} n={} d={}",
            self.g1, self.g2, self.group_name, self.order, self.id, self.t1, self.t2, self.n, self.d
        )
    }
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    g1: u64,
    g2: u64,
    group_name: String,
    order: u64,
    id: u32,
    t1: String,
    t2: String,
    n: u64,
    d: u64,
}

pub const CSV_HEADER: &str = "g1,g2,group_name,order,id,t1,t2,n,d";

pub fn write_csv<W: Write>(rows: &[ClassificationRow], out: W) -> Result<(), TableError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(CsvRow {
            g1: r.g1,
            g2: r.g2,
            group_name: r.group_name.clone(),
            order: r.order,
            id: r.id,
            t1: r.t1.to_string(),
            t2: r.t2.to_string(),
            n: r.n,
            d: r.d,
        })?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn to_csv_string(rows: &[ClassificationRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ClassificationRow>, TableError> {
    let mut rd = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, rec) in rd.deserialize::<CsvRow>().enumerate() {
        let r = rec?;
        let parse =
            |s: &str| s.parse::<TypeTuple>().map_err(|_| TableError::BadType { row: i + 1, text: s.to_string() });
        let row = ClassificationRow {
            g1: r.g1,
            g2: r.g2,
            group_name: r.group_name,
            order: r.order,
            id: r.id,
            t1: parse(&r.t1)?,
            t2: parse(&r.t2)?,
            n: r.n,
            d: r.d,
        };
        row.check().map_err(|message| TableError::Invariant { row: i + 1, message })?;
        out.push(row);
    }
    Ok(out)
}

/// The committed reference table, in the orientation it was published in.
pub const GOLDEN_CSV: &str = include_str!("../../data/golden_table.csv");

pub fn golden_rows() -> Vec<ClassificationRow> {
    read_csv(GOLDEN_CSV.as_bytes()).expect("golden table is well formed")
}

/// A row-level difference between a computed table and the reference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Mismatch {
    Missing(ClassificationRow),
    Unexpected(ClassificationRow),
    /// Same group and types, different `n` or `d` or name.
    Differs {
        expected: ClassificationRow,
        computed: ClassificationRow,
    },
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::Missing(r) => write!(f, "missing:    {r}"),
            Mismatch::Unexpected(r) => write!(f, "unexpected: {r}"),
            Mismatch::Differs { expected, computed } => write!(f, "expected:   {expected}\n  computed: {computed}"),
        }
    }
}

/// Compares two tables up to the orientation of each row and row order.
/// Group names are compared too.
pub fn compare_tables(expected: &[ClassificationRow], computed: &[ClassificationRow]) -> Vec<Mismatch> {
    type Key = (u64, u32, TypeTuple, TypeTuple);
    let key = |r: &ClassificationRow| -> Key {
        let c = r.canonical();
        (c.order, c.id, c.t1, c.t2)
    };
    let mut exp: Vec<(Key, ClassificationRow)> = expected.iter().map(|r| (key(r), r.canonical())).collect();
    let mut got: Vec<(Key, ClassificationRow)> = computed.iter().map(|r| (key(r), r.canonical())).collect();
    exp.sort_by(|a, b| a.0.cmp(&b.0));
    got.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < exp.len() || j < got.len() {
        match (exp.get(i), got.get(j)) {
            (Some(e), Some(g)) if e.0 == g.0 => {
                if e.1 != g.1 {
                    out.push(Mismatch::Differs { expected: e.1.clone(), computed: g.1.clone() });
                }
                i += 1;
                j += 1;
            }
            (Some(e), Some(g)) if e.0 < g.0 => {
                out.push(Mismatch::Missing(e.1.clone()));
                i += 1;
            }
            (Some(_), Some(g)) => {
                out.push(Mismatch::Unexpected(g.1.clone()));
                j += 1;
            }
            (Some(e), None) => {
                out.push(Mismatch::Missing(e.1.clone()));
                i += 1;
            }
            (None, Some(g)) => {
                out.push(Mismatch::Unexpected(g.1.clone()));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> TypeTuple {
        s.parse().unwrap()
    }

    #[test]
    fn invariants_of_known_rows() {
        let inv = surface_invariants(60, &ty("[3,3,5]"), &ty("[2^6]")).unwrap();
        assert_eq!((inv.k_squared, inv.euler, inv.chi, inv.q, inv.p_g), (16, 8, 2, 0, 1));
        assert!(surface_invariants(8, &ty("[2^6]"), &ty("[2^6]")).is_ok());
        assert!(matches!(surface_invariants(9, &ty("[2^6]"), &ty("[2^6]")), Err(InvariantError::OrderMismatch { .. })));
    }

    #[test]
    fn csv_round_trip() {
        let rows = golden_rows();
        let text = to_csv_string(&rows);
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(read_csv(text.as_bytes()).unwrap(), rows);
    }

    #[test]
    fn comparison_ignores_orientation() {
        let rows = golden_rows();
        let flipped: Vec<_> = rows.iter().rev().map(ClassificationRow::exchanged).collect();
        assert!(compare_tables(&rows, &flipped).is_empty());
        let mut changed = rows.clone();
        changed[0].n += 1;
        changed.pop();
        let diff = compare_tables(&rows, &changed);
        assert_eq!(diff.len(), 2);
    }
}
