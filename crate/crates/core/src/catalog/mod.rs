//! Group definitions: a small text format, realization through the group
//! kernel, and fingerprint validation.

mod parse;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::groups::{
    automorphism_group_capped, conjugacy_classes, direct_product, from_permutation_generators, from_power_commutator,
    from_unitriangular, semidirect_product, Elem, FiniteGroup, GroupError, PcPresentation, Permutation, Relator,
    SemidirectAction, DEFAULT_ORDER_CAP,
};

/// The bundled catalog source.
pub const DEFAULT_CATALOG: &str = include_str!("../../data/catalog.txt");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("duplicate group key `{0}`")]
    DuplicateKey(String),
    #[error("group `{group}` refers to `{missing}`, which is not defined before it")]
    DanglingReference { group: String, missing: String },
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("group `{group}`: {source}")]
    Group { group: String, source: GroupError },
    #[error("group `{group}`: fingerprint mismatch in {field}: expected {expected}, computed {computed}")]
    FingerprintMismatch { group: String, field: &'static str, expected: String, computed: String },
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    Permutation {
        degree: usize,
        generators: Vec<Permutation>,
    },
    PowerCommutator(PcPresentation),
    Unitriangular {
        n: usize,
        q: u32,
    },
    /// Keys of earlier entries.
    Direct(Vec<String>),
    /// `actions[i][j]` is the image of generator `j` of `normal` under
    /// generator `i` of `acting`, as a word in the generators of `normal`.
    Semidirect {
        normal: String,
        acting: String,
        actions: Vec<Vec<Relator>>,
    },
}

/// Conjugacy-invariant summary used to pin down a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub order: usize,
    pub abelian: Vec<u64>,
    pub classes: usize,
    pub orders: BTreeMap<u32, usize>,
    pub aut: Option<usize>,
}

impl Fingerprint {
    /// Everything except `aut`, which is left unset.
    pub fn compute(g: &FiniteGroup) -> Self {
        Fingerprint {
            order: g.order(),
            abelian: g.abelianization_invariants(),
            classes: conjugacy_classes(g).len(),
            orders: g.order_histogram(),
            aut: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDefinition {
    pub key: String,
    pub name: String,
    pub claimed_id: Option<(u32, u32)>,
    pub construction: Construction,
    pub fingerprint: Fingerprint,
}

impl GroupDefinition {
    /// `<a,b>` when an id is claimed, else the key.
    pub fn label(&self) -> String {
        match self.claimed_id {
            Some((a, b)) => format!("<{a},{b}>"),
            None => self.key.clone(),
        }
    }

    fn references(&self) -> Vec<&str> {
        match &self.construction {
            Construction::Direct(f) => f.iter().map(String::as_str).collect(),
            Construction::Semidirect { normal, acting, .. } => vec![normal, acting],
            _ => Vec::new(),
        }
    }
}

/// Parses a single definition block.
pub fn parse_definition(text: &str) -> Result<GroupDefinition, CatalogError> {
    let mut defs = parse::parse_definitions(text)?;
    if defs.len() != 1 {
        return Err(CatalogError::Syntax {
            line: 1,
            column: 1,
            message: format!("expected one group block, found {}", defs.len()),
        });
    }
    Ok(defs.pop().unwrap())
}

/// A realized catalog entry.
#[derive(Clone, Debug)]
pub struct CatalogGroup {
    pub definition: GroupDefinition,
    pub group: Arc<FiniteGroup>,
}

/// An ordered list of definitions; references must point backwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    definitions: Vec<GroupDefinition>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        Self::from_definitions(parse::parse_definitions(text)?)
    }

    pub fn from_definitions(definitions: Vec<GroupDefinition>) -> Result<Self, CatalogError> {
        let mut seen = HashMap::new();
        for d in &definitions {
            for r in d.references() {
                if !seen.contains_key(r) {
                    return Err(CatalogError::DanglingReference { group: d.key.clone(), missing: r.to_string() });
                }
            }
            if seen.insert(d.key.as_str(), ()).is_some() {
                return Err(CatalogError::DuplicateKey(d.key.clone()));
            }
        }
        Ok(Catalog { definitions })
    }

    pub fn bundled() -> Self {
        Self::parse(DEFAULT_CATALOG).expect("bundled catalog parses")
    }

    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CatalogError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn empty() -> Self {
        Catalog { definitions: Vec::new() }
    }

    pub fn definitions(&self) -> &[GroupDefinition] {
        &self.definitions
    }

    pub fn get(&self, key: &str) -> Option<&GroupDefinition> {
        self.definitions.iter().find(|d| d.key == key)
    }

    /// Finds an entry by key, by `a,b` / `<a,b>` id, or by name.
    pub fn lookup(&self, query: &str) -> Option<&GroupDefinition> {
        let q = query.trim().trim_start_matches('<').trim_end_matches('>');
        let id = q.split_once(',').and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
        self.definitions
            .iter()
            .find(|d| d.key == q || (id.is_some() && d.claimed_id == id))
            .or_else(|| self.definitions.iter().find(|d| d.name == query.trim()))
    }

    /// Realizes every entry in order, checking fingerprints (without `aut`).
    pub fn realize_all(&self) -> Result<Vec<CatalogGroup>, CatalogError> {
        let mut done: HashMap<String, Arc<FiniteGroup>> = HashMap::new();
        let mut out = Vec::new();
        for d in &self.definitions {
            let g = Arc::new(build(d, &done)?);
            check_fingerprint(d, &g, false)?;
            done.insert(d.key.clone(), g.clone());
            out.push(CatalogGroup { definition: d.clone(), group: g });
        }
        Ok(out)
    }

    /// Realizes one entry and the entries it depends on.
    pub fn realize(&self, key: &str) -> Result<CatalogGroup, CatalogError> {
        let target = self.get(key).ok_or_else(|| CatalogError::UnknownGroup(key.to_string()))?;
        let mut needed = vec![key.to_string()];
        let mut i = 0;
        while i < needed.len() {
            let d = self.get(&needed[i]).ok_or_else(|| CatalogError::UnknownGroup(needed[i].clone()))?;
            for r in d.references() {
                if !needed.iter().any(|n| n == r) {
                    needed.push(r.to_string());
                }
            }
            i += 1;
        }
        let mut done = HashMap::new();
        for d in self.definitions.iter().filter(|d| needed.contains(&d.key)) {
            let g = build(d, &done)?;
            check_fingerprint(d, &g, false)?;
            done.insert(d.key.clone(), Arc::new(g));
        }
        Ok(CatalogGroup { definition: target.clone(), group: done.remove(key).unwrap() })
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.definitions.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

fn build(d: &GroupDefinition, done: &HashMap<String, Arc<FiniteGroup>>) -> Result<FiniteGroup, CatalogError> {
    let wrap = |source| CatalogError::Group { group: d.key.clone(), source };
    let get = |k: &String| {
        done.get(k).cloned().ok_or_else(|| CatalogError::DanglingReference { group: d.key.clone(), missing: k.clone() })
    };
    match &d.construction {
        Construction::Permutation { degree, generators } => {
            from_permutation_generators(*degree, generators, DEFAULT_ORDER_CAP).map_err(wrap)
        }
        Construction::PowerCommutator(p) => from_power_commutator(p).map_err(wrap),
        Construction::Unitriangular { n, q } => from_unitriangular(*n, *q).map_err(wrap),
        Construction::Direct(factors) => {
            let mut acc = (*get(&factors[0])?).clone();
            for f in &factors[1..] {
                acc = direct_product(&acc, &*get(f)?).map_err(wrap)?;
            }
            Ok(acc)
        }
        Construction::Semidirect { normal, acting, actions } => {
            let n = get(normal)?;
            let h = get(acting)?;
            let images = actions
                .iter()
                .map(|words| words.iter().map(|w| evaluate_word(&n, w)).collect::<Result<Vec<Elem>, String>>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|m| wrap(GroupError::BadAction(m)))?;
            semidirect_product(&n, &h, &SemidirectAction { images }).map_err(wrap)
        }
    }
}

/// Evaluates a word in the stored generators of `g`.
pub fn evaluate_word(g: &FiniteGroup, w: &[i32]) -> Result<Elem, String> {
    let mut x = g.identity();
    for &l in w {
        let s = *g
            .generators()
            .get(l.unsigned_abs() as usize - 1)
            .ok_or_else(|| format!("generator g{} out of range", l.unsigned_abs()))?;
        x = g.mul(x, if l < 0 { g.inv(s) } else { s });
    }
    Ok(x)
}

fn check_fingerprint(d: &GroupDefinition, g: &FiniteGroup, with_aut: bool) -> Result<(), CatalogError> {
    let fp = &d.fingerprint;
    let mismatch = |field, expected: String, computed: String| {
        Err(CatalogError::FingerprintMismatch { group: d.key.clone(), field, expected, computed })
    };
    if g.order() != fp.order {
        return mismatch("order", fp.order.to_string(), g.order().to_string());
    }
    if let Some((a, _)) = d.claimed_id {
        if a as usize != g.order() {
            return mismatch("claimed id order", a.to_string(), g.order().to_string());
        }
    }
    let got = Fingerprint::compute(g);
    if got.abelian != fp.abelian {
        return mismatch("abelian", format!("{:?}", fp.abelian), format!("{:?}", got.abelian));
    }
    if got.classes != fp.classes {
        return mismatch("classes", fp.classes.to_string(), got.classes.to_string());
    }
    if got.orders != fp.orders {
        return mismatch("orders", format!("{:?}", fp.orders), format!("{:?}", got.orders));
    }
    if with_aut {
        if let Some(expected) = fp.aut {
            let n = automorphism_group_capped(g, g.order().max(512))
                .map_err(|source| CatalogError::Group { group: d.key.clone(), source })?
                .len();
            if n != expected {
                return mismatch("aut", expected.to_string(), n.to_string());
            }
        }
    }
    Ok(())
}

/// Full fingerprint check including `|Aut(G)|` when recorded.
pub fn validate_with_automorphisms(entry: &CatalogGroup) -> Result<(), CatalogError> {
    check_fingerprint(&entry.definition, &entry.group, true)
}
