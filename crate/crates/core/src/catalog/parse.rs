//! The catalog file grammar.
//!
//! ```text
//! # comment
//! group KEY
//!   name <free text>
//!   id <order> <number>
//!   perm <degree>: <cycles>, <cycles>, ...
//!   pc <k>: <relation>; <relation>; ...
//!   unitriangular <n> <q>
//!   product: A x B [x C ...]
//!   semidirect: N by H
//!   act <i>: <word> <word> ...
//!   fingerprint order=<n> abelian=[..] classes=<n> orders=[o:c,..] [aut=<n>]
//! end
//! ```
//!
//! Exactly one construction line per block. `act i` gives the images of the
//! generators of `N` under generator `i` of `H`, as words in `g1 … gk` with
//! `*`, optional `^e` (negative allowed) and `1` for the identity.

use std::collections::BTreeMap;
use std::fmt;

use crate::groups::{parse_cycles, PcPresentation, Permutation, Relator};

use super::{CatalogError, Construction, Fingerprint, GroupDefinition};

struct Cursor<'a> {
    line: usize,
    text: &'a str,
}

impl Cursor<'_> {
    /// 1-based column of `part`, which must be a subslice of the line.
    fn col(&self, part: &str) -> usize {
        let off = part.as_ptr() as usize - self.text.as_ptr() as usize;
        self.text[..off.min(self.text.len())].chars().count() + 1
    }

    fn err(&self, part: &str, msg: impl Into<String>) -> CatalogError {
        CatalogError::Syntax { line: self.line, column: self.col(part), message: msg.into() }
    }
}

#[derive(Default)]
struct Block {
    key: String,
    line: usize,
    name: Option<String>,
    claimed_id: Option<(u32, u32)>,
    construction: Option<Construction>,
    actions: BTreeMap<usize, Vec<Relator>>,
    fingerprint: Option<Fingerprint>,
}

pub(super) fn parse_definitions(text: &str) -> Result<Vec<GroupDefinition>, CatalogError> {
    let mut out = Vec::new();
    let mut cur: Option<Block> = None;
    for (i, raw) in text.lines().enumerate() {
        let c = Cursor { line: i + 1, text: raw };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (head, rest) = match body.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (body, ""),
        };
        let (kw, after_colon) = match head.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (head, None),
        };
        if kw == "group" {
            if cur.is_some() {
                return Err(c.err(head, "`group` inside an open block"));
            }
            if rest.is_empty() || rest.contains(char::is_whitespace) {
                return Err(c.err(body, "expected `group KEY`"));
            }
            cur = Some(Block { key: rest.to_string(), line: c.line, ..Block::default() });
            continue;
        }
        let Some(b) = cur.as_mut() else {
            return Err(c.err(head, format!("`{kw}` outside a group block")));
        };
        match kw {
            "end" => {
                let b = cur.take().unwrap();
                out.push(finish(b, &c, head)?);
            }
            "name" => b.name = Some(rest.to_string()),
            "id" => {
                let nums = parse_ints(&c, rest, 2)?;
                b.claimed_id = Some((nums[0] as u32, nums[1] as u32));
            }
            "perm" | "pc" => {
                let (arg, list) = construction_args(&c, body, head, after_colon, rest)?;
                let n: usize = arg.trim().parse().map_err(|_| c.err(arg, "expected an integer"))?;
                let con = if kw == "perm" {
                    let gens = split_top_level(list)
                        .into_iter()
                        .map(|p| parse_cycles(p, n).map_err(|e| c.err(p, e.to_string())))
                        .collect::<Result<Vec<_>, _>>()?;
                    Construction::Permutation { degree: n, generators: gens }
                } else {
                    let pres = PcPresentation::parse(n, list).map_err(|e| c.err(list, e))?;
                    Construction::PowerCommutator(pres)
                };
                set_construction(b, &c, head, con)?;
            }
            "unitriangular" => {
                let nums = parse_ints(&c, rest, 2)?;
                set_construction(b, &c, head, Construction::Unitriangular { n: nums[0] as usize, q: nums[1] as u32 })?;
            }
            "product" => {
                let list = after_colon
                    .filter(|a| a.is_empty())
                    .map(|_| rest)
                    .ok_or_else(|| c.err(head, "expected `product:`"))?;
                let factors: Vec<&str> = list.split(" x ").map(str::trim).collect();
                if factors.len() < 2 || factors.iter().any(|f| f.is_empty() || f.contains(char::is_whitespace)) {
                    return Err(c.err(list, "expected `A x B [x C ...]`"));
                }
                set_construction(b, &c, head, Construction::Direct(factors.iter().map(|s| s.to_string()).collect()))?;
            }
            "semidirect" => {
                let list = after_colon
                    .filter(|a| a.is_empty())
                    .map(|_| rest)
                    .ok_or_else(|| c.err(head, "expected `semidirect:`"))?;
                let parts: Vec<&str> = list.split_whitespace().collect();
                if parts.len() != 3 || parts[1] != "by" {
                    return Err(c.err(list, "expected `semidirect: N by H`"));
                }
                let con = Construction::Semidirect {
                    normal: parts[0].to_string(),
                    acting: parts[2].to_string(),
                    actions: Vec::new(),
                };
                set_construction(b, &c, head, con)?;
            }
            "act" => {
                let (arg, list) = construction_args(&c, body, head, after_colon, rest)?;
                let i: usize = arg.trim().parse().map_err(|_| c.err(arg, "expected a generator number"))?;
                if i == 0 {
                    return Err(c.err(arg, "generator numbers start at 1"));
                }
                let words = list
                    .split_whitespace()
                    .map(|w| parse_word(w).map_err(|m| c.err(w, m)))
                    .collect::<Result<Vec<_>, _>>()?;
                if b.actions.insert(i, words).is_some() {
                    return Err(c.err(arg, format!("duplicate action for generator {i}")));
                }
            }
            "fingerprint" => b.fingerprint = Some(parse_fingerprint(&c, rest)?),
            _ => return Err(c.err(head, format!("unknown keyword `{kw}`"))),
        }
    }
    if let Some(b) = cur {
        return Err(CatalogError::Syntax {
            line: b.line,
            column: 1,
            message: format!("group `{}` has no `end`", b.key),
        });
    }
    Ok(out)
}

/// Splits `perm 7: list` / `perm 7 : list` / `act 1: list` into `(7, list)`.
fn construction_args<'a>(
    c: &Cursor,
    body: &'a str,
    head: &'a str,
    after_colon: Option<&'a str>,
    rest: &'a str,
) -> Result<(&'a str, &'a str), CatalogError> {
    if after_colon.is_some() {
        return Err(c.err(head, "expected an argument before `:`"));
    }
    let (arg, list) = rest.split_once(':').ok_or_else(|| c.err(body, "missing `:`"))?;
    Ok((arg, list.trim()))
}

fn set_construction(b: &mut Block, c: &Cursor, at: &str, con: Construction) -> Result<(), CatalogError> {
    if b.construction.is_some() {
        return Err(c.err(at, "a group block takes exactly one construction"));
    }
    b.construction = Some(con);
    Ok(())
}

fn finish(b: Block, c: &Cursor, at: &str) -> Result<GroupDefinition, CatalogError> {
    let mut construction = b.construction.ok_or_else(|| c.err(at, format!("group `{}` has no construction", b.key)))?;
    match &mut construction {
        Construction::Semidirect { actions, .. } => {
            let n = b.actions.len();
            if n == 0 || b.actions.keys().copied().ne(1..=n) {
                return Err(c.err(at, format!("group `{}`: `act` lines must be numbered 1..k", b.key)));
            }
            *actions = b.actions.into_values().collect();
        }
        _ if !b.actions.is_empty() => {
            return Err(c.err(at, format!("group `{}`: `act` only applies to semidirect products", b.key)));
        }
        _ => {}
    }
    let fingerprint = b.fingerprint.ok_or_else(|| c.err(at, format!("group `{}` has no fingerprint", b.key)))?;
    Ok(GroupDefinition {
        name: b.name.unwrap_or_else(|| b.key.clone()),
        key: b.key,
        claimed_id: b.claimed_id,
        construction,
        fingerprint,
    })
}

fn parse_ints(c: &Cursor, s: &str, n: usize) -> Result<Vec<u64>, CatalogError> {
    let v = s
        .split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| c.err(t, "expected an integer")))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != n {
        return Err(c.err(s, format!("expected {n} integers")));
    }
    Ok(v)
}

/// Splits at commas outside parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out
}

fn parse_word(w: &str) -> Result<Relator, String> {
    if w == "1" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for factor in w.split('*') {
        let (g, e) = match factor.split_once('^') {
            Some((g, e)) => (g, e.parse::<i32>().map_err(|_| format!("bad exponent in `{factor}`"))?),
            None => (factor, 1),
        };
        let k: i32 = g
            .strip_prefix('g')
            .and_then(|n| n.parse().ok())
            .filter(|&k| k >= 1)
            .ok_or_else(|| format!("expected a generator `gN`, found `{g}`"))?;
        let letter = if e < 0 { -k } else { k };
        out.extend(std::iter::repeat_n(letter, e.unsigned_abs() as usize));
    }
    Ok(out)
}

fn parse_fingerprint(c: &Cursor, s: &str) -> Result<Fingerprint, CatalogError> {
    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
    for tok in s.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| c.err(tok, "expected `field=value`"))?;
        if fields.insert(k, v).is_some() {
            return Err(c.err(tok, format!("duplicate field `{k}`")));
        }
    }
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| c.err(s, format!("missing field `{k}`")));
    let int = |v: &str| v.parse::<u64>().map_err(|_| c.err(v, "expected an integer"));
    fn list<'a>(c: &Cursor, v: &'a str) -> Result<Vec<&'a str>, CatalogError> {
        let inner =
            v.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(|| c.err(v, "expected `[...]`"))?;
        Ok(inner.split(',').map(str::trim).filter(|x| !x.is_empty()).collect())
    }
    let abelian = list(c, get("abelian")?)?.into_iter().map(int).collect::<Result<Vec<_>, _>>()?;
    let mut orders = BTreeMap::new();
    for pair in list(c, get("orders")?)? {
        let (o, n) = pair.split_once(':').ok_or_else(|| c.err(pair, "expected `order:count`"))?;
        orders.insert(int(o)? as u32, int(n)? as usize);
    }
    for k in fields.keys() {
        if !matches!(*k, "order" | "abelian" | "classes" | "orders" | "aut") {
            return Err(c.err(s, format!("unknown fingerprint field `{k}`")));
        }
    }
    Ok(Fingerprint {
        order: int(get("order")?)? as usize,
        abelian,
        classes: int(get("classes")?)? as usize,
        orders,
        aut: fields.get("aut").map(|v| int(v)).transpose()?.map(|a| a as usize),
    })
}

fn fmt_word(w: &[i32]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let (g, run) = (w[i].unsigned_abs(), (j - i) as i64);
        let e = if w[i] < 0 { -run } else { run };
        parts.push(if e == 1 { format!("g{g}") } else { format!("g{g}^{e}") });
        i = j;
    }
    parts.join("*")
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ab: Vec<String> = self.abelian.iter().map(u64::to_string).collect();
        let ord: Vec<String> = self.orders.iter().map(|(o, n)| format!("{o}:{n}")).collect();
        write!(
            f,
            "order={} abelian=[{}] classes={} orders=[{}]",
            self.order,
            ab.join(","),
            self.classes,
            ord.join(",")
        )?;
        if let Some(a) = self.aut {
            write!(f, " aut={a}")?;
        }
        Ok(())
    }
}

impl fmt::Display for GroupDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group {}", self.key)?;
        writeln!(f, "  name {}", self.name)?;
        if let Some((a, b)) = self.claimed_id {
            writeln!(f, "  id {a} {b}")?;
        }
        match &self.construction {
            Construction::Permutation { degree, generators } => {
                let gens: Vec<String> = generators.iter().map(Permutation::to_cycle_string).collect();
                writeln!(f, "  perm {degree}: {}", gens.join(", "))?;
            }
            Construction::PowerCommutator(p) => writeln!(f, "  pc {}: {p}", p.generator_count)?,
            Construction::Unitriangular { n, q } => writeln!(f, "  unitriangular {n} {q}")?,
            Construction::Direct(factors) => writeln!(f, "  product: {}", factors.join(" x "))?,
            Construction::Semidirect { normal, acting, actions } => {
                writeln!(f, "  semidirect: {normal} by {acting}")?;
                for (i, words) in actions.iter().enumerate() {
                    let ws: Vec<String> = words.iter().map(|w| fmt_word(w)).collect();
                    writeln!(f, "  act {}: {}", i + 1, ws.join(" "))?;
                }
            }
        }
        writeln!(f, "  fingerprint {}", self.fingerprint)?;
        write!(f, "end")
    }
}
