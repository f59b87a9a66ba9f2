use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;

use super::{FiniteGroup, GroupError, Relator, TABLE_LIMIT};

/// Collection steps allowed for a single product before giving up.
const STEP_LIMIT: usize = 1 << 22;

/// Largest order for which `(ab)s = a(bs)` is checked on all pairs and generators.
const ASSOCIATIVITY_CHECK_LIMIT: usize = 512;

/// A power-conjugate presentation on generators `g1 … gk` (0-based here).
///
/// Omitted power relations mean `g_i^2 = 1`; omitted conjugation relations
/// mean `g_i^{g_j} = g_i`. Conjugation is `g_i^{g_j} = g_j^-1 g_i g_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    pub generator_count: usize,
    /// Relative order of each generator (2 unless a power relation says otherwise).
    pub relative_orders: Vec<u32>,
    /// `i ↦ w` for `g_i^{p_i} = w`.
    pub powers: BTreeMap<usize, Vec<usize>>,
    /// `(i, j) ↦ w` for `g_i^{g_j} = w`, `j < i`.
    pub conjugates: BTreeMap<(usize, usize), Vec<usize>>,
}

impl PcPresentation {
    pub fn new(generator_count: usize) -> Self {
        PcPresentation {
            generator_count,
            relative_orders: vec![2; generator_count],
            powers: BTreeMap::new(),
            conjugates: BTreeMap::new(),
        }
    }

    /// Parses `g1^2=g4; g2^g1=g2*g3; ...` (1-based names, `1` for the empty word).
    pub fn parse(generator_count: usize, text: &str) -> Result<Self, String> {
        let mut p = PcPresentation::new(generator_count);
        for rel in text.split(';').map(str::trim).filter(|r| !r.is_empty()) {
            let (lhs, rhs) = rel.split_once('=').ok_or_else(|| format!("`{rel}`: missing `=`"))?;
            let (base, exp) = lhs.trim().split_once('^').ok_or_else(|| format!("`{rel}`: expected `gi^..`"))?;
            let i = parse_gen(base, generator_count)?;
            let word = parse_word(rhs, generator_count)?;
            let exp = exp.trim();
            if exp.starts_with('g') {
                let j = parse_gen(exp, generator_count)?;
                if j >= i {
                    return Err(format!("`{rel}`: conjugation needs j < i"));
                }
                if p.conjugates.insert((i, j), word).is_some() {
                    return Err(format!("`{rel}`: duplicate relation"));
                }
            } else {
                let e: u32 = exp.parse().map_err(|_| format!("`{rel}`: bad exponent"))?;
                if e < 2 {
                    return Err(format!("`{rel}`: relative order must be at least 2"));
                }
                p.relative_orders[i] = e;
                if p.powers.insert(i, word).is_some() {
                    return Err(format!("`{rel}`: duplicate relation"));
                }
            }
        }
        p.validate().map_err(|e| e.to_string())?;
        Ok(p)
    }

    /// Right-hand sides may only involve later generators.
    pub fn validate(&self) -> Result<(), GroupError> {
        let bad = |m: String| Err(GroupError::Inconsistent(m));
        for (&i, w) in &self.powers {
            if w.iter().any(|&g| g <= i) {
                return bad(format!("power word of g{} uses an earlier generator", i + 1));
            }
        }
        for (&(i, j), w) in &self.conjugates {
            if w.iter().any(|&g| g <= j) {
                return bad(format!("conjugate g{}^g{} uses g{} or earlier", i + 1, j + 1, j + 1));
            }
        }
        Ok(())
    }

    pub fn nominal_order(&self) -> u64 {
        self.relative_orders.iter().map(|&p| p as u64).product()
    }

    /// Defining relators in the letter convention of [`coset_enumerate`](super::coset_enumerate).
    pub fn relators(&self) -> Vec<Relator> {
        let inverse = |w: &[usize]| -> Vec<i32> { w.iter().rev().map(|&g| -(g as i32 + 1)).collect() };
        let mut out = Vec::new();
        for i in 0..self.generator_count {
            let mut r = vec![i as i32 + 1; self.relative_orders[i] as usize];
            r.extend(inverse(self.powers.get(&i).map_or(&[][..], Vec::as_slice)));
            out.push(r);
        }
        for i in 0..self.generator_count {
            for j in 0..i {
                let w = self.conj_word(i, j).map_or(vec![i], <[usize]>::to_vec);
                let mut r = vec![-(j as i32 + 1), i as i32 + 1, j as i32 + 1];
                r.extend(inverse(&w));
                out.push(r);
            }
        }
        out
    }

    fn conj_word(&self, i: usize, j: usize) -> Option<&[usize]> {
        self.conjugates.get(&(i, j)).map(Vec::as_slice)
    }

    /// Normal-form product of two exponent vectors.
    pub fn collect(&self, a: &[u8], b: &[u8]) -> Result<Vec<u8>, GroupError> {
        let mut v = a.to_vec();
        let mut steps = 0;
        for (i, &e) in b.iter().enumerate() {
            for _ in 0..e {
                self.mul_gen(&mut v, i, &mut steps)?;
            }
        }
        Ok(v)
    }

    /// `v ← v · g_j`. The collected tail `g_{j+1}^{e} …` is moved past `g_j`
    /// as its conjugate by `g_j`, then re-multiplied.
    fn mul_gen(&self, v: &mut [u8], j: usize, steps: &mut usize) -> Result<(), GroupError> {
        *steps += 1;
        if *steps > STEP_LIMIT {
            return Err(GroupError::Inconsistent("collection does not terminate".into()));
        }
        let tail: Vec<(usize, u8)> = (j + 1..v.len()).filter(|&i| v[i] > 0).map(|i| (i, v[i])).collect();
        for &(i, _) in &tail {
            v[i] = 0;
        }
        v[j] += 1;
        if v[j] as u32 == self.relative_orders[j] {
            v[j] = 0;
            if let Some(w) = self.powers.get(&j) {
                for &g in w {
                    self.mul_gen(v, g, steps)?;
                }
            }
        }
        for (i, e) in tail {
            for _ in 0..e {
                match self.conj_word(i, j) {
                    Some(w) => {
                        for &g in w {
                            self.mul_gen(v, g, steps)?;
                        }
                    }
                    None => self.mul_gen(v, i, steps)?,
                }
            }
        }
        Ok(())
    }
}

fn parse_gen(s: &str, k: usize) -> Result<usize, String> {
    let s = s.trim();
    let n: usize = s.strip_prefix('g').and_then(|d| d.parse().ok()).ok_or_else(|| format!("bad generator `{s}`"))?;
    if n == 0 || n > k {
        return Err(format!("generator `{s}` outside g1..g{k}"));
    }
    Ok(n - 1)
}

fn parse_word(s: &str, k: usize) -> Result<Vec<usize>, String> {
    let s = s.trim();
    if s == "1" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for factor in s.split('*') {
        let (g, e) = match factor.split_once('^') {
            Some((g, e)) => (g, e.trim().parse::<usize>().map_err(|_| format!("bad exponent in `{factor}`"))?),
            None => (factor, 1),
        };
        let g = parse_gen(g, k)?;
        out.extend(std::iter::repeat_n(g, e));
    }
    Ok(out)
}

fn fmt_word(w: &[usize]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|g| format!("g{}", g + 1)).collect::<Vec<_>>().join("*")
}

/// Relations in parse order: powers, then conjugates by `(i, j)`.
impl fmt::Display for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (&i, w) in &self.powers {
            parts.push(format!("g{}^{}={}", i + 1, self.relative_orders[i], fmt_word(w)));
        }
        for (i, &p) in self.relative_orders.iter().enumerate() {
            if p != 2 && !self.powers.contains_key(&i) {
                parts.push(format!("g{}^{}=1", i + 1, p));
            }
        }
        for (&(i, j), w) in &self.conjugates {
            parts.push(format!("g{}^g{}={}", i + 1, j + 1, fmt_word(w)));
        }
        write!(f, "{}", parts.join("; "))
    }
}

/// Realizes a pc presentation by collection.
///
/// Fails if collection runs away, if the closure does not reach the nominal
/// order, or (for orders up to 512) if collection is not associative, which
/// happens exactly when the presentation is not consistent.
pub fn from_power_commutator(pres: &PcPresentation) -> Result<FiniteGroup, GroupError> {
    from_power_commutator_with_vectors(pres).map(|(g, _)| g)
}

/// As [`from_power_commutator`], also returning the exponent vector of each id.
pub fn from_power_commutator_with_vectors(pres: &PcPresentation) -> Result<(FiniteGroup, Vec<Vec<u8>>), GroupError> {
    pres.validate()?;
    let k = pres.generator_count;
    let nominal = pres.nominal_order();
    if nominal > TABLE_LIMIT as u64 {
        return Err(GroupError::OrderCap { cap: TABLE_LIMIT });
    }
    let failure: RefCell<Option<GroupError>> = RefCell::new(None);
    let gens: Vec<Vec<u8>> = (0..k)
        .map(|i| {
            let mut v = vec![0u8; k];
            v[i] = 1;
            v
        })
        .collect();
    let mul = |a: &Vec<u8>, b: &Vec<u8>| match pres.collect(a, b) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            vec![0u8; k]
        }
    };
    let (g, vectors) = FiniteGroup::from_closure_with_elements(vec![0u8; k], &gens, mul, TABLE_LIMIT)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if g.order() as u64 != nominal {
        return Err(GroupError::Inconsistent(format!("closure has order {}, expected {nominal}", g.order())));
    }
    if g.elements().any(|a| g.elem_order(a) == 0) {
        return Err(GroupError::Inconsistent("product is not a group law".into()));
    }
    if g.order() <= ASSOCIATIVITY_CHECK_LIMIT {
        let gens_v = &gens;
        for a in &vectors {
            for b in &vectors {
                let ab = pres.collect(a, b)?;
                for s in gens_v {
                    if pres.collect(&ab, s)? != pres.collect(a, &pres.collect(b, s)?)? {
                        return Err(GroupError::Inconsistent("collection is not associative".into()));
                    }
                }
            }
        }
    }
    Ok((g, vectors))
}
