use super::{close, Elem, FiniteGroup, GroupError, TABLE_LIMIT};

pub const DEFAULT_ORDER_CAP: usize = 50_000;

/// A permutation of `0..degree` as an image list. Products compose left to
/// right: `x^(ab) = (x^a)^b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(pub Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    /// Builds from 1-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self, GroupError> {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cyc in cycles {
            for (i, &p) in cyc.iter().enumerate() {
                if p == 0 || p as usize > degree {
                    return Err(GroupError::BadPermutation(format!("point {p} outside 1..={degree}")));
                }
                if std::mem::replace(&mut used[p as usize - 1], true) {
                    return Err(GroupError::BadPermutation(format!("point {p} repeated")));
                }
                let q = cyc[(i + 1) % cyc.len()];
                img[p as usize - 1] = q - 1;
            }
        }
        Ok(Permutation(img))
    }

    /// Disjoint cycles of length ≥ 2, 1-based, each starting at its minimum.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x as u32 + 1);
                x = self.0[x] as usize;
            }
            out.push(cyc);
        }
        out
    }

    pub fn to_cycle_string(&self) -> String {
        let c = self.cycles();
        if c.is_empty() {
            return "()".to_string();
        }
        c.iter().map(|cyc| format!("({})", cyc.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))).collect()
    }
}

/// Parses disjoint-cycle notation such as `(1,2,3)(4,7)` or `()`.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, GroupError> {
    let bad = |msg: &str| GroupError::BadPermutation(format!("{msg} in `{text}`"));
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body_start = rest.strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
        let close = body_start.find(')').ok_or_else(|| bad("unclosed cycle"))?;
        let body = body_start[..close].trim();
        if !body.is_empty() {
            let cyc = body
                .split(',')
                .map(|s| s.trim().parse::<u32>().map_err(|_| bad("bad point")))
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(cyc);
        }
        rest = body_start[close + 1..].trim_start();
    }
    Permutation::from_cycles(degree, &cycles)
}

/// Closes the permutation generators; fails beyond `cap` elements.
pub fn from_permutation_generators(
    degree: usize,
    generators: &[Permutation],
    cap: usize,
) -> Result<FiniteGroup, GroupError> {
    for p in generators {
        if p.degree() != degree {
            return Err(GroupError::BadPermutation(format!("degree {} != {degree}", p.degree())));
        }
        let mut seen = vec![false; degree];
        for &x in &p.0 {
            if x as usize >= degree || std::mem::replace(&mut seen[x as usize], true) {
                return Err(GroupError::BadPermutation("not a bijection".into()));
            }
        }
    }
    let id = Permutation::identity(degree);
    let mul = |a: &Permutation, b: &Permutation| a.then(b);
    if cap <= TABLE_LIMIT {
        return FiniteGroup::from_closure(id, generators, mul, cap);
    }
    let (elements, right) = close(id, generators, &mul, cap)?;
    let k = generators.len();
    let gens: Vec<Elem> = (0..k).map(|j| right[j]).collect();
    if elements.len() <= TABLE_LIMIT {
        return Ok(FiniteGroup::from_right_action(elements.len(), &right, k, gens));
    }
    let perms: Vec<Vec<u32>> = elements.into_iter().map(|p| p.0).collect();
    Ok(FiniteGroup::from_action(perms, gens))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let p = parse_cycles("(1,2,3)(5,4)", 6).unwrap();
        assert_eq!(p.0, vec![1, 2, 0, 4, 3, 5]);
        assert_eq!(p.to_cycle_string(), "(1,2,3)(4,5)");
        assert_eq!(parse_cycles("()", 3).unwrap(), Permutation::identity(3));
        assert!(parse_cycles("(1,2", 3).is_err());
        assert!(parse_cycles("(1,4)", 3).is_err());
        assert!(parse_cycles("(1,2)(2,3)", 3).is_err());
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = parse_cycles("(1,2)", 3).unwrap();
        let b = parse_cycles("(2,3)", 3).unwrap();
        // 1 -> 2 -> 3
        assert_eq!(a.then(&b).0[0], 2);
    }

    #[test]
    fn symmetric_and_trivial() {
        let s5 = from_permutation_generators(
            5,
            &[parse_cycles("(1,2,3,4,5)", 5).unwrap(), parse_cycles("(1,2)", 5).unwrap()],
            DEFAULT_ORDER_CAP,
        )
        .unwrap();
        assert_eq!(s5.order(), 120);
        let triv = from_permutation_generators(1, &[], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(triv.order(), 1);
    }

    #[test]
    fn large_group_uses_action_backend() {
        // S8, order 40320
        let g = from_permutation_generators(
            8,
            &[parse_cycles("(1,2,3,4,5,6,7,8)", 8).unwrap(), parse_cycles("(1,2)", 8).unwrap()],
            DEFAULT_ORDER_CAP,
        )
        .unwrap();
        assert_eq!(g.order(), 40320);
        assert!(g.table().is_none());
        assert_eq!(g.order_histogram()[&8], 5040);
        let err = from_permutation_generators(
            8,
            &[parse_cycles("(1,2,3,4,5,6,7,8)", 8).unwrap(), parse_cycles("(1,2)", 8).unwrap()],
            1000,
        );
        assert_eq!(err.unwrap_err(), GroupError::OrderCap { cap: 1000 });
    }
}
