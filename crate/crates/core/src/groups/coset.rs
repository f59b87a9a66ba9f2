//! Coset enumeration (HLT strategy with coincidence processing).
//!
//! Words are sequences of nonzero integers: `k` is generator `k` (1-based)
//! and `-k` its inverse.

use super::GroupError;

pub type Relator = Vec<i32>;

const UNDEF: usize = usize::MAX;

/// A complete coset table on the live cosets, renumbered `0..index`.
#[derive(Clone, Debug)]
pub struct CosetTable {
    pub generator_count: usize,
    /// `rows[c][2i]` is `c·g_{i+1}`, `rows[c][2i+1]` is `c·g_{i+1}^-1`.
    pub rows: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.rows.len()
    }

    /// Permutation of the cosets induced by generator `i` (0-based).
    pub fn generator_permutation(&self, i: usize) -> Vec<u32> {
        self.rows.iter().map(|r| r[2 * i] as u32).collect()
    }
}

struct Enumerator {
    ngens: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    max_cosets: usize,
    overflow: bool,
}

#[inline]
fn col(letter: i32) -> usize {
    let g = letter.unsigned_abs() as usize - 1;
    if letter > 0 {
        2 * g
    } else {
        2 * g + 1
    }
}

#[inline]
fn inv_col(c: usize) -> usize {
    c ^ 1
}

impl Enumerator {
    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) {
        if self.table.len() >= self.max_cosets {
            self.overflow = true;
            return;
        }
        let d = self.table.len();
        self.table.push(vec![UNDEF; 2 * self.ngens]);
        self.parent.push(d);
        self.table[c][x] = d;
        self.table[d][inv_col(x)] = c;
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, kill) = (a.min(b), a.max(b));
        self.parent[kill] = keep;
        queue.push(kill);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..2 * self.ngens {
                let f = self.table[e][x];
                if f == UNDEF {
                    continue;
                }
                self.table[f][inv_col(x)] = UNDEF;
                let (e1, f1) = (self.rep(e), self.rep(f));
                if self.table[e1][x] != UNDEF {
                    let t = self.table[e1][x];
                    self.merge(f1, t, &mut queue);
                } else if self.table[f1][inv_col(x)] != UNDEF {
                    let t = self.table[f1][inv_col(x)];
                    self.merge(e1, t, &mut queue);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][inv_col(x)] = e1;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[i32]) {
        if w.is_empty() {
            return;
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.table[f][col(w[i])] != UNDEF {
                f = self.table[f][col(w[i])];
                i += 1;
            }
            if i as isize > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j >= i as isize && self.table[b][inv_col(col(w[j as usize]))] != UNDEF {
                b = self.table[b][inv_col(col(w[j as usize]))];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return;
            }
            if j == i as isize {
                let x = col(w[i]);
                self.table[f][x] = b;
                self.table[b][inv_col(x)] = f;
                return;
            }
            self.define(f, col(w[i]));
            if self.overflow {
                return;
            }
        }
    }
}

/// Enumerates the cosets of `⟨subgroup⟩` in `⟨g_1..g_k | relators⟩`.
pub fn coset_enumerate(
    generator_count: usize,
    relators: &[Relator],
    subgroup: &[Relator],
    max_cosets: usize,
) -> Result<CosetTable, GroupError> {
    let mut e = Enumerator {
        ngens: generator_count,
        table: vec![vec![UNDEF; 2 * generator_count]],
        parent: vec![0],
        max_cosets,
        overflow: false,
    };
    for w in subgroup {
        e.scan_and_fill(0, w);
    }
    let mut c = 0;
    while c < e.table.len() {
        for r in relators {
            if !e.live(c) {
                break;
            }
            e.scan_and_fill(c, r);
            if e.overflow {
                return Err(GroupError::CosetLimit(max_cosets));
            }
        }
        for x in 0..2 * generator_count {
            if e.live(c) && e.table[c][x] == UNDEF {
                e.define(c, x);
                if e.overflow {
                    return Err(GroupError::CosetLimit(max_cosets));
                }
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..e.table.len()).filter(|&c| e.live(c)).collect();
    let mut renumber = vec![UNDEF; e.table.len()];
    for (i, &c) in live.iter().enumerate() {
        renumber[c] = i;
    }
    let rows = live
        .iter()
        .map(|&c| {
            (0..2 * generator_count)
                .map(|x| {
                    let t = e.table[c][x];
                    renumber[e.rep(t)]
                })
                .collect()
        })
        .collect();
    Ok(CosetTable { generator_count, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_dihedral() {
        let t = coset_enumerate(1, &[vec![1; 7]], &[], 1000).unwrap();
        assert_eq!(t.index(), 7);
        // D6 = <a, b | a^6, b^2, (ab)^2>
        let rels = vec![vec![1; 6], vec![2, 2], vec![1, 2, 1, 2]];
        assert_eq!(coset_enumerate(2, &rels, &[], 1000).unwrap().index(), 12);
        assert_eq!(coset_enumerate(2, &rels, &[vec![2]], 1000).unwrap().index(), 6);
    }

    #[test]
    fn a5_presentation() {
        // <a, b | a^2, b^3, (ab)^5>
        let rels = vec![vec![1, 1], vec![2, 2, 2], [1, 2].repeat(5)];
        let t = coset_enumerate(2, &rels, &[], 10_000).unwrap();
        assert_eq!(t.index(), 60);
        for row in &t.rows {
            assert!(row.iter().all(|&x| x < 60));
        }
    }

    #[test]
    fn limit_is_reported() {
        // free group of rank 1 never closes
        assert!(matches!(coset_enumerate(1, &[], &[], 50), Err(GroupError::CosetLimit(50))));
    }
}
