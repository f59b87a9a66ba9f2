//! Integer Smith normal form, used for the abelianization of finitely
//! presented abelian groups given by a relation matrix.

/// Invariant factors of `Z^cols / rowspace(rows)`.
///
/// Only factors different from 1 are returned, in divisibility order
/// (`d_1 | d_2 | ...`). A free summand shows up as a trailing `0`.
pub fn invariant_factors(rows: &[Vec<i64>], cols: usize) -> Vec<u64> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "relation row has wrong width");
            r.iter().map(|&x| x as i128).collect()
        })
        .collect();
    let diag = diagonalize(&mut m, cols);
    let mut factors: Vec<u64> = diag.into_iter().map(|d| d.unsigned_abs() as u64).collect();
    // columns never touched by a pivot are free generators
    factors.resize(cols, 0);
    factors.retain(|&d| d != 1);
    factors.sort_by_key(|&d| if d == 0 { u64::MAX } else { d });
    factors
}

/// Reduces `m` in place and returns the diagonal entries, already adjusted so
/// that each divides the next.
fn diagonalize(m: &mut [Vec<i128>], cols: usize) -> Vec<i128> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block as pivot
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && pivot.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                if q != 0 {
                    for row in m.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                if m[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // pivot must divide the rest of the block
                let bad =
                    (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| m[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            let v = m[i][j];
                            m[t][j] += v;
                        }
                        continue;
                    }
                }
            }
            // move the smallest remainder into the pivot position
            let mut best = (t, t);
            for i in t..rows {
                if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                m.swap(t, best.0);
            }
            if best.1 != t {
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(m[t][t]);
        t += 1;
    }
    diag
}
