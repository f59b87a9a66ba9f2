use super::{FiniteGroup, GroupError, TABLE_LIMIT};

/// Upper unitriangular `n × n` matrices over `F_q`, `q` prime.
///
/// Generated by the elementary matrices `I + E_{i,i+1}`; the order is
/// checked against `q^(n(n-1)/2)`.
pub fn from_unitriangular(n: usize, q: u32) -> Result<FiniteGroup, GroupError> {
    if q < 2 || (2..q).any(|d| q.is_multiple_of(d)) {
        return Err(GroupError::Inconsistent(format!("field size {q} is not prime")));
    }
    let expected = (q as u64).checked_pow((n * n.saturating_sub(1) / 2) as u32);
    if expected.is_none_or(|e| e > TABLE_LIMIT as u64) {
        return Err(GroupError::OrderCap { cap: TABLE_LIMIT });
    }
    let identity: Vec<u8> = (0..n * n).map(|k| u8::from(k / n == k % n)).collect();
    let gens: Vec<Vec<u8>> = (0..n.saturating_sub(1))
        .map(|i| {
            let mut m = identity.clone();
            m[i * n + i + 1] = 1;
            m
        })
        .collect();
    let mul = |a: &Vec<u8>, b: &Vec<u8>| {
        let mut c = vec![0u8; n * n];
        for i in 0..n {
            for j in i..n {
                let s: u32 = (i..=j).map(|k| a[i * n + k] as u32 * b[k * n + j] as u32).sum();
                c[i * n + j] = (s % q) as u8;
            }
        }
        c
    };
    let g = FiniteGroup::from_closure(identity, &gens, mul, TABLE_LIMIT)?;
    debug_assert_eq!(Some(g.order() as u64), expected);
    Ok(g)
}
