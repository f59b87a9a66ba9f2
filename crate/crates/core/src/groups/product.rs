use super::{extend_homomorphism, Elem, FiniteGroup, GroupError, TABLE_LIMIT};

/// `A × B` with `(a, b)` stored as id `a·|B| + b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    if n > TABLE_LIMIT {
        return Err(GroupError::OrderCap { cap: TABLE_LIMIT });
    }
    let enc = |x: Elem, y: Elem| x * nb as Elem + y;
    let mut table = vec![0; n * n];
    for x1 in a.elements() {
        for y1 in b.elements() {
            let row = enc(x1, y1) as usize * n;
            for x2 in a.elements() {
                let x = a.mul(x1, x2);
                for y2 in b.elements() {
                    table[row + enc(x2, y2) as usize] = enc(x, b.mul(y1, y2));
                }
            }
        }
    }
    let gens = a.generators().iter().map(|&x| enc(x, 0)).chain(b.generators().iter().map(|&y| enc(0, y))).collect();
    Ok(FiniteGroup::from_table(n, table, gens))
}

/// Images `φ_{h_i}(n_j)` for the stored generators `h_i` of H and `n_j` of N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectAction {
    pub images: Vec<Vec<Elem>>,
}

/// `N ⋊ H` with `(n1, h1)(n2, h2) = (n1 φ_{h1}(n2), h1 h2)`, stored as id
/// `h·|N| + n`. The generator images must extend to a homomorphism
/// `H → Aut(N)`.
pub fn semidirect_product(
    n: &FiniteGroup,
    h: &FiniteGroup,
    action: &SemidirectAction,
) -> Result<FiniteGroup, GroupError> {
    let (nn, nh) = (n.order(), h.order());
    let order = nn * nh;
    if order > TABLE_LIMIT {
        return Err(GroupError::OrderCap { cap: TABLE_LIMIT });
    }
    if action.images.len() != h.generators().len() {
        return Err(GroupError::BadAction(format!(
            "{} generator actions given, H has {} generators",
            action.images.len(),
            h.generators().len()
        )));
    }
    let mut gen_maps = Vec::new();
    for (i, imgs) in action.images.iter().enumerate() {
        if imgs.len() != n.generators().len() {
            return Err(GroupError::BadAction(format!("action {}: wrong number of images", i + 1)));
        }
        let map = extend_homomorphism(n, n.generators(), imgs, n)
            .ok_or_else(|| GroupError::BadAction(format!("action {} is not an endomorphism of N", i + 1)))?;
        let mut seen = vec![false; nn];
        if map.iter().any(|&y| std::mem::replace(&mut seen[y as usize], true)) {
            return Err(GroupError::BadAction(format!("action {} is not bijective", i + 1)));
        }
        gen_maps.push(map);
    }
    // φ_{x s} = φ_x ∘ φ_s along a spanning tree of H, then checked on all edges
    let mut phi: Vec<Vec<Elem>> = vec![Vec::new(); nh];
    phi[0] = (0..nn as Elem).collect();
    for (x, parent, j) in h.schreier_tree(h.generators()) {
        phi[x as usize] = compose(&phi[parent as usize], &gen_maps[j]);
    }
    for x in h.elements() {
        for (j, &s) in h.generators().iter().enumerate() {
            if phi[h.mul(x, s) as usize] != compose(&phi[x as usize], &gen_maps[j]) {
                return Err(GroupError::BadAction("generator actions do not define a homomorphism H → Aut(N)".into()));
            }
        }
    }
    let enc = |a: Elem, b: Elem| b * nn as Elem + a;
    let mut table = vec![0; order * order];
    for h1 in h.elements() {
        let p = &phi[h1 as usize];
        for n1 in n.elements() {
            let row = enc(n1, h1) as usize * order;
            for h2 in h.elements() {
                let hh = h.mul(h1, h2);
                for n2 in n.elements() {
                    table[row + enc(n2, h2) as usize] = enc(n.mul(n1, p[n2 as usize]), hh);
                }
            }
        }
    }
    let gens = n.generators().iter().map(|&a| enc(a, 0)).chain(h.generators().iter().map(|&b| enc(0, b))).collect();
    Ok(FiniteGroup::from_table(order, table, gens))
}

/// `(outer ∘ inner)(x) = outer(inner(x))`.
fn compose(outer: &[Elem], inner: &[Elem]) -> Vec<Elem> {
    inner.iter().map(|&y| outer[y as usize]).collect()
}
