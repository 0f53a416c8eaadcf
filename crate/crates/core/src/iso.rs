//! Brute-force isomorphism testing by generator-image backtracking.
//!
//! Both groups are turned into Cayley tables; a short generating set of the
//! first is mapped to every compatible tuple of the second (same element
//! order, same centralizer size, same orders of pairwise products) and the
//! candidate map is extended along right multiplication. Only meant for
//! desk-scale orders.

use alloc::vec;
use alloc::vec::Vec;

use crate::group::FiniteGroup;

/// Largest order [`are_isomorphic`] will decide.
pub const EXACT_ISO_LIMIT: u64 = 512;

/// Cayley table plus the per-element data the search prunes on.
pub(crate) struct Table {
    n: usize,
    mul: Vec<u32>,
    order: Vec<u64>,
    centralizer: Vec<u32>,
    gens: Vec<usize>,
}

impl Table {
    /// Rows are filled along a spanning tree of the Cayley graph, so only
    /// `n * |gens|` products need a hash lookup.
    pub(crate) fn new(g: &FiniteGroup) -> Self {
        let n = g.elements().len();
        let small = g.small_generating_set();
        let step: Vec<Vec<u32>> = g
            .elements()
            .iter()
            .map(|x| small.iter().map(|s| g.index_of(&x.compose(s)).expect("closed") as u32).collect())
            .collect();
        // tree[y] = (parent, generator) with y = parent * generator
        let mut tree = vec![(u32::MAX, 0u32); n];
        let mut bfs = Vec::with_capacity(n);
        bfs.push(0usize);
        tree[0] = (0, 0);
        let mut head = 0;
        while head < bfs.len() {
            let x = bfs[head];
            head += 1;
            for (i, &y) in step[x].iter().enumerate() {
                if y != 0 && tree[y as usize].0 == u32::MAX {
                    tree[y as usize] = (x as u32, i as u32);
                    bfs.push(y as usize);
                }
            }
        }
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            let row = &mut mul[x * n..(x + 1) * n];
            row[0] = x as u32;
            for &y in &bfs[1..] {
                let (parent, gen) = tree[y];
                row[y] = step[row[parent as usize] as usize][gen as usize];
            }
        }
        let order = g.elements().iter().map(|x| x.order()).collect();
        let centralizer = (0..n).map(|x| (0..n).filter(|&y| mul[x * n + y] == mul[y * n + x]).count() as u32).collect();
        let gens = small.iter().map(|s| g.index_of(s).expect("member")).collect();
        Self { n, mul, order, centralizer, gens }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }
}

/// `Some(answer)` for groups up to [`EXACT_ISO_LIMIT`], `None` beyond.
pub fn are_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> Option<bool> {
    if a.order() != b.order() {
        return Some(false);
    }
    if a.order() > EXACT_ISO_LIMIT {
        return None;
    }
    if a.fingerprint() != b.fingerprint() {
        return Some(false);
    }
    Some(tables_isomorphic(&Table::new(a), &Table::new(b)))
}

/// Decides isomorphism of two groups of equal order from their tables.
pub(crate) fn tables_isomorphic(ta: &Table, tb: &Table) -> bool {
    if ta.n != tb.n {
        return false;
    }
    let candidates: Vec<Vec<usize>> = ta
        .gens
        .iter()
        .map(|&g| (0..tb.n).filter(|&y| tb.order[y] == ta.order[g] && tb.centralizer[y] == ta.centralizer[g]).collect())
        .collect();
    let mut images = Vec::with_capacity(ta.gens.len());
    search(ta, tb, &ta.gens, &candidates, &mut images)
}

fn search(ta: &Table, tb: &Table, gens: &[usize], cands: &[Vec<usize>], images: &mut Vec<usize>) -> bool {
    let depth = images.len();
    if depth == gens.len() {
        return extends_to_isomorphism(ta, tb, gens, images);
    }
    for &y in &cands[depth] {
        let compatible = (0..depth).all(|i| {
            ta.order[ta.mul(gens[i], gens[depth])] == tb.order[tb.mul(images[i], y)]
                && ta.order[ta.mul(gens[depth], gens[i])] == tb.order[tb.mul(y, images[i])]
        });
        if !compatible {
            continue;
        }
        images.push(y);
        if search(ta, tb, gens, cands, images) {
            return true;
        }
        images.pop();
    }
    false
}

// f(e) = e, f(x g_i) = f(x) f(g_i); consistent and injective on all of A
// means f is an isomorphism.
fn extends_to_isomorphism(ta: &Table, tb: &Table, gens: &[usize], images: &[usize]) -> bool {
    const UNSET: u32 = u32::MAX;
    let mut map = vec![UNSET; ta.n];
    let mut used = vec![false; tb.n];
    map[0] = 0;
    used[0] = true;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&g, &h) in gens.iter().zip(images) {
            let y = ta.mul(x, g);
            let fy = tb.mul(map[x] as usize, h);
            if map[y] == UNSET {
                if used[fy] {
                    return false;
                }
                map[y] = fy as u32;
                used[fy] = true;
                queue.push(y);
            } else if map[y] as usize != fy {
                return false;
            }
        }
    }
    queue.len() == ta.n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::Builder;

    #[test]
    fn cyclic_vs_products() {
        let b = Builder::default();
        let c6 = b.cyclic(6).unwrap();
        let c2xc3 = b.direct_product(&b.cyclic(2).unwrap(), &b.cyclic(3).unwrap()).unwrap();
        let s3 = b.dihedral(6).unwrap();
        assert_eq!(are_isomorphic(&c6, &c2xc3), Some(true));
        assert_eq!(are_isomorphic(&c6, &s3), Some(false));
    }

    #[test]
    fn equivalent_actions() {
        // 2 and 4 generate the same subgroup of units mod 7
        let b = Builder::default();
        let x = b.semidirect_cyclic(7, 3, 2).unwrap();
        let y = b.semidirect_cyclic(7, 3, 4).unwrap();
        assert_eq!(are_isomorphic(&x, &y), Some(true));
        let d8 = b.dihedral(8).unwrap();
        let q8 = b.quaternion8().unwrap();
        assert_eq!(are_isomorphic(&d8, &q8), Some(false));
    }

    #[test]
    fn beyond_limit() {
        let b = Builder::default();
        let big = b.cyclic(EXACT_ISO_LIMIT + 1).unwrap();
        assert_eq!(are_isomorphic(&big, &big), None);
    }
}
