//! Finite groups given by index-level multiplication, and subset utilities.

use std::collections::BTreeSet;

pub trait FiniteGroup: Sync {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    fn identity(&self) -> usize {
        0
    }
}

/// Sorted list of element indices.
pub type Subset = Vec<usize>;

pub fn mask(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &x in set {
        m[x] = true;
    }
    m
}

pub fn closure<G: FiniteGroup + ?Sized>(g: &G, gens: &[usize]) -> Subset {
    let mut seen = vec![false; g.order()];
    let e = g.identity();
    seen[e] = true;
    let mut stack = vec![e];
    let mut out = vec![e];
    while let Some(x) = stack.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
                stack.push(y);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn is_subgroup<G: FiniteGroup + ?Sized>(g: &G, set: &[usize]) -> bool {
    if set.is_empty() {
        return false;
    }
    let m = mask(g.order(), set);
    m[g.identity()] && set.iter().all(|&a| m[g.inv(a)] && set.iter().all(|&b| m[g.mul(a, b)]))
}

pub fn element_order<G: FiniteGroup + ?Sized>(g: &G, a: usize) -> usize {
    let mut x = a;
    let mut k = 1;
    while x != g.identity() {
        x = g.mul(x, a);
        k += 1;
    }
    k
}

pub fn conjugate_subset<G: FiniteGroup + ?Sized>(g: &G, x: usize, set: &[usize]) -> Subset {
    let xi = g.inv(x);
    let mut out: Vec<usize> = set.iter().map(|&k| g.mul(g.mul(x, k), xi)).collect();
    out.sort_unstable();
    out
}

pub fn is_normal<G: FiniteGroup + ?Sized>(g: &G, k: &[usize]) -> bool {
    let mut sorted = k.to_vec();
    sorted.sort_unstable();
    (0..g.order()).all(|x| conjugate_subset(g, x, &sorted) == sorted)
}

pub fn intersect(a: &[usize], b: &[usize]) -> Subset {
    let bs: BTreeSet<usize> = b.iter().copied().collect();
    a.iter().copied().filter(|x| bs.contains(x)).collect()
}

pub fn center<G: FiniteGroup + ?Sized>(g: &G) -> Subset {
    (0..g.order()).filter(|&z| (0..g.order()).all(|x| g.mul(z, x) == g.mul(x, z))).collect()
}

pub fn commutator_subgroup<G: FiniteGroup + ?Sized>(g: &G, elems: &[usize]) -> Subset {
    let mut comms = BTreeSet::new();
    for &a in elems {
        for &b in elems {
            let c = g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b)));
            comms.insert(c);
        }
    }
    let gens: Vec<usize> = comms.into_iter().collect();
    closure(g, &gens)
}

/// A small generating set, chosen greedily.
pub fn generators<G: FiniteGroup + ?Sized>(g: &G, elems: &[usize]) -> Vec<usize> {
    let mut gens = vec![];
    let mut span = vec![g.identity()];
    let mut cand: Vec<usize> = elems.to_vec();
    cand.sort_by_key(|&x| std::cmp::Reverse(element_order(g, x)));
    for x in cand {
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = closure(g, &gens);
            if span.len() == elems.len() {
                break;
            }
        }
    }
    gens
}

/// All subgroups, by repeatedly joining cyclic subgroups. Intended for groups
/// of a few hundred elements at most.
pub fn all_subgroups<G: FiniteGroup + ?Sized>(g: &G) -> Vec<Subset> {
    let mut found: BTreeSet<Subset> = BTreeSet::new();
    let mut cyclic: BTreeSet<Subset> = BTreeSet::new();
    for a in 0..g.order() {
        cyclic.insert(closure(g, &[a]));
    }
    let cyclic: Vec<Subset> = cyclic.into_iter().collect();
    let mut frontier: Vec<Subset> = cyclic.clone();
    found.extend(cyclic.iter().cloned());
    while !frontier.is_empty() {
        let mut next = vec![];
        for h in &frontier {
            for c in &cyclic {
                if c.iter().all(|x| h.binary_search(x).is_ok()) {
                    continue;
                }
                let mut gens = h.clone();
                gens.extend_from_slice(c);
                let j = closure(g, &gens);
                if found.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    found.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Cyclic(usize);
    impl FiniteGroup for Cyclic {
        fn order(&self) -> usize {
            self.0
        }
        fn mul(&self, a: usize, b: usize) -> usize {
            (a + b) % self.0
        }
        fn inv(&self, a: usize) -> usize {
            (self.0 - a) % self.0
        }
    }

    #[test]
    fn subgroups_of_cyclic_group() {
        let g = Cyclic(12);
        // one subgroup per divisor
        assert_eq!(all_subgroups(&g).len(), 6);
        assert_eq!(closure(&g, &[8]), vec![0, 4, 8]);
        assert!(is_subgroup(&g, &[0, 6]));
        assert!(!is_subgroup(&g, &[0, 5]));
        assert_eq!(element_order(&g, 8), 3);
        assert_eq!(commutator_subgroup(&g, &(0..12).collect::<Vec<_>>()), vec![0]);
    }
}
