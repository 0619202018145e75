//! Simplex-level operations in the chain Barratt-Eccles operad: tuples of
//! permutations with faces, diagonal action, complexity, and the
//! shuffle-based partial composition.

use std::collections::BTreeMap;

use crate::sigmaobj::Perm;

/// A nondegenerate simplex: adjacent entries distinct.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct BESimplex {
    pub verts: Vec<Perm>,
}

impl BESimplex {
    pub fn new(verts: Vec<Perm>) -> Option<Self> {
        if verts.is_empty() {
            return None;
        }
        let r = verts[0].arity();
        if verts.iter().any(|w| w.arity() != r) {
            return None;
        }
        if verts.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(BESimplex { verts })
    }

    pub fn vertex(w: Perm) -> Self {
        BESimplex { verts: vec![w] }
    }

    pub fn arity(&self) -> usize {
        self.verts[0].arity()
    }

    pub fn degree(&self) -> i64 {
        self.verts.len() as i64 - 1
    }

    pub fn label(&self) -> String {
        self.verts
            .iter()
            .map(|w| w.label())
            .collect::<Vec<_>>()
            .join("|")
    }

    /// k-th face; None when it is degenerate.
    pub fn face(&self, k: usize) -> Option<BESimplex> {
        let mut v = self.verts.clone();
        v.remove(k);
        if v.is_empty() {
            return None;
        }
        BESimplex::new(v)
    }

    /// Alternating-sum boundary with degenerate faces dropped.
    pub fn boundary(&self) -> Vec<(BESimplex, i64)> {
        let mut out: BTreeMap<BESimplex, i64> = BTreeMap::new();
        for k in 0..self.verts.len() {
            if let Some(f) = self.face(k) {
                let s = if k % 2 == 0 { 1 } else { -1 };
                *out.entry(f).or_insert(0) += s;
            }
        }
        out.into_iter().filter(|(_, c)| *c != 0).collect()
    }

    /// Diagonal action: apply the permutation letterwise to every vertex.
    pub fn act(&self, s: &Perm) -> BESimplex {
        BESimplex { verts: self.verts.iter().map(|w| s.compose(w)).collect() }
    }

    /// Changes of the {i,j}-orientation along the tuple (consecutive
    /// repeats collapse, so this counts adjacent flips).
    pub fn pair_changes(&self, i: u8, j: u8) -> usize {
        let mut changes = 0usize;
        let mut prev: Option<bool> = None;
        for w in &self.verts {
            let v = before(w, i, j);
            match prev {
                None => prev = Some(v),
                Some(p) if p != v => {
                    changes += 1;
                    prev = Some(v);
                }
                _ => {}
            }
        }
        changes
    }

    /// Admissible for the level-n filtration: every pair changes
    /// orientation at most n-1 times.
    pub fn within_level(&self, n: usize) -> bool {
        let r = self.arity() as u8;
        for i in 1..=r {
            for j in i + 1..=r {
                if self.pair_changes(i, j) > n - 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Partial composition: the Eilenberg-Zilber shuffle sum of degreewise
    /// block substitutions, with degenerate results dropped.
    pub fn compose(&self, i: u8, other: &BESimplex) -> Vec<(BESimplex, i64)> {
        let p = self.verts.len() - 1;
        let q = other.verts.len() - 1;
        let mut out: BTreeMap<BESimplex, i64> = BTreeMap::new();
        // monotone lattice paths from (0,0) to (p,q); a path is a bitmask
        // over p+q steps, 1 = advance in self
        let steps = p + q;
        let mut path = Vec::with_capacity(steps);
        enumerate_paths(p, q, &mut path, &mut |path| {
            let mut u = 0usize;
            let mut v = 0usize;
            let mut verts = Vec::with_capacity(steps + 1);
            verts.push(self.verts[0].block_substitute(i, &other.verts[0]));
            let mut inversions = 0usize;
            let mut ycount = 0usize;
            for &x_step in path.iter() {
                if x_step {
                    u += 1;
                    inversions += ycount;
                } else {
                    v += 1;
                    ycount += 1;
                }
                verts.push(self.verts[u].block_substitute(i, &other.verts[v]));
            }
            // normalization drops degenerate tuples
            if verts.windows(2).any(|w| w[0] == w[1]) {
                return;
            }
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            let simplex = BESimplex { verts };
            *out.entry(simplex).or_insert(0) += sign;
        });
        out.into_iter().filter(|(_, c)| *c != 0).collect()
    }
}

fn before(w: &Perm, i: u8, j: u8) -> bool {
    // does letter i appear before letter j in the output word?
    for &x in w.word() {
        if x == i {
            return true;
        }
        if x == j {
            return false;
        }
    }
    unreachable!("letters must appear")
}

fn enumerate_paths(p: usize, q: usize, path: &mut Vec<bool>, f: &mut impl FnMut(&[bool])) {
    if p == 0 && q == 0 {
        f(path);
        return;
    }
    if p > 0 {
        path.push(true);
        enumerate_paths(p - 1, q, path, f);
        path.pop();
    }
    if q > 0 {
        path.push(false);
        enumerate_paths(p, q - 1, path, f);
        path.pop();
    }
}

/// Formal integer combinations of simplices.
pub type FormalChain = BTreeMap<BESimplex, i64>;

pub fn chain_add(acc: &mut FormalChain, s: BESimplex, c: i64) {
    let e = acc.entry(s).or_insert(0);
    *e += c;
    if *e == 0 {
        acc.remove_entry_zero();
    }
}

trait RemoveZero {
    fn remove_entry_zero(&mut self);
}

impl RemoveZero for FormalChain {
    fn remove_entry_zero(&mut self) {
        self.retain(|_, c| *c != 0);
    }
}

/// Formal boundary of a chain.
pub fn chain_boundary(x: &FormalChain) -> FormalChain {
    let mut out = FormalChain::new();
    for (s, c) in x {
        for (f, sgn) in s.boundary() {
            chain_add(&mut out, f, c * sgn);
        }
    }
    out
}

/// Formal composition of chains.
pub fn chain_compose(x: &FormalChain, i: u8, y: &FormalChain) -> FormalChain {
    let mut out = FormalChain::new();
    for (sx, cx) in x {
        for (sy, cy) in y {
            for (s, sgn) in sx.compose(i, sy) {
                chain_add(&mut out, s, cx * cy * sgn);
            }
        }
    }
    out
}

/// Formal action.
pub fn chain_act(s: &Perm, x: &FormalChain) -> FormalChain {
    let mut out = FormalChain::new();
    for (sx, c) in x {
        chain_add(&mut out, sx.act(s), *c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(w: &[u8]) -> Perm {
        Perm::from_word(w.to_vec()).unwrap()
    }

    #[test]
    fn boundary_examples() {
        // ∂(e,t) = (t) - (e)
        let e = perm(&[1, 2]);
        let t = perm(&[2, 1]);
        let et = BESimplex::new(vec![e.clone(), t.clone()]).unwrap();
        let b = et.boundary();
        assert_eq!(
            b,
            vec![
                (BESimplex::vertex(e.clone()), -1),
                (BESimplex::vertex(t.clone()), 1)
            ]
        );
        // ∂(e,t,e) = (t,e) + (e,t): the middle face is degenerate? no:
        // dropping the middle gives (e,e), degenerate, so only the outer
        // faces survive: +(t,e) and +(e,t)
        let ete = BESimplex::new(vec![e.clone(), t.clone(), e.clone()]).unwrap();
        let b2 = ete.boundary();
        assert_eq!(b2.len(), 2);
        let te = BESimplex::new(vec![t.clone(), e.clone()]).unwrap();
        let et2 = BESimplex::new(vec![e, t]).unwrap();
        assert!(b2.contains(&(te, 1)));
        assert!(b2.contains(&(et2, 1)));
    }

    #[test]
    fn boundary_squares_to_zero() {
        let perms = Perm::all(3);
        // a few simplices of degree 3
        for (a, b, c, d) in [(0usize, 1, 2, 3), (1, 0, 5, 2), (4, 2, 0, 3)] {
            let s = BESimplex::new(vec![
                perms[a].clone(),
                perms[b].clone(),
                perms[c].clone(),
                perms[d].clone(),
            ])
            .unwrap();
            let mut chain = FormalChain::new();
            chain.insert(s, 1);
            let bb = chain_boundary(&chain_boundary(&chain));
            assert!(bb.is_empty(), "d^2 != 0: {bb:?}");
        }
    }

    #[test]
    fn compose_degree_zero_is_block_substitution() {
        let t = perm(&[2, 1]);
        let x = BESimplex::vertex(t.clone());
        let out = x.compose(1, &x);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0.verts[0].word(), &[3, 2, 1]);
        assert_eq!(out[0].1, 1);
    }

    #[test]
    fn compose_with_unit() {
        let e = perm(&[1, 2]);
        let t = perm(&[2, 1]);
        let et = BESimplex::new(vec![e.clone(), t.clone()]).unwrap();
        let unit = BESimplex::vertex(Perm::identity(1));
        for slot in [1u8, 2] {
            let out = et.compose(slot, &unit);
            assert_eq!(out, vec![(et.clone(), 1)]);
        }
        let out = unit.compose(1, &et);
        assert_eq!(out, vec![(et.clone(), 1)]);
    }

    #[test]
    fn compose_one_simplex_with_vertex() {
        // (e,t) ∘_1 (e) in arities (2,2): the 1-simplex (123, 312)
        let e = perm(&[1, 2]);
        let t = perm(&[2, 1]);
        let et = BESimplex::new(vec![e.clone(), t.clone()]).unwrap();
        let ev = BESimplex::vertex(e);
        let out = et.compose(1, &ev);
        assert_eq!(out.len(), 1);
        let s = &out[0].0;
        assert_eq!(s.verts.len(), 2);
        assert_eq!(s.verts[0].word(), &[1, 2, 3]);
        assert_eq!(s.verts[1].word(), &[3, 1, 2]);
        assert_eq!(out[0].1, 1);
    }

    #[test]
    fn compose_is_chain_map() {
        // ∂(x ∘ y) = ∂x ∘ y + (-1)^|x| x ∘ ∂y on a degree (1,1) pair
        let e = perm(&[1, 2]);
        let t = perm(&[2, 1]);
        let x = BESimplex::new(vec![e.clone(), t.clone()]).unwrap();
        let y = BESimplex::new(vec![t.clone(), e.clone()]).unwrap();
        for slot in [1u8, 2] {
            let mut cx = FormalChain::new();
            cx.insert(x.clone(), 1);
            let mut cy = FormalChain::new();
            cy.insert(y.clone(), 1);
            let lhs = chain_boundary(&chain_compose(&cx, slot, &cy));
            let mut rhs = chain_compose(&chain_boundary(&cx), slot, &cy);
            // (-1)^{|x|} = -1
            for (s, c) in chain_compose(&cx, slot, &chain_boundary(&cy)) {
                chain_add(&mut rhs, s, -c);
            }
            assert_eq!(lhs, rhs, "slot {slot}");
        }
    }

    #[test]
    fn complexity_filter_basics() {
        let e = perm(&[1, 2]);
        let t = perm(&[2, 1]);
        let et = BESimplex::new(vec![e.clone(), t.clone()]).unwrap();
        assert_eq!(et.pair_changes(1, 2), 1);
        assert!(!et.within_level(1));
        assert!(et.within_level(2));
        let ete = BESimplex::new(vec![e.clone(), t.clone(), e.clone()]).unwrap();
        assert_eq!(ete.pair_changes(1, 2), 2);
        assert!(!ete.within_level(2));
        assert!(ete.within_level(3));
    }
}
