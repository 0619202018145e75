//! Free operads on tree bases, with the weight decomposition and the
//! differential induced by the generators.

use std::collections::BTreeMap;

use super::tree::{self, Tree};
use super::{flat_of, Chain, Operad};
use crate::homcore::{BasedComplex, CoefficientRing, Scalar, SparseMat};
use crate::sigmaobj::{ArityAction, DegSignedPerm, SigmaObject, SignedPerm};
use crate::{Error, Result};

/// The free operad F(M) up to an arity truncation, materialized on
/// canonical tree bases. Arities may carry a weight cap (used when only
/// the low-weight part is needed at large arities).
#[derive(Clone, Debug)]
pub struct FreeOperad {
    pub m: SigmaObject,
    pub r_max: usize,
    /// per arity: basis trees grouped in (degree, index) order
    trees: Vec<Vec<Tree>>,
    index: Vec<BTreeMap<Tree, (i64, usize)>>,
    /// materialized complexes with the induced differential and action
    pub components: SigmaObject,
    pub weight_caps: Vec<Option<usize>>,
}

impl FreeOperad {
    /// Builds F(M). `weight_cap(r)` may truncate the tree weight at a
    /// given arity; `None` keeps all trees.
    pub fn new(
        m: &SigmaObject,
        r_max: usize,
        weight_cap: impl Fn(usize) -> Option<usize>,
    ) -> Result<Self> {
        if !m.component(0).is_zero_complex() || !m.component(1).is_zero_complex() {
            return Err(Error::Validation(
                "free operad requires generators with zero arity-0 and arity-1 parts".into(),
            ));
        }
        let ring = m.ring;
        let mut trees: Vec<Vec<Tree>> = vec![Vec::new(); r_max + 1];
        let mut index: Vec<BTreeMap<Tree, (i64, usize)>> = vec![BTreeMap::new(); r_max + 1];
        let mut components = SigmaObject::zero(ring, r_max);
        let mut caps = vec![None; r_max + 1];
        for r in 1..=r_max {
            let cap = weight_cap(r);
            caps[r] = cap;
            let all = if r == 1 {
                vec![Tree::leaf()]
            } else {
                tree::enumerate_trees(m, r, cap)
            };
            // group by degree, preserving tree order inside a degree
            let mut by_degree: BTreeMap<i64, Vec<Tree>> = BTreeMap::new();
            for t in all {
                by_degree.entry(t.degree()).or_default().push(t);
            }
            let mut c = BasedComplex::new(ring);
            let mut flat = Vec::new();
            for (&d, ts) in &by_degree {
                let labels = ts.iter().map(|t| t.label(m)).collect();
                c.set_basis(d, labels);
                for (i, t) in ts.iter().enumerate() {
                    index[r].insert(t.clone(), (d, i));
                    flat.push(t.clone());
                }
            }
            trees[r] = flat;
            // induced differential: Leibniz over decorations
            let degrees = c.degrees();
            for &d in &degrees {
                let mut triples: Vec<(usize, usize, Scalar)> = Vec::new();
                for (col, t) in by_degree[&d].iter().enumerate() {
                    for (new_t, coeff) in differential_terms(m, t) {
                        let (dd, row) = index[r][&new_t];
                        debug_assert_eq!(dd, d - 1);
                        triples.push((row, col, ring.from_i64(coeff)));
                    }
                }
                let mat = SparseMat::from_triples(&ring, c.dim(d - 1), c.dim(d), triples);
                c.set_diff(d, mat)?;
            }
            // action: leaf relabeling by adjacent transpositions
            let mut gens = Vec::new();
            for l in 1..r {
                let s = crate::sigmaobj::Perm::adjacent_transposition(r, l);
                let mut by_deg: BTreeMap<i64, SignedPerm> = BTreeMap::new();
                for (&d, ts) in &by_degree {
                    let mut map = vec![(0usize, 1i8); ts.len()];
                    for (i, t) in ts.iter().enumerate() {
                        let (t2, sign) = tree::act(&s, t, m);
                        let (d2, j) = index[r][&t2];
                        debug_assert_eq!(d2, d);
                        map[i] = (j, sign as i8);
                    }
                    by_deg.insert(d, SignedPerm { map });
                }
                gens.push(DegSignedPerm { by_degree: by_deg });
            }
            let action = ArityAction { r, gens };
            components.set_component(r, c, action)?;
        }
        Ok(FreeOperad { m: m.clone(), r_max, trees, index, components, weight_caps: caps })
    }

    pub fn ring(&self) -> CoefficientRing {
        self.m.ring
    }

    pub fn tree_basis(&self, r: usize) -> &[Tree] {
        &self.trees[r]
    }

    pub fn tree_of(&self, r: usize, d: i64, i: usize) -> &Tree {
        let c = self.components.component(r);
        &self.trees[r][flat_of(c, d, i)]
    }

    pub fn index_of(&self, t: &Tree) -> Option<(i64, usize)> {
        self.index[t.arity].get(t).copied()
    }

    /// Chain supported on one tree.
    pub fn chain_of_tree(&self, t: &Tree, coeff: i64) -> Result<Chain> {
        let ring = self.ring();
        let (d, i) = self
            .index_of(t)
            .ok_or_else(|| Error::Validation("tree not in basis (weight cap?)".into()))?;
        let mut c = Chain::zero(t.arity);
        c.add_term(&ring, d, i, &ring.from_i64(coeff));
        Ok(c)
    }

    /// Weight of a basis element.
    pub fn weight_of(&self, r: usize, d: i64, i: usize) -> usize {
        self.tree_of(r, d, i).weight()
    }

    /// Grafting on chains, with Koszul signs.
    pub fn graft_chain(&self, p: &Chain, slot: usize, q: &Chain) -> Result<Chain> {
        let ring = self.ring();
        let (m, n) = (p.arity, q.arity);
        if slot < 1 || slot > m {
            return Err(Error::SlotOutOfRange { slot, arity: m });
        }
        if m + n - 1 > self.r_max {
            return Err(Error::TruncationOverflow { r_max: self.r_max });
        }
        let mut out = Chain::zero(m + n - 1);
        for (&(dp, ip), vp) in &p.terms {
            let tp = self.tree_of(m, dp, ip).clone();
            for (&(dq, iq), vq) in &q.terms {
                let tq = self.tree_of(n, dq, iq);
                let (t, sign) = tree::graft(&tp, slot as u8, tq);
                let (dt, it) = self.index_of(&t).ok_or_else(|| {
                    Error::Validation("grafting left the enumerated weight range".into())
                })?;
                let coeff = ring.mul(&ring.mul(vp, vq), &ring.from_i64(sign));
                out.add_term(&ring, dt, it, &coeff);
            }
        }
        Ok(out)
    }

    /// Materializes the operad structure (unit, composition tables).
    pub fn to_operad(&self) -> Result<Operad> {
        self.to_operad_with(self.components.clone())
    }

    /// Same tables over a possibly re-differentialed underlying object
    /// (used for quasi-free operads, where the twisted differential
    /// replaces the induced one).
    pub fn to_operad_with(&self, underlying: SigmaObject) -> Result<Operad> {
        let ring = self.ring();
        let mut op = Operad::new(underlying, (0, 0));
        let trees = &self.trees;
        let index = &self.index;
        let comps = &self.components;
        op.fill_compose_from(|m, i, n, (dp, ip), (dq, iq)| {
            let tp = &trees[m][flat_of(comps.component(m), dp, ip)];
            let tq = &trees[n][flat_of(comps.component(n), dq, iq)];
            let (t, sign) = tree::graft(tp, i as u8, tq);
            match index[t.arity].get(&t) {
                Some(&(dt, it)) => {
                    let mut c = Chain::zero(m + n - 1);
                    c.add_term(&ring, dt, it, &ring.from_i64(sign));
                    c
                }
                None => Chain::zero(m + n - 1),
            }
        })?;
        Ok(op)
    }

    /// Indices of basis elements of the weight-w part at one arity.
    pub fn weight_slice(&self, r: usize, w: usize) -> Vec<(i64, usize)> {
        let c = self.components.component(r);
        self.trees[r]
            .iter()
            .filter(|t| t.weight() == w)
            .map(|t| self.index[r][t])
            .collect::<Vec<_>>()
            .into_iter()
            .map(|(d, i)| {
                let _ = c;
                (d, i)
            })
            .collect()
    }
}

/// Leibniz expansion of the generator differential over a tree's
/// decorations: the terms of δ(t) with integer coefficients.
fn differential_terms(m: &SigmaObject, t: &Tree) -> Vec<(Tree, i64)> {
    let mut out: BTreeMap<Tree, i64> = BTreeMap::new();
    for path in tree::vertex_paths(t) {
        let node = tree::vertex_at(t, &path);
        let (arity, degree, idx) = match node {
            tree::TreeNode::Node { arity, degree, index, .. } => (*arity, *degree, *index),
            _ => unreachable!(),
        };
        let diff = m.component(arity).differential(degree);
        if diff.is_zero_mat() {
            continue;
        }
        let prefix = tree::degree_before_vertex(t, &path);
        let leibniz = if prefix.rem_euclid(2) == 0 { 1i64 } else { -1 };
        for (row, col, v) in diff.entries() {
            if col != idx {
                continue;
            }
            let c = v
                .as_int()
                .map(|b| i64::try_from(b).expect("small structural coefficient"))
                .unwrap_or_else(|| match v {
                    Scalar::Mod(x) => *x as i64,
                    _ => panic!("structural differential must be integral"),
                });
            let mut new_t = t.clone();
            replace_decoration(&mut new_t.root, &path, degree - 1, row);
            *out.entry(new_t).or_insert(0) += leibniz * c;
        }
    }
    out.into_iter().filter(|(_, c)| *c != 0).collect()
}

pub(crate) fn replace_decoration(node: &mut tree::TreeNode, path: &[usize], new_degree: i64, new_index: usize) {
    if path.is_empty() {
        if let tree::TreeNode::Node { degree, index, .. } = node {
            *degree = new_degree;
            *index = new_index;
        } else {
            panic!("path must end at a vertex");
        }
        return;
    }
    match node {
        tree::TreeNode::Node { children, .. } => {
            replace_decoration(&mut children[path[0]], &path[1..], new_degree, new_index)
        }
        _ => panic!("path through a leaf"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homcore::Label;
    use crate::sigmaobj::Perm;

    fn z() -> CoefficientRing {
        CoefficientRing::Integers
    }

    /// M(2) = regular representation of Σ_2 in degree 0.
    fn regular2() -> SigmaObject {
        let mut m = SigmaObject::zero(z(), 4);
        let perms = Perm::all(2);
        let mut c = BasedComplex::new(z());
        c.set_basis(0, perms.iter().map(|p| Label::new(p.label())).collect());
        let map = SignedPerm { map: vec![(1, 1), (0, 1)] };
        let g = DegSignedPerm { by_degree: BTreeMap::from([(0, map)]) };
        m.set_component(2, c, ArityAction { r: 2, gens: vec![g] }).unwrap();
        m
    }

    /// M(2) = one generator in degree 1 with trivial action (odd case).
    fn odd_gen() -> SigmaObject {
        let mut m = SigmaObject::zero(z(), 4);
        let mut c = BasedComplex::new(z());
        c.set_basis(1, vec![Label::new("g")]);
        m.set_component(2, c.clone(), ArityAction::trivial(2, &c)).unwrap();
        m
    }

    #[test]
    fn ranks_regular_generator() {
        let m = regular2();
        let f = FreeOperad::new(&m, 4, |_| None).unwrap();
        assert_eq!(f.components.component(1).total_dim(), 1);
        assert_eq!(f.components.component(2).total_dim(), 2);
        // 3 shapes x 2 x 2 decorations
        assert_eq!(f.components.component(3).total_dim(), 12);
        f.components.validate().unwrap();
    }

    #[test]
    fn free_operad_axioms_degree_zero() {
        let m = regular2();
        let f = FreeOperad::new(&m, 4, |_| None).unwrap();
        let op = f.to_operad().unwrap();
        let rep = op.verify();
        assert!(rep.all_pass(), "{:?}", rep.gates);
    }

    #[test]
    fn free_operad_axioms_odd_generators() {
        let m = odd_gen();
        let f = FreeOperad::new(&m, 4, |_| None).unwrap();
        let op = f.to_operad().unwrap();
        let rep = op.verify();
        assert!(rep.all_pass(), "{:?}", rep.gates);
    }

    #[test]
    fn group_law_on_free_components() {
        let m = regular2();
        let f = FreeOperad::new(&m, 4, |_| None).unwrap();
        for r in 2..=4 {
            f.components.validate_group_law(r).unwrap();
        }
        let m2 = odd_gen();
        let f2 = FreeOperad::new(&m2, 4, |_| None).unwrap();
        for r in 2..=4 {
            f2.components.validate_group_law(r).unwrap();
        }
    }

    #[test]
    fn corolla_grafting_matches_block_substitution() {
        // free operad on the regular representation maps onto the
        // associative words by evaluating decorations
        let m = regular2();
        let f = FreeOperad::new(&m, 3, |_| None).unwrap();
        let e = Tree::corolla(2, 0, 0); // word 12
        let t = Tree::corolla(2, 0, 1); // word 21
        let (g1, s1) = tree::graft(&Tree { arity: 2, root: e.root.clone() }, 1, &t);
        assert_eq!(s1, 1);
        assert!(f.index_of(&g1).is_some());
    }

    #[test]
    fn weight_slices() {
        let m = regular2();
        let f = FreeOperad::new(&m, 3, |_| None).unwrap();
        assert_eq!(f.weight_slice(2, 1).len(), 2);
        assert_eq!(f.weight_slice(3, 2).len(), 12);
        assert_eq!(f.weight_slice(3, 1).len(), 0); // M(3) = 0
    }
}
