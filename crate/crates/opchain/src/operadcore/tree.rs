//! Canonical decorated trees: the basis of free operads. Children of each
//! vertex are ordered by minimal descendant leaf; decoration words are
//! read in pre-order, and every operation tracks the Koszul sign of its
//! reordering.

use crate::homcore::Label;
use crate::sigmaobj::{Perm, SigmaObject};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum TreeNode {
    Leaf(u8),
    Node {
        /// arity of the decorated vertex = number of children
        arity: usize,
        /// degree of the decorating basis element
        degree: i64,
        /// index of the decorating basis element in M(arity) at `degree`
        index: usize,
        children: Vec<TreeNode>,
    },
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Tree {
    pub arity: usize,
    pub root: TreeNode,
}

impl TreeNode {
    pub fn min_leaf(&self) -> u8 {
        match self {
            TreeNode::Leaf(l) => *l,
            TreeNode::Node { children, .. } => {
                children.iter().map(|c| c.min_leaf()).min().unwrap()
            }
        }
    }

    pub fn total_degree(&self) -> i64 {
        match self {
            TreeNode::Leaf(_) => 0,
            TreeNode::Node { degree, children, .. } => {
                degree + children.iter().map(|c| c.total_degree()).sum::<i64>()
            }
        }
    }

    pub fn weight(&self) -> usize {
        match self {
            TreeNode::Leaf(_) => 0,
            TreeNode::Node { children, .. } => {
                1 + children.iter().map(|c| c.weight()).sum::<usize>()
            }
        }
    }

    fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf(_) => 1,
            TreeNode::Node { children, .. } => children.iter().map(|c| c.leaf_count()).sum(),
        }
    }

    fn relabel(&self, f: &impl Fn(u8) -> u8) -> TreeNode {
        match self {
            TreeNode::Leaf(l) => TreeNode::Leaf(f(*l)),
            TreeNode::Node { arity, degree, index, children } => TreeNode::Node {
                arity: *arity,
                degree: *degree,
                index: *index,
                children: children.iter().map(|c| c.relabel(f)).collect(),
            },
        }
    }

    /// Pre-order decoration degrees.
    fn preorder_degrees(&self, out: &mut Vec<i64>) {
        if let TreeNode::Node { degree, children, .. } = self {
            out.push(*degree);
            for c in children {
                c.preorder_degrees(out);
            }
        }
    }

    /// Sum of decoration degrees strictly before the given leaf in
    /// pre-order; second component records whether the leaf was found.
    fn degree_before_leaf(&self, leaf: u8) -> (i64, bool) {
        match self {
            TreeNode::Leaf(l) => (0, *l == leaf),
            TreeNode::Node { degree, children, .. } => {
                let mut acc = *degree;
                for c in children {
                    let (d, found) = c.degree_before_leaf(leaf);
                    acc += d;
                    if found {
                        return (acc - d + d, true);
                    }
                }
                (acc, false)
            }
        }
    }
}

impl Tree {
    pub fn leaf() -> Tree {
        Tree { arity: 1, root: TreeNode::Leaf(1) }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.root, TreeNode::Leaf(_))
    }

    /// Corolla: a single vertex decorated by M(r) basis element.
    pub fn corolla(r: usize, degree: i64, index: usize) -> Tree {
        Tree {
            arity: r,
            root: TreeNode::Node {
                arity: r,
                degree,
                index,
                children: (1..=r as u8).map(TreeNode::Leaf).collect(),
            },
        }
    }

    pub fn degree(&self) -> i64 {
        self.root.total_degree()
    }

    pub fn weight(&self) -> usize {
        self.root.weight()
    }

    pub fn label(&self, m: &SigmaObject) -> Label {
        fn go(node: &TreeNode, m: &SigmaObject, out: &mut String) {
            match node {
                TreeNode::Leaf(l) => out.push_str(&l.to_string()),
                TreeNode::Node { arity, degree, index, children } => {
                    out.push_str(&m.component(*arity).labels(*degree)[*index].0);
                    out.push('(');
                    for (i, c) in children.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        go(c, m, out);
                    }
                    out.push(')');
                }
            }
        }
        let mut s = String::new();
        go(&self.root, m, &mut s);
        Label::new(s)
    }
}

/// Koszul sign of reordering homogeneous items: `new_order[j]` is the
/// index into `degrees` of the item at new position j.
pub fn reorder_sign(degrees: &[i64], new_order: &[usize]) -> i64 {
    let mut sign = 1i64;
    for a in 0..new_order.len() {
        for b in a + 1..new_order.len() {
            if new_order[a] > new_order[b]
                && degrees[new_order[a]].rem_euclid(2) == 1
                && degrees[new_order[b]].rem_euclid(2) == 1
            {
                sign = -sign;
            }
        }
    }
    sign
}

/// Grafts q into leaf i of p. The decoration word of the result is the
/// pre-order word; relative to the tensor order (p-word, q-word) this
/// moves the q block left past the p-decorations after leaf i.
pub fn graft(p: &Tree, i: u8, q: &Tree) -> (Tree, i64) {
    assert!(1 <= i && i as usize <= p.arity, "slot out of range");
    let n = q.arity as u8;
    let (before, found) = p.root.degree_before_leaf(i);
    assert!(found, "leaf {i} not found");
    let total_p: i64 = p.root.total_degree();
    let after = total_p - before;
    let dq = q.root.total_degree();
    let sign = if (dq.rem_euclid(2) == 1) && (after.rem_euclid(2) == 1) {
        -1
    } else {
        1
    };
    // relabel: p-leaves > i shift up by n-1; q-leaves l -> i-1+l
    let q_rel = q.root.relabel(&|l| i - 1 + l);
    fn substitute(node: &TreeNode, i: u8, n: u8, q_rel: &TreeNode) -> TreeNode {
        match node {
            TreeNode::Leaf(l) => {
                if *l == i {
                    q_rel.clone()
                } else if *l > i {
                    TreeNode::Leaf(l + n - 1)
                } else {
                    TreeNode::Leaf(*l)
                }
            }
            TreeNode::Node { arity, degree, index, children } => TreeNode::Node {
                arity: *arity,
                degree: *degree,
                index: *index,
                children: children.iter().map(|c| substitute(c, i, n, q_rel)).collect(),
            },
        }
    }
    let root = substitute(&p.root, i, n, &q_rel);
    (Tree { arity: p.arity + q.arity - 1, root }, sign)
}

/// Leaf relabeling by a permutation followed by re-canonicalization.
/// Returns the canonical tree and the accumulated sign (Koszul block
/// moves and decoration action signs).
pub fn act(s: &Perm, t: &Tree, m: &SigmaObject) -> (Tree, i64) {
    assert_eq!(s.arity(), t.arity);
    let relabeled = t.root.relabel(&|l| s.apply(l));
    let (root, sign) = canonicalize(relabeled, m);
    (Tree { arity: t.arity, root }, sign)
}

fn canonicalize(node: TreeNode, m: &SigmaObject) -> (TreeNode, i64) {
    match node {
        TreeNode::Leaf(l) => (TreeNode::Leaf(l), 1),
        TreeNode::Node { arity, degree, index, children } => {
            let mut sign = 1i64;
            let fixed: Vec<TreeNode> = children
                .into_iter()
                .map(|c| {
                    let (cc, s) = canonicalize(c, m);
                    sign *= s;
                    cc
                })
                .collect();
            // sort children by min leaf; rho(new position) = old position
            let mut order: Vec<usize> = (0..fixed.len()).collect();
            order.sort_by_key(|&j| fixed[j].min_leaf());
            if order.iter().enumerate().all(|(a, &b)| a == b) {
                return (
                    TreeNode::Node { arity, degree, index, children: fixed },
                    sign,
                );
            }
            let block_degrees: Vec<i64> = fixed.iter().map(|c| c.total_degree()).collect();
            sign *= reorder_sign(&block_degrees, &order);
            // decoration absorbs the slot renumbering: x -> action(rho^{-1}) x
            let rho =
                Perm::from_word(order.iter().map(|&j| (j + 1) as u8).collect()).expect("perm");
            let act = m
                .action(arity)
                .of(&rho.inverse(), m.component(arity));
            let (new_index, dec_sign) = act.get(degree).expect("degree in action").map[index];
            sign *= dec_sign as i64;
            let children: Vec<TreeNode> = order.into_iter().map(|j| fixed[j].clone()).collect();
            (
                TreeNode::Node { arity, degree, index: new_index, children },
                sign,
            )
        }
    }
}

/// Paths to internal vertices in pre-order (a path is a list of child
/// indices from the root).
pub fn vertex_paths(t: &Tree) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(node: &TreeNode, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if let TreeNode::Node { children, .. } = node {
            out.push(path.clone());
            for (j, c) in children.iter().enumerate() {
                path.push(j);
                go(c, path, out);
                path.pop();
            }
        }
    }
    go(&t.root, &mut Vec::new(), &mut out);
    out
}

pub fn vertex_at<'a>(t: &'a Tree, path: &[usize]) -> &'a TreeNode {
    let mut cur = &t.root;
    for &j in path {
        match cur {
            TreeNode::Node { children, .. } => cur = &children[j],
            TreeNode::Leaf(_) => panic!("path through a leaf"),
        }
    }
    cur
}

/// Sum of decoration degrees strictly before the vertex at `path` in
/// pre-order.
pub fn degree_before_vertex(t: &Tree, path: &[usize]) -> i64 {
    fn go(node: &TreeNode, path: &[usize]) -> i64 {
        match node {
            TreeNode::Leaf(_) => 0,
            TreeNode::Node { degree, children, .. } => {
                if path.is_empty() {
                    return 0;
                }
                let mut acc = *degree;
                for (j, c) in children.iter().enumerate() {
                    if j == path[0] {
                        return acc + go(c, &path[1..]);
                    }
                    acc += c.total_degree();
                }
                unreachable!("bad path");
            }
        }
    }
    go(&t.root, path)
}

/// Replaces the vertex at `path` (arity k) by a tree `rep` on k leaves;
/// the j-th child of the vertex is attached to leaf j of `rep`. Returns
/// the new tree and the Koszul sign of reordering the decoration word
/// from (rep-word, child-blocks in order) to the new pre-order. The
/// Leibniz prefix sign is NOT included.
pub fn splice(t: &Tree, path: &[usize], rep: &Tree) -> (Tree, i64) {
    // collect the children of the target vertex
    let target = vertex_at(t, path);
    let (old_children, k) = match target {
        TreeNode::Node { children, arity, .. } => (children.clone(), *arity),
        TreeNode::Leaf(_) => panic!("splice at a leaf"),
    };
    assert_eq!(rep.arity, k, "replacement arity mismatch");

    // the new subtree: rep with leaf j replaced by old child j
    fn build(node: &TreeNode, children: &[TreeNode]) -> TreeNode {
        match node {
            TreeNode::Leaf(j) => children[(*j - 1) as usize].clone(),
            TreeNode::Node { arity, degree, index, children: cs } => TreeNode::Node {
                arity: *arity,
                degree: *degree,
                index: *index,
                children: cs.iter().map(|c| build(c, children)).collect(),
            },
        }
    }
    let new_subtree = build(&rep.root, &old_children);

    // reorder sign: reference order = rep decorations (pre-order), then
    // child blocks 1..k; actual order = pre-order of rep with child
    // blocks at their leaf positions
    let mut rep_degrees = Vec::new();
    rep.root.preorder_degrees(&mut rep_degrees);
    let w = rep_degrees.len();
    let mut degrees = rep_degrees.clone();
    for c in &old_children {
        degrees.push(c.total_degree());
    }
    let mut new_order = Vec::with_capacity(w + k);
    fn emit(node: &TreeNode, counter: &mut usize, w: usize, out: &mut Vec<usize>) {
        match node {
            TreeNode::Leaf(j) => out.push(w + (*j - 1) as usize),
            TreeNode::Node { children, .. } => {
                out.push(*counter);
                *counter += 1;
                for c in children {
                    emit(c, counter, w, out);
                }
            }
        }
    }
    let mut counter = 0usize;
    emit(&rep.root, &mut counter, w, &mut new_order);
    let sign = reorder_sign(&degrees, &new_order);

    // rebuild the full tree with the subtree replaced
    fn rebuild(node: &TreeNode, path: &[usize], sub: &TreeNode) -> TreeNode {
        if path.is_empty() {
            return sub.clone();
        }
        match node {
            TreeNode::Node { arity, degree, index, children } => TreeNode::Node {
                arity: *arity,
                degree: *degree,
                index: *index,
                children: children
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        if j == path[0] {
                            rebuild(c, &path[1..], sub)
                        } else {
                            c.clone()
                        }
                    })
                    .collect(),
            },
            TreeNode::Leaf(_) => panic!("path through a leaf"),
        }
    }
    let root = rebuild(&t.root, path, &new_subtree);
    (Tree { arity: t.arity, root }, sign)
}

/// All canonical trees with the given sorted leaf set and decorations
/// from M, with at most `weight_cap` internal vertices (None = no cap).
pub fn enumerate_trees(
    m: &SigmaObject,
    r: usize,
    weight_cap: Option<usize>,
) -> Vec<Tree> {
    let leaves: Vec<u8> = (1..=r as u8).collect();
    let mut out: Vec<Tree> = enumerate_on(m, &leaves, weight_cap.unwrap_or(usize::MAX))
        .into_iter()
        .map(|n| Tree { arity: r, root: n })
        .collect();
    out.sort();
    out
}

/// Trees (with internal root) on the given leaf set; singleton sets give
/// no output here (handled as leaves by the caller).
fn enumerate_on(m: &SigmaObject, leaves: &[u8], weight_cap: usize) -> Vec<TreeNode> {
    let mut out = Vec::new();
    if leaves.len() < 2 || weight_cap == 0 {
        return out;
    }
    // all partitions of `leaves` into k >= 2 blocks, ordered by minimum
    for partition in set_partitions(leaves) {
        let k = partition.len();
        if k < 2 || k > m.r_max() {
            continue;
        }
        let comp = m.component(k);
        if comp.is_zero_complex() {
            continue;
        }
        // recursively enumerate each block's subtree options
        let mut options: Vec<Vec<TreeNode>> = Vec::with_capacity(k);
        let mut ok = true;
        for block in &partition {
            if block.len() == 1 {
                options.push(vec![TreeNode::Leaf(block[0])]);
            } else {
                let subs = enumerate_on(m, block, weight_cap - 1);
                if subs.is_empty() {
                    ok = false;
                    break;
                }
                options.push(subs);
            }
        }
        if !ok {
            continue;
        }
        // cartesian product over child options, with the weight cap
        let mut stack: Vec<(usize, Vec<TreeNode>, usize)> = vec![(0, Vec::new(), 1)];
        while let Some((j, acc, wsum)) = stack.pop() {
            if j == k {
                for d in comp.degrees() {
                    for idx in 0..comp.dim(d) {
                        out.push(TreeNode::Node {
                            arity: k,
                            degree: d,
                            index: idx,
                            children: acc.clone(),
                        });
                    }
                }
                continue;
            }
            for opt in &options[j] {
                let w = opt.weight();
                if wsum + w <= weight_cap {
                    let mut acc2 = acc.clone();
                    acc2.push(opt.clone());
                    stack.push((j + 1, acc2, wsum + w));
                }
            }
        }
    }
    out
}

/// Set partitions into blocks ordered by their minimum, blocks internally
/// sorted; restricted growth enumeration.
fn set_partitions(items: &[u8]) -> Vec<Vec<Vec<u8>>> {
    let n = items.len();
    let mut out = Vec::new();
    let mut assign = vec![0usize; n];
    fn go(
        items: &[u8],
        assign: &mut Vec<usize>,
        pos: usize,
        max_used: usize,
        out: &mut Vec<Vec<Vec<u8>>>,
    ) {
        if pos == items.len() {
            let k = max_used + 1;
            let mut blocks: Vec<Vec<u8>> = vec![Vec::new(); k];
            for (i, &b) in assign.iter().enumerate() {
                blocks[b].push(items[i]);
            }
            out.push(blocks);
            return;
        }
        for b in 0..=max_used + 1 {
            assign[pos] = b;
            go(items, assign, pos + 1, max_used.max(b), out);
        }
    }
    if n == 0 {
        return out;
    }
    assign[0] = 0;
    go(items, &mut assign, 1, 0, &mut out);
    // restricted growth blocks are already ordered by minimum
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homcore::{BasedComplex, CoefficientRing, Label};
    use crate::sigmaobj::{ArityAction, SigmaObject};

    fn trivial_gen_object(degree2: i64) -> SigmaObject {
        // M(2) = one generator in the given degree with trivial action
        let ring = CoefficientRing::Integers;
        let mut m = SigmaObject::zero(ring, 4);
        let mut c = BasedComplex::new(ring);
        c.set_basis(degree2, vec![Label::new("g")]);
        let a = ArityAction::trivial(2, &c);
        m.set_component(2, c, a).unwrap();
        m
    }

    #[test]
    fn free_ranks_trivial_generator() {
        let m = trivial_gen_object(0);
        assert_eq!(enumerate_trees(&m, 1, None).len(), 0); // internal-rooted only
        assert_eq!(enumerate_trees(&m, 2, None).len(), 1);
        // three binary trees on 3 leaves
        assert_eq!(enumerate_trees(&m, 3, None).len(), 3);
        // 15 binary trees on 4 leaves
        assert_eq!(enumerate_trees(&m, 4, None).len(), 15);
    }

    #[test]
    fn weight_cap_limits() {
        let m = trivial_gen_object(0);
        assert_eq!(enumerate_trees(&m, 3, Some(1)).len(), 0); // no 3-corolla
        assert_eq!(enumerate_trees(&m, 3, Some(2)).len(), 3);
    }

    #[test]
    fn graft_shapes() {
        let m = trivial_gen_object(0);
        let c2 = Tree::corolla(2, 0, 0);
        let (t, s) = graft(&c2, 1, &c2);
        assert_eq!(s, 1);
        assert_eq!(t.arity, 3);
        // leaf pair {1,2} meets first
        let trees = enumerate_trees(&m, 3, None);
        assert!(trees.contains(&t));
        match &t.root {
            TreeNode::Node { children, .. } => {
                assert_eq!(children[1], TreeNode::Leaf(3));
            }
            _ => panic!(),
        }
        // graft with the unit
        let (u, su) = graft(&c2, 2, &Tree::leaf());
        assert_eq!((u, su), (c2.clone(), 1));
    }

    #[test]
    fn graft_koszul_sign_odd_generators() {
        // generators in degree 1: grafting into slot 1 moves the q word
        // past nothing after leaf 1? p = corolla(2) word [g]; leaf 1 is
        // before nothing else of positive degree except nothing: the
        // degree after leaf 1 in pre-order is 0, so sign +1; slot 2 same.
        let c2 = Tree::corolla(2, 1, 0);
        let (_, s1) = graft(&c2, 1, &c2);
        assert_eq!(s1, 1);
        // p = binary tree x(y(1,2),3): grafting odd q into leaf 3 crosses
        // no later decorations; grafting into leaf 1 crosses none (all
        // decorations are before leaf 1? x then y then leaf 1): after
        // leaf 1 there are no decorations, so +1 again.
        let (p, _) = graft(&c2, 1, &c2);
        let (_, s3) = graft(&p, 3, &c2);
        assert_eq!(s3, 1);
        // x(1, y(2,3)): decorations: x, y; leaf 1 sits before y
        let (p2, _) = graft(&c2, 2, &c2);
        let (_, s) = graft(&p2, 1, &c2);
        assert_eq!(s, -1, "odd q must cross odd y");
    }

    #[test]
    fn splice_reorder() {
        // replace the root vertex of a corolla by a 2-vertex tree
        let m = trivial_gen_object(0);
        let _ = m;
        let c3 = Tree::corolla(3, 0, 0);
        let rep = {
            let c2 = Tree::corolla(2, 0, 0);
            let (t, _) = graft(&c2, 1, &c2);
            t
        };
        let (t, s) = splice(&c3, &[], &rep);
        assert_eq!(s, 1);
        assert_eq!(t, rep);
    }
}
