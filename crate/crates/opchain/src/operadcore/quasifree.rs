//! Quasi-free operads: free operads twisted by a derivation determined by
//! a generator map θ, plus the generator-determined morphisms out of them.

use std::collections::BTreeMap;

use super::free::FreeOperad;
use super::tree::{self};
use super::{flat_of, Chain, Operad};
use crate::homcore::{CoefficientRing, Scalar, SparseMat};
use crate::sigmaobj::{EquivariantMap, SigmaObject};
use crate::{Error, Result};

/// The data f: M -> Q of a candidate operad morphism out of a quasi-free
/// operad: degree-0 equivariant matrices per arity.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorMap {
    pub f: EquivariantMap,
}

impl GeneratorMap {
    pub fn zero(r_max: usize) -> Self {
        GeneratorMap { f: EquivariantMap::zero(r_max, 0) }
    }

    /// Image of a generator basis element as a chain in Q(r).
    pub fn apply_basis(
        &self,
        ring: &CoefficientRing,
        r: usize,
        d: i64,
        i: usize,
    ) -> Chain {
        let mut out = Chain::zero(r);
        if let Some(m) = self.f.matrix(r, d) {
            for (row, col, v) in m.entries() {
                if col == i {
                    out.add_term(ring, d, row, v);
                }
            }
        }
        out
    }

    /// Scales every matrix by a ring element.
    pub fn scale(&self, ring: &CoefficientRing, c: &Scalar) -> GeneratorMap {
        let mut out = self.clone();
        for per in out.f.per_arity.iter_mut() {
            for (_, m) in per.iter_mut() {
                *m = m.scale(ring, c);
            }
        }
        out
    }
}

/// A quasi-free operad (F(M), δ + ∂_θ).
#[derive(Clone, Debug)]
pub struct QuasiFreeOperad {
    pub free: FreeOperad,
    /// θ: M -> F(M) of degree -1, landing in weight >= 2.
    pub theta: EquivariantMap,
    /// ∂_θ as per-arity matrices on F(M).
    pub derivation: EquivariantMap,
    /// F(M) components carrying the twisted differential δ + ∂_θ.
    pub twisted: SigmaObject,
}

impl QuasiFreeOperad {
    pub fn new(free: FreeOperad, theta: EquivariantMap) -> Result<Self> {
        if theta.degree != -1 {
            return Err(Error::Validation("twisting map must have degree -1".into()));
        }
        theta
            .validate_equivariance(&free.m, &free.components)
            .map_err(|_| Error::NotEquivariant)?;
        let derivation = derivation_from_generator_map(&free, &theta)?;
        // θ must land in the weight >= 2 part of F(M)
        for r in 2..=free.r_max {
            if let Some(per) = theta.per_arity.get(r) {
                for (m_deg, mat) in per.iter() {
                    let target = free.components.component(r);
                    for (row_flat, _col, v) in to_flat_rows(target, *m_deg - 1, mat).into_iter() {
                        if free.ring().is_zero(&v) {
                            continue;
                        }
                        let w = free.tree_basis(r)[row_flat].weight();
                        if w < 2 {
                            return Err(Error::Validation(
                                "twisting map must land in weight >= 2".into(),
                            ));
                        }
                    }
                }
            }
        }
        let twisted = twist_components(&free, &derivation)?;
        Ok(QuasiFreeOperad { free, theta, derivation, twisted })
    }

    pub fn ring(&self) -> CoefficientRing {
        self.free.ring()
    }

    pub fn r_max(&self) -> usize {
        self.free.r_max
    }

    pub fn generators(&self) -> &SigmaObject {
        &self.free.m
    }

    /// The operad structure over the twisted components.
    pub fn to_operad(&self) -> Result<Operad> {
        self.free.to_operad_with(self.twisted.clone())
    }
}

fn to_flat_rows(
    c: &crate::homcore::BasedComplex,
    target_degree: i64,
    mat: &SparseMat,
) -> Vec<(usize, usize, Scalar)> {
    // rows of `mat` index c's basis at `target_degree`; return flat rows
    mat.entries()
        .map(|(r, col, v)| (flat_of(c, target_degree, r), col, v.clone()))
        .collect()
}

/// Extends θ: M -> F(M) to the derivation ∂_θ on tree bases by the
/// Leibniz rule; the matrices act degreewise on each arity component.
pub fn derivation_from_generator_map(
    free: &FreeOperad,
    theta: &EquivariantMap,
) -> Result<EquivariantMap> {
    if theta.degree != -1 {
        return Err(Error::Validation("derivation generator must have degree -1".into()));
    }
    theta
        .validate_equivariance(&free.m, &free.components)
        .map_err(|_| Error::NotEquivariant)?;
    let ring = free.ring();
    let mut out = EquivariantMap::zero(free.r_max, -1);
    for r in 1..=free.r_max {
        let comp = free.components.component(r).clone();
        if comp.is_zero_complex() {
            continue;
        }
        // accumulate triples per source degree
        let mut per_degree: BTreeMap<i64, Vec<(usize, usize, Scalar)>> = BTreeMap::new();
        for d in comp.degrees() {
            for col in 0..comp.dim(d) {
                let t = free.tree_of(r, d, col).clone();
                for (path, term_chain) in derivation_terms(free, theta, &t)? {
                    let _ = path;
                    for (&(dt, it), v) in &term_chain.terms {
                        debug_assert_eq!(dt, d - 1);
                        per_degree.entry(d).or_default().push((it, col, v.clone()));
                    }
                }
            }
        }
        for (d, triples) in per_degree {
            let mat = SparseMat::from_triples(&ring, comp.dim(d - 1), comp.dim(d), triples);
            if !mat.is_zero_mat() {
                out.per_arity[r].insert(d, mat);
            }
        }
    }
    Ok(out)
}

/// The Leibniz terms of ∂_θ(t), one per vertex, as chains.
fn derivation_terms(
    free: &FreeOperad,
    theta: &EquivariantMap,
    t: &tree::Tree,
) -> Result<Vec<(Vec<usize>, Chain)>> {
    let ring = free.ring();
    let mut out = Vec::new();
    for path in tree::vertex_paths(t) {
        let node = tree::vertex_at(t, &path);
        let (k, deg, idx) = match node {
            tree::TreeNode::Node { arity, degree, index, .. } => (*arity, *degree, *index),
            _ => unreachable!(),
        };
        let Some(theta_mat) = theta.matrix(k, deg) else { continue };
        let prefix = tree::degree_before_vertex(t, &path);
        let leibniz = if prefix.rem_euclid(2) == 0 { 1i64 } else { -1 };
        let target = free.components.component(k);
        let mut chain = Chain::zero(t.arity);
        for (row, col, v) in theta_mat.entries() {
            if col != idx {
                continue;
            }
            let rep = free.tree_of(k, deg - 1, row);
            let (new_t, reorder) = tree::splice(t, &path, rep);
            let (dt, it) = free.index_of(&new_t).ok_or_else(|| {
                Error::Validation("derivation left the enumerated weight range".into())
            })?;
            let coeff = ring.mul(v, &ring.from_i64(leibniz * reorder));
            chain.add_term(&ring, dt, it, &coeff);
        }
        let _ = target;
        if !chain.is_zero() {
            out.push((path, chain));
        }
    }
    Ok(out)
}

/// F(M) components with differential δ + ∂_θ.
fn twist_components(free: &FreeOperad, derivation: &EquivariantMap) -> Result<SigmaObject> {
    let ring = free.ring();
    let mut out = free.components.clone();
    for r in 1..=free.r_max {
        let base = free.components.component(r);
        if base.is_zero_complex() {
            continue;
        }
        let mut c = base.clone();
        for d in base.degrees() {
            let mut m = base.differential(d);
            if let Some(extra) = derivation.matrix(r, d) {
                m = m.add(&ring, extra)?;
            }
            c.set_diff(d, m)?;
        }
        let action = free.components.action(r).clone();
        out.set_component(r, c, action)?;
    }
    Ok(out)
}

/// The twisting residual δ(θ) + ∂_θ·θ, arity by arity.
#[derive(Clone, Debug)]
pub struct TwistingReport {
    pub pass: bool,
    pub residual: EquivariantMap,
}

impl TwistingReport {
    pub fn residual_nnz(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for (r, per) in self.residual.per_arity.iter().enumerate() {
            let n: usize = per.values().map(|m| m.nnz()).sum();
            if n > 0 {
                out.insert(r, n);
            }
        }
        out
    }
}

/// Computes δ(θ) + ∂_θ·θ as matrices M(r) -> F(M)(r) and checks that the
/// twisted differential squares to zero.
pub fn check_twisting(qf: &QuasiFreeOperad) -> Result<TwistingReport> {
    let free = &qf.free;
    let ring = free.ring();
    let mut residual = EquivariantMap::zero(free.r_max, -2);
    for r in 2..=free.r_max {
        let mc = free.m.component(r);
        let fc = free.components.component(r);
        if mc.is_zero_complex() {
            continue;
        }
        for m_deg in mc.degrees() {
            let cols = mc.dim(m_deg);
            let rows = fc.dim(m_deg - 2);
            let theta_here = match qf.theta.matrix(r, m_deg) {
                Some(m) => m.clone(),
                None => SparseMat::zero(fc.dim(m_deg - 1), cols),
            };
            // δ_F ∘ θ
            let df = fc.differential(m_deg - 1);
            let mut acc = df.mul(&ring, &theta_here)?;
            // + θ ∘ δ_M  (sign: δ(θ) = δ_F θ - (-1)^{|θ|} θ δ_M, |θ| = -1)
            let dm = mc.differential(m_deg);
            let theta_lower = match qf.theta.matrix(r, m_deg - 1) {
                Some(m) => m.clone(),
                None => SparseMat::zero(fc.dim(m_deg - 2), mc.dim(m_deg - 1)),
            };
            acc = acc.add(&ring, &theta_lower.mul(&ring, &dm)?)?;
            // + ∂_θ ∘ θ
            let der = match qf.derivation.matrix(r, m_deg - 1) {
                Some(m) => m.clone(),
                None => SparseMat::zero(rows, fc.dim(m_deg - 1)),
            };
            acc = acc.add(&ring, &der.mul(&ring, &theta_here)?)?;
            if !acc.is_zero_mat() {
                residual.per_arity[r].insert(m_deg, acc);
            }
        }
    }
    let mut pass = residual.is_zero();
    // equivalent restatement: (δ + ∂_θ)^2 = 0 on the truncation
    if qf.twisted.validate().is_err() {
        pass = false;
    }
    Ok(TwistingReport { pass, residual })
}

/// A generator-determined candidate morphism φ_f: per-arity matrices on
/// tree bases, together with the residual δ(f) - φ_f·θ on generators.
#[derive(Clone, Debug)]
pub struct MorphismData {
    /// φ_f on F(M)(r), degree 0, keyed by source degree.
    pub phi: EquivariantMap,
    /// δ(f) - φ_f·θ: M(r) -> Q(r), degree -1.
    pub residual: EquivariantMap,
}

impl MorphismData {
    pub fn residual_is_zero(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Builds φ_f on tree bases by composing decoration images in Q, and the
/// morphism residual δ(f) - φ_f·θ.
pub fn morphism_from_generator_map(
    qf: &QuasiFreeOperad,
    q: &Operad,
    f: &GeneratorMap,
) -> Result<MorphismData> {
    let free = &qf.free;
    let ring = free.ring();
    if f.f.degree != 0 {
        return Err(Error::Validation("generator map must have degree 0".into()));
    }
    if q.r_max() < free.r_max {
        return Err(Error::Validation("target operad truncation too small".into()));
    }
    f.f.validate_equivariance(&free.m, &q.underlying)
        .map_err(|_| Error::NotEquivariant)?;

    let mut phi = EquivariantMap::zero(free.r_max, 0);
    for r in 1..=free.r_max {
        let fc = free.components.component(r);
        if fc.is_zero_complex() {
            continue;
        }
        let qc = q.component(r);
        let mut per_degree: BTreeMap<i64, Vec<(usize, usize, Scalar)>> = BTreeMap::new();
        for d in fc.degrees() {
            for col in 0..fc.dim(d) {
                let t = free.tree_of(r, d, col);
                let img = eval_tree(&t.root, f, q)?;
                for (&(dq, iq), v) in &img.terms {
                    debug_assert_eq!(dq, d);
                    per_degree.entry(d).or_default().push((iq, col, v.clone()));
                }
            }
        }
        for (d, triples) in per_degree {
            let mat = SparseMat::from_triples(&ring, qc.dim(d), fc.dim(d), triples);
            if !mat.is_zero_mat() {
                phi.per_arity[r].insert(d, mat);
            }
        }
    }

    // residual: δ(f) - φ_f ∘ θ on M(r)
    let mut residual = EquivariantMap::zero(free.r_max, -1);
    for r in 2..=free.r_max {
        let mc = free.m.component(r);
        if mc.is_zero_complex() {
            continue;
        }
        let qc = q.component(r);
        for m_deg in mc.degrees() {
            let cols = mc.dim(m_deg);
            let rows = qc.dim(m_deg - 1);
            // δ_Q ∘ f
            let f_here = match f.f.matrix(r, m_deg) {
                Some(m) => m.clone(),
                None => SparseMat::zero(qc.dim(m_deg), cols),
            };
            let mut acc = qc.differential(m_deg).mul(&ring, &f_here)?;
            // - f ∘ δ_M
            let f_lower = match f.f.matrix(r, m_deg - 1) {
                Some(m) => m.clone(),
                None => SparseMat::zero(qc.dim(m_deg - 1), mc.dim(m_deg - 1)),
            };
            let fdm = f_lower.mul(&ring, &mc.differential(m_deg))?;
            acc = acc.add(&ring, &fdm.neg(&ring))?;
            // - φ_f ∘ θ
            let theta_here = match qf.theta.matrix(r, m_deg) {
                Some(m) => m.clone(),
                None => {
                    SparseMat::zero(free.components.component(r).dim(m_deg - 1), cols)
                }
            };
            let phi_here = match phi.matrix(r, m_deg - 1) {
                Some(m) => m.clone(),
                None => SparseMat::zero(rows, free.components.component(r).dim(m_deg - 1)),
            };
            let pt = phi_here.mul(&ring, &theta_here)?;
            acc = acc.add(&ring, &pt.neg(&ring))?;
            if !acc.is_zero_mat() {
                residual.per_arity[r].insert(m_deg, acc);
            }
        }
    }

    Ok(MorphismData { phi, residual })
}

/// Evaluates a decorated tree in Q: decorations map through f and the
/// children are composed left to right (matching the pre-order
/// orientation of the tree basis).
fn eval_tree(node: &tree::TreeNode, f: &GeneratorMap, q: &Operad) -> Result<Chain> {
    let ring = q.ring();
    match node {
        tree::TreeNode::Leaf(_) => Ok(q.unit_chain()),
        tree::TreeNode::Node { arity, degree, index, children } => {
            let mut acc = f.apply_basis(&ring, *arity, *degree, *index);
            let mut pos = 1usize;
            for c in children {
                let sub = eval_tree(c, f, q)?;
                if acc.is_zero() || sub.is_zero() {
                    let total: usize = children.iter().map(count_leaves).sum();
                    return Ok(Chain::zero(total));
                }
                let a = sub.arity;
                acc = q.compose_chain(&acc, pos, &sub)?;
                pos += a;
            }
            Ok(acc)
        }
    }
}

fn count_leaves(node: &tree::TreeNode) -> usize {
    match node {
        tree::TreeNode::Leaf(_) => 1,
        tree::TreeNode::Node { children, .. } => children.iter().map(count_leaves).sum(),
    }
}

/// Generators truncated to arity <= s; the restricted twisting map is
/// validated on the result.
pub fn operad_skeleton(qf: &QuasiFreeOperad, s: usize) -> Result<QuasiFreeOperad> {
    let m_sk = qf.free.m.skeleton(s);
    let caps = qf.free.weight_caps.clone();
    let free_sk = FreeOperad::new(&m_sk, qf.free.r_max, |r| {
        caps.get(r).copied().flatten()
    })?;
    // restrict θ: re-index old target trees into the skeleton basis
    let mut theta_sk = EquivariantMap::zero(free_sk.r_max, -1);
    let ring = qf.ring();
    for r in 2..=s.min(qf.r_max()) {
        let mc = qf.free.m.component(r);
        for m_deg in mc.degrees() {
            let Some(mat) = qf.theta.matrix(r, m_deg) else { continue };
            let mut triples: Vec<(usize, usize, Scalar)> = Vec::new();
            for (row, col, v) in mat.entries() {
                let t = qf.free.tree_of(r, m_deg - 1, row);
                let Some((dt, it)) = free_sk.index_of(t) else {
                    return Err(Error::Validation(format!(
                        "twisting map does not restrict to the skeleton at arity {r}"
                    )));
                };
                debug_assert_eq!(dt, m_deg - 1);
                triples.push((it, col, v.clone()));
            }
            let rows = free_sk.components.component(r).dim(m_deg - 1);
            let mat = SparseMat::from_triples(&ring, rows, mc.dim(m_deg), triples);
            if !mat.is_zero_mat() {
                theta_sk.per_arity[r].insert(m_deg, mat);
            }
        }
    }
    let out = QuasiFreeOperad::new(free_sk, theta_sk)?;
    let rep = check_twisting(&out)?;
    if !rep.pass {
        return Err(Error::Validation(
            "restricted twisting map fails the twisting equation".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homcore::{BasedComplex, Label};
    use crate::sigmaobj::{ArityAction, SigmaObject};

    fn z() -> CoefficientRing {
        CoefficientRing::Integers
    }

    fn trivial_gen(degree2: i64) -> SigmaObject {
        let mut m = SigmaObject::zero(z(), 4);
        let mut c = BasedComplex::new(z());
        c.set_basis(degree2, vec![Label::new("g")]);
        m.set_component(2, c.clone(), ArityAction::trivial(2, &c)).unwrap();
        m
    }

    #[test]
    fn zero_theta_passes_twisting() {
        let m = trivial_gen(0);
        let free = FreeOperad::new(&m, 4, |_| None).unwrap();
        let theta = EquivariantMap::zero(4, -1);
        let qf = QuasiFreeOperad::new(free, theta).unwrap();
        let rep = check_twisting(&qf).unwrap();
        assert!(rep.pass);
        assert!(qf.derivation.is_zero());
    }

    #[test]
    fn derivation_restricted_to_generators_is_theta() {
        // generators in degrees 1 (arity 2); θ maps the arity-3 part of
        // nothing; instead check on a 2-generator object with a nonzero
        // differential-like θ at arity 3 via the free basis
        let mut m = SigmaObject::zero(z(), 3);
        let mut c2 = BasedComplex::new(z());
        c2.set_basis(0, vec![Label::new("a")]);
        m.set_component(2, c2.clone(), ArityAction::trivial(2, &c2)).unwrap();
        let mut c3 = BasedComplex::new(z());
        c3.set_basis(1, vec![Label::new("b")]);
        m.set_component(3, c3.clone(), ArityAction::trivial(3, &c3)).unwrap();
        let free = FreeOperad::new(&m, 3, |_| None).unwrap();
        // θ(b) = sum of the three 2-vertex trees (all in degree 0)
        let fc3 = free.components.component(3);
        assert_eq!(fc3.dim(0), 3);
        let theta_mat = SparseMat::from_int_triples(&z(), 3, 1, vec![(0, 0, 1), (1, 0, 1), (2, 0, 1)]);
        let mut theta = EquivariantMap::zero(3, -1);
        theta.per_arity[3].insert(1, theta_mat.clone());
        let der = derivation_from_generator_map(&free, &theta).unwrap();
        assert_eq!(der.matrix(3, 1), Some(&theta_mat));
    }

    #[test]
    fn skeleton_to_unit() {
        let m = trivial_gen(0);
        let free = FreeOperad::new(&m, 3, |_| None).unwrap();
        let qf = QuasiFreeOperad::new(free, EquivariantMap::zero(3, -1)).unwrap();
        let sk1 = operad_skeleton(&qf, 1).unwrap();
        assert_eq!(sk1.free.components.component(1).total_dim(), 1);
        assert!(sk1.free.components.component(2).is_zero_complex());
        assert!(sk1.free.components.component(3).is_zero_complex());
        let sk_all = operad_skeleton(&qf, 3).unwrap();
        assert_eq!(
            sk_all.free.components.component(3).total_dim(),
            qf.free.components.component(3).total_dim()
        );
    }
}
