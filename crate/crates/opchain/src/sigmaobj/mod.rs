//! Arity-indexed complexes with symmetric-group actions: suspension,
//! duals, (co)invariants, skeleta, and equivariant Hom complexes.

pub mod perm;

pub use perm::Perm;

use std::collections::BTreeMap;

use crate::homcore::{BasedComplex, CoefficientRing, SparseMat};
use crate::{Error, Result};

/// A signed permutation of an indexed basis: i -> (image, sign).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedPerm {
    pub map: Vec<(usize, i8)>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm { map: (0..n).map(|i| (i, 1)).collect() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &(j, s))| i == j && s == 1)
    }

    /// (self ∘ other): apply other first.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        assert_eq!(self.len(), other.len());
        SignedPerm {
            map: other
                .map
                .iter()
                .map(|&(j, s)| {
                    let (k, t) = self.map[j];
                    (k, s * t)
                })
                .collect(),
        }
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut map = vec![(0usize, 1i8); self.len()];
        for (i, &(j, s)) in self.map.iter().enumerate() {
            map[j] = (i, s);
        }
        SignedPerm { map }
    }

    pub fn scale(&self, sign: i8) -> SignedPerm {
        SignedPerm { map: self.map.iter().map(|&(j, s)| (j, s * sign)).collect() }
    }

    pub fn to_matrix(&self, ring: &CoefficientRing) -> SparseMat {
        SparseMat::from_int_triples(
            ring,
            self.len(),
            self.len(),
            self.map.iter().enumerate().map(|(i, &(j, s))| (j, i, s as i64)),
        )
    }
}

/// A degreewise signed permutation, matching the degrees of a complex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegSignedPerm {
    pub by_degree: BTreeMap<i64, SignedPerm>,
}

impl DegSignedPerm {
    pub fn identity(c: &BasedComplex) -> Self {
        DegSignedPerm {
            by_degree: c
                .degrees()
                .into_iter()
                .map(|d| (d, SignedPerm::identity(c.dim(d))))
                .collect(),
        }
    }

    pub fn compose(&self, other: &DegSignedPerm) -> DegSignedPerm {
        DegSignedPerm {
            by_degree: self
                .by_degree
                .iter()
                .map(|(&d, p)| (d, p.compose(&other.by_degree[&d])))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.by_degree.values().all(|p| p.is_identity())
    }

    pub fn get(&self, degree: i64) -> Option<&SignedPerm> {
        self.by_degree.get(&degree)
    }
}

/// The Σ_r action on a based complex, stored through the images of the
/// adjacent transpositions (i, i+1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArityAction {
    pub r: usize,
    /// gens[i-1] is the action of the transposition (i, i+1), 1 <= i < r.
    pub gens: Vec<DegSignedPerm>,
}

impl ArityAction {
    pub fn trivial(r: usize, c: &BasedComplex) -> Self {
        let n = r.saturating_sub(1);
        ArityAction { r, gens: vec![DegSignedPerm::identity(c); n] }
    }

    /// The action of an arbitrary permutation, composed from generators.
    pub fn of(&self, p: &Perm, c: &BasedComplex) -> DegSignedPerm {
        assert_eq!(p.arity(), self.r);
        let mut acc = DegSignedPerm::identity(c);
        for i in p.adjacent_factorization() {
            acc = acc.compose(&self.gens[i - 1]);
        }
        acc
    }

    /// Twist every generator by (-1)^n (the signature twist of an n-fold
    /// operadic suspension).
    pub fn signature_twist(&self, n: i64) -> ArityAction {
        if n.rem_euclid(2) == 0 {
            return self.clone();
        }
        ArityAction {
            r: self.r,
            gens: self
                .gens
                .iter()
                .map(|g| DegSignedPerm {
                    by_degree: g
                        .by_degree
                        .iter()
                        .map(|(&d, p)| (d, p.scale(-1)))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Re-keys degrees d -> -d (the dual action; signed permutation
    /// matrices are orthogonal, so the inverse-transpose has the same
    /// signed permutation data).
    pub fn dual(&self) -> ArityAction {
        ArityAction {
            r: self.r,
            gens: self
                .gens
                .iter()
                .map(|g| DegSignedPerm {
                    by_degree: g.by_degree.iter().map(|(&d, p)| (-d, p.clone())).collect(),
                })
                .collect(),
        }
    }

    pub fn shift_degrees(&self, d: i64) -> ArityAction {
        ArityAction {
            r: self.r,
            gens: self
                .gens
                .iter()
                .map(|g| DegSignedPerm {
                    by_degree: g.by_degree.iter().map(|(&m, p)| (m + d, p.clone())).collect(),
                })
                .collect(),
        }
    }

    /// Validates the Coxeter presentation on generators and equivariance
    /// of the differential.
    pub fn validate(&self, c: &BasedComplex) -> Result<()> {
        let n = self.gens.len();
        if self.r >= 2 && n != self.r - 1 {
            return Err(Error::Validation("generator count mismatch".into()));
        }
        for g in &self.gens {
            for d in c.degrees() {
                let p = g
                    .get(d)
                    .ok_or_else(|| Error::Validation("action missing a degree".into()))?;
                if p.len() != c.dim(d) {
                    return Err(Error::Validation("action dimension mismatch".into()));
                }
            }
        }
        let id = DegSignedPerm::identity(c);
        for (i, g) in self.gens.iter().enumerate() {
            let mut gg = g.clone();
            gg.by_degree.retain(|d, _| c.dim(*d) > 0);
            if gg.compose(&gg) != id {
                return Err(Error::Validation(format!("s_{} is not an involution", i + 1)));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&self.gens[i], &self.gens[j]);
                if j == i + 1 {
                    let lhs = a.compose(b).compose(a);
                    let rhs = b.compose(a).compose(b);
                    if lhs != rhs {
                        return Err(Error::Validation(format!(
                            "braid relation fails for s_{}, s_{}",
                            i + 1,
                            j + 1
                        )));
                    }
                } else if a.compose(b) != b.compose(a) {
                    return Err(Error::Validation(format!(
                        "commutation fails for s_{}, s_{}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        // differential equivariance
        for g in &self.gens {
            for d in c.degrees() {
                let diff = c.differential(d);
                if diff.is_zero_mat() {
                    continue;
                }
                let a_d = g.get(d).unwrap().to_matrix(&c.ring);
                let a_prev = match g.get(d - 1) {
                    Some(p) => p.to_matrix(&c.ring),
                    None => SparseMat::zero(c.dim(d - 1), c.dim(d - 1)),
                };
                let lhs = a_prev.mul(&c.ring, &diff)?;
                let rhs = diff.mul(&c.ring, &a_d)?;
                if lhs != rhs {
                    return Err(Error::Validation(format!(
                        "action does not commute with the differential at degree {d}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Orbit decomposition of a signed action on one degree's basis.
struct OrbitData {
    /// element -> orbit representative (minimal index)
    rep: Vec<usize>,
    /// element -> sign with e_i = sign * e_rep in the coinvariants
    sign: Vec<i8>,
    /// orbit rep -> consistent?
    consistent: BTreeMap<usize, bool>,
    /// orbit rep -> orbit size
    size: BTreeMap<usize, usize>,
}

fn orbits(n: usize, gens: &[&SignedPerm]) -> OrbitData {
    let mut rep = vec![usize::MAX; n];
    let mut sign = vec![0i8; n];
    let mut consistent = BTreeMap::new();
    let mut size = BTreeMap::new();
    for start in 0..n {
        if rep[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        rep[start] = start;
        sign[start] = 1;
        let mut ok = true;
        let mut count = 1usize;
        while let Some(i) = stack.pop() {
            for g in gens {
                // e_i ≡ s e_j in the coinvariants, where g(e_i) = s e_j
                let (j, s) = g.map[i];
                let new_sign = sign[i] * s;
                if rep[j] == usize::MAX {
                    rep[j] = start;
                    sign[j] = new_sign;
                    count += 1;
                    stack.push(j);
                } else if sign[j] != new_sign {
                    ok = false;
                }
            }
        }
        consistent.insert(start, ok);
        size.insert(start, count);
    }
    OrbitData { rep, sign, consistent, size }
}

fn char_two(ring: &CoefficientRing) -> bool {
    matches!(ring, CoefficientRing::PrimeField(2))
}

/// Coinvariants of a signed action: cokernel of all action(σ) - id, with
/// orbit-representative basis. Over the integers an inconsistent orbit
/// would create 2-torsion, which a based complex cannot carry.
pub fn coinvariants_of(c: &BasedComplex, act: &ArityAction) -> Result<BasedComplex> {
    quotient_or_fixed(c, act, true)
}

/// Invariants of a signed action: the joint kernel of all action(σ) - id,
/// with orbit-norm basis.
pub fn invariants_of(c: &BasedComplex, act: &ArityAction) -> Result<BasedComplex> {
    quotient_or_fixed(c, act, false)
}

fn quotient_or_fixed(c: &BasedComplex, act: &ArityAction, quotient: bool) -> Result<BasedComplex> {
    let ring = c.ring;
    let mut out = BasedComplex::new(ring);
    let mut orbit_data: BTreeMap<i64, OrbitData> = BTreeMap::new();
    let mut rep_index: BTreeMap<i64, BTreeMap<usize, usize>> = BTreeMap::new();
    for d in c.degrees() {
        let gens: Vec<&SignedPerm> = act
            .gens
            .iter()
            .map(|g| {
                g.get(d)
                    .ok_or_else(|| Error::Validation("action missing degree".into()))
            })
            .collect::<Result<_>>()?;
        let data = orbits(c.dim(d), &gens);
        let mut labels = Vec::new();
        let mut idx = BTreeMap::new();
        for (&r, &ok) in &data.consistent {
            let keep = ok || char_two(&ring);
            if !keep {
                if quotient && ring == CoefficientRing::Integers {
                    return Err(Error::NonFreeCoinvariants(c.labels(d)[r].0.clone()));
                }
                continue;
            }
            idx.insert(r, labels.len());
            labels.push(c.labels(d)[r].clone());
        }
        out.set_basis(d, labels);
        rep_index.insert(d, idx);
        orbit_data.insert(d, data);
    }
    let degrees = out.degrees();
    for &d in &degrees {
        let diff = c.differential(d);
        if diff.is_zero_mat() {
            continue;
        }
        let rows = out.dim(d - 1);
        let cols = out.dim(d);
        let (Some(idx_d), Some(idx_prev)) = (rep_index.get(&d), rep_index.get(&(d - 1))) else {
            continue;
        };
        let data_d = &orbit_data[&d];
        let data_prev = &orbit_data[&(d - 1)];
        let mut triples: Vec<(usize, usize, crate::homcore::Scalar)> = Vec::new();
        if quotient {
            for (&rep, &col) in idx_d {
                for (r, v) in diff.column(rep) {
                    let r_rep = data_prev.rep[r];
                    let Some(&row) = idx_prev.get(&r_rep) else { continue };
                    let s = data_prev.sign[r] as i64;
                    let w = if s == 1 { v.clone() } else { ring.neg(v) };
                    triples.push((row, col, w));
                }
            }
        } else {
            // d(v_O) for the norm vector of orbit O, read off at the
            // representative rows of the target orbits
            for (&rep, &col) in idx_d {
                let mut acc: BTreeMap<usize, crate::homcore::Scalar> = BTreeMap::new();
                for (k, &ks) in data_d.sign.iter().enumerate() {
                    if data_d.rep[k] != rep {
                        continue;
                    }
                    for (r, v) in diff.column(k) {
                        if data_prev.rep[r] != r {
                            continue;
                        }
                        let w = if ks == 1 { v.clone() } else { ring.neg(v) };
                        let cur = acc.remove(&r).unwrap_or_else(|| ring.zero());
                        acc.insert(r, ring.add(&cur, &w));
                    }
                }
                for (r, v) in acc {
                    if ring.is_zero(&v) {
                        continue;
                    }
                    let Some(&row) = idx_prev.get(&r) else {
                        return Err(Error::Validation(
                            "invariant differential hits a dropped orbit".into(),
                        ));
                    };
                    triples.push((row, col, v));
                }
            }
        }
        let m = SparseMat::from_triples(&ring, rows, cols, triples);
        out.set_diff(d, m)?;
    }
    Ok(out)
}

/// Arity-indexed family of based complexes with Σ_r actions.
#[derive(Clone, Debug)]
pub struct SigmaObject {
    pub ring: CoefficientRing,
    components: Vec<BasedComplex>,
    actions: Vec<ArityAction>,
}

impl SigmaObject {
    /// All components zero up to the given maximal arity.
    pub fn zero(ring: CoefficientRing, r_max: usize) -> Self {
        let components: Vec<BasedComplex> =
            (0..=r_max).map(|_| BasedComplex::zero(ring)).collect();
        let actions = (0..=r_max)
            .map(|r| ArityAction::trivial(r, &components[r]))
            .collect();
        SigmaObject { ring, components, actions }
    }

    pub fn set_component(&mut self, r: usize, c: BasedComplex, action: ArityAction) -> Result<()> {
        if r >= self.components.len() {
            return Err(Error::Validation("arity beyond truncation".into()));
        }
        if c.ring != self.ring {
            return Err(Error::RingMismatch);
        }
        action.validate(&c)?;
        self.components[r] = c;
        self.actions[r] = action;
        Ok(())
    }

    pub fn r_max(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, r: usize) -> &BasedComplex {
        &self.components[r]
    }

    pub fn action(&self, r: usize) -> &ArityAction {
        &self.actions[r]
    }

    pub fn validate(&self) -> Result<()> {
        for r in 0..=self.r_max() {
            self.components[r].validate()?;
            self.actions[r].validate(&self.components[r])?;
        }
        Ok(())
    }

    /// Exhaustive group-law check: action(σ)action(τ) = action(στ).
    pub fn validate_group_law(&self, r: usize) -> Result<()> {
        let c = &self.components[r];
        let act = &self.actions[r];
        let perms = Perm::all(r);
        for s in &perms {
            let a_s = act.of(s, c);
            for t in &perms {
                let a_t = act.of(t, c);
                let a_st = act.of(&s.compose(t), c);
                if a_s.compose(&a_t) != a_st {
                    return Err(Error::Validation(format!(
                        "group law fails at arity {r}: {s} * {t}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Operadic suspension: arity r shifts by n(1-r) and twists the action
    /// by the n-th power of the signature.
    pub fn suspend(&self, n: i64) -> SigmaObject {
        let mut out = SigmaObject::zero(self.ring, self.r_max());
        for r in 0..=self.r_max() {
            let shift = n * (1 - r as i64);
            out.components[r] = self.components[r].shift(shift);
            out.actions[r] = self.actions[r].signature_twist(n).shift_degrees(shift);
        }
        out
    }

    /// Componentwise linear dual with the contragredient action.
    pub fn dual_sigma(&self) -> SigmaObject {
        let mut out = SigmaObject::zero(self.ring, self.r_max());
        for r in 0..=self.r_max() {
            out.components[r] = self.components[r].dual();
            out.actions[r] = self.actions[r].dual();
        }
        out
    }

    /// Arities above s replaced by zero.
    pub fn skeleton(&self, s: usize) -> SigmaObject {
        let mut out = SigmaObject::zero(self.ring, self.r_max());
        for r in 0..=s.min(self.r_max()) {
            out.components[r] = self.components[r].clone();
            out.actions[r] = self.actions[r].clone();
        }
        out
    }

    pub fn coinvariants(&self, r: usize) -> Result<BasedComplex> {
        coinvariants_of(&self.components[r], &self.actions[r])
    }

    pub fn invariants(&self, r: usize) -> Result<BasedComplex> {
        invariants_of(&self.components[r], &self.actions[r])
    }

    /// Orbit sizes all equal r! (trivial stabilizers)?
    pub fn action_is_free(&self, r: usize) -> bool {
        let c = &self.components[r];
        let act = &self.actions[r];
        let full = (1..=r).product::<usize>();
        c.degrees().into_iter().all(|d| {
            let gens: Vec<&SignedPerm> = act.gens.iter().map(|g| g.get(d).unwrap()).collect();
            let data = orbits(c.dim(d), &gens);
            data.size.values().all(|&s| s == full)
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut arr = Vec::new();
        for r in 0..=self.r_max() {
            let mut obj = serde_json::Map::new();
            obj.insert("arity".into(), serde_json::Value::from(r));
            obj.insert("component".into(), self.components[r].to_json());
            let gens: Vec<serde_json::Value> = self.actions[r]
                .gens
                .iter()
                .map(|g| {
                    let mut m = serde_json::Map::new();
                    for (d, p) in &g.by_degree {
                        let pairs: Vec<serde_json::Value> = p
                            .map
                            .iter()
                            .map(|&(j, s)| {
                                serde_json::Value::Array(vec![
                                    serde_json::Value::from(j),
                                    serde_json::Value::from(s),
                                ])
                            })
                            .collect();
                        m.insert(d.to_string(), serde_json::Value::Array(pairs));
                    }
                    serde_json::Value::Object(m)
                })
                .collect();
            obj.insert("transpositions".into(), serde_json::Value::Array(gens));
            arr.push(serde_json::Value::Object(obj));
        }
        serde_json::Value::Array(arr)
    }
}

/// A degree-homogeneous collection of per-arity matrices commuting with
/// the symmetric group actions.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantMap {
    pub degree: i64,
    /// per arity r, keyed by source degree m: matrix source(r)_m ->
    /// target(r)_{m+degree}
    pub per_arity: Vec<BTreeMap<i64, SparseMat>>,
}

impl EquivariantMap {
    pub fn zero(r_max: usize, degree: i64) -> Self {
        EquivariantMap { degree, per_arity: vec![BTreeMap::new(); r_max + 1] }
    }

    pub fn matrix(&self, r: usize, m: i64) -> Option<&SparseMat> {
        self.per_arity.get(r).and_then(|mm| mm.get(&m))
    }

    pub fn set_matrix(&mut self, r: usize, m: i64, mat: SparseMat) {
        if mat.is_zero_mat() {
            self.per_arity[r].remove(&m);
        } else {
            self.per_arity[r].insert(m, mat);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.per_arity.iter().all(|mm| mm.values().all(|m| m.is_zero_mat()))
    }

    /// Checks commutation with the generator actions arity by arity.
    pub fn validate_equivariance(
        &self,
        source: &SigmaObject,
        target: &SigmaObject,
    ) -> Result<()> {
        let ring = source.ring;
        for r in 0..=source.r_max().min(target.r_max()) {
            let sc = source.component(r);
            let tc = target.component(r);
            for (gi, g) in source.action(r).gens.iter().enumerate() {
                let tg = &target.action(r).gens[gi];
                for m in sc.degrees() {
                    let f = match self.matrix(r, m) {
                        Some(f) => f.clone(),
                        None => SparseMat::zero(tc.dim(m + self.degree), sc.dim(m)),
                    };
                    let a_src = g.get(m).unwrap().to_matrix(&ring);
                    let a_tgt = match tg.get(m + self.degree) {
                        Some(p) => p.to_matrix(&ring),
                        None => SparseMat::zero(tc.dim(m + self.degree), tc.dim(m + self.degree)),
                    };
                    let lhs = f.mul(&ring, &a_src)?;
                    let rhs = a_tgt.mul(&ring, &f)?;
                    if lhs != rhs {
                        return Err(Error::NotEquivariant);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Equivariant hom complex at one arity: the invariants of the
/// conjugation action on hom_complex(M(r), N(r)).
pub fn equivariant_hom(m: &SigmaObject, n: &SigmaObject, r: usize) -> Result<BasedComplex> {
    equivariant_hom_of(m.component(r), m.action(r), n.component(r), n.action(r))
}

/// As `equivariant_hom` but on explicit complex/action pairs.
pub fn equivariant_hom_of(
    mc: &BasedComplex,
    ma: &ArityAction,
    nc: &BasedComplex,
    na: &ArityAction,
) -> Result<BasedComplex> {
    let (hom, index) = mc.hom_complex_indexed(nc)?;
    let mut gens = Vec::new();
    let gen_count = ma.gens.len().max(na.gens.len());
    for gi in 0..gen_count {
        let mut by_degree = BTreeMap::new();
        for d in hom.degrees() {
            let mut map = vec![(0usize, 1i8); hom.dim(d)];
            for ((dd, m, a, b), &col) in index.iter() {
                if *dd != d {
                    continue;
                }
                // σ f = A_N(σ) ∘ f ∘ A_M(σ)^{-1}; the transposition
                // generators are involutions, so the inverse is itself
                let (a2, s) = match ma.gens.get(gi) {
                    Some(g) => g.get(*m).unwrap().map[*a],
                    None => (*a, 1),
                };
                let (b2, t) = match na.gens.get(gi) {
                    Some(g) => g.get(*m + d).unwrap().map[*b],
                    None => (*b, 1),
                };
                let target = index[&(d, *m, a2, b2)];
                map[col] = (target, s * t);
            }
            by_degree.insert(d, SignedPerm { map });
        }
        gens.push(DegSignedPerm { by_degree });
    }
    let act = ArityAction { r: ma.r, gens };
    invariants_of(&hom, &act)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homcore::{point_complex, Label};

    fn z() -> CoefficientRing {
        CoefficientRing::Integers
    }

    /// The regular representation of Σ_r in degree 0.
    fn regular(ring: CoefficientRing, r: usize) -> (BasedComplex, ArityAction) {
        let perms = Perm::all(r);
        let mut c = BasedComplex::new(ring);
        c.set_basis(0, perms.iter().map(|p| Label::new(p.label())).collect());
        let gens = (1..r)
            .map(|i| {
                let s = Perm::adjacent_transposition(r, i);
                let map = perms
                    .iter()
                    .map(|p| {
                        let sp = s.compose(p);
                        (perms.iter().position(|q| *q == sp).unwrap(), 1i8)
                    })
                    .collect();
                DegSignedPerm { by_degree: BTreeMap::from([(0, SignedPerm { map })]) }
            })
            .collect();
        (c, ArityAction { r, gens })
    }

    #[test]
    fn regular_rep_group_law_and_freeness() {
        let (c, a) = regular(z(), 3);
        a.validate(&c).unwrap();
        let mut s = SigmaObject::zero(z(), 3);
        s.set_component(3, c, a).unwrap();
        s.validate_group_law(3).unwrap();
        assert!(s.action_is_free(3));
    }

    #[test]
    fn coinvariants_and_invariants_of_regular_rep() {
        let (c, a) = regular(z(), 3);
        let co = coinvariants_of(&c, &a).unwrap();
        assert_eq!(co.dim(0), 1);
        let inv = invariants_of(&c, &a).unwrap();
        assert_eq!(inv.dim(0), 1);
    }

    #[test]
    fn trivial_action_identity() {
        let c = point_complex(z(), 0, "x");
        let a = ArityAction::trivial(2, &c);
        assert_eq!(coinvariants_of(&c, &a).unwrap().dim(0), 1);
        assert_eq!(invariants_of(&c, &a).unwrap().dim(0), 1);
    }

    #[test]
    fn sign_representation_behavior_by_ring() {
        let mk = |ring| {
            let c = point_complex(ring, 0, "x");
            let g = DegSignedPerm {
                by_degree: BTreeMap::from([(0, SignedPerm { map: vec![(0, -1)] })]),
            };
            (c, ArityAction { r: 2, gens: vec![g] })
        };
        let q = CoefficientRing::Rationals;
        let (c, a) = mk(q);
        assert_eq!(coinvariants_of(&c, &a).unwrap().dim(0), 0);
        assert_eq!(invariants_of(&c, &a).unwrap().dim(0), 0);
        // over F_2 the sign is invisible
        let f2 = CoefficientRing::PrimeField(2);
        let (c, a) = mk(f2);
        assert_eq!(coinvariants_of(&c, &a).unwrap().dim(0), 1);
        // over Z the coinvariants would be Z/2: rejected as non-free
        let (c, a) = mk(z());
        assert!(matches!(
            coinvariants_of(&c, &a),
            Err(Error::NonFreeCoinvariants(_))
        ));
        assert_eq!(invariants_of(&c, &a).unwrap().dim(0), 0);
    }

    #[test]
    fn invariants_match_norm_on_free_complex() {
        // k[Σ_2] in degrees 0,1 with d = (1 - t) on the free generator
        let ring = z();
        let perms = Perm::all(2);
        let mut c = BasedComplex::new(ring);
        c.set_basis(0, perms.iter().map(|p| Label::new(p.label())).collect());
        c.set_basis(
            1,
            perms.iter().map(|p| Label::new(format!("{}'", p.label()))).collect(),
        );
        c.set_diff(
            1,
            SparseMat::from_int_triples(
                &ring,
                2,
                2,
                vec![(0, 0, 1), (1, 0, -1), (1, 1, 1), (0, 1, -1)],
            ),
        )
        .unwrap();
        let map0 = SignedPerm { map: vec![(1, 1), (0, 1)] };
        let g = DegSignedPerm { by_degree: BTreeMap::from([(0, map0.clone()), (1, map0)]) };
        let a = ArityAction { r: 2, gens: vec![g] };
        a.validate(&c).unwrap();
        let inv = invariants_of(&c, &a).unwrap();
        inv.validate().unwrap();
        assert_eq!(inv.dim(0), 1);
        assert_eq!(inv.dim(1), 1);
        // (1-t) applied to the norm (1+t)x vanishes
        assert!(inv.differential(1).is_zero_mat());
        let co = coinvariants_of(&c, &a).unwrap();
        assert!(co.differential(1).is_zero_mat());
        // free action: norm map is an iso, same homology over Q
        let qc = c.with_ring(CoefficientRing::Rationals);
        let qi = invariants_of(&qc, &a).unwrap().homology().unwrap();
        let qco = coinvariants_of(&qc, &a).unwrap().homology().unwrap();
        assert_eq!(qi, qco);
    }

    #[test]
    fn suspension_composes_and_shifts() {
        let (c, a) = regular(z(), 2);
        let mut s = SigmaObject::zero(z(), 2);
        s.set_component(2, c, a).unwrap();
        let s2 = s.suspend(2).suspend(-2);
        assert_eq!(s2.component(2), s.component(2));
        assert_eq!(s2.action(2), s.action(2));
        let s1 = s.suspend(-1);
        // arity 2 shifts by -1 * (1 - 2) = 1, with sign action
        assert_eq!(s1.component(2).dim(1), 2);
        s1.validate().unwrap();
        let g = &s1.action(2).gens[0].by_degree[&1];
        assert!(g.map.iter().all(|&(_, s)| s == -1));
    }

    #[test]
    fn dual_sigma_regular_rep_roundtrip() {
        let (c, a) = regular(z(), 2);
        let mut s = SigmaObject::zero(z(), 2);
        s.set_component(2, c, a).unwrap();
        let d = s.dual_sigma();
        d.validate().unwrap();
        assert_eq!(d.component(2).dim(0), 2);
        let dd = d.dual_sigma();
        assert_eq!(dd.component(2).differential(0), s.component(2).differential(0));
        assert_eq!(dd.action(2), s.action(2));
    }

    #[test]
    fn skeleton_idempotent_monotone() {
        let (c, a) = regular(z(), 3);
        let mut s = SigmaObject::zero(z(), 3);
        s.set_component(3, c, a).unwrap();
        let sk2 = s.skeleton(2);
        assert!(sk2.component(3).is_zero_complex());
        assert!(s.skeleton(3).skeleton(2).component(3).is_zero_complex());
        assert_eq!(s.skeleton(3).component(3), s.component(3));
    }

    #[test]
    fn equivariant_hom_identity_and_dual_invariants() {
        let (c, a) = regular(z(), 2);
        let mut s = SigmaObject::zero(z(), 2);
        s.set_component(2, c.clone(), a.clone()).unwrap();
        let eh = equivariant_hom(&s, &s, 2).unwrap();
        assert!(eh.dim(0) >= 1);
        // maps into the trivial representation = invariants of the dual
        let mut t = SigmaObject::zero(z(), 2);
        let tc = point_complex(z(), 0, "1");
        let ta = ArityAction::trivial(2, &tc);
        t.set_component(2, tc, ta).unwrap();
        let eh2 = equivariant_hom(&s, &t, 2).unwrap();
        let dual_inv = s.dual_sigma().invariants(2).unwrap();
        assert_eq!(eh2.dim(0), dual_inv.dim(0));
        assert_eq!(eh2.homology().unwrap(), dual_inv.homology().unwrap());
    }
}
