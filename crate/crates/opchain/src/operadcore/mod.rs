//! Operads with partial compositions, free operads on tree bases,
//! twisting derivations, quasi-free operads, and generator-determined
//! morphisms.

pub mod free;
pub mod quasifree;
pub mod tree;

pub use free::FreeOperad;
pub use quasifree::{
    check_twisting, derivation_from_generator_map, morphism_from_generator_map, operad_skeleton,
    GeneratorMap, MorphismData, QuasiFreeOperad,
};
pub use tree::Tree;

use std::collections::BTreeMap;

use crate::homcore::{BasedComplex, CoefficientRing, Scalar, SparseMat};
use crate::sigmaobj::{Perm, SigmaObject};
use crate::{Error, Result};

/// Flat index of (degree, index) within a component, degrees ascending.
pub fn flat_of(c: &BasedComplex, d: i64, i: usize) -> usize {
    let mut off = 0usize;
    for dd in c.degrees() {
        if dd == d {
            return off + i;
        }
        off += c.dim(dd);
    }
    panic!("degree {d} not present");
}

pub fn flat_dim(c: &BasedComplex) -> usize {
    c.total_dim()
}

pub fn unflat(c: &BasedComplex, idx: usize) -> (i64, usize) {
    let mut off = 0usize;
    for d in c.degrees() {
        let n = c.dim(d);
        if idx < off + n {
            return (d, idx - off);
        }
        off += n;
    }
    panic!("flat index {idx} out of range");
}

/// A formal linear combination of basis elements of one arity component.
#[derive(Clone, PartialEq, Debug)]
pub struct Chain {
    pub arity: usize,
    pub terms: BTreeMap<(i64, usize), Scalar>,
}

impl Chain {
    pub fn zero(arity: usize) -> Self {
        Chain { arity, terms: BTreeMap::new() }
    }

    pub fn basis(arity: usize, degree: i64, index: usize, ring: &CoefficientRing) -> Self {
        let mut c = Chain::zero(arity);
        c.terms.insert((degree, index), ring.one());
        c
    }

    pub fn add_term(&mut self, ring: &CoefficientRing, degree: i64, index: usize, v: &Scalar) {
        let key = (degree, index);
        let cur = self.terms.remove(&key).unwrap_or_else(|| ring.zero());
        let s = ring.add(&cur, v);
        if !ring.is_zero(&s) {
            self.terms.insert(key, s);
        }
    }

    pub fn add(&self, ring: &CoefficientRing, other: &Chain) -> Chain {
        let mut out = self.clone();
        for (&(d, i), v) in &other.terms {
            out.add_term(ring, d, i, v);
        }
        out
    }

    pub fn scale(&self, ring: &CoefficientRing, s: &Scalar) -> Chain {
        let mut out = Chain::zero(self.arity);
        if ring.is_zero(s) {
            return out;
        }
        for (&(d, i), v) in &self.terms {
            let w = ring.mul(v, s);
            if !ring.is_zero(&w) {
                out.terms.insert((d, i), w);
            }
        }
        out
    }

    pub fn neg(&self, ring: &CoefficientRing) -> Chain {
        self.scale(ring, &ring.from_i64(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Homogeneous degree, when all terms share one.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|&(d, _)| d);
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }
}

/// A materialized operad with explicit partial-composition tables.
#[derive(Clone, Debug)]
pub struct Operad {
    pub underlying: SigmaObject,
    /// (degree, index) of the unit in arity 1.
    pub unit: (i64, usize),
    /// (m, i, n) -> matrix from pair basis to component(m+n-1), columns
    /// indexed by flat(p) * flat_dim(n-component) + flat(q).
    compose: BTreeMap<(usize, usize, usize), SparseMat>,
}

impl Operad {
    pub fn new(underlying: SigmaObject, unit: (i64, usize)) -> Self {
        Operad { underlying, unit, compose: BTreeMap::new() }
    }

    pub fn ring(&self) -> CoefficientRing {
        self.underlying.ring
    }

    pub fn r_max(&self) -> usize {
        self.underlying.r_max()
    }

    pub fn component(&self, r: usize) -> &BasedComplex {
        self.underlying.component(r)
    }

    pub fn unit_chain(&self) -> Chain {
        Chain::basis(1, self.unit.0, self.unit.1, &self.ring())
    }

    pub fn set_compose(&mut self, m: usize, i: usize, n: usize, mat: SparseMat) -> Result<()> {
        let rows = flat_dim(self.component(m + n - 1));
        let cols = flat_dim(self.component(m)) * flat_dim(self.component(n));
        if mat.rows != rows || mat.cols != cols {
            return Err(Error::ShapeMismatch);
        }
        self.compose.insert((m, i, n), mat);
        Ok(())
    }

    pub fn compose_table(&self, m: usize, i: usize, n: usize) -> Option<&SparseMat> {
        self.compose.get(&(m, i, n))
    }

    /// Builds the composition tables from a basis-level composition rule.
    pub fn fill_compose_from(
        &mut self,
        rule: impl Fn(usize, usize, usize, (i64, usize), (i64, usize)) -> Chain,
    ) -> Result<()> {
        let ring = self.ring();
        let r_max = self.r_max();
        for m in 1..=r_max {
            if self.component(m).is_zero_complex() {
                continue;
            }
            for n in 1..=r_max {
                if m + n - 1 > r_max || self.component(n).is_zero_complex() {
                    continue;
                }
                for i in 1..=m {
                    let pc = self.component(m).clone();
                    let qc = self.component(n).clone();
                    let qdim = flat_dim(&qc);
                    let mut triples: Vec<(usize, usize, Scalar)> = Vec::new();
                    for dp in pc.degrees() {
                        for ip in 0..pc.dim(dp) {
                            for dq in qc.degrees() {
                                for iq in 0..qc.dim(dq) {
                                    let out = rule(m, i, n, (dp, ip), (dq, iq));
                                    let col = flat_of(&pc, dp, ip) * qdim + flat_of(&qc, dq, iq);
                                    let tc = self.component(m + n - 1);
                                    for (&(dt, it), v) in &out.terms {
                                        triples.push((flat_of(tc, dt, it), col, v.clone()));
                                    }
                                }
                            }
                        }
                    }
                    let rows = flat_dim(self.component(m + n - 1));
                    let mat =
                        SparseMat::from_triples(&ring, rows, flat_dim(&pc) * qdim, triples);
                    self.set_compose(m, i, n, mat)?;
                }
            }
        }
        Ok(())
    }

    /// Partial composition of chains. Errors when the slot is out of range
    /// or the result arity exceeds the truncation.
    pub fn compose_chain(&self, p: &Chain, i: usize, q: &Chain) -> Result<Chain> {
        let (m, n) = (p.arity, q.arity);
        if i < 1 || i > m {
            return Err(Error::SlotOutOfRange { slot: i, arity: m });
        }
        if m + n - 1 > self.r_max() {
            return Err(Error::TruncationOverflow { r_max: self.r_max() });
        }
        let ring = self.ring();
        let mut out = Chain::zero(m + n - 1);
        if p.is_zero() || q.is_zero() {
            return Ok(out);
        }
        let table = self
            .compose
            .get(&(m, i, n))
            .ok_or_else(|| Error::Validation(format!("no composition table ({m},{i},{n})")))?;
        let pc = self.component(m);
        let qc = self.component(n);
        let tc = self.component(m + n - 1);
        let qdim = flat_dim(qc);
        for (&(dp, ip), vp) in &p.terms {
            for (&(dq, iq), vq) in &q.terms {
                let col = flat_of(pc, dp, ip) * qdim + flat_of(qc, dq, iq);
                let coeff = ring.mul(vp, vq);
                for (r, v) in table.column(col) {
                    let (dt, it) = unflat(tc, r);
                    out.add_term(&ring, dt, it, &ring.mul(&coeff, v));
                }
            }
        }
        Ok(out)
    }

    /// Differential applied to a chain.
    pub fn apply_diff(&self, x: &Chain) -> Chain {
        let ring = self.ring();
        let c = self.component(x.arity);
        let mut out = Chain::zero(x.arity);
        for (&(d, i), v) in &x.terms {
            if let Some(m) = c.diff_ref(d) {
                for (r, w) in m.column(i) {
                    out.add_term(&ring, d - 1, r, &ring.mul(v, w));
                }
            }
        }
        out
    }

    /// Action of a permutation on a chain, term by term through the
    /// generator factorization.
    pub fn apply_perm(&self, s: &Perm, x: &Chain) -> Chain {
        let ring = self.ring();
        let act = self.underlying.action(x.arity);
        let factors = s.adjacent_factorization();
        let mut out = Chain::zero(x.arity);
        for (&(d, i), v) in &x.terms {
            let mut j = i;
            let mut sg = 1i8;
            // action(s) = gens[f0] ∘ gens[f1] ∘ ...: apply right to left
            for &l in factors.iter().rev() {
                let (jj, ss) = act.gens[l - 1].get(d).unwrap().map[j];
                j = jj;
                sg *= ss;
            }
            let w = if sg == 1 { v.clone() } else { ring.neg(v) };
            out.add_term(&ring, d, j, &w);
        }
        out
    }

    fn basis_of(&self, r: usize) -> Vec<(i64, usize)> {
        let c = self.component(r);
        c.degrees()
            .into_iter()
            .flat_map(|d| (0..c.dim(d)).map(move |i| (d, i)))
            .collect()
    }

    /// Exhaustive axiom verification on basis elements up to the
    /// truncation arity.
    pub fn verify(&self) -> VerificationReport {
        let mut gates = Vec::new();
        let ring = self.ring();
        let r_max = self.r_max();

        gates.push(match self.underlying.validate() {
            Ok(()) => GateResult::pass("underlying-complexes-and-actions"),
            Err(e) => GateResult::fail("underlying-complexes-and-actions", e.to_string()),
        });

        // unit laws
        let mut gate = GateResult::pass("unit-laws");
        'unit: for n in 1..=r_max {
            for &(d, i) in &self.basis_of(n) {
                let y = Chain::basis(n, d, i, &ring);
                match self.compose_chain(&self.unit_chain(), 1, &y) {
                    Ok(l) if l == y => {}
                    _ => {
                        gate =
                            GateResult::fail("unit-laws", format!("1 ∘_1 y at arity {n} ({d},{i})"));
                        break 'unit;
                    }
                }
                for slot in 1..=n {
                    match self.compose_chain(&y, slot, &self.unit_chain()) {
                        Ok(r) if r == y => {}
                        _ => {
                            gate = GateResult::fail(
                                "unit-laws",
                                format!("y ∘_{slot} 1 at arity {n} ({d},{i})"),
                            );
                            break 'unit;
                        }
                    }
                }
            }
        }
        gates.push(gate);

        // chain map
        let mut gate = GateResult::pass("compose-chain-map");
        'cm: for m in 1..=r_max {
            for n in 1..=r_max {
                if m + n - 1 > r_max {
                    continue;
                }
                for i in 1..=m {
                    for &(dp, ip) in &self.basis_of(m) {
                        let x = Chain::basis(m, dp, ip, &ring);
                        let dx = self.apply_diff(&x);
                        for &(dq, iq) in &self.basis_of(n) {
                            let y = Chain::basis(n, dq, iq, &ring);
                            let dy = self.apply_diff(&y);
                            let lhs = self.apply_diff(&self.compose_chain(&x, i, &y).unwrap());
                            let sgn = if dp.rem_euclid(2) == 0 {
                                ring.one()
                            } else {
                                ring.from_i64(-1)
                            };
                            let rhs = self
                                .compose_chain(&dx, i, &y)
                                .unwrap()
                                .add(&ring, &self.compose_chain(&x, i, &dy).unwrap().scale(&ring, &sgn));
                            if lhs != rhs {
                                gate = GateResult::fail(
                                    "compose-chain-map",
                                    format!("({m},{i},{n}) at ({dp},{ip}) ∘ ({dq},{iq})"),
                                );
                                break 'cm;
                            }
                        }
                    }
                }
            }
        }
        gates.push(gate);

        // sequential associativity
        let mut gate = GateResult::pass("assoc-sequential");
        'seq: for a in 1..=r_max {
            for b in 1..=r_max {
                for c in 1..=r_max {
                    if a + b + c - 2 > r_max {
                        continue;
                    }
                    for i in 1..=a {
                        for j in 1..=b {
                            for &(da, ia) in &self.basis_of(a) {
                                let x = Chain::basis(a, da, ia, &ring);
                                for &(db, ib) in &self.basis_of(b) {
                                    let y = Chain::basis(b, db, ib, &ring);
                                    for &(dc, ic) in &self.basis_of(c) {
                                        let zc = Chain::basis(c, dc, ic, &ring);
                                        let lhs = self
                                            .compose_chain(
                                                &self.compose_chain(&x, i, &y).unwrap(),
                                                i + j - 1,
                                                &zc,
                                            )
                                            .unwrap();
                                        let rhs = self
                                            .compose_chain(
                                                &x,
                                                i,
                                                &self.compose_chain(&y, j, &zc).unwrap(),
                                            )
                                            .unwrap();
                                        if lhs != rhs {
                                            gate = GateResult::fail(
                                                "assoc-sequential",
                                                format!(
                                                    "a={a} i={i} b={b} j={j} c={c} x=({da},{ia}) y=({db},{ib}) z=({dc},{ic})"
                                                ),
                                            );
                                            break 'seq;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        gates.push(gate);

        // parallel associativity with Koszul sign
        let mut gate = GateResult::pass("assoc-parallel");
        'par: for a in 2..=r_max {
            for b in 1..=r_max {
                for c in 1..=r_max {
                    if a + b + c - 2 > r_max {
                        continue;
                    }
                    for i in 1..=a {
                        for k in (i + 1)..=a {
                            for &(da, ia) in &self.basis_of(a) {
                                let x = Chain::basis(a, da, ia, &ring);
                                for &(db, ib) in &self.basis_of(b) {
                                    let y = Chain::basis(b, db, ib, &ring);
                                    for &(dc, ic) in &self.basis_of(c) {
                                        let zc = Chain::basis(c, dc, ic, &ring);
                                        let lhs = self
                                            .compose_chain(
                                                &self.compose_chain(&x, i, &y).unwrap(),
                                                k + b - 1,
                                                &zc,
                                            )
                                            .unwrap();
                                        let sgn = if (db * dc).rem_euclid(2) == 0 {
                                            ring.one()
                                        } else {
                                            ring.from_i64(-1)
                                        };
                                        let rhs = self
                                            .compose_chain(
                                                &self.compose_chain(&x, k, &zc).unwrap(),
                                                i,
                                                &y,
                                            )
                                            .unwrap()
                                            .scale(&ring, &sgn);
                                        if lhs != rhs {
                                            gate = GateResult::fail(
                                                "assoc-parallel",
                                                format!(
                                                    "a={a} i={i} k={k} b={b} c={c} x=({da},{ia}) y=({db},{ib}) z=({dc},{ic})"
                                                ),
                                            );
                                            break 'par;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        gates.push(gate);

        // equivariance on adjacent transpositions
        let mut gate = GateResult::pass("equivariance");
        'eq: for m in 1..=r_max {
            for n in 1..=r_max {
                if m + n - 1 > r_max {
                    continue;
                }
                for i in 1..=m {
                    for l in 1..m {
                        let s = Perm::adjacent_transposition(m, l);
                        let si = s.inverse().apply(i as u8) as usize;
                        let outer = s.block_substitute(i as u8, &Perm::identity(n));
                        for &(dp, ip) in &self.basis_of(m) {
                            let x = Chain::basis(m, dp, ip, &ring);
                            let sx = self.apply_perm(&s, &x);
                            for &(dq, iq) in &self.basis_of(n) {
                                let y = Chain::basis(n, dq, iq, &ring);
                                let lhs = self.compose_chain(&sx, i, &y).unwrap();
                                let rhs = self
                                    .apply_perm(&outer, &self.compose_chain(&x, si, &y).unwrap());
                                if lhs != rhs {
                                    gate = GateResult::fail(
                                        "equivariance",
                                        format!(
                                            "outer s_{l} at ({m},{i},{n}) x=({dp},{ip}) y=({dq},{iq})"
                                        ),
                                    );
                                    break 'eq;
                                }
                            }
                        }
                    }
                    for l in 1..n {
                        let t = Perm::adjacent_transposition(n, l);
                        let inner = Perm::identity(m).block_substitute(i as u8, &t);
                        for &(dp, ip) in &self.basis_of(m) {
                            let x = Chain::basis(m, dp, ip, &ring);
                            for &(dq, iq) in &self.basis_of(n) {
                                let y = Chain::basis(n, dq, iq, &ring);
                                let ty = self.apply_perm(&t, &y);
                                let lhs = self.compose_chain(&x, i, &ty).unwrap();
                                let rhs = self
                                    .apply_perm(&inner, &self.compose_chain(&x, i, &y).unwrap());
                                if lhs != rhs {
                                    gate = GateResult::fail(
                                        "equivariance",
                                        format!(
                                            "inner s_{l} at ({m},{i},{n}) x=({dp},{ip}) y=({dq},{iq})"
                                        ),
                                    );
                                    break 'eq;
                                }
                            }
                        }
                    }
                }
            }
        }
        gates.push(gate);

        VerificationReport { gates }
    }

    /// Checks that per-arity matrices define an operad morphism into
    /// another operad: chain map, equivariant, unit- and
    /// composition-preserving on basis elements.
    pub fn verify_morphism(&self, target: &Operad, phi: &crate::sigmaobj::EquivariantMap) -> VerificationReport {
        let ring = self.ring();
        let mut gates = Vec::new();
        let apply = |r: usize, x: &Chain| -> Chain {
            let mut out = Chain::zero(r);
            let sc = self.component(r);
            for (&(d, i), v) in &x.terms {
                if let Some(m) = phi.matrix(r, d) {
                    for (row, col, w) in m.entries() {
                        if col == i {
                            let (dt, it) = (d, row);
                            out.add_term(&ring, dt, it, &ring.mul(v, w));
                        }
                    }
                }
            }
            let _ = sc;
            out
        };
        // unit preservation
        let u = self.unit_chain();
        let pu = apply(1, &u);
        gates.push(if pu == target.unit_chain() {
            GateResult::pass("morphism-unit")
        } else {
            GateResult::fail("morphism-unit", "unit image differs".into())
        });
        // chain map + composition preservation
        let mut cm = GateResult::pass("morphism-chain-map");
        let mut comp = GateResult::pass("morphism-compose");
        'outer: for m in 1..=self.r_max() {
            for &(d, i) in &self.basis_of(m) {
                let x = Chain::basis(m, d, i, &ring);
                let lhs = apply(m, &self.apply_diff(&x));
                let rhs = target.apply_diff(&apply(m, &x));
                if lhs != rhs {
                    cm = GateResult::fail("morphism-chain-map", format!("arity {m} ({d},{i})"));
                    break 'outer;
                }
            }
        }
        'outer2: for m in 1..=self.r_max() {
            for n in 1..=self.r_max() {
                if m + n - 1 > self.r_max() {
                    continue;
                }
                for i in 1..=m {
                    for &(dp, ip) in &self.basis_of(m) {
                        let x = Chain::basis(m, dp, ip, &ring);
                        for &(dq, iq) in &self.basis_of(n) {
                            let y = Chain::basis(n, dq, iq, &ring);
                            let lhs = apply(m + n - 1, &self.compose_chain(&x, i, &y).unwrap());
                            let rhs = target
                                .compose_chain(&apply(m, &x), i, &apply(n, &y))
                                .unwrap();
                            if lhs != rhs {
                                comp = GateResult::fail(
                                    "morphism-compose",
                                    format!("({m},{i},{n}) x=({dp},{ip}) y=({dq},{iq})"),
                                );
                                break 'outer2;
                            }
                        }
                    }
                }
            }
        }
        gates.push(cm);
        gates.push(comp);
        gates.push(
            match phi.validate_equivariance(&self.underlying, &target.underlying) {
                Ok(()) => GateResult::pass("morphism-equivariance"),
                Err(e) => GateResult::fail("morphism-equivariance", e.to_string()),
            },
        );
        VerificationReport { gates }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateResult {
    pub name: String,
    pub pass: bool,
    pub counterexample: Option<String>,
}

impl GateResult {
    pub fn pass(name: &str) -> Self {
        GateResult { name: name.to_string(), pass: true, counterexample: None }
    }

    pub fn fail(name: &str, witness: String) -> Self {
        GateResult { name: name.to_string(), pass: false, counterexample: Some(witness) }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub gates: Vec<GateResult>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.gates.iter().all(|g| g.pass)
    }

    pub fn push(&mut self, gate: GateResult) {
        self.gates.push(gate);
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.gates.extend(other.gates);
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.gates
                .iter()
                .map(|g| {
                    let mut o = serde_json::Map::new();
                    o.insert("gate".into(), serde_json::Value::String(g.name.clone()));
                    o.insert("pass".into(), serde_json::Value::Bool(g.pass));
                    if let Some(w) = &g.counterexample {
                        o.insert("counterexample".into(), serde_json::Value::String(w.clone()));
                    }
                    serde_json::Value::Object(o)
                })
                .collect(),
        )
    }
}
