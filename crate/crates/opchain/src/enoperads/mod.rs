//! The chain Barratt-Eccles operad, its complexity-filtration suboperads
//! E_n, the commutative and associative operads, canonical cycles, and
//! rescaling morphisms.

pub mod besimplex;

pub use besimplex::{BESimplex, FormalChain};

use std::collections::BTreeMap;

use crate::homcore::{
    BasedComplex, CoefficientRing, GradedSummary, Label, Scalar, SparseIntMat, SparseMat,
};
use crate::operadcore::{flat_of, Chain, GateResult, Operad, VerificationReport};
use crate::sigmaobj::{ArityAction, DegSignedPerm, EquivariantMap, Perm, SigmaObject, SignedPerm};
use crate::{Error, Result};

/// Lookup tables over permutations of r letters for packed tuple work.
struct PermTable {
    perms: Vec<Perm>,
    /// comp[a * len + b] = id of perms[a] ∘ perms[b]
    comp: Vec<u16>,
    inv: Vec<u16>,
    /// per-pair orientation bitmask; pairs (i,j), i<j, in lex order
    orient: Vec<u32>,
    sign: Vec<i8>,
    npairs: usize,
}

impl PermTable {
    fn new(r: usize) -> Self {
        let perms = Perm::all(r);
        let len = perms.len();
        let idx: BTreeMap<&Perm, u16> =
            perms.iter().enumerate().map(|(i, p)| (p, i as u16)).collect();
        let mut comp = vec![0u16; len * len];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                comp[a * len + b] = idx[&pa.compose(pb)];
            }
        }
        let inv: Vec<u16> = perms.iter().map(|p| idx[&p.inverse()]).collect();
        let npairs = r * (r - 1) / 2;
        let mut orient = vec![0u32; len];
        for (a, p) in perms.iter().enumerate() {
            let mut m = 0u32;
            let mut k = 0;
            for i in 1..=r as u8 {
                for j in (i + 1)..=r as u8 {
                    let before = p.word().iter().find(|&&x| x == i || x == j) == Some(&i);
                    if before {
                        m |= 1 << k;
                    }
                    k += 1;
                }
            }
            orient[a] = m;
        }
        let sign: Vec<i8> = perms.iter().map(|p| p.sign() as i8).collect();
        PermTable { perms, comp, inv, orient, sign, npairs }
    }

    fn len(&self) -> usize {
        self.perms.len()
    }

    fn compose_id(&self, a: u16, b: u16) -> u16 {
        self.comp[a as usize * self.len() + b as usize]
    }
}

/// Per-degree dimensions of E_n(r), by orbit enumeration (the action is
/// free, so dim = r! x orbit count).
pub fn en_dims(n: usize, r: usize) -> Vec<usize> {
    if r == 0 {
        return Vec::new();
    }
    if r == 1 {
        return vec![1];
    }
    let fact: usize = (1..=r).product();
    en_orbit_tuples(n, r).iter().map(|lv| lv.len() * fact).collect()
}

/// Orbit representatives of E_n(r) per degree: the tuples with first
/// entry the identity (the diagonal action is free and transitive on the
/// first coordinate).
fn en_orbit_tuples(n: usize, r: usize) -> Vec<Vec<Vec<u16>>> {
    let table = PermTable::new(r);
    let mut levels: Vec<Vec<Vec<u16>>> = vec![vec![vec![0u16]]];
    let mut frontier: Vec<(Vec<u16>, Vec<u8>)> = vec![(vec![0u16], vec![0u8; table.npairs])];
    loop {
        let mut next: Vec<(Vec<u16>, Vec<u8>)> = Vec::new();
        for (tuple, counts) in &frontier {
            let last = *tuple.last().unwrap();
            let olast = table.orient[last as usize];
            for cand in 0..table.len() as u16 {
                if cand == last {
                    continue;
                }
                let diff = olast ^ table.orient[cand as usize];
                let mut ok = true;
                let mut counts2 = counts.clone();
                for k in 0..table.npairs {
                    if diff & (1 << k) != 0 {
                        counts2[k] += 1;
                        if counts2[k] as usize > n - 1 {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    let mut t2 = tuple.clone();
                    t2.push(cand);
                    next.push((t2, counts2));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next.iter().map(|(t, _)| t.clone()).collect());
        frontier = next;
    }
    levels
}

/// The coinvariant complex of sgn^twist ⊗ E_n(r) on orbit
/// representatives, as integer column data.
pub struct OrbitComplex {
    pub dims: Vec<usize>,
    /// boundaries[d]: C_d -> C_{d-1}
    pub boundaries: Vec<SparseIntMat>,
}

pub fn en_orbit_complex_int(n: usize, r: usize, twist: i64) -> OrbitComplex {
    let table = PermTable::new(r);
    let levels = en_orbit_tuples(n, r);
    let index: Vec<BTreeMap<Vec<u16>, u32>> = levels
        .iter()
        .map(|lv| {
            lv.iter()
                .enumerate()
                .map(|(i, t)| (t.clone(), i as u32))
                .collect()
        })
        .collect();
    let dims: Vec<usize> = levels.iter().map(|lv| lv.len()).collect();
    let twist_odd = twist.rem_euclid(2) == 1;
    let mut boundaries: Vec<SparseIntMat> = vec![SparseIntMat::zero(0, dims[0])];
    for d in 1..dims.len() {
        let mut triples: Vec<(usize, usize, i64)> = Vec::new();
        for (col, tuple) in levels[d].iter().enumerate() {
            // face 0: drop the identity, translate back by w_1^{-1}
            {
                let w1 = tuple[1];
                let g = table.inv[w1 as usize];
                let face: Vec<u16> =
                    tuple[1..].iter().map(|&w| table.compose_id(g, w)).collect();
                debug_assert_eq!(face[0], 0);
                let row = index[d - 1][&face] as usize;
                let mut c = 1i64;
                if twist_odd && table.sign[w1 as usize] == -1 {
                    c = -c;
                }
                triples.push((row, col, c));
            }
            for k in 1..=d {
                if k < d && tuple[k - 1] == tuple[k + 1] {
                    continue; // degenerate face
                }
                let mut face = tuple.clone();
                face.remove(k);
                let row = index[d - 1][&face] as usize;
                triples.push((row, col, if k % 2 == 0 { 1 } else { -1 }));
            }
        }
        boundaries.push(SparseIntMat::from_i64_triples(dims[d - 1], dims[d], triples));
    }
    OrbitComplex { dims, boundaries }
}

/// Homology of an orbit complex over a ring, for degrees in [lo, hi].
pub fn orbit_homology(
    oc: &OrbitComplex,
    ring: &CoefficientRing,
    lo: i64,
    hi: i64,
) -> GradedSummary {
    let mut out = GradedSummary::new();
    let top = oc.dims.len() as i64 - 1;
    for d in lo.max(0)..=hi.min(top) {
        let dim = oc.dims[d as usize];
        let out_mat = &oc.boundaries[d as usize];
        let zero_in = SparseIntMat::zero(dim, 0);
        let in_mat = if d < top { &oc.boundaries[(d + 1) as usize] } else { &zero_in };
        let (r_out, r_in, torsion) = match ring {
            CoefficientRing::Integers => {
                let r_out = crate::homcore::rank_over_q(out_mat);
                let facs = crate::homcore::invariant_factors(in_mat);
                let r_in = facs.len();
                let torsion: Vec<num_bigint::BigInt> = facs
                    .into_iter()
                    .filter(|f| !num_traits::One::is_one(f))
                    .collect();
                (r_out, r_in, torsion)
            }
            CoefficientRing::Rationals => (
                crate::homcore::rank_over_q(out_mat),
                crate::homcore::rank_over_q(in_mat),
                Vec::new(),
            ),
            CoefficientRing::PrimeField(p) => (
                crate::homcore::rank_mod_p(out_mat, *p),
                crate::homcore::rank_mod_p(in_mat, *p),
                Vec::new(),
            ),
        };
        out.insert(
            d,
            crate::homcore::DegreeSummary { rank: dim - r_out - r_in, torsion },
        );
    }
    out
}

fn guard_size(total: usize) -> Result<()> {
    const CAP: usize = 300_000;
    if total > CAP {
        return Err(Error::Validation(format!(
            "component too large to materialize ({total} basis elements); \
             use the orbit-level interfaces"
        )));
    }
    Ok(())
}

/// Full tuple basis per degree for E_n(r), lexicographic within each
/// degree.
fn en_tuple_basis(n: usize, r: usize) -> Vec<Vec<Vec<u16>>> {
    let table = PermTable::new(r);
    let mut levels: Vec<Vec<(Vec<u16>, Vec<u8>)>> = vec![(0..table.len() as u16)
        .map(|w| (vec![w], vec![0u8; table.npairs]))
        .collect()];
    loop {
        let mut next: Vec<(Vec<u16>, Vec<u8>)> = Vec::new();
        for (tuple, counts) in levels.last().unwrap() {
            let last = *tuple.last().unwrap();
            let olast = table.orient[last as usize];
            for cand in 0..table.len() as u16 {
                if cand == last {
                    continue;
                }
                let diff = olast ^ table.orient[cand as usize];
                let mut ok = true;
                let mut counts2 = counts.clone();
                for k in 0..table.npairs {
                    if diff & (1 << k) != 0 {
                        counts2[k] += 1;
                        if counts2[k] as usize > n - 1 {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    let mut t2 = tuple.clone();
                    t2.push(cand);
                    next.push((t2, counts2));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    levels
        .into_iter()
        .map(|lv| lv.into_iter().map(|(t, _)| t).collect())
        .collect()
}

/// Materialized component E_n(r) with its action and aligned simplex
/// basis.
pub struct EnComponent {
    pub complex: BasedComplex,
    pub action: ArityAction,
    pub simplices: Vec<Vec<BESimplex>>,
}

pub fn en_component(ring: CoefficientRing, n: usize, r: usize) -> Result<EnComponent> {
    if n < 1 || r < 1 {
        return Err(Error::Validation("require n >= 1 and r >= 1".into()));
    }
    let table = PermTable::new(r);
    let levels = en_tuple_basis(n, r);
    guard_size(levels.iter().map(|l| l.len()).sum())?;
    build_component(ring, r, &table, levels)
}

/// The unfiltered Barratt-Eccles component truncated at degree d_max.
pub fn barratt_eccles_component(
    ring: CoefficientRing,
    r: usize,
    d_max: usize,
) -> Result<EnComponent> {
    if r < 1 {
        return Err(Error::Validation("require r >= 1".into()));
    }
    let table = PermTable::new(r);
    let mut levels: Vec<Vec<Vec<u16>>> =
        vec![(0..table.len() as u16).map(|w| vec![w]).collect()];
    for _ in 0..d_max {
        let mut next: Vec<Vec<u16>> = Vec::new();
        for tuple in levels.last().unwrap() {
            let last = *tuple.last().unwrap();
            for cand in 0..table.len() as u16 {
                if cand != last {
                    let mut t2 = tuple.clone();
                    t2.push(cand);
                    next.push(t2);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        guard_size(next.len())?;
        levels.push(next);
    }
    guard_size(levels.iter().map(|l| l.len()).sum())?;
    build_component(ring, r, &table, levels)
}

fn build_component(
    ring: CoefficientRing,
    r: usize,
    table: &PermTable,
    levels: Vec<Vec<Vec<u16>>>,
) -> Result<EnComponent> {
    let index: Vec<BTreeMap<Vec<u16>, u32>> = levels
        .iter()
        .map(|lv| {
            lv.iter()
                .enumerate()
                .map(|(i, t)| (t.clone(), i as u32))
                .collect()
        })
        .collect();
    let mut complex = BasedComplex::new(ring);
    for (d, lv) in levels.iter().enumerate() {
        let labels: Vec<Label> = lv
            .iter()
            .map(|t| {
                Label::new(
                    t.iter()
                        .map(|&w| table.perms[w as usize].label())
                        .collect::<Vec<_>>()
                        .join("|"),
                )
            })
            .collect();
        complex.set_basis(d as i64, labels);
    }
    for d in 1..levels.len() {
        let mut triples: Vec<(usize, usize, i64)> = Vec::new();
        for (col, tuple) in levels[d].iter().enumerate() {
            for k in 0..=d {
                if k > 0 && k < d && tuple[k - 1] == tuple[k + 1] {
                    continue;
                }
                let mut face = tuple.clone();
                face.remove(k);
                let row = index[d - 1][&face] as usize;
                triples.push((row, col, if k % 2 == 0 { 1 } else { -1 }));
            }
        }
        let m =
            SparseMat::from_int_triples(&ring, levels[d - 1].len(), levels[d].len(), triples);
        complex.set_diff(d as i64, m)?;
    }
    let mut gens = Vec::new();
    for l in 1..r {
        let s = Perm::adjacent_transposition(r, l);
        let sid = table.perms.iter().position(|p| *p == s).unwrap() as u16;
        let mut by_degree = BTreeMap::new();
        for (d, lv) in levels.iter().enumerate() {
            let mut map = vec![(0usize, 1i8); lv.len()];
            for (i, tuple) in lv.iter().enumerate() {
                let img: Vec<u16> = tuple.iter().map(|&w| table.compose_id(sid, w)).collect();
                map[i] = (index[d][&img] as usize, 1);
            }
            by_degree.insert(d as i64, SignedPerm { map });
        }
        gens.push(DegSignedPerm { by_degree });
    }
    let action = ArityAction { r, gens };
    let simplices: Vec<Vec<BESimplex>> = levels
        .iter()
        .map(|lv| {
            lv.iter()
                .map(|t| BESimplex {
                    verts: t.iter().map(|&w| table.perms[w as usize].clone()).collect(),
                })
                .collect()
        })
        .collect();
    Ok(EnComponent { complex, action, simplices })
}

/// E_n as a materialized operad, with the simplex bases kept for lookup.
pub struct EnOperad {
    pub op: Operad,
    pub n: usize,
    pub simplices: Vec<Vec<Vec<BESimplex>>>,
    index: Vec<BTreeMap<BESimplex, (i64, usize)>>,
}

impl EnOperad {
    pub fn index_of(&self, s: &BESimplex) -> Option<(i64, usize)> {
        self.index[s.arity()].get(s).copied()
    }

    pub fn chain_of(&self, formal: &FormalChain, ring: &CoefficientRing) -> Result<Chain> {
        let mut arity = 0;
        if let Some((s, _)) = formal.iter().next() {
            arity = s.arity();
        }
        let mut out = Chain::zero(arity);
        for (s, c) in formal {
            let (d, i) = self
                .index_of(s)
                .ok_or_else(|| Error::Validation("simplex outside the filtration".into()))?;
            out.add_term(ring, d, i, &ring.from_i64(*c));
        }
        Ok(out)
    }
}

pub fn en_operad(ring: CoefficientRing, n: usize, r_max: usize) -> Result<EnOperad> {
    if n < 1 {
        return Err(Error::Validation("require n >= 1".into()));
    }
    let mut underlying = SigmaObject::zero(ring, r_max);
    let mut simplices: Vec<Vec<Vec<BESimplex>>> = vec![Vec::new(); r_max + 1];
    let mut index: Vec<BTreeMap<BESimplex, (i64, usize)>> = vec![BTreeMap::new(); r_max + 1];
    for r in 1..=r_max {
        let comp = en_component(ring, n, r)?;
        for (d, lv) in comp.simplices.iter().enumerate() {
            for (i, s) in lv.iter().enumerate() {
                index[r].insert(s.clone(), (d as i64, i));
            }
        }
        simplices[r] = comp.simplices;
        underlying.set_component(r, comp.complex, comp.action)?;
    }
    let mut op = Operad::new(underlying, (0, 0));
    {
        let simplices = &simplices;
        let index = &index;
        op.fill_compose_from(|m, i, n_ar, (dp, ip), (dq, iq)| {
            let x = &simplices[m][dp as usize][ip];
            let y = &simplices[n_ar][dq as usize][iq];
            let mut out = Chain::zero(m + n_ar - 1);
            for (s, c) in x.compose(i as u8, y) {
                let (dt, it) = index[s.arity()][&s];
                out.add_term(&ring, dt, it, &ring.from_i64(c));
            }
            out
        })?;
    }
    Ok(EnOperad { op, n, simplices, index })
}

/// The commutative operad: rank 1 in degree 0 in every arity up to r_max.
pub fn commutative_operad(ring: CoefficientRing, r_max: usize) -> Result<Operad> {
    let mut underlying = SigmaObject::zero(ring, r_max);
    for r in 1..=r_max {
        let mut c = BasedComplex::new(ring);
        c.set_basis(0, vec![Label::new(format!("mu{r}"))]);
        let a = ArityAction::trivial(r, &c);
        underlying.set_component(r, c, a)?;
    }
    let mut op = Operad::new(underlying, (0, 0));
    op.fill_compose_from(|m, _i, n, _, _| {
        let mut c = Chain::zero(m + n - 1);
        c.add_term(&ring, 0, 0, &ring.one());
        c
    })?;
    Ok(op)
}

/// The associative operad: regular representations in degree 0 with block
/// substitution.
pub fn associative_operad(ring: CoefficientRing, r_max: usize) -> Result<Operad> {
    let mut underlying = SigmaObject::zero(ring, r_max);
    let mut words: Vec<Vec<Perm>> = vec![Vec::new(); r_max + 1];
    for r in 1..=r_max {
        let perms = Perm::all(r);
        let mut c = BasedComplex::new(ring);
        c.set_basis(0, perms.iter().map(|p| Label::new(p.label())).collect());
        let gens = (1..r)
            .map(|l| {
                let s = Perm::adjacent_transposition(r, l);
                let map = perms
                    .iter()
                    .map(|p| {
                        let sp = s.compose(p);
                        (perms.iter().position(|q| *q == sp).unwrap(), 1i8)
                    })
                    .collect();
                DegSignedPerm { by_degree: BTreeMap::from([(0i64, SignedPerm { map })]) }
            })
            .collect();
        underlying.set_component(r, c, ArityAction { r, gens })?;
        words[r] = perms;
    }
    let mut op = Operad::new(underlying, (0, 0));
    {
        let words = &words;
        op.fill_compose_from(|m, i, n, (_, ip), (_, iq)| {
            let w = words[m][ip].block_substitute(i as u8, &words[n][iq]);
            let pos = words[m + n - 1].iter().position(|p| *p == w).unwrap();
            let mut c = Chain::zero(m + n - 1);
            c.add_term(&ring, 0, pos, &ring.one());
            c
        })?;
    }
    Ok(op)
}

/// Operadic suspension of a materialized operad: components suspend and
/// compositions pick up (-1)^{N(n-1)(i-1+|x|)}, |x| the degree in the
/// original operad.
pub fn suspend_operad(op: &Operad, big_n: i64) -> Result<Operad> {
    let ring = op.ring();
    let underlying = op.underlying.suspend(big_n);
    let mut out = Operad::new(underlying, op.unit);
    let r_max = op.r_max();
    for m in 1..=r_max {
        if op.component(m).is_zero_complex() {
            continue;
        }
        for n in 1..=r_max {
            if m + n - 1 > r_max || op.component(n).is_zero_complex() {
                continue;
            }
            for i in 1..=m {
                let Some(old) = op.compose_table(m, i, n) else { continue };
                let pc_old = op.component(m);
                let qc_old = op.component(n);
                let tc_old = op.component(m + n - 1);
                let pc_new = out.component(m).clone();
                let qc_new = out.component(n).clone();
                let tc_new = out.component(m + n - 1).clone();
                let shift_p = big_n * (1 - m as i64);
                let shift_q = big_n * (1 - n as i64);
                let shift_t = big_n * (1 - (m + n - 1) as i64);
                let qdim_old = crate::operadcore::flat_dim(qc_old);
                let qdim_new = crate::operadcore::flat_dim(&qc_new);
                let mut triples: Vec<(usize, usize, Scalar)> = Vec::new();
                for (row, col, v) in old.entries() {
                    let (dt, it) = crate::operadcore::unflat(tc_old, row);
                    let (dp, ip) = crate::operadcore::unflat(pc_old, col / qdim_old);
                    let (dq, iq) = crate::operadcore::unflat(qc_old, col % qdim_old);
                    let e = big_n * (n as i64 - 1) * ((i as i64 - 1) + dp);
                    let w = if e.rem_euclid(2) == 0 { v.clone() } else { ring.neg(v) };
                    let new_col = flat_of(&pc_new, dp + shift_p, ip) * qdim_new
                        + flat_of(&qc_new, dq + shift_q, iq);
                    let new_row = flat_of(&tc_new, dt + shift_t, it);
                    triples.push((new_row, new_col, w));
                }
                let mat = SparseMat::from_triples(
                    &ring,
                    crate::operadcore::flat_dim(&tc_new),
                    crate::operadcore::flat_dim(&pc_new) * qdim_new,
                    triples,
                );
                out.set_compose(m, i, n, mat)?;
            }
        }
    }
    Ok(out)
}

/// The canonical cycles μ, λ_{n-1} in E_n(2) and the basis positions of
/// the two alternating tuples in degree n-1.
pub struct CanonicalGenerators {
    /// the identity 0-simplex
    pub mu: Chain,
    /// a_{n-1} + (-1)^n b_{n-1}; for n = 1 the identity vertex
    pub lambda: Chain,
    pub lambda_degree: i64,
    pub a_index: usize,
    pub b_index: usize,
}

pub fn canonical_generators(ring: CoefficientRing, n: usize) -> Result<CanonicalGenerators> {
    if n < 1 {
        return Err(Error::Validation("require n >= 1".into()));
    }
    let comp = en_component(ring, n, 2)?;
    let e = Perm::identity(2);
    let t = Perm::adjacent_transposition(2, 1);
    let d = (n - 1) as i64;
    let alt = |first: &Perm, second: &Perm, len: usize| -> BESimplex {
        let mut v = Vec::with_capacity(len);
        for k in 0..len {
            v.push(if k % 2 == 0 { first.clone() } else { second.clone() });
        }
        BESimplex::new(v).unwrap()
    };
    let a = alt(&e, &t, n);
    let b = alt(&t, &e, n);
    let find = |s: &BESimplex| -> usize {
        comp.simplices[n - 1]
            .iter()
            .position(|x| x == s)
            .expect("alternating tuple present")
    };
    let a_index = find(&a);
    let b_index = find(&b);
    let mu_index = comp.simplices[0]
        .iter()
        .position(|x| x.verts[0] == e)
        .expect("identity vertex");
    let mut mu = Chain::zero(2);
    mu.add_term(&ring, 0, mu_index, &ring.one());
    let mut lambda = Chain::zero(2);
    if n == 1 {
        lambda.add_term(&ring, 0, a_index, &ring.one());
    } else {
        lambda.add_term(&ring, d, a_index, &ring.one());
        let s = if n % 2 == 0 { 1 } else { -1 };
        lambda.add_term(&ring, d, b_index, &ring.from_i64(s));
    }
    Ok(CanonicalGenerators { mu, lambda, lambda_degree: d, a_index, b_index })
}

/// Rescaling endomorphism of the commutative operad: c^{r-1} in arity r.
pub fn rescaling(ring: CoefficientRing, c: &Scalar, r_max: usize) -> EquivariantMap {
    let mut out = EquivariantMap::zero(r_max, 0);
    let mut power = ring.one();
    for r in 1..=r_max {
        let mat = SparseMat::from_triples(&ring, 1, 1, vec![(0, 0, power.clone())]);
        out.per_arity[r].insert(0, mat);
        power = ring.mul(&power, c);
    }
    out
}

/// The degree-0 surjection E_n -> C: sum of coefficients on each word.
pub fn en_to_c_surjection(ring: CoefficientRing, en: &EnOperad) -> EquivariantMap {
    let r_max = en.op.r_max();
    let mut out = EquivariantMap::zero(r_max, 0);
    for r in 1..=r_max {
        let dim0 = en.op.component(r).dim(0);
        if dim0 == 0 {
            continue;
        }
        let mat = SparseMat::from_int_triples(&ring, 1, dim0, (0..dim0).map(|i| (0, i, 1)));
        out.per_arity[r].insert(0, mat);
    }
    out
}

/// Axiom checks for E_n at the simplex level, covering all instances
/// whose result arity stays within r_max, without materializing large
/// components.
pub fn en_formal_axiom_report(n: usize, r_max: usize) -> VerificationReport {
    let mut rep = VerificationReport::default();
    let mut bases: Vec<Vec<BESimplex>> = vec![Vec::new(); r_max + 1];
    for r in 2..r_max {
        let table = PermTable::new(r);
        bases[r] = en_tuple_basis(n, r)
            .into_iter()
            .flatten()
            .map(|t| BESimplex {
                verts: t.iter().map(|&w| table.perms[w as usize].clone()).collect(),
            })
            .collect();
    }
    let unit = BESimplex::vertex(Perm::identity(1));

    let mut gate = GateResult::pass("filtration-closure");
    'cl: for m in 2..r_max {
        for x in &bases[m] {
            for (f, _) in x.boundary() {
                if !f.within_level(n) {
                    gate = GateResult::fail("filtration-closure", format!("∂ of {}", x.label()));
                    break 'cl;
                }
            }
        }
    }
    rep.push(gate);

    let mut gate = GateResult::pass("compose-closure");
    'cc: for m in 2..r_max {
        for nn in 2..r_max {
            if m + nn - 1 > r_max {
                continue;
            }
            for i in 1..=m {
                for x in &bases[m] {
                    for y in &bases[nn] {
                        for (s, _) in x.compose(i as u8, y) {
                            if !s.within_level(n) {
                                gate = GateResult::fail(
                                    "compose-closure",
                                    format!("{} ∘_{i} {}", x.label(), y.label()),
                                );
                                break 'cc;
                            }
                        }
                    }
                }
            }
        }
    }
    rep.push(gate);

    let mut gate = GateResult::pass("unit-laws");
    'ul: for r in 2..=r_max {
        let table = PermTable::new(r);
        for lv in en_orbit_tuples(n, r) {
            for t in lv {
                let x = BESimplex {
                    verts: t.iter().map(|&w| table.perms[w as usize].clone()).collect(),
                };
                for i in 1..=r {
                    if x.compose(i as u8, &unit) != vec![(x.clone(), 1)] {
                        gate = GateResult::fail("unit-laws", format!("{} ∘_{i} 1", x.label()));
                        break 'ul;
                    }
                }
                if unit.compose(1, &x) != vec![(x.clone(), 1)] {
                    gate = GateResult::fail("unit-laws", format!("1 ∘_1 {}", x.label()));
                    break 'ul;
                }
            }
        }
    }
    rep.push(gate);

    let mut gate = GateResult::pass("compose-chain-map");
    'cm: for m in 2..r_max {
        for nn in 2..r_max {
            if m + nn - 1 > r_max {
                continue;
            }
            for i in 1..=m {
                for x in &bases[m] {
                    for y in &bases[nn] {
                        let cx = FormalChain::from([(x.clone(), 1)]);
                        let cy = FormalChain::from([(y.clone(), 1)]);
                        let lhs =
                            besimplex::chain_boundary(&besimplex::chain_compose(&cx, i as u8, &cy));
                        let mut rhs =
                            besimplex::chain_compose(&besimplex::chain_boundary(&cx), i as u8, &cy);
                        let s = if x.degree() % 2 == 0 { 1 } else { -1 };
                        for (zc, c) in
                            besimplex::chain_compose(&cx, i as u8, &besimplex::chain_boundary(&cy))
                        {
                            besimplex::chain_add(&mut rhs, zc, s * c);
                        }
                        if lhs != rhs {
                            gate = GateResult::fail(
                                "compose-chain-map",
                                format!("{} ∘_{i} {}", x.label(), y.label()),
                            );
                            break 'cm;
                        }
                    }
                }
            }
        }
    }
    rep.push(gate);

    let mut gate_seq = GateResult::pass("assoc-sequential");
    let mut gate_par = GateResult::pass("assoc-parallel");
    'as1: for a in 2..r_max {
        for b in 2..r_max {
            for c in 2..r_max {
                if a + b + c - 2 > r_max {
                    continue;
                }
                for x in &bases[a] {
                    for y in &bases[b] {
                        for z in &bases[c] {
                            let cx = FormalChain::from([(x.clone(), 1)]);
                            let cy = FormalChain::from([(y.clone(), 1)]);
                            let cz = FormalChain::from([(z.clone(), 1)]);
                            for i in 1..=a {
                                for j in 1..=b {
                                    let lhs = besimplex::chain_compose(
                                        &besimplex::chain_compose(&cx, i as u8, &cy),
                                        (i + j - 1) as u8,
                                        &cz,
                                    );
                                    let rhs = besimplex::chain_compose(
                                        &cx,
                                        i as u8,
                                        &besimplex::chain_compose(&cy, j as u8, &cz),
                                    );
                                    if lhs != rhs {
                                        gate_seq = GateResult::fail(
                                            "assoc-sequential",
                                            format!(
                                                "{} ∘_{i} {} ∘_{j} {}",
                                                x.label(),
                                                y.label(),
                                                z.label()
                                            ),
                                        );
                                        break 'as1;
                                    }
                                }
                                for k in (i + 1)..=a {
                                    let lhs = besimplex::chain_compose(
                                        &besimplex::chain_compose(&cx, i as u8, &cy),
                                        (k + b - 1) as u8,
                                        &cz,
                                    );
                                    let mut rhs = FormalChain::new();
                                    let s =
                                        if (y.degree() * z.degree()) % 2 == 0 { 1 } else { -1 };
                                    for (w, cc) in besimplex::chain_compose(
                                        &besimplex::chain_compose(&cx, k as u8, &cz),
                                        i as u8,
                                        &cy,
                                    ) {
                                        besimplex::chain_add(&mut rhs, w, s * cc);
                                    }
                                    if lhs != rhs {
                                        gate_par = GateResult::fail(
                                            "assoc-parallel",
                                            format!(
                                                "({} ∘_{i} {}) vs ∘_{k} {}",
                                                x.label(),
                                                y.label(),
                                                z.label()
                                            ),
                                        );
                                        break 'as1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    rep.push(gate_seq);
    rep.push(gate_par);

    let mut gate = GateResult::pass("equivariance");
    'eq: for m in 2..r_max {
        for nn in 2..r_max {
            if m + nn - 1 > r_max {
                continue;
            }
            for i in 1..=m {
                for l in 1..m {
                    let s = Perm::adjacent_transposition(m, l);
                    let si = s.inverse().apply(i as u8);
                    let outer = s.block_substitute(i as u8, &Perm::identity(nn));
                    for x in &bases[m] {
                        for y in &bases[nn] {
                            let cy = FormalChain::from([(y.clone(), 1)]);
                            let sx = FormalChain::from([(x.act(&s), 1)]);
                            let lhs = besimplex::chain_compose(&sx, i as u8, &cy);
                            let cx = FormalChain::from([(x.clone(), 1)]);
                            let rhs = besimplex::chain_act(
                                &outer,
                                &besimplex::chain_compose(&cx, si, &cy),
                            );
                            if lhs != rhs {
                                gate = GateResult::fail(
                                    "equivariance",
                                    format!("outer s_{l}: {} ∘_{i} {}", x.label(), y.label()),
                                );
                                break 'eq;
                            }
                        }
                    }
                }
                for l in 1..nn {
                    let t = Perm::adjacent_transposition(nn, l);
                    let inner_perm = Perm::identity(m).block_substitute(i as u8, &t);
                    for x in &bases[m] {
                        for y in &bases[nn] {
                            let cx = FormalChain::from([(x.clone(), 1)]);
                            let ty = FormalChain::from([(y.act(&t), 1)]);
                            let lhs = besimplex::chain_compose(&cx, i as u8, &ty);
                            let cy = FormalChain::from([(y.clone(), 1)]);
                            let rhs = besimplex::chain_act(
                                &inner_perm,
                                &besimplex::chain_compose(&cx, i as u8, &cy),
                            );
                            if lhs != rhs {
                                gate = GateResult::fail(
                                    "equivariance",
                                    format!("inner s_{l}: {} ∘_{i} {}", x.label(), y.label()),
                                );
                                break 'eq;
                            }
                        }
                    }
                }
            }
        }
    }
    rep.push(gate);
    rep
}

/// Streaming check that the boundary preserves the filtration, taken on
/// orbit representatives (the boundary is equivariant).
pub fn en_closure_streaming(n: usize, r: usize) -> bool {
    let table = PermTable::new(r);
    for lv in en_orbit_tuples(n, r) {
        for t in lv {
            let s = BESimplex {
                verts: t.iter().map(|&w| table.perms[w as usize].clone()).collect(),
            };
            for (f, _) in s.boundary() {
                if !f.within_level(n) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoefficientRing {
        CoefficientRing::Integers
    }

    #[test]
    fn dims_match_enumeration() {
        assert_eq!(en_dims(1, 3), vec![6]);
        assert_eq!(en_dims(2, 2), vec![2, 2]);
        assert_eq!(en_dims(2, 3), vec![6, 30, 36, 12]);
        assert_eq!(en_dims(3, 2), vec![2, 2, 2]);
        assert_eq!(en_dims(3, 3), vec![6, 30, 150, 360, 420, 228, 48]);
        assert_eq!(en_dims(2, 4), vec![24, 552, 2496, 4704, 4416, 2064, 384]);
    }

    #[test]
    fn e1_is_regular_representation() {
        let comp = en_component(z(), 1, 4).unwrap();
        assert_eq!(comp.complex.degrees(), vec![0]);
        assert_eq!(comp.complex.dim(0), 24);
    }

    #[test]
    fn en2_homology_ranks() {
        for n in 1..=3usize {
            let comp = en_component(z(), n, 2).unwrap();
            comp.complex.validate().unwrap();
            let h = comp.complex.homology().unwrap();
            assert_eq!(h.rank(0), 1, "n={n}");
            if n >= 2 {
                assert_eq!(h.rank((n - 1) as i64), 1, "n={n}");
            }
            for d in 1..(n - 1) as i64 {
                assert_eq!(h.rank(d), 0);
                assert!(h.torsion(d).is_empty());
            }
        }
    }

    #[test]
    fn e2_3_homology_is_configuration() {
        let comp = en_component(z(), 2, 3).unwrap();
        let h = comp.complex.homology().unwrap();
        assert_eq!(h.rank(0), 1);
        assert_eq!(h.rank(1), 3);
        assert_eq!(h.rank(2), 2);
        assert_eq!(h.rank(3), 0);
        assert!(h.torsion(3).is_empty());
        assert!(comp.complex.degrees().contains(&3));
    }

    #[test]
    fn free_action_and_group_law() {
        let comp = en_component(z(), 2, 3).unwrap();
        let mut s = SigmaObject::zero(z(), 3);
        s.set_component(3, comp.complex, comp.action).unwrap();
        s.validate().unwrap();
        s.validate_group_law(3).unwrap();
        assert!(s.action_is_free(3));
    }

    #[test]
    fn orbit_complex_matches_small_coinvariants() {
        let oc = en_orbit_complex_int(2, 2, 0);
        assert_eq!(oc.dims, vec![1, 1]);
        let h = orbit_homology(&oc, &z(), 0, 1);
        assert_eq!(h.rank(0), 1);
        assert_eq!(h.rank(1), 1);
        let comp = en_component(z(), 2, 2).unwrap();
        let co = crate::sigmaobj::coinvariants_of(&comp.complex, &comp.action).unwrap();
        assert_eq!(co.dim(0), 1);
        assert_eq!(co.dim(1), 1);
        assert!(co.differential(1).is_zero_mat());
    }

    #[test]
    fn orbit_complex_e2_3_is_braid_homology() {
        let oc = en_orbit_complex_int(2, 3, 0);
        assert_eq!(oc.dims, vec![1, 5, 6, 2]);
        let top = oc.dims.len() as i64 - 1;
        let h = orbit_homology(&oc, &z(), 0, top);
        assert_eq!(h.rank(0), 1);
        assert_eq!(h.rank(1), 1);
        assert_eq!(h.rank(2), 0);
        assert!(h.torsion(2).is_empty());
        assert_eq!(h.rank(3), 0);
        assert!(h.torsion(3).is_empty());
    }

    #[test]
    fn twisted_orbit_complex_n3_top_rank() {
        let oc = en_orbit_complex_int(3, 2, 1);
        let h = orbit_homology(&oc, &z(), 0, 2);
        assert_eq!(h.rank(2), 1);
        assert_eq!(h.rank(0), 0);
        let oc0 = en_orbit_complex_int(3, 2, 0);
        let h0 = orbit_homology(&oc0, &z(), 0, 2);
        assert_eq!(h0.rank(2), 0);
        assert_eq!(h0.rank(0), 1);
    }

    #[test]
    fn canonical_cycles() {
        for n in 2..=3usize {
            let g = canonical_generators(z(), n).unwrap();
            let en = en_component(z(), n, 2).unwrap();
            let d = en.complex.differential(g.lambda_degree);
            let mut v = vec![z().zero(); en.complex.dim(g.lambda_degree)];
            for (&(deg, i), c) in &g.lambda.terms {
                assert_eq!(deg, g.lambda_degree);
                v[i] = c.clone();
            }
            let dv = d.apply(&z(), &v).unwrap();
            assert!(dv.iter().all(|x| z().is_zero(x)), "n={n}");
        }
        let g = canonical_generators(z(), 2).unwrap();
        assert_eq!(g.lambda.terms.len(), 2);
        assert!(g.lambda.terms.values().all(|c| *c == z().one()));
        let g3 = canonical_generators(z(), 3).unwrap();
        let vals: Vec<Scalar> = g3.lambda.terms.values().cloned().collect();
        assert!(vals.contains(&z().one()) && vals.contains(&z().from_i64(-1)));
    }

    #[test]
    fn commutative_and_associative_axioms() {
        let c = commutative_operad(z(), 4).unwrap();
        let rep = c.verify();
        assert!(rep.all_pass(), "{:?}", rep.gates);
        let a = associative_operad(z(), 4).unwrap();
        let rep = a.verify();
        assert!(rep.all_pass(), "{:?}", rep.gates);
        assert_eq!(a.component(3).dim(0), 6);
        let ring = z();
        let mu = Chain::basis(2, 0, 0, &ring);
        let l = c.compose_chain(&mu, 1, &mu).unwrap();
        let r = c.compose_chain(&mu, 2, &mu).unwrap();
        assert_eq!(l, r);
        assert!(!l.is_zero());
    }

    #[test]
    fn en_operad_axioms_small() {
        for n in [1usize, 2] {
            let en = en_operad(z(), n, 3).unwrap();
            let rep = en.op.verify();
            assert!(rep.all_pass(), "n={n}: {:?}", rep.gates);
        }
    }

    #[test]
    fn e1_equals_associative() {
        let e1 = en_operad(z(), 1, 4).unwrap();
        let a = associative_operad(z(), 4).unwrap();
        for r in 1..=4 {
            assert_eq!(e1.op.component(r).dim(0), a.component(r).dim(0));
            assert_eq!(e1.op.component(r).degrees(), vec![0]);
        }
        let ring = z();
        for m in 2..=3usize {
            for i in 1..=m {
                for ip in 0..e1.op.component(m).dim(0) {
                    for iq in 0..e1.op.component(2).dim(0) {
                        let x = Chain::basis(m, 0, ip, &ring);
                        let y = Chain::basis(2, 0, iq, &ring);
                        let l = e1.op.compose_chain(&x, i, &y).unwrap();
                        let r = a.compose_chain(&x, i, &y).unwrap();
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn surjection_to_commutative_is_morphism() {
        for n in 1..=2usize {
            let en = en_operad(z(), n, 4).unwrap();
            let c = commutative_operad(z(), 4).unwrap();
            let phi = en_to_c_surjection(z(), &en);
            let rep = en.op.verify_morphism(&c, &phi);
            assert!(rep.all_pass(), "n={n}: {:?}", rep.gates);
        }
    }

    #[test]
    fn rescaling_is_morphism_and_multiplicative() {
        let ring = z();
        let c = commutative_operad(ring, 5).unwrap();
        for cc in [-2i64, 0, 1, 3] {
            let rho = rescaling(ring, &ring.from_i64(cc), 5);
            let rep = c.verify_morphism(&c, &rho);
            assert!(rep.all_pass(), "c={cc}: {:?}", rep.gates);
        }
        let rho3 = rescaling(ring, &ring.from_i64(3), 4);
        assert_eq!(rho3.matrix(3, 0).unwrap().get(&ring, 0, 0), ring.from_i64(9));
        let rho1 = rescaling(ring, &ring.from_i64(1), 4);
        for r in 1..=4 {
            assert_eq!(rho1.matrix(r, 0).unwrap().get(&ring, 0, 0), ring.one());
        }
        let rho0 = rescaling(ring, &ring.from_i64(0), 4);
        assert_eq!(rho0.matrix(1, 0).unwrap().get(&ring, 0, 0), ring.one());
        for r in 2..=4 {
            assert!(ring.is_zero(&rho0.matrix(r, 0).unwrap().get(&ring, 0, 0)));
        }
    }

    #[test]
    fn formal_axiom_suite_small() {
        for n in 1..=2usize {
            let rep = en_formal_axiom_report(n, 4);
            assert!(rep.all_pass(), "n={n}: {:?}", rep.gates);
        }
    }

    #[test]
    fn closure_streaming_small() {
        assert!(en_closure_streaming(2, 3));
        assert!(en_closure_streaming(2, 4));
        assert!(en_closure_streaming(3, 3));
    }

    #[test]
    fn suspension_passes_axioms() {
        let c = commutative_operad(z(), 4).unwrap();
        for big_n in 1..=2i64 {
            let s = suspend_operad(&c, big_n).unwrap();
            let rep = s.verify();
            assert!(rep.all_pass(), "N={big_n}: {:?}", rep.gates);
            assert_eq!(s.component(2).dim(-big_n), 1);
        }
        let a = associative_operad(z(), 4).unwrap();
        let s = suspend_operad(&a, 1).unwrap();
        let rep = s.verify();
        assert!(rep.all_pass(), "{:?}", rep.gates);
        let en = en_operad(z(), 2, 3).unwrap();
        for big_n in 1..=2i64 {
            let s = suspend_operad(&en.op, big_n).unwrap();
            let rep = s.verify();
            assert!(rep.all_pass(), "N={big_n}: {:?}", rep.gates);
        }
    }

    #[test]
    fn barratt_eccles_truncation() {
        let comp = barratt_eccles_component(z(), 2, 4).unwrap();
        for d in 0..=4i64 {
            assert_eq!(comp.complex.dim(d), 2);
        }
        comp.complex.validate().unwrap();
        let h = comp.complex.homology().unwrap();
        assert_eq!(h.rank(0), 1);
        for d in 1..4i64 {
            assert_eq!(h.rank(d), 0);
            assert!(h.torsion(d).is_empty(), "degree {d}");
        }
    }
}
