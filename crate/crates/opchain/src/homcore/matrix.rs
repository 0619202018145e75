//! Sparse matrices over the coefficient rings, with a dedicated integer
//! engine for the heavy eliminations behind homology.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

use super::ring::{CoefficientRing, Scalar};
use crate::{Error, Result};

/// Sparse matrix of (row, column, value) triples, stored column-major
/// for fast column extraction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: usize,
    /// keyed by (column, row)
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(ring: &CoefficientRing, n: usize) -> Self {
        let mut m = SparseMat::zero(n, n);
        for i in 0..n {
            m.entries.insert((i, i), ring.one());
        }
        m
    }

    pub fn from_triples(
        ring: &CoefficientRing,
        rows: usize,
        cols: usize,
        triples: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Self {
        let mut m = SparseMat::zero(rows, cols);
        for (r, c, v) in triples {
            m.add_to(ring, r, c, &v);
        }
        m
    }

    pub fn from_int_triples(
        ring: &CoefficientRing,
        rows: usize,
        cols: usize,
        triples: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Self {
        Self::from_triples(
            ring,
            rows,
            cols,
            triples.into_iter().map(|(r, c, v)| (r, c, ring.from_i64(v))),
        )
    }

    pub fn get(&self, ring: &CoefficientRing, r: usize, c: usize) -> Scalar {
        self.entries.get(&(c, r)).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn set(&mut self, ring: &CoefficientRing, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if ring.is_zero(&v) {
            self.entries.remove(&(c, r));
        } else {
            self.entries.insert((c, r), v);
        }
    }

    pub fn add_to(&mut self, ring: &CoefficientRing, r: usize, c: usize, v: &Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        let cur = self.get(ring, r, c);
        self.set(ring, r, c, ring.add(&cur, v));
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(c, r), v)| (r, c, v))
    }

    /// Entries of one column as (row, value) pairs.
    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries
            .range((c, 0)..=(c, usize::MAX))
            .map(|(&(_, r), v)| (r, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero_mat(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, ring: &CoefficientRing, other: &SparseMat) -> Result<SparseMat> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch);
        }
        let mut m = self.clone();
        for (r, c, v) in other.entries() {
            m.add_to(ring, r, c, v);
        }
        Ok(m)
    }

    pub fn neg(&self, ring: &CoefficientRing) -> SparseMat {
        let mut m = SparseMat::zero(self.rows, self.cols);
        for (k, v) in &self.entries {
            m.entries.insert(*k, ring.neg(v));
        }
        m
    }

    pub fn scale(&self, ring: &CoefficientRing, s: &Scalar) -> SparseMat {
        let mut m = SparseMat::zero(self.rows, self.cols);
        if ring.is_zero(s) {
            return m;
        }
        for (k, v) in &self.entries {
            let w = ring.mul(v, s);
            if !ring.is_zero(&w) {
                m.entries.insert(*k, w);
            }
        }
        m
    }

    pub fn mul(&self, ring: &CoefficientRing, other: &SparseMat) -> Result<SparseMat> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch);
        }
        let mut m = SparseMat::zero(self.rows, other.cols);
        for (k, c, v) in other.entries() {
            for (r, w) in self.column(k) {
                m.add_to(ring, r, c, &ring.mul(w, v));
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> SparseMat {
        let mut m = SparseMat::zero(self.cols, self.rows);
        for (&(c, r), v) in &self.entries {
            m.entries.insert((r, c), v.clone());
        }
        m
    }

    pub fn apply(&self, ring: &CoefficientRing, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch);
        }
        let mut out = vec![ring.zero(); self.rows];
        for (r, c, w) in self.entries() {
            if !ring.is_zero(&v[c]) {
                out[r] = ring.add(&out[r], &ring.mul(w, &v[c]));
            }
        }
        Ok(out)
    }

    /// Vertical stack: self on top of other (same column count).
    pub fn vstack(&self, other: &SparseMat) -> Result<SparseMat> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch);
        }
        let mut m = SparseMat::zero(self.rows + other.rows, self.cols);
        for (&(c, r), v) in &self.entries {
            m.entries.insert((c, r), v.clone());
        }
        for (&(c, r), v) in &other.entries {
            m.entries.insert((c, self.rows + r), v.clone());
        }
        Ok(m)
    }

    /// Requires an Integers-ring matrix; extracts BigInt entries.
    pub fn to_int(&self) -> SparseIntMat {
        let mut cols: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            let x = v.as_int().expect("integer matrix required").clone();
            cols[c].push((r as u32, x));
        }
        SparseIntMat { rows: self.rows, cols_data: cols }
    }
}

/// Column-major sparse integer matrix: the working format of the
/// elimination engine. Column entries are kept sorted by row.
#[derive(Clone, Debug)]
pub struct SparseIntMat {
    pub rows: usize,
    pub cols_data: Vec<Vec<(u32, BigInt)>>,
}

impl SparseIntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseIntMat { rows, cols_data: vec![Vec::new(); cols] }
    }

    pub fn cols(&self) -> usize {
        self.cols_data.len()
    }

    pub fn from_i64_triples(
        rows: usize,
        cols: usize,
        triples: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Self {
        let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (r, c, v) in triples {
            *acc.entry((r, c)).or_insert(0) += v;
        }
        let mut m = SparseIntMat::zero(rows, cols);
        for ((r, c), v) in acc {
            if v != 0 {
                m.cols_data[c].push((r as u32, BigInt::from(v)));
            }
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.cols_data.iter().map(|c| c.len()).sum()
    }
}

/// Mod-p rank by sparse Gaussian elimination. Destroys nothing; clones
/// column data into u64 residues first.
pub fn rank_mod_p(m: &SparseIntMat, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut cols: Vec<BTreeMap<u32, u64>> = Vec::with_capacity(m.cols());
    for col in &m.cols_data {
        let mut cm = BTreeMap::new();
        for (r, v) in col {
            let res = v.mod_floor_u64(&pb, p);
            if res != 0 {
                cm.insert(*r, res);
            }
        }
        cols.push(cm);
    }
    sparse_field_rank(cols, p)
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, pb: &BigInt, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, pb: &BigInt, _p: u64) -> u64 {
        use num_integer::Integer;
        u64::try_from(self.mod_floor(pb)).expect("residue fits u64")
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut base = a as u128;
    let mut acc: u128 = 1;
    let mut e = p - 2;
    let m = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

fn sparse_field_rank(mut cols: Vec<BTreeMap<u32, u64>>, p: u64) -> usize {
    // row -> index of column pivoting on it
    let mut pivot_of_row: BTreeMap<u32, usize> = BTreeMap::new();
    let mut rank = 0usize;
    for j in 0..cols.len() {
        // reduce column j against existing pivots until it stabilizes
        loop {
            let Some((&r, &v)) = cols[j].iter().next_back() else { break };
            if let Some(&pj) = pivot_of_row.get(&r) {
                // cancel leading entry with pivot column pj (pivot value 1)
                let f = (p - v) % p;
                let pc = cols[pj].clone();
                for (rr, vv) in pc {
                    let cur = cols[j].get(&rr).copied().unwrap_or(0);
                    let nv = (cur as u128 + f as u128 * vv as u128 % p as u128) % p as u128;
                    if nv == 0 {
                        cols[j].remove(&rr);
                    } else {
                        cols[j].insert(rr, nv as u64);
                    }
                }
            } else {
                // normalize to pivot value 1
                let inv = inv_mod(v, p);
                let keys: Vec<u32> = cols[j].keys().copied().collect();
                for k in keys {
                    let e = cols[j].get_mut(&k).unwrap();
                    *e = (*e as u128 * inv as u128 % p as u128) as u64;
                }
                pivot_of_row.insert(r, j);
                rank += 1;
                break;
            }
        }
    }
    rank
}

/// Rank over Q of an integer matrix, via fraction-free sparse elimination
/// with pivoting on small entries.
pub fn rank_over_q(m: &SparseIntMat) -> usize {
    // Use the Smith engine in rank-only mode: the number of nonzero
    // invariant factors equals the rank over Q.
    smith_engine(m.clone(), true).len()
}

/// Invariant factors (in divisibility order, all positive) of an integer
/// matrix. The zero matrix yields an empty list.
pub fn invariant_factors(m: &SparseIntMat) -> Vec<BigInt> {
    smith_engine(m.clone(), false)
}

/// Sparse Smith engine. Greedy unit-pivot elimination with Markowitz
/// ordering through a lazy heap; whatever survives without a ±1 pivot is
/// compacted into a dense block and finished there. In rank-only mode the
/// divisibility repair is skipped.
fn smith_engine(m: SparseIntMat, rank_only: bool) -> Vec<BigInt> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let nrows = m.rows;
    let mut cols: Vec<BTreeMap<u32, BigInt>> = m
        .cols_data
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect();
    let ncols = cols.len();
    let mut rows_idx: Vec<std::collections::BTreeSet<u32>> = vec![Default::default(); nrows];
    for (j, col) in cols.iter().enumerate() {
        for (&r, _) in col.iter() {
            rows_idx[r as usize].insert(j as u32);
        }
    }
    let mut col_alive = vec![true; ncols];
    let mut units = 0usize;

    let cost_of = |cols: &Vec<BTreeMap<u32, BigInt>>,
                   rows_idx: &Vec<std::collections::BTreeSet<u32>>,
                   j: usize,
                   r: u32| {
        let cl = cols[j].len() as u64;
        let rl = rows_idx[r as usize].len() as u64;
        (cl - 1) * (rl - 1)
    };

    let mut heap: BinaryHeap<Reverse<(u64, u32, u32)>> = BinaryHeap::new();
    for (j, col) in cols.iter().enumerate() {
        for (&r, v) in col.iter() {
            if v.abs().is_one() {
                heap.push(Reverse((cost_of(&cols, &rows_idx, j, r), j as u32, r)));
            }
        }
    }

    while let Some(Reverse((cost, j32, pr))) = heap.pop() {
        let pj = j32 as usize;
        if !col_alive[pj] {
            continue;
        }
        let Some(pv) = cols[pj].get(&pr).cloned() else { continue };
        if !pv.abs().is_one() {
            continue;
        }
        let now = cost_of(&cols, &rows_idx, pj, pr);
        if now > cost {
            heap.push(Reverse((now, j32, pr)));
            continue;
        }
        // eliminate row pr and column pj
        let pivot_col: Vec<(u32, BigInt)> =
            cols[pj].iter().map(|(&r, v)| (r, v.clone())).collect();
        let touched: Vec<u32> = rows_idx[pr as usize]
            .iter()
            .copied()
            .filter(|&j| j as usize != pj && col_alive[j as usize])
            .collect();
        for j in touched {
            let j = j as usize;
            let Some(a) = cols[j].get(&pr).cloned() else { continue };
            let f = if pv.is_one() { a } else { -a };
            for (r, v) in &pivot_col {
                if *r == pr {
                    cols[j].remove(&pr);
                    rows_idx[pr as usize].remove(&(j as u32));
                    continue;
                }
                let sub = &f * v;
                let cur = cols[j].get(r).cloned().unwrap_or_else(BigInt::zero);
                let nv = cur - sub;
                if nv.is_zero() {
                    cols[j].remove(r);
                    rows_idx[*r as usize].remove(&(j as u32));
                } else {
                    if nv.abs().is_one() {
                        heap.push(Reverse((
                            cost_of(&cols, &rows_idx, j, *r).max(1),
                            j as u32,
                            *r,
                        )));
                    }
                    cols[j].insert(*r, nv);
                    rows_idx[*r as usize].insert(j as u32);
                }
            }
        }
        for (&r, _) in cols[pj].iter() {
            rows_idx[r as usize].remove(&(pj as u32));
        }
        cols[pj].clear();
        col_alive[pj] = false;
        units += 1;
    }

    // compact the remaining live entries into a dense block
    let mut live_rows: BTreeMap<u32, usize> = BTreeMap::new();
    let mut live: Vec<(usize, usize, BigInt)> = Vec::new();
    let mut next_col = 0usize;
    for (j, col) in cols.iter().enumerate() {
        if !col_alive[j] || col.is_empty() {
            continue;
        }
        for (&r, v) in col.iter() {
            let nrow = live_rows.len();
            let ri = *live_rows.entry(r).or_insert(nrow);
            live.push((ri, next_col, v.clone()));
        }
        next_col += 1;
    }
    let mut diagonal = vec![BigInt::one(); units];
    if !live.is_empty() {
        let nr = live_rows.len();
        let mut dense: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); next_col]; nr];
        for (r, c, v) in live {
            dense[r][c] = v;
        }
        diagonal.extend(dense_smith_diagonal(dense));
    }
    finish_diagonal(diagonal, rank_only)
}

/// Diagonal of the Smith form of a dense integer matrix (no transforms).
fn dense_smith_diagonal(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nr = m.len();
    let nc = if nr > 0 { m[0].len() } else { 0 };
    let k = nr.min(nc);
    let mut out = Vec::new();
    let mut t = 0usize;
    while t < k {
        let mut piv: Option<(usize, usize)> = None;
        let mut pmin = BigInt::zero();
        for i in t..nr {
            for j in t..nc {
                if !m[i][j].is_zero() {
                    let a = m[i][j].abs();
                    if piv.is_none() || a < pmin {
                        piv = Some((i, j));
                        pmin = a;
                    }
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in t + 1..nr {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = div_round(&m[i][t], &m[t][t]);
                if !q.is_zero() {
                    for j in t..nc {
                        let s = &q * &m[t][j];
                        m[i][j] -= s;
                    }
                }
                if !m[i][t].is_zero() {
                    m.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..nc {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = div_round(&m[t][j], &m[t][t]);
                if !q.is_zero() {
                    for i in t..nr {
                        let s = &q * &m[i][t];
                        m[i][j] -= s;
                    }
                }
                if !m[t][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest-integer division keeps remainders at most |b|/2
    let two = BigInt::from(2);
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if r.abs() * &two > b.abs() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn finish_diagonal(mut d: Vec<BigInt>, rank_only: bool) -> Vec<BigInt> {
    d.retain(|x| !x.is_zero());
    for x in d.iter_mut() {
        if x.is_negative() {
            *x = -x.clone();
        }
    }
    if rank_only {
        return d;
    }
    // repair divisibility: d1 | d2 | ... via gcd/lcm passes
    let n = d.len();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in i + 1..n {
                if (&d[j] % &d[i]).is_zero() {
                    continue;
                }
                let g = num_integer::Integer::gcd(&d[i], &d[j]);
                let l = &d[i] / &g * &d[j];
                d[i] = g;
                d[j] = l;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    d.sort();
    d
}

/// Full Smith normal form with unimodular transforms, for modest sizes.
/// Returns (S, U, V) with U * A * V = S, S diagonal with nonnegative
/// entries in divisibility order, det(U), det(V) = ±1.
pub fn smith_normal_form(a: &SparseMat) -> (SparseMat, SparseMat, SparseMat) {
    let nr = a.rows;
    let nc = a.cols;
    let mut m: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); nc]; nr];
    for (r, c, v) in a.entries() {
        m[r][c] = v.as_int().expect("integer matrix required").clone();
    }
    let mut u: Vec<Vec<BigInt>> = (0..nr)
        .map(|i| (0..nr).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut v: Vec<Vec<BigInt>> = (0..nc)
        .map(|i| (0..nc).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    let k = nr.min(nc);
    let mut t = 0usize;
    while t < k {
        // find minimal-abs nonzero pivot in the trailing block
        let mut piv: Option<(usize, usize)> = None;
        let mut pmin = BigInt::zero();
        for i in t..nr {
            for j in t..nc {
                if !m[i][j].is_zero() {
                    let a = m[i][j].abs();
                    if piv.is_none() || a < pmin {
                        piv = Some((i, j));
                        pmin = a;
                    }
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        // clear row and column t
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in t + 1..nr {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = div_round(&m[i][t], &m[t][t]);
                if !q.is_zero() {
                    for j in 0..nc {
                        let s = &q * &m[t][j];
                        m[i][j] -= s;
                    }
                    for j in 0..nr {
                        let s = &q * &u[t][j];
                        u[i][j] -= s;
                    }
                }
                if !m[i][t].is_zero() {
                    // remainder smaller than pivot: swap up and restart
                    m.swap(t, i);
                    u.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..nc {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = div_round(&m[t][j], &m[t][t]);
                if !q.is_zero() {
                    for i in 0..nr {
                        let s = &q * &m[i][t];
                        m[i][j] -= s;
                    }
                    for i in 0..nc {
                        let s = &q * &v[i][t];
                        v[i][j] -= s;
                    }
                }
                if !m[t][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    for row in v.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
        }
        t += 1;
    }
    // sign normalization and divisibility chain
    let rank = (0..k).take_while(|&i| !m[i][i].is_zero()).count();
    for i in 0..rank {
        if m[i][i].is_negative() {
            for j in 0..nc {
                v[j][i] = -v[j][i].clone();
            }
            m[i][i] = m[i][i].abs();
        }
    }
    let mut stable = false;
    while !stable {
        stable = true;
        for i in 0..rank {
            for j in i + 1..rank {
                if (&m[j][j] % &m[i][i]).is_zero() {
                    continue;
                }
                stable = false;
                let a = m[i][i].clone();
                let b = m[j][j].clone();
                let e = num_integer::Integer::extended_gcd(&a, &b);
                let (g, x, y) = (e.gcd, e.x, e.y);
                let l = &a / &g * &b;
                // U2 = [[x, y], [-b/g, a/g]], V2 = [[1, -(y b)/g],[1, (x a)/g]]
                let bg = &b / &g;
                let ag = &a / &g;
                let ybg = &y * &b / &g;
                let xag = &x * &a / &g;
                // rows i, j of U
                for c in 0..nr {
                    let ui = u[i][c].clone();
                    let uj = u[j][c].clone();
                    u[i][c] = &x * &ui + &y * &uj;
                    u[j][c] = -&bg * &ui + &ag * &uj;
                }
                // columns i, j of V
                for r in 0..nc {
                    let vi = v[r][i].clone();
                    let vj = v[r][j].clone();
                    v[r][i] = &vi + &vj;
                    v[r][j] = -&ybg * &vi + &xag * &vj;
                }
                m[i][i] = g;
                m[j][j] = l;
            }
        }
    }

    let ring = CoefficientRing::Integers;
    let pack = |mm: &Vec<Vec<BigInt>>, rows: usize, cols: usize| {
        SparseMat::from_triples(
            &ring,
            rows,
            cols,
            mm.iter().enumerate().flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(move |(c, x)| (r, c, Scalar::Int(x.clone())))
            }),
        )
    };
    (pack(&m, nr, nc), pack(&u, nr, nr), pack(&v, nc, nc))
}

/// Solves A x = b over the ring, if a solution exists.
pub fn solve_linear(
    ring: &CoefficientRing,
    a: &SparseMat,
    b: &[Scalar],
) -> Result<Option<Vec<Scalar>>> {
    if b.len() != a.rows {
        return Err(Error::ShapeMismatch);
    }
    match ring {
        CoefficientRing::Integers => {
            let (s, u, v) = smith_normal_form(a);
            let ub = u.apply(ring, b)?;
            let k = a.rows.min(a.cols);
            let mut y = vec![ring.zero(); a.cols];
            for i in 0..a.rows {
                let di = if i < k { s.get(ring, i, i) } else { ring.zero() };
                if ring.is_zero(&di) {
                    if !ring.is_zero(&ub[i]) {
                        return Ok(None);
                    }
                } else {
                    match ring.div_exact(&ub[i], &di) {
                        Some(q) => y[i] = q,
                        None => return Ok(None),
                    }
                }
            }
            Ok(Some(v.apply(ring, &y)?))
        }
        _ => solve_field(ring, a, b),
    }
}

fn solve_field(
    ring: &CoefficientRing,
    a: &SparseMat,
    b: &[Scalar],
) -> Result<Option<Vec<Scalar>>> {
    // dense augmented elimination; solves are small in practice
    let nr = a.rows;
    let nc = a.cols;
    let mut m: Vec<Vec<Scalar>> = vec![vec![ring.zero(); nc + 1]; nr];
    for (r, c, v) in a.entries() {
        m[r][c] = v.clone();
    }
    for (r, bv) in b.iter().enumerate() {
        m[r][nc] = bv.clone();
    }
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut pr = 0usize;
    for c in 0..nc {
        let Some(pi) = (pr..nr).find(|&i| !ring.is_zero(&m[i][c])) else { continue };
        m.swap(pr, pi);
        let inv = ring.inv(&m[pr][c]).expect("field");
        for j in 0..=nc {
            m[pr][j] = ring.mul(&m[pr][j], &inv);
        }
        for i in 0..nr {
            if i != pr && !ring.is_zero(&m[i][c]) {
                let f = m[i][c].clone();
                for j in 0..=nc {
                    let s = ring.mul(&f, &m[pr][j]);
                    m[i][j] = ring.sub(&m[i][j], &s);
                }
            }
        }
        pivots.push((pr, c));
        pr += 1;
        if pr == nr {
            break;
        }
    }
    for i in pr..nr {
        if !ring.is_zero(&m[i][nc]) {
            return Ok(None);
        }
    }
    let mut x = vec![ring.zero(); nc];
    for (r, c) in pivots {
        x[c] = m[r][nc].clone();
    }
    Ok(Some(x))
}

/// Rank of a matrix over its ring.
pub fn rank(ring: &CoefficientRing, a: &SparseMat) -> usize {
    match ring {
        CoefficientRing::Integers => rank_over_q(&a.to_int()),
        CoefficientRing::PrimeField(p) => {
            // fast path when entries are already integer residues
            let m = SparseIntMat {
                rows: a.rows,
                cols_data: {
                    let mut cols: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); a.cols];
                    for (r, c, v) in a.entries() {
                        let x = match v {
                            Scalar::Mod(x) => BigInt::from(*x),
                            Scalar::Int(x) => x.clone(),
                            Scalar::Rat(_) => unreachable!("rationals in F_p matrix"),
                        };
                        cols[c].push((r as u32, x));
                    }
                    cols
                },
            };
            rank_mod_p(&m, *p)
        }
        CoefficientRing::Rationals => {
            // clear denominators column by column, then integer rank
            let mut cols: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); a.cols];
            let mut denoms: Vec<BigInt> = vec![BigInt::one(); a.cols];
            for (_, c, v) in a.entries() {
                if let Scalar::Rat(x) = v {
                    denoms[c] = num_integer::Integer::lcm(&denoms[c], x.denom());
                }
            }
            for (r, c, v) in a.entries() {
                if let Scalar::Rat(x) = v {
                    let scaled = x * num_rational::BigRational::from(denoms[c].clone());
                    assert!(scaled.is_integer());
                    cols[c].push((r as u32, scaled.to_integer()));
                }
            }
            rank_over_q(&SparseIntMat { rows: a.rows, cols_data: cols })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoefficientRing {
        CoefficientRing::Integers
    }

    #[test]
    fn snf_small_example() {
        // [[2,4],[6,8]] -> diag(2,4): gcd of entries 2, |det| = 8
        let a = SparseMat::from_int_triples(&z(), 2, 2, vec![(0, 0, 2), (0, 1, 4), (1, 0, 6), (1, 1, 8)]);
        let (s, u, v) = smith_normal_form(&a);
        assert_eq!(s.get(&z(), 0, 0), z().from_i64(2));
        assert_eq!(s.get(&z(), 1, 1), z().from_i64(4));
        assert_eq!(s.get(&z(), 0, 1), z().from_i64(0));
        assert_eq!(s.get(&z(), 1, 0), z().from_i64(0));
        let uav = u.mul(&z(), &a).unwrap().mul(&z(), &v).unwrap();
        assert_eq!(uav, s);
    }

    #[test]
    fn snf_identity_and_zero() {
        let i3 = SparseMat::identity(&z(), 3);
        let (s, _, _) = smith_normal_form(&i3);
        for i in 0..3 {
            assert_eq!(s.get(&z(), i, i), z().from_i64(1));
        }
        let zmat = SparseMat::zero(2, 3);
        let (s, u, v) = smith_normal_form(&zmat);
        assert!(s.is_zero_mat());
        let uav = u.mul(&z(), &zmat).unwrap().mul(&z(), &v).unwrap();
        assert!(uav.is_zero_mat());
    }

    #[test]
    fn invariant_factors_sparse_engine() {
        let m = SparseIntMat::from_i64_triples(2, 2, vec![(0, 0, 2), (0, 1, 4), (1, 0, 6), (1, 1, 8)]);
        let f = invariant_factors(&m);
        assert_eq!(f, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(rank_over_q(&m), 2);
        // mod 2 the matrix is zero; mod 3 it is invertible
        assert_eq!(rank_mod_p(&m, 2), 0);
        assert_eq!(rank_mod_p(&m, 3), 2);
    }

    #[test]
    fn solve_examples() {
        // identity
        let a = SparseMat::identity(&z(), 2);
        let b = vec![z().from_i64(5), z().from_i64(-3)];
        assert_eq!(solve_linear(&z(), &a, &b).unwrap().unwrap(), b);
        // divisibility: [2] x = [3] has no integer solution, 3/2 over Q
        let a2 = SparseMat::from_int_triples(&z(), 1, 1, vec![(0, 0, 2)]);
        assert!(solve_linear(&z(), &a2, &[z().from_i64(3)]).unwrap().is_none());
        let q = CoefficientRing::Rationals;
        let a2q = SparseMat::from_int_triples(&q, 1, 1, vec![(0, 0, 2)]);
        let x = solve_linear(&q, &a2q, &[q.from_i64(3)]).unwrap().unwrap();
        assert_eq!(x[0], q.parse("3/2").unwrap());
        // [[2,4],[6,8]] x = [2,6]: x = [1,0] works
        let a3 = SparseMat::from_int_triples(&z(), 2, 2, vec![(0, 0, 2), (0, 1, 4), (1, 0, 6), (1, 1, 8)]);
        let b3 = vec![z().from_i64(2), z().from_i64(6)];
        let x = solve_linear(&z(), &a3, &b3).unwrap().unwrap();
        assert_eq!(a3.apply(&z(), &x).unwrap(), b3);
    }

    #[test]
    fn rank_matches_nonzero_factors() {
        let m = SparseIntMat::from_i64_triples(
            3,
            3,
            vec![(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4), (2, 2, 5)],
        );
        assert_eq!(rank_over_q(&m), 2);
        assert_eq!(invariant_factors(&m).len(), 2);
    }
}
