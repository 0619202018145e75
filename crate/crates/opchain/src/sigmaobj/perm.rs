//! Permutations in one-line "output word" notation: the word lists input
//! indices by output position, so w[p] is the input sitting at position
//! p+1. Applying a permutation to a word acts letterwise.

use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Perm {
    w: Vec<u8>,
}

impl Perm {
    pub fn identity(r: usize) -> Self {
        Perm { w: (1..=r as u8).collect() }
    }

    /// Builds from a one-line word; validates it is a permutation.
    pub fn from_word(w: Vec<u8>) -> Option<Self> {
        let r = w.len();
        let mut seen = vec![false; r + 1];
        for &x in &w {
            if x == 0 || x as usize > r || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm { w })
    }

    /// The adjacent transposition exchanging i and i+1 (1-based, i < r).
    pub fn adjacent_transposition(r: usize, i: usize) -> Self {
        let mut w: Vec<u8> = (1..=r as u8).collect();
        w.swap(i - 1, i);
        Perm { w }
    }

    pub fn arity(&self) -> usize {
        self.w.len()
    }

    pub fn word(&self) -> &[u8] {
        &self.w
    }

    /// Image of the input index k (1-based) under the permutation read as
    /// the function position -> letter.
    pub fn apply(&self, k: u8) -> u8 {
        self.w[(k - 1) as usize]
    }

    /// Function composition: (self ∘ other)(k) = self(other(k)). On words
    /// this applies self to each letter of other.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.arity(), other.arity());
        Perm { w: other.w.iter().map(|&x| self.apply(x)).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut w = vec![0u8; self.w.len()];
        for (p, &x) in self.w.iter().enumerate() {
            w[(x - 1) as usize] = (p + 1) as u8;
        }
        Perm { w }
    }

    pub fn is_identity(&self) -> bool {
        self.w.iter().enumerate().all(|(p, &x)| x as usize == p + 1)
    }

    /// Signature: parity of the inversion count.
    pub fn sign(&self) -> i64 {
        let mut inv = 0usize;
        for i in 0..self.w.len() {
            for j in i + 1..self.w.len() {
                if self.w[i] > self.w[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Writes self as a product of adjacent transpositions (left to
    /// right): self = s_{v[0]} ∘ s_{v[1]} ∘ ... .
    pub fn adjacent_factorization(&self) -> Vec<usize> {
        // bubble sort by right multiplication: w ∘ s_i swaps positions
        // i, i+1 of the word
        let mut w = self.w.clone();
        let mut applied: Vec<usize> = Vec::new();
        loop {
            let mut done = true;
            for p in 0..w.len().saturating_sub(1) {
                if w[p] > w[p + 1] {
                    w.swap(p, p + 1);
                    applied.push(p + 1);
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        applied.reverse();
        applied
    }

    /// Block substitution on output words: replace the letter `i` of self
    /// by `inner` on a fresh block of consecutive letters, shifting larger
    /// letters up.
    pub fn block_substitute(&self, i: u8, inner: &Perm) -> Perm {
        let n = inner.arity() as u8;
        let mut w: Vec<u8> = Vec::with_capacity(self.arity() + inner.arity() - 1);
        for &x in &self.w {
            if x == i {
                for &y in &inner.w {
                    w.push(i - 1 + y);
                }
            } else if x > i {
                w.push(x + n - 1);
            } else {
                w.push(x);
            }
        }
        Perm { w }
    }

    /// All permutations of r letters in lexicographic word order.
    pub fn all(r: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut w: Vec<u8> = (1..=r as u8).collect();
        loop {
            out.push(Perm { w: w.clone() });
            // next lexicographic permutation
            let n = w.len();
            if n < 2 {
                break;
            }
            let mut i = n - 1;
            while i > 0 && w[i - 1] >= w[i] {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let mut j = n - 1;
            while w[j] <= w[i - 1] {
                j -= 1;
            }
            w.swap(i - 1, j);
            w[i..].reverse();
        }
        out
    }

    /// Compact label: the word as a digit string (arities stay below 10).
    pub fn label(&self) -> String {
        self.w.iter().map(|x| x.to_string()).collect()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        for a in Perm::all(4) {
            assert!(a.compose(&a.inverse()).is_identity());
            for b in Perm::all(4) {
                let ab = a.compose(&b);
                for k in 1..=4u8 {
                    assert_eq!(ab.apply(k), a.apply(b.apply(k)));
                }
            }
        }
    }

    #[test]
    fn sign_is_homomorphism() {
        for a in Perm::all(4) {
            for b in Perm::all(4) {
                assert_eq!(a.compose(&b).sign(), a.sign() * b.sign());
            }
        }
    }

    #[test]
    fn adjacent_factorization_reconstructs() {
        for a in Perm::all(5) {
            let f = a.adjacent_factorization();
            let mut p = Perm::identity(5);
            for &i in &f {
                p = p.compose(&Perm::adjacent_transposition(5, i));
            }
            assert_eq!(p, a);
        }
    }

    #[test]
    fn block_substitution_example() {
        // word 21 with word 21 in slot 1 gives word 321
        let t = Perm::from_word(vec![2, 1]).unwrap();
        let r = t.block_substitute(1, &t);
        assert_eq!(r.word(), &[3, 2, 1]);
        // unit laws
        let e1 = Perm::identity(1);
        for w in Perm::all(3) {
            for i in 1..=3u8 {
                assert_eq!(w.block_substitute(i, &e1), w);
            }
            assert_eq!(e1.block_substitute(1, &w), w);
        }
    }

    #[test]
    fn block_substitution_associativity() {
        // operad axioms for the permutation (associative) operad
        for u in Perm::all(2) {
            for v in Perm::all(2) {
                for w in Perm::all(2) {
                    // sequential: (u ∘_i v) ∘_{i+j-1} w = u ∘_i (v ∘_j w)
                    for i in 1..=2u8 {
                        for j in 1..=2u8 {
                            let lhs = u.block_substitute(i, &v).block_substitute(i + j - 1, &w);
                            let rhs = u.block_substitute(i, &v.block_substitute(j, &w));
                            assert_eq!(lhs, rhs);
                        }
                    }
                    // parallel: i < k
                    let (i, k) = (1u8, 2u8);
                    let lhs = u
                        .block_substitute(i, &v)
                        .block_substitute(k + v.arity() as u8 - 1, &w);
                    let rhs = u.block_substitute(k, &w).block_substitute(i, &v);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
