//! Code equivalence: is there `(π, z)` with `z + π(C1) = C2`?
//!
//! `C1` is normalized by translating its first word to zero; each candidate
//! `t ∈ C2` gives `T2 = C2 + t`, and a permutation with `π(T1) = T2` is
//! searched by backtracking. Coordinates are matched only within classes of
//! equal profile, pairs must agree on co-occurrence counts, the words of
//! `T1` supported inside the assigned coordinates must map onto the words
//! of `T2` supported inside their images, and the multiset of projections
//! of `T1` onto the assigned coordinates must map to that of `T2`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::word::{apply_codemap, Code, CodeMap, Word};

/// Default search-node limit.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Dimension of the span of `{x + c0 : x ∈ C}` for any fixed `c0 ∈ C`.
///
/// Translating by a codeword first makes this invariant under every
/// (permutation, translation) pair.
pub fn rank_invariant(code: &Code) -> usize {
    let Some(first) = code.words().first() else {
        return 0;
    };
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for w in code.words() {
        let mut v = w.bits() ^ first.bits();
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Equivalent,
    Inequivalent,
    /// Search budget exhausted before a decision.
    Undecided,
}

/// Invariants consulted while deciding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub ranks: (usize, usize),
    /// Why the codes were declared inequivalent, if they were.
    pub reason: Option<String>,
    pub translations_tried: usize,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub struct EquivResult {
    pub status: Status,
    /// `witness` maps the first code onto the second; verified.
    pub witness: Option<CodeMap>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug)]
pub struct EquivOptions {
    /// A translation `t ∈ C2` tried before all others.
    pub hint_translation: Option<Word>,
    pub budget: u64,
}

impl Default for EquivOptions {
    fn default() -> Self {
        EquivOptions {
            hint_translation: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Per-coordinate invariants of a code containing zero.
struct Profile {
    /// `(weight-layer covering counts, sorted pair co-occurrence counts)` per coordinate.
    per_coord: Vec<(Vec<usize>, Vec<usize>)>,
    /// `cooc[i][j]`: weight-4 words containing both `i` and `j`.
    cooc: Vec<Vec<usize>>,
}

impl Profile {
    fn new(code: &Code, min_weight: usize) -> Self {
        let n = code.length();
        let layers: Vec<usize> = if min_weight == 4 { vec![4] } else { vec![min_weight, 4] };
        let mut cover = vec![vec![0usize; layers.len()]; n];
        let mut cooc = vec![vec![0usize; n]; n];
        for w in code.words() {
            let wt = w.weight();
            let Some(li) = layers.iter().position(|&l| l == wt) else {
                continue;
            };
            let s = w.support();
            for &a in &s {
                cover[a - 1][li] += 1;
            }
            if wt == 4 {
                for &a in &s {
                    for &b in &s {
                        if a != b {
                            cooc[a - 1][b - 1] += 1;
                        }
                    }
                }
            }
        }
        let per_coord = (0..n)
            .map(|i| {
                let mut pairs: Vec<usize> = (0..n).filter(|&j| j != i).map(|j| cooc[i][j]).collect();
                pairs.sort_unstable();
                (cover[i].clone(), pairs)
            })
            .collect();
        Profile { per_coord, cooc }
    }
}

struct Search<'a> {
    n: usize,
    /// Nonzero words of `T1` grouped by highest coordinate.
    by_top: &'a [Vec<u64>],
    t2: &'a [u64],
    t2_set: &'a HashSet<u64>,
    p1: &'a Profile,
    p2: &'a Profile,
    /// Sorted projections of `T1` onto coordinates `0..=k`.
    target: Vec<Vec<u64>>,
    image: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
}

enum Outcome {
    Found(Vec<usize>),
    Exhausted,
    OutOfBudget,
}

impl Search<'_> {
    fn run(&mut self) -> Outcome {
        let keys = vec![0u64; self.t2.len()];
        match self.extend(0, &keys) {
            Some(true) => Outcome::Found(self.image.clone()),
            Some(false) => Outcome::Exhausted,
            None => Outcome::OutOfBudget,
        }
    }

    /// `Some(true)`: found, `Some(false)`: subtree exhausted, `None`: budget.
    fn extend(&mut self, k: usize, keys: &[u64]) -> Option<bool> {
        if k == self.n {
            return Some(true);
        }
        let mut next = vec![0u64; keys.len()];
        let mut sorted = vec![0u64; keys.len()];
        for j in 0..self.n {
            if self.used[j] || self.p1.per_coord[k] != self.p2.per_coord[j] {
                continue;
            }
            if (0..k).any(|i| self.p1.cooc[i][k] != self.p2.cooc[self.image[i]][j]) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            if !self.shortened_match(k, j) {
                continue;
            }
            for ((dst, &key), &y) in next.iter_mut().zip(keys).zip(self.t2) {
                *dst = key | (y >> j & 1) << k;
            }
            sorted.copy_from_slice(&next);
            sorted.sort_unstable();
            if sorted != self.target[k] {
                continue;
            }
            self.used[j] = true;
            self.image.push(j);
            match self.extend(k + 1, &next) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
            self.image.pop();
            self.used[j] = false;
        }
        Some(false)
    }

    /// Words supported on the first `k + 1` coordinates map into `T2`, and
    /// `T2` has no others supported on the image.
    fn shortened_match(&self, k: usize, j: usize) -> bool {
        let map = |x: u64| {
            let mut y = 0u64;
            let mut b = x;
            while b != 0 {
                let i = b.trailing_zeros() as usize;
                y |= 1 << if i == k { j } else { self.image[i] };
                b &= b - 1;
            }
            y
        };
        if !self.by_top[k].iter().all(|&x| self.t2_set.contains(&map(x))) {
            return false;
        }
        let expected: usize = self.by_top[..=k].iter().map(Vec::len).sum();
        let mask = self.image.iter().fold(1u64 << j, |m, &i| m | 1 << i);
        let inside = self.t2.iter().filter(|&&y| y != 0 && y & !mask == 0).count();
        inside == expected
    }
}

fn min_nonzero_weight(code: &Code) -> usize {
    code.words()
        .iter()
        .map(Word::weight)
        .filter(|&w| w > 0)
        .min()
        .unwrap_or(0)
}

/// Decides equivalence of two codes, returning a verified witness when
/// equivalent. Sound and complete within the node budget.
pub fn find_equivalence(c1: &Code, c2: &Code, opts: &EquivOptions) -> Result<EquivResult> {
    let ranks = (rank_invariant(c1), rank_invariant(c2));
    let mut cert = Certificate {
        ranks,
        reason: None,
        translations_tried: 0,
        nodes: 0,
    };
    let inequivalent = |mut cert: Certificate, why: String| {
        cert.reason = Some(why);
        Ok(EquivResult {
            status: Status::Inequivalent,
            witness: None,
            certificate: cert,
        })
    };
    if c1.length() != c2.length() {
        return inequivalent(cert, format!("lengths {} and {}", c1.length(), c2.length()));
    }
    if c1.len() != c2.len() {
        return inequivalent(cert, format!("sizes {} and {}", c1.len(), c2.len()));
    }
    if ranks.0 != ranks.1 {
        return inequivalent(cert, format!("ranks {} and {}", ranks.0, ranks.1));
    }
    let n = c1.length();
    if c1.is_empty() {
        return Ok(EquivResult {
            status: Status::Equivalent,
            witness: Some(CodeMap::identity(n)?),
            certificate: cert,
        });
    }
    if let Some(h) = &opts.hint_translation {
        if h.len() != n {
            return Err(Error::LengthMismatch(n, h.len()));
        }
    }

    let c0 = c1.word(0);
    let t1 = c1.translate(&c0)?;
    let t1_weights = t1.weight_distribution();
    let p1 = Profile::new(&t1, min_nonzero_weight(&t1));
    let t1_bits: Vec<u64> = t1.words().iter().map(Word::bits).collect();
    let mut target = Vec::with_capacity(n);
    let mut keys = vec![0u64; t1_bits.len()];
    for k in 0..n {
        for (key, &x) in keys.iter_mut().zip(&t1_bits) {
            *key |= (x >> k & 1) << k;
        }
        let mut s = keys.clone();
        s.sort_unstable();
        target.push(s);
    }

    let mut by_top = vec![Vec::new(); n];
    for &x in t1_bits.iter().filter(|&&x| x != 0) {
        by_top[63 - x.leading_zeros() as usize].push(x);
    }

    let mut candidates: Vec<Word> = Vec::with_capacity(c2.len() + 1);
    if let Some(h) = opts.hint_translation.filter(|h| c2.contains(h)) {
        candidates.push(h);
    }
    candidates.extend(c2.words().iter().copied());

    let mut tried: HashSet<Vec<u64>> = HashSet::new();
    let mut out_of_budget = false;
    for t in candidates {
        let t2 = c2.translate(&t)?;
        if t2.weight_distribution() != t1_weights {
            continue;
        }
        if !tried.insert(t2.sorted_bits()) {
            continue;
        }
        cert.translations_tried += 1;
        let p2 = Profile::new(&t2, min_nonzero_weight(&t2));
        let t2_bits: Vec<u64> = t2.words().iter().map(Word::bits).collect();
        let t2_set: HashSet<u64> = t2_bits.iter().copied().collect();
        let mut search = Search {
            n,
            by_top: &by_top,
            t2: &t2_bits,
            t2_set: &t2_set,
            p1: &p1,
            p2: &p2,
            target: target.clone(),
            image: Vec::with_capacity(n),
            used: vec![false; n],
            nodes: 0,
            budget: opts.budget.saturating_sub(cert.nodes),
        };
        let outcome = search.run();
        cert.nodes += search.nodes;
        match outcome {
            Outcome::Found(image) => {
                let perm: Vec<usize> = image.iter().map(|&j| j + 1).collect();
                let pi = CodeMap::permutation(perm.clone())?;
                let trans = t.xor(&pi.apply(&c0));
                let m = CodeMap::new(perm, trans)?;
                if apply_codemap(&m, c1)? != *c2 {
                    // Projection multisets matched on all coordinates, so this
                    // cannot happen unless the search itself is broken.
                    return Err(Error::InvalidParameter("equivalence witness failed verification".into()));
                }
                return Ok(EquivResult {
                    status: Status::Equivalent,
                    witness: Some(m),
                    certificate: cert,
                });
            }
            Outcome::Exhausted => {}
            Outcome::OutOfBudget => {
                out_of_budget = true;
                break;
            }
        }
    }
    if out_of_budget {
        return Ok(EquivResult {
            status: Status::Undecided,
            witness: None,
            certificate: cert,
        });
    }
    inequivalent(cert, "no permutation for any translation".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_extended, gen_family, gen_hamming, Family};
    use crate::word::puncture;
    use rand::seq::SliceRandom;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Oracle: rank by straightforward row reduction over explicit bit rows.
    fn rank_by_rows(code: &Code) -> usize {
        let n = code.length();
        let z = code.word(0);
        let mut rows: Vec<Vec<bool>> = code
            .words()
            .iter()
            .map(|w| (1..=n).map(|c| w.xor(&z).get(c)).collect())
            .collect();
        let mut rank = 0;
        for col in 0..n {
            if let Some(p) = (rank..rows.len()).find(|&r| rows[r][col]) {
                rows.swap(rank, p);
                let pivot = rows[rank].clone();
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && row[col] {
                        for (x, &p) in row.iter_mut().zip(&pivot) {
                            *x ^= p;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn random_map(n: usize, seed: u64) -> CodeMap {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (1..=n).collect();
        perm.shuffle(&mut rng);
        let trans = Word::from_bits(n, rng.gen::<u64>() & ((1 << n) - 1)).unwrap();
        CodeMap::new(perm, trans).unwrap()
    }

    #[test]
    fn ranks() {
        let h = gen_hamming(4).unwrap();
        assert_eq!(rank_invariant(&h), 11);
        assert_eq!(rank_by_rows(&h), 11);
        let v = gen_family(Family::Vasilev { m: 4, seed: Some(1) }).unwrap();
        assert_eq!(rank_invariant(&v), rank_by_rows(&v));
        assert!(rank_invariant(&v) >= 12);
        let zero = Code::from_words(3, [Word::zero(3).unwrap()]).unwrap();
        assert_eq!(rank_invariant(&zero), 0);
    }

    #[test]
    fn self_equivalence_is_found() {
        let h = gen_hamming(3).unwrap();
        let r = find_equivalence(&h, &h, &EquivOptions::default()).unwrap();
        assert_eq!(r.status, Status::Equivalent);
        assert_eq!(apply_codemap(&r.witness.unwrap(), &h).unwrap(), h);
    }

    #[test]
    fn random_images_are_equivalent() {
        for (i, code) in [
            gen_hamming(4).unwrap(),
            gen_family(Family::Vasilev { m: 4, seed: Some(3) }).unwrap(),
            gen_extended(Family::Vasilev { m: 4, seed: Some(5) }).unwrap(),
        ]
        .iter()
        .enumerate()
        {
            let m = random_map(code.length(), 100 + i as u64);
            let image = apply_codemap(&m, code).unwrap();
            let r = find_equivalence(code, &image, &EquivOptions::default()).unwrap();
            assert_eq!(r.status, Status::Equivalent, "{:?}", r.certificate);
            assert_eq!(apply_codemap(r.witness.as_ref().unwrap(), code).unwrap(), image);
            let back = find_equivalence(&image, code, &EquivOptions::default()).unwrap();
            assert_eq!(back.status, Status::Equivalent);
        }
    }

    #[test]
    fn hamming_vs_vasilev_by_rank() {
        let h = gen_hamming(4).unwrap();
        let v = gen_family(Family::Vasilev { m: 4, seed: Some(1) }).unwrap();
        let r = find_equivalence(&h, &v, &EquivOptions::default()).unwrap();
        assert_eq!(r.status, Status::Inequivalent);
        assert!(r.certificate.reason.unwrap().contains("ranks 11"));
        assert_eq!(find_equivalence(&v, &h, &EquivOptions::default()).unwrap().status, Status::Inequivalent);
    }

    #[test]
    fn puncturing_extended_hamming_anywhere() {
        let h = gen_hamming(4).unwrap();
        let e = gen_extended(Family::Hamming { m: 4 }).unwrap();
        for coord in [1, 7, 16] {
            let p = puncture(&e, coord).unwrap();
            let r = find_equivalence(&p, &h, &EquivOptions::default()).unwrap();
            assert_eq!(r.status, Status::Equivalent, "coord {coord}");
        }
    }

    #[test]
    fn size_and_length_mismatch() {
        let h = gen_hamming(3).unwrap();
        let e = gen_extended(Family::Hamming { m: 3 }).unwrap();
        assert_eq!(find_equivalence(&h, &e, &EquivOptions::default()).unwrap().status, Status::Inequivalent);
        let small = Code::from_words(7, h.words()[..4].iter().copied()).unwrap();
        assert_eq!(find_equivalence(&h, &small, &EquivOptions::default()).unwrap().status, Status::Inequivalent);
    }

    #[test]
    fn same_rank_inequivalent_is_exhausted() {
        // Both rank 2 with 3 words: {000, 110, 011} has distances 2,2,2;
        // {000, 100, 011} has distances 1,2,3.
        let a = Code::from_words(3, ["000", "110", "011"].map(|s| Word::parse(s).unwrap())).unwrap();
        let b = Code::from_words(3, ["000", "100", "011"].map(|s| Word::parse(s).unwrap())).unwrap();
        let r = find_equivalence(&a, &b, &EquivOptions::default()).unwrap();
        assert_eq!(r.status, Status::Inequivalent);
    }

    #[test]
    fn tiny_budget_is_undecided() {
        let h = gen_hamming(4).unwrap();
        let m = random_map(15, 1);
        let image = apply_codemap(&m, &h).unwrap();
        let opts = EquivOptions {
            hint_translation: None,
            budget: 3,
        };
        assert_eq!(find_equivalence(&h, &image, &opts).unwrap().status, Status::Undecided);
    }
}
