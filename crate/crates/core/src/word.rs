//! Binary words, codes and the (permutation, translation) action on them.
//!
//! Coordinates are 1-based throughout: coordinate `i` of a word lives in
//! bit `i - 1` of its backing `u64`. Word lengths are capped at 64.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Longest supported word.
pub const MAX_LENGTH: usize = 64;

/// A binary word of fixed length `1..=64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    bits: u64,
    len: u8,
}

fn mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || len > MAX_LENGTH {
        Err(Error::UnsupportedLength(len))
    } else {
        Ok(())
    }
}

impl Word {
    pub fn zero(len: usize) -> Result<Self> {
        Self::from_bits(len, 0)
    }

    /// Builds a word from raw bits; bits above `len` must be clear.
    pub fn from_bits(len: usize, bits: u64) -> Result<Self> {
        check_len(len)?;
        if bits & !mask(len) != 0 {
            return Err(Error::InvalidParameter(format!(
                "bits {bits:#x} exceed word length {len}"
            )));
        }
        Ok(Word {
            bits,
            len: len as u8,
        })
    }

    pub(crate) fn from_bits_unchecked(len: usize, bits: u64) -> Self {
        debug_assert!((1..=MAX_LENGTH).contains(&len) && bits & !mask(len) == 0);
        Word {
            bits,
            len: len as u8,
        }
    }

    /// Word whose support is exactly `coords` (1-based).
    pub fn from_support(len: usize, coords: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_len(len)?;
        let mut bits = 0u64;
        for c in coords {
            if c == 0 || c > len {
                return Err(Error::CoordinateOutOfRange {
                    coord: c,
                    length: len,
                });
            }
            bits |= 1 << (c - 1);
        }
        Ok(Word {
            bits,
            len: len as u8,
        })
    }

    /// Parses a 0/1 string; the first character is coordinate 1.
    pub fn parse(s: &str) -> Result<Self> {
        check_len(s.len())?;
        let mut bits = 0u64;
        for (i, ch) in s.bytes().enumerate() {
            match ch {
                b'0' => {}
                b'1' => bits |= 1 << i,
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "invalid character {:?} in word",
                        ch as char
                    )))
                }
            }
        }
        Ok(Word {
            bits,
            len: s.len() as u8,
        })
    }

    /// Never zero, hence no `is_empty`.
    #[inline]
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Value of coordinate `coord` (1-based).
    #[inline]
    pub fn get(&self, coord: usize) -> bool {
        debug_assert!(coord >= 1 && coord <= self.len());
        self.bits >> (coord - 1) & 1 == 1
    }

    /// Sorted 1-based support.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        let mut b = self.bits;
        while b != 0 {
            out.push(b.trailing_zeros() as usize + 1);
            b &= b - 1;
        }
        out
    }

    pub fn complement(&self) -> Self {
        Word {
            bits: !self.bits & mask(self.len()),
            len: self.len,
        }
    }

    /// Coordinate-wise sum. Panics on length mismatch.
    #[inline]
    pub fn xor(&self, other: &Word) -> Word {
        assert_eq!(self.len, other.len, "xor of words with different lengths");
        Word {
            bits: self.bits ^ other.bits,
            len: self.len,
        }
    }

    /// Hamming distance without the length check; lengths must agree.
    #[inline]
    pub fn distance(&self, other: &Word) -> usize {
        debug_assert_eq!(self.len, other.len);
        (self.bits ^ other.bits).count_ones() as usize
    }

    /// Appends one coordinate.
    pub fn push(&self, bit: bool) -> Result<Word> {
        check_len(self.len() + 1)?;
        Ok(Word {
            bits: self.bits | (bit as u64) << self.len,
            len: self.len + 1,
        })
    }

    /// Deletes coordinate `coord`, shifting the higher coordinates down.
    pub fn delete(&self, coord: usize) -> Result<Word> {
        let len = self.len();
        if coord == 0 || coord > len {
            return Err(Error::CoordinateOutOfRange { coord, length: len });
        }
        check_len(len - 1)?;
        let low = self.bits & mask(coord - 1);
        let high = if coord == 64 { 0 } else { self.bits >> coord };
        Ok(Word {
            bits: low | high << (coord - 1),
            len: self.len - 1,
        })
    }

    /// Moves coordinate `i` to `perm[i - 1]`.
    pub(crate) fn permute(&self, perm: &[usize]) -> Word {
        let mut out = 0u64;
        let mut b = self.bits;
        while b != 0 {
            let i = b.trailing_zeros() as usize;
            out |= 1 << (perm[i] - 1);
            b &= b - 1;
        }
        Word {
            bits: out,
            len: self.len,
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in 1..=self.len() {
            f.write_str(if self.get(c) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

pub fn hamming_distance(a: &Word, b: &Word) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.distance(b))
}

/// A binary code: distinct words of one length, in insertion order.
///
/// Insertion order fixes the vertex ids of derived graphs. Equality is set
/// equality.
#[derive(Clone)]
pub struct Code {
    length: usize,
    words: Vec<Word>,
    index: HashMap<u64, usize>,
}

impl Code {
    pub fn new(length: usize) -> Result<Self> {
        check_len(length)?;
        Ok(Code {
            length,
            words: Vec::new(),
            index: HashMap::new(),
        })
    }

    pub fn from_words(length: usize, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut code = Code::new(length)?;
        for w in words {
            code.insert(w)?;
        }
        Ok(code)
    }

    /// Appends a word; rejects length mismatches and duplicates.
    pub fn insert(&mut self, w: Word) -> Result<usize> {
        if w.len() != self.length {
            return Err(Error::LengthMismatch(self.length, w.len()));
        }
        if self.index.contains_key(&w.bits) {
            return Err(Error::DuplicateWord(w.to_string()));
        }
        let id = self.words.len();
        self.index.insert(w.bits, id);
        self.words.push(w);
        Ok(id)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, id: usize) -> Word {
        self.words[id]
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.len() == self.length && self.index.contains_key(&w.bits)
    }

    /// Position of `w` in insertion order.
    pub fn position(&self, w: &Word) -> Option<usize> {
        if w.len() != self.length {
            return None;
        }
        self.index.get(&w.bits).copied()
    }

    /// Words sorted by their bit patterns; the canonical set representation.
    pub fn sorted_bits(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.words.iter().map(|w| w.bits).collect();
        v.sort_unstable();
        v
    }

    /// Number of words of each weight `0..=length`.
    pub fn weight_distribution(&self) -> Vec<usize> {
        let mut dist = vec![0; self.length + 1];
        for w in &self.words {
            dist[w.weight()] += 1;
        }
        dist
    }

    /// The code translated by `t` (same insertion order).
    pub fn translate(&self, t: &Word) -> Result<Code> {
        if t.len() != self.length {
            return Err(Error::LengthMismatch(self.length, t.len()));
        }
        Ok(self.map_words(|w| w.xor(t)))
    }

    /// Image under a bijective word map; the caller guarantees injectivity.
    fn map_words(&self, f: impl Fn(&Word) -> Word) -> Code {
        let words: Vec<Word> = self.words.iter().map(f).collect();
        let index = words.iter().enumerate().map(|(i, w)| (w.bits, i)).collect();
        Code {
            length: self.length,
            words,
            index,
        }
    }
}

impl PartialEq for Code {
    fn eq(&self, other: &Self) -> bool {
        self.length == other.length
            && self.len() == other.len()
            && self.words.iter().all(|w| other.contains(w))
    }
}

impl Eq for Code {}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code(length={}, size={})", self.length, self.len())
    }
}

pub fn min_distance(code: &Code) -> Result<usize> {
    if code.len() < 2 {
        return Err(Error::TooFewWords(code.len()));
    }
    let words = code.words();
    let mut best = usize::MAX;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            best = best.min(a.distance(b));
        }
    }
    Ok(best)
}

/// Appends a coordinate making every word's weight even.
pub fn extend_parity(code: &Code) -> Result<Code> {
    let mut out = Code::new(code.length() + 1)?;
    for w in code.words() {
        out.insert(w.push(w.weight() % 2 == 1)?)?;
    }
    Ok(out)
}

/// Deletes coordinate `coord` from every word.
///
/// Fails with [`Error::DuplicateWord`] if two words collapse, which cannot
/// happen when the minimum distance is at least 2.
pub fn puncture(code: &Code, coord: usize) -> Result<Code> {
    if coord == 0 || coord > code.length() {
        return Err(Error::CoordinateOutOfRange {
            coord,
            length: code.length(),
        });
    }
    let mut out = Code::new(code.length() - 1)?;
    for w in code.words() {
        out.insert(w.delete(coord)?)?;
    }
    Ok(out)
}

/// A pair (permutation, translation) acting as `x -> trans + perm(x)`.
///
/// `perm[i - 1]` is the coordinate that coordinate `i` is moved to.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CodeMap {
    perm: Vec<usize>,
    trans: Word,
}

impl CodeMap {
    pub fn new(perm: Vec<usize>, trans: Word) -> Result<Self> {
        let n = perm.len();
        if n != trans.len() {
            return Err(Error::LengthMismatch(n, trans.len()));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p == 0 || p > n || std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::InvalidParameter(format!(
                    "{perm:?} is not a permutation of 1..={n}"
                )));
            }
        }
        Ok(CodeMap { perm, trans })
    }

    pub fn identity(length: usize) -> Result<Self> {
        Ok(CodeMap {
            perm: (1..=length).collect(),
            trans: Word::zero(length)?,
        })
    }

    pub fn translation(trans: Word) -> Self {
        CodeMap {
            perm: (1..=trans.len()).collect(),
            trans,
        }
    }

    pub fn permutation(perm: Vec<usize>) -> Result<Self> {
        let zero = Word::zero(perm.len())?;
        CodeMap::new(perm, zero)
    }

    pub fn length(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn trans(&self) -> &Word {
        &self.trans
    }

    pub fn is_identity(&self) -> bool {
        self.trans.is_zero() && self.perm.iter().enumerate().all(|(i, &p)| p == i + 1)
    }

    /// Image of one word. Panics on length mismatch.
    pub fn apply(&self, w: &Word) -> Word {
        assert_eq!(w.len(), self.length(), "code map length mismatch");
        w.permute(&self.perm).xor(&self.trans)
    }

    /// The map "apply `self`, then `next`".
    pub fn then(&self, next: &CodeMap) -> CodeMap {
        assert_eq!(self.length(), next.length());
        let perm = self.perm.iter().map(|&p| next.perm[p - 1]).collect();
        let trans = next.apply(&self.trans);
        CodeMap { perm, trans }
    }

    pub fn inverse(&self) -> CodeMap {
        let mut inv = vec![0; self.length()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p - 1] = i + 1;
        }
        let trans = self.trans.permute(&inv);
        CodeMap { perm: inv, trans }
    }
}

/// Image of `code` under `m`, keeping the insertion order of the source.
pub fn apply_codemap(m: &CodeMap, code: &Code) -> Result<Code> {
    if m.length() != code.length() {
        return Err(Error::LengthMismatch(m.length(), code.length()));
    }
    Ok(code.map_words(|w| m.apply(w)))
}

/// Outcome of a perfectness check; `reason` explains a negative answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub ok: bool,
    pub reason: Option<String>,
}

impl Validation {
    fn pass() -> Self {
        Validation {
            ok: true,
            reason: None,
        }
    }

    fn fail(reason: impl Into<String>) -> Self {
        Validation {
            ok: false,
            reason: Some(reason.into()),
        }
    }
}

/// Sphere-packing check for a 1-perfect code: min distance >= 3 and
/// `|C| (n + 1) = 2^n`.
pub fn validate_perfect(code: &Code) -> Validation {
    let n = code.length();
    if n >= 63 {
        return Validation::fail(format!("length {n} is beyond the supported range"));
    }
    let covered = code.len() as u128 * (n as u128 + 1);
    if covered != 1u128 << n {
        return Validation::fail(format!(
            "radius-1 balls cover {covered} of {} words",
            1u128 << n
        ));
    }
    match min_distance(code) {
        Ok(d) if d >= 3 => Validation::pass(),
        Ok(d) => Validation::fail(format!("minimum distance {d} < 3")),
        Err(e) => Validation::fail(e.to_string()),
    }
}

/// Check for an extended 1-perfect code: all pairwise distances even,
/// min distance 4 and `|C| 2n = 2^n`.
pub fn validate_extended_perfect(code: &Code) -> Validation {
    let n = code.length();
    if n >= 63 {
        return Validation::fail(format!("length {n} is beyond the supported range"));
    }
    let covered = code.len() as u128 * 2 * n as u128;
    if covered != 1u128 << n {
        return Validation::fail(format!(
            "|C| * 2n = {covered}, expected {}",
            1u128 << n
        ));
    }
    if let Some(first) = code.words().first() {
        let parity = first.weight() % 2;
        if let Some(w) = code.words().iter().find(|w| w.weight() % 2 != parity) {
            return Validation::fail(format!("{w} and {first} are at odd distance"));
        }
    }
    match min_distance(code) {
        Ok(4) => Validation::pass(),
        Ok(d) => Validation::fail(format!("minimum distance {d}, expected 4")),
        Err(e) => Validation::fail(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn code(words: &[&str]) -> Code {
        Code::from_words(words[0].len(), words.iter().map(|s| w(s))).unwrap()
    }

    #[test]
    fn distances() {
        assert_eq!(hamming_distance(&w("000000"), &w("000000")).unwrap(), 0);
        assert_eq!(hamming_distance(&w("1100"), &w("0110")).unwrap(), 2);
        let a = w("1011001");
        assert_eq!(hamming_distance(&a, &a.complement()).unwrap(), 7);
        assert!(matches!(
            hamming_distance(&w("10"), &w("100")),
            Err(Error::LengthMismatch(2, 3))
        ));
    }

    #[test]
    fn support_and_weight() {
        let x = w("0110001");
        assert_eq!(x.support(), vec![2, 3, 7]);
        assert_eq!(x.weight(), 3);
        assert_eq!(Word::from_support(7, [2, 3, 7]).unwrap(), x);
        assert!(Word::from_support(7, [8]).is_err());
        assert!(Word::parse("01x").is_err());
        assert!(Word::parse("").is_err());
        let full = Word::from_bits(64, u64::MAX).unwrap();
        assert_eq!(full.complement().weight(), 0);
        assert_eq!(full.to_string().len(), 64);
    }

    #[test]
    fn min_distance_small() {
        assert_eq!(min_distance(&code(&["0000", "1111"])).unwrap(), 4);
        assert!(matches!(
            min_distance(&code(&["0000"])),
            Err(Error::TooFewWords(1))
        ));
    }

    #[test]
    fn duplicates_rejected() {
        let mut c = code(&["01"]);
        assert!(matches!(c.insert(w("01")), Err(Error::DuplicateWord(_))));
        assert!(matches!(c.insert(w("011")), Err(Error::LengthMismatch(2, 3))));
    }

    #[test]
    fn parity_and_puncture() {
        assert_eq!(extend_parity(&code(&["000"])).unwrap(), code(&["0000"]));
        let c = code(&["110", "011"]);
        assert_eq!(extend_parity(&c).unwrap(), code(&["1100", "0110"]));
        assert_eq!(puncture(&extend_parity(&c).unwrap(), 4).unwrap(), c);
        assert_eq!(
            puncture(&code(&["1100", "0110"]), 1).unwrap(),
            code(&["100", "110"])
        );
        assert!(matches!(
            puncture(&c, 4),
            Err(Error::CoordinateOutOfRange { coord: 4, length: 3 })
        ));
        assert!(matches!(puncture(&c, 0), Err(Error::CoordinateOutOfRange { .. })));
    }

    #[test]
    fn delete_at_ends() {
        let x = w("1011");
        assert_eq!(x.delete(1).unwrap(), w("011"));
        assert_eq!(x.delete(4).unwrap(), w("101"));
        let long = Word::from_bits(64, 1 << 63 | 1).unwrap();
        assert_eq!(long.delete(64).unwrap(), Word::from_bits(63, 1).unwrap());
    }

    #[test]
    fn codemap_basics() {
        let c = code(&["10", "01"]);
        let id = CodeMap::identity(2).unwrap();
        assert!(id.is_identity());
        assert_eq!(apply_codemap(&id, &c).unwrap(), c);
        let swap = CodeMap::permutation(vec![2, 1]).unwrap();
        let img = apply_codemap(&swap, &c).unwrap();
        assert_eq!(img.words(), &[w("01"), w("10")]);
        assert_eq!(img, c);
        assert!(CodeMap::permutation(vec![1, 1]).is_err());
        assert!(CodeMap::new(vec![1, 2], w("101")).is_err());
        assert!(apply_codemap(&swap, &code(&["101"])).is_err());
    }

    #[test]
    fn codemap_inverse_and_compose() {
        let m = CodeMap::new(vec![3, 1, 4, 2], w("1010")).unwrap();
        let x = w("1100");
        assert_eq!(m.inverse().apply(&m.apply(&x)), x);
        assert!(m.then(&m.inverse()).is_identity());
    }

    #[test]
    fn validators_reject() {
        let v = validate_perfect(&code(&["000"]));
        assert!(!v.ok);
        assert!(v.reason.unwrap().contains("cover 4 of 8"));
        assert!(validate_perfect(&code(&["000", "111"])).ok);
        assert!(validate_extended_perfect(&code(&["0000", "1111"])).ok);
        assert!(!validate_extended_perfect(&code(&["0000", "1110"])).ok);
    }
}
