//! Words over a finite alphabet and their autocorrelation structure.
//!
//! # Index convention
//!
//! Symbols are stored in reading order, `symbols[0]` first. The classical
//! combinatorics-on-words literature writes a word right to left as
//! `w = w_k … w_1`, so the symbol with index `i` (1-based, counted from the
//! right end) lives at storage position `k - i`. [`Word::indexed`] performs
//! that map; every formula below that talks about `w_i` goes through it.
//!
//! An autocorrelation digit `b_j` (for `1 ≤ j ≤ k`) is set when the length-`j`
//! prefix of the word equals its length-`j` suffix. `b_k` is always set, and
//! we augment with `b_0 = 1` so that periodicity statements need no special
//! case when the period divides `k`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A word of length `k ≥ 1` over the alphabet `{0, …, q-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    q: u32,
    symbols: Vec<u32>,
}

impl Word {
    pub fn new(q: u32, symbols: Vec<u32>) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        if symbols.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(&symbol) = symbols.iter().find(|&&x| x >= q) {
            return Err(Error::SymbolOutOfRange { symbol, q });
        }
        Ok(Word { q, symbols })
    }

    /// Parses a word from text.
    ///
    /// - Comma separated integers (`"0,11,3"`) are read literally.
    /// - A string of decimal digits (`"10100101"`) is read digit by digit.
    /// - Anything else (`"HTHTH"`) maps distinct characters to `0, 1, …` in
    ///   order of first appearance.
    ///
    /// When `q` is `None` the alphabet is the smallest one (at least binary)
    /// that holds every symbol.
    pub fn parse(text: &str, q: Option<u32>) -> Result<Self> {
        let text = text.trim();
        let parse_err = |reason: &str| Error::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if text.is_empty() {
            return Err(Error::EmptyWord);
        }
        let symbols: Vec<u32> = if text.contains(',') {
            text.split(',')
                .map(|part| part.trim().parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| parse_err("expected comma separated non-negative integers"))?
        } else if text.chars().all(|c| c.is_ascii_digit()) {
            text.chars().map(|c| c as u32 - '0' as u32).collect()
        } else {
            let mut seen: Vec<char> = Vec::new();
            text.chars()
                .map(|c| match seen.iter().position(|&s| s == c) {
                    Some(p) => p as u32,
                    None => {
                        seen.push(c);
                        (seen.len() - 1) as u32
                    }
                })
                .collect()
        };
        let needed = symbols.iter().copied().max().unwrap_or(0) + 1;
        let q = q.unwrap_or(needed.max(2));
        Word::new(q, symbols)
    }

    /// Every word of length `k` over `q` symbols, in lexicographic order.
    pub fn all(q: u32, k: usize) -> Result<Vec<Word>> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        if k == 0 {
            return Err(Error::EmptyWord);
        }
        let total = (q as u128).checked_pow(k as u32).filter(|&n| n <= 1 << 24);
        let Some(total) = total else {
            return Err(Error::TooLarge {
                what: "refinement",
                detail: format!("{q}^{k} words"),
            });
        };
        let mut out = Vec::with_capacity(total as usize);
        let mut digits = vec![0u32; k];
        for _ in 0..total {
            out.push(Word {
                q,
                symbols: digits.clone(),
            });
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < q {
                    break;
                }
                *d = 0;
            }
        }
        Ok(out)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Always false; a word has at least one symbol.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    /// The symbol `w_i` in right-to-left indexing, `1 ≤ i ≤ k`.
    pub fn indexed(&self, i: usize) -> u32 {
        assert!(
            i >= 1 && i <= self.len(),
            "index {i} outside 1..={}",
            self.len()
        );
        self.symbols[self.len() - i]
    }

    /// Replaces every symbol `x` by `q - 1 - x`. For binary words this
    /// swaps zeros and ones.
    pub fn complement(&self) -> Word {
        Word {
            q: self.q,
            symbols: self.symbols.iter().map(|&x| self.q - 1 - x).collect(),
        }
    }

    /// The symbols read as a base-`q` integer, when it fits in a `u64`.
    pub fn as_code(&self) -> Option<u64> {
        self.symbols.iter().try_fold(0u64, |acc, &x| {
            acc.checked_mul(self.q as u64)?.checked_add(x as u64)
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 10 {
            for &x in &self.symbols {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|x| x.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

/// Conway autocorrelation `b_k … b_1` of a word, with `b_0 = 1` appended.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Autocorrelation {
    // bits[j] = b_j for 0 ≤ j ≤ k
    bits: Vec<bool>,
}

impl Autocorrelation {
    /// Builds an autocorrelation from its digits written `b_k … b_1`.
    /// Used for tests and display round trips; not every digit string is
    /// the autocorrelation of some word.
    pub fn from_digits(digits: &str) -> Result<Self> {
        let parse_err = |reason: &str| Error::Parse {
            text: digits.to_string(),
            reason: reason.to_string(),
        };
        if digits.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut bits = vec![true];
        for c in digits.chars().rev() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(parse_err("autocorrelation digits must be 0 or 1")),
            }
        }
        if !bits[bits.len() - 1] {
            return Err(parse_err("the leading digit b_k must be 1"));
        }
        Ok(Autocorrelation { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `b_j`, with `b_0 = 1` and `b_j = 0` for `j > k`.
    pub fn bit(&self, j: usize) -> bool {
        self.bits.get(j).copied().unwrap_or(false)
    }

    /// Indices `1 ≤ j ≤ k` with `b_j = 1`, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.bits.len()).filter(move |&j| self.bits[j])
    }

    /// Largest proper overlap `s`: the largest `j < k` with `b_j = 1`, or 0.
    pub fn s(&self) -> usize {
        let k = self.len();
        (1..k).rev().find(|&j| self.bits[j]).unwrap_or(0)
    }

    /// The digits read as a base-2 integer.
    pub fn value(&self) -> BigUint {
        let mut v = BigUint::zero();
        for j in (1..self.bits.len()).rev() {
            v <<= 1u32;
            if self.bits[j] {
                v += BigUint::one();
            }
        }
        v
    }
}

impl Ord for Autocorrelation {
    // Base-2 value order. b_k = 1, so a longer word always compares larger.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            (1..self.bits.len())
                .rev()
                .map(|j| self.bits[j].cmp(&other.bits[j]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Autocorrelation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Autocorrelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in (1..self.bits.len()).rev() {
            f.write_str(if self.bits[j] { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Computes the autocorrelation from the border chain of the prefix function.
pub fn autocorrelation(w: &Word) -> Autocorrelation {
    let s = w.symbols();
    let k = s.len();
    let mut pi = vec![0usize; k];
    for i in 1..k {
        let mut j = pi[i - 1];
        while j > 0 && s[i] != s[j] {
            j = pi[j - 1];
        }
        if s[i] == s[j] {
            j += 1;
        }
        pi[i] = j;
    }
    let mut bits = vec![false; k + 1];
    bits[0] = true;
    bits[k] = true;
    let mut border = pi[k - 1];
    while border > 0 {
        bits[border] = true;
        border = pi[border - 1];
    }
    Autocorrelation { bits }
}

/// Least period of the word: `k - s`.
pub fn minimal_period(w: &Word) -> usize {
    w.len() - autocorrelation(w).s()
}

/// Structural indices of a word's autocorrelation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureProfile {
    pub k: usize,
    pub autocorrelation: Autocorrelation,
    pub s: usize,
    /// `[i]` for every `1 ≤ i < k` with `b_i = 1`: the largest overlap `j`
    /// whose period `k - j` generates `i` as `i = k - t(k - j)`.
    pub bracket: BTreeMap<usize, usize>,
    /// `I = {[i] : b_i = 1}`, the primitive overlaps.
    pub primitive: BTreeSet<usize>,
    /// `S = {i : [i] = s}`; empty when `s = 0`.
    pub s_class: BTreeSet<usize>,
    /// `d = min I`, absent when `I` is empty.
    pub d: Option<usize>,
    /// `T(i)` for `i ∈ I`: longest run shared by the tails starting at the
    /// overlaps `i` and some larger `j ∈ I`.
    pub tail_match: BTreeMap<usize, usize>,
    pub period: usize,
}

pub fn structure_profile(w: &Word) -> StructureProfile {
    let k = w.len();
    let cor = autocorrelation(w);
    let s = cor.s();

    let mut bracket = BTreeMap::new();
    for i in cor.ones().filter(|&i| i < k) {
        // j ranges over 0..k with b_j = 1; the loop runs downward so the
        // first hit is the maximum. j = i always qualifies.
        let generator = (i..k)
            .rev()
            .find(|&j| cor.bit(j) && (k - i).is_multiple_of(k - j))
            .expect("i generates itself");
        bracket.insert(i, generator);
    }
    let primitive: BTreeSet<usize> = bracket.values().copied().collect();
    let s_class: BTreeSet<usize> = if s > 0 {
        bracket
            .iter()
            .filter(|&(_, &b)| b == s)
            .map(|(&i, _)| i)
            .collect()
    } else {
        BTreeSet::new()
    };
    let d = primitive.iter().next().copied();

    // w_{k-i} … is storage position i onward.
    let symbols = w.symbols();
    let mut tail_match = BTreeMap::new();
    for &i in &primitive {
        let best = primitive
            .range(i + 1..)
            .map(|&j| {
                (0..k - j)
                    .take_while(|&t| symbols[i + t] == symbols[j + t])
                    .count()
            })
            .max()
            .unwrap_or(0);
        tail_match.insert(i, best);
    }

    StructureProfile {
        k,
        autocorrelation: cor,
        s,
        bracket,
        primitive,
        s_class,
        d,
        tail_match,
        period: k - s,
    }
}

/// Which word of a pair has the larger autocorrelation value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CorRelation {
    Equal,
    FirstDominates,
    SecondDominates,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairProfile {
    /// `r = max {j ∈ I : b_j = 1, b'_j = 0}` where `I` belongs to the
    /// dominating word.
    pub r: Option<usize>,
    pub relation: CorRelation,
}

pub fn pair_profile(w: &Word, other: &Word) -> Result<PairProfile> {
    if w.q() != other.q() {
        return Err(Error::MismatchedAlphabet {
            left: w.q(),
            right: other.q(),
        });
    }
    let (cw, co) = (autocorrelation(w), autocorrelation(other));
    let relation = match cw.cmp(&co) {
        Ordering::Equal => CorRelation::Equal,
        Ordering::Greater => CorRelation::FirstDominates,
        Ordering::Less => CorRelation::SecondDominates,
    };
    let r = match relation {
        CorRelation::Equal => None,
        CorRelation::FirstDominates => largest_unshared(w, &co),
        CorRelation::SecondDominates => largest_unshared(other, &cw),
    };
    Ok(PairProfile { r, relation })
}

fn largest_unshared(dominant: &Word, weaker: &Autocorrelation) -> Option<usize> {
    let profile = structure_profile(dominant);
    profile
        .primitive
        .iter()
        .rev()
        .copied()
        .find(|&j| profile.autocorrelation.bit(j) && !weaker.bit(j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary(text: &str) -> Word {
        Word::parse(text, Some(2)).unwrap()
    }

    // Direct O(k^2) definition, independent of the prefix function.
    fn overlap_bits(w: &Word) -> String {
        let k = w.len();
        (1..=k)
            .rev()
            .map(|j| {
                let hit = (1..=j).all(|l| w.indexed(l) == w.indexed(k - j + l));
                if hit {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }

    #[test]
    fn autocorrelation_examples() {
        assert_eq!(autocorrelation(&binary("10100101")).to_string(), "10000101");
        assert_eq!(autocorrelation(&binary("1111")).to_string(), "1111");
        let w = Word::parse("012", Some(3)).unwrap();
        assert_eq!(autocorrelation(&w).to_string(), "100");
        assert_eq!(
            autocorrelation(&binary("10101110101")).to_string(),
            "10000010101"
        );
        let coin = Word::parse("HTHTHHHTHTH", None).unwrap();
        assert_eq!(autocorrelation(&coin).to_string(), "10000010101");
    }

    #[test]
    fn autocorrelation_matches_definition() {
        for k in 1..=9 {
            for w in Word::all(2, k).unwrap() {
                assert_eq!(autocorrelation(&w).to_string(), overlap_bits(&w), "{w}");
            }
        }
        for w in Word::all(3, 5).unwrap() {
            assert_eq!(autocorrelation(&w).to_string(), overlap_bits(&w), "{w}");
        }
    }

    #[test]
    fn value_and_order() {
        let c = autocorrelation(&binary("101"));
        assert_eq!(c.value(), BigUint::from(5u32));
        assert!(c > autocorrelation(&binary("001")));
        assert!(autocorrelation(&binary("100")) > autocorrelation(&binary("11")));
        assert_eq!(
            Autocorrelation::from_digits("10000101")
                .unwrap()
                .to_string(),
            "10000101"
        );
        assert!(Autocorrelation::from_digits("0101").is_err());
    }

    #[test]
    fn profile_of_coin_word() {
        let w = Word::parse("HTHTHHHTHTH", None).unwrap();
        let p = structure_profile(&w);
        assert_eq!(p.primitive, BTreeSet::from([1, 3, 5]));
        assert_eq!(p.tail_match[&5], 0);
        assert_eq!(p.tail_match[&3], 0);
        assert_eq!(p.tail_match[&1], 2);
        assert_eq!(p.s, 5);
        assert_eq!(p.d, Some(1));

        let alt = Word::parse("HTHTHTHTHTH", None).unwrap();
        let p = structure_profile(&alt);
        assert_eq!(p.autocorrelation.to_string(), "10101010101");
        assert_eq!(p.primitive, BTreeSet::from([9]));
        assert_eq!(p.s_class, BTreeSet::from([1, 3, 5, 7, 9]));
    }

    #[test]
    fn profile_without_overlap() {
        let p = structure_profile(&binary("1000"));
        assert!(p.primitive.is_empty());
        assert_eq!(p.s, 0);
        assert_eq!(p.d, None);
        assert_eq!(p.period, 4);
    }

    #[test]
    fn periods() {
        assert_eq!(minimal_period(&binary("101")), 2);
        assert_eq!(minimal_period(&binary("001")), 3);
        assert_eq!(minimal_period(&binary("1111")), 1);
        assert_eq!(minimal_period(&binary("1")), 1);
    }

    #[test]
    fn minimal_period_is_least_period() {
        for k in 1..=10 {
            for w in Word::all(2, k).unwrap() {
                let s = w.symbols();
                let least = (1..=k)
                    .find(|&p| (0..k - p).all(|i| s[i] == s[i + p]))
                    .unwrap();
                assert_eq!(minimal_period(&w), least, "{w}");
            }
        }
    }

    #[test]
    fn pair_profiles() {
        let p = pair_profile(&binary("101"), &binary("001")).unwrap();
        assert_eq!(p.relation, CorRelation::FirstDominates);

        let w = binary("0110");
        let p = pair_profile(&w, &w).unwrap();
        assert_eq!(p.relation, CorRelation::Equal);
        assert_eq!(p.r, None);

        let p = pair_profile(&binary("1111"), &binary("1010")).unwrap();
        assert_eq!(p.relation, CorRelation::FirstDominates);
        assert_eq!(p.r, Some(3));

        let p = pair_profile(&binary("1010"), &binary("1111")).unwrap();
        assert_eq!(p.relation, CorRelation::SecondDominates);
        assert_eq!(p.r, Some(3));

        let ternary = Word::parse("012", Some(3)).unwrap();
        assert!(matches!(
            pair_profile(&binary("01"), &ternary),
            Err(Error::MismatchedAlphabet { left: 2, right: 3 })
        ));
    }

    #[test]
    fn parsing() {
        assert_eq!(binary("0110").symbols(), &[0, 1, 1, 0]);
        assert_eq!(Word::parse("3,11,0", None).unwrap().q(), 12);
        assert_eq!(Word::parse("3,11,0", None).unwrap().to_string(), "3,11,0");
        assert_eq!(Word::parse("HTT", None).unwrap().symbols(), &[0, 1, 1]);
        assert_eq!(Word::parse("1", None).unwrap().q(), 2);
        assert!(matches!(Word::parse("", None), Err(Error::EmptyWord)));
        assert!(matches!(
            Word::parse("102", Some(2)),
            Err(Error::SymbolOutOfRange { symbol: 2, q: 2 })
        ));
        assert!(matches!(
            Word::new(1, vec![0]),
            Err(Error::AlphabetTooSmall(1))
        ));
        assert!(Word::parse("1,x", None).is_err());
    }

    #[test]
    fn enumeration_order() {
        let words: Vec<String> = Word::all(2, 2)
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, ["00", "01", "10", "11"]);
        assert_eq!(Word::all(3, 3).unwrap().len(), 27);
    }
}
