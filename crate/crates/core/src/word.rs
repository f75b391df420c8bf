//! Words over the binary alphabet and saturating cardinalities.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::Error;

/// A finite word over `{0, 1}`. Symbols are stored as `0u8` / `1u8`.
///
/// Words are ordered shortlex: shorter words first, ties broken
/// lexicographically. The empty word renders as `~`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from raw symbols. Panics if a symbol is not 0 or 1.
    pub fn from_symbols(symbols: Vec<u8>) -> Self {
        assert!(symbols.iter().all(|&s| s < 2), "symbols must be 0 or 1");
        Word(symbols)
    }

    pub fn symbol(s: u8) -> Self {
        Word::from_symbols(vec![s])
    }

    pub fn repeat(s: u8, k: usize) -> Self {
        Word::from_symbols(vec![s; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn push(&mut self, s: u8) {
        debug_assert!(s < 2);
        self.0.push(s);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|s| Word(s.to_vec()))
    }

    pub fn suffix_from(&self, start: usize) -> Word {
        Word(self.0[start..].to_vec())
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    /// All words of length at most `max_len`, in shortlex order.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = Word> {
        (0..=max_len).flat_map(|n| {
            (0u64..(1u64 << n)).map(move |bits| {
                Word((0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect())
            })
        })
    }

    /// The `index`-th word in shortlex order (`0 -> ~`, `1 -> 0`, `2 -> 1`, ...).
    pub fn nth_shortlex(index: u64) -> Word {
        // lengths: block n starts at 2^n - 1
        let n = 63 - (index + 1).leading_zeros() as usize;
        let bits = index + 1 - (1u64 << n);
        Word((0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("~");
        }
        for &s in &self.0 {
            f.write_str(if s == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "~" || s == "ε" {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse { line: 0, msg: format!("bad word {s:?}") }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A cardinality in `ℕ ∪ {∞}`. Finite counts saturate at `u64::MAX`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Card {
    Finite(u64),
    Infinite,
}

impl Card {
    pub const ZERO: Card = Card::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Card::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Card::Finite(n) => Some(n),
            Card::Infinite => None,
        }
    }

    pub fn saturating_add(self, other: Card) -> Card {
        match (self, other) {
            (Card::Finite(a), Card::Finite(b)) => Card::Finite(a.saturating_add(b)),
            _ => Card::Infinite,
        }
    }

    /// `self >= n` for a finite threshold.
    pub fn at_least(self, n: u64) -> bool {
        self >= Card::Finite(n)
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Finite(n) => write!(f, "{n}"),
            Card::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Card {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Card::Finite(n) => serializer.serialize_u64(*n),
            Card::Infinite => serializer.serialize_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn shortlex_order() {
        let mut v = vec![w("10"), w("~"), w("1"), w("000"), w("01"), w("0")];
        v.sort();
        let shown: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(shown, ["~", "0", "1", "01", "10", "000"]);
    }

    #[test]
    fn enumeration_matches_nth() {
        let all: Vec<Word> = Word::all_up_to(5).collect();
        assert_eq!(all.len(), 63);
        for (i, x) in all.iter().enumerate() {
            assert_eq!(&Word::nth_shortlex(i as u64), x);
        }
        assert!(all.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("012".parse::<Word>().is_err());
        assert_eq!(w("~"), Word::empty());
    }

    #[test]
    fn card_order() {
        assert!(Card::Infinite > Card::Finite(u64::MAX));
        assert!(Card::Finite(3).at_least(3));
        assert!(!Card::Finite(2).at_least(3));
        assert_eq!(Card::Finite(2).saturating_add(Card::Infinite), Card::Infinite);
    }
}
