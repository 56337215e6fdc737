//! Alphabets and words.
//!
//! Letters are stored densely as `u8` indices into an [`Alphabet`]; the
//! alphabet's symbol order is the letter order used for every canonical
//! ordering in the crate.

use std::borrow::Borrow;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense letter index.
pub type Letter = u8;

/// An ordered finite set of distinct symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    /// Builds an alphabet keeping the given symbol order.
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if symbols.len() > 256 {
            return Err(Error::AlphabetTooLarge);
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::DuplicateSymbol(*c));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Builds the alphabet of the distinct symbols of `text`, sorted.
    /// Whitespace is ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut symbols: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        symbols.sort_unstable();
        symbols.dedup();
        Alphabet::new(symbols)
    }

    /// The binary alphabet `{0, 1}`.
    pub fn binary() -> Self {
        Alphabet {
            symbols: vec!['0', '1'],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + Clone {
        (0..self.symbols.len()).map(|i| i as Letter)
    }

    pub fn symbol(&self, letter: Letter) -> char {
        self.symbols[letter as usize]
    }

    pub fn letter(&self, symbol: char) -> Result<Letter> {
        self.symbols
            .iter()
            .position(|&c| c == symbol)
            .map(|i| i as Letter)
            .ok_or(Error::UnknownSymbol(symbol))
    }

    pub fn contains_letter(&self, letter: Letter) -> bool {
        (letter as usize) < self.symbols.len()
    }

    /// Checks that every letter of `w` is in range.
    pub fn check(&self, w: &[Letter]) -> Result<()> {
        match w.iter().find(|&&l| !self.contains_letter(l)) {
            Some(&l) => Err(Error::UnknownLetter(l as usize)),
            None => Ok(()),
        }
    }

    /// Parses a string of symbols (no separators) into a word.
    pub fn parse(&self, text: &str) -> Result<Word> {
        text.chars().map(|c| self.letter(c)).collect()
    }

    pub fn render(&self, w: &[Letter]) -> String {
        w.iter().map(|&l| self.symbol(l)).collect()
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.symbols.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: Vec<String> = Vec::deserialize(deserializer)?;
        let mut symbols = Vec::with_capacity(raw.len());
        for s in raw {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => symbols.push(c),
                _ => {
                    return Err(D::Error::custom(format!(
                        "symbol {s:?} is not a single character"
                    )))
                }
            }
        }
        Alphabet::new(symbols).map_err(D::Error::custom)
    }
}

/// A finite word over some alphabet, as dense letter indices.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn as_slice(&self) -> &[Letter] {
        &self.0
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn extend_from_slice(&mut self, letters: &[Letter]) {
        self.0.extend_from_slice(letters);
    }

    pub fn truncate(&mut self, len: usize) {
        self.0.truncate(len);
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

/// Positions at which `pattern` starts in `text`, overlapping occurrences included.
pub fn occurrences(text: &[Letter], pattern: &[Letter]) -> Vec<usize> {
    if pattern.is_empty() || pattern.len() > text.len() {
        return Vec::new();
    }
    text.windows(pattern.len())
        .enumerate()
        .filter(|(_, w)| *w == pattern)
        .map(|(i, _)| i)
        .collect()
}

/// Length of the longest common suffix of `a` and `b`.
pub fn common_suffix_len(a: &[Letter], b: &[Letter]) -> usize {
    a.iter()
        .rev()
        .zip(b.iter().rev())
        .take_while(|(x, y)| x == y)
        .count()
}
