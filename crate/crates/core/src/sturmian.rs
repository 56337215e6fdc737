//! Characteristic Sturmian words from continued-fraction data.
//!
//! Words are produced by the standard-word recursion
//! `s₋₁ = 1`, `s₀ = 0`, `s_k = s_{k-1}^{a_k} s_{k-2}`; each `s_k` (k ≥ 0) is a
//! prefix of the next, so the recursion converges to the characteristic word
//! of slope `[0; a₁+1, a₂, a₃, …]`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::language::{harvest, LanguageTable, Provenance};
use crate::word::{Alphabet, Letter, Word};

const MAX_DOUBLINGS: usize = 8;

/// Partial quotients `(a₁, a₂, …)`.
///
/// With `repeat_last`, the final quotient repeats forever (written `2,1,...`),
/// which is how eventually constant expansions such as golden-ratio tails are
/// given without truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    quotients: Vec<u32>,
    repeat_last: bool,
}

impl ContinuedFraction {
    pub fn new(quotients: Vec<u32>) -> Result<Self> {
        Self::build(quotients, false)
    }

    /// Quotients whose last entry repeats indefinitely.
    pub fn with_repeating_tail(quotients: Vec<u32>) -> Result<Self> {
        Self::build(quotients, true)
    }

    /// The all-ones expansion (Fibonacci word).
    pub fn fibonacci() -> Self {
        ContinuedFraction {
            quotients: vec![1],
            repeat_last: true,
        }
    }

    fn build(quotients: Vec<u32>, repeat_last: bool) -> Result<Self> {
        if quotients.is_empty() {
            return Err(Error::InvalidContinuedFraction("no quotients".into()));
        }
        if quotients.contains(&0) {
            return Err(Error::InvalidContinuedFraction(
                "quotients must be positive".into(),
            ));
        }
        Ok(ContinuedFraction {
            quotients,
            repeat_last,
        })
    }

    pub fn quotients(&self) -> &[u32] {
        &self.quotients
    }

    pub fn repeats_last(&self) -> bool {
        self.repeat_last
    }

    fn quotient(&self, k: usize) -> Option<u32> {
        match self.quotients.get(k) {
            Some(&q) => Some(q),
            None if self.repeat_last => self.quotients.last().copied(),
            None => None,
        }
    }
}

impl FromStr for ContinuedFraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let repeat = parts.last() == Some(&"...");
        if repeat {
            parts.pop();
        }
        let quotients = parts
            .iter()
            .map(|p| {
                p.parse::<u32>().map_err(|_| {
                    Error::InvalidContinuedFraction(format!("{p:?} is not a positive integer"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::build(quotients, repeat)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.quotients.iter().map(|q| q.to_string()).collect();
        write!(f, "{}", parts.join(","))?;
        if self.repeat_last {
            write!(f, ",...")?;
        }
        Ok(())
    }
}

/// Length-`length` prefix of the characteristic word of `cf`, over `{0, 1}`.
pub fn characteristic_word(cf: &ContinuedFraction, length: usize) -> Result<Word> {
    if length == 0 {
        return Err(Error::OutOfRange {
            what: "length",
            value: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    let mut older: Vec<Letter> = vec![1];
    let mut current: Vec<Letter> = vec![0];
    let mut k = 0;
    while current.len() < length {
        let a = cf.quotient(k).ok_or(Error::InsufficientQuotients {
            reached: current.len(),
            needed: length,
        })?;
        let mut next = Vec::with_capacity(current.len() * a as usize + older.len());
        for _ in 0..a {
            next.extend_from_slice(&current);
        }
        next.extend_from_slice(&older);
        older = std::mem::replace(&mut current, next);
        k += 1;
    }
    current.truncate(length);
    Ok(Word::from_letters(current))
}

/// Length of the longest standard word a finite expansion produces.
fn available_length(cf: &ContinuedFraction) -> Option<usize> {
    if cf.repeat_last {
        return None;
    }
    let (mut older, mut current) = (1usize, 1usize);
    for &a in &cf.quotients {
        let next = current.saturating_mul(a as usize).saturating_add(older);
        older = current;
        current = next;
    }
    Some(current)
}

/// Exact Sturmian language up to `n_max`, read off a characteristic-word prefix.
///
/// The prefix starts at `8·n_max + 64` letters and doubles until every length
/// shows exactly `n + 1` factors; a prefix with that many distinct factors
/// has all of them.
pub fn sturmian_language(cf: &ContinuedFraction, n_max: usize) -> Result<LanguageTable> {
    if n_max == 0 {
        return Err(Error::OutOfRange {
            what: "n_max",
            value: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    let available = available_length(cf);
    let mut target = 8 * n_max + 64;
    for _ in 0..=MAX_DOUBLINGS {
        let length = match available {
            Some(avail) => target.min(avail),
            None => target,
        };
        if length < n_max + 1 {
            return Err(Error::InsufficientQuotients {
                reached: length,
                needed: n_max + 1,
            });
        }
        let prefix = characteristic_word(cf, length)?;
        let sets = harvest(std::iter::once(prefix.as_slice()), n_max);
        if sets.iter().enumerate().all(|(i, s)| s.len() == i + 2) {
            let table = LanguageTable::from_factor_sets(
                Alphabet::binary(),
                sets,
                Provenance::Sturmian {
                    quotients: cf.quotients.clone(),
                    repeat_last: cf.repeat_last,
                    prefix_length: length,
                },
            )?;
            table.validate_minimal()?;
            return Ok(table);
        }
        if available.is_some_and(|avail| length >= avail) {
            return Err(Error::InsufficientQuotients {
                reached: length,
                needed: target,
            });
        }
        target *= 2;
    }
    Err(Error::CapExceeded { cap: MAX_DOUBLINGS })
}
