//! Return words, empirical recurrence constants, and the closed-form bounds
//! for linearly recurrent shifts.
//!
//! `w` is a return word to `u` when `u` is a prefix of `w`, `wu` is in the
//! language, and `wu` contains exactly two occurrences of `u`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::language::LanguageTable;
use crate::word::{occurrences, Letter, Word};

/// Return words to `u` read off consecutive occurrences of `u` in `probe`.
///
/// Gaps shorter than `u` (overlapping occurrences) do not have `u` as a
/// prefix and are not return words under the three-clause definition; they
/// are skipped. `wu ∈ L` is checked against the table when `|wu|` fits,
/// otherwise `wu` is a factor of the probe itself.
pub fn return_words(
    table: &LanguageTable,
    probe: &[Letter],
    u: &[Letter],
) -> Result<BTreeSet<Word>> {
    if u.is_empty() {
        return Err(Error::InvalidArgument(
            "return words to the empty word".into(),
        ));
    }
    if u.len() <= table.max_length() && !table.contains(u) {
        return Err(Error::NotInLanguage(table.render(u)));
    }
    let starts = occurrences(probe, u);
    if starts.len() < 2 {
        return Err(Error::ProbeTooShort {
            word: table.render(u),
            occurrences: starts.len(),
        });
    }
    let mut out = BTreeSet::new();
    for pair in starts.windows(2) {
        let w = &probe[pair[0]..pair[1]];
        if is_return_word(table, w, u) {
            out.insert(Word::from(w));
        }
    }
    Ok(out)
}

/// Checks clauses (a)–(c) of the definition; (b) against the table when
/// `|wu| ≤ max_length`.
pub fn is_return_word(table: &LanguageTable, w: &[Letter], u: &[Letter]) -> bool {
    if !w.starts_with(u) {
        return false;
    }
    let wu: Vec<Letter> = w.iter().chain(u).copied().collect();
    if wu.len() <= table.max_length() && !table.contains(&wu) {
        return false;
    }
    occurrences(&wu, u).len() == 2
}

/// Return-word sets for every factor up to a length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnWordIndex {
    pub probe_length: usize,
    pub entries: BTreeMap<Word, BTreeSet<Word>>,
}

impl ReturnWordIndex {
    pub fn build(table: &LanguageTable, probe: &[Letter], max_u_length: usize) -> Result<Self> {
        let entries = factors_up_to(table, max_u_length)?
            .into_par_iter()
            .map(|u| return_words(table, probe, u).map(|set| (u.clone(), set)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .collect();
        Ok(ReturnWordIndex {
            probe_length: probe.len(),
            entries,
        })
    }
}

fn factors_up_to(table: &LanguageTable, max_u_length: usize) -> Result<Vec<&Word>> {
    if max_u_length == 0 || max_u_length > table.max_length() {
        return Err(Error::OutOfRange {
            what: "max_u_length",
            value: max_u_length,
            min: 1,
            max: table.max_length(),
        });
    }
    Ok((1..=max_u_length).flat_map(|n| table.factors(n)).collect())
}

/// Empirical recurrence constant `K̂ = max ℓ(w)/ℓ(u)` over probed factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceEstimate {
    pub k_hat: Ratio<u64>,
    pub probe_max_u: usize,
    /// Always true: a finite probe only bounds K from below.
    pub lower_bound_only: bool,
    /// A factor and return word attaining `k_hat`.
    pub witness: (Word, Word),
}

impl RecurrenceEstimate {
    /// `⌈K̂⌉`, the integer fed to the bound formulas.
    pub fn k_ceil(&self) -> u64 {
        self.k_hat.ceil().to_integer()
    }

    pub fn to_json(&self, table: &LanguageTable) -> serde_json::Value {
        json!({
            "k_hat": { "numer": self.k_hat.numer(), "denom": self.k_hat.denom() },
            "k_hat_decimal": *self.k_hat.numer() as f64 / *self.k_hat.denom() as f64,
            "k_ceil": self.k_ceil(),
            "probe_max_u": self.probe_max_u,
            "lower_bound_only": self.lower_bound_only,
            "witness": { "u": table.render(&self.witness.0), "w": table.render(&self.witness.1) },
        })
    }
}

/// `K̂` over every factor `u` with `ℓ(u) ≤ max_u_length`.
///
/// A factor whose consecutive occurrences always overlap has no return word
/// (none has `u` as a prefix) and constrains nothing; it is skipped.
pub fn recurrence_constant(
    table: &LanguageTable,
    probe: &[Letter],
    max_u_length: usize,
) -> Result<RecurrenceEstimate> {
    let per_factor: Vec<Option<(Ratio<u64>, Word, Word)>> = factors_up_to(table, max_u_length)?
        .into_par_iter()
        .map(|u| {
            let words = return_words(table, probe, u)?;
            Ok(words.iter().max_by_key(|w| w.len()).map(|longest| {
                (
                    Ratio::new(longest.len() as u64, u.len() as u64),
                    u.clone(),
                    longest.clone(),
                )
            }))
        })
        .collect::<Result<_>>()?;
    // first maximum in canonical factor order
    let (k_hat, u, w) = per_factor
        .into_iter()
        .flatten()
        .reduce(|best, cur| if cur.0 > best.0 { cur } else { best })
        .ok_or_else(|| Error::ProbeTooShort {
            word: table.render(&table.factors(1)[0]),
            occurrences: 1,
        })?;
    Ok(RecurrenceEstimate {
        k_hat,
        probe_max_u: max_u_length,
        lower_bound_only: true,
        witness: (u, w),
    })
}

fn check_k(k: u64) -> Result<()> {
    if k < 1 {
        return Err(Error::OutOfRange {
            what: "K",
            value: k as usize,
            min: 1,
            max: usize::MAX,
        });
    }
    Ok(())
}

fn overflow() -> Error {
    Error::InvalidArgument("bound overflows u64".into())
}

/// `2(K+1)(2K+3)²`.
///
/// For a linearly recurrent shift with recurrence constant `K` this bounds
/// `|Aut(X,σ)|`, `|Aut(X̄,σ̄)/{σ̄ⁿ}|`, and the root index `k` in `Φᵏ = σⁿ`
/// for every endomorphism `Φ` of the one-sided shift.
pub fn lr_aut_bound(k: u64) -> Result<u64> {
    check_k(k)?;
    let t = k
        .checked_mul(2)
        .and_then(|x| x.checked_add(3))
        .ok_or_else(overflow)?;
    2u64.checked_mul(k + 1)
        .and_then(|x| x.checked_mul(t))
        .and_then(|x| x.checked_mul(t))
        .ok_or_else(overflow)
}

/// `2K(2K+1)²`, the eventual bound on `s(n)` when `p(n) ≤ Kn + 1`.
pub fn cassaigne_s_bound(k: u64) -> Result<u64> {
    check_k(k)?;
    let t = k
        .checked_mul(2)
        .and_then(|x| x.checked_add(1))
        .ok_or_else(overflow)?;
    2u64.checked_mul(k)
        .and_then(|x| x.checked_mul(t))
        .and_then(|x| x.checked_mul(t))
        .ok_or_else(overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::build_language;
    use crate::substitution::catalog::*;

    fn words(table: &LanguageTable, set: &BTreeSet<Word>) -> Vec<String> {
        set.iter().map(|w| table.render(w)).collect()
    }

    #[test]
    fn formulas() {
        assert_eq!(lr_aut_bound(1).unwrap(), 100);
        assert_eq!(lr_aut_bound(2).unwrap(), 294);
        assert_eq!(lr_aut_bound(3).unwrap(), 648);
        assert_eq!(cassaigne_s_bound(1).unwrap(), 18);
        assert_eq!(cassaigne_s_bound(2).unwrap(), 100);
        assert_eq!(cassaigne_s_bound(4).unwrap(), 648);
        assert!(lr_aut_bound(0).is_err());
        assert!(cassaigne_s_bound(0).is_err());
        assert!(lr_aut_bound(u64::MAX / 2).is_err());
    }

    #[test]
    fn coherence_identity() {
        for k in 1..=100 {
            assert_eq!(lr_aut_bound(k).unwrap(), cassaigne_s_bound(k + 1).unwrap());
        }
    }

    #[test]
    fn fibonacci_return_words() {
        let fib = fibonacci();
        let table = build_language(&fib, 10).unwrap();
        let probe = fib.iterate(0, 15).unwrap();
        let rw = return_words(&table, &probe, &[0]).unwrap();
        assert_eq!(words(&table, &rw), ["0", "01"]);
        let rw = return_words(&table, &probe, &[0, 1]).unwrap();
        assert_eq!(words(&table, &rw), ["01", "010"]);
    }

    #[test]
    fn probe_too_short() {
        let fib = fibonacci();
        let table = build_language(&fib, 10).unwrap();
        let probe = table.alphabet().parse("0100").unwrap();
        let u = table.alphabet().parse("010").unwrap();
        assert!(matches!(
            return_words(&table, &probe, &u),
            Err(Error::ProbeTooShort { occurrences: 1, .. })
        ));
        assert!(matches!(
            return_words(&table, &probe, &[1, 1]),
            Err(Error::NotInLanguage(_))
        ));
    }

    #[test]
    fn fibonacci_constant_at_length_one() {
        let fib = fibonacci();
        let table = build_language(&fib, 10).unwrap();
        let probe = fib.iterate(0, 15).unwrap();
        let est = recurrence_constant(&table, &probe, 1).unwrap();
        // "1" returns via "10" and "100": 3/1
        assert!(est.k_hat >= Ratio::from_integer(2));
        assert!(est.lower_bound_only);
    }
}
